//! Belief-state searches.
//!
//! After reading a prefix `x` of length `n`, the belief of a start state is
//! the set of minimal partial runs consistent with `x` whose heads are all at
//! or past `n`, abstracted to (end state, letters emitted beyond `n` per
//! tape). Runs ending in states without infinite continuation are dropped,
//! so `x` is dead iff its belief is empty.
//!
//! Exact beliefs decide deadness of bounded prefixes. Universality needs the
//! whole reachable family of beliefs, which is finite only when overhangs
//! stay bounded; saturation therefore runs under an overhang cap and only
//! certifies when the cap was never hit.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use sha2::{Digest, Sha256};

use super::ragged::{find_dead_ragged, Outcome, MEMBERS_PER_BELIEF};
use super::verdict::{Bounds, Verdict3, Witness};
use super::{ConfigPrefix, MultiTapeAutomaton, StateId, TransitionId};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Member {
    state: StateId,
    overhang: Vec<Vec<Letter>>,
}

type Belief = BTreeSet<Member>;
/// One belief per tracked start state.
type Beliefs = Vec<Belief>;

/// All product symbols, lexicographic by digit values.
pub fn product_symbols(m: &MultiTapeAutomaton) -> Vec<Vec<Letter>> {
    let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
    for a in m.alphabets() {
        let letters = a.letters_by_digit();
        out = out
            .into_iter()
            .flat_map(|p| {
                letters.iter().map(move |&l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out
}

struct Engine<'a> {
    m: &'a MultiTapeAutomaton,
    coacc: Vec<bool>,
    symbols: Vec<Vec<Letter>>,
    /// Largest belief a step may produce.
    member_limit: usize,
    /// Per state, live transitions grouped by their tuple of first letters.
    groups: Vec<Vec<(Vec<Letter>, Vec<TransitionId>)>>,
}

/// Why a step gave up.
enum Halt {
    Overhang,
    Members,
}

enum DeadSearch {
    Found(Vec<Vec<Letter>>),
    NotFound,
    Budget,
}

enum Saturation {
    Closed { beliefs: usize, digest: String },
    Empty(Vec<Vec<Letter>>),
    Truncated,
    Budget,
}

impl<'a> Engine<'a> {
    /// Beliefs may hold as many members as the whole budget allows.
    fn new(m: &'a MultiTapeAutomaton, max_beliefs: usize) -> Self {
        Engine {
            m,
            coacc: m.coaccessible_states(),
            symbols: product_symbols(m),
            member_limit: max_beliefs.saturating_mul(MEMBERS_PER_BELIEF),
            groups: first_letter_groups(m),
        }
    }

    fn initial(&self, q: StateId) -> Belief {
        let mut b = Belief::new();
        if self.coacc[q] {
            b.insert(Member {
                state: q,
                overhang: vec![Vec::new(); self.m.tapes()],
            });
        }
        b
    }

    /// Successor belief on one product symbol; halts when a member would
    /// exceed `cap` or the belief outgrows the member limit.
    fn step(&self, b: &Belief, sym: &[Letter], cap: Option<usize>) -> Result<Belief, Halt> {
        let mut out = Belief::new();
        let mut push = |state: StateId, mut overhang: Vec<Vec<Letter>>| -> Result<(), Halt> {
            if overhang.iter().zip(sym).any(|(o, &a)| o[0] != a) {
                return Ok(());
            }
            for o in overhang.iter_mut() {
                o.remove(0);
            }
            if cap.is_some_and(|c| overhang.iter().any(|o| o.len() > c)) {
                return Err(Halt::Overhang);
            }
            out.insert(Member { state, overhang });
            if out.len() > self.member_limit {
                return Err(Halt::Members);
            }
            Ok(())
        };
        for mem in b {
            if mem.overhang.iter().all(|o| !o.is_empty()) {
                push(mem.state, mem.overhang.clone())?;
                continue;
            }
            if mem
                .overhang
                .iter()
                .zip(sym)
                .any(|(o, &a)| o.first().is_some_and(|&x| x != a))
            {
                continue;
            }
            // tapes without overhang read the transition's first letter
            let fits = |firsts: &[Letter]| {
                mem.overhang
                    .iter()
                    .zip(firsts)
                    .zip(sym)
                    .all(|((o, &f), &a)| !o.is_empty() || f == a)
            };
            let tids = self.groups[mem.state]
                .iter()
                .filter(|(f, _)| fits(f))
                .flat_map(|(_, ts)| ts);
            for &tid in tids {
                let t = &self.m.transitions()[tid];
                let overhang = mem
                    .overhang
                    .iter()
                    .zip(&t.words)
                    .map(|(o, w)| [o.as_slice(), w.letters()].concat())
                    .collect();
                push(t.to, overhang)?;
            }
        }
        Ok(out)
    }

    /// The belief after reading `prefix`, unless it outgrows the limit.
    fn consume(&self, b: &Belief, prefix: &ConfigPrefix) -> Option<Belief> {
        prefix
            .symbols()
            .iter()
            .try_fold(b.clone(), |acc, sym| self.step(&acc, sym, None).ok())
    }

    fn fits(b: &Belief, cap: usize) -> bool {
        b.iter().all(|m| m.overhang.iter().all(|o| o.len() <= cap))
    }

    /// Shortest, then lexicographically first, dead extension of `start`.
    fn find_dead(&self, start: &Belief, max_len: usize, budget: usize) -> DeadSearch {
        self.find_dead_capped(start, max_len, budget, usize::MAX)
    }

    /// As `find_dead`, also giving up once the stored beliefs hold more than
    /// `members` members in total.
    fn find_dead_capped(
        &self,
        start: &Belief,
        max_len: usize,
        budget: usize,
        members: usize,
    ) -> DeadSearch {
        if start.is_empty() {
            return DeadSearch::Found(Vec::new());
        }
        let mut seen: HashSet<Belief> = HashSet::new();
        seen.insert(start.clone());
        let mut level: Vec<(Belief, Vec<Vec<Letter>>)> = vec![(start.clone(), Vec::new())];
        let mut stored = start.len();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (b, path) in &level {
                for sym in &self.symbols {
                    let Ok(nb) = self.step(b, sym, None) else {
                        return DeadSearch::Budget;
                    };
                    if nb.is_empty() {
                        let mut p = path.clone();
                        p.push(sym.clone());
                        return DeadSearch::Found(p);
                    }
                    if seen.insert(nb.clone()) {
                        stored += nb.len();
                        if seen.len() > budget || stored > members {
                            return DeadSearch::Budget;
                        }
                        let mut p = path.clone();
                        p.push(sym.clone());
                        next.push((nb, p));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        DeadSearch::NotFound
    }

    /// Explores every belief tuple reachable from `start` under the cap.
    fn saturate(&self, start: &Beliefs, cap: usize, budget: usize) -> Saturation {
        if start.iter().any(|b| b.is_empty()) {
            return Saturation::Empty(Vec::new());
        }
        if !start.iter().all(|b| Self::fits(b, cap)) {
            return Saturation::Truncated;
        }
        let mut ids: HashMap<Beliefs, usize> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut order: Vec<Beliefs> = vec![start.clone()];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut queue = VecDeque::from([0usize]);
        let mut stored: usize = start.iter().map(BTreeSet::len).sum();
        while let Some(id) = queue.pop_front() {
            for (si, sym) in self.symbols.iter().enumerate() {
                let mut nb = Vec::with_capacity(order[id].len());
                for b in &order[id] {
                    match self.step(b, sym, Some(cap)) {
                        Ok(x) => nb.push(x),
                        Err(Halt::Overhang) => return Saturation::Truncated,
                        Err(Halt::Members) => return Saturation::Budget,
                    }
                }
                if nb.iter().any(|b| b.is_empty()) {
                    let mut path = vec![sym.clone()];
                    let mut at = id;
                    while let Some((p, s)) = parent[at] {
                        path.push(self.symbols[s].clone());
                        at = p;
                    }
                    path.reverse();
                    return Saturation::Empty(path);
                }
                if !ids.contains_key(&nb) {
                    stored += nb.iter().map(BTreeSet::len).sum::<usize>();
                    if order.len() >= budget || stored > MEMBERS_PER_BELIEF * budget {
                        return Saturation::Budget;
                    }
                    ids.insert(nb.clone(), order.len());
                    parent.push(Some((id, si)));
                    queue.push_back(order.len());
                    order.push(nb);
                }
            }
        }
        Saturation::Closed {
            beliefs: order.len(),
            digest: digest(&order),
        }
    }

    fn prefix_of(&self, symbols: &[Vec<Letter>]) -> ConfigPrefix {
        ConfigPrefix::from_symbols(self.m.tapes(), symbols)
    }
}

pub(super) fn first_letter_groups(
    m: &MultiTapeAutomaton,
) -> Vec<Vec<(Vec<Letter>, Vec<TransitionId>)>> {
    let coacc = m.coaccessible_states();
    (0..m.states().len())
        .map(|q| {
            let mut groups: BTreeMap<Vec<Letter>, Vec<TransitionId>> = BTreeMap::new();
            for &tid in m.outgoing(q) {
                let t = &m.transitions()[tid];
                if coacc[t.to] {
                    let firsts = t.words.iter().map(|w| w.letters()[0]).collect();
                    groups.entry(firsts).or_default().push(tid);
                }
            }
            groups.into_iter().collect()
        })
        .collect()
}

fn digest(family: &[Beliefs]) -> String {
    let mut sorted: Vec<&Beliefs> = family.iter().collect();
    sorted.sort();
    let mut h = Sha256::new();
    for bs in sorted {
        h.update(b"(");
        for b in bs {
            h.update(b"{");
            for mem in b {
                h.update((mem.state as u64).to_le_bytes());
                for o in &mem.overhang {
                    h.update((o.len() as u64).to_le_bytes());
                    for l in o {
                        h.update(l.to_le_bytes());
                    }
                }
            }
            h.update(b"}");
        }
        h.update(b")");
    }
    hex::encode(h.finalize())
}

/// The shortest-first search gets a tenth of the belief budget (and the
/// whole budget counted in members); when it runs out, the ragged search
/// takes over.
fn exact_budget(bounds: Bounds) -> usize {
    (bounds.max_beliefs / 10).max(1)
}

fn unknown_from(sat: Saturation, bounds: Bounds) -> Verdict3 {
    let note = match sat {
        Saturation::Truncated => format!("overhang exceeded cap {}", bounds.overhang_cap),
        Saturation::Budget => format!("more than {} belief states", bounds.max_beliefs),
        Saturation::Empty(p) => format!(
            "dead extension of length {} beyond the search bound",
            p.len()
        ),
        Saturation::Closed { .. } => unreachable!("closed saturation is a certificate"),
    };
    Verdict3::unknown(bounds, note)
}

/// Shortest dead prefix from `q` of length at most `max_len`, canonical
/// order. Exact (no overhang cap).
pub fn find_dead_prefix(
    m: &MultiTapeAutomaton,
    q: StateId,
    max_len: usize,
    max_beliefs: usize,
) -> Result<Option<ConfigPrefix>> {
    let e = Engine::new(m, max_beliefs);
    match e.find_dead(&e.initial(q), max_len, max_beliefs) {
        DeadSearch::Found(p) => Ok(Some(e.prefix_of(&p))),
        DeadSearch::NotFound => Ok(None),
        DeadSearch::Budget => Err(Error::BeliefBudget(max_beliefs)),
    }
}

/// Is every configuration `q`-accepted?
///
/// `No` comes only from the exact dead-prefix search; `Yes` only from a
/// saturation that closed without hitting the overhang cap.
pub fn check_universal(m: &MultiTapeAutomaton, q: StateId, bounds: Bounds) -> Verdict3 {
    let e = Engine::new(m, bounds.max_beliefs);
    let init = e.initial(q);
    match e.find_dead_capped(
        &init,
        bounds.max_prefix_len,
        exact_budget(bounds),
        bounds.max_beliefs,
    ) {
        DeadSearch::Found(p) => return Verdict3::no(Witness::DeadPrefix(e.prefix_of(&p)), bounds),
        DeadSearch::NotFound => {}
        DeadSearch::Budget => {
            let empty = ConfigPrefix::empty(m.tapes());
            if let Outcome::Dead(p) =
                find_dead_ragged(m, q, &empty, bounds.max_prefix_len, bounds.max_beliefs)
            {
                return Verdict3::no(Witness::DeadPrefix(p), bounds);
            }
        }
    }
    match e.saturate(&vec![init], bounds.overhang_cap, bounds.max_beliefs) {
        Saturation::Closed { beliefs, digest } => {
            Verdict3::yes(Witness::Certificate { digest, beliefs }, bounds)
        }
        other => unknown_from(other, bounds),
    }
}

/// Is every extension of `x` `q`-accepted?
pub fn check_universal_prefix(
    m: &MultiTapeAutomaton,
    q: StateId,
    x: &ConfigPrefix,
    bounds: Bounds,
) -> Verdict3 {
    let e = Engine::new(m, bounds.max_beliefs);
    let Some(b) = e.consume(&e.initial(q), x) else {
        return Verdict3::unknown(bounds, "belief after the prefix exceeds the member budget");
    };
    match e.find_dead_capped(
        &b,
        bounds.max_ext_len,
        exact_budget(bounds),
        bounds.max_beliefs,
    ) {
        DeadSearch::Found(p) => {
            let extension = e.prefix_of(&p);
            return Verdict3::no(
                Witness::DeadExtension {
                    prefix: x.concat(&extension),
                    extension,
                },
                bounds,
            );
        }
        DeadSearch::NotFound => {}
        DeadSearch::Budget => {
            let max_len = x.len() + bounds.max_ext_len;
            if let Outcome::Dead(prefix) = find_dead_ragged(m, q, x, max_len, bounds.max_beliefs) {
                let extension = ConfigPrefix::ragged(
                    prefix
                        .tapes()
                        .iter()
                        .zip(x.tapes())
                        .map(|(p, x)| Word(p.letters()[x.len()..].to_vec()))
                        .collect(),
                );
                return Verdict3::no(Witness::DeadExtension { prefix, extension }, bounds);
            }
        }
    }
    match e.saturate(&vec![b], bounds.overhang_cap, bounds.max_beliefs) {
        Saturation::Closed { beliefs, digest } => {
            Verdict3::yes(Witness::Certificate { digest, beliefs }, bounds)
        }
        other => unknown_from(other, bounds),
    }
}

/// First prefix (by length, then digit order) that is universal for every
/// state in `starts` simultaneously. Non-existence is never certified.
fn search_common(
    m: &MultiTapeAutomaton,
    starts: &[StateId],
    bounds: Bounds,
) -> (Option<ConfigPrefix>, Verdict3) {
    let e = Engine::new(m, bounds.max_beliefs);
    let start: Beliefs = starts.iter().map(|&q| e.initial(q)).collect();
    let mut seen: HashSet<Beliefs> = HashSet::from([start.clone()]);
    let mut level = vec![(start, Vec::<Vec<Letter>>::new())];
    let mut truncated = false;
    let mut work = 0usize;
    let mut stored = 0usize;
    for len in 0..=bounds.max_prefix_len {
        for (bs, path) in &level {
            if bs.iter().any(|b| b.is_empty()) {
                continue;
            }
            let has_dead_ext = bs.iter().any(|b| {
                matches!(
                    e.find_dead_capped(
                        b,
                        bounds.max_ext_len,
                        exact_budget(bounds),
                        bounds.max_beliefs
                    ),
                    DeadSearch::Found(_)
                )
            });
            if has_dead_ext {
                continue;
            }
            work += 1;
            match e.saturate(bs, bounds.overhang_cap, bounds.max_beliefs) {
                Saturation::Closed { beliefs, digest } => {
                    let prefix = e.prefix_of(path);
                    let v = Verdict3::yes(
                        Witness::UniversalPrefix {
                            prefix: prefix.clone(),
                            digest,
                            beliefs,
                        },
                        bounds,
                    );
                    return (Some(prefix), v);
                }
                Saturation::Truncated | Saturation::Budget => truncated = true,
                Saturation::Empty(_) => {}
            }
            if work > bounds.max_beliefs {
                return (None, Verdict3::unknown(bounds, "belief budget exhausted"));
            }
        }
        if len == bounds.max_prefix_len {
            break;
        }
        let mut next = Vec::new();
        for (bs, path) in &level {
            if bs.iter().any(|b| b.is_empty()) {
                continue;
            }
            for sym in &e.symbols {
                let Ok(nb) = bs
                    .iter()
                    .map(|b| e.step(b, sym, None))
                    .collect::<Result<Beliefs, Halt>>()
                else {
                    return (None, Verdict3::unknown(bounds, "belief budget exhausted"));
                };
                if nb.iter().any(|b| b.is_empty()) {
                    continue;
                }
                if seen.insert(nb.clone()) {
                    stored += nb.iter().map(BTreeSet::len).sum::<usize>();
                    if seen.len() > bounds.max_beliefs
                        || stored > MEMBERS_PER_BELIEF * bounds.max_beliefs
                    {
                        return (None, Verdict3::unknown(bounds, "belief budget exhausted"));
                    }
                    let mut p = path.clone();
                    p.push(sym.clone());
                    next.push((nb, p));
                }
            }
        }
        level = next;
    }
    let note = if truncated {
        "no certified prefix within bounds (some saturations hit the overhang cap)"
    } else {
        "no certified prefix within bounds"
    };
    (None, Verdict3::unknown(bounds, note))
}

/// Does `q` admit a universal prefix?
pub fn search_universal_prefix(
    m: &MultiTapeAutomaton,
    q: StateId,
    bounds: Bounds,
) -> (Option<ConfigPrefix>, Verdict3) {
    search_common(m, &[q], bounds)
}

/// Do `q` and `r` admit a common universal prefix?
pub fn check_common_universal_prefix(
    m: &MultiTapeAutomaton,
    q: StateId,
    r: StateId,
    bounds: Bounds,
) -> (Option<ConfigPrefix>, Verdict3) {
    search_common(m, &[q, r], bounds)
}
