//! Multi-tape automata: validation, acceptance of eventually periodic
//! configurations, dead-prefix detection and three-valued universality
//! certificates.

mod belief;
mod pad;
mod ragged;
mod runs;
mod verdict;

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::words::{Letter, TapeAlphabet, UltimatelyPeriodicSeq, Word};

pub use belief::{
    check_common_universal_prefix, check_universal, check_universal_prefix, find_dead_prefix,
    product_symbols, search_universal_prefix,
};
pub use pad::{pad_pow2, Padded};
pub use runs::{count_accepting_runs, cut_runs, RunCount};
pub use verdict::{Bounds, Verdict, Verdict3, Witness};

pub type StateId = usize;
pub type TransitionId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub to: StateId,
    pub words: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTapeAutomaton {
    alphabets: Vec<TapeAlphabet>,
    states: Vec<String>,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<TransitionId>>,
}

impl MultiTapeAutomaton {
    pub fn new(
        alphabets: Vec<TapeAlphabet>,
        states: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let mut outgoing = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            if let Some(out) = outgoing.get_mut(t.from) {
                out.push(i);
            }
        }
        let m = MultiTapeAutomaton {
            alphabets,
            states,
            transitions,
            outgoing,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds from named states and token strings, e.g. `("X", "X", &["0", "22"])`.
    pub fn from_spec(
        alphabets: &[&[&str]],
        states: &[&str],
        transitions: &[(&str, &str, &[&str])],
    ) -> Result<Self> {
        let alphabets = alphabets
            .iter()
            .map(|a| TapeAlphabet::new(a.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let lookup = |t: usize, s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::UnknownState {
                    transition: t,
                    state: s.to_string(),
                })
        };
        let mut ts = Vec::with_capacity(transitions.len());
        for (i, (from, to, words)) in transitions.iter().enumerate() {
            if words.len() != alphabets.len() {
                return Err(Error::TapeCountMismatch {
                    transition: i,
                    expected: alphabets.len(),
                    found: words.len(),
                });
            }
            let words = words
                .iter()
                .zip(&alphabets)
                .map(|(w, a)| {
                    a.parse_word(w)
                        .map_err(|e| Error::UnknownSymbolInTransition {
                            transition: i,
                            detail: e.to_string(),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            ts.push(Transition {
                from: lookup(i, from)?,
                to: lookup(i, to)?,
                words,
            });
        }
        Self::new(alphabets, names, ts)
    }

    /// Checks every structural invariant; errors name the offending transition.
    pub fn validate(&self) -> Result<()> {
        if self.alphabets.is_empty() {
            return Err(Error::NoTapes);
        }
        if self.states.is_empty() {
            return Err(Error::NoStates);
        }
        let mut seen = HashSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                return Err(Error::DuplicateState(s.clone()));
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            for s in [t.from, t.to] {
                if s >= self.states.len() {
                    return Err(Error::UnknownState {
                        transition: i,
                        state: format!("#{s}"),
                    });
                }
            }
            if t.words.len() != self.tapes() {
                return Err(Error::TapeCountMismatch {
                    transition: i,
                    expected: self.tapes(),
                    found: t.words.len(),
                });
            }
            for (k, (w, a)) in t.words.iter().zip(&self.alphabets).enumerate() {
                if w.is_empty() {
                    return Err(Error::EmptyWordTransition {
                        transition: i,
                        tape: k + 1,
                    });
                }
                a.check(w).map_err(|e| Error::UnknownSymbolInTransition {
                    transition: i,
                    detail: format!("tape {}: {e}", k + 1),
                })?;
            }
        }
        Ok(())
    }

    pub fn tapes(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[TapeAlphabet] {
        &self.alphabets
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: StateId) -> &[TransitionId] {
        &self.outgoing[q]
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::NoSuchState(name.to_string()))
    }

    pub fn render_words(&self, words: &[Word]) -> String {
        words
            .iter()
            .zip(&self.alphabets)
            .map(|(w, a)| a.display(w))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// States from which an infinite run exists: repeatedly discard states
    /// without a successor among the remaining ones.
    pub fn coaccessible_states(&self) -> Vec<bool> {
        let mut alive = vec![true; self.states.len()];
        loop {
            let mut changed = false;
            for q in 0..self.states.len() {
                if alive[q]
                    && !self.outgoing[q]
                        .iter()
                        .any(|&t| alive[self.transitions[t].to])
                {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    fn check_config(&self, c: &[UltimatelyPeriodicSeq]) -> Result<()> {
        if c.len() != self.tapes() {
            return Err(Error::ConfigTapeMismatch {
                expected: self.tapes(),
                found: c.len(),
            });
        }
        for (s, a) in c.iter().zip(&self.alphabets) {
            s.check(a)?;
        }
        Ok(())
    }
}

/// Finite configuration prefix, one word per tape.
///
/// Prefixes built with [`ConfigPrefix::new`] have equal tape lengths.
/// [`ConfigPrefix::ragged`] allows shorter tapes, whose positions beyond
/// their length are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigPrefix {
    tapes: Vec<Word>,
}

impl ConfigPrefix {
    pub fn new(tapes: Vec<Word>) -> Result<Self> {
        if let Some(first) = tapes.first() {
            if tapes.iter().any(|w| w.len() != first.len()) {
                return Err(Error::RaggedPrefix);
            }
        }
        Ok(ConfigPrefix { tapes })
    }

    pub fn ragged(tapes: Vec<Word>) -> Self {
        ConfigPrefix { tapes }
    }

    pub fn empty(d: usize) -> Self {
        ConfigPrefix {
            tapes: vec![Word::empty(); d],
        }
    }

    /// From a sequence of product symbols.
    pub fn from_symbols(d: usize, symbols: &[Vec<Letter>]) -> Self {
        let tapes = (0..d)
            .map(|k| Word(symbols.iter().map(|s| s[k]).collect()))
            .collect();
        ConfigPrefix { tapes }
    }

    /// Parses `"w_1|w_2|…"` against the automaton's tape alphabets.
    pub fn parse(m: &MultiTapeAutomaton, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != m.tapes() {
            return Err(Error::ConfigTapeMismatch {
                expected: m.tapes(),
                found: parts.len(),
            });
        }
        let tapes = parts
            .iter()
            .zip(m.alphabets())
            .map(|(p, a)| a.parse_word(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConfigPrefix { tapes })
    }

    pub fn tapes(&self) -> &[Word] {
        &self.tapes
    }

    pub fn is_ragged(&self) -> bool {
        self.tapes.windows(2).any(|w| w[0].len() != w[1].len())
    }

    /// Longest tape length.
    pub fn len(&self) -> usize {
        self.tapes.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn concat(&self, other: &ConfigPrefix) -> ConfigPrefix {
        ConfigPrefix {
            tapes: self
                .tapes
                .iter()
                .zip(&other.tapes)
                .map(|(a, b)| a.concat(b))
                .collect(),
        }
    }

    /// The product symbols, for equal-length prefixes.
    pub fn symbols(&self) -> Vec<Vec<Letter>> {
        let n = self.tapes.first().map_or(0, Word::len);
        (0..n)
            .map(|i| self.tapes.iter().map(|w| w.letters()[i]).collect())
            .collect()
    }

    pub fn render(&self, m: &MultiTapeAutomaton) -> String {
        m.render_words(&self.tapes)
    }
}

/// An eventually periodic run: `stem` followed by `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub start: StateId,
    pub stem: Vec<TransitionId>,
    pub cycle: Vec<TransitionId>,
}

impl Lasso {
    /// The configuration read along the lasso, one sequence per tape.
    pub fn configuration(&self, m: &MultiTapeAutomaton) -> Vec<UltimatelyPeriodicSeq> {
        (0..m.tapes())
            .map(|k| {
                let read = |ids: &[TransitionId]| {
                    Word(
                        ids.iter()
                            .flat_map(|&t| m.transitions()[t].words[k].letters().to_vec())
                            .collect(),
                    )
                };
                UltimatelyPeriodicSeq::new(read(&self.stem), read(&self.cycle))
                    .expect("cycle is nonempty and transitions emit letters")
            })
            .collect()
    }
}

/// Partial run with per-tape head positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPrefix {
    pub start: StateId,
    pub steps: Vec<TransitionId>,
    pub head_pos: Vec<usize>,
}

impl RunPrefix {
    pub fn new(m: &MultiTapeAutomaton, start: StateId, steps: Vec<TransitionId>) -> Result<Self> {
        let mut head_pos = vec![0; m.tapes()];
        let mut at = start;
        for (i, &t) in steps.iter().enumerate() {
            let tr = m.transitions().get(t).ok_or(Error::DisconnectedPath(i))?;
            if tr.from != at {
                return Err(Error::DisconnectedPath(i));
            }
            for (h, w) in head_pos.iter_mut().zip(&tr.words) {
                *h += w.len();
            }
            at = tr.to;
        }
        Ok(RunPrefix {
            start,
            steps,
            head_pos,
        })
    }

    pub fn end(&self, m: &MultiTapeAutomaton) -> StateId {
        self.steps
            .last()
            .map_or(self.start, |&t| m.transitions()[t].to)
    }

    /// Distance between the most advanced and the least advanced head.
    pub fn head_gap(&self) -> usize {
        let max = self.head_pos.iter().max().copied().unwrap_or(0);
        let min = self.head_pos.iter().min().copied().unwrap_or(0);
        max - min
    }
}

type Node = (StateId, Vec<usize>);

struct QuotientGraph<'a> {
    m: &'a MultiTapeAutomaton,
    c: &'a [UltimatelyPeriodicSeq],
}

impl QuotientGraph<'_> {
    fn matches(&self, pos: &[usize], t: &Transition) -> bool {
        t.words.iter().zip(pos).zip(self.c).all(|((w, &p), s)| {
            w.letters()
                .iter()
                .enumerate()
                .all(|(j, &l)| s.at(p + j) == l)
        })
    }

    fn successors(&self, node: &Node) -> Vec<(TransitionId, Node)> {
        let (q, pos) = node;
        self.m
            .outgoing(*q)
            .iter()
            .filter_map(|&tid| {
                let t = &self.m.transitions()[tid];
                self.matches(pos, t).then(|| {
                    let next = pos
                        .iter()
                        .zip(&t.words)
                        .zip(self.c)
                        .map(|((&p, w), s)| s.normalize(p + w.len()))
                        .collect();
                    (tid, (t.to, next))
                })
            })
            .collect()
    }

    /// Depth-first search for a reachable cycle; returns it as a lasso.
    fn find_lasso(&self, start: StateId) -> Option<Lasso> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            OnStack,
            Done,
        }
        let root: Node = (start, vec![0; self.m.tapes()]);
        let mut marks: HashMap<Node, Mark> = HashMap::new();
        // (node, successors, next successor index, transition taken to reach node)
        let mut stack: Vec<(Node, Vec<(TransitionId, Node)>, usize, Option<TransitionId>)> =
            Vec::new();
        marks.insert(root.clone(), Mark::OnStack);
        let succ = self.successors(&root);
        stack.push((root, succ, 0, None));
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let (tid, child) = top.1[top.2].clone();
                top.2 += 1;
                match marks.get(&child) {
                    Some(Mark::OnStack) => {
                        let at = stack.iter().position(|f| f.0 == child).expect("on stack");
                        let path: Vec<TransitionId> =
                            stack[1..].iter().map(|f| f.3.expect("non-root")).collect();
                        let mut cycle = path[at..].to_vec();
                        cycle.push(tid);
                        return Some(Lasso {
                            start,
                            stem: path[..at].to_vec(),
                            cycle,
                        });
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child.clone(), Mark::OnStack);
                        let succ = self.successors(&child);
                        stack.push((child, succ, 0, Some(tid)));
                    }
                }
            } else {
                let (node, ..) = stack.pop().expect("nonempty");
                marks.insert(node, Mark::Done);
            }
        }
        None
    }
}

/// True iff some infinite run from `q` reads exactly `c`.
///
/// Decided on the finite graph of (state, normalized head positions): a run
/// exists iff a cycle is reachable from `(q, 0, …, 0)`.
pub fn accepts_up(m: &MultiTapeAutomaton, q: StateId, c: &[UltimatelyPeriodicSeq]) -> Result<bool> {
    Ok(accepting_lasso(m, q, c)?.is_some())
}

/// An accepting run of `c` from `q` in lasso form, if any.
pub fn accepting_lasso(
    m: &MultiTapeAutomaton,
    q: StateId,
    c: &[UltimatelyPeriodicSeq],
) -> Result<Option<Lasso>> {
    m.check_config(c)?;
    if q >= m.states().len() {
        return Err(Error::NoSuchState(format!("#{q}")));
    }
    Ok(QuotientGraph { m, c }.find_lasso(q))
}

/// True iff no configuration extending `w` is `q`-accepted.
///
/// Explores partial runs that agree with `w` on every constrained position;
/// `w` is live iff one of them reaches a coaccessible state with each head at
/// or past the end of its tape.
pub fn is_dead_prefix(m: &MultiTapeAutomaton, q: StateId, w: &ConfigPrefix) -> bool {
    let coacc = m.coaccessible_states();
    let lens: Vec<usize> = w.tapes().iter().map(Word::len).collect();
    let mut seen: HashSet<Node> = HashSet::new();
    let mut stack: Vec<Node> = vec![(q, vec![0; m.tapes()])];
    while let Some((s, heads)) = stack.pop() {
        if !seen.insert((s, heads.clone())) {
            continue;
        }
        if !coacc[s] {
            continue;
        }
        if heads.iter().zip(&lens).all(|(h, n)| h >= n) {
            return false;
        }
        for &tid in m.outgoing(s) {
            let t = &m.transitions()[tid];
            let consistent = t
                .words
                .iter()
                .zip(&heads)
                .zip(w.tapes())
                .all(|((word, &h), tape)| {
                    word.letters()
                        .iter()
                        .enumerate()
                        .all(|(j, &l)| tape.letters().get(h + j).is_none_or(|&x| x == l))
                });
            if consistent {
                let next = heads
                    .iter()
                    .zip(&t.words)
                    .zip(&lens)
                    .map(|((&h, word), &n)| (h + word.len()).min(n))
                    .collect();
                stack.push((t.to, next));
            }
        }
    }
    true
}
