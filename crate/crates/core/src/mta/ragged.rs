//! Dead-prefix search over ragged prefixes.
//!
//! Equal-length beliefs blow up when one tape runs ahead of another: the
//! letters a fast run has emitted beyond the prefix are arbitrary, so every
//! combination is a separate member. Here each tape is extended on its own,
//! and a member records, per tape, either the known letters it has not yet
//! read or the letters it has emitted beyond the known part. A member only
//! advances while every tape has unread known letters, so closure is finite.
//!
//! An empty belief proves the ragged prefix dead; a nonempty one proves
//! nothing, which is fine for a search.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use super::belief::first_letter_groups;
use super::{ConfigPrefix, MultiTapeAutomaton, StateId, TransitionId};
use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Head {
    /// Known letters not yet read.
    Behind(Vec<Letter>),
    /// Letters written past the known part (nonempty).
    Ahead(Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Member {
    state: StateId,
    heads: Vec<Head>,
}

type Belief = BTreeSet<Member>;

/// Average belief size allowed before the search gives up on memory.
pub(super) const MEMBERS_PER_BELIEF: usize = 16;

pub(super) enum Outcome {
    Dead(ConfigPrefix),
    NotFound,
    Budget,
}

struct Search<'a> {
    m: &'a MultiTapeAutomaton,
    coacc: Vec<bool>,
    groups: Vec<Vec<(Vec<Letter>, Vec<TransitionId>)>>,
    member_limit: usize,
}

impl Search<'_> {
    fn ready(mem: &Member) -> bool {
        mem.heads
            .iter()
            .all(|h| matches!(h, Head::Behind(p) if !p.is_empty()))
    }

    /// Advances every ready member as far as the known letters allow;
    /// `None` once the belief outgrows the member limit.
    fn close(&self, members: Vec<Member>) -> Option<Belief> {
        let mut out = Belief::new();
        let mut stack = members;
        let mut seen: HashSet<Member> = HashSet::new();
        while let Some(mem) = stack.pop() {
            if !self.coacc[mem.state] || !seen.insert(mem.clone()) {
                continue;
            }
            if seen.len() > self.member_limit {
                return None;
            }
            if !Self::ready(&mem) {
                out.insert(mem);
                continue;
            }
            let firsts: Vec<Letter> = mem
                .heads
                .iter()
                .map(|h| match h {
                    Head::Behind(p) => p[0],
                    Head::Ahead(_) => unreachable!("ready members are behind on every tape"),
                })
                .collect();
            let Some((_, tids)) = self.groups[mem.state].iter().find(|(f, _)| *f == firsts) else {
                continue;
            };
            'next: for &tid in tids {
                let t = &self.m.transitions()[tid];
                let mut heads = Vec::with_capacity(mem.heads.len());
                for (h, w) in mem.heads.iter().zip(&t.words) {
                    let Head::Behind(p) = h else { unreachable!() };
                    let w = w.letters();
                    let k = p.len().min(w.len());
                    if p[..k] != w[..k] {
                        continue 'next;
                    }
                    heads.push(if w.len() > p.len() {
                        Head::Ahead(w[k..].to_vec())
                    } else {
                        Head::Behind(p[k..].to_vec())
                    });
                }
                stack.push(Member { state: t.to, heads });
            }
        }
        Some(out)
    }

    /// Reveals one more letter on tape `k`.
    fn extend(&self, b: &Belief, k: usize, a: Letter) -> Option<Belief> {
        let members = b
            .iter()
            .filter_map(|mem| {
                let mut mem = mem.clone();
                match &mut mem.heads[k] {
                    Head::Behind(p) => p.push(a),
                    Head::Ahead(o) => {
                        if o[0] != a {
                            return None;
                        }
                        o.remove(0);
                        if o.is_empty() {
                            mem.heads[k] = Head::Behind(Vec::new());
                        }
                    }
                }
                Some(mem)
            })
            .collect();
        self.close(members)
    }
}

fn weight(b: &Belief) -> usize {
    b.iter()
        .map(|mem| {
            1 + mem
                .heads
                .iter()
                .map(|h| match h {
                    Head::Ahead(o) => o.len(),
                    Head::Behind(_) => 0,
                })
                .sum::<usize>()
        })
        .sum()
}

/// Tapes some member needs more letters on. Revealing any other tape only
/// queues letters, so the search never does that.
fn waiting_tapes(b: &Belief, d: usize) -> Vec<bool> {
    let mut out = vec![false; d];
    for mem in b {
        for (k, h) in mem.heads.iter().enumerate() {
            if !matches!(h, Head::Behind(p) if !p.is_empty()) {
                out[k] = true;
            }
        }
    }
    out
}

/// Best-first search for a ragged dead extension of `start` (read from
/// `q`), each tape at most `max_len` letters long in total.
pub(super) fn find_dead_ragged(
    m: &MultiTapeAutomaton,
    q: StateId,
    start: &ConfigPrefix,
    max_len: usize,
    budget: usize,
) -> Outcome {
    let s = Search {
        m,
        coacc: m.coaccessible_states(),
        groups: first_letter_groups(m),
        member_limit: budget.saturating_mul(MEMBERS_PER_BELIEF),
    };
    let Some(init) = s.close(vec![Member {
        state: q,
        heads: start
            .tapes()
            .iter()
            .map(|w| Head::Behind(w.letters().to_vec()))
            .collect(),
    }]) else {
        return Outcome::Budget;
    };
    if init.is_empty() {
        return Outcome::Dead(start.clone());
    }
    let moves: Vec<(usize, Letter)> = m
        .alphabets()
        .iter()
        .enumerate()
        .flat_map(|(k, a)| a.letters_by_digit().into_iter().map(move |l| (k, l)))
        .collect();
    // node: (belief, tapes)
    let mut nodes: Vec<(Belief, Vec<Vec<Letter>>)> = vec![(
        init,
        start.tapes().iter().map(|w| w.letters().to_vec()).collect(),
    )];
    let mut seen: HashSet<Belief> = HashSet::from([nodes[0].0.clone()]);
    let mut stored = nodes[0].0.len();
    let mut heap = BinaryHeap::from([Reverse((weight(&nodes[0].0), Reverse(0usize), 0usize))]);
    while let Some(Reverse((_, Reverse(total), id))) = heap.pop() {
        let waiting = waiting_tapes(&nodes[id].0, m.tapes());
        for &(k, a) in &moves {
            if !waiting[k] || nodes[id].1[k].len() >= max_len {
                continue;
            }
            let Some(nb) = s.extend(&nodes[id].0, k, a) else {
                return Outcome::Budget;
            };
            let mut tapes = nodes[id].1.clone();
            tapes[k].push(a);
            if nb.is_empty() {
                return Outcome::Dead(ConfigPrefix::ragged(tapes.into_iter().map(Word).collect()));
            }
            if seen.insert(nb.clone()) {
                stored += nb.len();
                if seen.len() > budget || stored > MEMBERS_PER_BELIEF * budget {
                    return Outcome::Budget;
                }
                heap.push(Reverse((weight(&nb), Reverse(total + 1), nodes.len())));
                nodes.push((nb, tapes));
            }
        }
    }
    Outcome::NotFound
}
