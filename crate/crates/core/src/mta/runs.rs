//! Counting and enumerating the runs that read a fixed eventually periodic
//! configuration.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{MultiTapeAutomaton, Node, QuotientGraph, RunPrefix, StateId, TransitionId};
use crate::error::{Error, Result};
use crate::words::UltimatelyPeriodicSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunCount {
    Finite(u64),
    Infinite,
}

impl RunCount {
    pub fn is_zero(&self) -> bool {
        *self == RunCount::Finite(0)
    }
}

/// Number of distinct infinite runs from `q` reading exactly `c`.
///
/// Runs are paths in the finite graph of (state, normalized heads); their
/// number is finite iff every live node on a cycle has a single live
/// outgoing edge.
pub fn count_accepting_runs(
    m: &MultiTapeAutomaton,
    q: StateId,
    c: &[UltimatelyPeriodicSeq],
) -> Result<RunCount> {
    m.check_config(c)?;
    let qg = QuotientGraph { m, c };
    let root: Node = (q, vec![0; m.tapes()]);

    let mut g: DiGraph<(), TransitionId> = DiGraph::new();
    let mut ids: HashMap<Node, NodeIndex> = HashMap::new();
    ids.insert(root.clone(), g.add_node(()));
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(node) = queue.pop_front() {
        let from = ids[&node];
        for (tid, child) in qg.successors(&node) {
            let to = *ids.entry(child.clone()).or_insert_with(|| {
                queue.push_back(child);
                g.add_node(())
            });
            g.add_edge(from, to, tid);
        }
    }

    // discard nodes without an infinite continuation
    let mut live = vec![true; g.node_count()];
    loop {
        let mut changed = false;
        for v in g.node_indices() {
            if live[v.index()] && !g.neighbors(v).any(|w| live[w.index()]) {
                live[v.index()] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let root = ids[&root];
    if !live[root.index()] {
        return Ok(RunCount::Finite(0));
    }
    let live_out = |v: NodeIndex| g.neighbors(v).filter(|w| live[w.index()]).count();

    let mut cyclic = vec![false; g.node_count()];
    for scc in tarjan_scc(&g) {
        let on_cycle = scc.len() > 1 || g.contains_edge(scc[0], scc[0]);
        if !on_cycle || !live[scc[0].index()] {
            continue;
        }
        for v in scc {
            if live_out(v) != 1 {
                return Ok(RunCount::Infinite);
            }
            cyclic[v.index()] = true;
        }
    }

    // the remaining live graph is a DAG above the (single-exit) cycles
    let mut memo: HashMap<NodeIndex, u64> = HashMap::new();
    let mut stack = vec![(root, false)];
    while let Some((v, expanded)) = stack.pop() {
        if memo.contains_key(&v) {
            continue;
        }
        if cyclic[v.index()] {
            memo.insert(v, 1);
            continue;
        }
        let succ: Vec<NodeIndex> = g.neighbors(v).filter(|w| live[w.index()]).collect();
        if expanded {
            let total = succ.iter().fold(0u64, |acc, w| acc.saturating_add(memo[w]));
            memo.insert(v, total);
        } else {
            stack.push((v, true));
            stack.extend(
                succ.into_iter()
                    .filter(|w| !memo.contains_key(w))
                    .map(|w| (w, false)),
            );
        }
    }
    Ok(RunCount::Finite(memo[&root]))
}

/// Finite runs from `q` consistent with `c`, each cut as soon as every head
/// `k` has reached `cut[k]`, keeping only those that extend to an infinite
/// run reading `c`. Depth-first in transition order; errors beyond `cap`.
pub fn cut_runs(
    m: &MultiTapeAutomaton,
    q: StateId,
    c: &[UltimatelyPeriodicSeq],
    cut: &[usize],
    cap: usize,
) -> Result<Vec<RunPrefix>> {
    m.check_config(c)?;
    let qg = QuotientGraph { m, c };
    let done = |heads: &[usize]| heads.iter().zip(cut).all(|(h, n)| h >= n);
    let mut out = Vec::new();
    // (state, raw head positions, steps)
    let mut stack: Vec<(StateId, Vec<usize>, Vec<TransitionId>)> =
        vec![(q, vec![0; m.tapes()], Vec::new())];
    while let Some((s, heads, steps)) = stack.pop() {
        if done(&heads) {
            let rest: Vec<UltimatelyPeriodicSeq> =
                c.iter().zip(&heads).map(|(seq, &h)| seq.skip(h)).collect();
            if super::accepts_up(m, s, &rest)? {
                if out.len() >= cap {
                    return Err(Error::TooManyRuns(cap));
                }
                out.push(RunPrefix {
                    start: q,
                    steps,
                    head_pos: heads,
                });
            }
            continue;
        }
        let mut children = Vec::new();
        for &tid in m.outgoing(s) {
            let t = &m.transitions()[tid];
            if qg.matches(&heads, t) {
                let next: Vec<usize> = heads
                    .iter()
                    .zip(&t.words)
                    .map(|(h, w)| h + w.len())
                    .collect();
                let mut st = steps.clone();
                st.push(tid);
                children.push((t.to, next, st));
            }
        }
        // reversed so that the first transition is explored first
        stack.extend(children.into_iter().rev());
    }
    Ok(out)
}
