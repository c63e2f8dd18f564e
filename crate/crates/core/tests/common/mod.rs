#![allow(dead_code)]

use mtafrac::gifs::{AffineMapR, Edge, GifsGraph};
use mtafrac::mta::{MultiTapeAutomaton, Transition};
use mtafrac::pcp::PcpInstance;
use mtafrac::rational::int;
use mtafrac::words::{TapeAlphabet, UltimatelyPeriodicSeq, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two tapes, states X and Y; the Y loop reads `1|20`.
pub fn two_tape_xy() -> MultiTapeAutomaton {
    MultiTapeAutomaton::from_spec(
        &[&["0", "1"], &["0", "1", "2"]],
        &["X", "Y"],
        &[
            ("X", "X", &["0", "22"]),
            ("X", "Y", &["10", "11"]),
            ("Y", "Y", &["1", "001"]),
            ("Y", "Y", &["1", "20"]),
            ("Y", "X", &["110", "2"]),
        ],
    )
    .unwrap()
}

/// One tape, one state, loops reading 1, 10 and 00.
pub fn punotu() -> MultiTapeAutomaton {
    MultiTapeAutomaton::from_spec(
        &[&["0", "1"]],
        &["s"],
        &[("s", "s", &["1"]), ("s", "s", &["10"]), ("s", "s", &["00"])],
    )
    .unwrap()
}

pub fn sierpinski() -> MultiTapeAutomaton {
    MultiTapeAutomaton::from_spec(
        &[&["0", "1"], &["0", "1"]],
        &["q"],
        &[
            ("q", "q", &["0", "0"]),
            ("q", "q", &["0", "1"]),
            ("q", "q", &["1", "0"]),
        ],
    )
    .unwrap()
}

pub fn full_square() -> MultiTapeAutomaton {
    MultiTapeAutomaton::from_spec(
        &[&["0", "1"], &["0", "1"]],
        &["q"],
        &[
            ("q", "q", &["0", "0"]),
            ("q", "q", &["0", "1"]),
            ("q", "q", &["1", "0"]),
            ("q", "q", &["1", "1"]),
        ],
    )
    .unwrap()
}

/// Two states on a ternary tape whose attractors sit in disjoint thirds.
pub fn split_thirds() -> MultiTapeAutomaton {
    MultiTapeAutomaton::from_spec(
        &[&["0", "1", "2"]],
        &["p", "r"],
        &[
            ("p", "p", &["00"]),
            ("p", "p", &["01"]),
            ("r", "r", &["21"]),
            ("r", "r", &["22"]),
        ],
    )
    .unwrap()
}

/// `X = ⋃ (X + v)/2` over the digits (0,0), (1,0), (0,1), (−1,−1).
pub fn tile_right() -> GifsGraph {
    let m = vec![vec![int(2), int(0)], vec![int(0), int(2)]];
    let digits = [(0, 0), (1, 0), (0, 1), (-1, -1)];
    let edges = digits
        .iter()
        .map(|&(a, b)| Edge {
            from: 0,
            to: 0,
            map: AffineMapR::inverse_of(m.clone(), vec![int(a), int(b)]).unwrap(),
        })
        .collect();
    GifsGraph::new(2, vec!["q".into()], edges).unwrap()
}

pub fn abb_pair_pcp() -> PcpInstance {
    PcpInstance::from_strs(&["a", "b"], &[("a", "abb"), ("bb", "aa")]).unwrap()
}

pub fn random_word(rng: &mut impl Rng, size: usize, min: usize, max: usize) -> Word {
    let len = rng.gen_range(min..=max);
    Word((0..len).map(|_| rng.gen_range(0..size as u32)).collect())
}

pub fn random_instance(
    rng: &mut impl Rng,
    max_alpha: usize,
    max_len: usize,
    max_n: usize,
) -> PcpInstance {
    let names = ["a", "b", "c", "d"];
    let k = rng.gen_range(1..=max_alpha);
    let alphabet = TapeAlphabet::new(names[..k].iter().copied()).unwrap();
    let n = rng.gen_range(1..=max_n);
    let pairs = (0..n)
        .map(|_| {
            (
                random_word(rng, k, 1, max_len),
                random_word(rng, k, 1, max_len),
            )
        })
        .collect();
    PcpInstance::new(alphabet, pairs).unwrap()
}

/// No u_i starts with the first letter of any v_j: unsolvable.
pub fn disjoint_first_letters(rng: &mut impl Rng, max_len: usize, max_n: usize) -> PcpInstance {
    let alphabet = TapeAlphabet::new(["a", "b", "c"]).unwrap();
    let n = rng.gen_range(1..=max_n);
    let with_first = |rng: &mut ChaCha8Rng, first: u32| {
        let mut w = random_word(rng, 3, 0, max_len - 1);
        w.0.insert(0, first);
        w
    };
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let pairs = (0..n)
        .map(|_| (with_first(&mut r, 0), with_first(&mut r, 1)))
        .collect();
    PcpInstance::new(alphabet, pairs).unwrap()
}

/// Small random automaton: 1–3 states, 1–2 tapes over 2–3 letters, up to
/// `max_t` transitions with words of length 1–2.
pub fn random_automaton(rng: &mut impl Rng, max_t: usize) -> MultiTapeAutomaton {
    let tapes = rng.gen_range(1..=2);
    let states = rng.gen_range(1..=3);
    let alphabets: Vec<TapeAlphabet> = (0..tapes)
        .map(|_| {
            let k = rng.gen_range(2..=3);
            TapeAlphabet::new((0..k).map(|i| i.to_string())).unwrap()
        })
        .collect();
    let count = rng.gen_range(1..=max_t);
    let transitions = (0..count)
        .map(|_| Transition {
            from: rng.gen_range(0..states),
            to: rng.gen_range(0..states),
            words: alphabets
                .iter()
                .map(|a| random_word(rng, a.len(), 1, 2))
                .collect(),
        })
        .collect();
    MultiTapeAutomaton::new(
        alphabets,
        (0..states).map(|i| format!("q{i}")).collect(),
        transitions,
    )
    .unwrap()
}

pub fn random_config(rng: &mut impl Rng, m: &MultiTapeAutomaton) -> Vec<UltimatelyPeriodicSeq> {
    m.alphabets()
        .iter()
        .map(|a| {
            UltimatelyPeriodicSeq::new(
                random_word(rng, a.len(), 0, 3),
                random_word(rng, a.len(), 1, 3),
            )
            .unwrap()
        })
        .collect()
}

/// A random walk of up to `max_len` transitions from `q`.
pub fn random_path(
    rng: &mut impl Rng,
    m: &MultiTapeAutomaton,
    q: usize,
    max_len: usize,
) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    let mut at = q;
    let mut path = Vec::new();
    for _ in 0..len {
        let Some(&t) = m.outgoing(at).choose(rng) else {
            break;
        };
        path.push(t);
        at = m.transitions()[t].to;
    }
    path
}

/// A random lasso `(start, stem, cycle)`, if the walk closes a cycle.
pub fn random_lasso(
    rng: &mut impl Rng,
    m: &MultiTapeAutomaton,
) -> Option<(usize, Vec<usize>, Vec<usize>)> {
    let start = rng.gen_range(0..m.states().len());
    let mut at = start;
    let mut visited = vec![start];
    let mut path = Vec::new();
    for _ in 0..12 {
        let &t = m.outgoing(at).choose(rng)?;
        path.push(t);
        at = m.transitions()[t].to;
        if let Some(i) = visited.iter().position(|&s| s == at) {
            if rng.gen_bool(0.7) || path.len() > 8 {
                return Some((start, path[..i].to_vec(), path[i..].to_vec()));
            }
        }
        visited.push(at);
    }
    None
}
