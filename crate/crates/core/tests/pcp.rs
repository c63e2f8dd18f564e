mod common;

use common::*;
use mtafrac::pcp::*;

/// All index words of length `1..=max` over `n` indices.
fn index_words(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level = vec![Vec::new()];
    for _ in 0..max {
        level = level
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..n).map(move |i| {
                    let mut w = w.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

fn concat(inst: &PcpInstance, w: &[usize], upper: bool) -> Vec<u32> {
    w.iter()
        .flat_map(|&i| {
            let (u, v) = &inst.pairs()[i];
            if upper {
                u.letters().to_vec()
            } else {
                v.letters().to_vec()
            }
        })
        .collect()
}

/// Shortest long-word length of any prefix-PCP solution, by brute force.
fn brute_prefix(inst: &PcpInstance, max: usize) -> Option<usize> {
    for long in index_words(inst.len(), max) {
        for k in 1..=long.len() {
            let short = &long[..k];
            if concat(inst, &long, true) == concat(inst, short, false)
                || concat(inst, short, true) == concat(inst, &long, false)
            {
                return Some(long.len());
            }
        }
    }
    None
}

fn brute_pcp(inst: &PcpInstance, max: usize) -> Option<usize> {
    index_words(inst.len(), max)
        .into_iter()
        .find(|w| concat(inst, w, true) == concat(inst, w, false))
        .map(|w| w.len())
}

#[test]
fn worked_example() {
    let inst = abb_pair_pcp();
    let wu = IndexWord::parse("1211").unwrap();
    let wv = IndexWord::parse("12").unwrap();
    assert!(check_prefix_pcp_solution(&inst, &wu, &wv).unwrap());
    assert_eq!(inst.render(&inst.upper(&wu)), "abbaa");
    assert_eq!(inst.render(&inst.lower(&wv)), "abbaa");
    assert!(search_pcp(&inst, 8).is_none());
    let sol = search_prefix_pcp(&inst, 4).unwrap();
    assert!(check_solution(&inst, &sol).unwrap());
}

#[test]
fn prefix_search_matches_brute_force() {
    let mut rng = rng(1);
    for _ in 0..200 {
        let inst = random_instance(&mut rng, 3, 3, 3);
        let found = search_prefix_pcp(&inst, 4);
        assert_eq!(found.as_ref().map(|s| s.long.len()), brute_prefix(&inst, 4));
        if let Some(sol) = found {
            assert!(check_solution(&inst, &sol).unwrap());
        }
    }
}

#[test]
fn pcp_search_matches_brute_force() {
    let mut rng = rng(2);
    for _ in 0..200 {
        let inst = random_instance(&mut rng, 2, 3, 3);
        let found = search_pcp(&inst, 5);
        assert_eq!(found.as_ref().map(IndexWord::len), brute_pcp(&inst, 5));
        if let Some(w) = found {
            assert!(check_pcp_solution(&inst, &w).unwrap());
        }
    }
}

#[test]
fn reduction_round_trip() {
    let mut rng = rng(3);
    let (mut forward, mut backward) = (0, 0);
    for _ in 0..50 {
        let inst = random_instance(&mut rng, 3, 3, 3);
        let n = inst.len();
        let reduced = reduce_pcp_to_prefix(&inst).unwrap();
        assert_eq!(reduced.len(), 2 * n + 1);
        if let Some(w) = search_pcp(&inst, 4) {
            let enc = encode_solution(n, &w);
            assert!(check_solution(&reduced, &enc).unwrap());
            forward += 1;
        }
        if let Some(sol) = search_prefix_pcp(&reduced, 5) {
            let w = decode_reduced_solution(n, &sol).unwrap();
            assert!(check_pcp_solution(&inst, &w).unwrap());
            backward += 1;
        }
    }
    assert!(forward > 0 && backward > 0, "{forward} {backward}");
}

#[test]
fn reduced_abb_pair_instance() {
    let reduced = reduce_pcp_to_prefix(&abb_pair_pcp()).unwrap();
    assert_eq!(reduced.len(), 5);
    // unsolvable as PCP, so the reduced instance has no short solution
    assert!(search_prefix_pcp(&reduced, 6).is_none());
}

#[test]
fn malformed_witnesses() {
    assert!(IndexWord::parse("102").is_err());
    assert!(IndexWord::parse("").is_err());
    let a = IndexWord::parse("12").unwrap();
    let b = IndexWord::parse("21").unwrap();
    assert!(PrefixPcpSolution::from_sides(a, b).is_err());
    let clash = PcpInstance::from_strs(&["a", "#"], &[("a", "#")]).unwrap();
    assert!(
        matches!(reduce_pcp_to_prefix(&clash), Err(mtafrac::Error::SymbolClash(s)) if s == "#")
    );
}
