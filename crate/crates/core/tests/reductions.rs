mod common;

use std::collections::HashSet;

use common::*;
use mtafrac::mta::*;
use mtafrac::pcp::{check_solution, search_prefix_pcp, PcpInstance};
use mtafrac::reductions::*;
use mtafrac::words::{TapeAlphabet, Word};
use rand::Rng;

type Row = (&'static str, &'static str, String, String);

/// All words over `alpha` of length 1..=max.
fn words_upto(alpha: &[&str], max: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut level = vec![String::new()];
    for _ in 0..max {
        level = level
            .iter()
            .flat_map(|w| alpha.iter().map(move |a| format!("{w}{a}")))
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// Transition table written straight from the construction's item list,
/// over single-character symbols, with `# & *` as the markers.
fn oracle(pairs: &[(String, String)], b: &[&str], prefix_variant: bool) -> HashSet<Row> {
    let n = pairs.len();
    let mut a2: Vec<&str> = b.to_vec();
    a2.push("#");
    if prefix_variant {
        a2.push("&");
        a2.push("*");
    }
    let idx: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut t = HashSet::new();
    for (i, (u, v)) in pairs.iter().enumerate() {
        let i = idx[i].clone();
        t.insert(("X", "U", i.clone(), u.clone()));
        t.insert(("U", "U", i.clone(), u.clone()));
        t.insert(("X", "V", i.clone(), v.clone()));
        t.insert(("V", "V", i.clone(), v.clone()));
        for (w, side) in [(u, "U"), (v, "V")] {
            for cand in words_upto(&a2, w.chars().count()) {
                if w.starts_with(&cand) {
                    continue;
                }
                if prefix_variant && (cand.starts_with('&') || cand.starts_with('*')) {
                    continue;
                }
                if !cand.starts_with('#') {
                    t.insert((side, "X", i.clone(), cand.clone()));
                }
                t.insert(("X", "X", i.clone(), cand));
            }
        }
    }
    if prefix_variant {
        let mut a1 = idx.clone();
        a1.push("&".into());
        for q in ["X", "U", "V"] {
            for a in &a1 {
                t.insert((q, "X", a.clone(), "&".into()));
                for b in &a2 {
                    t.insert((q, "X", a.clone(), format!("*{b}")));
                }
            }
            for a in a2.iter().filter(|&&a| a != "*") {
                t.insert((q, "X", "&".into(), a.to_string()));
            }
        }
    }
    t
}

fn rows(out: &ReductionOutput) -> HashSet<Row> {
    let m = &out.automaton;
    m.transitions()
        .iter()
        .map(|t| {
            let name = |s: usize| STATE_NAMES[s];
            let r = |k: usize| m.alphabets()[k].render(&t.words[k]);
            (name(t.from), name(t.to), r(0), r(1))
        })
        .collect()
}

fn pairs_of(inst: &PcpInstance) -> Vec<(String, String)> {
    inst.pairs()
        .iter()
        .map(|(u, v)| (inst.render(u), inst.render(v)))
        .collect()
}

fn interleaved_pairs(inst: &PcpInstance) -> Vec<(String, String)> {
    let star = |w: String| w.chars().flat_map(|c| [c, '*']).collect::<String>();
    pairs_of(inst)
        .into_iter()
        .map(|(u, v)| (star(u), star(v)))
        .collect()
}

fn aa() -> PcpInstance {
    PcpInstance::from_strs(&["a"], &[("a", "a")]).unwrap()
}

#[test]
fn transition_counts_for_single_pair() {
    let opts = BuildOptions::default();
    let u = build_universality_automaton(&aa(), &opts).unwrap();
    let expected = oracle(&pairs_of(&aa()), &["a"], false);
    assert_eq!(rows(&u), expected);
    assert_eq!(u.automaton.transitions().len(), 5);

    let p = build_universal_prefix_automaton(&aa(), &opts).unwrap();
    let expected = oracle(&interleaved_pairs(&aa()), &["a"], true);
    assert_eq!(rows(&p), expected);
    assert_eq!(p.automaton.transitions().len(), 54);
}

#[test]
fn tables_match_oracle_on_random_instances() {
    let mut rng = rng(41);
    let opts = BuildOptions::default();
    for _ in 0..25 {
        let inst = random_instance(&mut rng, 2, 2, 3);
        let b: Vec<&str> = inst
            .alphabet()
            .symbols()
            .iter()
            .map(String::as_str)
            .collect();
        let u = build_universality_automaton(&inst, &opts).unwrap();
        assert_eq!(rows(&u), oracle(&pairs_of(&inst), &b, false));
        let p = build_universal_prefix_automaton(&inst, &opts).unwrap();
        assert_eq!(rows(&p), oracle(&interleaved_pairs(&inst), &b, true));
    }
}

#[test]
fn builders_emit_valid_three_state_automata() {
    let mut rng = rng(42);
    for _ in 0..30 {
        let inst = random_instance(&mut rng, 3, 3, 3);
        for variant in [Variant::Universality, Variant::UniversalPrefix] {
            let out = build(&inst, variant, &BuildOptions::default()).unwrap();
            let m = &out.automaton;
            m.validate().unwrap();
            assert_eq!(m.states(), STATE_NAMES);
            assert_eq!(m.tapes(), 2);
            assert_eq!(out.provenance.len(), m.transitions().len());
            assert!(out.provenance.iter().all(|p| !p.is_empty()));
            let a1 = &m.alphabets()[0];
            for i in 1..=inst.len() {
                assert!(a1.contains(&i.to_string()));
            }
            let a2 = &m.alphabets()[1];
            assert!(inst.alphabet().symbols().iter().all(|s| a2.contains(s)));
            assert!(a2.contains("#"));
        }
    }
}

#[test]
fn solvable_instances_are_not_universal() {
    let mut rng = rng(43);
    let mut done = 0;
    while done < 20 {
        let inst = random_instance(&mut rng, 3, 3, 3);
        let Some(sol) = search_prefix_pcp(&inst, 4) else {
            continue;
        };
        let out = build_universality_automaton(&inst, &BuildOptions::default()).unwrap();
        let blocked = blocking_config_universality(&out, &sol).unwrap();
        assert!(is_dead_prefix(&out.automaton, X, &blocked));
        assert!(is_dead_prefix(&out.automaton, U, &blocked));
        let bounds = Bounds::new(blocked.len().max(8), 4, 2);
        let v = check_universal(&out.automaton, X, bounds);
        assert!(v.is_no(), "{} {v:?}", inst.len());
        done += 1;
    }
}

#[test]
fn disjoint_first_letters_have_no_short_dead_prefix() {
    // exhaustive search cost grows fast with word length: single letters
    // at depth 8, two-letter words at depth 5
    let mut rng = rng(44);
    for (max_len, depth, count) in [(1, 8, 6), (2, 5, 4)] {
        for _ in 0..count {
            let inst = disjoint_first_letters(&mut rng, max_len, 2);
            assert!(search_prefix_pcp(&inst, 6).is_none());
            let out = build_universality_automaton(&inst, &BuildOptions::default()).unwrap();
            let dead = find_dead_prefix(&out.automaton, X, depth, 2_000_000).unwrap();
            assert!(
                dead.is_none(),
                "{:?}",
                dead.map(|p| p.render(&out.automaton))
            );
        }
    }
}

#[test]
fn interleaving_preserves_solvability() {
    let mut rng = rng(45);
    for _ in 0..30 {
        let inst = random_instance(&mut rng, 3, 3, 3);
        let out = build_universal_prefix_automaton(&inst, &BuildOptions::default()).unwrap();
        let before = search_prefix_pcp(&inst, 4);
        let after = search_prefix_pcp(&out.instance, 4);
        assert_eq!(before.is_some(), after.is_some());
        if let (Some(a), Some(b)) = (before, after) {
            // interleaving is a letter-wise morphism, so the same index words solve
            assert_eq!(a, b);
            assert!(check_solution(&out.instance, &b).unwrap());
        }
    }
}

#[test]
fn blocking_iteration_reaches_zero_runs() {
    let mut rng = rng(46);
    let mut done = 0;
    let mut tries = 0;
    while done < 10 && tries < 500 {
        tries += 1;
        let inst = random_instance(&mut rng, 2, 2, 2);
        let Some(_) = search_prefix_pcp(&inst, 3) else {
            continue;
        };
        let out = build_universal_prefix_automaton(&inst, &BuildOptions::default()).unwrap();
        let sol = search_prefix_pcp(&out.instance, 3).unwrap();
        let m = &out.automaton;
        let (mut x, mut y) = (Word::empty(), Word::empty());
        let mut count =
            count_accepting_runs(m, X, &amp_tail_config(&out, &x, &y).unwrap()).unwrap();
        let RunCount::Finite(mut k) = count else {
            panic!("infinitely many runs on &-tails")
        };
        let mut steps = 0;
        while k > 0 {
            let ext = blocking_extension(&out, &sol, &x, &y).unwrap();
            assert_eq!(ext.runs.len() as u64, k);
            let gaps: Vec<usize> = ext.runs.iter().map(|r| r.head_gap()).collect();
            assert_eq!(ext.head_gap, *gaps.iter().min().unwrap());
            (x, y) = ext.extended(&x, &y);
            count = count_accepting_runs(m, X, &amp_tail_config(&out, &x, &y).unwrap()).unwrap();
            let RunCount::Finite(next) = count else {
                panic!("infinite after extension")
            };
            assert!(next < k, "{next} >= {k}");
            k = next;
            steps += 1;
        }
        // the final prefix blocks every &-tail continuation
        let c = amp_tail_config(&out, &x, &y).unwrap();
        assert!(!accepts_up(m, X, &c).unwrap());
        assert!(steps >= 1);
        done += 1;
    }
    assert_eq!(done, 10);
}

#[test]
fn amp_tails_accepted_without_solution() {
    let mut rng = rng(47);
    for _ in 0..6 {
        let inst = disjoint_first_letters(&mut rng, 2, 2);
        let out = build_universal_prefix_automaton(&inst, &BuildOptions::default()).unwrap();
        let m = &out.automaton;
        let (a1, a2) = (m.alphabets()[0].len(), m.alphabets()[1].len());
        for _ in 0..40 {
            let x = random_word(&mut rng, a1, 0, 5);
            let y = random_word(&mut rng, a2, 0, 5);
            let c = amp_tail_config(&out, &x, &y).unwrap();
            assert!(accepts_up(m, X, &c).unwrap(), "{}", m.render_words(&[x, y]));
        }
    }
}

#[test]
fn clashing_markers_are_renamed() {
    let inst = PcpInstance::from_strs(&["#", "&"], &[("#", "#&")]).unwrap();
    let out = build_universal_prefix_automaton(&inst, &BuildOptions::default()).unwrap();
    let a2: &TapeAlphabet = &out.automaton.alphabets()[1];
    let markers = [
        &out.markers.hash,
        out.markers.amp.as_ref().unwrap(),
        out.markers.star.as_ref().unwrap(),
    ];
    for mk in markers {
        assert!(!inst.alphabet().contains(mk));
        assert!(a2.contains(mk));
    }
    let _ = rng(0).gen::<u8>();
}
