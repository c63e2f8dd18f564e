use mtafrac::rational::{frac, inv_pow, Rational};
use mtafrac::words::*;
use proptest::prelude::*;

fn word(max_letter: u32, len: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..max_letter, len).prop_map(Word)
}

proptest! {
    #[test]
    fn normal_form_is_canonical(pre in word(3, 0..6), per in word(3, 1..5), reps in 1usize..4, unroll in 0usize..5) {
        let a = UltimatelyPeriodicSeq::new(pre.clone(), per.clone()).unwrap();
        // same sequence written with a repeated period and an unrolled preperiod
        let rep = Word(per.0.repeat(reps));
        let mut pre2 = pre.clone();
        for i in 0..unroll {
            pre2.0.push(per.0[i % per.len()]);
        }
        let mut per2 = rep.0.clone();
        per2.rotate_left(unroll % rep.len());
        let b = UltimatelyPeriodicSeq::new(pre2, Word(per2)).unwrap();
        prop_assert_eq!(&a, &b);
        for i in 0..40 {
            prop_assert_eq!(a.at(i), b.at(i));
        }
    }

    #[test]
    fn normalize_respects_letters(pre in word(3, 0..6), per in word(3, 1..5), pos in 0usize..200) {
        let s = UltimatelyPeriodicSeq::new(pre, per).unwrap();
        let p = s.normalize(pos);
        prop_assert!(p < s.positions());
        prop_assert_eq!(s.at(p), s.at(pos));
        prop_assert_eq!(s.skip(pos).at(0), s.at(pos));
    }

    #[test]
    fn skip_is_a_suffix(pre in word(3, 0..5), per in word(3, 1..4), n in 0usize..20) {
        let s = UltimatelyPeriodicSeq::new(pre, per).unwrap();
        let t = s.skip(n);
        for i in 0..30 {
            prop_assert_eq!(t.at(i), s.at(n + i));
        }
    }

    #[test]
    fn digit_value_is_additive(u in word(3, 0..8), v in word(3, 0..8)) {
        let a = TapeAlphabet::new(["0", "1", "2"]).unwrap();
        let lhs = digit_value(&a, &u.concat(&v));
        let rhs = digit_value(&a, &u) + inv_pow(3, u.len()) * digit_value(&a, &v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn seq_value_is_the_limit_of_prefixes(pre in word(2, 0..5), per in word(2, 1..4)) {
        let a = TapeAlphabet::new(["0", "1"]).unwrap();
        let s = UltimatelyPeriodicSeq::new(pre, per).unwrap();
        let x = seq_value(&a, &s);
        for n in [4usize, 10, 30] {
            let approx = digit_value(&a, &s.prefix(n));
            prop_assert!(approx <= x);
            prop_assert!(&x - &approx <= inv_pow(2, n));
        }
    }

    #[test]
    fn parse_render_roundtrip(w in word(4, 0..10)) {
        let single = TapeAlphabet::new(["a", "b", "c", "d"]).unwrap();
        prop_assert_eq!(single.parse_word(&single.render(&w)).unwrap(), w.clone());
        let multi = TapeAlphabet::new(["x1", "x2", "y", "zz"]).unwrap();
        prop_assert_eq!(multi.parse_word(&multi.render(&w)).unwrap(), w);
    }
}

#[test]
fn values() {
    let a = TapeAlphabet::new(["0", "1"]).unwrap();
    let third = UltimatelyPeriodicSeq::new(Word::empty(), a.parse_word("01").unwrap()).unwrap();
    assert_eq!(seq_value(&a, &third), frac(1, 3));
    let one = UltimatelyPeriodicSeq::constant(1);
    assert_eq!(seq_value(&a, &one), Rational::from_integer(1.into()));
    // custom digits: symbol x stands for 1
    let d = TapeAlphabet::with_digits(vec!["x".into(), "o".into()], vec![1, 0]).unwrap();
    assert_eq!(digit_value(&d, &d.parse_word("xo").unwrap()), frac(1, 2));
}

#[test]
fn bad_input_is_rejected() {
    let a = TapeAlphabet::new(["0", "1"]).unwrap();
    assert!(a.parse_word("012").is_err());
    assert!(UltimatelyPeriodicSeq::new(Word::empty(), Word::empty()).is_err());
    assert!(TapeAlphabet::new(["0", "0"]).is_err());
    assert!(a.check(&Word(vec![5])).is_err());
}
