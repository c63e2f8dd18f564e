//! Exact rational scalars and vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `base^-exp` as an exact rational.
pub fn inv_pow(base: u32, exp: usize) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(base), exp))
}

/// Parses `"n"`, `"-n"` or `"n/d"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let t = s.trim();
    let parse_int = |p: &str| -> Result<BigInt> {
        let p = p.trim();
        let digits = p
            .strip_prefix('-')
            .or_else(|| p.strip_prefix('+'))
            .unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        p.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(t)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
    }
}

/// Canonical `"n"` / `"n/d"` rendering; inverse of [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn zero_vector(d: usize) -> RationalVector {
    vec![Rational::zero(); d]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/2").unwrap(), frac(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("4/8").unwrap(), frac(1, 2));
        assert_eq!(format_rational(&frac(-4, 8)), "-1/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "/", "1/0", "a", "1/2/3", "--1", "1.5", " / 2"] {
            assert!(parse_rational(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn inverse_powers() {
        assert_eq!(inv_pow(2, 4), frac(1, 16));
        assert_eq!(inv_pow(3, 0), int(1));
    }
}
