//! Exact rational scalars built on arbitrary-precision integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for every coefficient in the crate.
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let num = p.trim().parse::<BigInt>().map_err(|_| bad())?;
            let den = q.trim().parse::<BigInt>().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Canonical display: `"p"` for integers, `"p/q"` otherwise, minus sign up front.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64, for reporting and float cross-checks only.
pub fn to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    let scale = |x: &BigInt| -> f64 {
        let s = x.to_string();
        s.parse::<f64>().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
    };
    scale(n) / scale(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "5", "-12", "3/4", "-7/2", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat("6/-4").unwrap()), "-3/2");
        assert_eq!(format_rat(&parse_rat(" 1 / 3 ").unwrap()), "1/3");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "a", "1/0", "1/2/3", "1.5"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(to_f64(&ratio(1, 2)), 0.5);
        assert_eq!(to_f64(&rat(-3)), -3.0);
    }
}
