//! Exact rationals backed by arbitrary-precision integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("invalid rational `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        assert_eq!(parse("10/4").unwrap(), ratio(5, 2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("1/-2").unwrap(), ratio(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("a/2").is_err());
        let r = parse("6/-4").unwrap();
        assert!(r.denom() > &BigInt::zero());
        assert_eq!(r.to_string(), "-3/2");
    }
}
