//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_i128(n: i128) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"n"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats reduced, denominator omitted when 1.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor_q(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_q(x: &Q) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn frac_q(x: &Q) -> Q {
    x - Q::from_integer(floor_q(x))
}

/// Integer value of `x` if it is integral and fits in `i128`.
pub fn to_i128(x: &Q) -> Result<i128> {
    if !x.is_integer() {
        return Err(Error::NonIntegral(fmt_q(x)));
    }
    x.numer().to_i128().ok_or(Error::Overflow("rational to i128"))
}

pub fn big_to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("bigint to i128"))
}

pub fn is_nonneg_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}

/// Floor division for i128.
pub fn div_floor(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

/// Ceiling division for i128.
pub fn div_ceil(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&(-a), &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3", "7/2", "-5/4"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(fmt_q(&parse_q("6/4").unwrap()), "3/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn floor_ceil_frac() {
        let x = q_frac(-7, 2);
        assert_eq!(floor_q(&x), BigInt::from(-4));
        assert_eq!(ceil_q(&x), BigInt::from(-3));
        assert_eq!(frac_q(&x), q_frac(1, 2));
        assert_eq!(div_floor(-7, 2), -4);
        assert_eq!(div_ceil(-7, 2), -3);
        assert_eq!(div_ceil(7, 2), 4);
    }
}
