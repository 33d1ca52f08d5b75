//! Exact rational helpers shared by the series and counting code.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serializer;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_biguint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `x^k / k!` for `k = 0..=max`, computed incrementally.
pub fn exp_coefficients(x: &Rational, max: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut term = Rational::one();
    out.push(term.clone());
    for k in 1..=max {
        term = term * x / int(k as i64);
        out.push(term.clone());
    }
    out
}

/// Renders `n` or `n/d` (denominator omitted when it is 1).
pub fn to_exact_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_exact(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn serialize_exact<S: Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&to_exact_string(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_strings() {
        assert_eq!(to_exact_string(&ratio(1, 2)), "1/2");
        assert_eq!(to_exact_string(&ratio(4, 2)), "2");
        assert_eq!(to_exact_string(&ratio(-3, 9)), "-1/3");
        assert_eq!(parse_exact("-1/3"), Some(ratio(-1, 3)));
        assert_eq!(parse_exact("7"), Some(int(7)));
        assert_eq!(parse_exact("1/0"), None);
    }

    #[test]
    fn exp_coefficients_of_two() {
        let c = exp_coefficients(&int(2), 3);
        assert_eq!(c, vec![int(1), int(2), int(2), ratio(4, 3)]);
    }
}
