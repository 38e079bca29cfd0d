//! Exact rational scalars.
//!
//! Every coefficient in this crate is a [`Scalar`]: an arbitrary-precision
//! rational kept in lowest terms with positive denominator. `num`'s
//! `BigRational` maintains both invariants on every operation, so equality
//! tests are exact and no rounding can occur anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn qi(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn factorial_scalar(n: usize) -> Scalar {
    BigRational::from_integer(factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Parse "3", "-3", "3/4", "-3/4". Whitespace is not accepted.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((num_part, den_part)) => {
            let n: BigInt = num_part.parse().ok()?;
            let d: BigInt = den_part.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Canonical text form: "0", "3", "-3/4".
pub fn render_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sign of a Koszul swap of homogeneous degrees `a` and `b`: `(-1)^(a*b)`.
pub fn koszul_sign(a: i64, b: i64) -> Scalar {
    if (a & 1) == 1 && (b & 1) == 1 {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn sign_pow(k: usize) -> Scalar {
    if k % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["0", "3", "-3", "1/2", "-7/3"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(render_scalar(&v), s);
        }
        assert_eq!(render_scalar(&parse_scalar("2/4").unwrap()), "1/2");
        assert_eq!(render_scalar(&parse_scalar("3/-6").unwrap()), "-1/2");
        assert!(parse_scalar("1/0").is_none());
        assert!(parse_scalar("").is_none());
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }
}
