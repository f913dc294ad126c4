//! Arbitrary-precision rationals: the ground field of every exact
//! computation in this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number. `BigRational` already maintains the canonical
/// form we need: reduced, positive denominator, 0 = 0/1.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer power with negative exponents allowed (zero base with negative
/// exponent returns `None`).
pub fn pow_i64(base: &Rat, exp: i64) -> Option<Rat> {
    if exp == 0 {
        return Some(Rat::one());
    }
    if base.is_zero() {
        return if exp > 0 { Some(Rat::zero()) } else { None };
    }
    let mut acc = Rat::one();
    let b = if exp > 0 { base.clone() } else { base.recip() };
    for _ in 0..exp.unsigned_abs() {
        acc *= b.clone();
    }
    Some(acc)
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a float division of the parts.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Does the rational have an integer value, and if so which one?
pub fn as_i64(r: &Rat) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// True iff `r` is a perfect square of a rational; returns the nonnegative root.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_handles_negative_exponents() {
        assert_eq!(pow_i64(&rat(2), -2), Some(ratio(1, 4)));
        assert_eq!(pow_i64(&rat(0), -1), None);
        assert_eq!(pow_i64(&ratio(-3, 2), 2), Some(ratio(9, 4)));
    }

    #[test]
    fn sqrt_detects_perfect_squares() {
        assert_eq!(sqrt_exact(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(sqrt_exact(&rat(2)), None);
        assert_eq!(sqrt_exact(&rat(-1)), None);
        assert_eq!(sqrt_exact(&rat(0)), Some(rat(0)));
    }
}
