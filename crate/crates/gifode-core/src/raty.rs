//! Rational functions in `y` over the rational functions of `x`.
//!
//! Canonical form: numerator and denominator share no polynomial factor in
//! `y` over the fraction field, the denominator is nonzero, and its leading
//! coefficient in `y` is 1. Equality of canonical forms then decides equality
//! of functions, which is what exact residual checks rely on.

use crate::error::{Error, Result};
use crate::polyy::PolyY;
use crate::rat::Rat;
use crate::ratx::RatX;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct RatY {
    num: PolyY<RatX>,
    den: PolyY<RatX>,
}

impl RatY {
    pub fn new(num: PolyY<RatX>, den: PolyY<RatX>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatY {
                num: PolyY::zero(),
                den: PolyY::one(),
            });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides num");
        let den = den.div_exact(&g).expect("gcd divides den");
        let lead_inv = den.leading().inv()?;
        Ok(RatY {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn from_poly(p: PolyY<RatX>) -> Self {
        RatY {
            num: p,
            den: PolyY::one(),
        }
    }

    pub fn zero() -> Self {
        RatY::from_poly(PolyY::zero())
    }

    pub fn one() -> Self {
        RatY::from_poly(PolyY::one())
    }

    pub fn constant(c: RatX) -> Self {
        RatY::from_poly(PolyY::constant(c))
    }

    pub fn y() -> Self {
        RatY::from_poly(PolyY::y())
    }

    pub fn num(&self) -> &PolyY<RatX> {
        &self.num
    }

    pub fn den(&self) -> &PolyY<RatX> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatY) -> RatY {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        let den = self.den.mul(&o.den);
        RatY::new(num, den).expect("nonzero den product")
    }

    pub fn sub(&self, o: &RatY) -> RatY {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatY {
        RatY {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatY) -> RatY {
        RatY::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero den product")
    }

    pub fn inv(&self) -> Result<RatY> {
        RatY::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatY) -> Result<RatY> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &RatX) -> RatY {
        RatY::new(self.num.scale(c), self.den.clone()).expect("den unchanged")
    }

    /// d/dy by the quotient rule.
    pub fn dy(&self) -> RatY {
        let n = self.num.dy().mul(&self.den).sub(&self.num.mul(&self.den.dy()));
        RatY::new(n, self.den.mul(&self.den)).expect("nonzero den square")
    }

    /// d/dx by the quotient rule; coefficient derivatives are exact.
    pub fn dx(&self) -> RatY {
        let nd = self.num.dx().expect("RatX dx infallible");
        let dd = self.den.dx().expect("RatX dx infallible");
        let n = nd.mul(&self.den).sub(&self.num.mul(&dd));
        RatY::new(n, self.den.mul(&self.den)).expect("nonzero den square")
    }

    /// Exact evaluation; pole if either the coefficientwise evaluation hits
    /// an x-pole or the y-denominator vanishes.
    pub fn eval_xy(&self, x: &Rat, y: &Rat) -> Result<Rat> {
        let d = self.den.eval_xy(x, y)?;
        if d == Rat::from_integer(0.into()) {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval_xy(x, y)? / d)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.num.eval_f64(x, y) / self.den.eval_f64(x, y)
    }

    pub fn pow_int(&self, n: i64) -> Result<RatY> {
        if n < 0 {
            return self.inv()?.pow_int(-n);
        }
        let mut acc = RatY::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }
}

impl fmt::Display for RatY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &PolyY<RatX>| {
            let s = p.to_string();
            if s.contains(' ') || s.contains('/') {
                format!("({})", s)
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn py(cs: &[i64]) -> PolyY<RatX> {
        PolyY::new(cs.iter().map(|&c| RatX::constant(rat(c))).collect())
    }

    #[test]
    fn reduces_common_factors() {
        // (y^2 - 1)/(y - 1) = y + 1
        let r = RatY::new(py(&[-1, 0, 1]), py(&[-1, 1])).unwrap();
        assert_eq!(r, RatY::from_poly(py(&[1, 1])));
    }

    #[test]
    fn den_is_monic_in_y() {
        // 1/(2y) -> (1/2)/y
        let r = RatY::new(py(&[1]), py(&[0, 2])).unwrap();
        assert!(r.den().leading().is_one());
        assert_eq!(r.mul(&RatY::from_poly(py(&[0, 2]))), RatY::one());
    }

    #[test]
    fn dy_quotient_rule() {
        // d/dy (1/y) = -1/y^2
        let r = RatY::new(py(&[1]), py(&[0, 1])).unwrap();
        assert_eq!(r.dy(), RatY::new(py(&[-1]), py(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn dx_sees_coefficients() {
        // d/dx (x*y) = y
        let p = PolyY::new(vec![RatX::zero(), RatX::x()]);
        assert_eq!(RatY::from_poly(p).dx(), RatY::y());
    }

    #[test]
    fn eval_and_poles() {
        let r = RatY::new(py(&[1]), py(&[-1, 1])).unwrap(); // 1/(y-1)
        assert_eq!(r.eval_xy(&rat(0), &rat(3)).unwrap(), Rat::new(1.into(), 2.into()));
        assert!(matches!(r.eval_xy(&rat(0), &rat(1)), Err(Error::PoleAtPoint)));
    }
}
