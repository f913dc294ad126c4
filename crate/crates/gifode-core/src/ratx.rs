//! Rational functions of `x`: reduced fractions of `PolyX`.

use crate::error::{Error, Result};
use crate::polyx::PolyX;
use crate::rat::Rat;
use num_traits::{One, Zero};
use std::fmt;

/// A rational function `num/den` kept in canonical form: `den` is nonzero and
/// monic, and `gcd(num, den) = 1`. Equality of canonical forms is equality of
/// the functions they denote.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatX {
    num: PolyX,
    den: PolyX,
}

impl RatX {
    /// Builds the reduced form; the denominator must be nonzero.
    pub fn new(num: PolyX, den: PolyX) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatX {
                num: PolyX::zero(),
                den: PolyX::one(),
            });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides num");
        let mut den = den.div_exact(&g).expect("gcd divides den");
        let lead = den.leading();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatX { num, den })
    }

    pub fn from_poly(p: PolyX) -> Self {
        RatX {
            num: p,
            den: PolyX::one(),
        }
    }

    pub fn zero() -> Self {
        RatX::from_poly(PolyX::zero())
    }

    pub fn one() -> Self {
        RatX::from_poly(PolyX::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatX::from_poly(PolyX::constant(c))
    }

    pub fn x() -> Self {
        RatX::from_poly(PolyX::x())
    }

    pub fn num(&self) -> &PolyX {
        &self.num
    }

    pub fn den(&self) -> &PolyX {
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

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    /// The constant value if this is a constant, else `None`.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatX) -> RatX {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        let den = self.den.mul(&o.den);
        RatX::new(num, den).expect("nonzero den product")
    }

    pub fn sub(&self, o: &RatX) -> RatX {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatX {
        RatX {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatX) -> RatX {
        let num = self.num.mul(&o.num);
        let den = self.den.mul(&o.den);
        RatX::new(num, den).expect("nonzero den product")
    }

    pub fn scale(&self, c: &Rat) -> RatX {
        RatX::new(self.num.scale(c), self.den.clone()).expect("den unchanged")
    }

    /// Reciprocal; errors on zero.
    pub fn inv(&self) -> Result<RatX> {
        RatX::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatX) -> Result<RatX> {
        Ok(self.mul(&o.inv()?))
    }

    /// d/dx by the quotient rule.
    pub fn dx(&self) -> RatX {
        let n = self.num.derivative().mul(&self.den);
        let m = self.num.mul(&self.den.derivative());
        let den = self.den.mul(&self.den);
        RatX::new(n.sub(&m), den).expect("nonzero den square")
    }

    /// Exact evaluation; `PoleAtPoint` if the (reduced) denominator vanishes.
    pub fn eval(&self, at: &Rat) -> Result<Rat> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval(at) / d)
    }

    /// Floating evaluation; infinite or NaN at poles.
    pub fn eval_f64(&self, at: f64) -> f64 {
        self.num.eval_f64(at) / self.den.eval_f64(at)
    }

    pub fn pow_int(&self, n: i64) -> Result<RatX> {
        if n < 0 {
            return self.inv()?.pow_int(-n);
        }
        let mut acc = RatX::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }
}

impl fmt::Display for RatX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let np = self.num.is_constant() || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        let dp = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        match (np, dp) {
            (true, true) => write!(f, "{}/{}", self.num, self.den),
            (true, false) => write!(f, "{}/({})", self.num, self.den),
            (false, true) => write!(f, "({})/{}", self.num, self.den),
            (false, false) => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn p(cs: &[i64]) -> PolyX {
        PolyX::new(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn normalizes_on_construction() {
        // (x^2 - 1)/(x - 1) reduces to x + 1.
        let r = RatX::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(r, RatX::from_poly(p(&[1, 1])));

        // 0/5 is the canonical zero with denominator 1.
        let z = RatX::new(PolyX::zero(), p(&[5])).unwrap();
        assert_eq!(z, RatX::zero());
        assert!(z.den().is_one());

        // 2x/4 becomes x/2 with monic denominator... num x, den 2 -> (1/2) x.
        let h = RatX::new(p(&[0, 2]), p(&[4])).unwrap();
        assert_eq!(h, RatX::from_poly(PolyX::new(vec![rat(0), ratio(1, 2)])));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RatX::new(p(&[1]), PolyX::zero()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn field_ops() {
        let a = RatX::new(p(&[1]), p(&[0, 1])).unwrap(); // 1/x
        let b = RatX::x();
        assert!(a.mul(&b).is_one());
        let s = a.add(&b); // (x^2+1)/x
        assert_eq!(s, RatX::new(p(&[1, 0, 1]), p(&[0, 1])).unwrap());
        assert_eq!(s.sub(&b), a);
        assert_eq!(a.div(&a).unwrap(), RatX::one());
    }

    #[test]
    fn dx_quotient_rule() {
        // d/dx (1/x) = -1/x^2
        let a = RatX::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(a.dx(), RatX::new(p(&[-1]), p(&[0, 0, 1])).unwrap());
        // Leibniz on a product.
        let b = RatX::new(p(&[1, 1]), p(&[2, 0, 1])).unwrap();
        let lhs = a.mul(&b).dx();
        let rhs = a.dx().mul(&b).add(&a.mul(&b.dx()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_detects_poles() {
        let a = RatX::new(p(&[1]), p(&[-1, 1])).unwrap(); // 1/(x-1)
        assert_eq!(a.eval(&rat(3)).unwrap(), ratio(1, 2));
        assert!(matches!(a.eval(&rat(1)), Err(Error::PoleAtPoint)));
    }
}
