//! Dense polynomials in `y` over a pluggable coefficient ring.
//!
//! The two rings used are `RatX` (known ODE data) and `DiffPoly` (ansatz
//! carriers). Division and gcd are available when the coefficients form a
//! field, which `RatX` does.

use crate::diffpoly::DiffPoly;
use crate::error::Result;
use crate::rat::Rat;
use crate::ratx::RatX;
use std::fmt;

/// Commutative ring operations needed for polynomial-in-y arithmetic.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn from_rat(r: Rat) -> Self;
    /// d/dx in the coefficient ring.
    fn dx(&self) -> Result<Self>
    where
        Self: Sized;
    /// The value as a plain rational, if it is one.
    fn as_rat(&self) -> Option<Rat>;
    /// Multiplicative inverse when one exists in the ring.
    fn try_inv(&self) -> Option<Self>
    where
        Self: Sized;
    /// Rendering safe for use as a factor in a product.
    fn render_factor(&self) -> String;
}

/// Coefficient rings that are fields.
pub trait FieldCoeff: Coeff {
    fn inv(&self) -> Result<Self>
    where
        Self: Sized;
}

impl Coeff for RatX {
    fn zero() -> Self {
        RatX::zero()
    }
    fn one() -> Self {
        RatX::one()
    }
    fn is_zero(&self) -> bool {
        RatX::is_zero(self)
    }
    fn is_one(&self) -> bool {
        RatX::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatX::add(self, o)
    }
    fn neg(&self) -> Self {
        RatX::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatX::mul(self, o)
    }
    fn from_rat(r: Rat) -> Self {
        RatX::constant(r)
    }
    fn dx(&self) -> Result<Self> {
        Ok(RatX::dx(self))
    }
    fn as_rat(&self) -> Option<Rat> {
        self.as_constant()
    }
    fn try_inv(&self) -> Option<Self> {
        RatX::inv(self).ok()
    }
    fn render_factor(&self) -> String {
        if self.is_constant() {
            format!("{}", self)
        } else {
            format!("({})", self)
        }
    }
}

impl FieldCoeff for RatX {
    fn inv(&self) -> Result<Self> {
        RatX::inv(self)
    }
}

impl Coeff for DiffPoly {
    fn zero() -> Self {
        DiffPoly::zero()
    }
    fn one() -> Self {
        DiffPoly::one()
    }
    fn is_zero(&self) -> bool {
        DiffPoly::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.as_ratx().map_or(false, |r| r.is_one())
    }
    fn add(&self, o: &Self) -> Self {
        DiffPoly::add(self, o)
    }
    fn neg(&self) -> Self {
        DiffPoly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        DiffPoly::mul(self, o)
    }
    fn from_rat(r: Rat) -> Self {
        DiffPoly::constant(RatX::constant(r))
    }
    fn dx(&self) -> Result<Self> {
        DiffPoly::dx(self)
    }
    fn as_rat(&self) -> Option<Rat> {
        self.as_ratx().and_then(|r| r.as_constant())
    }
    fn try_inv(&self) -> Option<Self> {
        let r = self.as_ratx()?;
        RatX::inv(&r).ok().map(DiffPoly::constant)
    }
    fn render_factor(&self) -> String {
        if let Some(r) = self.as_ratx() {
            return r.render_factor();
        }
        let single_monomial = self.n_terms() == 1
            && self
                .terms()
                .next()
                .map_or(false, |(m, c)| !m.is_one() && c.is_one());
        if single_monomial {
            format!("{}", self)
        } else {
            format!("({})", self)
        }
    }
}

/// Dense polynomial in `y`, ascending powers, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyY<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> PolyY<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        PolyY { coeffs }
    }

    pub fn zero() -> Self {
        PolyY { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyY::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        PolyY::new(vec![c])
    }

    pub fn y() -> Self {
        PolyY::new(vec![C::zero(), C::one()])
    }

    /// `c * y^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v: Vec<C> = (0..k).map(|_| C::zero()).collect();
        v.push(c);
        PolyY::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree in `y`; 0 for constants and zero.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn leading(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, o: &PolyY<C>) -> PolyY<C> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i).add(&o.coeff(i)));
        }
        PolyY::new(v)
    }

    pub fn sub(&self, o: &PolyY<C>) -> PolyY<C> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyY<C> {
        PolyY {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, o: &PolyY<C>) -> PolyY<C> {
        if self.is_zero() || o.is_zero() {
            return PolyY::zero();
        }
        let mut v: Vec<C> = (0..self.coeffs.len() + o.coeffs.len() - 1)
            .map(|_| C::zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        PolyY::new(v)
    }

    pub fn scale(&self, c: &C) -> PolyY<C> {
        if c.is_zero() {
            return PolyY::zero();
        }
        PolyY::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, n: usize) -> PolyY<C> {
        let mut acc = PolyY::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/dy.
    pub fn dy(&self) -> PolyY<C> {
        if self.coeffs.len() <= 1 {
            return PolyY::zero();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&C::from_rat(Rat::from_integer((i as i64).into()))))
            .collect();
        PolyY::new(v)
    }

    /// d/dx, coefficient-wise.
    pub fn dx(&self) -> Result<PolyY<C>> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.dx()?);
        }
        Ok(PolyY::new(v))
    }

    /// Horner evaluation at a rational `y`, staying in the coefficient ring.
    pub fn eval_rat(&self, y: &Rat) -> C {
        let yc = C::from_rat(y.clone());
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&yc).add(c);
        }
        acc
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> PolyY<D> {
        PolyY::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact division in a general coefficient ring. Succeeds only when the
    /// divisor's leading coefficient is invertible and the remainder is zero.
    pub fn try_div_exact(&self, d: &PolyY<C>) -> Option<PolyY<C>> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(PolyY::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let dlead_inv = d.leading().try_inv()?;
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = rem[k].mul(&dlead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].sub(&q.mul(dc));
            }
            quot[k - dd] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(PolyY::new(quot))
        } else {
            None
        }
    }
}

impl<C: FieldCoeff> PolyY<C> {
    /// Quotient and remainder over a coefficient field; divisor nonzero.
    pub fn divrem(&self, d: &PolyY<C>) -> Result<(PolyY<C>, PolyY<C>)> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((PolyY::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let dlead_inv = d.leading().inv()?;
        let dlen = d.coeffs.len();
        let mut quot: Vec<C> = (0..rem.len() - dlen + 1).map(|_| C::zero()).collect();
        for k in (0..quot.len()).rev() {
            let c = rem[k + dlen - 1].mul(&dlead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&dc.mul(&c));
            }
            quot[k] = c;
        }
        Ok((PolyY::new(quot), PolyY::new(rem)))
    }

    pub fn div_exact(&self, d: &PolyY<C>) -> Option<PolyY<C>> {
        let (q, r) = self.divrem(d).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd via Euclid. Remainders are renormalized to monic at every
    /// step; without that the coefficient field elements in the remainder
    /// sequence grow out of control.
    pub fn gcd(&self, o: &PolyY<C>) -> PolyY<C> {
        let mut a = self.make_monic();
        let mut b = o.make_monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.make_monic();
        }
        a
    }

    pub fn make_monic(&self) -> PolyY<C> {
        if self.is_zero() {
            return PolyY::zero();
        }
        let inv = self.leading().inv().expect("nonzero leading");
        self.scale(&inv)
    }
}

impl PolyY<RatX> {
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c.eval_f64(x);
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval_xy(&self, x: &Rat, y: &Rat) -> Result<Rat> {
        let mut acc = Rat::from_integer(0.into());
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c.eval(x)?;
        }
        Ok(acc)
    }
}

impl<C: Coeff> fmt::Display for PolyY<C> {
    /// Descending powers of `y`; rational constants get their sign folded
    /// into the separator, other coefficients render as factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let zero = Rat::from_integer(0.into());
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c.as_rat() {
                Some(r) if r < zero => (true, C::from_rat(-r)),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", mag.render_factor())?,
                (1, true) => write!(f, "y")?,
                (1, false) => write!(f, "{}*y", mag.render_factor())?,
                (_, true) => write!(f, "y^{}", k)?,
                (_, false) => write!(f, "{}*y^{}", mag.render_factor(), k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn py(cs: &[i64]) -> PolyY<RatX> {
        PolyY::new(cs.iter().map(|&c| RatX::constant(rat(c))).collect())
    }

    #[test]
    fn ring_ops_and_degree() {
        let a = py(&[1, 0, 1]); // y^2 + 1
        let b = py(&[0, 1]); // y
        assert_eq!(a.mul(&b).deg(), 3);
        assert_eq!(a.add(&a.neg()), PolyY::zero());
        assert_eq!(a.sub(&a), PolyY::zero());
    }

    #[test]
    fn dy_and_dx() {
        let x = RatX::x();
        // p = x*y^2 + y
        let p = PolyY::new(vec![RatX::zero(), RatX::one(), x.clone()]);
        assert_eq!(
            p.dy(),
            PolyY::new(vec![RatX::one(), x.scale(&rat(2))])
        );
        assert_eq!(
            p.dx().unwrap(),
            PolyY::new(vec![RatX::zero(), RatX::zero(), RatX::one()])
        );
    }

    #[test]
    fn field_division() {
        let a = py(&[-1, 0, 1]); // y^2 - 1
        let b = py(&[-1, 1]); // y - 1
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, py(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b.make_monic());
    }

    #[test]
    fn eval_paths_agree() {
        let p = PolyY::new(vec![RatX::x(), RatX::constant(ratio(1, 2))]);
        // p = y/2 + x at (x, y) = (2, 4) is 4.
        assert_eq!(p.eval_xy(&rat(2), &rat(4)).unwrap(), rat(4));
        assert!((p.eval_f64(2.0, 4.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn display_descending() {
        let p = PolyY::new(vec![
            RatX::constant(rat(-1)),
            RatX::x(),
            RatX::constant(rat(2)),
        ]);
        assert_eq!(p.to_string(), "2*y^2 + (x)*y - 1");
    }
}
