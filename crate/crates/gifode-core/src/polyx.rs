//! Dense univariate polynomials in `x` over the rationals.

use crate::rat::{to_f64, Rat};
use num_traits::{One, Zero};
use std::fmt;

/// Polynomial in `x` with exact rational coefficients, stored densely by
/// ascending power. The zero polynomial is the empty list; otherwise the
/// leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyX {
    coeffs: Vec<Rat>,
}

impl PolyX {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        PolyX { coeffs }
    }

    pub fn zero() -> Self {
        PolyX { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyX::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        PolyX::new(vec![c])
    }

    pub fn x() -> Self {
        PolyX::new(vec![Rat::zero(), Rat::one()])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k];
        v.push(c);
        PolyX::new(v)
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

    /// Degree; 0 for the zero polynomial and constants.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, o: &PolyX) -> PolyX {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + o.coeff(i));
        }
        PolyX::new(v)
    }

    pub fn sub(&self, o: &PolyX) -> PolyX {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyX {
        PolyX {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &PolyX) -> PolyX {
        if self.is_zero() || o.is_zero() {
            return PolyX::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        PolyX::new(v)
    }

    pub fn scale(&self, c: &Rat) -> PolyX {
        if c.is_zero() {
            return PolyX::zero();
        }
        PolyX {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, d: &PolyX) -> (PolyX, PolyX) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (PolyX::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlead = d.leading();
        let dlen = d.coeffs.len();
        let mut quot = vec![Rat::zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dlen - 1] / &dlead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem[k + j] -= t;
            }
            quot[k] = c;
        }
        (PolyX::new(quot), PolyX::new(rem))
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &PolyX) -> Option<PolyX> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd via the Euclidean algorithm; gcd(0,0) = 0.
    pub fn gcd(&self, o: &PolyX) -> PolyX {
        let mut a = self.make_monic();
        let mut b = o.make_monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.make_monic();
        }
        a
    }

    pub fn lcm(&self, o: &PolyX) -> PolyX {
        if self.is_zero() || o.is_zero() {
            return PolyX::zero();
        }
        let g = self.gcd(o);
        self.mul(&o.div_exact(&g).expect("gcd divides")).make_monic()
    }

    pub fn make_monic(&self) -> PolyX {
        if self.is_zero() {
            return PolyX::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> PolyX {
        if self.coeffs.len() <= 1 {
            return PolyX::zero();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(i.into()))
            .collect();
        PolyX::new(v)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> PolyX {
        let mut v = vec![Rat::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            v.push(c / Rat::from_integer((i as i64 + 1).into()));
        }
        PolyX::new(v)
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * at + to_f64(c);
        }
        acc
    }

    pub fn pow(&self, n: usize) -> PolyX {
        let mut acc = PolyX::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for PolyX {
    /// Descending powers, explicit `*`, e.g. `2*x^2 - x + 1/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c < &Rat::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}*x", mag)?,
                (_, true) => write!(f, "x^{}", k)?,
                (_, false) => write!(f, "{}*x^{}", mag, k)?,
            }
        }
        Ok(())
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
    fn divrem_roundtrip() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[-1, 1]); // x - 1
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = p(&[-2, 0, 2]); // 2x^2 - 2
        let b = p(&[-2, 2]); // 2x - 2
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn derivative_and_antiderivative() {
        let a = p(&[1, 2, 3]); // 3x^2 + 2x + 1
        assert_eq!(a.derivative(), p(&[2, 6]));
        assert_eq!(a.antiderivative().derivative(), a);
        assert_eq!(a.antiderivative().coeff(2), rat(1));
        assert_eq!(a.antiderivative().coeff(3), ratio(1, 1));
    }

    #[test]
    fn display_formats() {
        assert_eq!(p(&[1, -1, 2]).to_string(), "2*x^2 - x + 1");
        assert_eq!(p(&[0]).to_string(), "0");
        assert_eq!(p(&[0, 1]).to_string(), "x");
        assert_eq!(PolyX::new(vec![ratio(1, 2)]).to_string(), "1/2");
    }
}
