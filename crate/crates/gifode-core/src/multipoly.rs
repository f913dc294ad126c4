//! Multivariate polynomials over the rationals, used by the algebraic
//! solver. Variables are the constant ansatz unknowns and any declared
//! parameters; jets never appear here.

use crate::diffpoly::Monomial;
use crate::rat::Rat;
use crate::vars::Var;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(Monomial::var(v), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_add(terms: &mut BTreeMap<Monomial, Rat>, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        MultiPoly { terms }
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                Self::insert_add(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        MultiPoly { terms }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn deg_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.deg_of(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.exps() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.deg_of(v) > 0)
    }

    pub fn has_params(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.exps().iter().any(|(v, _)| v.is_param()))
    }

    /// Split off the given variable: returns coefficients of its powers,
    /// each free of `v`, index = power.
    pub fn coeffs_in(&self, v: &Var) -> Vec<MultiPoly> {
        let d = self.deg_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let k = m.deg_of(v) as usize;
            Self::insert_add(&mut out[k].terms, m.without(v), c.clone());
        }
        out
    }

    /// Substitute a polynomial for a variable.
    pub fn subst(&self, v: &Var, rep: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for c in self.coeffs_in(v).into_iter().rev() {
            acc = acc.mul(rep).add(&c);
        }
        acc
    }

    /// Substitute a rational function `num/den` for a variable and clear the
    /// denominator: returns the numerator of the result times `den^deg`.
    pub fn subst_frac(&self, v: &Var, num: &MultiPoly, den: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in(v);
        let d = coeffs.len() - 1;
        let mut acc = MultiPoly::zero();
        let mut den_pow = MultiPoly::one();
        let mut lifted: Vec<MultiPoly> = Vec::with_capacity(coeffs.len());
        for c in coeffs.iter().rev() {
            lifted.push(c.mul(&den_pow));
            den_pow = den_pow.mul(den);
        }
        lifted.reverse();
        // lifted[k] = c_k * den^(d-k); result = sum c_k num^k den^(d-k)
        for k in (0..=d).rev() {
            acc = acc.mul(num).add(&lifted[k]);
        }
        acc
    }

    pub fn eval(&self, map: &BTreeMap<Var, Rat>) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.exps() {
                let val = map.get(v)?;
                for _ in 0..*e {
                    t *= val;
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Remove rational content and normalize the sign of the first term.
    pub fn normalize(&self) -> MultiPoly {
        if self.terms.is_empty() {
            return MultiPoly::zero();
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.terms.values().next().unwrap().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * &inv))
                .collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(w, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(w, "-")?;
                }
                first = false;
            } else if neg {
                write!(w, " - ")?;
            } else {
                write!(w, " + ")?;
            }
            if m.is_one() {
                write!(w, "{}", mag)?;
            } else if mag.is_one() {
                write!(w, "{}", m)?;
            } else {
                write!(w, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};
    use crate::vars::Side;

    fn u() -> Var {
        Var::coef(Side::Num, 0, 0)
    }

    fn v() -> Var {
        Var::coef(Side::Den, 0, 0)
    }

    #[test]
    fn ring_ops() {
        let p = MultiPoly::var(u()).add(&MultiPoly::constant(rat(2)));
        let q = MultiPoly::var(u()).sub(&MultiPoly::constant(rat(2)));
        let prod = p.mul(&q);
        let expect = MultiPoly::var(u())
            .pow(2)
            .sub(&MultiPoly::constant(rat(4)));
        assert_eq!(prod, expect);
        assert_eq!(prod.degree(), 2);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn subst_and_eval() {
        // u^2 + u v, with u := v - 1
        let p = MultiPoly::var(u())
            .pow(2)
            .add(&MultiPoly::var(u()).mul(&MultiPoly::var(v())));
        let rep = MultiPoly::var(v()).sub(&MultiPoly::constant(rat(1)));
        let s = p.subst(&u(), &rep);
        let mut map = BTreeMap::new();
        map.insert(v(), rat(3));
        assert_eq!(s.eval(&map).unwrap(), rat(10));
        map.insert(u(), rat(2));
        assert_eq!(p.eval(&map).unwrap(), rat(10));
    }

    #[test]
    fn subst_frac_clears_denominator() {
        // u^2 + 1 with u := a/b becomes a^2 + b^2
        let p = MultiPoly::var(u()).pow(2).add(&MultiPoly::one());
        let a = MultiPoly::var(v());
        let b = MultiPoly::var(Var::param("b"));
        let s = p.subst_frac(&u(), &a, &b);
        let expect = a.pow(2).add(&b.pow(2));
        assert_eq!(s, expect);
    }

    #[test]
    fn normalize_removes_content_and_sign() {
        let p = MultiPoly::var(u())
            .scale(&rat(-4))
            .add(&MultiPoly::constant(rat(-6)));
        let n = p.normalize();
        // first term is the constant; sign convention makes it positive
        let expect = MultiPoly::var(u())
            .scale(&rat(2))
            .add(&MultiPoly::constant(rat(3)));
        assert_eq!(n, expect);
        let frac = MultiPoly::var(u()).scale(&ratio(1, 2));
        assert_eq!(frac.normalize(), MultiPoly::var(u()));
    }

    #[test]
    fn coeffs_in_splits_by_power() {
        let p = MultiPoly::var(u())
            .pow(2)
            .mul(&MultiPoly::var(v()))
            .add(&MultiPoly::var(u()))
            .add(&MultiPoly::constant(rat(5)));
        let cs = p.coeffs_in(&u());
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], MultiPoly::constant(rat(5)));
        assert_eq!(cs[1], MultiPoly::one());
        assert_eq!(cs[2], MultiPoly::var(v()));
    }

    #[test]
    fn display_is_readable() {
        let p = MultiPoly::var(u())
            .scale(&rat(-1))
            .add(&MultiPoly::constant(rat(2)));
        assert_eq!(format!("{}", p), "2 - c0");
    }
}
