//! Differential polynomials: polynomials in jet variables, constant unknowns
//! and parameters, with coefficients in the rational functions of `x`.
//!
//! These house the determining systems. The total x-derivative differentiates
//! coefficients as rational functions and bumps jet orders by the product
//! rule; constant unknowns and parameters have derivative zero.

use crate::error::{Error, Result};
use crate::polyx::PolyX;
use crate::rat::Rat;
use crate::ratx::RatX;
use crate::vars::{Var, JET_CAP_DEFAULT};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Power product of variables; sorted, exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: vec![] }
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort();
        let mut exps: Vec<(Var, u32)> = vec![];
        for (v, e) in pairs {
            match exps.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => exps.push((v, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut pairs = self.exps.clone();
        pairs.extend(o.exps.iter().cloned());
        Monomial::from_pairs(pairs)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e).sum()
    }

    pub fn deg_of(&self, v: &Var) -> u32 {
        self.exps
            .iter()
            .find(|(w, _)| w == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn exps(&self) -> &[(Var, u32)] {
        &self.exps
    }

    /// The monomial with every power of `v` removed.
    pub fn without(&self, v: &Var) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .filter(|(w, _)| w != v)
                .cloned()
                .collect(),
        }
    }

    /// Removes one power of `v`; `None` if `v` does not divide.
    fn deflate(&self, v: &Var) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        let pos = exps.iter().position(|(w, _)| w == v)?;
        if exps[pos].1 == 1 {
            exps.remove(pos);
        } else {
            exps[pos].1 -= 1;
        }
        Some(Monomial { exps })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over `RatX` in the `Var` indeterminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, RatX>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        DiffPoly::constant(RatX::one())
    }

    pub fn constant(c: RatX) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), RatX::one());
        DiffPoly { terms }
    }

    pub fn term(mono: Monomial, coef: RatX) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(mono, coef);
        }
        DiffPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatX)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, mono: Monomial, coef: RatX) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                let s = c.add(&coef);
                if s.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(mono, coef);
            }
        }
    }

    pub fn add(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiffPoly) -> DiffPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.insert_add(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatX) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    /// Total x-derivative with a jet order cap.
    pub fn dx_capped(&self, cap: u32) -> Result<DiffPoly> {
        let mut out = DiffPoly::zero();
        for (mono, coef) in &self.terms {
            out.insert_add(mono.clone(), coef.dx());
            for (v, e) in mono.exps() {
                let Some(vd) = v.dx() else { continue };
                if vd.order() > cap {
                    return Err(Error::JetCapExceeded {
                        order: vd.order(),
                        cap,
                    });
                }
                let base = mono.deflate(v).expect("factor present");
                let bumped = base.mul(&Monomial::var(vd));
                out.insert_add(bumped, coef.scale(&Rat::from_integer((*e).into())));
            }
        }
        Ok(out)
    }

    pub fn dx(&self) -> Result<DiffPoly> {
        self.dx_capped(JET_CAP_DEFAULT)
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

    pub fn max_jet_order(&self) -> u32 {
        self.vars().iter().map(|v| v.order()).max().unwrap_or(0)
    }

    /// Total degree in the indeterminates.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Replaces one variable by a polynomial.
    pub fn subst_var(&self, v: &Var, rep: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (mono, coef) in &self.terms {
            let e = mono.deg_of(v);
            if e == 0 {
                out.insert_add(mono.clone(), coef.clone());
                continue;
            }
            let mut rest = mono.clone();
            for _ in 0..e {
                rest = rest.deflate(v).expect("deg_of counted it");
            }
            let mut pw = DiffPoly::one();
            for _ in 0..e {
                pw = pw.mul(rep);
            }
            out = out.add(&pw.mul(&DiffPoly::term(rest, coef.clone())));
        }
        out
    }

    /// Replaces every listed variable by a rational constant.
    pub fn subst_rats(&self, map: &BTreeMap<Var, Rat>) -> DiffPoly {
        let mut out = self.clone();
        for (v, r) in map {
            out = out.subst_var(v, &DiffPoly::constant(RatX::constant(r.clone())));
        }
        out
    }

    /// The value as a rational function, if no indeterminates remain.
    pub fn as_ratx(&self) -> Option<RatX> {
        if self.terms.is_empty() {
            return Some(RatX::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    /// Clears denominators and removes polynomial content, preserving the
    /// zero set. The first coefficient's leading rational is made positive.
    pub fn normalize_primitive(&self) -> DiffPoly {
        if self.terms.is_empty() {
            return DiffPoly::zero();
        }
        let mut den_lcm = PolyX::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.den());
        }
        let cleared: Vec<(Monomial, PolyX)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let extra = den_lcm.div_exact(c.den()).expect("lcm divisible");
                (m.clone(), c.num().mul(&extra))
            })
            .collect();
        let mut g = PolyX::zero();
        for (_, p) in &cleared {
            g = g.gcd(p);
        }
        if g.is_zero() {
            return DiffPoly::zero();
        }
        // The poly gcd is monic; the numeric content comes out separately.
        let divided: Vec<(Monomial, PolyX)> = cleared
            .into_iter()
            .map(|(m, p)| (m, p.div_exact(&g).expect("gcd divides")))
            .collect();
        let content = {
            let mut num_gcd = num_bigint::BigInt::from(0);
            let mut den_lcm = num_bigint::BigInt::from(1);
            for (_, p) in &divided {
                for c in p.coeffs() {
                    num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
                    den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
                }
            }
            Rat::new(num_gcd, den_lcm)
        };
        let mut terms = BTreeMap::new();
        for (m, p) in divided {
            let q = p.scale(&content.recip());
            if !q.is_zero() {
                terms.insert(m, RatX::from_poly(q));
            }
        }
        let out = DiffPoly { terms };
        let first = out.terms.values().next().expect("nonzero");
        if first.num().leading() < Rat::from_integer(0.into()) {
            out.neg()
        } else {
            out
        }
    }
}

impl fmt::Display for DiffPoly {
    /// Deterministic sum of terms; non-constant coefficients parenthesized
    /// so the output re-parses with ordinary precedence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let zero = Rat::from_integer(0.into());
        let mut first = true;
        for (mono, coef) in &self.terms {
            let (neg, mag) = match coef.as_constant() {
                Some(c) if c < zero => (true, RatX::constant(-c)),
                _ => (false, coef.clone()),
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
            let coef_str = if mag.is_one() && !mono.is_one() {
                None
            } else if mag.is_constant() {
                Some(format!("{}", mag))
            } else {
                Some(format!("({})", mag))
            };
            match (coef_str, mono.is_one()) {
                (None, _) => write!(f, "{}", mono)?,
                (Some(c), true) => write!(f, "{}", c)?,
                (Some(c), false) => write!(f, "{}*{}", c, mono)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::vars::Side;

    fn jet(i: u32, o: u32) -> DiffPoly {
        DiffPoly::var(Var::jet(Side::Num, i, o))
    }

    #[test]
    fn dx_product_rule() {
        // d/dx (x * a1_0^2) = a1_0^2 + 2x a1_0 a1_0'
        let p = DiffPoly::constant(RatX::x()).mul(&jet(0, 0)).mul(&jet(0, 0));
        let d = p.dx().unwrap();
        let expect = jet(0, 0).mul(&jet(0, 0)).add(
            &DiffPoly::constant(RatX::x().scale(&rat(2)))
                .mul(&jet(0, 0))
                .mul(&jet(0, 1)),
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn dx_respects_cap() {
        let p = jet(0, 3);
        assert!(matches!(
            p.dx(),
            Err(Error::JetCapExceeded { order: 4, cap: 3 })
        ));
    }

    #[test]
    fn subst_and_eval() {
        // a1_0^2 + x at a1_0 = 3 gives 9 + x.
        let p = jet(0, 0).mul(&jet(0, 0)).add(&DiffPoly::constant(RatX::x()));
        let mut m = BTreeMap::new();
        m.insert(Var::jet(Side::Num, 0, 0), rat(3));
        let v = p.subst_rats(&m).as_ratx().unwrap();
        assert_eq!(
            v,
            RatX::x().add(&RatX::constant(rat(9)))
        );
    }

    #[test]
    fn normalize_clears_denominators_and_content() {
        // (2/x) a1_0 + 4 -> a1_0 + 2x after clearing x and content 2.
        let p = jet(0, 0)
            .scale(&RatX::new(PolyX::constant(rat(2)), PolyX::x()).unwrap())
            .add(&DiffPoly::constant(RatX::constant(rat(4))));
        let n = p.normalize_primitive();
        let expect = jet(0, 0).add(&DiffPoly::constant(RatX::from_poly(PolyX::x().scale(&rat(2)))));
        assert_eq!(n, expect);
    }

    #[test]
    fn display_round_shape() {
        let p = jet(0, 1)
            .scale(&RatX::x())
            .sub(&DiffPoly::var(Var::coef(Side::Den, 0, 0)));
        assert_eq!(p.to_string(), "(x)*a1_0' - d0");
    }
}
