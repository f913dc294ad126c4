//! Formula trees: the closed-form layer for first integrals.
//!
//! A tree mixes exact rational structure with `ln`, `exp` and anchored
//! integral nodes. Everything a tree cannot express exactly stays a
//! quadrature-backed integral; derivatives are always exact via
//! [`tree_diff`], values come from [`tree_eval`].

use crate::error::{Error, Result};
use crate::parse::{parse_expr, Expr};
use crate::quad::{adaptive_simpson, QuadSettings};
use crate::rat::{rat, to_f64, Rat};
use crate::ratx::RatX;
use crate::raty::RatY;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum FormulaTree {
    Const(Rat),
    X,
    Y,
    Param(String),
    Add(Vec<FormulaTree>),
    Mul(Vec<FormulaTree>),
    PowInt(Box<FormulaTree>, i64),
    Ln(Box<FormulaTree>),
    Exp(Box<FormulaTree>),
    /// Integral from `anchor` to the current `y`; the integrand's `y` is
    /// the integration dummy.
    IntY {
        anchor: Rat,
        integrand: Box<FormulaTree>,
    },
    /// Integral from `anchor` to the current `x`; dummy is `x`.
    IntX {
        anchor: Rat,
        integrand: Box<FormulaTree>,
    },
}

/// Differentiation direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

use FormulaTree::*;

impl FormulaTree {
    pub fn constant(r: Rat) -> Self {
        Const(r)
    }

    pub fn num(n: i64) -> Self {
        Const(rat(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Const(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Const(r) if *r == rat(1))
    }

    /// Flattening sum; constants fold into one trailing term.
    pub fn sum(parts: Vec<FormulaTree>) -> Self {
        let mut out: Vec<FormulaTree> = Vec::new();
        let mut acc = Rat::zero();
        let mut stack: Vec<FormulaTree> = parts.into_iter().rev().collect();
        while let Some(p) = stack.pop() {
            match p {
                Add(children) => stack.extend(children.into_iter().rev()),
                Const(r) => acc += r,
                other => out.push(other),
            }
        }
        if !acc.is_zero() {
            out.push(Const(acc));
        }
        match out.len() {
            0 => Const(Rat::zero()),
            1 => out.pop().unwrap(),
            _ => Add(out),
        }
    }

    /// Flattening product; constants fold into one leading coefficient.
    pub fn product(parts: Vec<FormulaTree>) -> Self {
        let mut out: Vec<FormulaTree> = Vec::new();
        let mut acc = rat(1);
        let mut stack: Vec<FormulaTree> = parts.into_iter().rev().collect();
        while let Some(p) = stack.pop() {
            match p {
                Mul(children) => stack.extend(children.into_iter().rev()),
                Const(r) => acc *= r,
                other => out.push(other),
            }
        }
        if acc.is_zero() {
            return Const(Rat::zero());
        }
        if acc != rat(1) {
            out.insert(0, Const(acc));
        }
        match out.len() {
            0 => Const(rat(1)),
            1 => out.pop().unwrap(),
            _ => Mul(out),
        }
    }

    pub fn neg(self) -> Self {
        FormulaTree::product(vec![FormulaTree::num(-1), self])
    }

    pub fn minus(self, other: FormulaTree) -> Self {
        FormulaTree::sum(vec![self, other.neg()])
    }

    pub fn pow(self, k: i64) -> Self {
        if k == 1 {
            return self;
        }
        if k == 0 {
            return FormulaTree::num(1);
        }
        match self {
            Const(r) => match crate::rat::pow_i64(&r, k) {
                Some(v) => Const(v),
                None => PowInt(Box::new(Const(r)), k),
            },
            PowInt(b, k2) => PowInt(b, k2 * k),
            other => PowInt(Box::new(other), k),
        }
    }

    pub fn ln(self) -> Self {
        if self.is_one() {
            FormulaTree::num(0)
        } else {
            Ln(Box::new(self))
        }
    }

    pub fn exp(self) -> Self {
        if self.is_zero() {
            FormulaTree::num(1)
        } else {
            Exp(Box::new(self))
        }
    }

    pub fn int_y(anchor: Rat, integrand: FormulaTree) -> Self {
        if integrand.is_zero() {
            return FormulaTree::num(0);
        }
        IntY {
            anchor,
            integrand: Box::new(integrand),
        }
    }

    pub fn int_x(anchor: Rat, integrand: FormulaTree) -> Self {
        if integrand.is_zero() {
            return FormulaTree::num(0);
        }
        IntX {
            anchor,
            integrand: Box::new(integrand),
        }
    }

    /// Free occurrence of `y` (the upper limit of an `IntY` counts).
    pub fn contains_y(&self) -> bool {
        match self {
            Const(_) | X | Param(_) => false,
            Y | IntY { .. } => true,
            Add(ps) | Mul(ps) => ps.iter().any(|p| p.contains_y()),
            PowInt(b, _) => b.contains_y(),
            Ln(u) | Exp(u) => u.contains_y(),
            IntX { integrand, .. } => integrand.contains_y(),
        }
    }

    pub fn contains_x(&self) -> bool {
        match self {
            Const(_) | Y | Param(_) => false,
            X | IntX { .. } => true,
            Add(ps) | Mul(ps) => ps.iter().any(|p| p.contains_x()),
            PowInt(b, _) => b.contains_x(),
            Ln(u) | Exp(u) => u.contains_x(),
            IntY { integrand, .. } => integrand.contains_x(),
        }
    }
}

/// Exact derivative along an axis; integral nodes follow the Leibniz rule.
pub fn tree_diff(t: &FormulaTree, axis: Axis) -> FormulaTree {
    match t {
        Const(_) | Param(_) => FormulaTree::num(0),
        X => FormulaTree::num(if axis == Axis::X { 1 } else { 0 }),
        Y => FormulaTree::num(if axis == Axis::Y { 1 } else { 0 }),
        Add(ps) => FormulaTree::sum(ps.iter().map(|p| tree_diff(p, axis)).collect()),
        Mul(ps) => {
            let mut terms = Vec::new();
            for i in 0..ps.len() {
                let mut factors = ps.clone();
                factors[i] = tree_diff(&ps[i], axis);
                terms.push(FormulaTree::product(factors));
            }
            FormulaTree::sum(terms)
        }
        PowInt(b, k) => FormulaTree::product(vec![
            FormulaTree::num(*k),
            b.as_ref().clone().pow(k - 1),
            tree_diff(b, axis),
        ]),
        Ln(u) => FormulaTree::product(vec![
            tree_diff(u, axis),
            u.as_ref().clone().pow(-1),
        ]),
        Exp(u) => FormulaTree::product(vec![tree_diff(u, axis), t.clone()]),
        IntY { anchor, integrand } => match axis {
            Axis::Y => integrand.as_ref().clone(),
            Axis::X => FormulaTree::int_y(anchor.clone(), tree_diff(integrand, Axis::X)),
        },
        IntX { anchor, integrand } => match axis {
            Axis::X => integrand.as_ref().clone(),
            Axis::Y => FormulaTree::int_x(anchor.clone(), tree_diff(integrand, Axis::Y)),
        },
    }
}

fn eval_depth(t: &FormulaTree, x: f64, y: f64, q: &QuadSettings, depth: u32) -> Result<f64> {
    let finite = |v: f64| -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::PoleOnPath)
        }
    };
    match t {
        Const(r) => Ok(to_f64(r)),
        X => Ok(x),
        Y => Ok(y),
        Param(name) => Err(Error::DomainError {
            what: format!("unbound parameter {}", name),
        }),
        Add(ps) => {
            let mut acc = 0.0;
            for p in ps {
                acc += eval_depth(p, x, y, q, depth)?;
            }
            finite(acc)
        }
        Mul(ps) => {
            let mut acc = 1.0;
            for p in ps {
                acc *= eval_depth(p, x, y, q, depth)?;
            }
            finite(acc)
        }
        PowInt(b, k) => {
            let v = eval_depth(b, x, y, q, depth)?;
            if *k < 0 && v == 0.0 {
                return Err(Error::PoleOnPath);
            }
            let k32 = i32::try_from(*k).map_err(|_| Error::PoleOnPath)?;
            finite(v.powi(k32))
        }
        Ln(u) => {
            let v = eval_depth(u, x, y, q, depth)?;
            if v <= 0.0 {
                return Err(Error::DomainError {
                    what: "ln of a nonpositive value".to_string(),
                });
            }
            finite(v.ln())
        }
        Exp(u) => {
            let v = eval_depth(u, x, y, q, depth)?;
            finite(v.exp())
        }
        IntY { anchor, integrand } => {
            if depth + 1 > q.max_int_depth {
                return Err(Error::DepthExceeded);
            }
            adaptive_simpson(
                &mut |s| eval_depth(integrand, x, s, q, depth + 1),
                to_f64(anchor),
                y,
                q.tol,
            )
        }
        IntX { anchor, integrand } => {
            if depth + 1 > q.max_int_depth {
                return Err(Error::DepthExceeded);
            }
            adaptive_simpson(
                &mut |s| eval_depth(integrand, s, y, q, depth + 1),
                to_f64(anchor),
                x,
                q.tol,
            )
        }
    }
}

/// Numeric value at a point; integral nodes use adaptive quadrature.
pub fn tree_eval(t: &FormulaTree, x: f64, y: f64, q: &QuadSettings) -> Result<f64> {
    eval_depth(t, x, y, q, 0)
}

/// Substitutes a rational value for the free `y`. An `IntY` node collapses
/// to zero when its anchor equals the value; any other anchored y-integral
/// has no tree form and is reported as a domain error.
pub fn subst_y(t: &FormulaTree, val: &Rat) -> Result<FormulaTree> {
    Ok(match t {
        Const(_) | X | Param(_) => t.clone(),
        Y => Const(val.clone()),
        Add(ps) => FormulaTree::sum(
            ps.iter()
                .map(|p| subst_y(p, val))
                .collect::<Result<Vec<_>>>()?,
        ),
        Mul(ps) => FormulaTree::product(
            ps.iter()
                .map(|p| subst_y(p, val))
                .collect::<Result<Vec<_>>>()?,
        ),
        PowInt(b, k) => subst_y(b, val)?.pow(*k),
        Ln(u) => subst_y(u, val)?.ln(),
        Exp(u) => subst_y(u, val)?.exp(),
        IntY { anchor, .. } => {
            if anchor == val {
                FormulaTree::num(0)
            } else {
                return Err(Error::DomainError {
                    what: "y-integral evaluated away from its anchor".to_string(),
                });
            }
        }
        IntX { anchor, integrand } => {
            FormulaTree::int_x(anchor.clone(), subst_y(integrand, val)?)
        }
    })
}

/// Substitutes a rational value for the free `x`; mirror of [`subst_y`].
pub fn subst_x(t: &FormulaTree, val: &Rat) -> Result<FormulaTree> {
    Ok(match t {
        Const(_) | Y | Param(_) => t.clone(),
        X => Const(val.clone()),
        Add(ps) => FormulaTree::sum(
            ps.iter()
                .map(|p| subst_x(p, val))
                .collect::<Result<Vec<_>>>()?,
        ),
        Mul(ps) => FormulaTree::product(
            ps.iter()
                .map(|p| subst_x(p, val))
                .collect::<Result<Vec<_>>>()?,
        ),
        PowInt(b, k) => subst_x(b, val)?.pow(*k),
        Ln(u) => subst_x(u, val)?.ln(),
        Exp(u) => subst_x(u, val)?.exp(),
        IntX { anchor, .. } => {
            if anchor == val {
                FormulaTree::num(0)
            } else {
                return Err(Error::DomainError {
                    what: "x-integral evaluated away from its anchor".to_string(),
                });
            }
        }
        IntY { anchor, integrand } => {
            FormulaTree::int_y(anchor.clone(), subst_x(integrand, val)?)
        }
    })
}

/// Recognizes a tree that is a rational function of `x` alone.
pub fn tree_to_ratx(t: &FormulaTree) -> Option<RatX> {
    match t {
        Const(r) => Some(RatX::constant(r.clone())),
        X => Some(RatX::x()),
        Add(ps) => {
            let mut acc = RatX::zero();
            for p in ps {
                acc = acc.add(&tree_to_ratx(p)?);
            }
            Some(acc)
        }
        Mul(ps) => {
            let mut acc = RatX::one();
            for p in ps {
                acc = acc.mul(&tree_to_ratx(p)?);
            }
            Some(acc)
        }
        PowInt(b, k) => tree_to_ratx(b)?.pow_int(*k).ok(),
        _ => None,
    }
}

/// Recognizes a tree that is rational in `y` over rational functions of `x`.
pub fn tree_to_raty(t: &FormulaTree) -> Option<RatY> {
    match t {
        Const(r) => Some(RatY::constant(RatX::constant(r.clone()))),
        X => Some(RatY::constant(RatX::x())),
        Y => Some(RatY::y()),
        Add(ps) => {
            let mut acc = RatY::zero();
            for p in ps {
                acc = acc.add(&tree_to_raty(p)?);
            }
            Some(acc)
        }
        Mul(ps) => {
            let mut acc = RatY::one();
            for p in ps {
                acc = acc.mul(&tree_to_raty(p)?);
            }
            Some(acc)
        }
        PowInt(b, k) => tree_to_raty(b)?.pow_int(*k).ok(),
        _ => None,
    }
}

/// Embeds an exact rational function of `x` as a tree.
pub fn ratx_to_tree(r: &RatX) -> FormulaTree {
    let poly = |p: &crate::polyx::PolyX| -> FormulaTree {
        let mut terms = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(FormulaTree::product(vec![
                Const(c.clone()),
                X.pow(k as i64),
            ]));
        }
        FormulaTree::sum(terms)
    };
    if r.is_poly() {
        poly(r.num())
    } else {
        FormulaTree::product(vec![poly(r.num()), poly(r.den()).pow(-1)])
    }
}

/// Embeds an exact rational function of `x` and `y` as a tree.
pub fn raty_to_tree(r: &RatY) -> FormulaTree {
    let poly = |p: &crate::polyy::PolyY<RatX>| -> FormulaTree {
        let mut terms = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(FormulaTree::product(vec![
                ratx_to_tree(c),
                Y.pow(k as i64),
            ]));
        }
        FormulaTree::sum(terms)
    };
    if r.is_poly() {
        poly(r.num())
    } else {
        FormulaTree::product(vec![poly(r.num()), poly(r.den()).pow(-1)])
    }
}

fn rat_literal(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Splits a leading minus off a term for sum rendering.
fn split_sign(t: &FormulaTree) -> (bool, FormulaTree) {
    match t {
        Const(r) if r.is_negative() => (true, Const(-r.clone())),
        Mul(ps) => match ps.first() {
            Some(Const(r)) if r.is_negative() => {
                let mut rest = ps[1..].to_vec();
                let c = -r.clone();
                if c != rat(1) || rest.is_empty() {
                    rest.insert(0, Const(c));
                }
                (true, FormulaTree::product(rest))
            }
            _ => (false, t.clone()),
        },
        _ => (false, t.clone()),
    }
}

/// Rendering context: 0 inside a sum, 1 a factor, 2 a power base.
fn render(t: &FormulaTree, prec: u8, out: &mut String) {
    match t {
        Const(r) => {
            let parens = (prec >= 1 && r.is_negative()) || (prec >= 2 && !r.is_integer());
            if parens {
                out.push('(');
            }
            out.push_str(&rat_literal(r));
            if parens {
                out.push(')');
            }
        }
        X => out.push('x'),
        Y => out.push('y'),
        Param(name) => out.push_str(name),
        Add(ps) => {
            if prec >= 1 {
                out.push('(');
            }
            for (i, p) in ps.iter().enumerate() {
                if i == 0 {
                    render(p, 0, out);
                    continue;
                }
                let (neg, abs) = split_sign(p);
                out.push_str(if neg { " - " } else { " + " });
                render(&abs, 0, out);
            }
            if prec >= 1 {
                out.push(')');
            }
        }
        Mul(ps) => {
            let mut nums: Vec<FormulaTree> = Vec::new();
            let mut dens: Vec<FormulaTree> = Vec::new();
            let mut negative = false;
            let mut coeff = rat(1);
            for p in ps {
                match p {
                    PowInt(b, k) if *k < 0 => dens.push(b.as_ref().clone().pow(-k)),
                    Const(r) => {
                        if r.is_negative() {
                            negative = !negative;
                            coeff *= -r.clone();
                        } else {
                            coeff *= r.clone();
                        }
                    }
                    other => nums.push(other.clone()),
                }
            }
            let parens = prec >= 2 || (prec >= 1 && negative);
            if parens {
                out.push('(');
            }
            if negative {
                out.push('-');
            }
            let mut wrote = false;
            if coeff != rat(1) || nums.is_empty() {
                out.push_str(&rat_literal(&coeff));
                wrote = true;
            }
            for n in &nums {
                if wrote {
                    out.push('*');
                }
                render(n, 1, out);
                wrote = true;
            }
            if !dens.is_empty() {
                out.push('/');
                if dens.len() > 1 {
                    out.push('(');
                    for (i, d) in dens.iter().enumerate() {
                        if i > 0 {
                            out.push('*');
                        }
                        render(d, 1, out);
                    }
                    out.push(')');
                } else {
                    render(&dens[0], 1, out);
                }
            }
            if parens {
                out.push(')');
            }
        }
        PowInt(b, k) => {
            if *k < 0 {
                if prec >= 1 {
                    out.push('(');
                }
                out.push_str("1/");
                render(&b.as_ref().clone().pow(-k), 1, out);
                if prec >= 1 {
                    out.push(')');
                }
            } else {
                render(b, 2, out);
                out.push('^');
                out.push_str(&k.to_string());
            }
        }
        Ln(u) => {
            out.push_str("ln(");
            render(u, 0, out);
            out.push(')');
        }
        Exp(u) => {
            out.push_str("exp(");
            render(u, 0, out);
            out.push(')');
        }
        IntY { anchor, integrand } => {
            out.push_str("int(");
            render(integrand, 0, out);
            out.push_str(", y, ");
            out.push_str(&rat_literal(anchor));
            out.push_str(", y)");
        }
        IntX { anchor, integrand } => {
            out.push_str("int(");
            render(integrand, 0, out);
            out.push_str(", x, ");
            out.push_str(&rat_literal(anchor));
            out.push_str(", x)");
        }
    }
}

impl fmt::Display for FormulaTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Lowers parsed syntax into a tree; identifiers must be declared parameters.
pub fn tree_from_expr(e: &Expr, params: &[String]) -> Result<FormulaTree> {
    Ok(match e {
        Expr::Num(r) => Const(r.clone()),
        Expr::X => X,
        Expr::Y => Y,
        Expr::Ident(name, pos) => {
            if params.iter().any(|p| p == name) {
                Param(name.clone())
            } else {
                return Err(Error::UndeclaredIdentifier {
                    pos: *pos,
                    name: name.clone(),
                });
            }
        }
        Expr::Add(a, b) => {
            FormulaTree::sum(vec![tree_from_expr(a, params)?, tree_from_expr(b, params)?])
        }
        Expr::Sub(a, b) => tree_from_expr(a, params)?.minus(tree_from_expr(b, params)?),
        Expr::Mul(a, b) => FormulaTree::product(vec![
            tree_from_expr(a, params)?,
            tree_from_expr(b, params)?,
        ]),
        Expr::Div(a, b) => FormulaTree::product(vec![
            tree_from_expr(a, params)?,
            tree_from_expr(b, params)?.pow(-1),
        ]),
        Expr::Neg(a) => tree_from_expr(a, params)?.neg(),
        Expr::Pow(b, k) => tree_from_expr(b, params)?.pow(*k),
        Expr::Ln(u, _) => tree_from_expr(u, params)?.ln(),
        Expr::Exp(u, _) => tree_from_expr(u, params)?.exp(),
        Expr::IntY {
            integrand, anchor, ..
        } => FormulaTree::int_y(anchor.clone(), tree_from_expr(integrand, params)?),
        Expr::IntX {
            integrand, anchor, ..
        } => FormulaTree::int_x(anchor.clone(), tree_from_expr(integrand, params)?),
    })
}

/// Parses a rendered formula back into a tree.
pub fn parse_formula(text: &str, params: &[String]) -> Result<FormulaTree> {
    tree_from_expr(&parse_expr(text, 0)?, params)
}
