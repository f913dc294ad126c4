//! First-integral assembly.
//!
//! Given a verified factor `mu` with `mu = d_y ln(zeta_y)`, the first
//! integral has the shape `zeta = F1(x) + F2(x) * int e^{int mu dy} dy`.
//! The y-derivative of the bracket `int mu_x dy + f_y + f*mu` vanishes
//! exactly when the defining equation holds, so evaluating the bracket at
//! the y-anchor gives an exact rational `B(x)` with `F2 = exp(-int B dx)`
//! and `F1' = -f(x, y0) * F2`. Every integral that resists exact rational
//! integration stays an anchored quadrature node.

use crate::detsys::mu_residual_raty;
use crate::error::{Error, Result};
use crate::formula::{
    ratx_to_tree, raty_to_tree, subst_x, subst_y, tree_diff, tree_eval, tree_to_ratx,
    tree_to_raty, Axis, FormulaTree,
};
use crate::guide::MuKind;
use crate::ode::Ode;
use crate::polyx::PolyX;
use crate::polyy::PolyY;
use crate::qroots::{rational_roots, y_roots};
use crate::quad::QuadSettings;
use crate::rat::{as_i64, rat, ratio, to_f64, Rat};
use crate::ratx::RatX;
use crate::raty::RatY;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyOptions {
    pub anchor_x0: Rat,
    pub anchor_y0: Rat,
    /// Tolerance for the internal PDE spot check of the assembled result.
    pub tol: f64,
    /// Use the given anchors verbatim instead of scanning nearby values.
    pub fixed_anchors: bool,
    pub quad: QuadSettings,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            anchor_x0: rat(0),
            anchor_y0: rat(1),
            tol: 1e-9,
            fixed_anchors: false,
            quad: QuadSettings::default(),
        }
    }
}

/// An assembled first integral together with its building blocks.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub zeta: FormulaTree,
    pub f1: FormulaTree,
    pub f2: FormulaTree,
    /// Anchored `M = int_{y0}^{y} mu dy`.
    pub m: FormulaTree,
    /// `e^M`, exact where `M` is a sum of integer-multiple logarithms.
    pub e: FormulaTree,
    /// Anchored `G = int_{y0}^{y} e^M dy`.
    pub g: FormulaTree,
    pub anchor_x0: Rat,
    pub anchor_y0: Rat,
}

fn horner_at(p: &PolyY<RatX>, at: &RatX) -> RatX {
    let mut acc = RatX::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(at).add(c);
    }
    acc
}

/// Evaluates a rational function of (x, y) at a rational `y`, leaving a
/// rational function of `x`.
pub fn raty_at_y(r: &RatY, y0: &Rat) -> Result<RatX> {
    let d = r.den().eval_rat(y0);
    if d.is_zero() {
        return Err(Error::PoleAtPoint);
    }
    r.num().eval_rat(y0).div(&d)
}

/// Antiderivative in `y` of a rational function, as a tree. The polynomial
/// part integrates exactly; the proper part is split over the linear
/// factors of the denominator that have roots rational in `x`, giving
/// logarithm and power terms; anything irreducible under that search stays
/// an integral node. The derivative of the output equals the input exactly.
pub fn integrate_mu_dy(mu: &RatY) -> FormulaTree {
    let mut parts: Vec<FormulaTree> = Vec::new();
    let (quot, rem) = mu.num().divrem(mu.den()).expect("monic denominator");
    if !quot.is_zero() {
        let mut anti = vec![RatX::zero(); quot.coeffs().len() + 1];
        for (k, c) in quot.coeffs().iter().enumerate() {
            anti[k + 1] = c.scale(&ratio(1, (k + 1) as i64));
        }
        parts.push(raty_to_tree(&RatY::from_poly(PolyY::new(anti))));
    }
    let mut num = rem;
    let mut den = mu.den().clone();
    let (roots, _) = y_roots(&den);
    'peel: for (r, mult) in roots {
        let lin = PolyY::new(vec![r.neg(), RatX::one()]);
        let lin_tree = FormulaTree::sum(vec![FormulaTree::Y, ratx_to_tree(&r.neg())]);
        for mm in (1..=mult).rev() {
            if num.is_zero() {
                break 'peel;
            }
            let mut d2 = den.clone();
            for _ in 0..mm {
                d2 = d2.div_exact(&lin).expect("declared root multiplicity");
            }
            let a = horner_at(&num, &r)
                .div(&horner_at(&d2, &r))
                .expect("cofactor nonzero at an exhausted root");
            if !a.is_zero() {
                parts.push(if mm == 1 {
                    FormulaTree::product(vec![ratx_to_tree(&a), lin_tree.clone().ln()])
                } else {
                    FormulaTree::product(vec![
                        ratx_to_tree(&a.scale(&ratio(1, 1 - mm as i64))),
                        lin_tree.clone().pow(1 - mm as i64),
                    ])
                });
            }
            num = num
                .sub(&d2.scale(&a))
                .div_exact(&lin)
                .expect("residual numerator keeps the root");
            den = den.div_exact(&lin).unwrap();
        }
    }
    if !num.is_zero() {
        let tail = RatY::new(num, den).expect("monic denominator");
        parts.push(FormulaTree::int_y(rat(1), raty_to_tree(&tail)));
    }
    FormulaTree::sum(parts)
}

/// Antiderivative in `x` of a rational function of `x`; mirror of
/// [`integrate_mu_dy`] with rational roots.
pub fn integrate_ratx_dx(r: &RatX) -> FormulaTree {
    let mut parts: Vec<FormulaTree> = Vec::new();
    let (quot, rem) = r.num().divrem(r.den());
    if !quot.is_zero() {
        parts.push(ratx_to_tree(&RatX::from_poly(quot.antiderivative())));
    }
    let mut num = rem;
    let mut den = r.den().clone();
    let roots = rational_roots(den.coeffs());
    'peel: for (r0, mult) in roots {
        let lin = PolyX::new(vec![-r0.clone(), rat(1)]);
        let lin_tree = FormulaTree::sum(vec![FormulaTree::X, FormulaTree::constant(-r0.clone())]);
        for mm in (1..=mult).rev() {
            if num.is_zero() {
                break 'peel;
            }
            let mut d2 = den.clone();
            for _ in 0..mm {
                d2 = d2.div_exact(&lin).expect("declared root multiplicity");
            }
            let a = num.eval(&r0) / d2.eval(&r0);
            if !a.is_zero() {
                parts.push(if mm == 1 {
                    FormulaTree::product(vec![
                        FormulaTree::constant(a.clone()),
                        lin_tree.clone().ln(),
                    ])
                } else {
                    FormulaTree::product(vec![
                        FormulaTree::constant(a.clone() / rat(1 - mm as i64)),
                        lin_tree.clone().pow(1 - mm as i64),
                    ])
                });
            }
            num = num
                .sub(&d2.scale(&a))
                .div_exact(&lin)
                .expect("residual numerator keeps the root");
            den = den.div_exact(&lin).unwrap();
        }
    }
    if !num.is_zero() {
        let tail = RatX::new(num, den).expect("nonzero denominator");
        parts.push(FormulaTree::int_x(rat(0), ratx_to_tree(&tail)));
    }
    FormulaTree::sum(parts)
}

fn top_parts(t: &FormulaTree) -> Vec<FormulaTree> {
    match t {
        FormulaTree::Add(ps) => ps.clone(),
        other => vec![other.clone()],
    }
}

/// Re-anchors an antiderivative in `y` so that its value at `y0` is zero.
/// Logarithms become logs of ratios (which keeps them defined wherever the
/// argument has constant sign between `y0` and `y`), integral nodes move
/// their anchor, and everything else subtracts its value at `y0`.
pub fn anchor_in_y(t: &FormulaTree, y0: &Rat) -> Result<FormulaTree> {
    let mut out = Vec::new();
    for part in top_parts(t) {
        out.push(anchor_part(&part, y0, Axis::Y)?);
    }
    Ok(FormulaTree::sum(out))
}

/// Mirror of [`anchor_in_y`] for antiderivatives in `x`.
pub fn anchor_in_x(t: &FormulaTree, x0: &Rat) -> Result<FormulaTree> {
    let mut out = Vec::new();
    for part in top_parts(t) {
        out.push(anchor_part(&part, x0, Axis::X)?);
    }
    Ok(FormulaTree::sum(out))
}

fn anchor_part(part: &FormulaTree, at: &Rat, axis: Axis) -> Result<FormulaTree> {
    let contains = |u: &FormulaTree| match axis {
        Axis::Y => u.contains_y(),
        Axis::X => u.contains_x(),
    };
    let subst = |u: &FormulaTree| match axis {
        Axis::Y => subst_y(u, at),
        Axis::X => subst_x(u, at),
    };
    let anchored_ln = |u: &FormulaTree| -> Result<FormulaTree> {
        let u0 = subst(u)?;
        if u0.is_zero() {
            return Err(Error::BadAnchor);
        }
        Ok(FormulaTree::product(vec![u.clone(), u0.pow(-1)]).ln())
    };
    match part {
        FormulaTree::Ln(u) if contains(u) => anchored_ln(u),
        FormulaTree::Mul(fs) => {
            let ln_at = fs
                .iter()
                .position(|f| matches!(f, FormulaTree::Ln(u) if contains(u)));
            match ln_at {
                Some(i) if fs.iter().enumerate().all(|(j, f)| j == i || !contains(f)) => {
                    let mut fs2 = fs.clone();
                    let FormulaTree::Ln(u) = &fs[i] else { unreachable!() };
                    fs2[i] = anchored_ln(u)?;
                    Ok(FormulaTree::product(fs2))
                }
                _ => {
                    let v = subst(part)?;
                    Ok(part.clone().minus(v))
                }
            }
        }
        FormulaTree::IntY { integrand, .. } if axis == Axis::Y => Ok(FormulaTree::IntY {
            anchor: at.clone(),
            integrand: integrand.clone(),
        }),
        FormulaTree::IntX { integrand, .. } if axis == Axis::X => Ok(FormulaTree::IntX {
            anchor: at.clone(),
            integrand: integrand.clone(),
        }),
        _ => {
            let v = subst(part)?;
            Ok(part.clone().minus(v))
        }
    }
}

/// Exponential of an anchored antiderivative. When every summand is an
/// integer multiple of a logarithm the result collapses to a product of
/// powers of the arguments; otherwise it stays a symbolic `exp`.
pub fn exp_of_anchored(m: &FormulaTree) -> FormulaTree {
    if m.is_zero() {
        return FormulaTree::num(1);
    }
    let mut factors = Vec::new();
    for part in top_parts(m) {
        let (c, u) = match &part {
            FormulaTree::Ln(u) => (rat(1), u.as_ref().clone()),
            FormulaTree::Mul(fs) if fs.len() == 2 => match (&fs[0], &fs[1]) {
                (FormulaTree::Const(c), FormulaTree::Ln(u)) => (c.clone(), u.as_ref().clone()),
                _ => return m.clone().exp(),
            },
            _ => return m.clone().exp(),
        };
        if !c.is_integer() {
            return m.clone().exp();
        }
        match as_i64(&c) {
            Some(k) => factors.push(u.pow(k)),
            None => return m.clone().exp(),
        }
    }
    FormulaTree::product(factors)
}

fn negated_parts(t: &FormulaTree) -> FormulaTree {
    FormulaTree::sum(top_parts(t).into_iter().map(|p| p.neg()).collect())
}

fn anchor_candidates(base: &Rat, fixed: bool, offsets: &[(i64, i64)]) -> Vec<Rat> {
    if fixed {
        return vec![base.clone()];
    }
    offsets.iter().map(|&(n, d)| base + ratio(n, d)).collect()
}

const Y_OFFSETS: [(i64, i64); 15] = [
    (0, 1),
    (-1, 2),
    (1, 2),
    (1, 1),
    (-1, 1),
    (2, 1),
    (-2, 1),
    (1, 3),
    (-1, 3),
    (3, 1),
    (-3, 1),
    (3, 2),
    (-3, 2),
    (4, 1),
    (5, 2),
];

const X_OFFSETS: [(i64, i64); 9] = [
    (0, 1),
    (1, 1),
    (-1, 1),
    (1, 2),
    (-1, 2),
    (2, 1),
    (-2, 1),
    (3, 1),
    (1, 3),
];

const SPOT_DELTAS: [(f64, f64); 8] = [
    (0.25, 0.125),
    (-0.25, 0.25),
    (0.5, -0.125),
    (-0.33, 0.3),
    (0.4, 0.2),
    (0.125, -0.25),
    (-0.5, 0.375),
    (0.375, 0.4),
];

fn recoverable(e: &Error) -> bool {
    matches!(
        e,
        Error::BadAnchor
            | Error::PoleAtPoint
            | Error::ZeroDenominator
            | Error::DomainError { .. }
            | Error::PoleOnPath
    )
}

struct YSide {
    m: FormulaTree,
    e: FormulaTree,
    g: FormulaTree,
    b: RatX,
    f_at: RatX,
}

fn build_y_side(ode: &Ode, mu: &RatY, y0: &Rat) -> Result<YSide> {
    let f = ode.f().expect("residual check implies a concrete ode");
    if mu.den().eval_rat(y0).is_zero() {
        return Err(Error::PoleAtPoint);
    }
    let m = anchor_in_y(&integrate_mu_dy(mu), y0)?;
    let e = exp_of_anchored(&m);
    let g = match tree_to_raty(&e) {
        Some(e_rat) => anchor_in_y(&integrate_mu_dy(&e_rat), y0)?,
        None => FormulaTree::int_y(y0.clone(), e.clone()),
    };
    let f_at = raty_at_y(f, y0)?;
    let b = raty_at_y(&f.dy(), y0)?.add(&f_at.mul(&raty_at_y(mu, y0)?));
    Ok(YSide { m, e, g, b, f_at })
}

fn build_x_side(side: &YSide, x0: &Rat) -> Result<(FormulaTree, FormulaTree)> {
    let ib = anchor_in_x(&integrate_ratx_dx(&side.b), x0)?;
    let f2 = exp_of_anchored(&negated_parts(&ib));
    let f1 = match tree_to_ratx(&f2) {
        Some(f2x) => {
            let f1p = f2x.mul(&side.f_at).neg();
            anchor_in_x(&integrate_ratx_dx(&f1p), x0)?
        }
        None => FormulaTree::int_x(
            x0.clone(),
            FormulaTree::product(vec![
                FormulaTree::num(-1),
                ratx_to_tree(&side.f_at),
                f2.clone(),
            ]),
        ),
    };
    Ok((f1, f2))
}

/// Largest PDE residual `|zeta_x + f*zeta_y|` over the spot grid, with the
/// number of grid points that evaluated cleanly.
fn spot_residual(
    ode: &Ode,
    zeta: &FormulaTree,
    x0: f64,
    y0: f64,
    quad: &QuadSettings,
) -> (f64, usize) {
    let zx = tree_diff(zeta, Axis::X);
    let zy = tree_diff(zeta, Axis::Y);
    let empty = BTreeMap::new();
    let mut worst = 0.0f64;
    let mut valid = 0usize;
    for &(dx, dy) in &SPOT_DELTAS {
        let (x, y) = (x0 + dx, y0 + dy);
        let vx = match tree_eval(&zx, x, y, quad) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let vy = match tree_eval(&zy, x, y, quad) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let fv = match ode.eval_f(x, y, &empty) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let r = vx + fv * vy;
        if !r.is_finite() {
            continue;
        }
        valid += 1;
        worst = worst.max(r.abs());
    }
    (worst, valid)
}

/// Builds the first integral for a factor with exact zero residual in the
/// defining equation. Anchors scan a short offset list unless fixed.
pub fn assemble_zeta(ode: &Ode, mu: &RatY, opts: &AssemblyOptions) -> Result<Assembly> {
    let res = mu_residual_raty(MuKind::Yy, ode, mu)?;
    if !res.is_zero() {
        return Err(Error::AssemblyInconsistent {
            detail: "factor residual in the defining equation is not zero".to_string(),
        });
    }
    let y_cands = anchor_candidates(&opts.anchor_y0, opts.fixed_anchors, &Y_OFFSETS);
    let x_cands = anchor_candidates(&opts.anchor_x0, opts.fixed_anchors, &X_OFFSETS);
    let mut spot_failure: Option<f64> = None;
    for y0 in &y_cands {
        let side = match build_y_side(ode, mu, y0) {
            Ok(s) => s,
            Err(e) if recoverable(&e) => continue,
            Err(e) => return Err(e),
        };
        for x0 in &x_cands {
            let (f1, f2) = match build_x_side(&side, x0) {
                Ok(v) => v,
                Err(e) if recoverable(&e) => continue,
                Err(e) => return Err(e),
            };
            let zeta = FormulaTree::sum(vec![
                f1.clone(),
                FormulaTree::product(vec![f2.clone(), side.g.clone()]),
            ]);
            let (worst, valid) = spot_residual(ode, &zeta, to_f64(x0), to_f64(y0), &opts.quad);
            if valid > 0 && worst > opts.tol {
                spot_failure = Some(worst);
                continue;
            }
            return Ok(Assembly {
                zeta,
                f1,
                f2,
                m: side.m,
                e: side.e,
                g: side.g,
                anchor_x0: x0.clone(),
                anchor_y0: y0.clone(),
            });
        }
    }
    match spot_failure {
        Some(worst) => Err(Error::AssemblyInconsistent {
            detail: format!("spot residual {worst:.3e} exceeds tolerance at every anchor"),
        }),
        None => Err(Error::BadAnchor),
    }
}
