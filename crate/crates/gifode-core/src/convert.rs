//! Conversions between the factor kinds.
//!
//! Every kind is reachable from every other through `mu_yy`:
//!
//! ```text
//! mu_yx = mu_yy + f_y/f        mu_xy = -f * mu_yx
//! mu_xx = -f * mu_yy + f_x/f - f_y
//! ```
//!
//! The relations involving a division by `f` are undefined for `f = 0`.

use crate::assemble::{anchor_in_y, exp_of_anchored, integrate_mu_dy};
use crate::error::{Error, Result};
use crate::formula::{raty_to_tree, FormulaTree};
use crate::guide::MuKind;
use crate::ode::Ode;
use crate::rat::Rat;
use crate::raty::RatY;

fn f_of(ode: &Ode) -> Result<RatY> {
    let f = ode.f().ok_or(Error::DomainError {
        what: "conversion needs a parameter-free ode".to_string(),
    })?;
    Ok(f.clone())
}

fn dlog_y(f: &RatY) -> Result<RatY> {
    if f.is_zero() {
        return Err(Error::DividesByF);
    }
    f.dy().div(f)
}

fn dlog_x(f: &RatY) -> Result<RatY> {
    if f.is_zero() {
        return Err(Error::DividesByF);
    }
    f.dx().div(f)
}

fn to_yy(from: MuKind, mu: &RatY, f: &RatY) -> Result<RatY> {
    Ok(match from {
        MuKind::Yy | MuKind::Yyq => mu.clone(),
        MuKind::Yx => mu.sub(&dlog_y(f)?),
        MuKind::Xy => {
            if f.is_zero() {
                return Err(Error::DividesByF);
            }
            mu.div(f)?.neg().sub(&dlog_y(f)?)
        }
        MuKind::Xx => {
            if f.is_zero() {
                return Err(Error::DividesByF);
            }
            dlog_x(f)?.sub(&f.dy()).sub(mu).div(f)?
        }
    })
}

fn from_yy(to: MuKind, mu_yy: &RatY, f: &RatY) -> Result<RatY> {
    Ok(match to {
        MuKind::Yy | MuKind::Yyq => mu_yy.clone(),
        MuKind::Yx => mu_yy.add(&dlog_y(f)?),
        MuKind::Xy => f.mul(&mu_yy.add(&dlog_y(f)?)).neg(),
        MuKind::Xx => f.mul(mu_yy).neg().add(&dlog_x(f)?).sub(&f.dy()),
    })
}

/// Rewrites a factor of one kind as the corresponding factor of another
/// kind for the same equation. Exact; fails with [`Error::DividesByF`]
/// when the target relation divides by a vanishing `f`.
pub fn convert_mu(from: MuKind, to: MuKind, mu: &RatY, ode: &Ode) -> Result<RatY> {
    let f = f_of(ode)?;
    let hub = to_yy(from, mu, &f)?;
    from_yy(to, &hub, &f)
}

/// Classical integrating-factor pair recovered from `mu = d_y ln(zeta_y)`
/// and the assembled `F2`: `mu_y = F2 * e^{int mu dy}` and `mu_x = -f * mu_y`.
pub fn classical_factors(
    ode: &Ode,
    mu_yy: &RatY,
    f2: &FormulaTree,
    y0: &Rat,
) -> Result<(FormulaTree, FormulaTree)> {
    let f = f_of(ode)?;
    let m = anchor_in_y(&integrate_mu_dy(mu_yy), y0)?;
    let e = exp_of_anchored(&m);
    let mu_y = FormulaTree::product(vec![f2.clone(), e]);
    let mu_x = FormulaTree::product(vec![
        FormulaTree::num(-1),
        raty_to_tree(&f),
        mu_y.clone(),
    ]);
    Ok((mu_y, mu_x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detsys::mu_residual_raty;
    use crate::formula::{tree_diff, tree_eval, tree_to_raty, Axis};
    use crate::ode::parse_ode;
    use crate::quad::QuadSettings;
    use crate::rat::rat;

    fn raty(text: &str) -> RatY {
        let ode = parse_ode(&format!("dy/dx = {}", text), &[]).unwrap();
        ode.f().unwrap().clone()
    }

    #[test]
    fn quadratic_rhs_has_zero_yx_factor() {
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let mu = raty("-2/y");
        let yx = convert_mu(MuKind::Yy, MuKind::Yx, &mu, &ode).unwrap();
        assert!(yx.is_zero());
    }

    #[test]
    fn conversions_preserve_zero_residual() {
        for (ftext, mutext) in [("y^2", "-2/y"), ("y - y^2", "(1 - 2*y)/(y^2 - y)")] {
            let ode = parse_ode(&format!("dy/dx = {}", ftext), &[]).unwrap();
            let mu = raty(mutext);
            assert!(mu_residual_raty(MuKind::Yy, &ode, &mu).unwrap().is_zero());
            for to in [MuKind::Yx, MuKind::Xy, MuKind::Xx] {
                let conv = convert_mu(MuKind::Yy, to, &mu, &ode).unwrap();
                let res = mu_residual_raty(to, &ode, &conv).unwrap();
                assert!(res.is_zero(), "{:?} residual for {}: {}", to, ftext, res);
            }
        }
    }

    #[test]
    fn hub_round_trip_is_identity() {
        let ode = parse_ode("dy/dx = (y^2 + x)/(y + 1)", &[]).unwrap();
        let mu = raty("(x*y + 3)/(y^2 + 1)");
        for kind in [MuKind::Yx, MuKind::Xy, MuKind::Xx, MuKind::Yyq] {
            let there = convert_mu(MuKind::Yy, kind, &mu, &ode).unwrap();
            let back = convert_mu(kind, MuKind::Yy, &there, &ode).unwrap();
            assert_eq!(back, mu, "{:?}", kind);
        }
    }

    #[test]
    fn zero_rhs_cannot_reach_divided_kinds() {
        let ode = parse_ode("dy/dx = 0", &[]).unwrap();
        let mu = RatY::zero();
        assert_eq!(
            convert_mu(MuKind::Yy, MuKind::Yx, &mu, &ode),
            Err(Error::DividesByF)
        );
        assert_eq!(
            convert_mu(MuKind::Yy, MuKind::Xx, &mu, &ode),
            Err(Error::DividesByF)
        );
    }

    #[test]
    fn classical_pair_solves_the_classical_equation() {
        // f = y^2, mu = -2/y: mu_y = y^{-2}, mu_x = -1. Check
        // d_x mu_y + d_y (f mu_y) = 0 both exactly and pointwise.
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let mu = raty("-2/y");
        let (mu_y, mu_x) = classical_factors(&ode, &mu, &FormulaTree::num(1), &rat(1)).unwrap();
        let my = tree_to_raty(&mu_y).expect("rational in this fixture");
        let mx = tree_to_raty(&mu_x).expect("rational in this fixture");
        assert_eq!(my, raty("1/y^2"));
        assert_eq!(mx, raty("-1"));
        let f = ode.f().unwrap();
        let classical = my.dx().add(&f.mul(&my).dy());
        assert!(classical.is_zero());

        let q = QuadSettings::default();
        let lhs = tree_diff(&mu_y, Axis::X);
        let rhs = tree_diff(
            &FormulaTree::product(vec![raty_to_tree(f), mu_y.clone()]),
            Axis::Y,
        );
        for &(x, y) in &[(0.2, 1.5), (-0.4, 0.7), (1.0, -1.2)] {
            let v = tree_eval(&lhs, x, y, &q).unwrap() + tree_eval(&rhs, x, y, &q).unwrap();
            assert!(v.abs() < 1e-10, "classical residual {} at ({x},{y})", v);
        }
    }
}
