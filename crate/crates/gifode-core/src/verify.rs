//! Verification of factors and first integrals.
//!
//! A factor is checked exactly against its defining equation. A first
//! integral is checked two ways: the PDE residual `zeta_x + f*zeta_y` at
//! seeded random samples, and conservation of `zeta` along a numerically
//! integrated trajectory.

use crate::detsys::mu_residual_raty;
use crate::error::{Error, Result};
use crate::formula::{tree_diff, tree_eval, Axis, FormulaTree};
use crate::guide::MuKind;
use crate::ode::Ode;
use crate::quad::QuadSettings;
use crate::raty::RatY;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Sampling box for the residual check.
const BOX: f64 = 2.0;
/// Oversampling factor before giving up on a target sample count.
const MAX_ATTEMPT_FACTOR: usize = 100;
/// Threshold below which `zeta_y` counts as vanishing at a sample.
const ZETA_Y_TINY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ZetaReport {
    /// Samples where `f`, `zeta_x`, and `zeta_y` all evaluated cleanly.
    pub samples: usize,
    pub rejected: usize,
    pub max_residual: f64,
    /// Valid samples with `|zeta_y|` above a fixed tiny threshold.
    pub zeta_y_nonzero: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrajectoryReport {
    pub steps: usize,
    pub drift: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryReport>,
}

/// Exact check of the defining equation for the given kind.
pub fn check_mu_exact(kind: MuKind, ode: &Ode, mu: &RatY) -> Result<bool> {
    Ok(mu_residual_raty(kind, ode, mu)?.is_zero())
}

/// Residual check of `zeta_x + f*zeta_y = 0` at seeded random samples in
/// the box `[-2,2]^2`. Points where anything fails to evaluate (poles,
/// domain errors, nonfinite values) are rejected and resampled. Passing
/// needs the worst residual within `tol` and `zeta_y` nonvanishing at
/// ninety percent of the valid samples.
pub fn check_zeta_numeric(
    ode: &Ode,
    zeta: &FormulaTree,
    n: usize,
    tol: f64,
    seed: u64,
    quad: &QuadSettings,
) -> Result<ZetaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zx = tree_diff(zeta, Axis::X);
    let zy = tree_diff(zeta, Axis::Y);
    let empty = BTreeMap::new();
    let mut samples = 0;
    let mut rejected = 0;
    let mut max_residual = 0.0f64;
    let mut zeta_y_nonzero = 0;
    let limit = n.max(1) * MAX_ATTEMPT_FACTOR;
    for _ in 0..limit {
        if samples >= n {
            break;
        }
        let x = rng.gen_range(-BOX..BOX);
        let y = rng.gen_range(-BOX..BOX);
        let fv = match ode.eval_f(x, y, &empty) {
            Ok(v) if v.is_finite() => v,
            _ => {
                rejected += 1;
                continue;
            }
        };
        let (vx, vy) = match (tree_eval(&zx, x, y, quad), tree_eval(&zy, x, y, quad)) {
            (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => (a, b),
            _ => {
                rejected += 1;
                continue;
            }
        };
        let r = vx + fv * vy;
        if !r.is_finite() {
            rejected += 1;
            continue;
        }
        samples += 1;
        max_residual = max_residual.max(r.abs());
        if vy.abs() > ZETA_Y_TINY {
            zeta_y_nonzero += 1;
        }
    }
    if samples == 0 {
        return Err(Error::NoValidSamples);
    }
    let ok = max_residual <= tol && zeta_y_nonzero * 10 >= samples * 9;
    Ok(ZetaReport {
        samples,
        rejected,
        max_residual,
        zeta_y_nonzero,
        ok,
    })
}

/// Integrates the equation with fixed-step classical RK4 from `(x0, y0)`
/// to `x1` and reports the largest deviation of `zeta` from its initial
/// value. A right-hand side that stops evaluating along the way is a
/// [`Error::PoleOnTrajectory`].
pub fn check_trajectory(
    ode: &Ode,
    zeta: &FormulaTree,
    x0: f64,
    y0: f64,
    x1: f64,
    h: f64,
    tol: f64,
    quad: &QuadSettings,
) -> Result<TrajectoryReport> {
    assert!(h > 0.0, "step size must be positive");
    let empty = BTreeMap::new();
    let f = |x: f64, y: f64| -> Result<f64> {
        match ode.eval_f(x, y, &empty) {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::PoleOnTrajectory { x }),
        }
    };
    let z0 = tree_eval(zeta, x0, y0, quad)?;
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let mut x = x0;
    let mut y = y0;
    let mut steps = 0;
    let mut drift = 0.0f64;
    while (x1 - x) * dir > 1e-15 {
        let hs = dir * h.min((x1 - x) * dir);
        let k1 = f(x, y)?;
        let k2 = f(x + hs / 2.0, y + hs * k1 / 2.0)?;
        let k3 = f(x + hs / 2.0, y + hs * k2 / 2.0)?;
        let k4 = f(x + hs, y + hs * k3)?;
        y += hs * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        x += hs;
        if !y.is_finite() {
            return Err(Error::PoleOnTrajectory { x });
        }
        steps += 1;
        let z = tree_eval(zeta, x, y, quad)?;
        drift = drift.max((z - z0).abs());
    }
    Ok(TrajectoryReport {
        steps,
        drift,
        ok: drift <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{assemble_zeta, AssemblyOptions};
    use crate::ode::parse_ode;
    use crate::rat::ratio;

    fn fixture(ftext: &str, mutext: &str) -> (Ode, FormulaTree) {
        let ode = parse_ode(&format!("dy/dx = {}", ftext), &[]).unwrap();
        let mu = parse_ode(&format!("dy/dx = {}", mutext), &[])
            .unwrap()
            .f()
            .unwrap()
            .clone();
        let a = assemble_zeta(&ode, &mu, &AssemblyOptions::default()).unwrap();
        (ode, a.zeta)
    }

    #[test]
    fn mu_checks_are_exact() {
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let good = parse_ode("dy/dx = -2/y", &[]).unwrap().f().unwrap().clone();
        let bad = parse_ode("dy/dx = -1/y", &[]).unwrap().f().unwrap().clone();
        assert!(check_mu_exact(MuKind::Yy, &ode, &good).unwrap());
        assert!(!check_mu_exact(MuKind::Yy, &ode, &bad).unwrap());
    }

    #[test]
    fn quadratic_fixture_passes_the_sample_check() {
        let (ode, zeta) = fixture("y^2", "-2/y");
        let q = QuadSettings::default();
        let rep = check_zeta_numeric(&ode, &zeta, 100, 1e-9, 0, &q).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert_eq!(rep.samples, 100);
        assert!(rep.max_residual < 1e-12);
    }

    #[test]
    fn broken_zeta_fails_the_sample_check() {
        let (ode, _) = fixture("y^2", "-2/y");
        let wrong = FormulaTree::sum(vec![
            FormulaTree::X,
            FormulaTree::product(vec![FormulaTree::X, FormulaTree::Y]),
        ]);
        let q = QuadSettings::default();
        let rep = check_zeta_numeric(&ode, &wrong, 100, 1e-9, 0, &q).unwrap();
        assert!(!rep.ok);
        assert!(rep.max_residual > 1e-3);
    }

    #[test]
    fn constant_zeta_trips_the_nondegeneracy_gate() {
        let (ode, _) = fixture("y^2", "-2/y");
        let flat = FormulaTree::num(5);
        let q = QuadSettings::default();
        let rep = check_zeta_numeric(&ode, &flat, 50, 1e-9, 0, &q).unwrap();
        assert!(!rep.ok, "constant zeta must not verify");
        assert_eq!(rep.zeta_y_nonzero, 0);
    }

    #[test]
    fn trajectory_conserves_the_integral() {
        let (ode, zeta) = fixture("y^2", "-2/y");
        let q = QuadSettings::default();
        let rep =
            check_trajectory(&ode, &zeta, 0.0, 1.0, 0.5, 5e-4, 1e-6, &q).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert!(rep.steps >= 1000 && rep.steps <= 1001, "{}", rep.steps);
    }

    #[test]
    fn rk4_drift_shrinks_at_fourth_order() {
        let (ode, zeta) = fixture("y - y^2", "(1 - 2*y)/(y^2 - y)");
        let q = QuadSettings::default();
        let coarse =
            check_trajectory(&ode, &zeta, 0.0, 0.5, 1.0, 2e-2, 1.0, &q).unwrap();
        let fine = check_trajectory(&ode, &zeta, 0.0, 0.5, 1.0, 1e-2, 1.0, &q).unwrap();
        assert!(
            coarse.drift > 8.0 * fine.drift,
            "coarse {:.3e} fine {:.3e}",
            coarse.drift,
            fine.drift
        );
    }

    #[test]
    fn blowup_reports_the_pole_location() {
        // dy/dx = y^2 from y(0)=1 blows up at x=1.
        let (ode, zeta) = fixture("y^2", "-2/y");
        let q = QuadSettings::default();
        let err = check_trajectory(&ode, &zeta, 0.0, 1.0, 2.0, 1e-3, 1e-6, &q);
        match err {
            Err(Error::PoleOnTrajectory { x }) => assert!(x > 0.5, "pole at {x}"),
            other => panic!("expected a trajectory pole, got {other:?}"),
        }
    }

    #[test]
    fn backward_integration_works() {
        let (ode, zeta) = fixture("y", "0");
        let q = QuadSettings::default();
        let rep =
            check_trajectory(&ode, &zeta, 0.0, 1.0, -1.0, 1e-3, 1e-6, &q).unwrap();
        assert!(rep.ok, "{rep:?}");
    }

    #[test]
    fn anchor_scan_offsets_are_exercised() {
        // a zeta whose valid region misses most of the box still verifies
        // on the samples that survive rejection
        let (ode, zeta) = fixture("y - y^2", "(1 - 2*y)/(y^2 - y)");
        let q = QuadSettings::default();
        let rep = check_zeta_numeric(&ode, &zeta, 100, 1e-9, 7, &q).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert!(rep.rejected > 0, "log domain must reject some samples");
    }

    #[test]
    fn ratio_helper_matches_fixture_anchor() {
        let ode = parse_ode("dy/dx = y - y^2", &[]).unwrap();
        let mu = parse_ode("dy/dx = (1 - 2*y)/(y^2 - y)", &[])
            .unwrap()
            .f()
            .unwrap()
            .clone();
        let a = assemble_zeta(&ode, &mu, &AssemblyOptions::default()).unwrap();
        assert_eq!(a.anchor_y0, ratio(1, 2));
        let q = QuadSettings::default();
        let rep = check_trajectory(&ode, &a.zeta, 0.0, 0.5, 1.0, 1e-3, 1e-6, &q).unwrap();
        assert!(rep.ok, "{rep:?}");
    }
}
