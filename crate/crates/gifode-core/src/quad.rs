//! Adaptive quadrature used to evaluate integral nodes of formula trees.

use crate::error::{Error, Result};

/// Settings shared by all numeric tree evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    /// Absolute tolerance per integral node.
    pub tol: f64,
    /// Maximum nesting of integral nodes during one evaluation.
    pub max_int_depth: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            tol: 1e-10,
            max_int_depth: 3,
        }
    }
}

/// Refinement levels before an interval is declared singular.
const MAX_REFINE: u32 = 48;

fn probe(f: &mut dyn FnMut(f64) -> Result<f64>, at: f64) -> Result<f64> {
    let v = f(at)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::PoleOnPath)
    }
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    level: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    if lm <= a || rm <= m || m <= lm || b <= rm {
        // The interval no longer splits in floating point; whatever is
        // left unresolved here behaves like a singularity.
        return Err(Error::PoleOnPath);
    }
    let flm = probe(f, lm)?;
    let frm = probe(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if level >= MAX_REFINE {
        return Err(Error::PoleOnPath);
    }
    let half = 0.5 * tol;
    Ok(refine(f, a, fa, lm, flm, m, fm, left, half, level + 1)?
        + refine(f, m, fm, rm, frm, b, fb, right, half, level + 1)?)
}

/// Integrates `f` from `a` to `b` (either order) to the given absolute
/// tolerance. Non-finite integrand values and intervals that refuse to
/// converge are both reported as a pole on the path.
pub fn adaptive_simpson(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return adaptive_simpson(f, b, a, tol).map(|v| -v);
    }
    let fa = probe(f, a)?;
    let fb = probe(f, b)?;
    let m = 0.5 * (a + b);
    let fm = probe(f, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, fa, m, fm, b, fb, whole, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&mut |x| Ok(x * x), 0.0, 3.0, 1e-10).unwrap();
        assert!((v - 9.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = adaptive_simpson(&mut |x| Ok(x * x), 3.0, 0.0, 1e-10).unwrap();
        assert!((v + 9.0).abs() < 1e-9);
    }

    #[test]
    fn arctan_oracle() {
        let v = adaptive_simpson(&mut |x| Ok(1.0 / (x * x + 1.0)), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn pole_is_reported() {
        let r = adaptive_simpson(&mut |x| Ok(1.0 / x), -1.0, 1.0, 1e-10);
        assert_eq!(r, Err(Error::PoleOnPath));
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = adaptive_simpson(
            &mut |x| {
                if x > 0.5 {
                    Err(Error::DomainError {
                        what: "test".to_string(),
                    })
                } else {
                    Ok(1.0)
                }
            },
            0.0,
            1.0,
            1e-10,
        );
        assert!(matches!(r, Err(Error::DomainError { .. })));
    }

    #[test]
    fn nearby_singularity_converges() {
        // Integrable but steep: int_0^1 1/sqrt(x + 1e-6) dx.
        let exact = 2.0 * ((1.0f64 + 1e-6).sqrt() - 1e-3);
        let v = adaptive_simpson(&mut |x| Ok(1.0 / (x + 1e-6).sqrt()), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - exact).abs() < 1e-7, "got {v}, want {exact}");
    }
}
