//! Seeded corpus of equations with known first integrals.
//!
//! Cases are generated integral-first: draw `zeta = p0 + sum a_i ln(q_i)`
//! with small polynomial parts and integer log multipliers, then read off
//! the equation `f = -zeta_x / zeta_y` and the reference factor
//! `mu = d_y ln(zeta_y)`. Both stay rational by construction, so every
//! case carries an exactly checkable factor.

use crate::detsys::mu_residual_raty;
use crate::error::{Error, Result};
use crate::formula::{raty_to_tree, FormulaTree};
use crate::guide::MuKind;
use crate::ode::Ode;
use crate::polyx::PolyX;
use crate::polyy::PolyY;
use crate::rat::{rat, Rat};
use crate::ratx::RatX;
use crate::raty::RatY;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CorpusCase {
    /// Reseeding with this value regenerates exactly this case.
    pub seed: u64,
    pub ode: Ode,
    pub f: RatY,
    pub zeta: FormulaTree,
    pub mu_yy: RatY,
}

/// Degree caps for the generated pieces, kept low so that downstream
/// exact arithmetic on the cases stays quick.
const MAX_XDEG: usize = 2;
const MAX_YDEG: usize = 2;
const MAX_F_YDEG: usize = 5;
const ATTEMPT_FACTOR: usize = 100;

fn random_poly(rng: &mut ChaCha8Rng, allow_zero: bool) -> PolyY<RatX> {
    loop {
        let ydeg = rng.gen_range(0..=MAX_YDEG);
        let mut coeffs = Vec::with_capacity(ydeg + 1);
        for _ in 0..=ydeg {
            let xdeg = rng.gen_range(0..=MAX_XDEG);
            let mut cs = Vec::with_capacity(xdeg + 1);
            for _ in 0..=xdeg {
                cs.push(rat(rng.gen_range(-3..=3)));
            }
            coeffs.push(RatX::from_poly(PolyX::new(cs)));
        }
        let p = PolyY::new(coeffs);
        if allow_zero || !p.is_zero() {
            return p;
        }
    }
}

fn log_multiplier(rng: &mut ChaCha8Rng) -> i64 {
    const CHOICES: [i64; 4] = [-2, -1, 1, 2];
    CHOICES[rng.gen_range(0..CHOICES.len())]
}

fn try_case(case_seed: u64) -> Option<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    let p0 = random_poly(&mut rng, true);
    let n_logs = rng.gen_range(0..=2);
    let mut zeta_parts = vec![raty_to_tree(&RatY::from_poly(p0.clone()))];
    let mut zeta_x = RatY::from_poly(p0.dx().ok()?);
    let mut zeta_y = RatY::from_poly(p0.dy());
    for _ in 0..n_logs {
        let q = random_poly(&mut rng, false);
        if q.coeffs().len() == 1 {
            // a log of a pure x-polynomial adds nothing in y and a log of
            // a constant is a constant; keep only logs that involve y
            continue;
        }
        let a = log_multiplier(&mut rng);
        let qr = RatY::from_poly(q.clone());
        let dlog_x = RatY::from_poly(q.dx().ok()?).div(&qr).ok()?;
        let dlog_y = RatY::from_poly(q.dy()).div(&qr).ok()?;
        let scale = RatY::constant(RatX::constant(rat(a)));
        zeta_x = zeta_x.add(&scale.mul(&dlog_x));
        zeta_y = zeta_y.add(&scale.mul(&dlog_y));
        zeta_parts.push(FormulaTree::product(vec![
            FormulaTree::num(a),
            raty_to_tree(&qr).ln(),
        ]));
    }
    if zeta_y.is_zero() {
        return None;
    }
    let f = zeta_x.div(&zeta_y).ok()?.neg();
    if f.is_zero() || (f.dx().is_zero() && f.dy().is_zero()) {
        return None;
    }
    if f.num().coeffs().len() > MAX_F_YDEG + 1 || f.den().coeffs().len() > MAX_F_YDEG + 1 {
        return None;
    }
    let mu_yy = zeta_y.dy().div(&zeta_y).ok()?;
    let ode = Ode::from_raty(f.clone(), Vec::new());
    let residual = mu_residual_raty(MuKind::Yy, &ode, &mu_yy).ok()?;
    assert!(
        residual.is_zero(),
        "generated factor must satisfy its defining equation"
    );
    Some(CorpusCase {
        seed: case_seed,
        ode,
        f,
        zeta: FormulaTree::sum(zeta_parts),
        mu_yy,
    })
}

/// Generates `n` cases from a master seed. Each case records the derived
/// per-case seed that regenerates it alone.
pub fn gen_corpus(n: usize, seed: u64) -> Result<Vec<CorpusCase>> {
    let mut out = Vec::with_capacity(n);
    for attempt in 0..n.max(1) * ATTEMPT_FACTOR {
        if out.len() >= n {
            break;
        }
        let case_seed = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(attempt as u64);
        if let Some(case) = try_case(case_seed) {
            out.push(case);
        }
    }
    if out.len() < n {
        return Err(Error::CorpusExhausted);
    }
    Ok(out)
}

/// One JSONL line per case: seed plus printable forms of `f`, `zeta`,
/// and the reference factor.
pub fn corpus_jsonl(cases: &[CorpusCase]) -> String {
    let mut out = String::new();
    for c in cases {
        let line = serde_json::json!({
            "seed": c.seed,
            "f": c.f.to_string(),
            "zeta": c.zeta.to_string(),
            "mu_yy": c.mu_yy.to_string(),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}
