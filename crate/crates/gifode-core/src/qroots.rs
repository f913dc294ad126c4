//! Rational root extraction and exact square roots, shared by the solver
//! (univariate eliminations) and the assembler (partial fractions).

use crate::polyx::PolyX;
use crate::polyy::PolyY;
use crate::rat::{rat, Rat};
use crate::ratx::RatX;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Divisor candidates are enumerated by trial division; above this bound we
/// fall back to a short fixed candidate list rather than stalling.
const DIVISOR_ENUM_BOUND: u128 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m = n.abs().to_u128()?;
    if m == 0 || m > DIVISOR_ENUM_BOUND {
        return None;
    }
    let mut out = Vec::new();
    let mut d: u128 = 1;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(m / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn eval_at(coeffs: &[Rat], r: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * r + c;
    }
    acc
}

/// Synthetic division by (u - r); caller guarantees r is a root.
fn deflate(coeffs: &[Rat], r: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); coeffs.len() - 1];
    let mut carry = Rat::zero();
    for k in (1..coeffs.len()).rev() {
        carry = &coeffs[k] + &carry * r;
        out[k - 1] = carry.clone();
    }
    out
}

/// All rational roots of a univariate polynomial over the rationals, with
/// multiplicities, in ascending order. Coefficients ascending by power.
///
/// Complete for coefficients of moderate size; for huge leading or trailing
/// coefficients only a short candidate list is tried, which can miss roots.
/// Callers treat the result as a set of verified roots, never as a proof of
/// nonexistence.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<(Rat, u32)> {
    let mut w: Vec<Rat> = coeffs.to_vec();
    while w.last().map_or(false, |c| c.is_zero()) {
        w.pop();
    }
    if w.len() <= 1 {
        return Vec::new();
    }
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    let mut zero_mult = 0;
    while w.len() > 1 && w[0].is_zero() {
        w.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    if w.len() <= 1 {
        return roots;
    }
    let mut den_lcm = BigInt::one();
    for c in &w {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = w
        .iter()
        .map(|c| (c * Rat::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let candidates: Vec<Rat> = match (divisors(&ints[0]), divisors(ints.last().unwrap())) {
        (Some(ps), Some(qs)) => {
            let mut cs = Vec::new();
            for p in &ps {
                for q in &qs {
                    let v = Rat::new(p.clone(), q.clone());
                    cs.push(v.clone());
                    cs.push(-v);
                }
            }
            cs
        }
        _ => [1, -1, 2, -2, 3, -3]
            .iter()
            .flat_map(|&n| [rat(n), Rat::new(BigInt::one(), BigInt::from(n))])
            .collect(),
    };
    let mut candidates = candidates;
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        let mut mult = 0;
        while w.len() > 1 && eval_at(&w, &r).is_zero() {
            w = deflate(&w, &r);
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    roots
}

/// Exact square root of a polynomial over the rationals, if one exists.
pub fn polyx_sqrt(p: &PolyX) -> Option<PolyX> {
    if p.is_zero() {
        return Some(PolyX::zero());
    }
    let n = p.deg();
    if n % 2 != 0 {
        return None;
    }
    let m = n / 2;
    let lead = crate::rat::sqrt_exact(&p.leading())?;
    let mut b = vec![Rat::zero(); m + 1];
    b[m] = lead;
    for k in (0..m).rev() {
        let mut s = p.coeff(k + m);
        for i in (k + 1)..m {
            let j = k + m - i;
            if j > k && j < m {
                s -= &b[i] * &b[j];
            }
        }
        b[k] = s / (rat(2) * &b[m]);
    }
    let cand = PolyX::new(b);
    if cand.mul(&cand) == *p {
        Some(cand)
    } else {
        None
    }
}

/// Exact square root of a rational function, if one exists.
pub fn ratx_sqrt(r: &RatX) -> Option<RatX> {
    let num = polyx_sqrt(r.num())?;
    let den = polyx_sqrt(r.den())?;
    RatX::new(num, den).ok()
}

fn sample_points() -> Vec<Rat> {
    vec![
        rat(0),
        rat(1),
        rat(-1),
        rat(2),
        rat(-2),
        rat(3),
        crate::rat::ratio(1, 2),
    ]
}

/// Linear factors (y - r(x)) of a polynomial in `y` over the rational
/// functions of `x`, with multiplicities, plus the factor-free cofactor.
///
/// Constant roots are found by sampling followed by symbolic verification;
/// once the remaining degree drops to two or below the tail is solved
/// exactly (using an exact square root for the quadratic case). Roots with
/// genuinely higher-degree minimal polynomials are left in the cofactor.
pub fn y_roots(p: &PolyY<RatX>) -> (Vec<(RatX, u32)>, PolyY<RatX>) {
    let mut w = p.clone();
    let mut roots: Vec<(RatX, u32)> = Vec::new();
    if w.is_zero() || w.deg() == 0 {
        return (roots, w);
    }
    let mut push_root = |w: &mut PolyY<RatX>, r: RatX| {
        let factor = PolyY::new(vec![r.neg(), RatX::one()]);
        let mut mult = 0;
        while let Some(q) = w.div_exact(&factor) {
            *w = q;
            mult += 1;
        }
        if mult > 0 {
            match roots.iter_mut().find(|(s, _)| *s == r) {
                Some((_, m)) => *m += mult,
                None => roots.push((r, mult)),
            }
        }
        mult > 0
    };

    // Constant roots first: sample x, take the rational roots there as
    // candidates, and keep those that vanish identically.
    let x0 = sample_points()
        .into_iter()
        .find(|x0| w.coeffs().iter().all(|c| c.eval(x0).is_ok()));
    if let Some(x0) = x0 {
        let sampled: Vec<Rat> = w
            .coeffs()
            .iter()
            .map(|c| c.eval(&x0).expect("pole-free sample point"))
            .collect();
        for (r, _) in rational_roots(&sampled) {
            if w.eval_rat(&r).is_zero() {
                push_root(&mut w, RatX::constant(r));
            }
        }
    }

    loop {
        match w.deg() {
            1 => {
                let r = w.coeff(0).neg().mul(&w.leading().inv().expect("nonzero lead"));
                if !push_root(&mut w, r) {
                    break;
                }
            }
            2 => {
                let a = w.leading();
                let b = w.coeff(1);
                let c = w.coeff(0);
                let disc = b.mul(&b).sub(&a.mul(&c).scale(&rat(4)));
                match ratx_sqrt(&disc) {
                    Some(s) => {
                        let half = a.scale(&rat(2)).inv().expect("nonzero lead");
                        let r1 = b.neg().add(&s).mul(&half);
                        let r2 = b.neg().sub(&s).mul(&half);
                        push_root(&mut w, r1);
                        push_root(&mut w, r2);
                        break;
                    }
                    None => break,
                }
            }
            _ => break,
        }
    }
    (roots, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    #[test]
    fn roots_with_multiplicity() {
        // (u - 1)^2 (u + 2) u = u^4 - 3u^2 + 2u ... expand: (u^2-2u+1)(u^2+2u) = u^4 - 3u^2 + 2u
        let coeffs = vec![rat(0), rat(2), rat(-3), rat(0), rat(1)];
        let roots = rational_roots(&coeffs);
        assert_eq!(
            roots,
            vec![(rat(-2), 1), (rat(0), 1), (rat(1), 2)]
        );
    }

    #[test]
    fn fractional_roots_found() {
        // (2u - 1)(3u + 2) = 6u^2 + u - 2
        let coeffs = vec![rat(-2), rat(1), rat(6)];
        let roots = rational_roots(&coeffs);
        assert_eq!(roots, vec![(ratio(-2, 3), 1), (ratio(1, 2), 1)]);
    }

    #[test]
    fn irrational_and_complex_yield_nothing() {
        assert!(rational_roots(&[rat(-2), rat(0), rat(1)]).is_empty());
        assert!(rational_roots(&[rat(1), rat(0), rat(1)]).is_empty());
    }

    #[test]
    fn polyx_sqrt_roundtrip() {
        let p = PolyX::new(vec![rat(1), rat(-2), rat(3)]);
        let sq = p.mul(&p);
        assert_eq!(polyx_sqrt(&sq), Some(p));
        assert_eq!(polyx_sqrt(&PolyX::new(vec![rat(0), rat(1)])), None);
        assert_eq!(
            polyx_sqrt(&PolyX::constant(ratio(9, 4))),
            Some(PolyX::constant(ratio(3, 2)))
        );
        assert_eq!(polyx_sqrt(&PolyX::constant(rat(2))), None);
    }

    #[test]
    fn y_roots_constant_and_linear_in_x() {
        // (y - 1)(y - x)^2
        let y = PolyY::<RatX>::y();
        let one = PolyY::constant(RatX::one());
        let xf = PolyY::constant(RatX::x());
        let p = y.sub(&one).mul(&y.sub(&xf)).mul(&y.sub(&xf));
        let (roots, rest) = y_roots(&p);
        assert!(rest.is_constant());
        let mut found: Vec<(String, u32)> = roots
            .iter()
            .map(|(r, m)| (format!("{}", r), *m))
            .collect();
        found.sort();
        assert_eq!(
            found,
            vec![("1".to_string(), 1), ("x".to_string(), 2)]
        );
    }

    #[test]
    fn y_roots_quadratic_pair() {
        // (y - x)(y - x^2) has discriminant (x - x^2)^2
        let y = PolyY::<RatX>::y();
        let a = y.sub(&PolyY::constant(RatX::x()));
        let b = y.sub(&PolyY::constant(RatX::x().mul(&RatX::x())));
        let (roots, rest) = y_roots(&a.mul(&b));
        assert_eq!(roots.len(), 2);
        assert!(rest.is_constant());
    }

    #[test]
    fn y_roots_leaves_irreducible_tail() {
        // (y^2 + 1)(y - 2)
        let y = PolyY::<RatX>::y();
        let p = y
            .mul(&y)
            .add(&PolyY::constant(RatX::one()))
            .mul(&y.sub(&PolyY::constant(RatX::constant(rat(2)))));
        let (roots, rest) = y_roots(&p);
        assert_eq!(roots.len(), 1);
        assert_eq!(format!("{}", roots[0].0), "2");
        assert_eq!(rest.deg(), 2);
    }
}
