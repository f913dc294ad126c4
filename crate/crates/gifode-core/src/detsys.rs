//! Ansatz construction and determining systems.
//!
//! A factor candidate is written as mu = X/Y (or X/(Q*Y) for the `Yyq`
//! kind) with X and Y polynomial in `y`. Their coefficients are unknowns
//! in one of three modes: rational constants, polynomials in `x` of fixed
//! degree, or unconstrained functions of `x` carried as jet variables.
//! Substituting the ansatz into the defining equation of the chosen kind
//! and clearing denominators leaves a polynomial in `y`; its coefficients
//! must vanish simultaneously, and those coefficients are the determining
//! system.

use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::guide::MuKind;
use crate::ode::Ode;
use crate::parse::{parse_expr, Expr};
use crate::polyy::{Coeff, PolyY};
use crate::rat::rat;
use crate::ratx::RatX;
use crate::raty::RatY;
use crate::vars::{Side, Var};
use std::fmt;

/// Shape of the unknown coefficients in an ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzMode {
    /// Unknown rational constants.
    Const,
    /// Polynomials in `x` of the given degree with unknown rational
    /// coefficients.
    PolyX(u32),
    /// Unconstrained functions of `x`, represented by jets.
    Func,
}

impl fmt::Display for AnsatzMode {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzMode::Const => write!(w, "const"),
            AnsatzMode::PolyX(d) => write!(w, "polyx({})", d),
            AnsatzMode::Func => write!(w, "func"),
        }
    }
}

/// A candidate mu = X/Y with the leading coefficient of Y pinned to 1.
///
/// Pinning removes the scaling freedom of the fraction. An ansatz whose
/// true leading coefficient would vanish is covered by the enumeration of
/// smaller `n_y`, so nothing is lost.
#[derive(Debug, Clone)]
pub struct Ansatz {
    pub kind: MuKind,
    pub mode: AnsatzMode,
    pub n_x: usize,
    pub n_y: usize,
    x_poly: PolyY<DiffPoly>,
    y_poly: PolyY<DiffPoly>,
    unknowns: Vec<Var>,
}

impl Ansatz {
    pub fn x_poly(&self) -> &PolyY<DiffPoly> {
        &self.x_poly
    }

    pub fn y_poly(&self) -> &PolyY<DiffPoly> {
        &self.y_poly
    }

    /// The free unknowns, numerator side first. The pinned coefficient is
    /// not included.
    pub fn unknowns(&self) -> &[Var] {
        &self.unknowns
    }

    pub fn n_unknowns(&self) -> usize {
        self.unknowns.len()
    }
}

fn coefficient(mode: AnsatzMode, side: Side, index: u32, out: &mut Vec<Var>) -> DiffPoly {
    match mode {
        AnsatzMode::Const => {
            let v = Var::coef(side, index, 0);
            out.push(v.clone());
            DiffPoly::var(v)
        }
        AnsatzMode::PolyX(d) => {
            let mut acc = DiffPoly::zero();
            for k in 0..=d {
                let v = Var::coef(side, index, k);
                out.push(v.clone());
                let xk = RatX::from_poly(crate::polyx::PolyX::monomial(rat(1), k as usize));
                acc = acc.add(&DiffPoly::var(v).scale(&xk));
            }
            acc
        }
        AnsatzMode::Func => {
            let v = Var::jet(side, index, 0);
            out.push(v.clone());
            DiffPoly::var(v)
        }
    }
}

pub fn build_ansatz(kind: MuKind, n_x: usize, n_y: usize, mode: AnsatzMode) -> Ansatz {
    let mut unknowns = Vec::new();
    let mut xc = Vec::with_capacity(n_x + 1);
    for i in 0..=n_x {
        xc.push(coefficient(mode, Side::Num, i as u32, &mut unknowns));
    }
    let mut yc = Vec::with_capacity(n_y + 1);
    for i in 0..n_y {
        yc.push(coefficient(mode, Side::Den, i as u32, &mut unknowns));
    }
    yc.push(DiffPoly::one());
    Ansatz {
        kind,
        mode,
        n_x,
        n_y,
        x_poly: PolyY::new(xc),
        y_poly: PolyY::new(yc),
        unknowns,
    }
}

/// Rational function in `y` with a factored denominator.
///
/// Derivatives use the per-factor quotient rule, so denominators only ever
/// accumulate copies of the original factors instead of expanded products.
/// That keeps the cleared numerator small and makes cancellation a matter
/// of trial division by the known factors.
#[derive(Debug, Clone)]
pub struct YFrac<C: Coeff> {
    num: PolyY<C>,
    den: Vec<(PolyY<C>, u32)>,
}

impl<C: Coeff> YFrac<C> {
    pub fn new(num: PolyY<C>, den: Vec<(PolyY<C>, u32)>) -> Self {
        if num.is_zero() {
            return YFrac {
                num,
                den: Vec::new(),
            };
        }
        let mut kept: Vec<(PolyY<C>, u32)> = Vec::new();
        for (f, e) in den {
            assert!(!f.is_zero(), "zero denominator factor");
            if e == 0 || f.is_one() {
                continue;
            }
            match kept.iter_mut().find(|(g, _)| *g == f) {
                Some((_, ke)) => *ke += e,
                None => kept.push((f, e)),
            }
        }
        YFrac { num, den: kept }
    }

    pub fn from_poly(p: PolyY<C>) -> Self {
        YFrac::new(p, Vec::new())
    }

    pub fn num(&self) -> &PolyY<C> {
        &self.num
    }

    pub fn den_factors(&self) -> &[(PolyY<C>, u32)] {
        &self.den
    }

    /// The denominator as an expanded polynomial.
    pub fn den_poly(&self) -> PolyY<C> {
        let mut d = PolyY::one();
        for (f, e) in &self.den {
            for _ in 0..*e {
                d = d.mul(f);
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        YFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some((_, ke)) => *ke += e,
                None => den.push((f.clone(), *e)),
            }
        }
        YFrac::new(self.num.mul(&o.num), den)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut common = self.den.clone();
        for (f, e) in &o.den {
            match common.iter_mut().find(|(g, _)| g == f) {
                Some((_, ce)) => *ce = (*ce).max(*e),
                None => common.push((f.clone(), *e)),
            }
        }
        let lift = |num: &PolyY<C>, own: &[(PolyY<C>, u32)]| {
            let mut n = num.clone();
            for (f, ce) in &common {
                let oe = own.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e);
                for _ in oe..*ce {
                    n = n.mul(f);
                }
            }
            n
        };
        YFrac::new(
            lift(&self.num, &self.den).add(&lift(&o.num, &o.den)),
            common,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn deriv(&self, d: &dyn Fn(&PolyY<C>) -> Result<PolyY<C>>) -> Result<Self> {
        let mut num = d(&self.num)?;
        for (f, _) in &self.den {
            num = num.mul(f);
        }
        for (i, (f, e)) in self.den.iter().enumerate() {
            let mut t = self.num.mul(&d(f)?).scale(&C::from_rat(rat(*e as i64)));
            for (j, (g, _)) in self.den.iter().enumerate() {
                if j != i {
                    t = t.mul(g);
                }
            }
            num = num.sub(&t);
        }
        let den = self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        Ok(YFrac::new(num, den))
    }

    pub fn dy(&self) -> Self {
        self.deriv(&|p: &PolyY<C>| Ok(p.dy()))
            .expect("dy cannot fail")
    }

    pub fn dx(&self) -> Result<Self> {
        self.deriv(&|p: &PolyY<C>| p.dx())
    }

    /// Cancel the numerator against the denominator factors as far as exact
    /// division allows. Sound because every factor used here has a unit
    /// leading coefficient, so a vanishing product forces the cofactor to
    /// vanish.
    pub fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            return YFrac::from_poly(PolyY::zero());
        }
        let mut den = Vec::new();
        for (f, mut e) in std::mem::take(&mut self.den) {
            while e > 0 {
                match self.num.try_div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.push((f, e));
            }
        }
        YFrac {
            num: self.num,
            den,
        }
    }
}

fn residual_frac(
    kind: MuKind,
    ode: &Ode,
    mu: YFrac<DiffPoly>,
) -> Result<YFrac<DiffPoly>> {
    let p = ode.p_sym().clone();
    let q = ode.q_sym().clone();
    let f = YFrac::new(p.clone(), vec![(q.clone(), 1)]);
    let res = match kind {
        MuKind::Yy | MuKind::Yyq => {
            let transport = f.mul(&mu).dy();
            mu.dx()?.add(&transport).add(&f.dy().dy())
        }
        MuKind::Yx => {
            if p.is_zero() {
                return Err(Error::DividesByF);
            }
            let finv = YFrac::new(q.clone(), vec![(p.clone(), 1)]);
            let fx = f.dx()?;
            let cross = fx.mul(&f.dy()).mul(&finv).mul(&finv);
            let mixed = fx.dy().mul(&finv);
            mu.dx()?
                .add(&f.mul(&mu).dy())
                .add(&cross)
                .sub(&mixed)
        }
        MuKind::Xy => {
            if p.is_zero() {
                return Err(Error::DividesByF);
            }
            let finv = YFrac::new(q.clone(), vec![(p.clone(), 1)]);
            let fx = f.dx()?;
            let cross = fx.mul(&f.dy()).mul(&finv).mul(&finv);
            let mixed = fx.dy().mul(&finv);
            mu.mul(&finv)
                .dx()?
                .add(&mu.dy())
                .sub(&cross)
                .add(&mixed)
        }
        MuKind::Xx => {
            if p.is_zero() {
                return Err(Error::DividesByF);
            }
            let finv = YFrac::new(q.clone(), vec![(p.clone(), 1)]);
            mu.mul(&finv)
                .dx()?
                .add(&mu.dy())
                .add(&finv.dx()?.dx()?)
        }
    };
    Ok(res.reduce())
}

/// The defining-equation residual of mu = `mu_num`/`mu_den` for the given
/// kind, as a rational function in `y`. The candidate satisfies the
/// defining equation exactly when the numerator vanishes identically.
///
/// `Yy` and `Yyq` share a defining equation; they differ only in the
/// denominator shape the search assigns to the ansatz.
pub fn mu_residual(
    kind: MuKind,
    ode: &Ode,
    mu_num: &PolyY<DiffPoly>,
    mu_den: &PolyY<DiffPoly>,
) -> Result<YFrac<DiffPoly>> {
    if mu_den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    residual_frac(
        kind,
        ode,
        YFrac::new(mu_num.clone(), vec![(mu_den.clone(), 1)]),
    )
}

/// Exact residual of a concrete candidate, for a parameter-free ODE.
pub fn mu_residual_raty(kind: MuKind, ode: &Ode, mu: &RatY) -> Result<RatY> {
    let f = ode.f().ok_or_else(|| Error::DomainError {
        what: "exact residuals need a parameter-free equation".to_string(),
    })?;
    match kind {
        MuKind::Yy | MuKind::Yyq => Ok(mu.dx().add(&f.mul(mu).dy()).add(&f.dy().dy())),
        MuKind::Yx => {
            if f.is_zero() {
                return Err(Error::DividesByF);
            }
            let fx = f.dx();
            let cross = fx.mul(&f.dy()).div(&f.mul(f))?;
            let mixed = fx.dy().div(f)?;
            Ok(mu
                .dx()
                .add(&f.mul(mu).dy())
                .add(&cross)
                .sub(&mixed))
        }
        MuKind::Xy => {
            if f.is_zero() {
                return Err(Error::DividesByF);
            }
            let fx = f.dx();
            let cross = fx.mul(&f.dy()).div(&f.mul(f))?;
            let mixed = fx.dy().div(f)?;
            Ok(mu
                .div(f)?
                .dx()
                .add(&mu.dy())
                .sub(&cross)
                .add(&mixed))
        }
        MuKind::Xx => {
            if f.is_zero() {
                return Err(Error::DividesByF);
            }
            Ok(mu
                .div(f)?
                .dx()
                .add(&mu.dy())
                .add(&f.inv()?.dx().dx()))
        }
    }
}

/// A collected determining system. Each equation is a polynomial in the
/// unknowns (and `x`, and any parameters) that must vanish; the trailing
/// "= 0" is implied everywhere.
#[derive(Debug, Clone)]
pub struct DeterminingSystem {
    pub kind: MuKind,
    pub ansatz: Ansatz,
    /// Pairs of (power of `y`, collected coefficient), highest power first.
    /// Coefficients that are identically zero are dropped.
    pub equations: Vec<(usize, DiffPoly)>,
}

impl DeterminingSystem {
    pub fn n_sys(&self) -> usize {
        self.equations.len()
    }

    pub fn n_unknowns(&self) -> usize {
        self.ansatz.n_unknowns()
    }

    /// One equation per line, in the stored order.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (_, eq) in &self.equations {
            out.push_str(&eq.to_string());
            out.push('\n');
        }
        out
    }
}

/// Substitute the ansatz into the defining equation of its kind, clear
/// denominators, and collect the numerator by powers of `y`.
pub fn build_system(kind: MuKind, ode: &Ode, ansatz: &Ansatz) -> Result<DeterminingSystem> {
    let mut den = Vec::new();
    if kind == MuKind::Yyq {
        den.push((ode.q_sym().clone(), 1));
    }
    den.push((ansatz.y_poly().clone(), 1));
    let mu = YFrac::new(ansatz.x_poly().clone(), den);
    let res = residual_frac(kind, ode, mu)?;
    let mut equations = Vec::new();
    for (pow, c) in res.num().coeffs().iter().enumerate() {
        if !c.is_zero() {
            equations.push((pow, c.normalize_primitive()));
        }
    }
    equations.reverse();
    Ok(DeterminingSystem {
        kind,
        ansatz: ansatz.clone(),
        equations,
    })
}

/// Independently expanded collected numerator for the `Yy` kind, written
/// out term by term rather than via the generic clearing path. Used to
/// cross-check that path.
pub fn printed_yy_numerator(
    ode: &Ode,
    x_poly: &PolyY<DiffPoly>,
    y_poly: &PolyY<DiffPoly>,
) -> Result<PolyY<DiffPoly>> {
    let p = ode.p_sym();
    let q = ode.q_sym();
    let (py, qy) = (p.dy(), q.dy());
    let (pyy, qyy) = (py.dy(), qy.dy());
    let (xx, yx) = (x_poly.dx()?, y_poly.dx()?);
    let (xy, yy) = (x_poly.dy(), y_poly.dy());
    let y2 = y_poly.mul(y_poly);
    let source = p
        .mul(q)
        .mul(&qyy)
        .sub(&p.mul(&qy).mul(&qy).scale(&DiffPoly::constant(RatX::constant(rat(2)))))
        .sub(&pyy.mul(q).mul(q))
        .add(&py.mul(q).mul(&qy).scale(&DiffPoly::constant(RatX::constant(rat(2)))));
    let t1 = y2.mul(&source);
    let t2 = q
        .mul(q)
        .mul(q)
        .mul(&x_poly.mul(&yx).sub(&xx.mul(y_poly)));
    let t3 = p
        .mul(q)
        .mul(q)
        .mul(&x_poly.mul(&yy).sub(&xy.mul(y_poly)));
    let t4 = q
        .mul(x_poly)
        .mul(y_poly)
        .mul(&p.mul(&qy).sub(&py.mul(q)));
    Ok(t1.add(&t2).add(&t3).add(&t4))
}

/// Independently expanded collected numerator for the `Yyq` kind, with
/// mu = X/(Q*Y). Companion cross-check to `printed_yy_numerator`.
pub fn printed_yyq_numerator(
    ode: &Ode,
    x_poly: &PolyY<DiffPoly>,
    y_poly: &PolyY<DiffPoly>,
) -> Result<PolyY<DiffPoly>> {
    let p = ode.p_sym();
    let q = ode.q_sym();
    let (py, qy) = (p.dy(), q.dy());
    let (pyy, qyy) = (py.dy(), qy.dy());
    let qx = q.dx()?;
    let (xx, yx) = (x_poly.dx()?, y_poly.dx()?);
    let (xy, yy) = (x_poly.dy(), y_poly.dy());
    let two = DiffPoly::constant(RatX::constant(rat(2)));
    let y2 = y_poly.mul(y_poly);
    let source = p
        .mul(q)
        .mul(&qyy)
        .sub(&p.mul(&qy).mul(&qy).scale(&two))
        .sub(&pyy.mul(q).mul(q))
        .add(&py.mul(q).mul(&qy).scale(&two));
    let t1 = y2.mul(&source);
    let t2 = q.mul(q).mul(&x_poly.mul(&yx).sub(&xx.mul(y_poly)));
    let t3 = p.mul(q).mul(&x_poly.mul(&yy).sub(&xy.mul(y_poly)));
    let t4 = x_poly.mul(y_poly).mul(
        &p.mul(&qy)
            .scale(&two)
            .add(&q.mul(&qx))
            .sub(&py.mul(q)),
    );
    Ok(t1.add(&t2).add(&t3).add(&t4))
}

fn classify_ident(name: &str, pos: usize) -> Result<Var> {
    let body = name.trim_end_matches('\'');
    let primes = (name.len() - body.len()) as u32;
    for (prefix, side) in [("a1_", Side::Num), ("a2_", Side::Den)] {
        if let Some(rest) = body.strip_prefix(prefix) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return Ok(Var::jet(side, rest.parse().unwrap(), primes));
            }
            return Err(Error::Parse {
                pos,
                msg: format!("malformed jet name '{}'", name),
            });
        }
    }
    if primes > 0 {
        return Err(Error::Parse {
            pos,
            msg: format!("prime on non-jet identifier '{}'", name),
        });
    }
    if let Some(first) = body.chars().next() {
        if first == 'c' || first == 'd' {
            let side = if first == 'c' { Side::Num } else { Side::Den };
            let rest = &body[1..];
            let (idx, xpow) = match rest.split_once('_') {
                Some((i, k)) => (i, Some(k)),
                None => (rest, None),
            };
            let idx_ok = !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit());
            let xpow_ok = xpow.map_or(true, |k| {
                !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit())
            });
            if idx_ok && xpow_ok {
                return Ok(Var::coef(
                    side,
                    idx.parse().unwrap(),
                    xpow.map_or(0, |k| k.parse().unwrap()),
                ));
            }
        }
    }
    Ok(Var::param(body))
}

fn lower_eq(e: &Expr) -> Result<DiffPoly> {
    match e {
        Expr::Num(r) => Ok(DiffPoly::constant(RatX::constant(r.clone()))),
        Expr::X => Ok(DiffPoly::constant(RatX::x())),
        Expr::Y => Err(Error::Parse {
            pos: 0,
            msg: "equations are collected coefficients and cannot contain y".to_string(),
        }),
        Expr::Ident(name, pos) => Ok(DiffPoly::var(classify_ident(name, *pos)?)),
        Expr::Add(a, b) => Ok(lower_eq(a)?.add(&lower_eq(b)?)),
        Expr::Sub(a, b) => Ok(lower_eq(a)?.sub(&lower_eq(b)?)),
        Expr::Mul(a, b) => Ok(lower_eq(a)?.mul(&lower_eq(b)?)),
        Expr::Neg(a) => Ok(lower_eq(a)?.neg()),
        Expr::Div(a, b) => {
            let d = lower_eq(b)?;
            let inv = d.as_ratx().and_then(|r| r.inv().ok()).ok_or(Error::Parse {
                pos: 0,
                msg: "division only by nonzero rational functions of x".to_string(),
            })?;
            Ok(lower_eq(a)?.scale(&inv))
        }
        Expr::Pow(b, n) => {
            let base = lower_eq(b)?;
            if *n >= 0 {
                let mut acc = DiffPoly::one();
                for _ in 0..*n {
                    acc = acc.mul(&base);
                }
                Ok(acc)
            } else {
                let inv = base.as_ratx().and_then(|r| r.inv().ok()).ok_or(Error::Parse {
                    pos: 0,
                    msg: "negative powers only of rational functions of x".to_string(),
                })?;
                let mut acc = DiffPoly::one();
                for _ in 0..n.unsigned_abs() {
                    acc = acc.scale(&inv);
                }
                Ok(acc)
            }
        }
        Expr::Ln(_, pos) | Expr::Exp(_, pos) => Err(Error::Parse {
            pos: *pos,
            msg: "equations are polynomial and cannot contain transcendental terms".to_string(),
        }),
        Expr::IntY { pos, .. } | Expr::IntX { pos, .. } => Err(Error::Parse {
            pos: *pos,
            msg: "equations are polynomial and cannot contain integrals".to_string(),
        }),
    }
}

/// Parse one exported equation line back into a polynomial over the
/// unknowns. Inverse of the `export` rendering.
pub fn parse_equation(line: &str) -> Result<DiffPoly> {
    lower_eq(&parse_expr(line, 0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::parse_ode;
    use crate::rat::ratio;

    fn c(i: u32) -> DiffPoly {
        DiffPoly::var(Var::coef(Side::Num, i, 0))
    }

    fn d(i: u32) -> DiffPoly {
        DiffPoly::var(Var::coef(Side::Den, i, 0))
    }

    fn k(n: i64) -> DiffPoly {
        DiffPoly::constant(RatX::constant(rat(n)))
    }

    #[test]
    fn ansatz_shapes_and_unknown_counts() {
        let a = build_ansatz(MuKind::Yy, 1, 1, AnsatzMode::Const);
        assert_eq!(a.x_poly().deg(), 1);
        assert_eq!(a.y_poly().deg(), 1);
        assert!(a.y_poly().leading().is_one());
        assert_eq!(
            a.unknowns(),
            &[
                Var::coef(Side::Num, 0, 0),
                Var::coef(Side::Num, 1, 0),
                Var::coef(Side::Den, 0, 0),
            ]
        );

        let a = build_ansatz(MuKind::Yy, 0, 1, AnsatzMode::PolyX(1));
        assert_eq!(a.n_unknowns(), 4);
        assert_eq!(format!("{}", a.unknowns()[1]), "c0_1");

        let a = build_ansatz(MuKind::Yy, 0, 1, AnsatzMode::Func);
        assert_eq!(
            a.unknowns(),
            &[Var::jet(Side::Num, 0, 0), Var::jet(Side::Den, 0, 0)]
        );
    }

    #[test]
    fn quadratic_system_matches_hand_expansion() {
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 1, AnsatzMode::Const);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        assert_eq!(sys.n_sys(), 3);
        assert_eq!(sys.n_unknowns(), 2);
        let expected = [
            (2usize, c(0).add(&k(2))),
            (1, c(0).mul(&d(0)).add(&d(0).scale(&RatX::constant(rat(2))))),
            (0, d(0).mul(&d(0))),
        ];
        for ((pow, eq), (epow, eeq)) in sys.equations.iter().zip(expected.iter()) {
            assert_eq!(pow, epow);
            assert_eq!(eq, eeq, "power {}", pow);
        }
    }

    #[test]
    fn linear_system_is_single_equation() {
        let ode = parse_ode("dy/dx = y", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 0, AnsatzMode::Const);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        assert_eq!(sys.n_sys(), 1);
        assert_eq!(sys.equations[0], (0, c(0)));
    }

    #[test]
    fn residual_examples() {
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let minus_two_over_y = RatY::new(
            PolyY::constant(RatX::constant(rat(-2))),
            PolyY::y(),
        )
        .unwrap();
        let r = mu_residual_raty(MuKind::Yy, &ode, &minus_two_over_y).unwrap();
        assert!(r.is_zero());

        let linear = parse_ode("dy/dx = y", &[]).unwrap();
        let r = mu_residual_raty(MuKind::Yy, &linear, &RatY::zero()).unwrap();
        assert!(r.is_zero());

        let minus_one_over_y =
            RatY::new(PolyY::constant(RatX::constant(rat(-1))), PolyY::y()).unwrap();
        let r = mu_residual_raty(MuKind::Yy, &ode, &minus_one_over_y).unwrap();
        assert!(r.is_one());
    }

    #[test]
    fn generic_numerator_matches_expanded_form() {
        let ode = parse_ode("dy/dx = (y^2 + x)/(x*y + 1)", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 1, 1, AnsatzMode::Func);
        let mu = YFrac::new(
            ansatz.x_poly().clone(),
            vec![(ansatz.y_poly().clone(), 1)],
        );
        let res = residual_frac(MuKind::Yy, &ode, mu).unwrap();
        let printed = printed_yy_numerator(&ode, ansatz.x_poly(), ansatz.y_poly()).unwrap();
        assert_eq!(res.num(), &printed.neg());

        let mu = YFrac::new(
            ansatz.x_poly().clone(),
            vec![(ode.q_sym().clone(), 1), (ansatz.y_poly().clone(), 1)],
        );
        let res = residual_frac(MuKind::Yyq, &ode, mu).unwrap();
        let printed = printed_yyq_numerator(&ode, ansatz.x_poly(), ansatz.y_poly()).unwrap();
        assert_eq!(res.num(), &printed.neg());
    }

    #[test]
    fn yyq_collection_drops_vanishing_coefficients() {
        // For f = (y^2 + 1)/y and mu = (c0 + c1 y)/y the y^2 coefficient of
        // the cleared numerator cancels identically, so only three of the
        // four collected equations survive.
        let ode = parse_ode("dy/dx = (y^2 + 1)/y", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yyq, 1, 0, AnsatzMode::Const);
        let sys = build_system(MuKind::Yyq, &ode, &ansatz).unwrap();
        let powers: Vec<usize> = sys.equations.iter().map(|(p, _)| *p).collect();
        assert_eq!(powers, vec![3, 1, 0]);
        let printed = printed_yyq_numerator(&ode, ansatz.x_poly(), ansatz.y_poly()).unwrap();
        assert_eq!(printed.deg() + 1, 4);
    }

    #[test]
    fn divides_by_f_rejected() {
        let ode = parse_ode("dy/dx = 0*y", &[]).unwrap();
        let mu = RatY::one();
        assert!(matches!(
            mu_residual_raty(MuKind::Xy, &ode, &mu),
            Err(Error::DividesByF)
        ));
        let ansatz = build_ansatz(MuKind::Xx, 0, 0, AnsatzMode::Const);
        assert!(matches!(
            build_system(MuKind::Xx, &ode, &ansatz),
            Err(Error::DividesByF)
        ));
    }

    #[test]
    fn export_reparses_losslessly() {
        let ode = parse_ode("dy/dx = (y^2 + x)/(x*y + 1)", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 1, 1, AnsatzMode::Func);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        let text = sys.export();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), sys.n_sys());
        for (line, (_, eq)) in lines.iter().zip(sys.equations.iter()) {
            let back = parse_equation(line).unwrap();
            assert_eq!(&back, eq, "line: {}", line);
        }
    }

    #[test]
    fn classify_ident_roundtrip() {
        for v in [
            Var::jet(Side::Num, 0, 0),
            Var::jet(Side::Den, 2, 3),
            Var::coef(Side::Num, 1, 0),
            Var::coef(Side::Den, 0, 2),
            Var::param("p"),
        ] {
            let name = format!("{}", v);
            assert_eq!(classify_ident(&name, 0).unwrap(), v, "name {}", name);
        }
        assert!(classify_ident("a1_x", 0).is_err());
        assert!(classify_ident("p'", 0).is_err());
        assert_eq!(classify_ident("cost", 0).unwrap(), Var::param("cost"));
    }

    #[test]
    fn polyx_mode_expands_in_x() {
        let ode = parse_ode("dy/dx = y", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 0, AnsatzMode::PolyX(1));
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        // mu = c0 + c0_1 x, residual c0_1 + c0 + c0_1 x.
        assert_eq!(sys.n_sys(), 1);
        let eq = &sys.equations[0].1;
        let vars: Vec<String> = eq.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(vars, vec!["c0".to_string(), "c0_1".to_string()]);
    }

    #[test]
    fn func_mode_keeps_jets_exact() {
        let ode = parse_ode("dy/dx = y", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 0, AnsatzMode::Func);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        // mu = a(x): residual a'(x) + a(x).
        assert_eq!(sys.n_sys(), 1);
        let eq = &sys.equations[0].1;
        let expected = DiffPoly::var(Var::jet(Side::Num, 0, 1)).add(&DiffPoly::var(Var::jet(
            Side::Num,
            0,
            0,
        )));
        assert_eq!(eq, &expected);
    }

    #[test]
    fn reduce_cancels_trial_factors() {
        let y = PolyY::<RatX>::y();
        let ymul = y.mul(&y).add(&y.scale(&RatX::constant(rat(3))));
        let fr = YFrac::new(ymul, vec![(y.clone(), 2)]).reduce();
        assert_eq!(fr.num(), &y.add(&PolyY::constant(RatX::constant(rat(3)))));
        assert_eq!(fr.den_factors().len(), 1);
        assert_eq!(fr.den_factors()[0].1, 1);
    }

    #[test]
    fn param_ode_systems_carry_the_parameter() {
        let ode = parse_ode("dy/dx = y^2 + p", &["p".to_string()]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 1, AnsatzMode::Const);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        assert!(sys
            .equations
            .iter()
            .any(|(_, eq)| eq.vars().contains(&Var::param("p"))));
    }

    #[test]
    fn residual_value_of_wrong_candidate_is_nonzero() {
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let mu = RatY::constant(RatX::constant(ratio(1, 2)));
        let r = mu_residual_raty(MuKind::Yy, &ode, &mu).unwrap();
        assert!(!r.is_zero());
    }
}
