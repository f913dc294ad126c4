//! The input ODE `dy/dx = P(x,y)/Q(x,y)` and its basic transformations.

use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::parse::{parse_expr, Expr};
use crate::polyx::PolyX;
use crate::polyy::PolyY;
use crate::rat::Rat;
use crate::ratx::RatX;
use num_traits::Zero;
use crate::raty::RatY;
use crate::vars::Var;
use std::collections::BTreeMap;
use std::fmt;

/// A first-order ODE in rational form. `P`/`Q` are polynomials in `y` whose
/// coefficients are rational functions of `x`, possibly involving declared
/// constant parameters. When no parameters occur, the reduced `RatY` form of
/// `f = P/Q` is cached and `P`, `Q` are its canonical numerator and
/// denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct Ode {
    p_sym: PolyY<DiffPoly>,
    q_sym: PolyY<DiffPoly>,
    f: Option<RatY>,
    n_p: usize,
    n_q: usize,
    params: Vec<String>,
}

/// Fraction of bivariate polynomials, the working form during lowering.
struct Frac {
    num: PolyY<DiffPoly>,
    den: PolyY<DiffPoly>,
}

impl Frac {
    fn constant(c: Rat) -> Frac {
        Frac {
            num: PolyY::constant(DiffPoly::constant(RatX::constant(c))),
            den: PolyY::one(),
        }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn div(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        }
    }

    fn pow(&self, e: i64) -> Frac {
        let (num, den) = if e < 0 {
            (&self.den, &self.num)
        } else {
            (&self.num, &self.den)
        };
        let k = e.unsigned_abs() as usize;
        Frac {
            num: num.pow(k),
            den: den.pow(k),
        }
    }
}

fn lower(e: &Expr, params: &[String]) -> Result<Frac> {
    match e {
        Expr::Num(r) => Ok(Frac::constant(r.clone())),
        Expr::X => Ok(Frac {
            num: PolyY::constant(DiffPoly::constant(RatX::x())),
            den: PolyY::one(),
        }),
        Expr::Y => Ok(Frac {
            num: PolyY::y(),
            den: PolyY::one(),
        }),
        Expr::Ident(name, pos) => {
            if params.iter().any(|p| p == name) {
                Ok(Frac {
                    num: PolyY::constant(DiffPoly::var(Var::param(name))),
                    den: PolyY::one(),
                })
            } else {
                Err(Error::UndeclaredIdentifier {
                    pos: *pos,
                    name: name.clone(),
                })
            }
        }
        Expr::Add(a, b) => Ok(lower(a, params)?.add(&lower(b, params)?)),
        Expr::Sub(a, b) => Ok(lower(a, params)?.add(&lower(b, params)?.neg())),
        Expr::Mul(a, b) => Ok(lower(a, params)?.mul(&lower(b, params)?)),
        Expr::Div(a, b) => Ok(lower(a, params)?.div(&lower(b, params)?)),
        Expr::Neg(a) => Ok(lower(a, params)?.neg()),
        Expr::Pow(a, e) => Ok(lower(a, params)?.pow(*e)),
        Expr::Ln(_, _) | Expr::Exp(_, _) | Expr::IntY { .. } | Expr::IntX { .. } => {
            Err(Error::NotRationalInY)
        }
    }
}

fn poly_to_raty_side(p: &PolyY<DiffPoly>) -> Option<PolyY<RatX>> {
    let mut out = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        out.push(c.as_ratx()?);
    }
    Some(PolyY::new(out))
}

fn embed(p: &PolyY<RatX>) -> PolyY<DiffPoly> {
    p.map(|c| DiffPoly::constant(c.clone()))
}

impl Ode {
    fn from_frac(fr: Frac, params: Vec<String>) -> Result<Ode> {
        if fr.den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // Declared parameters may go unused; the reduced cached form only
        // needs the coefficients to be parameter-free in fact.
        if let (Some(p0), Some(q0)) = (poly_to_raty_side(&fr.num), poly_to_raty_side(&fr.den)) {
            let f = RatY::new(p0, q0)?;
            return Ok(Ode::from_raty(f, params));
        }
        // With parameters, only a common pure power of y is stripped; full
        // reduction would need gcds over the parameter ring.
        let low_p = fr.num.coeffs().iter().take_while(|c| c.is_zero()).count();
        let low_q = fr.den.coeffs().iter().take_while(|c| c.is_zero()).count();
        let k = low_p.min(low_q);
        let strip = |p: &PolyY<DiffPoly>, k: usize| {
            PolyY::new(p.coeffs().iter().skip(k).cloned().collect())
        };
        let (p_sym, q_sym) = if k > 0 {
            (strip(&fr.num, k), strip(&fr.den, k))
        } else {
            (fr.num, fr.den)
        };
        let n_p = p_sym.deg();
        let n_q = q_sym.deg();
        Ok(Ode {
            p_sym,
            q_sym,
            f: None,
            n_p,
            n_q,
            params,
        })
    }

    /// Builds from an exact right-hand side; declared parameter names are
    /// carried along but do not occur in `f`.
    pub fn from_raty(f: RatY, params: Vec<String>) -> Ode {
        let n_p = f.num().deg();
        let n_q = f.den().deg();
        Ode {
            p_sym: embed(f.num()),
            q_sym: embed(f.den()),
            f: Some(f),
            n_p,
            n_q,
            params,
        }
    }

    /// Numerator `P` of the reduced form; parameter-free ODEs only.
    pub fn p(&self) -> Option<&PolyY<RatX>> {
        self.f.as_ref().map(|f| f.num())
    }

    /// Denominator `Q` of the reduced form; parameter-free ODEs only.
    pub fn q(&self) -> Option<&PolyY<RatX>> {
        self.f.as_ref().map(|f| f.den())
    }

    pub fn f(&self) -> Option<&RatY> {
        self.f.as_ref()
    }

    pub fn p_sym(&self) -> &PolyY<DiffPoly> {
        &self.p_sym
    }

    pub fn q_sym(&self) -> &PolyY<DiffPoly> {
        &self.q_sym
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.n_p, self.n_q)
    }

    /// The ODE of the inverse function: swap the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Result<Ode> {
        if self.p_sym.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // Clear every coefficient denominator so both sides have polynomial
        // entries in x; multiplying P and Q by the same L(x) leaves f alone.
        let mut lcm = PolyX::one();
        for side in [&self.p_sym, &self.q_sym] {
            for c in side.coeffs() {
                for (_, r) in c.terms() {
                    lcm = lcm.lcm(r.den());
                }
            }
        }
        let swap_side = |side: &PolyY<DiffPoly>| -> PolyY<DiffPoly> {
            // Term c*x^k*y^i with parameter monomial m becomes c*x^i*y^k.
            let mut grid: BTreeMap<usize, DiffPoly> = BTreeMap::new();
            for (i, coeff) in side.coeffs().iter().enumerate() {
                for (mono, r) in coeff.terms() {
                    let extra = lcm.div_exact(r.den()).expect("lcm divisible");
                    let poly = r.num().mul(&extra);
                    for (k, c) in poly.coeffs().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let xpart = RatX::from_poly(PolyX::monomial(c.clone(), i));
                        let entry = grid.entry(k).or_insert_with(DiffPoly::zero);
                        *entry = entry.add(&DiffPoly::term(mono.clone(), xpart));
                    }
                }
            }
            let top = grid.keys().next_back().copied().unwrap_or(0);
            PolyY::new(
                (0..=top)
                    .map(|k| grid.get(&k).cloned().unwrap_or_else(DiffPoly::zero))
                    .collect(),
            )
        };
        let new_p = swap_side(&self.q_sym);
        let new_q = swap_side(&self.p_sym);
        Ode::from_frac(
            Frac {
                num: new_p,
                den: new_q,
            },
            self.params.clone(),
        )
    }

    /// Floating value of `f` at a point, with parameters bound.
    pub fn eval_f(&self, x: f64, y: f64, param_values: &BTreeMap<String, f64>) -> Result<f64> {
        let eval_side = |side: &PolyY<DiffPoly>| -> Result<f64> {
            let mut acc = 0.0;
            for c in side.coeffs().iter().rev() {
                let mut cv = 0.0;
                for (mono, r) in c.terms() {
                    let mut t = r.eval_f64(x);
                    for (v, e) in mono.exps() {
                        let Var::Param(name) = v else {
                            return Err(Error::DomainError {
                                what: format!("unknown {} in ODE coefficients", v),
                            });
                        };
                        let val = param_values.get(name).ok_or(Error::DomainError {
                            what: format!("parameter {} unbound", name),
                        })?;
                        t *= val.powi(*e as i32);
                    }
                    cv += t;
                }
                acc = acc * y + cv;
            }
            Ok(acc)
        };
        let den = eval_side(&self.q_sym)?;
        if den == 0.0 {
            return Err(Error::PoleAtPoint);
        }
        let val = eval_side(&self.p_sym)? / den;
        if !val.is_finite() {
            return Err(Error::PoleAtPoint);
        }
        Ok(val)
    }

    /// Exact value of `f` at a rational point; parameter-free ODEs only.
    pub fn eval_f_exact(&self, x: &Rat, y: &Rat) -> Result<Rat> {
        let f = self.f.as_ref().ok_or(Error::DomainError {
            what: "exact evaluation needs a parameter-free ODE".to_string(),
        })?;
        f.eval_xy(x, y)
    }
}

/// Reads `dy/dx = EXPR` with the given declared parameter names.
pub fn parse_ode(text: &str, params: &[String]) -> Result<Ode> {
    let eq = text.find('=').ok_or(Error::Parse {
        pos: text.len(),
        msg: "expected 'dy/dx = EXPR'".to_string(),
    })?;
    let head = text[..eq].trim();
    if head != "dy/dx" {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected 'dy/dx' on the left of '='".to_string(),
        });
    }
    let expr = parse_expr(&text[eq + 1..], eq + 1)?;
    let fr = lower(&expr, params)?;
    Ode::from_frac(fr, params.to_vec())
}

impl fmt::Display for Ode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q_one = self.q_sym.is_one();
        if q_one {
            write!(f, "dy/dx = {}", self.p_sym)
        } else {
            write!(f, "dy/dx = ({})/({})", self.p_sym, self.q_sym)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn ode(s: &str) -> Ode {
        parse_ode(s, &[]).unwrap()
    }

    #[test]
    fn basic_forms() {
        let o = ode("dy/dx = y^2");
        assert_eq!(o.degrees(), (2, 0));
        assert!(o.q().unwrap().is_one());

        let o = ode("dy/dx = 1/(x*y + 1)");
        assert_eq!(o.degrees(), (0, 1));

        let o = ode("dy/dx = y - y^2");
        assert_eq!(o.degrees(), (2, 0));
    }

    #[test]
    fn clears_y_denominators() {
        // (1/y + 1) / (1/y) = (1 + y)/1 after cross multiplication.
        let o = ode("dy/dx = (1/y + 1)/(1/y)");
        assert_eq!(o.degrees(), (1, 0));
    }

    #[test]
    fn rejects_undeclared_and_transcendental() {
        assert!(matches!(
            parse_ode("dy/dx = k*y", &[]),
            Err(Error::UndeclaredIdentifier { .. })
        ));
        assert!(matches!(
            parse_ode("dy/dx = ln(y)", &[]),
            Err(Error::NotRationalInY)
        ));
    }

    #[test]
    fn param_ode_keeps_symbolic_form() {
        let o = parse_ode("dy/dx = p*y^2", &["p".to_string()]).unwrap();
        assert!(o.has_params());
        assert!(o.f().is_none());
        assert_eq!(o.degrees(), (2, 0));
        let mut vals = BTreeMap::new();
        vals.insert("p".to_string(), 3.0);
        assert!((o.eval_f(0.0, 2.0, &vals).unwrap() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn swap_examples() {
        // dy/dx = y^2 swaps to 1/x^2.
        let o = ode("dy/dx = y^2").swap_xy().unwrap();
        assert_eq!(o, ode("dy/dx = 1/x^2"));

        // dy/dx = x*y swaps to 1/(x*y).
        let o = ode("dy/dx = x*y").swap_xy().unwrap();
        assert_eq!(o, ode("dy/dx = 1/(x*y)"));
    }

    #[test]
    fn swap_is_involution() {
        for s in ["dy/dx = y^2", "dy/dx = (y - y^2)/(x*y + 1)", "dy/dx = x*y"] {
            let o = ode(s);
            assert_eq!(o.swap_xy().unwrap().swap_xy().unwrap(), o);
        }
    }

    #[test]
    fn swap_inverts_eval() {
        let o = ode("dy/dx = (y^2 + x)/(x*y + 1)");
        let s = o.swap_xy().unwrap();
        let empty = BTreeMap::new();
        let a = o.eval_f(0.7, 1.3, &empty).unwrap();
        let b = s.eval_f(1.3, 0.7, &empty).unwrap();
        assert!((a * b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_reports_poles() {
        let o = ode("dy/dx = 1/(x*y + 1)");
        assert!(matches!(
            o.eval_f(1.0, -1.0, &BTreeMap::new()),
            Err(Error::PoleAtPoint)
        ));
        assert_eq!(o.eval_f_exact(&rat(1), &rat(1)).unwrap(), crate::rat::ratio(1, 2));
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "dy/dx = y^2",
            "dy/dx = 1/(x*y + 1)",
            "dy/dx = (y - y^2)/(x*y + 1)",
            "dy/dx = (y^2 + x)/(x*y + 1)",
        ] {
            let o = ode(s);
            let printed = o.to_string();
            assert_eq!(ode(&printed), o, "round trip failed for {}", printed);
        }
    }

    #[test]
    fn zero_q_rejected() {
        assert!(matches!(
            parse_ode("dy/dx = y/0", &[]),
            Err(Error::ZeroDenominator)
        ));
        assert!(matches!(
            ode("dy/dx = 0*y").swap_xy(),
            Err(Error::ZeroDenominator)
        ));
    }
}
