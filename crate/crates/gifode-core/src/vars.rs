//! Indeterminates appearing in determining systems.
//!
//! Three kinds of symbols occur beyond the base field of rational functions
//! in `x`: jet variables (unknown coefficient functions of `x` together with
//! a derivative order), constant unknowns produced by the constant and
//! polynomial-in-x ansatz modes, and user-declared parameters.

use std::fmt;

/// Which side of the ansatz fraction `mu = X/Y` a symbol belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Numerator `X`, coefficients `a1_i` / `c_i`.
    Num,
    /// Denominator `Y`, coefficients `a2_i` / `d_i`.
    Den,
}

/// Default bound on jet derivative orders.
pub const JET_CAP_DEFAULT: u32 = 3;

/// An indeterminate of a differential polynomial.
///
/// Ordering is derived and fixed: jets before constant unknowns before
/// parameters, then lexicographic in the fields. This ordering is part of
/// the deterministic behavior of everything downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// `d^order/dx^order` of the unknown function `a{side}_{index}(x)`.
    Jet { side: Side, index: u32, order: u32 },
    /// Constant unknown: coefficient of `x^xpow` inside `a{side}_{index}(x)`.
    Coef { side: Side, index: u32, xpow: u32 },
    /// Declared symbolic constant.
    Param(String),
}

impl Var {
    pub fn jet(side: Side, index: u32, order: u32) -> Var {
        Var::Jet { side, index, order }
    }

    pub fn coef(side: Side, index: u32, xpow: u32) -> Var {
        Var::Coef { side, index, xpow }
    }

    pub fn param(name: &str) -> Var {
        Var::Param(name.to_string())
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Var::Param(_))
    }

    /// x-derivative of the symbol: jets bump their order, constants and
    /// parameters die. `None` means the derivative is zero.
    pub fn dx(&self) -> Option<Var> {
        match self {
            Var::Jet { side, index, order } => Some(Var::Jet {
                side: *side,
                index: *index,
                order: order + 1,
            }),
            Var::Coef { .. } | Var::Param(_) => None,
        }
    }

    pub fn order(&self) -> u32 {
        match self {
            Var::Jet { order, .. } => *order,
            _ => 0,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Jet { side, index, order } => {
                let s = match side {
                    Side::Num => 1,
                    Side::Den => 2,
                };
                write!(f, "a{}_{}", s, index)?;
                for _ in 0..*order {
                    write!(f, "'")?;
                }
                Ok(())
            }
            Var::Coef { side, index, xpow } => {
                let letter = match side {
                    Side::Num => 'c',
                    Side::Den => 'd',
                };
                if *xpow == 0 {
                    write!(f, "{}{}", letter, index)
                } else {
                    write!(f, "{}{}_{}", letter, index, xpow)
                }
            }
            Var::Param(name) => write!(f, "{}", name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_export_conventions() {
        assert_eq!(Var::jet(Side::Num, 0, 0).to_string(), "a1_0");
        assert_eq!(Var::jet(Side::Num, 0, 1).to_string(), "a1_0'");
        assert_eq!(Var::jet(Side::Den, 3, 2).to_string(), "a2_3''");
        assert_eq!(Var::coef(Side::Num, 0, 0).to_string(), "c0");
        assert_eq!(Var::coef(Side::Den, 1, 0).to_string(), "d1");
        assert_eq!(Var::coef(Side::Num, 2, 1).to_string(), "c2_1");
        assert_eq!(Var::param("p").to_string(), "p");
    }

    #[test]
    fn dx_rules() {
        let j = Var::jet(Side::Num, 1, 0);
        assert_eq!(j.dx(), Some(Var::jet(Side::Num, 1, 1)));
        assert_eq!(Var::coef(Side::Den, 0, 2).dx(), None);
        assert_eq!(Var::param("k").dx(), None);
    }

    #[test]
    fn ordering_is_jets_then_coefs_then_params() {
        let mut v = vec![
            Var::param("p"),
            Var::coef(Side::Num, 0, 0),
            Var::jet(Side::Den, 0, 0),
            Var::jet(Side::Num, 0, 1),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Var::jet(Side::Num, 0, 1),
                Var::jet(Side::Den, 0, 0),
                Var::coef(Side::Num, 0, 0),
                Var::param("p"),
            ]
        );
    }
}
