//! Order guide: admissible ansatz degrees, system sizes and constraint
//! counts for each factor kind, keyed on the sign of `N_P - N_Q`.

use crate::error::{Error, Result};
use std::fmt;

/// Which generalized integrating factor is sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MuKind {
    /// `mu_yy = d/dy ln(zeta_y)`.
    Yy,
    /// `mu_yx = d/dy ln(zeta_x)`.
    Yx,
    /// `mu_xy = d/dx ln(zeta_y)`.
    Xy,
    /// `mu_xx = d/dx ln(zeta_x)`.
    Xx,
    /// `mu_yy` sought in the pre-factored form `X/(Q*Y)`.
    Yyq,
}

impl MuKind {
    pub const ALL: [MuKind; 5] = [MuKind::Yy, MuKind::Yx, MuKind::Xy, MuKind::Xx, MuKind::Yyq];

    /// Cheapest determining systems first, the default order for `solve`.
    pub const SEARCH_ORDER: [MuKind; 5] =
        [MuKind::Yy, MuKind::Yyq, MuKind::Yx, MuKind::Xy, MuKind::Xx];

    pub fn name(&self) -> &'static str {
        match self {
            MuKind::Yy => "yy",
            MuKind::Yx => "yx",
            MuKind::Xy => "xy",
            MuKind::Xx => "xx",
            MuKind::Yyq => "yyq",
        }
    }

    /// The kind describing the same factor after exchanging `x` and `y`.
    pub fn mirror(&self) -> Option<MuKind> {
        match self {
            MuKind::Yy => Some(MuKind::Xx),
            MuKind::Xx => Some(MuKind::Yy),
            MuKind::Yx => Some(MuKind::Xy),
            MuKind::Xy => Some(MuKind::Yx),
            MuKind::Yyq => None,
        }
    }
}

impl fmt::Display for MuKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl std::str::FromStr for MuKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<MuKind> {
        match s {
            "yy" => Ok(MuKind::Yy),
            "yx" => Ok(MuKind::Yx),
            "xy" => Ok(MuKind::Xy),
            "xx" => Ok(MuKind::Xx),
            "yyq" => Ok(MuKind::Yyq),
            other => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown factor kind '{}'", other),
            }),
        }
    }
}

/// Which column of the kind's table applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Gt1,
    Lt1,
    Lt0,
    Eq1,
    /// Uncovered cell, served by the generic degree-balance fallback.
    Balance,
}

impl Case {
    pub fn label(&self) -> &'static str {
        match self {
            Case::Gt1 => "N_P-N_Q>1",
            Case::Lt1 => "N_P-N_Q<1",
            Case::Lt0 => "N_P-N_Q<0",
            Case::Eq1 => "N_P-N_Q=1",
            Case::Balance => "N_P-N_Q=0 (fallback)",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Condition linking the ansatz degrees: `N_Y - N_X = d` or `N_Y - N_X <= d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq(i64),
    Le(i64),
}

impl Relation {
    pub fn admits(&self, nx: usize, ny: usize) -> bool {
        let diff = ny as i64 - nx as i64;
        match self {
            Relation::Eq(d) => diff == *d,
            Relation::Le(d) => diff <= *d,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Eq(d) => write!(f, "N_Y-N_X = {}", d),
            Relation::Le(d) => write!(f, "N_Y-N_X <= {}", d),
        }
    }
}

/// One resolved table row. `n_sys` depends on the ansatz through
/// `N_X + N_Y`; `max_cons` does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuideRow {
    pub kind: MuKind,
    pub case: Case,
    pub relation: Relation,
    pub n_sys_base: i64,
    pub max_cons: i64,
}

impl GuideRow {
    pub fn n_sys(&self, nx: usize, ny: usize) -> i64 {
        self.n_sys_base + nx as i64 + ny as i64
    }
}

/// Row lookup or a `GuideGap` error for the one uncovered cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuideCase {
    Tabulated(GuideRow),
    /// The table has no entry; the row is the generic degree balance of the
    /// determining equation, not a table value.
    Gap(GuideRow),
}

impl GuideCase {
    pub fn row(&self) -> &GuideRow {
        match self {
            GuideCase::Tabulated(r) | GuideCase::Gap(r) => r,
        }
    }

    pub fn is_gap(&self) -> bool {
        matches!(self, GuideCase::Gap(_))
    }
}

fn row(kind: MuKind, case: Case, relation: Relation, n_sys_base: i64, max_cons: i64) -> GuideRow {
    debug_assert!(n_sys_base >= 1);
    GuideRow {
        kind,
        case,
        relation,
        n_sys_base,
        max_cons,
    }
}

/// Table lookup; `GuideGap` for the `xx` kind at `N_P = N_Q`.
pub fn guide(kind: MuKind, n_p: usize, n_q: usize) -> Result<GuideRow> {
    match guide_with_fallback(kind, n_p, n_q) {
        GuideCase::Tabulated(r) => Ok(r),
        GuideCase::Gap(_) => Err(Error::GuideGap {
            np: n_p as i64,
            nq: n_q as i64,
        }),
    }
}

/// Table lookup that serves the uncovered `xx` cell with the degree balance
/// computed from the `xx` determining equation's term degrees.
pub fn guide_with_fallback(kind: MuKind, n_p: usize, n_q: usize) -> GuideCase {
    let np = n_p as i64;
    let nq = n_q as i64;
    let d = np - nq;
    let r = match kind {
        MuKind::Yy => match d {
            _ if d > 1 => row(kind, Case::Gt1, Relation::Eq(1), np + 2 * nq, np + 2 * nq - 1),
            _ if d < 1 => row(kind, Case::Lt1, Relation::Eq(nq - np + 2), 3 * nq + 1, 3 * nq),
            _ => row(kind, Case::Eq1, Relation::Le(1), np + 2 * nq, 3 * np - 3),
        },
        MuKind::Yx => match d {
            _ if d > 1 => row(
                kind,
                Case::Gt1,
                Relation::Eq(np - nq),
                3 * np + nq,
                3 * np + nq - 1,
            ),
            _ if d < 1 => row(
                kind,
                Case::Lt1,
                Relation::Eq(1),
                2 * np + 2 * nq + 1,
                2 * np + 2 * nq,
            ),
            _ => row(
                kind,
                Case::Eq1,
                Relation::Le(1),
                2 * np + 2 * nq + 1,
                4 * np - 2,
            ),
        },
        MuKind::Xy => match d {
            _ if d > 1 => row(
                kind,
                Case::Gt1,
                Relation::Eq(0),
                2 * np + 2 * nq,
                2 * np + 2 * nq - 1,
            ),
            _ if d < 1 => row(
                kind,
                Case::Lt1,
                Relation::Eq(nq - np + 1),
                np + 3 * nq + 1,
                np + 3 * nq,
            ),
            _ => row(kind, Case::Eq1, Relation::Le(0), 2 * np + 2 * nq, 4 * np - 3),
        },
        MuKind::Xx => match d {
            _ if d > 1 => row(kind, Case::Gt1, Relation::Eq(np - nq - 1), 3 * np, 3 * np - 1),
            _ if d < 0 => row(
                kind,
                Case::Lt0,
                Relation::Eq(0),
                2 * np + nq + 1,
                2 * np + nq,
            ),
            1 => row(kind, Case::Eq1, Relation::Le(0), 3 * np, 3 * np - 1),
            _ => {
                return GuideCase::Gap(row(
                    kind,
                    Case::Balance,
                    Relation::Eq(0),
                    3 * np + 1,
                    3 * np,
                ))
            }
        },
        MuKind::Yyq => match d {
            _ if d > 1 => row(kind, Case::Gt1, Relation::Eq(1 - nq), np + nq, np + nq - 1),
            _ if d < 1 => row(kind, Case::Lt1, Relation::Eq(2 - np), 2 * nq + 1, 2 * nq),
            _ => row(kind, Case::Eq1, Relation::Le(2 - np), np + nq, 2 * np - 2),
        },
    };
    GuideCase::Tabulated(r)
}

/// All ansatz degree pairs the row admits with `N_X <= max_nx`, smallest
/// total size first, then smallest `N_X`. Negative forced `N_Y` values are
/// inadmissible, not clamped.
pub fn admissible_pairs(
    kind: MuKind,
    n_p: usize,
    n_q: usize,
    max_nx: usize,
) -> Vec<(usize, usize)> {
    let rel = guide_with_fallback(kind, n_p, n_q).row().relation;
    let mut out: Vec<(usize, usize)> = vec![];
    for nx in 0..=max_nx {
        match rel {
            Relation::Eq(d) => {
                let ny = nx as i64 + d;
                if ny >= 0 {
                    out.push((nx, ny as usize));
                }
            }
            Relation::Le(d) => {
                let top = nx as i64 + d;
                for ny in 0..=top.max(-1) {
                    if ny >= 0 {
                        out.push((nx, ny as usize));
                    }
                }
            }
        }
    }
    out.sort_by_key(|&(nx, ny)| (nx + ny, nx));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values_from_the_tables() {
        let r = guide(MuKind::Yy, 3, 0).unwrap();
        assert_eq!(r.case, Case::Gt1);
        assert_eq!(r.relation, Relation::Eq(1));
        assert_eq!(r.max_cons, 2);

        let r = guide(MuKind::Yy, 0, 1).unwrap();
        assert_eq!(r.relation, Relation::Eq(3));
        assert_eq!(r.max_cons, 3);

        let r = guide(MuKind::Yyq, 2, 0).unwrap();
        assert_eq!(r.relation, Relation::Eq(1));
        assert_eq!(r.max_cons, 1);
    }

    #[test]
    fn equality_rows_satisfy_the_accounting() {
        // max_cons = n_sys - (N_X + N_Y + 1) wherever the relation is an
        // equality, independent of the ansatz degrees.
        for kind in MuKind::ALL {
            for np in 0..=6usize {
                for nq in 0..=6usize {
                    let case = guide_with_fallback(kind, np, nq);
                    let r = case.row();
                    if let Relation::Eq(_) = r.relation {
                        for nx in 0..4usize {
                            for ny in 0..4usize {
                                assert_eq!(
                                    r.max_cons,
                                    r.n_sys(nx, ny) - (nx as i64 + ny as i64 + 1),
                                    "{} at ({}, {})",
                                    kind,
                                    np,
                                    nq
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn xx_gap_is_reported_not_guessed() {
        assert!(matches!(
            guide(MuKind::Xx, 2, 2),
            Err(Error::GuideGap { np: 2, nq: 2 })
        ));
        let case = guide_with_fallback(MuKind::Xx, 2, 2);
        assert!(case.is_gap());
        assert_eq!(case.row().relation, Relation::Eq(0));
        assert_eq!(case.row().n_sys_base, 7);
        assert_eq!(case.row().max_cons, 6);
    }

    #[test]
    fn admissible_pairs_match_examples() {
        assert_eq!(
            admissible_pairs(MuKind::Yy, 2, 0, 2),
            vec![(0, 1), (1, 2), (2, 3)]
        );
        assert_eq!(
            admissible_pairs(MuKind::Yy, 1, 0, 1),
            vec![(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]
        );
        assert_eq!(admissible_pairs(MuKind::Yy, 0, 1, 0), vec![(0, 3)]);
    }

    #[test]
    fn negative_forced_ny_is_skipped() {
        // yyq at N_P = 3 forces N_Y = N_X - 1 in the < 1 column.
        assert_eq!(guide(MuKind::Yyq, 3, 3).unwrap().relation, Relation::Eq(-1));
        assert_eq!(
            admissible_pairs(MuKind::Yyq, 3, 3, 2),
            vec![(1, 0), (2, 1)]
        );
    }

    #[test]
    fn mirror_pairs() {
        assert_eq!(MuKind::Yy.mirror(), Some(MuKind::Xx));
        assert_eq!(MuKind::Yx.mirror(), Some(MuKind::Xy));
        assert_eq!(MuKind::Yyq.mirror(), None);
    }
}
