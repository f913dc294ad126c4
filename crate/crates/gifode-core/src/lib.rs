//! Exact search for generalized integrating factors of first-order ODEs
//! `dy/dx = P(x,y)/Q(x,y)` with `P`, `Q` polynomial in `y` over rational
//! functions of `x`.
//!
//! The pipeline: pick a factor kind and ansatz degrees (the order guide
//! narrows admissible shapes), build the determining system for the rational
//! ansatz `mu = X/Y`, reduce it to an algebraic system in constant unknowns,
//! solve by pivoting with bounded case splits, assemble a first integral
//! `zeta` from a found factor, and verify both the exact PDE residual and
//! the numeric behavior of `zeta` along trajectories.

pub mod assemble;
pub mod convert;
pub mod corpus;
pub mod detsys;
pub mod diffpoly;
pub mod error;
pub mod formula;
pub mod guide;
pub mod multipoly;
pub mod ode;
pub mod parse;
pub mod polyx;
pub mod polyy;
pub mod qroots;
pub mod quad;
pub mod rat;
pub mod ratx;
pub mod raty;
pub mod solver;
pub mod vars;
pub mod verify;

pub use assemble::{
    anchor_in_x, anchor_in_y, assemble_zeta, exp_of_anchored, integrate_mu_dy, integrate_ratx_dx,
    raty_at_y, Assembly, AssemblyOptions,
};
pub use convert::{classical_factors, convert_mu};
pub use corpus::{corpus_jsonl, gen_corpus, CorpusCase};
pub use detsys::{
    build_ansatz, build_system, mu_residual, mu_residual_raty, parse_equation, Ansatz,
    AnsatzMode, DeterminingSystem, YFrac,
};
pub use error::{Error, Result};
pub use formula::{
    parse_formula, ratx_to_tree, raty_to_tree, subst_x, subst_y, tree_diff, tree_eval,
    tree_from_expr, tree_to_ratx, tree_to_raty, Axis, FormulaTree,
};
pub use guide::{admissible_pairs, guide, guide_with_fallback, GuideCase, GuideRow, MuKind, Relation};
pub use multipoly::MultiPoly;
pub use ode::{parse_ode, Ode};
pub use polyx::PolyX;
pub use polyy::PolyY;
pub use qroots::{polyx_sqrt, rational_roots, ratx_sqrt, y_roots};
pub use quad::{adaptive_simpson, QuadSettings};
pub use rat::Rat;
pub use ratx::RatX;
pub use raty::RatY;
pub use solver::{
    check_branch, derive_constraints, reduce_to_algebraic, search, solve_algebraic,
    AlgebraicSystem, Branch, RatExpr, SearchHit, SearchReport, SolutionSet, SolveLimits,
};
pub use verify::{
    check_mu_exact, check_trajectory, check_zeta_numeric, TrajectoryReport, VerificationReport,
    ZetaReport,
};
