//! Restricted algebraic solver and the outer search loop.
//!
//! Constant-mode determining systems become polynomial systems over the
//! rationals. They are solved by repeated linear pivoting with bounded
//! case splitting; only rational roots are ever produced. The solver is
//! deliberately incomplete: every branch it returns is exact and
//! re-checkable, and an empty answer means "nothing found under the
//! bounds", never "no solution exists".

use crate::detsys::{build_ansatz, build_system, mu_residual_raty, AnsatzMode, DeterminingSystem};
use crate::error::{Error, Result};
use crate::guide::{admissible_pairs, MuKind};
use crate::multipoly::MultiPoly;
use crate::ode::Ode;
use crate::polyy::PolyY;
use crate::qroots::rational_roots;
use crate::rat::{rat, ratio, Rat};
use crate::raty::RatY;
use crate::vars::Var;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone)]
pub struct AlgebraicSystem {
    pub equations: Vec<MultiPoly>,
    pub unknowns: Vec<Var>,
    pub parameters: Vec<Var>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_unknowns: usize,
    pub max_split_depth: u32,
    pub max_total_degree: u32,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_unknowns: 12,
            max_split_depth: 8,
            max_total_degree: 6,
        }
    }
}

/// A rational expression in the free unknowns and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RatExpr {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RatExpr {
    pub fn poly(p: MultiPoly) -> Self {
        RatExpr {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatExpr::poly(MultiPoly::constant(c))
    }

    pub fn is_poly(&self) -> bool {
        self.den.as_constant().map_or(false, |c| c == rat(1))
    }

    fn tidy(mut self) -> Self {
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&(Rat::from_integer(1.into()) / c));
            self.den = MultiPoly::one();
        }
        self
    }

    /// Substitute a rational expression for a variable.
    fn subst_var(&self, v: &Var, rep: &RatExpr) -> RatExpr {
        let dn = self.num.deg_in(v);
        let dd = self.den.deg_in(v);
        let nc = self.num.subst_frac(v, &rep.num, &rep.den);
        let dc = self.den.subst_frac(v, &rep.num, &rep.den);
        let out = if dn >= dd {
            RatExpr {
                num: nc,
                den: dc.mul(&rep.den.pow(dn - dd)),
            }
        } else {
            RatExpr {
                num: nc.mul(&rep.den.pow(dd - dn)),
                den: dc,
            }
        };
        out.tidy()
    }

    pub fn eval(&self, map: &BTreeMap<Var, Rat>) -> Option<Rat> {
        let n = self.num.eval(map)?;
        let d = self.den.eval(map)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(w, "{}", self.num)
        } else {
            write!(w, "({})/({})", self.num, self.den)
        }
    }
}

/// One solution branch. Unassigned unknowns are free; `constraints` are
/// polynomial conditions that must vanish (on parameters, or verbatim
/// leftovers mixing unknowns and parameters); `nonvanishing` are conditions
/// assumed nonzero on the way here.
#[derive(Debug, Clone)]
pub struct Branch {
    pub assignments: BTreeMap<Var, RatExpr>,
    pub constraints: Vec<MultiPoly>,
    pub nonvanishing: Vec<MultiPoly>,
}

#[derive(Debug, Clone, Default)]
pub struct SolutionSet {
    pub branches: Vec<Branch>,
    /// Human-readable notes on branches abandoned without resolution.
    pub dropped: Vec<String>,
}

/// Collect a CONST or POLYX determining system in powers of `x`, turning
/// each coefficient into one polynomial equation over the rationals.
pub fn reduce_to_algebraic(sys: &DeterminingSystem) -> Result<AlgebraicSystem> {
    if sys.ansatz.mode == AnsatzMode::Func {
        return Err(Error::UnsupportedMode);
    }
    let mut equations: Vec<MultiPoly> = Vec::new();
    let mut seen: BTreeSet<MultiPoly> = BTreeSet::new();
    for (_, eq) in &sys.equations {
        let mut den_lcm = crate::polyx::PolyX::one();
        for (_, c) in eq.terms() {
            den_lcm = den_lcm.lcm(c.den());
        }
        let mut buckets: Vec<MultiPoly> = Vec::new();
        for (mono, c) in eq.terms() {
            debug_assert!(
                mono.exps().iter().all(|(v, _)| !matches!(v, Var::Jet { .. })),
                "jets cannot reach the algebraic solver"
            );
            let cleared = c.num().mul(&den_lcm.div_exact(c.den()).expect("lcm divides"));
            for (k, ck) in cleared.coeffs().iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                while buckets.len() <= k {
                    buckets.push(MultiPoly::zero());
                }
                buckets[k] = buckets[k].add(&MultiPoly::term(mono.clone(), ck.clone()));
            }
        }
        for b in buckets {
            if b.is_zero() {
                continue;
            }
            let n = b.normalize();
            if seen.insert(n.clone()) {
                equations.push(n);
            }
        }
    }
    let mut parameters: BTreeSet<Var> = BTreeSet::new();
    for eq in &equations {
        for v in eq.vars() {
            if v.is_param() {
                parameters.insert(v);
            }
        }
    }
    Ok(AlgebraicSystem {
        equations,
        unknowns: sys.ansatz.unknowns().to_vec(),
        parameters: parameters.into_iter().collect(),
    })
}

struct SolveState {
    eqs: Vec<MultiPoly>,
    assign: Vec<(Var, RatExpr)>,
    constraints: Vec<MultiPoly>,
    nonvan: Vec<MultiPoly>,
    depth: u32,
}

impl SolveState {
    fn subst_poly(&mut self, v: &Var, rep: &MultiPoly) {
        for eq in &mut self.eqs {
            *eq = eq.subst(v, rep);
        }
    }

    fn subst_frac(&mut self, v: &Var, num: &MultiPoly, den: &MultiPoly) {
        for eq in &mut self.eqs {
            *eq = eq.subst_frac(v, num, den);
        }
    }
}

struct Explorer<'a> {
    unknowns: &'a [Var],
    limits: SolveLimits,
    out: Vec<Branch>,
    dropped: Vec<String>,
}

impl<'a> Explorer<'a> {
    /// Substituting every recorded assignment, later ones first, rewrites
    /// earlier values in terms of the surviving frees and parameters.
    fn back_substitute(assign: &[(Var, RatExpr)]) -> BTreeMap<Var, RatExpr> {
        let mut values: Vec<RatExpr> = assign.iter().map(|(_, e)| e.clone()).collect();
        for i in (0..assign.len()).rev() {
            let (v, _) = &assign[i];
            let rep = values[i].clone();
            for value in values.iter_mut().take(i) {
                *value = value.subst_var(v, &rep);
            }
        }
        assign
            .iter()
            .map(|(v, _)| v.clone())
            .zip(values)
            .collect()
    }

    fn finalize(&mut self, state: SolveState) {
        let assignments = Self::back_substitute(&state.assign);
        let mut constraints: Vec<MultiPoly> = Vec::new();
        for c in state.constraints {
            let n = c.normalize();
            if n.is_zero() {
                continue;
            }
            if n.as_constant().is_some() {
                return; // impossible constraint; dead branch
            }
            if !constraints.contains(&n) {
                constraints.push(n);
            }
        }
        let mut nonvanishing: Vec<MultiPoly> = Vec::new();
        for nv in state.nonvan {
            let mut r = RatExpr::poly(nv.clone());
            for (v, e) in &assignments {
                r = r.subst_var(v, e);
            }
            if r.num.is_zero() {
                return; // assumed nonzero but forced to vanish
            }
            if r.num.as_constant().is_none() {
                let n = nv.normalize();
                if !nonvanishing.contains(&n) {
                    nonvanishing.push(n);
                }
            }
        }
        self.out.push(Branch {
            assignments,
            constraints,
            nonvanishing,
        });
    }

    fn explore(&mut self, mut state: SolveState) {
        // Tidy: normalize, drop zeros, dedup, detect inconsistency.
        let mut tidied: Vec<MultiPoly> = Vec::new();
        for eq in std::mem::take(&mut state.eqs) {
            let n = eq.normalize();
            if n.is_zero() {
                continue;
            }
            if n.as_constant().is_some() {
                return; // nonzero constant = 0: inconsistent
            }
            if !tidied.contains(&n) {
                tidied.push(n);
            }
        }
        state.eqs = tidied;
        if state.eqs.is_empty() {
            self.finalize(state);
            return;
        }

        // Strategy A: linear pivot with a constant coefficient.
        let mut best: Option<(u32, usize, usize)> = None;
        for (ei, eq) in state.eqs.iter().enumerate() {
            for (ui, u) in self.unknowns.iter().enumerate() {
                if eq.deg_in(u) != 1 {
                    continue;
                }
                if eq.coeffs_in(u)[1].as_constant().is_none() {
                    continue;
                }
                let key = (eq.degree(), ui, ei);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        if let Some((_, ui, ei)) = best {
            let u = self.unknowns[ui].clone();
            let eq = state.eqs.remove(ei);
            let cs = eq.coeffs_in(&u);
            let a = cs[1].as_constant().expect("constant pivot");
            let rep = cs[0].scale(&(-Rat::from_integer(1.into()) / a));
            state.subst_poly(&u, &rep);
            state.assign.push((u, RatExpr::poly(rep)));
            self.explore(state);
            return;
        }

        // Strategy B: an equation with common monomial content splits on the
        // vanishing of each shared variable.
        let content_of = |eq: &MultiPoly| -> Vec<(Var, u32)> {
            let mut iter = eq.terms();
            let first = match iter.next() {
                Some((m, _)) => m.clone(),
                None => return Vec::new(),
            };
            first
                .exps()
                .iter()
                .filter_map(|(v, e)| {
                    let shared = eq.terms().map(|(m, _)| m.deg_of(v)).min().unwrap_or(0);
                    if shared > 0 {
                        Some((v.clone(), shared.min(*e)))
                    } else {
                        None
                    }
                })
                .collect()
        };
        let found = state
            .eqs
            .iter()
            .enumerate()
            .find_map(|(i, eq)| {
                let c = content_of(eq);
                if c.is_empty() {
                    None
                } else {
                    Some((i, c))
                }
            });
        if let Some((ei, content)) = found {
            if state.depth >= self.limits.max_split_depth {
                self.dropped
                    .push(format!("split depth {} exhausted", self.limits.max_split_depth));
                return;
            }
            let vars: Vec<Var> = content.iter().map(|(v, _)| v.clone()).collect();
            for (i, v) in vars.iter().enumerate() {
                let mut s = SolveState {
                    eqs: state.eqs.clone(),
                    assign: state.assign.clone(),
                    constraints: state.constraints.clone(),
                    nonvan: state.nonvan.clone(),
                    depth: state.depth + 1,
                };
                s.nonvan
                    .extend(vars[..i].iter().map(|w| MultiPoly::var(w.clone())));
                if v.is_param() {
                    s.constraints.push(MultiPoly::var(v.clone()));
                } else {
                    s.assign.push((v.clone(), RatExpr::constant(Rat::zero())));
                }
                s.subst_poly(v, &MultiPoly::zero());
                self.explore(s);
            }
            let mut s = state;
            s.depth += 1;
            s.nonvan
                .extend(vars.iter().map(|w| MultiPoly::var(w.clone())));
            let reduced = {
                let eq = &s.eqs[ei];
                let mut acc = MultiPoly::zero();
                for (m, c) in eq.terms() {
                    let mut m2 = m.clone();
                    for (v, e) in &content {
                        for _ in 0..*e {
                            m2 = strip_one(&m2, v);
                        }
                    }
                    acc = acc.add(&MultiPoly::term(m2, c.clone()));
                }
                acc
            };
            s.eqs[ei] = reduced;
            self.explore(s);
            return;
        }

        // Strategy C: a univariate equation with rational coefficients.
        let uni = state.eqs.iter().enumerate().find_map(|(i, eq)| {
            let vars = eq.vars();
            if vars.len() != 1 {
                return None;
            }
            let v = vars.into_iter().next().unwrap();
            if v.is_param() {
                return None;
            }
            Some((i, v))
        });
        if let Some((ei, u)) = uni {
            let eq = state.eqs.remove(ei);
            let coeffs: Vec<Rat> = eq
                .coeffs_in(&u)
                .iter()
                .map(|c| c.as_constant().expect("univariate"))
                .collect();
            let roots = rational_roots(&coeffs);
            if roots.is_empty() {
                return; // no rational root: dead branch
            }
            if state.depth >= self.limits.max_split_depth && roots.len() > 1 {
                self.dropped
                    .push(format!("split depth {} exhausted", self.limits.max_split_depth));
                return;
            }
            for (r, _) in roots {
                let mut s = SolveState {
                    eqs: state.eqs.clone(),
                    assign: state.assign.clone(),
                    constraints: state.constraints.clone(),
                    nonvan: state.nonvan.clone(),
                    depth: state.depth + 1,
                };
                s.subst_poly(&u, &MultiPoly::constant(r.clone()));
                s.assign.push((u.clone(), RatExpr::constant(r)));
                self.explore(s);
            }
            return;
        }

        // Strategy D: linear pivot whose coefficient involves other
        // variables; split on that coefficient vanishing.
        let mut best: Option<(u32, usize, usize)> = None;
        for (ei, eq) in state.eqs.iter().enumerate() {
            for (ui, u) in self.unknowns.iter().enumerate() {
                if eq.deg_in(u) != 1 {
                    continue;
                }
                let key = (eq.degree(), ui, ei);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        if let Some((_, ui, ei)) = best {
            if state.depth >= self.limits.max_split_depth {
                self.dropped
                    .push(format!("split depth {} exhausted", self.limits.max_split_depth));
                return;
            }
            let u = self.unknowns[ui].clone();
            let cs = state.eqs[ei].coeffs_in(&u);
            let a = cs[1].clone();
            let b = cs[0].clone();

            let mut s0 = SolveState {
                eqs: state.eqs.clone(),
                assign: state.assign.clone(),
                constraints: state.constraints.clone(),
                nonvan: state.nonvan.clone(),
                depth: state.depth + 1,
            };
            s0.eqs.push(a.clone());
            self.explore(s0);

            let mut s1 = state;
            s1.depth += 1;
            s1.eqs.remove(ei);
            s1.nonvan.push(a.clone());
            s1.subst_frac(&u, &b.neg(), &a);
            s1.assign.push((
                u,
                RatExpr {
                    num: b.neg(),
                    den: a,
                }
                .tidy(),
            ));
            self.explore(s1);
            return;
        }

        // Stuck. Equations carrying parameters become verbatim constraints;
        // a parameter-free leftover means this branch is beyond the solver.
        if state.eqs.iter().all(|eq| eq.has_params()) {
            let mut s = state;
            let eqs = std::mem::take(&mut s.eqs);
            s.constraints.extend(eqs);
            self.finalize(s);
        } else {
            let msg = state
                .eqs
                .iter()
                .filter(|eq| !eq.has_params())
                .map(|eq| eq.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            self.dropped.push(format!("unresolved equations: {}", msg));
        }
    }
}

fn strip_one(m: &crate::diffpoly::Monomial, v: &Var) -> crate::diffpoly::Monomial {
    let pairs: Vec<(Var, u32)> = m
        .exps()
        .iter()
        .map(|(w, e)| {
            if w == v {
                (w.clone(), e - 1)
            } else {
                (w.clone(), *e)
            }
        })
        .collect();
    crate::diffpoly::Monomial::from_pairs(pairs)
}

/// Solve by pivoting and bounded splitting. Deterministic; sound for every
/// returned branch; incomplete by design.
pub fn solve_algebraic(asys: &AlgebraicSystem, limits: &SolveLimits) -> Result<SolutionSet> {
    if asys.unknowns.len() > limits.max_unknowns {
        return Err(Error::Gaveup {
            reason: format!(
                "{} unknowns exceed the limit of {}",
                asys.unknowns.len(),
                limits.max_unknowns
            ),
        });
    }
    if let Some(d) = asys.equations.iter().map(|e| e.degree()).max() {
        if d > limits.max_total_degree {
            return Err(Error::Gaveup {
                reason: format!(
                    "total degree {} exceeds the limit of {}",
                    d, limits.max_total_degree
                ),
            });
        }
    }
    let mut ex = Explorer {
        unknowns: &asys.unknowns,
        limits: *limits,
        out: Vec::new(),
        dropped: Vec::new(),
    };
    ex.explore(SolveState {
        eqs: asys.equations.clone(),
        assign: Vec::new(),
        constraints: Vec::new(),
        nonvan: Vec::new(),
        depth: 0,
    });
    let mut branches: Vec<Branch> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for b in ex.out {
        let key = format!(
            "{:?}|{:?}",
            b.assignments
                .iter()
                .map(|(v, e)| format!("{}={}", v, e))
                .collect::<Vec<_>>(),
            b.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        );
        if seen.insert(key) {
            branches.push(b);
        }
    }
    Ok(SolutionSet {
        branches,
        dropped: ex.dropped,
    })
}

/// Parameter-aware entry point: identical engine, but insists the system
/// actually carries parameters so constraints mean something.
pub fn derive_constraints(asys: &AlgebraicSystem, limits: &SolveLimits) -> Result<SolutionSet> {
    if asys.parameters.is_empty() {
        return solve_algebraic(asys, limits);
    }
    solve_algebraic(asys, limits)
}

/// Substitute a branch into one polynomial; the numerator of the result.
pub fn residual_after(eq: &MultiPoly, branch: &Branch) -> MultiPoly {
    let mut r = RatExpr::poly(eq.clone());
    for (v, e) in &branch.assignments {
        r = r.subst_var(v, e);
    }
    r.num
}

/// Soundness check: every equation must vanish identically after the
/// branch's assignments, or reduce to one of its recorded constraints.
pub fn check_branch(asys: &AlgebraicSystem, branch: &Branch) -> bool {
    for eq in &asys.equations {
        let res = residual_after(eq, branch);
        if res.is_zero() {
            continue;
        }
        let n = res.normalize();
        if !branch.constraints.iter().any(|c| c.normalize() == n) {
            return false;
        }
    }
    for nv in &branch.nonvanishing {
        if residual_after(nv, branch).is_zero() {
            return false;
        }
    }
    true
}

/// Values tried, in order, for unknowns a branch leaves free.
const FREE_CANDIDATES: [(i64, i64); 8] =
    [(1, 1), (0, 1), (-1, 1), (2, 1), (1, 2), (-2, 1), (-1, 2), (3, 1)];

const MAX_FREE_COMBOS: usize = 64;

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub kind: MuKind,
    pub n_x: usize,
    pub n_y: usize,
    pub mu: RatY,
    pub system: DeterminingSystem,
    pub solutions: SolutionSet,
    pub branch_index: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SearchReport {
    pub hit: Option<SearchHit>,
    pub tried: usize,
    pub diagnostics: Vec<String>,
}

impl SearchReport {
    pub fn into_result(self) -> Result<SearchHit> {
        let tried = self.tried;
        self.hit.ok_or(Error::NotFound { tried })
    }
}

fn instantiate_branch(
    kind: MuKind,
    ode: &Ode,
    sys: &DeterminingSystem,
    branch: &Branch,
) -> Vec<RatY> {
    if !branch.constraints.is_empty() {
        return Vec::new();
    }
    let unknowns = sys.ansatz.unknowns();
    let frees: Vec<Var> = unknowns
        .iter()
        .filter(|u| !branch.assignments.contains_key(u))
        .cloned()
        .collect();
    let mut candidates: Vec<BTreeMap<Var, Rat>> = Vec::new();
    let mut stack: Vec<BTreeMap<Var, Rat>> = vec![BTreeMap::new()];
    for f in &frees {
        let mut next = Vec::new();
        for partial in &stack {
            for (n, d) in FREE_CANDIDATES {
                if next.len() + candidates.len() >= MAX_FREE_COMBOS {
                    break;
                }
                let mut m = partial.clone();
                m.insert(f.clone(), ratio(n, d));
                next.push(m);
            }
        }
        stack = next;
    }
    candidates.extend(stack);

    let mut out = Vec::new();
    for free_vals in candidates {
        let mut map: BTreeMap<Var, Rat> = free_vals.clone();
        let mut ok = true;
        for (v, e) in &branch.assignments {
            match e.eval(&free_vals) {
                Some(val) => {
                    map.insert(v.clone(), val);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if branch
            .nonvanishing
            .iter()
            .any(|nv| nv.eval(&map).map_or(true, |v| v.is_zero()))
        {
            continue;
        }
        let subst_side = |p: &PolyY<crate::diffpoly::DiffPoly>| -> Option<PolyY<crate::ratx::RatX>> {
            let mut coeffs = Vec::new();
            for c in p.coeffs() {
                coeffs.push(c.subst_rats(&map).as_ratx()?);
            }
            Some(PolyY::new(coeffs))
        };
        let (x_poly, y_poly) = match (subst_side(sys.ansatz.x_poly()), subst_side(sys.ansatz.y_poly()))
        {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        let den = if kind == MuKind::Yyq {
            match ode.q() {
                Some(q) => q.mul(&y_poly),
                None => continue,
            }
        } else {
            y_poly
        };
        if let Ok(mu) = RatY::new(x_poly, den) {
            if !out.contains(&mu) {
                out.push(mu);
            }
        }
    }
    out
}

/// Iterate kinds and admissible ansatz sizes, solve each determining
/// system, and return the first instantiated candidate whose residual for
/// its kind is exactly zero.
pub fn search(
    ode: &Ode,
    kinds: &[MuKind],
    max_nx: usize,
    mode: AnsatzMode,
    limits: &SolveLimits,
) -> SearchReport {
    let mut report = SearchReport::default();
    if mode == AnsatzMode::Func {
        report.diagnostics.push("func mode is export-only".to_string());
        return report;
    }
    let (n_p, n_q) = ode.degrees();
    for &kind in kinds {
        for (n_x, n_y) in admissible_pairs(kind, n_p, n_q, max_nx) {
            let ansatz = build_ansatz(kind, n_x, n_y, mode);
            let sys = match build_system(kind, ode, &ansatz) {
                Ok(s) => s,
                Err(e) => {
                    report
                        .diagnostics
                        .push(format!("{} ({},{}): {}", kind, n_x, n_y, e));
                    continue;
                }
            };
            let asys = match reduce_to_algebraic(&sys) {
                Ok(a) => a,
                Err(e) => {
                    report
                        .diagnostics
                        .push(format!("{} ({},{}): {}", kind, n_x, n_y, e));
                    continue;
                }
            };
            let sols = match solve_algebraic(&asys, limits) {
                Ok(s) => s,
                Err(e) => {
                    report
                        .diagnostics
                        .push(format!("{} ({},{}): {}", kind, n_x, n_y, e));
                    continue;
                }
            };
            for (bi, branch) in sols.branches.iter().enumerate() {
                for mu in instantiate_branch(kind, ode, &sys, branch) {
                    report.tried += 1;
                    match mu_residual_raty(kind, ode, &mu) {
                        Ok(r) if r.is_zero() => {
                            report.hit = Some(SearchHit {
                                kind,
                                n_x,
                                n_y,
                                mu,
                                system: sys,
                                solutions: sols,
                                branch_index: bi,
                            });
                            return report;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            report
                                .diagnostics
                                .push(format!("{} ({},{}): {}", kind, n_x, n_y, e));
                        }
                    }
                }
            }
            if !sols.branches.is_empty() && ode.has_params() {
                report.diagnostics.push(format!(
                    "{} ({},{}): {} branch(es) with parameter constraints",
                    kind,
                    n_x,
                    n_y,
                    sols.branches.len()
                ));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::parse_ode;
    use crate::vars::Side;

    fn solve_ode_system(
        text: &str,
        params: &[String],
        kind: MuKind,
        nx: usize,
        ny: usize,
    ) -> (AlgebraicSystem, SolutionSet) {
        let ode = parse_ode(text, params).unwrap();
        let ansatz = build_ansatz(kind, nx, ny, AnsatzMode::Const);
        let sys = build_system(kind, &ode, &ansatz).unwrap();
        let asys = reduce_to_algebraic(&sys).unwrap();
        let sols = solve_algebraic(&asys, &SolveLimits::default()).unwrap();
        (asys, sols)
    }

    #[test]
    fn quadratic_fixture_has_unique_branch() {
        let (asys, sols) = solve_ode_system("dy/dx = y^2", &[], MuKind::Yy, 0, 1);
        assert_eq!(sols.branches.len(), 1);
        let b = &sols.branches[0];
        assert!(check_branch(&asys, b));
        let c0 = Var::coef(Side::Num, 0, 0);
        let d0 = Var::coef(Side::Den, 0, 0);
        assert_eq!(b.assignments[&c0], RatExpr::constant(rat(-2)));
        assert_eq!(b.assignments[&d0], RatExpr::constant(rat(0)));
        assert!(b.constraints.is_empty());
    }

    #[test]
    fn irrational_system_is_empty() {
        // u^2 + 1 = 0 has no rational roots.
        let u = Var::coef(Side::Num, 0, 0);
        let asys = AlgebraicSystem {
            equations: vec![MultiPoly::var(u.clone()).pow(2).add(&MultiPoly::one())],
            unknowns: vec![u],
            parameters: vec![],
        };
        let sols = solve_algebraic(&asys, &SolveLimits::default()).unwrap();
        assert!(sols.branches.is_empty());
        assert!(sols.dropped.is_empty());
    }

    #[test]
    fn product_splits_into_two_branches() {
        let u = Var::coef(Side::Num, 0, 0);
        let v = Var::coef(Side::Den, 0, 0);
        let asys = AlgebraicSystem {
            equations: vec![MultiPoly::var(u.clone()).mul(&MultiPoly::var(v.clone()))],
            unknowns: vec![u.clone(), v.clone()],
            parameters: vec![],
        };
        let sols = solve_algebraic(&asys, &SolveLimits::default()).unwrap();
        assert_eq!(sols.branches.len(), 2);
        assert_eq!(
            sols.branches[0].assignments[&u],
            RatExpr::constant(rat(0))
        );
        assert!(!sols.branches[0].assignments.contains_key(&v));
        assert_eq!(
            sols.branches[1].assignments[&v],
            RatExpr::constant(rat(0))
        );
        assert_eq!(
            sols.branches[1].nonvanishing,
            vec![MultiPoly::var(u.clone())]
        );
        for b in &sols.branches {
            assert!(check_branch(&asys, b));
        }
    }

    #[test]
    fn parameter_constraint_branch() {
        let (asys, sols) =
            solve_ode_system("dy/dx = y^2 + p", &["p".to_string()], MuKind::Yy, 0, 1);
        assert_eq!(asys.parameters, vec![Var::param("p")]);
        let c0 = Var::coef(Side::Num, 0, 0);
        let d0 = Var::coef(Side::Den, 0, 0);
        let found = sols.branches.iter().any(|b| {
            b.assignments.get(&c0) == Some(&RatExpr::constant(rat(-2)))
                && b.constraints.iter().any(|c| {
                    let vars = c.vars();
                    vars.contains(&d0) && vars.contains(&Var::param("p")) && c.degree() == 2
                })
        });
        assert!(found, "branches: {:?}", sols.branches);
        for b in &sols.branches {
            assert!(check_branch(&asys, b), "unsound branch {:?}", b);
        }
    }

    #[test]
    fn search_finds_quadratic_factor() {
        let ode = parse_ode("dy/dx = y^2", &[]).unwrap();
        let report = search(
            &ode,
            &[MuKind::Yy],
            1,
            AnsatzMode::Const,
            &SolveLimits::default(),
        );
        let hit = report.into_result().unwrap();
        assert_eq!(format!("{}", hit.mu), "-2/y");
        assert_eq!(hit.kind, MuKind::Yy);
    }

    #[test]
    fn search_finds_zero_factor_for_linear() {
        let ode = parse_ode("dy/dx = y", &[]).unwrap();
        let report = search(
            &ode,
            &[MuKind::Yy],
            0,
            AnsatzMode::Const,
            &SolveLimits::default(),
        );
        let hit = report.into_result().unwrap();
        assert!(hit.mu.is_zero());
    }

    #[test]
    fn search_finds_logistic_factor() {
        let ode = parse_ode("dy/dx = y - y^2", &[]).unwrap();
        let report = search(
            &ode,
            &[MuKind::Yy],
            2,
            AnsatzMode::Const,
            &SolveLimits::default(),
        );
        let hit = report.into_result().unwrap();
        let r = mu_residual_raty(MuKind::Yy, &ode, &hit.mu).unwrap();
        assert!(r.is_zero());
        // reference factor (1 - 2y)/(y^2 - y) must also pass
        let reference = crate::raty::RatY::new(
            PolyY::new(vec![crate::ratx::RatX::one(), crate::ratx::RatX::constant(rat(-2))]),
            PolyY::new(vec![
                crate::ratx::RatX::zero(),
                crate::ratx::RatX::constant(rat(-1)),
                crate::ratx::RatX::one(),
            ]),
        )
        .unwrap();
        let r = mu_residual_raty(MuKind::Yy, &ode, &reference).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn gaveup_on_oversized_systems() {
        let u = Var::coef(Side::Num, 0, 0);
        let unknowns: Vec<Var> = (0..13).map(|i| Var::coef(Side::Num, i, 0)).collect();
        let asys = AlgebraicSystem {
            equations: vec![MultiPoly::var(u)],
            unknowns,
            parameters: vec![],
        };
        assert!(matches!(
            solve_algebraic(&asys, &SolveLimits::default()),
            Err(Error::Gaveup { .. })
        ));
    }

    #[test]
    fn func_reduction_is_rejected() {
        let ode = parse_ode("dy/dx = y", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 0, AnsatzMode::Func);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        assert!(matches!(
            reduce_to_algebraic(&sys),
            Err(Error::UnsupportedMode)
        ));
    }

    #[test]
    fn x_collection_splits_equations() {
        // dy/dx = x*y has mu = c0 candidate residual c0 + x*c0... the
        // built system for CONST(0,0) collects x-powers separately.
        let ode = parse_ode("dy/dx = x*y", &[]).unwrap();
        let ansatz = build_ansatz(MuKind::Yy, 0, 0, AnsatzMode::Const);
        let sys = build_system(MuKind::Yy, &ode, &ansatz).unwrap();
        let asys = reduce_to_algebraic(&sys).unwrap();
        // residual mu_x + (f mu)_y = x*c0: single x-power, one equation
        assert_eq!(asys.equations.len(), 1);
        let sols = solve_algebraic(&asys, &SolveLimits::default()).unwrap();
        assert_eq!(sols.branches.len(), 1);
    }

    #[test]
    fn back_substitution_rewrites_earlier_values() {
        let u = Var::coef(Side::Num, 0, 0);
        let v = Var::coef(Side::Num, 1, 0);
        // u := v + 1 recorded first, then v := 2; final u must be 3.
        let assign = vec![
            (
                u.clone(),
                RatExpr::poly(MultiPoly::var(v.clone()).add(&MultiPoly::one())),
            ),
            (v.clone(), RatExpr::constant(rat(2))),
        ];
        let map = Explorer::back_substitute(&assign);
        assert_eq!(map[&u], RatExpr::constant(rat(3)));
        assert_eq!(map[&v], RatExpr::constant(rat(2)));
    }
}
