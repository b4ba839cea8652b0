//! Exact rational linear programming over systems `a·x >= b` with free
//! variables.
//!
//! The solver runs a two-phase primal simplex with Bland's rule on the dual
//! problem `max b·u  s.t.  Aᵀu = c, u >= 0`. The tableau therefore has one
//! row per variable and one column per inequality, which is the cheap side
//! for the tall systems produced by lifting. Primal witnesses are read off the
//! final simplex multipliers; an unbounded dual ray is a Farkas certificate.
//! Every witness, dual vector and Farkas vector is re-verified before it is
//! returned.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, fmt_vector, zeros, RVector, Rational};
use crate::par::{self, Exec};

/// One inequality `a·x >= b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub a: RVector,
    pub b: Rational,
}

impl Inequality {
    pub fn new(a: RVector, b: Rational) -> Self {
        Inequality { a, b }
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot(&self.a, x) - &self.b
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    /// Canonical copy: scaled so the first nonzero coefficient has absolute
    /// value one. Rows with zero `a` are left untouched.
    pub fn normalized(&self) -> Inequality {
        let mut a = self.a.clone();
        match crate::exact::normalize_leading(&mut a) {
            Some(s) => Inequality { a, b: &self.b * s },
            None => self.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug)]
pub struct LpOptions {
    pub max_pivots: u64,
    pub exec: Exec,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { max_pivots: 1_000_000, exec: Exec::default() }
    }
}

/// Result of a feasibility or optimization call.
#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Feasible (optimal) point when `status == Optimal`.
    pub point: Option<RVector>,
    /// `c·point` when `status == Optimal`.
    pub value: Option<Rational>,
    /// `u >= 0` with `uᵀA = 0`, `uᵀb > 0` when `status == Infeasible`.
    pub farkas: Option<RVector>,
    /// Verified dual multipliers (`u >= 0`, `uᵀA = c`, `uᵀb = value`) for
    /// optimal outcomes.
    pub dual: Option<RVector>,
    pub pivots: u64,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Optimal || self.status == LpStatus::Unbounded
    }

    fn limit(pivots: u64) -> Self {
        LpOutcome {
            status: LpStatus::IterationLimit,
            point: None,
            value: None,
            farkas: None,
            dual: None,
            pivots,
        }
    }
}

/// Decides whether `{x : a_i·x >= b_i}` is nonempty.
pub fn feasible(dim: usize, rows: &[Inequality], opts: &LpOptions) -> Result<LpOutcome> {
    check_dims(dim, rows)?;
    let c = zeros(dim);
    let out = solve_dual(dim, rows, &c, opts)?;
    match out {
        DualResult::Limit(p) => Ok(LpOutcome::limit(p)),
        DualResult::Optimal { x, u, pivots } => {
            verify_point(rows, &x)?;
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                point: Some(x),
                value: Some(Rational::zero()),
                farkas: None,
                dual: Some(u),
                pivots,
            })
        }
        DualResult::Ray { ray, pivots } => {
            verify_farkas(dim, rows, &ray)?;
            Ok(LpOutcome {
                status: LpStatus::Infeasible,
                point: None,
                value: None,
                farkas: Some(ray),
                dual: None,
                pivots,
            })
        }
        DualResult::DualInfeasible { .. } => {
            Err(Error::Internal("dual infeasible with zero objective".into()))
        }
    }
}

/// Optimizes `c·x` over `{x : a_i·x >= b_i}`.
pub fn optimize(
    dim: usize,
    rows: &[Inequality],
    c: &[Rational],
    sense: Sense,
    opts: &LpOptions,
) -> Result<LpOutcome> {
    check_dims(dim, rows)?;
    if c.len() != dim {
        return Err(Error::Dimension(format!("objective of length {} in dimension {dim}", c.len())));
    }
    // Internally always minimize.
    let cmin: RVector = match sense {
        Sense::Min => c.to_vec(),
        Sense::Max => c.iter().map(|v| -v.clone()).collect(),
    };
    match solve_dual(dim, rows, &cmin, opts)? {
        DualResult::Limit(p) => Ok(LpOutcome::limit(p)),
        DualResult::Optimal { x, u, pivots } => {
            verify_point(rows, &x)?;
            let primal = dot(&cmin, &x);
            verify_dual(dim, rows, &cmin, &u, &primal)?;
            let value = match sense {
                Sense::Min => primal,
                Sense::Max => -primal,
            };
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                point: Some(x),
                value: Some(value),
                farkas: None,
                dual: Some(u),
                pivots,
            })
        }
        DualResult::Ray { ray, pivots } => {
            verify_farkas(dim, rows, &ray)?;
            Ok(LpOutcome {
                status: LpStatus::Infeasible,
                point: None,
                value: None,
                farkas: Some(ray),
                dual: None,
                pivots,
            })
        }
        DualResult::DualInfeasible { pivots } => {
            // Primal is infeasible or unbounded; feasibility decides which.
            let f = feasible(dim, rows, opts)?;
            let pivots = pivots + f.pivots;
            Ok(match f.status {
                LpStatus::Optimal => LpOutcome {
                    status: LpStatus::Unbounded,
                    point: f.point,
                    value: None,
                    farkas: None,
                    dual: None,
                    pivots,
                },
                _ => LpOutcome { pivots, ..f },
            })
        }
    }
}

fn check_dims(dim: usize, rows: &[Inequality]) -> Result<()> {
    if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.a.len() != dim) {
        return Err(Error::Dimension(format!("row {i} has length {} in dimension {dim}", rows[i].a.len())));
    }
    Ok(())
}

fn verify_point(rows: &[Inequality], x: &[Rational]) -> Result<()> {
    if let Some(i) = rows.iter().position(|r| !r.is_satisfied(x)) {
        return Err(Error::Internal(format!("witness [{}] violates row {i}", fmt_vector(x))));
    }
    Ok(())
}

fn combine(dim: usize, rows: &[Inequality], u: &[Rational]) -> (RVector, Rational) {
    let mut ua = zeros(dim);
    let mut ub = Rational::zero();
    for (r, w) in rows.iter().zip(u) {
        if w.is_zero() {
            continue;
        }
        for (acc, a) in ua.iter_mut().zip(&r.a) {
            if !a.is_zero() {
                *acc += w * a;
            }
        }
        ub += w * &r.b;
    }
    (ua, ub)
}

/// Checks `u >= 0`, `uᵀA = 0`, `uᵀb > 0`.
pub fn verify_farkas(dim: usize, rows: &[Inequality], u: &[Rational]) -> Result<()> {
    if u.len() != rows.len() || u.iter().any(Signed::is_negative) {
        return Err(Error::Internal("Farkas vector has wrong length or a negative entry".into()));
    }
    let (ua, ub) = combine(dim, rows, u);
    if ua.iter().any(|v| !v.is_zero()) || !ub.is_positive() {
        return Err(Error::Internal("Farkas certificate does not verify".into()));
    }
    Ok(())
}

fn verify_dual(dim: usize, rows: &[Inequality], c: &[Rational], u: &[Rational], value: &Rational) -> Result<()> {
    if u.iter().any(Signed::is_negative) {
        return Err(Error::Internal("negative dual multiplier".into()));
    }
    let (ua, ub) = combine(dim, rows, u);
    if ua.as_slice() != c || &ub != value {
        return Err(Error::Internal("dual certificate does not match primal optimum".into()));
    }
    Ok(())
}

enum DualResult {
    Optimal { x: RVector, u: RVector, pivots: u64 },
    Ray { ray: RVector, pivots: u64 },
    DualInfeasible { pivots: u64 },
    Limit(u64),
}

/// Dense simplex tableau for `max cost·u  s.t.  M u = rhs, u >= 0` with an
/// artificial identity block. Column layout: structural `0..nu`, artificial
/// `nu..nu+neq`, right-hand side last.
struct Tableau {
    t: Vec<RVector>,
    /// Reduced costs (same layout; last entry is minus the objective value).
    d: RVector,
    basis: Vec<usize>,
    nu: usize,
    neq: usize,
    pivots: u64,
    exec: Exec,
}

const PAR_THRESHOLD: usize = 1 << 14;

impl Tableau {
    fn rhs(&self) -> usize {
        self.nu + self.neq
    }

    fn pivot(&mut self, r: usize, e: usize) {
        self.pivots += 1;
        let inv = self.t[r][e].recip();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = std::mem::take(&mut self.t[r]);
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let update = |row: &mut RVector| {
            let f = row[e].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let d = &f * &prow[j];
                row[j] -= d;
            }
        };
        let exec = if self.t.len() * nz.len() >= PAR_THRESHOLD { self.exec } else { Exec::Sequential };
        par::for_each_mut(exec, &mut self.t, |i, row| {
            if i != r {
                update(row)
            }
        });
        update(&mut self.d);
        self.t[r] = prow;
        self.basis[r] = e;
    }

    /// Bland: lowest-index structural column with positive reduced cost.
    fn entering(&self) -> Option<usize> {
        (0..self.nu).find(|&j| self.d[j].is_positive())
    }

    /// Minimum-ratio row; ties broken by lowest basic variable index.
    fn leaving(&self, e: usize) -> Option<usize> {
        let rhs = self.rhs();
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..self.neq {
            let a = &self.t[r][e];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.t[r][rhs] / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < bratio || (ratio == bratio && self.basis[r] < self.basis[br]) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    fn set_costs(&mut self, cost: &[Rational]) {
        let rhs = self.rhs();
        let mut d: RVector = (0..=rhs).map(|j| if j < cost.len() { cost[j].clone() } else { Rational::zero() }).collect();
        for r in 0..self.neq {
            let cb = basic_cost(cost, self.basis[r]);
            if cb.is_zero() {
                continue;
            }
            for j in 0..=rhs {
                let v = &self.t[r][j];
                if !v.is_zero() {
                    d[j] -= &cb * v;
                }
            }
        }
        self.d = d;
    }

    /// Runs Bland iterations until optimal, unbounded (returns the entering
    /// column) or the pivot cap is hit.
    fn run(&mut self, max_pivots: u64) -> Step {
        loop {
            let Some(e) = self.entering() else { return Step::Optimal };
            let Some(r) = self.leaving(e) else { return Step::Unbounded(e) };
            if self.pivots >= max_pivots {
                return Step::Limit;
            }
            self.pivot(r, e);
        }
    }
}

fn basic_cost(cost: &[Rational], var: usize) -> Rational {
    cost.get(var).cloned().unwrap_or_else(Rational::zero)
}

enum Step {
    Optimal,
    Unbounded(usize),
    Limit,
}

fn solve_dual(dim: usize, rows: &[Inequality], c: &[Rational], opts: &LpOptions) -> Result<DualResult> {
    let nu = rows.len();
    let neq = dim;
    let ncols = nu + neq + 1;
    let mut signs = Vec::with_capacity(neq);
    let mut t = Vec::with_capacity(neq);
    for i in 0..neq {
        let s = if c[i].is_negative() { -Rational::one() } else { Rational::one() };
        let mut row = zeros(ncols);
        for (j, r) in rows.iter().enumerate() {
            if !r.a[i].is_zero() {
                row[j] = &r.a[i] * &s;
            }
        }
        row[nu + i] = Rational::one();
        row[ncols - 1] = &c[i] * &s;
        t.push(row);
        signs.push(s);
    }
    let mut tab = Tableau {
        t,
        d: zeros(ncols),
        basis: (nu..nu + neq).collect(),
        nu,
        neq,
        pivots: 0,
        exec: opts.exec,
    };

    // Phase one: maximize minus the sum of artificials.
    let mut phase1: RVector = zeros(nu);
    phase1.extend((0..neq).map(|_| -Rational::one()));
    tab.set_costs(&phase1);
    if !tab.d[ncols - 1].is_zero() {
        match tab.run(opts.max_pivots) {
            Step::Optimal => {}
            Step::Limit => return Ok(DualResult::Limit(tab.pivots)),
            Step::Unbounded(_) => return Err(Error::Internal("phase one unbounded".into())),
        }
        if !tab.d[ncols - 1].is_zero() {
            return Ok(DualResult::DualInfeasible { pivots: tab.pivots });
        }
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where this is impossible are linearly dependent and stay inert.
    for r in 0..neq {
        if tab.basis[r] >= nu {
            if let Some(j) = (0..nu).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    // Phase two.
    let cost: RVector = rows.iter().map(|r| r.b.clone()).collect();
    tab.set_costs(&cost);
    match tab.run(opts.max_pivots) {
        Step::Limit => Ok(DualResult::Limit(tab.pivots)),
        Step::Unbounded(e) => {
            let mut ray = zeros(nu);
            ray[e] = Rational::one();
            for r in 0..neq {
                let b = tab.basis[r];
                if b < nu && !tab.t[r][e].is_zero() {
                    ray[b] = -tab.t[r][e].clone();
                }
            }
            Ok(DualResult::Ray { ray, pivots: tab.pivots })
        }
        Step::Optimal => {
            let rhs = tab.rhs();
            let mut u = zeros(nu);
            for r in 0..neq {
                if tab.basis[r] < nu {
                    u[tab.basis[r]] = tab.t[r][rhs].clone();
                }
            }
            // Simplex multipliers pi = c_B B^-1, with B^-1 in the artificial block.
            let x: RVector = (0..neq)
                .map(|i| {
                    let mut pi = Rational::zero();
                    for r in 0..neq {
                        let cb = basic_cost(&cost, tab.basis[r]);
                        let v = &tab.t[r][nu + i];
                        if !cb.is_zero() && !v.is_zero() {
                            pi += &cb * v;
                        }
                    }
                    pi * &signs[i]
                })
                .collect();
            Ok(DualResult::Optimal { x, u, pivots: tab.pivots })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn cube(n: usize) -> Vec<Inequality> {
        let mut rows = Vec::new();
        for i in 0..n {
            let mut a = zeros(n);
            a[i] = int(1);
            rows.push(Inequality::new(a.clone(), int(0)));
            a[i] = int(-1);
            rows.push(Inequality::new(a, int(-1)));
        }
        rows
    }

    #[test]
    fn cube_is_feasible() {
        let out = feasible(3, &cube(3), &LpOptions::default()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        let x = out.point.unwrap();
        assert!(cube(3).iter().all(|r| r.is_satisfied(&x)));
    }

    #[test]
    fn contradictory_rows_give_farkas() {
        let mut rows = cube(2);
        rows.push(Inequality::new(vec![int(1), int(0)], int(1)));
        rows.push(Inequality::new(vec![int(-1), int(0)], rat(-1, 2)));
        let out = feasible(2, &rows, &LpOptions::default()).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        let u = out.farkas.unwrap();
        verify_farkas(2, &rows, &u).unwrap();
    }

    #[test]
    fn min_and_max_sum_over_cube() {
        let c = vec![int(1), int(1), int(1)];
        let lo = optimize(3, &cube(3), &c, Sense::Min, &LpOptions::default()).unwrap();
        assert_eq!(lo.value.unwrap(), int(0));
        let hi = optimize(3, &cube(3), &c, Sense::Max, &LpOptions::default()).unwrap();
        assert_eq!(hi.value.unwrap(), int(3));
        assert!(hi.dual.is_some());
    }

    #[test]
    fn unbounded_without_box() {
        let rows = vec![Inequality::new(vec![int(1)], int(0))];
        let out = optimize(1, &rows, &[int(1)], Sense::Max, &LpOptions::default()).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
    }

    #[test]
    fn no_rows_is_feasible() {
        let out = feasible(2, &[], &LpOptions::default()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
    }

    #[test]
    fn pivot_cap_is_a_status() {
        let c = vec![int(-1), int(-1), int(-1)];
        let opts = LpOptions { max_pivots: 0, ..LpOptions::default() };
        let out = optimize(3, &cube(3), &c, Sense::Min, &opts).unwrap();
        assert_eq!(out.status, LpStatus::IterationLimit);
    }

    #[test]
    fn dimension_mismatch() {
        let rows = vec![Inequality::new(vec![int(1)], int(0))];
        assert!(feasible(2, &rows, &LpOptions::default()).is_err());
    }
}
