//! Lovász-Schrijver (`LS`) and lift-and-project (`LS₀`) operators.
//!
//! A point `x` lies in `LS₀(P)` iff some `(n+1)×(n+1)` matrix `Y` with
//! `Ye₀ = Yᵀe₀ = diag(Y) = (1, x)` has `Ye_i ∈ K(P)` and `Y(e₀ − e_i) ∈ K(P)`
//! for all `i`, where `K(P) = {(λ, z) : λ >= 0, Az >= λb}`; `LS` also asks
//! for `Y = Yᵀ`. Because the box rows are part of `A`, `λ = 0` forces
//! `z = 0`, so this cone is exactly the homogenization of `P`.
//!
//! Single steps are decided by one LP over the free entries of `Y`. The
//! closures themselves are built explicitly only at small dimension: `LS₀`
//! as `∩_i conv(P ∩ {x_i=0} ∪ P ∩ {x_i=1})`, and `LS` (or `LS₀`, as a
//! cross-check) by Fourier-Motzkin projection of the lifted system.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::exact::{int, zeros, RMatrix, RVector, Rational};
use crate::lp::{self, Inequality, LpStatus};
use crate::perm::reynolds_stabilized;
use crate::polytope::{hull, remove_redundant_rows, CubeFace, HPolytope, VPolytope};
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    /// Lift-and-project, no symmetry requirement on `Y`.
    Ls0,
    /// Lovász-Schrijver, `Y` symmetric.
    Ls,
}

impl Operator {
    fn symmetric(self) -> bool {
        self == Operator::Ls
    }
}

/// A lifting matrix `Y` with rows and columns indexed by `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftMatrix {
    pub y: RMatrix,
}

impl LiftMatrix {
    pub fn n(&self) -> usize {
        self.y.rows() - 1
    }

    /// `(Y_{11}, …, Y_{nn})`.
    pub fn point(&self) -> RVector {
        (1..=self.n()).map(|i| self.y[(i, i)].clone()).collect()
    }

    /// Checks the anchoring, the cone conditions for `P`, and symmetry if
    /// requested.
    pub fn verify(&self, p: &HPolytope, op: Operator) -> Result<()> {
        let n = self.n();
        if n != p.n() || !self.y.is_square() {
            return Err(Error::Dimension("lifting matrix does not match the polytope".into()));
        }
        if !self.y[(0, 0)].is_one() {
            return Err(Error::Verification("Y_00 != 1".into()));
        }
        for i in 1..=n {
            if self.y[(i, 0)] != self.y[(i, i)] || self.y[(0, i)] != self.y[(i, i)] {
                return Err(Error::Verification(format!("anchoring fails at index {i}")));
            }
        }
        if op.symmetric() && self.y.transpose() != self.y {
            return Err(Error::Verification("Y is not symmetric".into()));
        }
        for i in 1..=n {
            let col = self.y.column(i);
            let comp: RVector = (0..=n).map(|j| &self.y[(j, 0)] - &col[j]).collect();
            for (name, v) in [("Ye_i", &col), ("Y(e_0 - e_i)", &comp)] {
                if !in_cone(p, v) {
                    return Err(Error::Verification(format!("{name} outside K(P) for i = {i}")));
                }
            }
        }
        Ok(())
    }
}

/// `(λ, z) ∈ K(P)`.
pub fn in_cone(p: &HPolytope, v: &[Rational]) -> bool {
    let lam = &v[0];
    let z = &v[1..];
    !lam.is_negative() && p.rows().iter().all(|r| crate::exact::dot(&r.a, z) >= lam * &r.b)
}

/// An affine function of the LP variables.
#[derive(Clone, Debug)]
struct Affine {
    coef: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl Affine {
    fn constant(c: Rational) -> Self {
        Affine { coef: BTreeMap::new(), constant: c }
    }

    fn var(i: usize) -> Self {
        Affine { coef: BTreeMap::from([(i, Rational::one())]), constant: Rational::zero() }
    }

    fn axpy(&mut self, s: &Rational, o: &Affine) {
        if s.is_zero() {
            return;
        }
        for (i, c) in &o.coef {
            let e = self.coef.entry(*i).or_insert_with(Rational::zero);
            *e += s * c;
        }
        self.constant += s * &o.constant;
    }
}

/// Variable layout of the step LP: `x` first (unless anchored), then the
/// free off-diagonal entries of `Y`.
struct StepLayout {
    n: usize,
    symmetric: bool,
    anchor: Option<RVector>,
    pairs: BTreeMap<(usize, usize), usize>,
    dim: usize,
}

impl StepLayout {
    fn new(n: usize, symmetric: bool, anchor: Option<RVector>) -> Self {
        let mut next = if anchor.is_some() { 0 } else { n };
        let mut pairs = BTreeMap::new();
        for j in 1..=n {
            for i in 1..=n {
                if i == j || (symmetric && j > i) {
                    continue;
                }
                pairs.insert((j, i), next);
                next += 1;
            }
        }
        StepLayout { n, symmetric, anchor, pairs, dim: next }
    }

    fn x(&self, i: usize) -> Affine {
        match &self.anchor {
            Some(a) => Affine::constant(a[i - 1].clone()),
            None => Affine::var(i - 1),
        }
    }

    /// `Y_{ji}`.
    fn entry(&self, j: usize, i: usize) -> Affine {
        if j == 0 && i == 0 {
            return Affine::constant(Rational::one());
        }
        if j == 0 || i == 0 || i == j {
            return self.x(i.max(j));
        }
        let key = if self.symmetric { (j.min(i), j.max(i)) } else { (j, i) };
        Affine::var(self.pairs[&key])
    }

    fn rows(&self, p: &HPolytope) -> Vec<Inequality> {
        let n = self.n;
        let mut out = Vec::new();
        let mut push = |f: Affine| {
            let mut a = zeros(self.dim);
            for (i, c) in f.coef {
                a[i] = c;
            }
            out.push(Inequality::new(a, -f.constant));
        };
        for i in 1..=n {
            let col: Vec<Affine> = (0..=n).map(|j| self.entry(j, i)).collect();
            let comp: Vec<Affine> = (0..=n)
                .map(|j| {
                    let mut f = self.entry(j, 0);
                    f.axpy(&int(-1), &col[j]);
                    f
                })
                .collect();
            for v in [&col, &comp] {
                push(v[0].clone());
                for r in p.rows() {
                    let mut f = Affine::constant(Rational::zero());
                    for (j, a) in r.a.iter().enumerate() {
                        f.axpy(a, &v[j + 1]);
                    }
                    f.axpy(&-r.b.clone(), &v[0]);
                    push(f);
                }
            }
        }
        let mut seen = HashSet::new();
        out.retain(|r| !(r.a.iter().all(Zero::is_zero) && !r.b.is_positive()) && seen.insert(r.normalized()));
        out
    }

    fn matrix(&self, vars: &[Rational]) -> LiftMatrix {
        let n = self.n;
        let mut y = RMatrix::zeros(n + 1, n + 1);
        for j in 0..=n {
            for i in 0..=n {
                let f = self.entry(j, i);
                let mut v = f.constant;
                for (k, c) in f.coef {
                    v += c * &vars[k];
                }
                y[(j, i)] = v;
            }
        }
        LiftMatrix { y }
    }
}

/// Outcome of a single-step test.
#[derive(Clone, Debug)]
pub struct StepResult {
    pub witness: Option<LiftMatrix>,
    /// Farkas multipliers over the step LP rows when empty.
    pub farkas: Option<RVector>,
    pub rows: usize,
}

impl StepResult {
    pub fn is_empty(&self) -> bool {
        self.witness.is_none()
    }
}

fn step(p: &HPolytope, op: Operator, anchor: Option<RVector>, limits: &Limits) -> Result<StepResult> {
    let layout = StepLayout::new(p.n(), op.symmetric(), anchor);
    let rows = layout.rows(p);
    let out = lp::feasible(layout.dim, &rows, &limits.lp)?;
    match out.status {
        LpStatus::Optimal => {
            let w = layout.matrix(&out.point.unwrap());
            w.verify(p, op)?;
            Ok(StepResult { witness: Some(w), farkas: None, rows: rows.len() })
        }
        LpStatus::Infeasible => Ok(StepResult { witness: None, farkas: out.farkas, rows: rows.len() }),
        _ => Err(Error::ResourceLimit("pivot limit in lifting step".into())),
    }
}

/// Is `LS₀(P)` nonempty? Returns a verified lifting matrix if so.
pub fn ls0_step_nonempty(p: &HPolytope, limits: &Limits) -> Result<StepResult> {
    step(p, Operator::Ls0, None, limits)
}

/// Is `LS(P)` nonempty? Returns a verified symmetric lifting matrix if so.
pub fn ls_step_nonempty(p: &HPolytope, limits: &Limits) -> Result<StepResult> {
    step(p, Operator::Ls, None, limits)
}

/// Lifting matrix for a given point `x`, i.e. a membership test for the
/// closure at `x`.
pub fn step_at(p: &HPolytope, op: Operator, x: &[Rational], limits: &Limits) -> Result<StepResult> {
    if x.len() != p.n() {
        return Err(Error::Dimension("anchor point has the wrong length".into()));
    }
    step(p, op, Some(x.to_vec()), limits)
}

/// `conv(P ∩ {x_i = 0} ∪ P ∩ {x_i = 1})`.
pub fn bcc_closure(p: &HPolytope, i: usize, limits: &Limits) -> Result<HPolytope> {
    if i >= p.n() {
        return Err(Error::InvalidArgument(format!("coordinate {} outside dimension {}", i + 1, p.n())));
    }
    let mut pts = Vec::new();
    for face in [CubeFace { s0: Subset::singleton(i), s1: Subset::EMPTY }, CubeFace { s0: Subset::EMPTY, s1: Subset::singleton(i) }] {
        pts.extend(p.restrict_face(&face)?.vertices(limits)?.points().iter().cloned());
    }
    hull(&VPolytope::new(p.n(), pts)?, limits)
}

/// `LS₀(P) = ∩_i P_i(P)`.
pub fn ls0_closure(p: &HPolytope, limits: &Limits) -> Result<HPolytope> {
    let mut rows = Vec::new();
    for i in 0..p.n() {
        rows.extend(bcc_closure(p, i, limits)?.rows().iter().cloned());
    }
    HPolytope::new(p.n(), rows)?.remove_redundant(limits)
}

/// Fourier-Motzkin elimination of every variable with index `>= keep`.
/// Variables are removed in order of fewest generated rows, and the row set
/// is pruned by LP after each elimination.
pub fn fourier_motzkin(dim: usize, rows: Vec<Inequality>, keep: usize, limits: &Limits) -> Result<Vec<Inequality>> {
    let mut rows = rows;
    let mut width = dim;
    while width > keep {
        let (v, _) = (keep..width)
            .map(|v| {
                let pos = rows.iter().filter(|r| r.a[v].is_positive()).count();
                let neg = rows.iter().filter(|r| r.a[v].is_negative()).count();
                (v, pos * neg + rows.len() - pos - neg)
            })
            .min_by_key(|&(v, c)| (c, v))
            .unwrap();
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[v].is_positive() {
                pos.push(r);
            } else if r.a[v].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        if next.len() + pos.len() * neg.len() > limits.fm_rows {
            return Err(Error::ResourceLimit(format!(
                "Fourier-Motzkin would produce {} rows (cap {})",
                next.len() + pos.len() * neg.len(),
                limits.fm_rows
            )));
        }
        for pr in &pos {
            for nr in &neg {
                let sp = -nr.a[v].clone();
                let sn = pr.a[v].clone();
                let a: RVector = pr.a.iter().zip(&nr.a).map(|(x, y)| &sp * x + &sn * y).collect();
                next.push(Inequality::new(a, &sp * &pr.b + &sn * &nr.b));
            }
        }
        for r in next.iter_mut() {
            r.a.remove(v);
        }
        width -= 1;
        rows = remove_redundant_rows(width, next, |_| false, limits)?;
    }
    Ok(rows)
}

/// Explicit closure by projecting the lifted system onto `x`.
pub fn closure_by_projection(p: &HPolytope, op: Operator, limits: &Limits) -> Result<HPolytope> {
    if p.n() > limits.ls_dim {
        return Err(Error::Guard(format!("closure projection limited to n <= {}, got {}", limits.ls_dim, p.n())));
    }
    let layout = StepLayout::new(p.n(), op.symmetric(), None);
    let rows = fourier_motzkin(layout.dim, layout.rows(p), p.n(), limits)?;
    HPolytope::new(p.n(), rows)?.remove_redundant(limits)
}

/// `LS(P)` by Fourier-Motzkin projection.
pub fn ls_closure(p: &HPolytope, limits: &Limits) -> Result<HPolytope> {
    closure_by_projection(p, Operator::Ls, limits)
}

pub fn closure(p: &HPolytope, op: Operator, limits: &Limits) -> Result<HPolytope> {
    match op {
        Operator::Ls0 => ls0_closure(p, limits),
        Operator::Ls => ls_closure(p, limits),
    }
}

/// Emptiness of `op^r(P)` for `r = 1..=k`. Round `r` is decided by a step LP
/// on the explicit `(r−1)`-fold closure; once a round is empty all later
/// rounds are too.
pub fn iterate_emptiness(p: &HPolytope, op: Operator, k: usize, limits: &Limits) -> Result<Vec<bool>> {
    let mut out = Vec::with_capacity(k);
    let mut cur = p.clone();
    for r in 1..=k {
        let empty = step(&cur, op, None, limits)?.is_empty();
        out.push(empty);
        if empty {
            out.resize(k, true);
            break;
        }
        if r < k {
            cur = closure(&cur, op, limits)?;
        }
    }
    Ok(out)
}

/// The iterated closures `P, op(P), …, opᵏ(P)`.
pub fn closures(p: &HPolytope, op: Operator, k: usize, limits: &Limits) -> Result<Vec<HPolytope>> {
    let mut out = vec![p.clone()];
    for _ in 0..k {
        let next = closure(out.last().unwrap(), op, limits)?;
        out.push(next);
    }
    Ok(out)
}

/// A point of `P` on the face `x_[k] = q`, indexed by `q ∈ {0,1}ᵏ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoint {
    pub q: Vec<bool>,
    pub x: RVector,
}

/// Constructive passage from a nonempty `LS₀ᵏ(P)` to points of `P` on every
/// canonical face.
///
/// Starting from a symmetrized point of `LS₀ᵏ(P)`, round `j` splits each
/// current point on coordinate `j` using a lifting matrix for the
/// `(k−j)`-fold closure (columns `Ye_j / x_j` and `Y(e₀−e_j)/(1−x_j)`) and
/// averages the two halves over the stabilizer of `[j]`. Requires a
/// certified transitivity degree of at least `k+1`. Returns `None` when
/// `LS₀ᵏ(P)` is empty.
pub fn d_implies_a_points(
    p: &HPolytope,
    k: usize,
    transitivity: usize,
    limits: &Limits,
) -> Result<Option<Vec<FacePoint>>> {
    if transitivity < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "need a {}-transitivity certificate, have degree {transitivity}",
            k + 1
        )));
    }
    if k > p.n() {
        return Err(Error::InvalidArgument(format!("level {k} exceeds dimension {}", p.n())));
    }
    let levels = closures(p, Operator::Ls0, k, limits)?;
    let top = &levels[k];
    let start = top.is_feasible(&limits.lp)?;
    let Some(x) = start.point else { return Ok(None) };
    let x = reynolds_stabilized(&x, Subset::EMPTY, k)?;
    if !top.contains(&x) {
        return Err(Error::Verification("averaged point left the closure".into()));
    }
    let mut current = vec![FacePoint { q: Vec::new(), x }];
    for j in 0..k {
        let below = &levels[k - j - 1];
        let fixed = Subset::prefix(j + 1);
        let mut next = Vec::with_capacity(current.len() * 2);
        for fp in current {
            let xi = fp.x[j].clone();
            if xi.is_zero() || xi.is_one() {
                return Err(Error::Verification(format!(
                    "coordinate {} is integral; the polytope is not integer-empty",
                    j + 1
                )));
            }
            let w = step_at(below, Operator::Ls0, &fp.x, limits)?
                .witness
                .ok_or_else(|| Error::Internal("closure point without a lifting matrix".into()))?;
            let col = w.y.column(j + 1);
            let one: RVector = col[1..].iter().map(|v| v / &xi).collect();
            let rest = Rational::one() - &xi;
            let zero: RVector = (1..=p.n()).map(|t| (&w.y[(t, 0)] - &col[t]) / &rest).collect();
            for (bit, half) in [(false, zero), (true, one)] {
                let avg = reynolds_stabilized(&half, fixed, k)?;
                let mut q = fp.q.clone();
                q.push(bit);
                let kept = q.iter().enumerate().all(|(t, &b)| avg[t] == if b { Rational::one() } else { Rational::zero() });
                if !kept || !below.contains(&avg) {
                    return Err(Error::Verification(format!("split point for q = {q:?} fails its checks")));
                }
                next.push(FacePoint { q, x: avg });
            }
        }
        current = next;
    }
    Ok(Some(current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn parity3() -> HPolytope {
        HPolytope::new(
            3,
            vec![Inequality::new(vec![int(1); 3], rat(3, 2)), Inequality::new(vec![int(-1); 3], rat(-3, 2))],
        )
        .unwrap()
    }

    #[test]
    fn cube_steps_and_closures() {
        let l = Limits::default();
        let c = HPolytope::cube(3).unwrap();
        assert!(!ls0_step_nonempty(&c, &l).unwrap().is_empty());
        assert!(!ls_step_nonempty(&c, &l).unwrap().is_empty());
        assert!(ls0_closure(&c, &l).unwrap().same_set(&c, &l.lp).unwrap());
        assert!(ls_closure(&c, &l).unwrap().same_set(&c, &l.lp).unwrap());
        assert!(bcc_closure(&c, 1, &l).unwrap().same_set(&c, &l.lp).unwrap());
        assert_eq!(iterate_emptiness(&c, Operator::Ls0, 2, &l).unwrap(), vec![false, false]);
    }

    #[test]
    fn rank_one_lift_of_integer_point() {
        let p = HPolytope::new(2, vec![Inequality::new(vec![int(1), int(1)], int(1))]).unwrap();
        let v = [int(1), int(0), int(1)];
        let mut y = RMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                y[(i, j)] = &v[i] * &v[j];
            }
        }
        LiftMatrix { y }.verify(&p, Operator::Ls).unwrap();
    }

    #[test]
    fn parity_bcc_closure() {
        let l = Limits::default();
        let b = bcc_closure(&parity3(), 0, &l).unwrap();
        let verts = b.vertices(&l).unwrap().point_set();
        let expect: std::collections::BTreeSet<RVector> = [[0, 1, 2], [0, 2, 1], [2, 0, 1], [2, 1, 0]]
            .iter()
            .map(|p| p.iter().map(|&h| rat(h, 2)).collect())
            .collect();
        assert_eq!(verts, expect);
    }

    #[test]
    fn parity_rounds() {
        let l = Limits::default();
        assert_eq!(iterate_emptiness(&parity3(), Operator::Ls0, 2, &l).unwrap(), vec![false, true]);
        assert_eq!(iterate_emptiness(&parity3(), Operator::Ls, 2, &l).unwrap(), vec![false, true]);
        assert!(!ls_step_nonempty(&parity3(), &l).unwrap().is_empty());
        assert!(ls_step_nonempty(&HPolytope::empty(2).unwrap(), &l).unwrap().is_empty());
    }

    #[test]
    fn projection_matches_bcc() {
        let l = Limits::default();
        let a = ls0_closure(&parity3(), &l).unwrap();
        let b = closure_by_projection(&parity3(), Operator::Ls0, &l).unwrap();
        assert!(a.same_set(&b, &l.lp).unwrap());
    }

    #[test]
    fn split_points_parity() {
        let l = Limits::default();
        let pts = d_implies_a_points(&parity3(), 1, 3, &l).unwrap().unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].x, vec![int(0), rat(3, 4), rat(3, 4)]);
        assert_eq!(pts[1].x, vec![int(1), rat(1, 4), rat(1, 4)]);
        let one = d_implies_a_points(&parity3(), 0, 1, &l).unwrap().unwrap();
        assert_eq!(one[0].x, vec![rat(1, 2); 3]);
        assert!(d_implies_a_points(&parity3(), 2, 3, &l).unwrap().is_none());
    }
}
