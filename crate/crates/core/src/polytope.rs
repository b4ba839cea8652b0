//! Polytopes inside `[0,1]ⁿ` in H- and V-representation, cube faces,
//! integer-emptiness, face intersection, small-scale vertex and facet
//! enumeration, and invariance under a permutation group.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::exact::{dot, fmt_rational, int, normalize_leading, null_space, parse_rational, row_reduce, zeros};
use crate::exact::{RMatrix, RVector, Rational};
use crate::lp::{self, Inequality, LpOptions, LpOutcome, LpStatus, Sense};
use crate::par;
use crate::perm::{act_on_vector, PermGroup};
use crate::subset::{combinations, Subset};

/// `{x ∈ ℝⁿ : a_i·x >= b_i}` with the box rows `0 <= x <= 1` always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    n: usize,
    rows: Vec<Inequality>,
}

fn box_rows(n: usize) -> Vec<Inequality> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut a = zeros(n);
        a[i] = int(1);
        out.push(Inequality::new(a.clone(), int(0)));
        a[i] = int(-1);
        out.push(Inequality::new(a, int(-1)));
    }
    out
}

impl HPolytope {
    /// Builds the polytope; duplicate rows (up to positive scaling) are
    /// dropped and missing box rows appended.
    pub fn new(n: usize, rows: Vec<Inequality>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.a.len() != n) {
            return Err(Error::Dimension(format!("row of length {} in dimension {n}", r.a.len())));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(rows.len() + 2 * n);
        for r in rows.into_iter().chain(box_rows(n)) {
            if seen.insert(r.normalized()) {
                out.push(r);
            }
        }
        Ok(HPolytope { n, rows: out })
    }

    pub fn cube(n: usize) -> Result<Self> {
        HPolytope::new(n, Vec::new())
    }

    /// A canonical empty polytope (`0 >= 1`).
    pub fn empty(n: usize) -> Result<Self> {
        HPolytope::new(n, vec![Inequality::new(zeros(n), int(1))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn is_box_row(r: &Inequality) -> bool {
        let nz: Vec<&Rational> = r.a.iter().filter(|v| !v.is_zero()).collect();
        if nz.len() != 1 {
            return false;
        }
        let s = nz[0];
        (s.is_positive() && r.b.is_zero()) || (s.is_negative() && r.b == *s)
    }

    /// Rows other than box rows, in stored order.
    pub fn constraint_rows(&self) -> Vec<Inequality> {
        self.rows.iter().filter(|r| !HPolytope::is_box_row(r)).cloned().collect()
    }

    pub fn with_rows(&self, extra: impl IntoIterator<Item = Inequality>) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows.extend(extra);
        HPolytope::new(self.n, rows)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.n && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    pub fn first_violated(&self, x: &[Rational]) -> Option<usize> {
        self.rows.iter().position(|r| !r.is_satisfied(x))
    }

    pub fn restrict_face(&self, face: &CubeFace) -> Result<Self> {
        if face.bound() > self.n {
            return Err(Error::Dimension(format!("face {face} outside dimension {}", self.n)));
        }
        let mut extra = Vec::new();
        for (s, v) in [(face.s0, 0), (face.s1, 1)] {
            for i in s.iter() {
                let mut a = zeros(self.n);
                a[i] = int(1);
                extra.push(Inequality::new(a.clone(), int(v)));
                a[i] = int(-1);
                extra.push(Inequality::new(a, int(-v)));
            }
        }
        self.with_rows(extra)
    }

    pub fn is_feasible(&self, opts: &LpOptions) -> Result<LpOutcome> {
        lp::feasible(self.n, &self.rows, opts)
    }

    pub fn optimize(&self, c: &[Rational], sense: Sense, opts: &LpOptions) -> Result<LpOutcome> {
        lp::optimize(self.n, &self.rows, c, sense, opts)
    }

    /// Calls `visit` on every 0/1 point of the polytope (depth-first, 0
    /// before 1, coordinate 1 outermost) until it returns `false`.
    pub fn for_each_integer_point(&self, max_dim: usize, mut visit: impl FnMut(&[bool]) -> bool) -> Result<()> {
        let n = self.n;
        if n > max_dim {
            return Err(Error::Guard(format!(
                "use-explicit-bound: binary enumeration limited to n <= {max_dim}, got {n}"
            )));
        }
        // suffix[r][j] = largest possible contribution of coordinates j.. to row r
        let suffix: Vec<RVector> = self
            .rows
            .iter()
            .map(|r| {
                let mut s = zeros(n + 1);
                for j in (0..n).rev() {
                    s[j] = &s[j + 1] + if r.a[j].is_positive() { r.a[j].clone() } else { Rational::zero() };
                }
                s
            })
            .collect();
        let mut partial = vec![Rational::zero(); self.rows.len()];
        let mut point = vec![false; n];
        self.dfs(0, &suffix, &mut partial, &mut point, &mut visit);
        Ok(())
    }

    fn dfs(
        &self,
        j: usize,
        suffix: &[RVector],
        partial: &mut [Rational],
        point: &mut [bool],
        visit: &mut impl FnMut(&[bool]) -> bool,
    ) -> bool {
        if self.rows.iter().enumerate().any(|(r, row)| &partial[r] + &suffix[r][j] < row.b) {
            return true;
        }
        if j == self.n {
            return visit(point);
        }
        for bit in [false, true] {
            point[j] = bit;
            if bit {
                for (r, row) in self.rows.iter().enumerate() {
                    partial[r] += &row.a[j];
                }
            }
            let go = self.dfs(j + 1, suffix, partial, point, visit);
            if bit {
                for (r, row) in self.rows.iter().enumerate() {
                    partial[r] -= &row.a[j];
                }
            }
            if !go {
                return false;
            }
        }
        point[j] = false;
        true
    }

    pub fn is_integer_empty(&self, limits: &Limits) -> Result<bool> {
        let mut found = false;
        self.for_each_integer_point(limits.integer_dim, |_| {
            found = true;
            false
        })?;
        Ok(!found)
    }

    /// Exact optimum of `c·x` over the 0/1 points, with an optimal point.
    pub fn integer_optimum(&self, c: &[Rational], sense: Sense, limits: &Limits) -> Result<Option<(Rational, Vec<bool>)>> {
        let mut best: Option<(Rational, Vec<bool>)> = None;
        self.for_each_integer_point(limits.integer_dim, |p| {
            let v: Rational = c.iter().zip(p).filter(|(_, &b)| b).map(|(c, _)| c.clone()).sum();
            let better = match &best {
                None => true,
                Some((bv, _)) => match sense {
                    Sense::Min => v < *bv,
                    Sense::Max => v > *bv,
                },
            };
            if better {
                best = Some((v, p.to_vec()));
            }
            true
        })?;
        Ok(best)
    }

    /// Tests whether the polytope meets every cube face fixing `k`
    /// coordinates. With `canonical`, only the faces `x_[l] = 1`,
    /// `x_[k]∖[l] = 0` are tested, which suffices for a `(k+1)`-transitive
    /// symmetry group.
    pub fn intersects_all_faces(&self, k: usize, canonical: bool, limits: &Limits) -> Result<FaceReport> {
        if k > self.n {
            return Err(Error::InvalidArgument(format!("face level {k} exceeds dimension {}", self.n)));
        }
        let faces = if canonical { canonical_faces(k) } else { all_faces(self.n, k) };
        let outcomes = par::map(limits.exec, &faces, |f| -> Result<Option<RVector>> {
            let out = self.restrict_face(f)?.is_feasible(&limits.lp)?;
            match out.status {
                LpStatus::Optimal => Ok(out.point),
                LpStatus::Infeasible => Ok(None),
                _ => Err(Error::ResourceLimit(format!("pivot limit on face {f}"))),
            }
        });
        let mut witnesses = Vec::with_capacity(faces.len());
        for (f, o) in faces.iter().zip(outcomes) {
            match o? {
                Some(x) => witnesses.push((*f, x)),
                None => {
                    return Ok(FaceReport { holds: false, failing: Some(*f), faces_checked: faces.len(), witnesses })
                }
            }
        }
        Ok(FaceReport { holds: true, failing: None, faces_checked: faces.len(), witnesses })
    }

    /// Brute-force vertex enumeration over `n`-subsets of rows.
    pub fn vertices(&self, limits: &Limits) -> Result<VPolytope> {
        let n = self.n;
        let mut seen = HashSet::new();
        let rows: Vec<Inequality> = self.rows.iter().filter(|r| seen.insert(r.normalized())).cloned().collect();
        if n > limits.vertex_dim || rows.len() > limits.vertex_rows {
            return Err(Error::Guard(format!(
                "vertex enumeration limited to n <= {} and {} rows; got n = {n}, {} rows",
                limits.vertex_dim,
                limits.vertex_rows,
                rows.len()
            )));
        }
        let m = rows.len();
        let per_first = par::map_range(limits.exec, m, |first| {
            let mut found = Vec::new();
            if m - first < n {
                return found;
            }
            for rest in combinations(m - first - 1, n - 1) {
                let mut pick = vec![first];
                pick.extend(rest.iter().map(|j| j + first + 1));
                let mat = RMatrix::from_rows(pick.iter().map(|&i| rows[i].a.clone()).collect()).unwrap();
                let rhs: RVector = pick.iter().map(|&i| rows[i].b.clone()).collect();
                if let Ok(x) = mat.solve(&rhs) {
                    if rows.iter().all(|r| r.is_satisfied(&x)) {
                        found.push(x);
                    }
                }
            }
            found
        });
        let set: BTreeSet<RVector> = per_first.into_iter().flatten().collect();
        VPolytope::new(n, set.into_iter().collect())
    }

    /// Drops non-box rows implied by the remaining rows.
    pub fn remove_redundant(&self, limits: &Limits) -> Result<Self> {
        let rows = remove_redundant_rows(self.n, self.rows.clone(), HPolytope::is_box_row, limits)?;
        HPolytope::new(self.n, rows)
    }

    /// Every row of `other` is valid for `self`.
    pub fn is_subset_of(&self, other: &HPolytope, opts: &LpOptions) -> Result<bool> {
        for r in &other.rows {
            let out = self.optimize(&r.a, Sense::Min, opts)?;
            match out.status {
                LpStatus::Infeasible => return Ok(true),
                LpStatus::Optimal if out.value.as_ref().unwrap() >= &r.b => {}
                LpStatus::IterationLimit => return Err(Error::ResourceLimit("pivot limit in containment".into())),
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &HPolytope, opts: &LpOptions) -> Result<bool> {
        Ok(self.is_subset_of(other, opts)? && other.is_subset_of(self, opts)?)
    }

    /// Checks that `(g·a)·x >= b` is valid for every generator `g` and
    /// every row `(a, b)`. Box rows map to box rows and are skipped; rows
    /// mapped onto an existing row need no LP.
    pub fn certify_invariance(&self, g: &PermGroup, limits: &Limits) -> Result<InvarianceReport> {
        if g.n() != self.n {
            return Err(Error::Dimension(format!("group on {} points for dimension {}", g.n(), self.n)));
        }
        let pairs: Vec<(usize, usize)> = (0..g.generators().len())
            .flat_map(|gi| (0..self.rows.len()).map(move |ri| (gi, ri)))
            .filter(|&(_, ri)| !HPolytope::is_box_row(&self.rows[ri]))
            .collect();
        let known: HashSet<Inequality> = self.rows.iter().map(Inequality::normalized).collect();
        let results = par::map(limits.exec, &pairs, |&(gi, ri)| -> Result<bool> {
            let row = &self.rows[ri];
            let pa = act_on_vector(&g.generators()[gi], &row.a)?;
            let image = Inequality::new(pa.clone(), row.b.clone()).normalized();
            if known.contains(&image) {
                return Ok(true);
            }
            let out = self.optimize(&pa, Sense::Min, &limits.lp)?;
            match out.status {
                LpStatus::Infeasible => Ok(true),
                LpStatus::Optimal => Ok(out.value.unwrap() >= row.b),
                LpStatus::Unbounded => Ok(false),
                LpStatus::IterationLimit => Err(Error::ResourceLimit("pivot limit in invariance check".into())),
            }
        });
        for (&(gi, ri), ok) in pairs.iter().zip(results) {
            if !ok? {
                return Ok(InvarianceReport { holds: false, counterexample: Some((gi, ri)) });
            }
        }
        Ok(InvarianceReport { holds: true, counterexample: None })
    }

    /// Parses `H n m` followed by `m` lines `b a_1 … a_n`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty H-rep file".into() })?;
        let (n, m) = header(ln, head, "H")?;
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: ln, msg: "missing row".into() })?;
            let v = rational_tokens(ln, l, n + 1)?;
            rows.push(Inequality::new(v[1..].to_vec(), v[0].clone()));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing content".into() });
        }
        HPolytope::new(n, rows)
    }

    /// Writes the non-box rows; box rows are re-added on load.
    pub fn to_text(&self) -> String {
        let rows = self.constraint_rows();
        let mut s = format!("H {} {}\n", self.n, rows.len());
        for r in rows {
            let mut toks = vec![fmt_rational(&r.b)];
            toks.extend(r.a.iter().map(fmt_rational));
            writeln!(s, "{}", toks.join(" ")).unwrap();
        }
        s
    }
}

fn implied_by(dim: usize, others: &[Inequality], row: &Inequality, opts: &LpOptions) -> Result<bool> {
    let out = lp::optimize(dim, others, &row.a, Sense::Min, opts)?;
    match out.status {
        LpStatus::Optimal => Ok(out.value.as_ref().unwrap() >= &row.b),
        LpStatus::Infeasible => Ok(true),
        LpStatus::Unbounded => Ok(false),
        LpStatus::IterationLimit => Err(Error::ResourceLimit("pivot limit in redundancy removal".into())),
    }
}

/// Removes rows implied by the others, one LP per row. Rows matching
/// `protect` are always kept. A parallel first pass keeps every row that is
/// irredundant against all other rows; the remaining candidates are then
/// tested one at a time against the current row set.
pub fn remove_redundant_rows(
    dim: usize,
    rows: Vec<Inequality>,
    protect: impl Fn(&Inequality) -> bool + Sync,
    limits: &Limits,
) -> Result<Vec<Inequality>> {
    let mut seen = HashSet::new();
    let rows: Vec<Inequality> = rows
        .into_iter()
        .filter(|r| !(r.a.iter().all(Zero::is_zero) && !r.b.is_positive()))
        .filter(|r| seen.insert(r.normalized()))
        .collect();
    let candidate = par::map_range(limits.exec, rows.len(), |i| -> Result<bool> {
        if protect(&rows[i]) {
            return Ok(false);
        }
        let others: Vec<Inequality> =
            rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        implied_by(dim, &others, &rows[i], &limits.lp)
    });
    let candidate = candidate.into_iter().collect::<Result<Vec<bool>>>()?;
    let mut alive = vec![true; rows.len()];
    for i in 0..rows.len() {
        if !candidate[i] {
            continue;
        }
        let others: Vec<Inequality> =
            rows.iter().enumerate().filter(|&(j, _)| j != i && alive[j]).map(|(_, r)| r.clone()).collect();
        if implied_by(dim, &others, &rows[i], &limits.lp)? {
            alive[i] = false;
        }
    }
    Ok(rows.into_iter().zip(alive).filter(|(_, a)| *a).map(|(r, _)| r).collect())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header(ln: usize, line: &str, tag: &str) -> Result<(usize, usize)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let bad = || Error::Parse { line: ln, msg: format!("expected header `{tag} n m`") };
    if toks.len() != 3 || toks[0] != tag {
        return Err(bad());
    }
    let n = toks[1].parse::<usize>().map_err(|_| bad())?;
    let m = toks[2].parse::<usize>().map_err(|_| bad())?;
    Ok((n, m))
}

fn rational_tokens(ln: usize, line: &str, expect: usize) -> Result<RVector> {
    let v = line
        .split_whitespace()
        .map(|t| parse_rational(t).map_err(|msg| Error::Parse { line: ln, msg }))
        .collect::<Result<RVector>>()?;
    if v.len() != expect {
        return Err(Error::Parse { line: ln, msg: format!("expected {expect} tokens, found {}", v.len()) });
    }
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct FaceReport {
    pub holds: bool,
    /// First face in enumeration order with an empty intersection.
    pub failing: Option<CubeFace>,
    pub faces_checked: usize,
    /// Feasible points for the faces checked before the first failure.
    pub witnesses: Vec<(CubeFace, RVector)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub holds: bool,
    /// `(generator index, row index)` of the first permuted row found invalid.
    pub counterexample: Option<(usize, usize)>,
}

/// A face of the cube: coordinates in `s0` fixed to 0, in `s1` fixed to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeFace {
    pub s0: Subset,
    pub s1: Subset,
}

impl CubeFace {
    pub fn new(s0: Subset, s1: Subset) -> Result<Self> {
        if !s0.is_disjoint(s1) {
            return Err(Error::InvalidArgument(format!("face sets {s0} and {s1} overlap")));
        }
        Ok(CubeFace { s0, s1 })
    }

    pub fn fixed(&self) -> Subset {
        self.s0.union(self.s1)
    }

    fn bound(&self) -> usize {
        self.fixed().bound()
    }

    /// `x_[l] = 1`, `x_[k]∖[l] = 0`.
    pub fn canonical(k: usize, l: usize) -> Self {
        CubeFace { s0: Subset::range(l, k), s1: Subset::prefix(l) }
    }
}

impl fmt::Display for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S1={} S0={}", self.s1, self.s0)
    }
}

/// All faces fixing exactly `k` coordinates: the fixed sets in
/// lexicographic order, and within each set the 0/1 assignments in
/// decreasing binary order (all ones first).
pub fn all_faces(n: usize, k: usize) -> Vec<CubeFace> {
    let mut out = Vec::new();
    for s in combinations(n, k) {
        let idx = s.to_vec();
        for m in (0..1u64 << k).rev() {
            let mut s1 = Subset::EMPTY;
            for (b, &i) in idx.iter().enumerate() {
                if m >> (k - 1 - b) & 1 == 1 {
                    s1 = s1.with(i);
                }
            }
            out.push(CubeFace { s0: s.difference(s1), s1 });
        }
    }
    out
}

/// The faces `x_[l] = 1, x_[k]∖[l] = 0` for `l = k, …, 0`.
pub fn canonical_faces(k: usize) -> Vec<CubeFace> {
    (0..=k).rev().map(|l| CubeFace::canonical(k, l)).collect()
}

/// A finite point set in `[0,1]ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    n: usize,
    points: Vec<RVector>,
}

impl VPolytope {
    pub fn new(n: usize, points: Vec<RVector>) -> Result<Self> {
        for p in &points {
            if p.len() != n {
                return Err(Error::Dimension(format!("point of length {} in dimension {n}", p.len())));
            }
            if p.iter().any(|v| v.is_negative() || *v > Rational::one()) {
                return Err(Error::InvalidArgument("point outside [0,1]^n".into()));
            }
        }
        Ok(VPolytope { n, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[RVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_set(&self) -> BTreeSet<RVector> {
        self.points.iter().cloned().collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty V-rep file".into() })?;
        let (n, p) = header(ln, head, "V")?;
        let mut pts = Vec::with_capacity(p);
        for _ in 0..p {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: ln, msg: "missing point".into() })?;
            pts.push(rational_tokens(ln, l, n)?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing content".into() });
        }
        VPolytope::new(n, pts)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("V {} {}\n", self.n, self.points.len());
        for p in &self.points {
            let toks: Vec<String> = p.iter().map(fmt_rational).collect();
            writeln!(s, "{}", toks.join(" ")).unwrap();
        }
        s
    }
}

/// Exact facet description of `conv(V)`.
///
/// Works inside the affine hull: equalities come from the null space of the
/// point differences, and facet normals from every affinely independent
/// choice of `dim` points. An empty point set gives the empty polytope.
pub fn hull(v: &VPolytope, limits: &Limits) -> Result<HPolytope> {
    let n = v.n();
    if n > limits.hull_dim || v.len() > limits.hull_points {
        return Err(Error::Guard(format!(
            "hull limited to n <= {} and {} points; got n = {n}, {} points",
            limits.hull_dim,
            limits.hull_points,
            v.len()
        )));
    }
    let pts: Vec<RVector> = v.point_set().into_iter().collect();
    let Some(p0) = pts.first().cloned() else {
        return HPolytope::empty(n.max(1));
    };
    let diff = |p: &RVector| -> RVector { p.iter().zip(&p0).map(|(a, b)| a - b).collect() };
    let diffs: Vec<RVector> = pts[1..].iter().map(diff).collect();
    let dim = if diffs.is_empty() { 0 } else { row_reduce(diffs.clone()).len() };
    let eqs = null_space(if diffs.is_empty() { vec![zeros(n)] } else { diffs.clone() }, n);

    let mut rows = Vec::new();
    for e in &eqs {
        let b = dot(e, &p0);
        rows.push(Inequality::new(e.clone(), b.clone()));
        rows.push(Inequality::new(e.iter().map(|x| -x.clone()).collect(), -b));
    }
    if dim > 0 {
        let cands = par::map(limits.exec, &combinations(pts.len(), dim), |pick| {
            let idx = pick.to_vec();
            let base = &pts[idx[0]];
            let mut sys: Vec<RVector> =
                idx[1..].iter().map(|&j| pts[j].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            sys.extend(eqs.iter().cloned());
            if sys.is_empty() {
                sys.push(zeros(n));
            }
            let ns = null_space(sys, n);
            if ns.len() != 1 {
                return None;
            }
            let mut c = ns.into_iter().next().unwrap();
            let b = dot(&c, base);
            let (mut lo, mut hi) = (false, false);
            for p in &pts {
                let s = dot(&c, p) - &b;
                lo |= s.is_negative();
                hi |= s.is_positive();
            }
            let b = match (lo, hi) {
                (true, true) | (false, false) => return None,
                (false, true) => b,
                (true, false) => {
                    c.iter_mut().for_each(|x| *x = -x.clone());
                    -b
                }
            };
            let mut row = Inequality::new(c, b);
            if let Some(s) = normalize_leading(&mut row.a) {
                row.b *= s;
            }
            Some(row)
        });
        let mut seen = HashSet::new();
        rows.extend(cands.into_iter().flatten().filter(|r| seen.insert(r.clone())));
    }
    HPolytope::new(n, rows)?.remove_redundant(limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::perm::Permutation;

    fn parity3() -> HPolytope {
        let one = vec![int(1); 3];
        let neg = vec![int(-1); 3];
        HPolytope::new(3, vec![Inequality::new(one, rat(3, 2)), Inequality::new(neg, rat(-3, 2))]).unwrap()
    }

    #[test]
    fn box_rows_added_once() {
        let p = HPolytope::cube(2).unwrap();
        assert_eq!(p.rows().len(), 4);
        let q = HPolytope::new(2, vec![Inequality::new(vec![int(2), int(0)], int(0))]).unwrap();
        assert_eq!(q.rows().len(), 4);
        assert!(q.constraint_rows().is_empty());
    }

    #[test]
    fn face_restriction() {
        let p = parity3();
        let f = CubeFace::new(Subset::EMPTY, Subset::from_indices(&[0])).unwrap();
        assert!(p.restrict_face(&f).unwrap().contains(&[int(1), rat(1, 4), rat(1, 4)]));
        let g = CubeFace::new(Subset::EMPTY, Subset::from_indices(&[0, 1])).unwrap();
        let out = p.restrict_face(&g).unwrap().is_feasible(&LpOptions::default()).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        let none = CubeFace::new(Subset::EMPTY, Subset::EMPTY).unwrap();
        assert_eq!(p.restrict_face(&none).unwrap(), p);
        assert!(CubeFace::new(Subset::from_indices(&[0]), Subset::from_indices(&[0])).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let opts = LpOptions::default();
        assert_eq!(HPolytope::cube(3).unwrap().is_feasible(&opts).unwrap().status, LpStatus::Optimal);
        let bad = HPolytope::new(1, vec![Inequality::new(vec![int(1)], int(2))]).unwrap();
        let out = bad.is_feasible(&opts).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        lp::verify_farkas(1, bad.rows(), out.farkas.as_ref().unwrap()).unwrap();
        let w = parity3().is_feasible(&opts).unwrap().point.unwrap();
        assert!(parity3().contains(&w));
    }

    #[test]
    fn integer_emptiness() {
        let l = Limits::default();
        assert!(parity3().is_integer_empty(&l).unwrap());
        assert!(!HPolytope::cube(4).unwrap().is_integer_empty(&l).unwrap());
        assert!(HPolytope::cube(25).unwrap().is_integer_empty(&l).unwrap_err().is_resource());
    }

    #[test]
    fn face_sweep_parity() {
        let l = Limits::default();
        assert!(parity3().intersects_all_faces(1, false, &l).unwrap().holds);
        let r = parity3().intersects_all_faces(2, false, &l).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing.unwrap(), CubeFace::new(Subset::EMPTY, Subset::from_indices(&[0, 1])).unwrap());
        assert!(parity3().intersects_all_faces(0, false, &l).unwrap().holds);
    }

    #[test]
    fn face_order() {
        let f = all_faces(3, 2);
        assert_eq!(f.len(), 12);
        assert_eq!(f[0].s1, Subset::from_indices(&[0, 1]));
        assert_eq!(f[1].s1, Subset::from_indices(&[0]));
        assert_eq!(f[1].s0, Subset::from_indices(&[1]));
        assert_eq!(canonical_faces(2)[0], CubeFace::canonical(2, 2));
    }

    #[test]
    fn vertex_examples() {
        let l = Limits::default();
        assert_eq!(HPolytope::cube(2).unwrap().vertices(&l).unwrap().len(), 4);
        let v = parity3().vertices(&l).unwrap();
        let expect: BTreeSet<RVector> = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .iter()
        .map(|p| p.iter().map(|&h| rat(h, 2)).collect())
        .collect();
        assert_eq!(v.point_set(), expect);
        assert!(HPolytope::empty(2).unwrap().vertices(&l).unwrap().is_empty());
    }

    #[test]
    fn hull_examples() {
        let l = Limits::default();
        let sq = HPolytope::cube(2).unwrap();
        let h = hull(&sq.vertices(&l).unwrap(), &l).unwrap();
        assert!(h.same_set(&sq, &l.lp).unwrap());
        let hp = hull(&parity3().vertices(&l).unwrap(), &l).unwrap();
        assert!(hp.same_set(&parity3(), &l.lp).unwrap());
        assert!(hp.contains(&[rat(1, 2), rat(1, 2), rat(1, 2)]));
        let pt = VPolytope::new(2, vec![vec![rat(1, 3), rat(2, 3)]]).unwrap();
        let hpt = hull(&pt, &l).unwrap();
        assert_eq!(hpt.vertices(&l).unwrap().points(), pt.points());
    }

    #[test]
    fn invariance_examples() {
        let l = Limits::default();
        assert!(parity3().certify_invariance(&PermGroup::symmetric(3), &l).unwrap().holds);
        let p = HPolytope::new(2, vec![Inequality::new(vec![int(1), int(0)], rat(1, 2))]).unwrap();
        let g = PermGroup::new(2, vec![Permutation::transposition(2, 0, 1)]).unwrap();
        let r = p.certify_invariance(&g, &l).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample, Some((0, 0)));
    }

    #[test]
    fn file_round_trip() {
        let p = parity3();
        let text = p.to_text();
        assert_eq!(text, "H 3 2\n3/2 1 1 1\n-3/2 -1 -1 -1\n");
        assert_eq!(HPolytope::parse(&text).unwrap(), p);
        let v = VPolytope::new(2, vec![vec![int(0), rat(1, 2)]]).unwrap();
        assert_eq!(VPolytope::parse(&v.to_text()).unwrap(), v);
        assert!(HPolytope::parse("H 2 1\n1 1\n").is_err());
        assert!(VPolytope::parse("V 1 1\n2\n").is_err());
    }
}
