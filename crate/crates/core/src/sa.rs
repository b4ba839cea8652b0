//! The Sherali-Adams lift `Mᵏ(P)`, its emptiness test, conditional points
//! and the local-consistency characterization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, parse_rational, zeros, RVector, Rational};
use crate::lp::{self, Inequality, LpStatus};
use crate::par;
use crate::perm::Permutation;
use crate::polytope::HPolytope;
pub use crate::subset::SubsetIndexer;
use crate::subset::{combinations, Subset};

/// A vector indexed by the subsets `I ⊆ [n]` with `|I| <= k+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SAVector {
    k: usize,
    ix: SubsetIndexer,
    entries: RVector,
}

impl SAVector {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        let ix = SubsetIndexer::new(n, k + 1)?;
        let entries = zeros(ix.len());
        Ok(SAVector { k, ix, entries })
    }

    pub fn from_entries(n: usize, k: usize, entries: RVector) -> Result<Self> {
        let ix = SubsetIndexer::new(n, k + 1)?;
        if entries.len() != ix.len() {
            return Err(Error::Dimension(format!("expected {} entries, got {}", ix.len(), entries.len())));
        }
        Ok(SAVector { k, ix, entries })
    }

    /// `y_I = levels[|I|]`.
    pub fn level_symmetric(n: usize, k: usize, levels: &[Rational]) -> Result<Self> {
        let mut y = SAVector::zero(n, k)?;
        let top = y.ix.cap();
        if levels.len() <= top {
            return Err(Error::Dimension(format!("need {} levels, got {}", top + 1, levels.len())));
        }
        for r in 0..y.ix.len() {
            y.entries[r] = levels[y.ix.unrank(r).len()].clone();
        }
        Ok(y)
    }

    /// `y_I = Π_{i∈I} x_i` for a 0/1 point.
    pub fn lift_integer_point(x: &[bool], k: usize) -> Result<Self> {
        let mut y = SAVector::zero(x.len(), k)?;
        for r in 0..y.ix.len() {
            let s = y.ix.unrank(r);
            if s.iter().all(|i| x[i]) {
                y.entries[r] = Rational::one();
            }
        }
        Ok(y)
    }

    pub fn n(&self) -> usize {
        self.ix.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn indexer(&self) -> &SubsetIndexer {
        &self.ix
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, s: Subset) -> &Rational {
        &self.entries[self.ix.rank(s).expect("subset outside the index space")]
    }

    pub fn set(&mut self, s: Subset, v: Rational) {
        let r = self.ix.rank(s).expect("subset outside the index space");
        self.entries[r] = v;
    }

    /// The coordinates `(y_{1}, …, y_{n})`.
    pub fn level_one(&self) -> RVector {
        (0..self.n()).map(|i| self.get(Subset::singleton(i)).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Restriction to the index space of level `k2 <= k`.
    pub fn truncate(&self, k2: usize) -> Result<Self> {
        if k2 > self.k {
            return Err(Error::InvalidArgument(format!("cannot truncate level {} to {k2}", self.k)));
        }
        let ix = SubsetIndexer::new(self.n(), k2 + 1)?;
        let entries = self.entries[..ix.len()].to_vec();
        Ok(SAVector { k: k2, ix, entries })
    }

    /// `(πy)_S = y_{π⁻¹(S)}`.
    pub fn permuted(&self, p: &Permutation) -> Result<Self> {
        if p.n() != self.n() {
            return Err(Error::Dimension("permutation size differs from ground set".into()));
        }
        let mut out = self.clone();
        for r in 0..self.ix.len() {
            let s = self.ix.unrank(r);
            let img = crate::perm::act_on_subset(p, s);
            out.set(img, self.entries[r].clone());
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty SA vector file".into() })?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        if toks.len() != 3 || toks[0] != "Y" {
            return Err(bad(ln, "expected header `Y n k`"));
        }
        let n: usize = toks[1].parse().map_err(|_| bad(ln, "bad n"))?;
        let k: usize = toks[2].parse().map_err(|_| bad(ln, "bad k"))?;
        let mut y = SAVector::zero(n, k)?;
        for r in 0..y.ix.len() {
            let (ln, l) = lines.next().ok_or(bad(ln, "missing subset line"))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            let size: usize = toks.first().and_then(|t| t.parse().ok()).ok_or(bad(ln, "bad size"))?;
            if toks.len() != size + 2 {
                return Err(bad(ln, "token count does not match size"));
            }
            let mut members = Vec::with_capacity(size);
            for t in &toks[1..=size] {
                let m: usize = t.parse().map_err(|_| bad(ln, "bad member"))?;
                if m == 0 || m > n {
                    return Err(bad(ln, "member out of range"));
                }
                members.push(m - 1);
            }
            let s = Subset::from_indices(&members);
            if s.len() != size || y.ix.rank(s) != Some(r) {
                return Err(bad(ln, "subsets must appear in graded colex order"));
            }
            y.entries[r] = parse_rational(toks[size + 1]).map_err(|m| bad(ln, &m))?;
        }
        if let Some((ln, _)) = lines.next() {
            return Err(bad(ln, "trailing content"));
        }
        Ok(y)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("Y {} {}\n", self.n(), self.k);
        for (r, v) in self.entries.iter().enumerate() {
            let s = self.ix.unrank(r);
            let mut toks = vec![s.len().to_string()];
            toks.extend(s.iter().map(|i| (i + 1).to_string()));
            toks.push(fmt_rational(v));
            writeln!(out, "{}", toks.join(" ")).unwrap();
        }
        out
    }
}

/// `J0 ⊔ J1 = S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition2 {
    pub j0: Subset,
    pub j1: Subset,
}

impl Partition2 {
    pub fn new(j0: Subset, j1: Subset) -> Result<Self> {
        if !j0.is_disjoint(j1) {
            return Err(Error::InvalidArgument(format!("J0 = {j0} and J1 = {j1} overlap")));
        }
        Ok(Partition2 { j0, j1 })
    }

    pub fn s(&self) -> Subset {
        self.j0.union(self.j1)
    }
}

impl fmt::Display for Partition2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J0={} J1={}", self.j0, self.j1)
    }
}

/// All 2-partitions of `s`, with the `J1 = S` partition first and the
/// smallest element of `S` as the most significant bit.
pub fn partitions(s: Subset) -> Vec<Partition2> {
    let idx = s.to_vec();
    let d = idx.len();
    (0..1u64 << d)
        .rev()
        .map(|m| {
            let j1 = idx.iter().enumerate().filter(|(b, _)| m >> (d - 1 - b) & 1 == 1).fold(Subset::EMPTY, |a, (_, &i)| a.with(i));
            Partition2 { j0: s.difference(j1), j1 }
        })
        .collect()
}

/// A linear form over the subset variables `y_I`.
pub type LinearForm = BTreeMap<Subset, Rational>;

fn add_term(f: &mut LinearForm, s: Subset, v: Rational) {
    if v.is_zero() {
        return;
    }
    let e = f.entry(s).or_insert_with(Rational::zero);
    *e += v;
    if e.is_zero() {
        f.remove(&s);
    }
}

/// Multilinearization of `Π_{J1 ∪ extra} x · Π_{J0} (1 − x)`:
/// coefficient `(−1)^{|H|}` on `y_{J1 ∪ extra ∪ H}` for each `H ⊆ J0`.
pub fn linearize_product(j0: Subset, j1: Subset, extra: Subset) -> Result<LinearForm> {
    if !j0.is_disjoint(j1.union(extra)) {
        return Err(Error::InvalidArgument(format!("J0 = {j0} meets J1 ∪ extra = {}", j1.union(extra))));
    }
    let base = j1.union(extra);
    let mut f = LinearForm::new();
    for h in j0.subsets() {
        let sign = if h.len() % 2 == 0 { int(1) } else { int(-1) };
        add_term(&mut f, base.union(h), sign);
    }
    Ok(f)
}

/// Product of multilinear polynomials, with `x_i² = x_i`.
fn multiply(p: &LinearForm, q: &LinearForm) -> LinearForm {
    let mut out = LinearForm::new();
    for (s, a) in p {
        for (t, b) in q {
            add_term(&mut out, s.union(*t), a * b);
        }
    }
    out
}

/// Extend-and-linearize: multiply `a·x − b` by `Π_{J1} x Π_{J0}(1 − x)` and
/// replace each monomial `Π_{I} x` by `y_I`.
pub fn extend_linearize(row: &Inequality, part: &Partition2) -> LinearForm {
    let mut poly = LinearForm::new();
    add_term(&mut poly, Subset::EMPTY, -row.b.clone());
    for (j, a) in row.a.iter().enumerate() {
        add_term(&mut poly, Subset::singleton(j), a.clone());
    }
    for i in part.j1.iter() {
        poly = multiply(&poly, &LinearForm::from([(Subset::singleton(i), int(1))]));
    }
    for i in part.j0.iter() {
        poly = multiply(&poly, &LinearForm::from([(Subset::EMPTY, int(1)), (Subset::singleton(i), int(-1))]));
    }
    poly
}

/// The closed form `(Σ_{J1} a − b)·f(J0,J1) + Σ_{j∉S} a_j·f(J0, J1 ∪ {j})`.
pub fn sa2_closed_form(row: &Inequality, part: &Partition2) -> LinearForm {
    let s = part.s();
    let mut lead = -row.b.clone();
    for j in part.j1.iter() {
        lead += &row.a[j];
    }
    let mut out = LinearForm::new();
    for (t, c) in linearize_product(part.j0, part.j1, Subset::EMPTY).unwrap() {
        add_term(&mut out, t, &lead * c);
    }
    for (j, a) in row.a.iter().enumerate() {
        if s.contains(j) || a.is_zero() {
            continue;
        }
        for (t, c) in linearize_product(part.j0, part.j1, Subset::singleton(j)).unwrap() {
            add_term(&mut out, t, a * c);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SaTag {
    Sa0,
    Sa1,
    Sa2,
}

/// Where a lifted row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaOrigin {
    pub tag: SaTag,
    /// Index of the multiplied row of `P` (SA-2 only).
    pub row: Option<usize>,
    pub part: Option<Partition2>,
}

impl fmt::Display for SaOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.tag, self.row, self.part) {
            (SaTag::Sa0, _, _) => write!(f, "SA-0"),
            (SaTag::Sa1, _, Some(p)) => write!(f, "SA-1 [{p}]"),
            (SaTag::Sa2, Some(r), Some(p)) => write!(f, "SA-2 row {} [{p}]", r + 1),
            _ => write!(f, "{:?}", self.tag),
        }
    }
}

/// `Mᵏ(P)` as an inequality system over the subset variables.
#[derive(Clone, Debug)]
pub struct SaSystem {
    pub n: usize,
    pub k: usize,
    pub ix: SubsetIndexer,
    pub rows: Vec<Inequality>,
    pub origins: Vec<SaOrigin>,
}

impl SaSystem {
    pub fn dim(&self) -> usize {
        self.ix.len()
    }

    pub fn first_violated(&self, y: &SAVector) -> Option<usize> {
        self.rows.iter().position(|r| !r.is_satisfied(y.entries()))
    }

    /// Rows other than `y_∅ = 1`; these are homogeneous.
    pub fn homogeneous_violation(&self, y: &SAVector) -> Option<usize> {
        self.rows
            .iter()
            .zip(&self.origins)
            .position(|(r, o)| o.tag != SaTag::Sa0 && !r.is_satisfied(y.entries()))
    }

    fn dense(&self, f: &LinearForm) -> RVector {
        let mut a = zeros(self.ix.len());
        for (s, v) in f {
            a[self.ix.rank(*s).expect("term outside index space")] = v.clone();
        }
        a
    }
}

/// Builds `Mᵏ(P)` for `0 <= k <= n`.
///
/// SA-1 rows range over sets of size `min(k+1, n)` and SA-2 rows over sets
/// of size `k`, each with every 2-partition; SA-2 rows are produced by
/// [`extend_linearize`] applied to every row of `P`, box rows included.
pub fn build_mk(p: &HPolytope, k: usize, limits: &Limits) -> Result<SaSystem> {
    let n = p.n();
    if k > n {
        return Err(Error::InvalidArgument(format!("level {k} outside 0..={n}")));
    }
    let ix = SubsetIndexer::new(n, k + 1)?;
    let mut sys = SaSystem { n, k, ix, rows: Vec::new(), origins: Vec::new() };

    let mut y0 = LinearForm::new();
    y0.insert(Subset::EMPTY, int(1));
    let a0 = sys.dense(&y0);
    sys.rows.push(Inequality::new(a0.clone(), int(1)));
    sys.rows.push(Inequality::new(a0.iter().map(|v| -v.clone()).collect(), int(-1)));
    let o0 = SaOrigin { tag: SaTag::Sa0, row: None, part: None };
    sys.origins.extend([o0, o0]);

    for s in combinations(n, (k + 1).min(n)) {
        for part in partitions(s) {
            let f = linearize_product(part.j0, part.j1, Subset::EMPTY)?;
            sys.rows.push(Inequality::new(sys.dense(&f), int(0)));
            sys.origins.push(SaOrigin { tag: SaTag::Sa1, row: None, part: Some(part) });
        }
    }

    let parts: Vec<Partition2> = combinations(n, k).into_iter().flat_map(partitions).collect();
    let jobs: Vec<(usize, Partition2)> =
        (0..p.rows().len()).flat_map(|i| parts.iter().map(move |&q| (i, q))).collect();
    let sa2 = par::map(limits.exec, &jobs, |&(i, part)| {
        let f = extend_linearize(&p.rows()[i], &part);
        Inequality::new(sys.dense(&f), int(0))
    });
    for ((i, part), row) in jobs.into_iter().zip(sa2) {
        sys.rows.push(row);
        sys.origins.push(SaOrigin { tag: SaTag::Sa2, row: Some(i), part: Some(part) });
    }
    Ok(sys)
}

/// Outcome of the level-`k` emptiness test.
#[derive(Clone, Debug)]
pub struct SaDecision {
    pub empty: bool,
    pub witness: Option<SAVector>,
    /// Multipliers over `system.rows` proving emptiness.
    pub farkas: Option<RVector>,
    pub system: SaSystem,
    pub pivots: u64,
}

/// Decides whether `SAᵏ(P)` (equivalently `Mᵏ(P)`) is empty.
pub fn sa_emptiness(p: &HPolytope, k: usize, limits: &Limits) -> Result<SaDecision> {
    let system = build_mk(p, k, limits)?;
    // Scaled duplicates are dropped before the LP; multipliers map back to
    // the first occurrence.
    let mut first: HashMap<Inequality, usize> = HashMap::new();
    let mut kept = Vec::new();
    let mut kept_idx = Vec::new();
    for (i, r) in system.rows.iter().enumerate() {
        let key = r.normalized();
        if r.a.iter().all(Zero::is_zero) && !r.b.is_positive() {
            continue;
        }
        if let std::collections::hash_map::Entry::Vacant(e) = first.entry(key) {
            e.insert(i);
            kept.push(r.clone());
            kept_idx.push(i);
        }
    }
    let out = lp::feasible(system.dim(), &kept, &limits.lp)?;
    match out.status {
        LpStatus::Optimal => {
            let y = SAVector::from_entries(system.n, k, out.point.unwrap())?;
            if let Some(i) = system.first_violated(&y) {
                return Err(Error::Internal(format!("SA witness violates {}", system.origins[i])));
            }
            Ok(SaDecision { empty: false, witness: Some(y), farkas: None, system, pivots: out.pivots })
        }
        LpStatus::Infeasible => {
            let mut u = zeros(system.rows.len());
            for (v, &i) in out.farkas.unwrap().into_iter().zip(&kept_idx) {
                u[i] = v;
            }
            lp::verify_farkas(system.dim(), &system.rows, &u)?;
            Ok(SaDecision { empty: true, witness: None, farkas: Some(u), system, pivots: out.pivots })
        }
        _ => Err(Error::ResourceLimit(format!("pivot limit deciding SA level {k}"))),
    }
}

/// `y^{J0,J1}_I = Σ_{H⊆J0} (−1)^{|H|} y_{J1∪I∪H}` for `|I| <= k−d+1`,
/// returned as the weight `y^{J0,J1}_∅` and the point `z`, normalized when
/// the weight is positive.
pub fn conditional_point(y: &SAVector, part: &Partition2) -> Result<(Rational, SAVector)> {
    let d = part.s().len();
    if d > y.k() {
        return Err(Error::InvalidArgument(format!("conditioning on {d} coordinates at level {}", y.k())));
    }
    let mut z = SAVector::zero(y.n(), y.k() - d)?;
    let hs = part.j0.subsets();
    for r in 0..z.ix.len() {
        let i = z.ix.unrank(r);
        let mut v = Rational::zero();
        for h in &hs {
            let t = part.j1.union(i).union(*h);
            if h.len() % 2 == 0 {
                v += y.get(t);
            } else {
                v -= y.get(t);
            }
        }
        z.entries[r] = v;
    }
    let w = z.entries[0].clone();
    if w.is_positive() {
        for v in z.entries.iter_mut() {
            *v /= &w;
        }
    }
    Ok((w, z))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub holds: bool,
    pub violation: Option<String>,
    pub partitions_checked: usize,
}

/// Local-consistency test: for every `|S| = d` and every partition, the
/// conditional point lies in `M^{k−d}(P)`, is 0/1 on `S`, the weights are
/// nonnegative and sum to one, and the weighted conditionals reconstruct
/// `y` on sets of size at most `k−d+1`.
///
/// A zero-weight conditional is skipped when it is the zero vector and is
/// otherwise checked against the homogeneous rows only.
pub fn check_local_consistency(y: &SAVector, p: &HPolytope, d: usize, limits: &Limits) -> Result<ConsistencyReport> {
    let k = y.k();
    if d > k {
        return Err(Error::InvalidArgument(format!("d = {d} exceeds k = {k}")));
    }
    if y.n() != p.n() {
        return Err(Error::Dimension("SA vector and polytope dimensions differ".into()));
    }
    let sub = build_mk(p, k - d, limits)?;
    let fail = |msg: String, checked| Ok(ConsistencyReport { holds: false, violation: Some(msg), partitions_checked: checked });
    let mut checked = 0;
    for s in combinations(y.n(), d) {
        let mut total = Rational::zero();
        let mut recon = zeros(sub.dim());
        for part in partitions(s) {
            checked += 1;
            let (w, z) = conditional_point(y, &part)?;
            if w.is_negative() {
                return fail(format!("(1) negative weight {} at {part}", fmt_rational(&w)), checked);
            }
            if w.is_positive() {
                if let Some(i) = sub.first_violated(&z) {
                    return fail(format!("(1) conditional at {part} violates {}", sub.origins[i]), checked);
                }
                let bad_s = part.j1.iter().any(|j| !z.get(Subset::singleton(j)).is_one())
                    || part.j0.iter().any(|j| !z.get(Subset::singleton(j)).is_zero());
                if bad_s {
                    return fail(format!("(1) conditional at {part} not integral on S"), checked);
                }
            } else if !z.is_zero() {
                if let Some(i) = sub.homogeneous_violation(&z) {
                    return fail(format!("(1) zero-weight conditional at {part} violates {}", sub.origins[i]), checked);
                }
            }
            for (acc, v) in recon.iter_mut().zip(z.entries()) {
                *acc += if w.is_positive() { &w * v } else { v.clone() };
            }
            total += &w;
        }
        if !total.is_one() {
            return fail(format!("(2) weights for S = {s} sum to {}", fmt_rational(&total)), checked);
        }
        if recon.as_slice() != &y.entries()[..sub.dim()] {
            return fail(format!("(2) decomposition over S = {s} does not reconstruct y"), checked);
        }
    }
    Ok(ConsistencyReport { holds: true, violation: None, partitions_checked: checked })
}
