//! Instance families: parity, cropped cube, knapsack cover, Steiner triple
//! covering, and orbit hulls.

use std::collections::BTreeSet;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::exact::{int, rat, RVector, Rational};
use crate::lp::Inequality;
use crate::perm::{act_on_vector, PermGroup, Permutation};
use crate::polytope::{hull, HPolytope, VPolytope};

/// AGL(2,3) generators acting on the nine points of `sts(2)`.
pub const STS2_GROUP: &str = include_str!("../data/sts2_agl23.grp");

/// A generated polytope with its documented symmetry group.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub polytope: HPolytope,
    pub group: PermGroup,
    /// Minimization objective, when the family comes with one.
    pub objective: Option<RVector>,
}

#[derive(Clone, Debug)]
pub enum InstanceSpec {
    Parity { n: usize },
    CroppedCube { n: usize },
    KnapsackCover { n: usize },
    Sts { n: usize },
    StsOptimalFace,
    OrbitHull { points: Vec<RVector>, group: PermGroup },
}

impl InstanceSpec {
    pub fn name(&self) -> String {
        match self {
            InstanceSpec::Parity { n } => format!("parity-{n}"),
            InstanceSpec::CroppedCube { n } => format!("cropped-cube-{n}"),
            InstanceSpec::KnapsackCover { n } => format!("knapsack-cover-{n}"),
            InstanceSpec::Sts { n } => format!("sts-{n}"),
            InstanceSpec::StsOptimalFace => "sts-2-face".to_string(),
            InstanceSpec::OrbitHull { points, .. } => format!("orbit-hull-{}", points.len()),
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<Instance> {
        let ones = |n: usize| Some(vec![int(1); n]);
        let (polytope, group, objective) = match self {
            InstanceSpec::Parity { n } => (parity(*n)?, PermGroup::symmetric(*n), None),
            InstanceSpec::CroppedCube { n } => (cropped_cube(*n)?, PermGroup::symmetric(*n), None),
            InstanceSpec::KnapsackCover { n } => (knapsack_cover(*n)?, PermGroup::symmetric(*n), ones(*n)),
            InstanceSpec::Sts { n } => (sts(*n)?, sts_group(*n)?, ones(3usize.pow(*n as u32))),
            InstanceSpec::StsOptimalFace => (sts_optimal_face(2)?, sts_group(2)?, ones(9)),
            InstanceSpec::OrbitHull { points, group } => (orbit_hull(points, group, limits)?, group.clone(), None),
        };
        Ok(Instance { name: self.name(), polytope, group, objective })
    }
}

fn sum_rows(n: usize, rhs: Rational) -> [Inequality; 2] {
    [Inequality::new(vec![int(1); n], rhs.clone()), Inequality::new(vec![int(-1); n], -rhs)]
}

/// `Σ x = n/2` over the cube, for odd `n ≥ 3`.
pub fn parity(n: usize) -> Result<HPolytope> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("parity needs odd n >= 3, got {n}")));
    }
    HPolytope::new(n, sum_rows(n, rat(n as i64, 2)).to_vec())
}

/// The cube with every vertex cut off:
/// `Σ_{i∈I} x_i + Σ_{i∉I} (1 − x_i) ≥ 1/2` for all `I`.
pub fn cropped_cube(n: usize) -> Result<HPolytope> {
    if n == 0 || n > 16 {
        return Err(Error::Guard(format!("cropped cube limited to 1 <= n <= 16, got {n}")));
    }
    let rows = (0u32..1 << n)
        .map(|mask| {
            let a: RVector = (0..n).map(|i| if mask >> i & 1 == 1 { int(1) } else { int(-1) }).collect();
            let outside = n as i64 - mask.count_ones() as i64;
            Inequality::new(a, rat(1, 2) - int(outside))
        })
        .collect();
    HPolytope::new(n, rows)
}

/// `Σ x ≥ 1 + 1/(n−1)` and `Σ_{j≠i} x_j ≥ 1` for each `i`.
pub fn knapsack_cover(n: usize) -> Result<HPolytope> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("knapsack cover needs n >= 3, got {n}")));
    }
    let mut rows = vec![Inequality::new(vec![int(1); n], int(1) + rat(1, n as i64 - 1))];
    for i in 0..n {
        let mut a = vec![int(1); n];
        a[i] = int(0);
        rows.push(Inequality::new(a, int(1)));
    }
    HPolytope::new(n, rows)
}

/// The covering triples of `STS_n` as 0-based index triples, in block order:
/// three copies of `STS_{n−1}`, then `{i, i+m, i+2m}` with `m = 3^{n−1}`, then
/// the remaining lines with one point per block in lexicographic order.
///
/// Point `i` is the base-3 digit vector of `i`; triples are the lines of
/// AG(n,3), i.e. digitwise sums `≡ 0 (mod 3)`.
pub fn sts_triples(n: usize) -> Result<Vec<[usize; 3]>> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("sts needs 1 <= n <= 3, got {n}")));
    }
    if n == 1 {
        return Ok(vec![[0, 1, 2]]);
    }
    let m = 3usize.pow(n as u32 - 1);
    let prev = sts_triples(n - 1)?;
    let mut out = Vec::new();
    for blk in 0..3 {
        out.extend(prev.iter().map(|t| t.map(|i| i + blk * m)));
    }
    out.extend((0..m).map(|i| [i, i + m, i + 2 * m]));
    for a in 0..m {
        for b in 0..m {
            if a != b {
                out.push([a, m + b, 2 * m + third_point(a, b, n - 1)]);
            }
        }
    }
    Ok(out)
}

/// The point completing `a, b` to a line of AG(d,3).
fn third_point(a: usize, b: usize, d: usize) -> usize {
    let (mut a, mut b, mut c, mut w) = (a, b, 0, 1);
    for _ in 0..d {
        c += (6 - a % 3 - b % 3) % 3 * w;
        a /= 3;
        b /= 3;
        w *= 3;
    }
    c
}

/// LP relaxation of the Steiner triple covering instance on `3^n` points.
pub fn sts(n: usize) -> Result<HPolytope> {
    let triples = sts_triples(n)?;
    let dim = 3usize.pow(n as u32);
    let rows = triples
        .iter()
        .map(|t| {
            let mut a = vec![int(0); dim];
            for &i in t {
                a[i] = int(1);
            }
            Inequality::new(a, int(1))
        })
        .collect();
    HPolytope::new(dim, rows)
}

/// `sts(2)` cut down to the optimal LP face `Σ x = 4`.
pub fn sts_optimal_face(n: usize) -> Result<HPolytope> {
    if n != 2 {
        return Err(Error::InvalidArgument("the optimal face is only defined for n = 2".into()));
    }
    sts(2)?.with_rows(sum_rows(9, int(4)))
}

/// Generators of AGL(n,3) acting on the points of `sts(n)`: unit
/// translations, elementary transvections and one scaling.
pub fn sts_group(n: usize) -> Result<PermGroup> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("sts needs 1 <= n <= 3, got {n}")));
    }
    let size = 3usize.pow(n as u32);
    let digits = |p: usize| -> Vec<usize> { (0..n).map(|j| p / 3usize.pow(j as u32) % 3).collect() };
    let index = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &x| acc * 3 + x) };
    let make = |f: &dyn Fn(&mut Vec<usize>)| {
        let images = (0..size)
            .map(|p| {
                let mut d = digits(p);
                f(&mut d);
                index(&d)
            })
            .collect();
        Permutation::new(images)
    };
    let mut gens = Vec::new();
    for j in 0..n {
        gens.push(make(&|d| d[j] = (d[j] + 1) % 3)?);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(make(&|d| d[i] = (d[i] + d[j]) % 3)?);
            }
        }
    }
    gens.push(make(&|d| d[0] = 2 * d[0] % 3)?);
    PermGroup::new(size, gens)
}

/// Convex hull of the union of the orbits of `points` under `g`.
pub fn orbit_hull(points: &[RVector], g: &PermGroup, limits: &Limits) -> Result<HPolytope> {
    let n = g.n();
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::Dimension(format!("seed points must have {n} coordinates")));
    }
    let elems = g.elements(limits.group_cap)?;
    let mut orbit = BTreeSet::new();
    for p in points {
        for e in &elems {
            orbit.insert(act_on_vector(e, p)?);
        }
    }
    hull(&VPolytope::new(n, orbit.into_iter().collect())?, limits)
}

/// `conv(π(0, 1/2, 1) : π ∈ S₃)`.
pub fn s3_orbit_spec() -> InstanceSpec {
    InstanceSpec::OrbitHull { points: vec![vec![int(0), rat(1, 2), int(1)]], group: PermGroup::symmetric(3) }
}

/// `conv(π(1, 1/2, 0), π(1, 1, 1/10) : π ∈ C₃)`.
pub fn c3_orbit_spec() -> InstanceSpec {
    InstanceSpec::OrbitHull {
        points: vec![vec![int(1), rat(1, 2), int(0)], vec![int(1), int(1), rat(1, 10)]],
        group: PermGroup::cyclic(3),
    }
}

/// The default instance of every family, small enough for every check.
pub fn library() -> Vec<InstanceSpec> {
    vec![
        InstanceSpec::Parity { n: 3 },
        InstanceSpec::Parity { n: 5 },
        InstanceSpec::CroppedCube { n: 2 },
        InstanceSpec::CroppedCube { n: 3 },
        InstanceSpec::KnapsackCover { n: 6 },
        InstanceSpec::Sts { n: 1 },
        InstanceSpec::Sts { n: 2 },
        InstanceSpec::StsOptimalFace,
        s3_orbit_spec(),
        c3_orbit_spec(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Sense;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn parity_rows() {
        let p = parity(3).unwrap();
        assert_eq!(p.constraint_rows().len(), 2);
        assert!(p.is_integer_empty(&lim()).unwrap());
        assert!(parity(4).is_err());
        let face = vec![int(1), int(1), int(0), rat(1, 4), rat(1, 4)];
        assert!(parity(5).unwrap().contains(&face));
    }

    #[test]
    fn cropped_cube_rows() {
        let p = cropped_cube(2).unwrap();
        assert_eq!(p.constraint_rows().len(), 4);
        let c = vec![rat(1, 2); 3];
        let p3 = cropped_cube(3).unwrap();
        assert!(p3.constraint_rows().iter().all(|r| r.slack(&c) == int(1)));
        assert!(p3.is_integer_empty(&lim()).unwrap());
        assert!(cropped_cube(17).is_err());
    }

    #[test]
    fn knapsack_rows() {
        let p = knapsack_cover(6).unwrap();
        assert_eq!(p.constraint_rows().len(), 7);
        assert!(!p.is_integer_empty(&lim()).unwrap());
        let (v, _) = p.integer_optimum(&vec![int(1); 6], Sense::Min, &lim()).unwrap().unwrap();
        assert_eq!(v, int(2));
    }

    #[test]
    fn sts_two_matches_worked_program() {
        let one_based: Vec<[usize; 3]> = sts_triples(2).unwrap().iter().map(|t| t.map(|i| i + 1)).collect();
        let expected = vec![
            [1, 2, 3],
            [4, 5, 6],
            [7, 8, 9],
            [1, 4, 7],
            [2, 5, 8],
            [3, 6, 9],
            [1, 5, 9],
            [1, 6, 8],
            [2, 4, 9],
            [2, 6, 7],
            [3, 4, 8],
            [3, 5, 7],
        ];
        assert_eq!(one_based, expected);
        assert_eq!(sts(1).unwrap().constraint_rows().len(), 1);
        assert_eq!(sts_triples(3).unwrap().len(), 117);
    }

    #[test]
    fn sts_three_is_a_steiner_system() {
        let t = sts_triples(3).unwrap();
        let mut pairs = BTreeSet::new();
        for tr in &t {
            for (a, b) in [(tr[0], tr[1]), (tr[0], tr[2]), (tr[1], tr[2])] {
                assert!(pairs.insert((a.min(b), a.max(b))));
            }
        }
        assert_eq!(pairs.len(), 27 * 26 / 2);
    }

    fn sts_row(idx: &[usize]) -> RVector {
        (0..9).map(|i| if idx.contains(&i) { int(1) } else { int(0) }).collect()
    }

    #[test]
    fn sts_optima() {
        let l = lim();
        let p = sts(2).unwrap();
        let (v, x) = p.integer_optimum(&vec![int(1); 9], Sense::Min, &l).unwrap().unwrap();
        assert_eq!(v, int(5));
        assert_eq!(x.iter().filter(|b| **b).count(), 5);
        let star: RVector = [1, 1, 0, 1, 0, 1, 0, 1, 0].iter().map(|&b| int(b)).collect();
        // the displayed optimum misses the triple {3,5,7}
        assert_eq!(p.first_violated(&star).map(|i| p.rows()[i].a.clone()), Some(sts_row(&[2, 4, 6])));
        let lp = p.optimize(&vec![int(1); 9], Sense::Min, &l.lp).unwrap();
        assert_eq!(lp.value.unwrap(), int(3));
        assert!(p.contains(&vec![rat(1, 3); 9]));
    }

    #[test]
    fn sts_face_witnesses() {
        let l = lim();
        let f = sts_optimal_face(2).unwrap();
        assert!(f.is_integer_empty(&l).unwrap());
        let mut w0 = vec![int(0), int(1), int(0)];
        w0.extend(vec![rat(1, 2); 6]);
        let mut w1 = vec![int(1), int(0), int(0)];
        w1.extend(vec![rat(1, 2); 6]);
        assert!(f.contains(&w0) && f.contains(&w1));
    }

    #[test]
    fn sts_not_three_transitive() {
        let l = lim();
        let g = sts_group(2).unwrap();
        assert_eq!(g.transitivity_degree(4, l.orbit_cap), 2);
        let p = sts(2).unwrap();
        // a feasible point with three zeros, while the first row covers {1,2,3}
        let (_, x) = p.integer_optimum(&vec![int(1); 9], Sense::Min, &l).unwrap().unwrap();
        assert!(x.iter().filter(|b| !**b).count() >= 3);
        assert_eq!(p.constraint_rows()[0].a[..3], [int(1), int(1), int(1)]);
    }

    #[test]
    fn shipped_group_matches_generated() {
        let l = lim();
        let shipped = PermGroup::parse(STS2_GROUP).unwrap();
        let mut a = shipped.elements(l.group_cap).unwrap();
        let mut b = sts_group(2).unwrap().elements(l.group_cap).unwrap();
        assert_eq!(a.len(), 432);
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(shipped.is_k_transitive(2, l.orbit_cap).unwrap());
    }

    #[test]
    fn library_is_invariant() {
        let l = lim();
        for spec in library() {
            let inst = spec.build(&l).unwrap();
            let rep = inst.polytope.certify_invariance(&inst.group, &l).unwrap();
            assert!(rep.holds, "{} not invariant", inst.name);
        }
        let g3 = sts_group(3).unwrap();
        assert!(sts(3).unwrap().certify_invariance(&g3, &l).unwrap().holds);
    }

    #[test]
    fn orbit_hulls() {
        let l = lim();
        let e1 = s3_orbit_spec().build(&l).unwrap();
        assert_eq!(e1.polytope.vertices(&l).unwrap().len(), 6);
        let a = c3_orbit_spec().build(&l).unwrap();
        assert_eq!(a.polytope.vertices(&l).unwrap().len(), 6);
        let pt = orbit_hull(&[vec![rat(1, 3), rat(1, 3)]], &PermGroup::trivial(2), &l).unwrap();
        assert_eq!(pt.vertices(&l).unwrap().len(), 1);
    }
}
