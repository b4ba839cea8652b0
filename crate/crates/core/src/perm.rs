//! Permutations of `[n]`, groups given by generators, their actions on
//! vectors and subsets, transitivity testing and Reynolds averaging.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, RVector, Rational};
use crate::subset::Subset;

pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A bijection of `{0,…,n−1}`; `images[i] = π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &j in &images {
            if j >= n || seen[j] {
                return Err(Error::InvalidArgument(format!("not a permutation: {images:?}")));
            }
            seen[j] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidArgument("1-based images must be positive".into()));
        }
        Permutation::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The transposition of `i` and `j` (0-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.images.swap(i, j);
        p
    }

    /// `i ↦ i+1 mod n`.
    pub fn cycle(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }
}

/// `(a∘b)(i) = a(b(i))`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!("composing permutations of {} and {} points", a.n(), b.n())));
    }
    Ok(Permutation { images: b.images.iter().map(|&j| a.images[j]).collect() })
}

/// `(πx)_i = x_{π⁻¹(i)}`.
pub fn act_on_vector<T: Clone>(p: &Permutation, x: &[T]) -> Result<Vec<T>> {
    if p.n() != x.len() {
        return Err(Error::Dimension(format!("permutation on {} points acting on length {}", p.n(), x.len())));
    }
    let mut out = x.to_vec();
    for (i, v) in x.iter().enumerate() {
        out[p.images[i]] = v.clone();
    }
    Ok(out)
}

pub fn act_on_subset(p: &Permutation, s: Subset) -> Subset {
    s.iter().fold(Subset::EMPTY, |acc, i| acc.with(p.images[i]))
}

/// A group given by generators. The identity is always a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::Dimension(format!("generator on {} points in a group on {n}", g.n())));
        }
        Ok(PermGroup { n, generators })
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup { n, generators: Vec::new() }
    }

    /// `S_n` from an adjacent transposition and the long cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::transposition(n, 0, 1));
        }
        if n >= 3 {
            gens.push(Permutation::cycle(n));
        }
        PermGroup { n, generators: gens }
    }

    pub fn cyclic(n: usize) -> Self {
        let gens = if n >= 2 { vec![Permutation::cycle(n)] } else { Vec::new() };
        PermGroup { n, generators: gens }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Parses `G n g` followed by `g` lines of 1-based images.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty group file".into() })?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "G" {
            return Err(Error::Parse { line: ln, msg: "expected header `G n g`".into() });
        }
        let parse_usize = |t: &str, line: usize| {
            t.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad integer `{t}`") })
        };
        let n = parse_usize(toks[1], ln)?;
        let g = parse_usize(toks[2], ln)?;
        let mut gens = Vec::with_capacity(g);
        for _ in 0..g {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: ln, msg: "missing generator line".into() })?;
            let imgs = l.split_whitespace().map(|t| parse_usize(t, ln)).collect::<Result<Vec<_>>>()?;
            if imgs.len() != n {
                return Err(Error::Parse { line: ln, msg: format!("expected {n} images, found {}", imgs.len()) });
            }
            let p = Permutation::from_one_based(&imgs).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
            gens.push(p);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing content".into() });
        }
        PermGroup::new(n, gens)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("G {} {}\n", self.n, self.generators.len());
        for g in &self.generators {
            let line: Vec<String> = g.to_one_based().iter().map(|i| i.to_string()).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }

    /// Every element, by breadth-first closure under the generators.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut order = vec![id.clone()];
        seen.insert(id);
        let mut head = 0;
        while head < order.len() {
            let cur = order[head].clone();
            head += 1;
            for g in &self.generators {
                let next = compose(g, &cur)?;
                if seen.insert(next.clone()) {
                    if order.len() >= cap {
                        return Err(Error::ResourceLimit(format!("group-too-large (more than {cap} elements)")));
                    }
                    order.push(next);
                }
            }
        }
        Ok(order)
    }

    /// Tests `k`-transitivity by closing the orbit of the tuple `(0,…,k−1)`
    /// under the generators and comparing with `n!/(n−k)!`.
    pub fn is_k_transitive(&self, k: usize, cap: usize) -> Result<bool> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidArgument(format!("transitivity degree {k} outside 1..={}", self.n)));
        }
        let target = falling_factorial(self.n, k);
        let start: Vec<u8> = (0..k as u8).collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for g in &self.generators {
                let img: Vec<u8> = t.iter().map(|&i| g.images[i as usize] as u8).collect();
                if seen.insert(img.clone()) {
                    if Some(seen.len()) == target {
                        return Ok(true);
                    }
                    if seen.len() > cap {
                        return Err(Error::ResourceLimit(format!(
                            "undecided-resource-limit: tuple orbit exceeds {cap}"
                        )));
                    }
                    queue.push_back(img);
                }
            }
        }
        Ok(Some(seen.len()) == target)
    }

    /// Largest `d <= limit` such that the group is `j`-transitive for every
    /// `j <= d`. Stops at the first degree that fails or exceeds the cap.
    pub fn transitivity_degree(&self, limit: usize, cap: usize) -> usize {
        let mut d = 0;
        for k in 1..=limit.min(self.n) {
            match self.is_k_transitive(k, cap) {
                Ok(true) => d = k,
                _ => break,
            }
        }
        d
    }
}

fn falling_factorial(n: usize, k: usize) -> Option<usize> {
    (0..k).try_fold(1usize, |acc, i| acc.checked_mul(n - i))
}

/// Average of `x` over the pointwise stabilizer of `s` in a group that is
/// `(|s|+1)`-transitive: coordinates in `s` are kept, all others are
/// replaced by their mean.
pub fn reynolds_stabilized(x: &[Rational], s: Subset, k: usize) -> Result<RVector> {
    let n = x.len();
    if s.len() > k {
        return Err(Error::InvalidArgument(format!("|S| = {} exceeds certified level {k}", s.len())));
    }
    if s.bound() > n {
        return Err(Error::Dimension("stabilized set outside ground set".into()));
    }
    let rest = n - s.len();
    if rest == 0 {
        return Ok(x.to_vec());
    }
    let mut tail = Rational::zero();
    for (i, v) in x.iter().enumerate() {
        if !s.contains(i) {
            tail += v;
        }
    }
    let avg = tail / int(rest as i64);
    Ok((0..n).map(|i| if s.contains(i) { x[i].clone() } else { avg.clone() }).collect())
}

/// Exact orbit average `|G|⁻¹ Σ_π πx`.
pub fn reynolds_full(x: &[Rational], g: &PermGroup, cap: usize) -> Result<RVector> {
    let elems = g.elements(cap)?;
    average_over(x, &elems)
}

/// Orbit average over the elements of `G` that fix `s` pointwise, by
/// enumeration. Used as the brute-force reference for
/// [`reynolds_stabilized`].
pub fn reynolds_enumerated_stabilizer(x: &[Rational], g: &PermGroup, s: Subset, cap: usize) -> Result<RVector> {
    let elems: Vec<Permutation> = g.elements(cap)?.into_iter().filter(|p| s.iter().all(|i| p.apply(i) == i)).collect();
    average_over(x, &elems)
}

fn average_over(x: &[Rational], elems: &[Permutation]) -> Result<RVector> {
    let mut acc = vec![Rational::zero(); x.len()];
    for p in elems {
        for (a, v) in acc.iter_mut().zip(act_on_vector(p, x)?) {
            *a += v;
        }
    }
    let m = int(elems.len() as i64);
    Ok(acc.into_iter().map(|v| v / &m).collect())
}
