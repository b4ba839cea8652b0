//! The explicit level-`k` Sherali-Adams certificate for symmetric
//! integer-empty polytopes that meet every cube face fixing `k`
//! coordinates.
//!
//! Pipeline: face points `x^ℓ` on `x_[ℓ] = 1, x_[k]∖[ℓ] = 0` are averaged to
//! `(1…1, 0…0, Δ_ℓ…Δ_ℓ)`; the scalars `Δ` determine `λ̄` and `γ̄` in closed
//! form; `ȳ_I = γ̄_{|I|}` is then checked against the lifted system.

use num_traits::{One, Signed, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::exact::{binom, fmt_rational, int, pascal_p, pascal_q, RMatrix, RVector, Rational};
use crate::lp::{self, LpStatus};
use crate::perm::reynolds_stabilized;
use crate::polytope::{CubeFace, HPolytope};
use crate::sa::{build_mk, check_local_consistency, conditional_point, Partition2, SAVector};
use crate::subset::Subset;

fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn b(i: usize, j: i64) -> Rational {
    binom(i as i64, j).expect("nonnegative top")
}

fn check_len(t: usize, theta: &[Rational]) -> Result<()> {
    if theta.len() != t + 1 {
        return Err(Error::Dimension(format!("expected {} parameters, got {}", t + 1, theta.len())));
    }
    Ok(())
}

/// `A^t_Θ`: rows `0..=t`, columns `1..=t+1` (stored at `r−1`).
pub fn matrix_a(t: usize, theta: &[Rational]) -> Result<RMatrix> {
    check_len(t, theta)?;
    let mut m = RMatrix::zeros(t + 1, t + 1);
    for l in 0..=t {
        for r in 1..=t + 1 {
            m[(l, r - 1)] = if l < r {
                let (li, ri) = (l as i64, r as i64);
                sign(li + ri - 1) * (b(t - l, ri - li - 1) + b(t - l, ri - li) * &theta[l])
            } else if l == r {
                -theta[l].clone()
            } else {
                Rational::zero()
            };
        }
    }
    Ok(m)
}

/// `B^t_Θ` from its entrywise closed form.
pub fn matrix_b(t: usize, theta: &[Rational]) -> Result<RMatrix> {
    check_len(t, theta)?;
    let mut m = RMatrix::zeros(t + 1, t + 1);
    for l in 0..=t {
        for r in 1..=t + 1 {
            let (li, ri) = (l as i64, r as i64);
            m[(l, r - 1)] = if r == t + 1 {
                sign(li + t as i64)
            } else if l == t {
                Rational::one() - &theta[t]
            } else if l < r {
                sign(li + ri - 1) * (b(t - l - 1, ri - li - 2) + b(t - l - 1, ri - li - 1) * &theta[l])
            } else {
                Rational::zero()
            };
        }
    }
    Ok(m)
}

/// `B^t_Θ` as suffix sums of the columns of `A^t_Θ`: column `r` is
/// `Σ_{j=r}^{t+1} A(:, j)`.
pub fn matrix_b_by_column_sums(t: usize, theta: &[Rational]) -> Result<RMatrix> {
    let a = matrix_a(t, theta)?;
    let mut m = RMatrix::zeros(t + 1, t + 1);
    for l in 0..=t {
        let mut acc = Rational::zero();
        for c in (0..=t).rev() {
            acc += &a[(l, c)];
            m[(l, c)] = acc.clone();
        }
    }
    Ok(m)
}

/// `ω^t_Θ = Σ_r C(t,r) Π_{j<r} Θ_j Π_{j>r} (1−Θ_j)`.
pub fn omega(t: usize, theta: &[Rational]) -> Result<Rational> {
    check_len(t, theta)?;
    let mut total = Rational::zero();
    for r in 0..=t {
        let mut term = b(t, r as i64);
        for th in &theta[..r] {
            term *= th;
        }
        for th in &theta[r + 1..] {
            term *= Rational::one() - th;
        }
        total += term;
    }
    Ok(total)
}

/// First-column expansion of `det A^{k−i}_{Δ_i..Δ_k}`:
/// `Σ_{r=i}^{k} (−1)^{r+i} [C(k−i, r−i) + C(k−i, r−i+1) Δ_i] Π_{j=i}^{r−1} Δ_{j+1} · det A^{k−r−1}_{Δ_{r+1}..Δ_k}`,
/// the trailing determinant being 1 for `r = k`.
pub fn det_expansion(k: usize, i: usize, delta: &[Rational]) -> Result<Rational> {
    check_len(k, delta)?;
    if i > k {
        return Err(Error::InvalidArgument(format!("i = {i} exceeds k = {k}")));
    }
    let mut total = Rational::zero();
    for r in i..=k {
        let (ri, ii) = (r as i64, i as i64);
        let mut term = sign(ri + ii) * (b(k - i, ri - ii) + b(k - i, ri - ii + 1) * &delta[i]);
        for j in i..r {
            term *= &delta[j + 1];
        }
        if r < k {
            term *= matrix_a(k - r - 1, &delta[r + 1..])?.det()?;
        }
        total += term;
    }
    Ok(total)
}

/// Options for extracting `Δ`.
#[derive(Clone, Debug, Default)]
pub struct DeltaOptions {
    /// Minimize this objective over each face polytope instead of taking any
    /// feasible point.
    pub objective: Option<RVector>,
    /// Accept `Δ_ℓ ∈ {0, 1}` (with a warning) for polytopes that are not
    /// integer-empty.
    pub allow_integral: bool,
    /// Feed the face rows to the LP in reverse order, which changes the
    /// pivot sequence and possibly the face point found.
    pub reverse_rows: bool,
}

#[derive(Clone, Debug)]
pub struct DeltaExtraction {
    pub delta: RVector,
    /// Face points `x^ℓ` as returned by the LP.
    pub points: Vec<RVector>,
    /// Their stabilizer averages `x̄^ℓ`.
    pub averaged: Vec<RVector>,
    pub warnings: Vec<String>,
}

/// Computes `Δ_0..Δ_k` from one point of each canonical face polytope.
/// The caller is responsible for a `(k+1)`-transitivity certificate; every
/// averaged point is checked for membership in `P`.
pub fn extract_delta(p: &HPolytope, k: usize, opts: &DeltaOptions, limits: &Limits) -> Result<DeltaExtraction> {
    let n = p.n();
    if k >= n {
        return Err(Error::InvalidArgument(format!("level {k} must be below the dimension {n}")));
    }
    let tail = int((n - k) as i64);
    let mut ex = DeltaExtraction { delta: Vec::new(), points: Vec::new(), averaged: Vec::new(), warnings: Vec::new() };
    // canonical face order, all ones first
    for l in (0..=k).rev() {
        let face = CubeFace::canonical(k, l);
        let fp = p.restrict_face(&face)?;
        let mut rows = fp.rows().to_vec();
        if opts.reverse_rows {
            rows.reverse();
        }
        let out = match &opts.objective {
            Some(c) => lp::optimize(n, &rows, c, lp::Sense::Min, &limits.lp)?,
            None => lp::feasible(n, &rows, &limits.lp)?,
        };
        let x = match out.status {
            LpStatus::Optimal => out.point.unwrap(),
            LpStatus::Infeasible => return Err(Error::ConditionAFails(format!("face {face} misses the polytope"))),
            _ => return Err(Error::ResourceLimit(format!("pivot limit on face {face}"))),
        };
        let avg = reynolds_stabilized(&x, Subset::prefix(k), k)?;
        if !p.contains(&avg) {
            return Err(Error::Verification(format!(
                "averaged face point for l = {l} is not in P; the symmetry certificate does not hold"
            )));
        }
        let d: Rational = x[k..].iter().sum::<Rational>() / &tail;
        if d.is_zero() || d.is_one() {
            let msg = format!("Delta_{l} = {} is integral; not integer-empty as assumed", fmt_rational(&d));
            if !opts.allow_integral {
                return Err(Error::Verification(msg));
            }
            ex.warnings.push(msg);
        }
        ex.delta.push(d);
        ex.points.push(x);
        ex.averaged.push(avg);
    }
    ex.delta.reverse();
    ex.points.reverse();
    ex.averaged.reverse();
    Ok(ex)
}

/// A named verification outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

fn check(checks: &mut Vec<Check>, name: &str, passed: bool) {
    checks.push(Check { name: name.to_string(), passed });
}

/// Closed-form solution `(λ̄, γ̄)` of the reduced system.
#[derive(Clone, Debug)]
pub struct CertSolution {
    pub k: usize,
    pub delta: RVector,
    pub omega: Rational,
    /// `λ̄_0..λ̄_k`.
    pub lambda: RVector,
    /// `γ̄_0..γ̄_{k+1}`, with `γ̄_0 = 1`.
    pub gamma: RVector,
    /// `ρ^1..ρ^{k+1}`.
    pub rho: RVector,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

/// Evaluates `λ̄`, `ρ` and `γ̄` and verifies every equation of the reduced
/// system. With `allow_integral`, entries of `Δ` may be 0 or 1 as long as all
/// `ω` denominators stay positive; the strict positivity of the solution is
/// then only reported.
pub fn cert_solution(delta: &[Rational], k: usize, allow_integral: bool) -> Result<CertSolution> {
    check_len(k, delta)?;
    let mut warnings = Vec::new();
    let in_open = delta.iter().all(|d| d.is_positive() && *d < Rational::one());
    if !in_open {
        if !allow_integral {
            return Err(Error::InvalidArgument("Delta must lie in (0,1)^(k+1)".into()));
        }
        warnings.push("Delta has entries outside (0,1)".to_string());
    }
    if delta.iter().any(|d| d.is_negative() || *d > Rational::one()) {
        return Err(Error::InvalidArgument("Delta must lie in [0,1]^(k+1)".into()));
    }
    // suffix[i] = ω^{k−i}_{Δ_i..Δ_k}
    let suffix: RVector = (0..=k).map(|i| omega(k - i, &delta[i..])).collect::<Result<_>>()?;
    if suffix.iter().any(|w| !w.is_positive()) {
        return Err(Error::Verification("omega is not positive".into()));
    }
    let om = suffix[0].clone();

    let lambda: RVector = (0..=k)
        .map(|l| {
            let mut v = Rational::one();
            for d in &delta[..l] {
                v *= d;
            }
            for d in &delta[l + 1..] {
                v *= Rational::one() - d;
            }
            v / &om
        })
        .collect();
    let rho: RVector = (1..=k + 1)
        .map(|i| if i <= k { &delta[i - 1] * &suffix[i] / &suffix[i - 1] } else { delta[k].clone() })
        .collect();
    let mut gamma = vec![Rational::one()];
    for r in &rho {
        let next = gamma.last().unwrap() * r;
        gamma.push(next);
    }

    let mut checks = Vec::new();
    // Product formula γ̄_i = (Π_{j<i} Δ_j) ω^{k−i}_{Δ_i..} / ω^k, with ω^{−1} := 1.
    let product_form = (0..=k + 1).all(|i| {
        let mut v: Rational = delta[..i].iter().product();
        if i <= k {
            v *= &suffix[i];
        }
        v / &om == gamma[i]
    });
    check(&mut checks, "gamma product formula", product_form);

    let a = matrix_a(k, delta)?;
    let mut rhs = vec![Rational::zero(); k + 1];
    rhs[0] = delta[0].clone();
    let g1 = gamma[1..].to_vec();
    check(&mut checks, "face system A gamma = Delta_0 e_1", a.mul_vec(&g1)? == rhs);
    check(&mut checks, "face system by elimination", a.solve(&rhs)? == g1);

    let bk = |l: usize| b(k, l as i64);
    let s_empty: Rational = (0..=k).map(|l| bk(l) * &lambda[l]).sum();
    check(&mut checks, "weights sum to one", s_empty.is_one());
    let s_int: Rational = (1..=k).map(|l| b(k - 1, l as i64 - 1) * &lambda[l]).sum();
    check(&mut checks, "singleton marginal on S", k == 0 || s_int == gamma[1]);
    let s_frac: Rational = (0..=k).map(|l| bk(l) * &lambda[l] * &delta[l]).sum();
    check(&mut checks, "singleton marginal off S", s_frac == gamma[1]);
    let inversion = (0..=k).all(|l| {
        let v: Rational = (0..=k - l).map(|r| sign(r as i64) * b(k - l, r as i64) * &gamma[r + l]).sum();
        v == lambda[l]
    });
    check(&mut checks, "weights from moments", inversion);
    let unit = |v: &Rational| !v.is_negative() && *v <= Rational::one();
    check(&mut checks, "bounds", lambda.iter().all(unit) && gamma.iter().all(unit) && gamma[0].is_one());
    let g0k = gamma[..=k].to_vec();
    check(&mut checks, "lambda = Q gamma", pascal_q(k).mul_vec(&g0k)? == lambda);
    check(&mut checks, "gamma = P lambda", pascal_p(k).mul_vec(&lambda)? == g0k);
    let positive = lambda.iter().chain(&gamma).all(Signed::is_positive);
    if !positive {
        if !allow_integral {
            return Err(Error::Verification("solution is not strictly positive".into()));
        }
        warnings.push("solution has zero entries".to_string());
    }

    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Verification(format!("certificate equation failed: {}", c.name)));
    }
    Ok(CertSolution { k, delta: delta.to_vec(), omega: om, lambda, gamma, rho, checks, warnings })
}

/// A verified level-`k` certificate.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub k: usize,
    pub extraction: DeltaExtraction,
    pub solution: CertSolution,
    pub ybar: SAVector,
    /// `Σ_i ȳ_{i} = n γ̄_1`.
    pub value: Rational,
    pub checks: Vec<Check>,
}

/// Runs the full pipeline and refuses to return an unverified `ȳ`.
pub fn build_certificate(p: &HPolytope, k: usize, opts: &DeltaOptions, limits: &Limits) -> Result<Certificate> {
    let n = p.n();
    let extraction = extract_delta(p, k, opts, limits)?;
    let solution = cert_solution(&extraction.delta, k, opts.allow_integral)?;
    let ybar = SAVector::level_symmetric(n, k, &solution.gamma)?;
    let mut checks = solution.checks.clone();

    let sys = build_mk(p, k, limits)?;
    if let Some(i) = sys.first_violated(&ybar) {
        return Err(Error::Verification(format!("ybar violates {}", sys.origins[i])));
    }
    check(&mut checks, "ybar satisfies every lifted row", true);

    for l in 0..=k {
        let part = Partition2::new(Subset::range(l, k), Subset::prefix(l))?;
        let (w, z) = conditional_point(&ybar, &part)?;
        if w != solution.lambda[l] {
            return Err(Error::Verification(format!("conditional weight at {part} differs from lambda_{l}")));
        }
        if w.is_zero() {
            // zero weight: the conditional is the zero vector, nothing to match
            if !z.is_zero() {
                return Err(Error::Verification(format!("zero-weight conditional at {part} is not zero")));
            }
            continue;
        }
        let x = &extraction.averaged[l];
        if !z.entries()[0].is_one() || z.level_one() != *x {
            return Err(Error::Verification(format!("conditional point at {part} differs from the face point")));
        }
    }
    check(&mut checks, "canonical conditionals match the face points", true);

    let lc = check_local_consistency(&ybar, p, k, limits)?;
    if !lc.holds {
        return Err(Error::Verification(format!("local consistency: {}", lc.violation.unwrap_or_default())));
    }
    check(&mut checks, "local consistency over all |S| = k", true);

    let value = int(n as i64) * &solution.gamma[1];
    Ok(Certificate { k, extraction, solution, ybar, value, checks })
}
