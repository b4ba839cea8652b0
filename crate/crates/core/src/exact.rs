//! Exact rational scalars, dense vectors and matrices.
//!
//! Every quantity in the crate is a [`Rational`]; nothing is ever rounded.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Dense rational vector.
pub type RVector = Vec<Rational>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num / den`; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zeros(n: usize) -> RVector {
    vec![Rational::zero(); n]
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Parses the token syntax shared by all file formats: `p`, `-p` or `p/q`
/// with `q > 0` and no whitespace inside the token.
pub fn parse_rational(tok: &str) -> std::result::Result<Rational, String> {
    if tok.is_empty() || tok.chars().any(char::is_whitespace) {
        return Err(format!("malformed rational token {tok:?}"));
    }
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (tok, None),
    };
    let digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) {
        return Err(format!("malformed rational token {tok:?}"));
    }
    let n = BigInt::from_str(num).map_err(|e| format!("{tok:?}: {e}"))?;
    match den {
        None => Ok(Rational::from_integer(n)),
        Some(d) => {
            if !digits(d, false) {
                return Err(format!("malformed denominator in {tok:?}"));
            }
            let d = BigInt::from_str(d).map_err(|e| format!("{tok:?}: {e}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {tok:?}"));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Renders a rational in the canonical token syntax (`p` or `p/q`).
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn fmt_vector(v: &[Rational]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(" ")
}

/// Binomial coefficient with the zero conventions `C(i, j) = 0` for `j > i`
/// and for `j < 0`. Negative `i` is rejected.
pub fn binom(i: i64, j: i64) -> Result<Rational> {
    if i < 0 {
        return Err(Error::InvalidArgument(format!("binom({i}, {j}): negative top")));
    }
    Ok(Rational::from_integer(binom_int(i as u64, j)))
}

pub(crate) fn binom_int(i: u64, j: i64) -> BigInt {
    if j < 0 || j as u64 > i {
        return BigInt::zero();
    }
    let j = (j as u64).min(i - j as u64);
    let mut acc = BigInt::one();
    for t in 0..j {
        acc = acc * BigInt::from(i - t) / BigInt::from(t + 1);
    }
    acc
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, entries: zeros(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RVector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(RMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integer fractions `(num, den)`.
    pub fn from_fracs(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<RVector> {
        if self.cols != x.len() {
            return Err(Error::Dimension(format!("{} columns, vector of {}", self.cols, x.len())));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// Exact determinant via Bareiss fraction-free elimination.
    ///
    /// Each row is first scaled to integers; the elimination then runs over
    /// `BigInt` and every division is exact.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("det of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                scale *= &l;
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(Rational::new(sign * &m[n - 1][n - 1], scale))
    }

    /// Unique solution of `self * x = b`; a singular matrix is reported as
    /// [`Error::Singular`].
    pub fn solve(&self, b: &[Rational]) -> Result<RVector> {
        if !self.is_square() || b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "solve with {}x{} matrix and rhs of {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        let mut a: Vec<RVector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for v in a[col][col..].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in col..=n {
                    if !a[col][c].is_zero() {
                        let d = &f * &a[col][c];
                        a[r][c] -= d;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
    }

    /// Rank by rational row reduction.
    pub fn rank(&self) -> usize {
        row_reduce(self.rows_vec()).len()
    }

    pub fn rows_vec(&self) -> Vec<RVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl std::ops::Index<(usize, usize)> for RMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  [{}]", fmt_vector(self.row(i)))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form; returns the nonzero rows only.
pub(crate) fn row_reduce(mut rows: Vec<RVector>) -> Vec<RVector> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut lead = 0;
    let mut out_rows = 0;
    for col in 0..ncols {
        let Some(p) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(lead, p);
        let inv = rows[lead][col].recip();
        for v in rows[lead].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != lead && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..ncols {
                    if !rows[lead][c].is_zero() {
                        let d = &f * &rows[lead][c];
                        rows[r][c] -= d;
                    }
                }
            }
        }
        lead += 1;
        out_rows += 1;
        if lead == rows.len() {
            break;
        }
    }
    rows.truncate(out_rows);
    rows
}

/// Basis of the null space `{x : M x = 0}` of the given rows (each of length
/// `ncols`).
pub(crate) fn null_space(rows: Vec<RVector>, ncols: usize) -> Vec<RVector> {
    let rref = row_reduce(rows);
    let mut pivots = Vec::new();
    for r in &rref {
        let c = r.iter().position(|v| !v.is_zero()).expect("nonzero row");
        pivots.push(c);
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zeros(ncols);
        v[free] = Rational::one();
        for (r, &pc) in rref.iter().zip(&pivots) {
            v[pc] = -r[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a nonzero vector so that its first nonzero entry has absolute
/// value one (sign preserved). Used as a canonical key for dedup.
pub(crate) fn normalize_leading(v: &mut [Rational]) -> Option<Rational> {
    let lead = v.iter().find(|x| !x.is_zero())?.abs();
    let inv = lead.recip();
    for x in v.iter_mut() {
        *x *= &inv;
    }
    Some(inv)
}

/// Upper-triangular Pascal matrix with `P[l][r] = C(k-l, r-l)`.
pub fn pascal_p(k: usize) -> RMatrix {
    let mut m = RMatrix::zeros(k + 1, k + 1);
    for l in 0..=k {
        for r in l..=k {
            m[(l, r)] = Rational::from_integer(binom_int((k - l) as u64, (r - l) as i64));
        }
    }
    m
}

/// Inverse Pascal matrix with `Q[l][r] = (-1)^(l+r) C(k-l, r-l)`.
pub fn pascal_q(k: usize) -> RMatrix {
    let mut m = pascal_p(k);
    for l in 0..=k {
        for r in l..=k {
            if (l + r) % 2 == 1 {
                m[(l, r)] = -m[(l, r)].clone();
            }
        }
    }
    m
}

pub fn det(m: &RMatrix) -> Result<Rational> {
    m.det()
}

pub fn solve(m: &RMatrix, b: &[Rational]) -> Result<RVector> {
    m.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(4, 2).unwrap(), int(6));
        assert_eq!(binom(3, 5).unwrap(), int(0));
        assert_eq!(binom(3, -1).unwrap(), int(0));
        assert_eq!(binom(0, 0).unwrap(), int(1));
        assert!(binom(-1, 0).is_err());
    }

    #[test]
    fn det_examples() {
        assert_eq!(RMatrix::identity(3).det().unwrap(), int(1));
        let a2 = RMatrix::from_fracs(&[
            &[(2, 1), (-5, 2), (1, 1)],
            &[(-1, 2), (3, 2), (-1, 1)],
            &[(0, 1), (-1, 2), (1, 1)],
        ])
        .unwrap();
        assert_eq!(a2.det().unwrap(), int(1));
        let sing = RMatrix::from_fracs(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]).unwrap();
        assert_eq!(sing.det().unwrap(), int(0));
        assert!(RMatrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn det_needs_row_swap() {
        let m = RMatrix::from_fracs(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap();
        assert_eq!(m.det().unwrap(), int(-1));
    }

    #[test]
    fn solve_examples() {
        let x = RMatrix::identity(2).solve(&[int(3), int(4)]).unwrap();
        assert_eq!(x, vec![int(3), int(4)]);
        let m = RMatrix::from_fracs(&[&[(7, 4), (-1, 1)], &[(-1, 4), (1, 1)]]).unwrap();
        assert_eq!(m.solve(&[rat(3, 4), int(0)]).unwrap(), vec![rat(1, 2), rat(1, 8)]);
        let sing = RMatrix::from_fracs(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]).unwrap();
        assert!(matches!(sing.solve(&[int(1), int(1)]), Err(Error::Singular)));
    }

    #[test]
    fn pascal_examples() {
        let p2 = RMatrix::from_fracs(&[
            &[(1, 1), (2, 1), (1, 1)],
            &[(0, 1), (1, 1), (1, 1)],
            &[(0, 1), (0, 1), (1, 1)],
        ])
        .unwrap();
        assert_eq!(pascal_p(2), p2);
        let q2 = RMatrix::from_fracs(&[
            &[(1, 1), (-2, 1), (1, 1)],
            &[(0, 1), (1, 1), (-1, 1)],
            &[(0, 1), (0, 1), (1, 1)],
        ])
        .unwrap();
        assert_eq!(pascal_q(2), q2);
        assert_eq!(pascal_p(0), RMatrix::identity(1));
    }

    #[test]
    fn pascal_inverse_up_to_12() {
        for k in 0..=12 {
            assert_eq!(pascal_p(k).mul(&pascal_q(k)).unwrap(), RMatrix::identity(k + 1), "k={k}");
        }
    }

    #[test]
    fn rational_tokens() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1 /2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&int(-2)), "-2");
    }

    #[test]
    fn null_space_of_plane() {
        let ns = null_space(vec![vec![int(1), int(1), int(1)]], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(sum(&v), int(0));
        }
    }
}
