//! Dense square complex matrices and Hilbert-Schmidt geometry.
//!
//! [`Matrix`] is the single carrier type for gates, Hamilton operators,
//! projectors and Cayley transforms. Entries are stored row-major as explicit
//! `(re, im)` pairs. Arithmetic operators panic on dimension mismatch; the
//! free functions that take user-supplied matrices return
//! [`Error::DimensionMismatch`] instead.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    n: usize,
    data: Vec<C64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from nested rows. Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        for r in rows {
            assert_eq!(r.as_ref().len(), n, "rows must form a square matrix");
        }
        Self::from_fn(n, |i, j| rows[i].as_ref()[j])
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        for r in rows {
            assert_eq!(r.as_ref().len(), n, "rows must form a square matrix");
        }
        Self::from_fn(n, |i, j| re(rows[i].as_ref()[j]))
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<V: AsRef<[C64]>>(columns: &[V]) -> Self {
        let n = columns.len();
        for col in columns {
            assert_eq!(col.as_ref().len(), n, "columns must form a square matrix");
        }
        Self::from_fn(n, |i, j| columns[j].as_ref()[i])
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖A A* − I‖`.
    pub fn unitarity_residual(&self) -> f64 {
        hs_norm(&(&(self * &self.adjoint()) - &Matrix::identity(self.n)))
    }

    /// `‖A − A*‖`.
    pub fn hermiticity_residual(&self) -> f64 {
        hs_norm(&(self - &self.adjoint()))
    }

    /// `‖A A* − A* A‖`.
    pub fn normality_residual(&self) -> f64 {
        let adj = self.adjoint();
        hs_norm(&(&(self * &adj) - &(&adj * self)))
    }

    /// Determinant via LU with partial pivoting.
    pub fn determinant(&self) -> C64 {
        match Lu::factor(self) {
            Some(lu) => lu.determinant(),
            None => ZERO,
        }
    }

    /// Solves `self · X = rhs` for the square matrix `X`.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        check_dims("solve", self, rhs)?;
        let lu = Lu::factor(self).ok_or(Error::Singular)?;
        let cols: Vec<Vec<C64>> = rhs.columns().iter().map(|b| lu.solve(b)).collect();
        Ok(Matrix::from_columns(&cols))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.n && j < self.n, "index out of bounds");
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.n && j < self.n, "index out of bounds");
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Matrix { n, data: out }
    }
}

impl Mul for Matrix {
    type Output = Matrix;

    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "add dimension mismatch");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "sub dimension mismatch");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale(-ONE)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{"n": 2, "entries": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.entries.len() != repr.n {
            return Err(Error::InvalidMatrix(format!(
                "n = {} but {} rows given",
                repr.n,
                repr.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(repr.n * repr.n);
        for (i, row) in repr.entries.iter().enumerate() {
            if row.len() != repr.n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    repr.n
                )));
            }
            data.extend(row.iter().map(|[r, i]| c(*r, *i)));
        }
        Matrix::new(repr.n, data)
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        let entries = (0..m.n)
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        MatrixRepr { n: m.n, entries }
    }
}

fn check_dims(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            op,
            left: a.n,
            right: b.n,
        });
    }
    Ok(())
}

/// Hilbert-Schmidt inner product `tr(A B*)`.
pub fn hs_inner(a: &Matrix, b: &Matrix) -> Result<C64> {
    check_dims("hs_inner", a, b)?;
    // tr(A B*) = Σ_ij a_ij conj(b_ij)
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y.conj()).sum())
}

/// Hilbert-Schmidt norm `sqrt(tr(A A*))`.
pub fn hs_norm(a: &Matrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖A − B‖` in the Hilbert-Schmidt norm.
pub fn hs_distance(a: &Matrix, b: &Matrix) -> Result<f64> {
    check_dims("hs_distance", a, b)?;
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Distance between the global-phase classes of two unitaries,
/// `min_φ ‖e^{iφ}U − V‖ / sqrt(2n)`.
///
/// The minimiser is `e^{iφ} = conj(t)/|t|` with `t = tr(U V*)`, giving the
/// value `sqrt(2n − 2|t|)/sqrt(2n)`. The norm is evaluated at the minimiser
/// directly so that nearly equal classes do not lose precision to the
/// cancellation in `2n − 2|t|`.
pub fn phase_min_distance(u: &Matrix, v: &Matrix, cfg: &ToleranceConfig) -> Result<f64> {
    check_dims("phase_min_distance", u, v)?;
    for (arg, m) in [("u", u), ("v", v)] {
        let residual = m.unitarity_residual();
        if residual > cfg.eps_unitary {
            return Err(Error::NotUnitary { arg, residual });
        }
    }
    let t = hs_inner(u, v)?;
    let phase = if t.norm() > 0.0 { t.conj() / t.norm() } else { ONE };
    let d = hs_distance(&u.scale(phase), v)? / ((2 * u.n) as f64).sqrt();
    Ok(d.min(1.0))
}

pub fn is_unitary(a: &Matrix, eps: f64) -> bool {
    a.unitarity_residual() <= eps
}

pub fn is_hermitian(a: &Matrix, eps: f64) -> bool {
    a.hermiticity_residual() <= eps
}

/// Conjugate-linear in the first argument: `Σ conj(x_i) y_i`.
pub fn vdot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vnorm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// LU factorisation with partial pivoting, `P A = L U` stored in place.
struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn factor(a: &Matrix) -> Option<Self> {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    let t = lu[k * n + j];
                    lu[i * n + j] -= f * t;
                }
            }
        }
        Some(Self { n, lu, perm, swaps })
    }

    fn determinant(&self) -> C64 {
        let prod: C64 = (0..self.n).map(|k| self.lu[k * self.n + k]).product();
        if self.swaps.is_multiple_of(2) {
            prod
        } else {
            -prod
        }
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let t = x[k];
                x[i] -= self.lu[i * n + k] * t;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = x[k];
                x[i] -= self.lu[i * n + k] * t;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}
