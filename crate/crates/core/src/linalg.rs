//! Small dense complex matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
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

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        Self::from_fn(k, k, |i, j| self[(i, j)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A - A*|`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.conj_transpose())
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// LU factorization with partial pivoting. Returns the packed factors,
    /// the permutation and its sign.
    fn lu(&self) -> Result<(Self, Vec<usize>, f64)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::Singular);
            }
            if pivot_row != k {
                for j in 0..n {
                    a.data.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in (k + 1)..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                for j in (k + 1)..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        Ok((a, perm, sign))
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch);
        }
        let (lu, perm, _) = self.lu()?;
        Ok(lu_solve(&lu, &perm, b))
    }

    pub fn inverse(&self) -> Result<Self> {
        let (lu, perm, _) = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Complex64::zero(); n];
            e[j] = Complex64::new(1.0, 0.0);
            let col = lu_solve(&lu, &perm, &e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch);
        }
        match self.lu() {
            Ok((lu, _, sign)) => Ok((0..self.rows).fold(Complex64::new(sign, 0.0), |acc, i| acc * lu[(i, i)])),
            Err(Error::Singular) => Ok(Complex64::zero()),
            Err(e) => Err(e),
        }
    }

    /// Determinants of the leading `k x k` blocks, `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch);
        }
        (1..=self.rows).map(|k| self.leading(k).det()).collect()
    }

    /// Eigenvalues (ascending) of the Hermitian part of a square matrix.
    ///
    /// The `n x n` complex problem is embedded in the `2n x 2n` real
    /// symmetric matrix `[[Re, -Im], [Im, Re]]`, whose spectrum is that of
    /// the original with every eigenvalue doubled; cyclic Jacobi does the rest.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch);
        }
        let n = self.rows;
        let h = self.hermitian_part();
        let m = 2 * n;
        let mut s = vec![0.0f64; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = h[(i, j)];
                s[i * m + j] = z.re;
                s[(i + n) * m + (j + n)] = z.re;
                s[i * m + (j + n)] = -z.im;
                s[(i + n) * m + j] = z.im;
            }
        }
        let mut eig = jacobi_eigenvalues(&mut s, m);
        eig.sort_by(f64::total_cmp);
        Ok(eig.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
    }

    pub fn min_hermitian_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    /// Spectral condition number of a Hermitian positive definite matrix;
    /// infinite when the smallest eigenvalue is not positive.
    pub fn hermitian_condition(&self) -> Result<f64> {
        let eig = self.hermitian_eigenvalues()?;
        let lo = eig.first().copied().unwrap_or(0.0);
        let hi = eig.last().copied().unwrap_or(0.0);
        Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
    }

    /// Upper triangular `P` with positive diagonal and `P* P = A`.
    ///
    /// Fails with `NotPd` when a pivot (squared diagonal) is at or below
    /// `pivot_tol`.
    pub fn cholesky_upper(&self, pivot_tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch);
        }
        let n = self.rows;
        let mut p = Self::zeros(n, n);
        for j in 0..n {
            let mut diag = self[(j, j)].re;
            for k in 0..j {
                diag -= p[(k, j)].norm_sqr();
            }
            if !(diag > pivot_tol) {
                return Err(Error::NotPd { pivot: diag, index: j });
            }
            let pjj = diag.sqrt();
            p[(j, j)] = Complex64::new(pjj, 0.0);
            for i in (j + 1)..n {
                let mut acc = self[(j, i)];
                for k in 0..j {
                    acc -= p[(k, j)].conj() * p[(k, i)];
                }
                p[(j, i)] = acc / pjj;
            }
        }
        Ok(p)
    }
}

fn lu_solve(lu: &CMatrix, perm: &[usize], b: &[Complex64]) -> Vec<Complex64> {
    let n = lu.rows;
    let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for k in 0..i {
            let t = lu[(i, k)] * x[k];
            x[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = lu[(i, k)] * x[k];
            x[i] -= t;
        }
        x[i] /= lu[(i, i)];
    }
    x
}

/// Cyclic Jacobi on a real symmetric row-major `m x m` matrix (destroyed).
fn jacobi_eigenvalues(s: &mut [f64], m: usize) -> Vec<f64> {
    let total: f64 = s.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i * m + j] * s[i * m + j])
            .sum();
        if off <= 1e-34 * total || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = s[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let akp = s[k * m + p];
                    let akq = s[k * m + q];
                    s[k * m + p] = c * akp - sn * akq;
                    s[k * m + q] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let apk = s[p * m + k];
                    let aqk = s[q * m + k];
                    s[p * m + k] = c * apk - sn * aqk;
                    s[q * m + k] = sn * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| s[i * m + i]).collect()
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        CMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}
