//! Identification of `D(mu)` with a de Branges–Rovnyak space `H(B)`.
//!
//! With `Q(z, wbar) = q(z) conj q(w) (1 - (1 - z wbar) K(z, w))` the
//! coefficient matrix of `Q` has a vanishing first row and column; deleting
//! them leaves the Hermitian PSD matrix `A` (entry `(i, j)` multiplies
//! `z^{i+1} wbar^{j+1}`). Factoring `A` gives `B = (p_1, ..., p_n) / q`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::complexpoly::ComplexPolynomial;
use crate::dirichlet::{closed_delta, GramData, OuterFunction};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rieszfejer::Factorization;
use crate::Tolerances;

/// How `A` is split into `P* P` and how confluent Taylor rows are formed.
///
/// `sum_j p_j(z) conj p_j(w)` built from rows of `P` has coefficient matrix
/// `conj(P* P)`. `KernelConsistent` therefore factors `conj(A)`, which makes
/// `(1 - B(z) B(w)*) / (1 - z wbar)` reproduce the kernel, and uses the exact
/// Taylor coefficients of `p_j / (z - alpha)^2`. `Literal` factors `A` itself
/// and uses the shortcut rows `(p_{j,1} + p_j(alpha) m / alpha^2) / alpha^{m+1}`.
/// The two agree when `A` is real.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    #[default]
    KernelConsistent,
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AMatrixMode {
    /// Bivariate expansion; any number of atoms and weights.
    Generic,
    /// Closed entries for two atoms `{1, xi}` with unit weights.
    ClosedForm,
}

/// `A` from the bivariate expansion.
///
/// Fails with `ResidualNonPolynomial` if the `z^0` row or `wbar^0` column
/// does not vanish, and `NotPsd` if `A` has an eigenvalue below `-tol.identity`.
pub fn a_matrix_generic(outer: &OuterFunction, gram: &GramData, tol: &Tolerances) -> Result<CMatrix> {
    let n = outer.zetas.len();
    let dim = n + 1;
    let mut q_coef = CMatrix::zeros(dim, dim);
    let qbar = outer.q.conj_coeffs();
    let pbar = outer.p.conj_coeffs();
    for i in 0..dim {
        for j in 0..dim {
            q_coef[(i, j)] = outer.q.coeff(i) * qbar.coeff(j) - outer.p.coeff(i) * pbar.coeff(j);
        }
    }
    // (1 - z wbar) sum conj(B_ji) r_j(z) conj r_i(w) / (O'_j conj O'_i)
    let mut s = CMatrix::zeros(n, n);
    for jj in 0..n {
        for ii in 0..n {
            let weight = gram.b[(jj, ii)].conj() / (gram.o_prime[jj] * gram.o_prime[ii].conj());
            let rj = &gram.r[jj];
            let ri_bar = gram.r[ii].conj_coeffs();
            for a in 0..n {
                for b in 0..n {
                    s[(a, b)] += weight * rj.coeff(a) * ri_bar.coeff(b);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            q_coef[(a, b)] -= s[(a, b)];
            q_coef[(a + 1, b + 1)] += s[(a, b)];
        }
    }
    let scale = q_coef.frobenius_norm().max(1.0);
    let mut edge: f64 = 0.0;
    for k in 0..dim {
        edge = edge.max(q_coef[(0, k)].norm()).max(q_coef[(k, 0)].norm());
    }
    if edge > 1e-10 * scale {
        return Err(Error::ResidualNonPolynomial { residual: edge });
    }
    let a = CMatrix::from_fn(n, n, |i, j| q_coef[(i + 1, j + 1)]);
    check_psd(&a, tol)?;
    Ok(a)
}

/// Closed entries
/// `a11 = (a^2 - b)|1 + xi|^2 + 2b/Delta`, `a12 = -b(1 + xi)`,
/// `a22 = 1 - 3b + 2ab - b/Delta`.
pub fn a_matrix_closed(fact: &Factorization, tol: &Tolerances) -> Result<CMatrix> {
    let report = fact
        .two_point
        .filter(|r| r.unit_weights)
        .ok_or(Error::UnsupportedMeasure("closed-form A needs two atoms with unit weights"))?;
    let zetas = fact.measure.zetas();
    if zetas[0] != Complex64::new(1.0, 0.0) {
        return Err(Error::UnsupportedMeasure("closed-form A needs the first atom at 1"));
    }
    let xi = zetas[1];
    let (a, b) = (report.a, report.b);
    let delta = closed_delta(a, xi.re);
    let one = Complex64::new(1.0, 0.0);
    let a11 = (a * a - b) * (one + xi).norm_sqr() + 2.0 * b / delta;
    let a12 = -(one + xi) * b;
    let a22 = 1.0 - 3.0 * b + 2.0 * a * b - b / delta;
    let m = CMatrix::from_rows(&[
        vec![Complex64::new(a11, 0.0), a12],
        vec![a12.conj(), Complex64::new(a22, 0.0)],
    ]);
    check_psd(&m, tol)?;
    Ok(m)
}

fn check_psd(a: &CMatrix, tol: &Tolerances) -> Result<()> {
    let min_eigenvalue = a.min_hermitian_eigenvalue()?;
    if min_eigenvalue < -tol.identity {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(())
}

/// Upper triangular `P` with `P* P = A`.
pub fn cholesky_p(a: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    a.cholesky_upper(tol.pivot)
}

/// `p_j(z) = sum_k P_{jk} z^{k+1}`: row `j` of `P` at powers `1..=n`.
pub fn p_polynomials(p: &CMatrix) -> Vec<ComplexPolynomial> {
    (0..p.rows())
        .map(|j| {
            let mut coeffs = vec![Complex64::zero()];
            coeffs.extend_from_slice(p.row(j));
            ComplexPolynomial::new(coeffs)
        })
        .collect()
}

/// Taylor rows `B_m = (b_{1,m}, ..., b_{n,m})` for `m = 1..=m_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorRows {
    rows: Vec<Vec<Complex64>>,
    /// Largest deviation from long division of `p_j / q`.
    pub long_division_gap: f64,
}

impl TaylorRows {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        Self {
            rows,
            long_division_gap: 0.0,
        }
    }

    /// Deepest available `m`.
    pub fn m_max(&self) -> usize {
        self.rows.len()
    }

    /// `B_m`, `m >= 1`.
    pub fn row(&self, m: usize) -> &[Complex64] {
        &self.rows[m - 1]
    }

    /// `B_m . B_n^*`
    pub fn inner(&self, m: usize, n: usize) -> Complex64 {
        self.row(m)
            .iter()
            .zip(self.row(n))
            .map(|(a, b)| a * b.conj())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeBrangesData {
    pub a: CMatrix,
    /// Factor actually used for the `p_j` (see [`Convention`]).
    pub p: CMatrix,
    pub p_polys: Vec<ComplexPolynomial>,
    pub q: ComplexPolynomial,
    pub alphas: Vec<Complex64>,
    pub convention: Convention,
    /// All poles coincide (double pole for two atoms).
    pub confluent: bool,
}

impl DeBrangesData {
    pub fn build(
        fact: &Factorization,
        outer: &OuterFunction,
        gram: &GramData,
        mode: AMatrixMode,
        convention: Convention,
        tol: &Tolerances,
    ) -> Result<Self> {
        let a = match mode {
            AMatrixMode::Generic => a_matrix_generic(outer, gram, tol)?,
            AMatrixMode::ClosedForm => a_matrix_closed(fact, tol)?,
        };
        let p = match convention {
            Convention::KernelConsistent => cholesky_p(&a.conj(), tol)?,
            Convention::Literal => cholesky_p(&a, tol)?,
        };
        let p_polys = p_polynomials(&p);
        let confluent = fact.alphas.len() == 2 && fact.alphas[0] == fact.alphas[1];
        Ok(Self {
            a,
            p,
            p_polys,
            q: fact.q.clone(),
            alphas: fact.alphas.clone(),
            convention,
            confluent,
        })
    }

    /// `sum_j p_j(z) conj p_j(w) / (q(z) conj q(w)) = B(z) B(w)^*`.
    pub fn schur_product(&self, z: Complex64, w: Complex64) -> Complex64 {
        let num: Complex64 = self
            .p_polys
            .iter()
            .map(|pj| pj.eval(z) * pj.eval(w).conj())
            .sum();
        num / (self.q.eval(z) * self.q.eval(w).conj())
    }

    /// `sup sum_j |b_j(z)|^2` over `samples` points of the circle of radius `radius`.
    pub fn schur_sup(&self, radius: f64, samples: usize) -> f64 {
        (0..samples)
            .map(|s| {
                let z = Complex64::from_polar(radius, 2.0 * PI * s as f64 / samples as f64);
                self.schur_product(z, z).re
            })
            .fold(0.0, f64::max)
    }

    /// Taylor coefficients of `p_j / q` for `m = 1..=m_max` by long division.
    pub fn long_division_rows(&self, m_max: usize) -> Result<TaylorRows> {
        let series = self
            .p_polys
            .iter()
            .map(|pj| pj.series_div(&self.q, m_max + 1))
            .collect::<Result<Vec<_>>>()?;
        let rows = (1..=m_max).map(|m| series.iter().map(|s| s[m]).collect()).collect();
        Ok(TaylorRows::from_rows(rows))
    }

    /// Closed-form Taylor rows: partial fractions for distinct poles, the
    /// double-pole expansion when confluent (shortcut form under
    /// `Convention::Literal`). `long_division_gap` records the deviation
    /// from plain series division.
    pub fn taylor_rows(&self, m_max: usize) -> Result<TaylorRows> {
        let mut rows = if self.confluent {
            let alpha = self.alphas[0];
            match self.convention {
                Convention::KernelConsistent => confluent_rows(&self.p_polys, alpha, m_max),
                Convention::Literal => confluent_rows_literal(&self.p_polys, alpha, m_max),
            }
        } else {
            distinct_rows(&self.p_polys, &self.alphas, m_max)?
        };
        let oracle = self.long_division_rows(m_max)?;
        let mut gap: f64 = 0.0;
        for m in 1..=m_max {
            for (x, y) in rows.row(m).iter().zip(oracle.row(m)) {
                gap = gap.max((x - y).norm());
            }
        }
        rows.long_division_gap = gap;
        Ok(rows)
    }
}

/// `a_r = prod_{t != r} (alpha_r - alpha_t)`; fails on coincident poles.
pub fn partial_fraction_denominators(alphas: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(alphas.len());
    for (r, &ar) in alphas.iter().enumerate() {
        let mut prod = Complex64::new(1.0, 0.0);
        for (t, &at) in alphas.iter().enumerate() {
            if t != r {
                prod *= ar - at;
            }
        }
        if prod.is_zero() {
            return Err(Error::ConfluentPoles { separation: 0.0 });
        }
        out.push(prod);
    }
    Ok(out)
}

/// `b_{j,m} = -sum_r p_j(alpha_r) / (a_r alpha_r^{m+1})`.
pub fn distinct_rows(p_polys: &[ComplexPolynomial], alphas: &[Complex64], m_max: usize) -> Result<TaylorRows> {
    let denoms = partial_fraction_denominators(alphas)?;
    let residues: Vec<Vec<Complex64>> = p_polys
        .iter()
        .map(|pj| alphas.iter().zip(&denoms).map(|(&al, &ar)| pj.eval(al) / ar).collect())
        .collect();
    let rows = (1..=m_max)
        .map(|m| {
            residues
                .iter()
                .map(|res| {
                    -res.iter()
                        .zip(alphas)
                        .map(|(c, al)| c / al.powu(m as u32 + 1))
                        .sum::<Complex64>()
                })
                .collect()
        })
        .collect();
    Ok(TaylorRows::from_rows(rows))
}

/// Double pole: `b_{j,m} = (p_j(alpha)(m+1)/alpha - p_j'(alpha)) / alpha^{m+1}`.
pub fn confluent_rows(p_polys: &[ComplexPolynomial], alpha: Complex64, m_max: usize) -> TaylorRows {
    let vals: Vec<(Complex64, Complex64)> = p_polys.iter().map(|pj| pj.eval_with_derivative(alpha)).collect();
    let rows = (1..=m_max)
        .map(|m| {
            let scale = alpha.powu(m as u32 + 1);
            vals.iter()
                .map(|&(v, d)| (v * (m as f64 + 1.0) / alpha - d) / scale)
                .collect()
        })
        .collect();
    TaylorRows::from_rows(rows)
}

/// Shortcut rows `(p_{j,1} + p_j(alpha) m / alpha^2) / alpha^{m+1}`, where
/// `p_{j,1}` is the `z` coefficient of `p_j`. These are not the Taylor
/// coefficients of `p_j / (z - alpha)^2`; kept for `Convention::Literal`.
pub fn confluent_rows_literal(p_polys: &[ComplexPolynomial], alpha: Complex64, m_max: usize) -> TaylorRows {
    let vals: Vec<(Complex64, Complex64)> = p_polys.iter().map(|pj| (pj.coeff(1), pj.eval(alpha))).collect();
    let rows = (1..=m_max)
        .map(|m| {
            let scale = alpha.powu(m as u32 + 1);
            vals.iter()
                .map(|&(lin, v)| (lin + v * m as f64 / (alpha * alpha)) / scale)
                .collect()
        })
        .collect();
    TaylorRows::from_rows(rows)
}
