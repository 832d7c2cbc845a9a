//! Complex-coefficient polynomials.
//!
//! Coefficients are stored in ascending order (`coeffs[k]` multiplies `z^k`).
//! Root finding uses Aberth–Ehrlich simultaneous iteration followed by a
//! guarded Newton polish; roots closer than the cluster threshold are merged
//! into a multiplicity cluster at their mean.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Default residual tolerance for root refinement.
pub const ROOT_TOL: f64 = 1e-11;
/// Default tolerance for exact (synthetic) division.
pub const DIVISIBILITY_TOL: f64 = 1e-9;
/// Roots closer than this are reported as one multiplicity cluster.
pub const CLUSTER_TOL: f64 = 1e-6;

const ABERTH_MAX_ITER: usize = 500;
const NEWTON_POLISH_ITER: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

/// All roots of a polynomial, with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `max |p(r)|` over the returned roots.
    pub residual: f64,
}

impl ComplexPolynomial {
    /// Builds a polynomial from ascending coefficients; exact trailing zeros
    /// are dropped so the leading coefficient is nonzero.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `lead * prod (z - r)`
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = &p * &Self::new(vec![-r, Complex64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_else(Complex64::zero)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// Horner evaluation of `p(z)` and `p'(z)` in one pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = Complex64::zero();
        let mut deriv = Complex64::zero();
        for &c in self.coeffs.iter().rev() {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        (value, deriv)
    }

    /// `sum |c_k| |z|^k`, the natural scale for rounding error in `p(z)`.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Polynomial whose coefficients are the conjugates of these, i.e. the
    /// function `z -> conj(p(conj z))`.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading();
        if lead.is_zero() {
            return Err(Error::InvalidPolynomial);
        }
        Ok(self.scale(lead.inv()))
    }

    /// Largest coefficient-wise difference.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Exact division by `(z - r)`.
    ///
    /// Fails with `NotDivisible` when `|p(r)|` exceeds `tol` times the
    /// evaluation scale `sum |c_k| |r|^k`.
    pub fn synth_divide(&self, r: Complex64, tol: f64) -> Result<Self> {
        let n = self.coeffs.len();
        if n < 2 {
            return Err(Error::InvalidPolynomial);
        }
        let mut quotient = vec![Complex64::zero(); n - 1];
        let mut carry = Complex64::zero();
        for k in (1..n).rev() {
            carry = carry * r + self.coeffs[k];
            quotient[k - 1] = carry;
        }
        let remainder = carry * r + self.coeffs[0];
        let scale = self.abs_scale(r).max(f64::MIN_POSITIVE);
        if remainder.norm() > tol * scale {
            return Err(Error::NotDivisible {
                remainder: remainder.norm(),
            });
        }
        Ok(Self::new(quotient))
    }

    /// First `terms` Taylor coefficients at 0 of `self / den`, by long
    /// division of power series. `den(0)` must be nonzero.
    pub fn series_div(&self, den: &Self, terms: usize) -> Result<Vec<Complex64>> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Singular);
        }
        let dlen = den.coeffs.len();
        let mut out: Vec<Complex64> = Vec::with_capacity(terms);
        for m in 0..terms {
            let mut acc = self.coeff(m);
            for i in 1..dlen.min(m + 1) {
                acc -= den.coeffs[i] * out[m - i];
            }
            out.push(acc / d0);
        }
        Ok(out)
    }

    /// All roots with multiplicity, ordered by (modulus, argument).
    pub fn roots(&self, tol: f64) -> Result<RootSet> {
        let degree = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidPolynomial),
        };
        let monic = self.monic()?;
        let mut roots = if degree == 1 {
            vec![-monic.coeffs[0]]
        } else {
            let mut z = aberth_seeds(&monic);
            aberth(&monic, &mut z);
            for r in z.iter_mut() {
                *r = newton_polish(&monic, *r);
            }
            z
        };
        merge_clusters(&mut roots, CLUSTER_TOL);
        polish_clusters(&monic, &mut roots);

        let mut residual: f64 = 0.0;
        for &r in &roots {
            let v = self.eval(r).norm();
            residual = residual.max(v);
            if v > tol * self.abs_scale(r).max(1.0) {
                return Err(Error::NonConvergence {
                    residual: v,
                    iterations: ABERTH_MAX_ITER,
                });
            }
        }
        sort_roots(&mut roots);
        Ok(RootSet { roots, residual })
    }
}

fn aberth_seeds(monic: &ComplexPolynomial) -> Vec<Complex64> {
    let n = monic.degree().unwrap_or(0);
    let radius = 1.0
        + monic.coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn aberth(p: &ComplexPolynomial, z: &mut [Complex64]) {
    let n = z.len();
    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (value, deriv) = p.eval_with_derivative(z[k]);
            if value.is_zero() {
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.is_zero() {
                        Complex64::zero()
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = if deriv.is_zero() {
                // stationary point: nudge off it
                Complex64::new(1e-8 * (1.0 + z[k].norm()), 1e-8)
            } else {
                let ratio = value / deriv;
                ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion)
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-16 {
            break;
        }
    }
}

fn newton_polish(p: &ComplexPolynomial, mut r: Complex64) -> Complex64 {
    let mut best = p.eval(r).norm();
    for _ in 0..NEWTON_POLISH_ITER {
        let (value, deriv) = p.eval_with_derivative(r);
        if deriv.is_zero() || value.is_zero() {
            break;
        }
        let candidate = r - value / deriv;
        let v = p.eval(candidate).norm();
        if !(v < best) {
            break;
        }
        best = v;
        r = candidate;
    }
    r
}

/// Replace every group of roots within `tol` of each other (transitively)
/// by copies of the group mean.
fn merge_clusters(roots: &mut [Complex64], tol: f64) {
    let n = roots.len();
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < tol {
                let (gi, gj) = (group[i], group[j]);
                if gi != gj {
                    for g in group.iter_mut() {
                        if *g == gj {
                            *g = gi;
                        }
                    }
                }
            }
        }
    }
    let original: Vec<Complex64> = roots.to_vec();
    for i in 0..n {
        let members: Vec<usize> = (0..n).filter(|&j| group[j] == group[i]).collect();
        if members.len() > 1 {
            let sum: Complex64 = members.iter().map(|&j| original[j]).sum();
            roots[i] = sum / members.len() as f64;
        }
    }
}

/// A cluster of multiplicity `m` is a simple root of `p^{(m-1)}`; Newton
/// on that derivative recovers full accuracy for the merged mean.
fn polish_clusters(p: &ComplexPolynomial, roots: &mut [Complex64]) {
    let n = roots.len();
    let mut done = alloc::vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| roots[j] == roots[i]).collect();
        for &j in &members {
            done[j] = true;
        }
        if members.len() < 2 {
            continue;
        }
        let mut deriv = p.clone();
        for _ in 0..members.len() - 1 {
            deriv = deriv.derivative();
        }
        let refined = newton_polish(&deriv, roots[i]);
        for &j in &members {
            roots[j] = refined;
        }
    }
}

/// Order by modulus (quantized to 1e-9 relative so that numerically equal
/// moduli compare equal), then by argument.
pub(crate) fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        let ka = quantize(a.norm());
        let kb = quantize(b.norm());
        ka.cmp(&kb).then(a.arg().total_cmp(&b.arg()))
    });
}

fn quantize(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn neg(self) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![Complex64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}
