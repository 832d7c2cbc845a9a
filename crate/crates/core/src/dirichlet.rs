//! Outer function, Gram matrix of the boundary functionals and the
//! reproducing kernel of `D(mu)`.

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::complexpoly::ComplexPolynomial;
use crate::debranges::DeBrangesData;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rieszfejer::Factorization;
use crate::Tolerances;

/// `O = p / q` with `p = (phase / sqrt d) prod (z - zeta_j)`, normalized so
/// that `O(0) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OuterFunction {
    pub p: ComplexPolynomial,
    pub q: ComplexPolynomial,
    pub phase: Complex64,
    pub zetas: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl OuterFunction {
    pub fn new(fact: &Factorization) -> Self {
        let zetas = fact.measure.zetas();
        let one = Complex64::new(1.0, 0.0);
        let raw = ComplexPolynomial::from_roots(one / fact.d.sqrt(), &zetas);
        let u = raw.coeff(0) / fact.q.coeff(0);
        let phase = u.conj() / u.norm();
        Self {
            p: raw.scale(phase),
            q: fact.q.clone(),
            phase,
            zetas,
            weights: fact.measure.weights(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.p.eval(z) / self.q.eval(z)
    }

    pub fn at_zero(&self) -> Complex64 {
        self.p.coeff(0) / self.q.coeff(0)
    }

    /// `O'(zeta_j) = p'(zeta_j) / q(zeta_j)` since `p(zeta_j) = 0`.
    pub fn derivative_at_atom(&self, j: usize) -> Complex64 {
        let zeta = self.zetas[j];
        self.p.eval_with_derivative(zeta).1 / self.q.eval(zeta)
    }
}

/// Gram matrix `C_ij = <f_i, f_j>` of `f_j = O / (O'(zeta_j) (z - zeta_j))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramData {
    pub c: CMatrix,
    /// `C^{-1}`
    pub b: CMatrix,
    /// `det C` (real for Hermitian `C`).
    pub delta: f64,
    /// Closed-form `Delta` for two atoms with unit weights.
    pub delta_closed: Option<f64>,
    pub condition: f64,
    /// `r_j = p / (z - zeta_j)`, so `f_j = r_j / (O'(zeta_j) q)`.
    pub r: Vec<ComplexPolynomial>,
    /// `O'(zeta_j)`
    pub o_prime: Vec<Complex64>,
}

impl GramData {
    pub fn new(outer: &OuterFunction, tol: &Tolerances) -> Result<Self> {
        let n = outer.zetas.len();
        let r = outer
            .zetas
            .iter()
            .map(|&zeta| outer.p.synth_divide(zeta, tol.divisibility))
            .collect::<Result<Vec<_>>>()?;
        let o_prime: Vec<Complex64> = (0..n).map(|j| outer.derivative_at_atom(j)).collect();
        let zetas = &outer.zetas;
        let c = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                // f_i' = (r_i' q - r_i q') / (O'_i q^2)
                let z = zetas[i];
                let (rv, rd) = r[i].eval_with_derivative(z);
                let (qv, qd) = outer.q.eval_with_derivative(z);
                let fprime = (rd * qv - rv * qd) / (o_prime[i] * qv * qv);
                z * fprime * outer.weights[i]
            } else {
                (o_prime[i] * o_prime[j].conj() * (Complex64::new(1.0, 0.0) - zetas[i] * zetas[j].conj())).inv()
            }
        });
        let condition = c.hermitian_condition()?;
        if !(condition <= tol.gram_condition) {
            return Err(Error::SingularGram { condition });
        }
        let b = c.inverse()?;
        let delta = c.det()?.re;
        let delta_closed = if n == 2 && outer.weights.iter().all(|&w| w == 1.0) {
            let cos_theta = (zetas[1] / zetas[0]).re;
            let prod = outer.q.coeff(0).norm();
            let a = 3.0 * prod / (prod + 1.0);
            Some(closed_delta(a, cos_theta))
        } else {
            None
        };
        Ok(Self {
            c,
            b,
            delta,
            delta_closed,
            condition,
            r,
            o_prime,
        })
    }

    /// `f_j(z)` for every atom.
    pub fn f_values(&self, outer: &OuterFunction, z: Complex64) -> Vec<Complex64> {
        let qz = outer.q.eval(z);
        self.r
            .iter()
            .zip(&self.o_prime)
            .map(|(r, op)| r.eval(z) / (op * qz))
            .collect()
    }
}

/// `Delta = (a - 3)(1 + c)/(1 - c) + 3/(a (1 - c))`.
pub fn closed_delta(a: f64, cos_theta: f64) -> f64 {
    (a - 3.0) * (1.0 + cos_theta) / (1.0 - cos_theta) + 3.0 / (a * (1.0 - cos_theta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMethod {
    /// `O(z) conj O(w) / (1 - z conj w) + sum f_j(z) conj((C^{-1} f(w))_j)`.
    Costara,
    /// The displayed two-point formula, taken literally.
    ClosedTwoPoint,
    /// `(1 - sum p_j(z) conj p_j(w) / (q(z) conj q(w))) / (1 - z conj w)`.
    DeBranges,
}

impl KernelMethod {
    pub const ALL: [KernelMethod; 3] = [KernelMethod::Costara, KernelMethod::ClosedTwoPoint, KernelMethod::DeBranges];

    pub fn name(&self) -> &'static str {
        match self {
            KernelMethod::Costara => "costara",
            KernelMethod::ClosedTwoPoint => "closed_two_point",
            KernelMethod::DeBranges => "debranges",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct ClosedConstants {
    a: f64,
    b: f64,
    delta: f64,
    xi: Complex64,
}

/// Reproducing kernel of `D(mu)` with every available route.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub outer: OuterFunction,
    pub gram: GramData,
    pub debranges: Option<DeBrangesData>,
    closed: Option<ClosedConstants>,
}

impl Kernel {
    pub fn new(fact: &Factorization, outer: OuterFunction, gram: GramData, debranges: Option<DeBrangesData>) -> Self {
        let closed = match (fact.two_point, gram.delta_closed) {
            (Some(report), Some(delta)) if report.unit_weights && outer.zetas[0] == Complex64::new(1.0, 0.0) => {
                Some(ClosedConstants {
                    a: report.a,
                    b: report.b,
                    delta,
                    xi: outer.zetas[1],
                })
            }
            _ => None,
        };
        Self {
            outer,
            gram,
            debranges,
            closed,
        }
    }

    pub fn supports(&self, method: KernelMethod) -> bool {
        match method {
            KernelMethod::Costara => true,
            KernelMethod::ClosedTwoPoint => self.closed.is_some(),
            KernelMethod::DeBranges => self.debranges.is_some(),
        }
    }

    pub fn eval(&self, z: Complex64, w: Complex64, method: KernelMethod) -> Result<Complex64> {
        if !(z.norm() < 1.0 && w.norm() < 1.0) {
            return Err(Error::OutsideDomain);
        }
        let one = Complex64::new(1.0, 0.0);
        let denom = one - z * w.conj();
        match method {
            KernelMethod::Costara => {
                let fz = self.gram.f_values(&self.outer, z);
                let fw = self.gram.f_values(&self.outer, w);
                let g = self.gram.c.solve(&fw)?;
                let tail: Complex64 = fz.iter().zip(&g).map(|(a, b)| a * b.conj()).sum();
                Ok(self.outer.eval(z) * self.outer.eval(w).conj() / denom + tail)
            }
            KernelMethod::ClosedTwoPoint => {
                let k = self
                    .closed
                    .ok_or(Error::UnsupportedMeasure("closed two-point kernel needs atoms {1, xi} with unit weights"))?;
                let lb = w.conj();
                let xb = k.xi.conj();
                let xi = k.xi;
                let bracket = (z - one) * (z - xi) * (lb - one) * (lb - xb) / (one - lb * z)
                    + ((z - xi) * (lb - xb) + (z - one) * (lb - one)) * (k.a - 1.0)
                    + (z - xi) * (lb - one) / ((xb - one) * k.delta)
                    + (z - one) * (lb - xb) / ((xb - one) * k.delta);
                let q = &self.outer.q;
                Ok(bracket * k.b / (q.eval(w).conj() * q.eval(z)))
            }
            KernelMethod::DeBranges => {
                let db = self
                    .debranges
                    .as_ref()
                    .ok_or(Error::UnsupportedMeasure("de Branges data not built"))?;
                Ok((one - db.schur_product(z, w)) / denom)
            }
        }
    }

    /// `[K(z_i, z_j)]`
    pub fn matrix(&self, points: &[Complex64], method: KernelMethod) -> Result<CMatrix> {
        let n = points.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.eval(points[i], points[j], method)?;
            }
        }
        Ok(m)
    }
}
