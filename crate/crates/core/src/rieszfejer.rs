//! Boundary polynomial and its Riesz–Fejér factorization.
//!
//! For atoms `zeta_j` with weights `c_j` the trigonometric polynomial
//!
//! ```text
//! L(z) = prod |z - zeta_j|^2 + sum_j c_j prod_{i != j} |z - zeta_i|^2,   |z| = 1
//! ```
//!
//! is positive on the circle, so `L = d |q|^2` with `q = prod (z - alpha_j)`
//! and every `|alpha_j| > 1`.

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::complexpoly::{sort_roots, ComplexPolynomial};
use crate::error::{Error, Result};
use crate::Tolerances;

/// Number of circle samples for the boundary identity check.
pub const IDENTITY_SAMPLES: usize = 256;

/// Two atoms at `1` and `xi = e^{i theta}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPointMeasure {
    theta: f64,
    c1: f64,
    c2: f64,
}

impl TwoPointMeasure {
    /// `theta` must lie in `(0, pi]`, weights must be positive and finite.
    pub fn new(theta: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI) {
            return Err(Error::InvalidMeasure("theta must lie in (0, pi]"));
        }
        if !(c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidMeasure("weights must be positive and finite"));
        }
        Ok(Self { theta, c1, c2 })
    }

    pub fn unit(theta: f64) -> Result<Self> {
        Self::new(theta, 1.0, 1.0)
    }

    /// Uses `theta = arccos(cos_theta)`; `cos_theta` must lie in `[-1, 1)`.
    pub fn from_cos(cos_theta: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(-1.0..1.0).contains(&cos_theta) {
            return Err(Error::InvalidMeasure("cos theta must lie in [-1, 1)"));
        }
        Self::new(cos_theta.acos(), c1, c2)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    pub fn unit_weights(&self) -> bool {
        self.c1 == 1.0 && self.c2 == 1.0
    }

    pub fn to_general(&self) -> GeneralMeasure {
        GeneralMeasure {
            atoms: vec![(0.0, self.c1), (self.theta, self.c2)],
        }
    }
}

/// Finitely many atoms `(angle, weight)` on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralMeasure {
    atoms: Vec<(f64, f64)>,
}

impl GeneralMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("at least one atom required"));
        }
        for &(angle, weight) in &atoms {
            if !angle.is_finite() {
                return Err(Error::InvalidMeasure("atom angles must be finite"));
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::InvalidMeasure("weights must be positive and finite"));
            }
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                let zi = Complex64::from_polar(1.0, atoms[i].0);
                let zj = Complex64::from_polar(1.0, atoms[j].0);
                if (zi - zj).norm() < 1e-12 {
                    return Err(Error::InvalidMeasure("atoms must be distinct modulo 2 pi"));
                }
            }
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn zetas(&self) -> Vec<Complex64> {
        self.atoms
            .iter()
            .map(|&(a, _)| Complex64::from_polar(1.0, a))
            .collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|&(_, w)| w).collect()
    }

    /// `L(z)` for `|z| = 1`, evaluated directly.
    pub fn boundary_lhs(&self, z: Complex64) -> f64 {
        let zetas = self.zetas();
        let dist: Vec<f64> = zetas.iter().map(|zeta| (z - zeta).norm_sqr()).collect();
        let mut total: f64 = dist.iter().product();
        for (j, &(_, c)) in self.atoms.iter().enumerate() {
            let rest: f64 = dist
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, d)| d)
                .product();
            total += c * rest;
        }
        total
    }

    /// Laurent coefficients of `L`, ascending from `z^{-n}` to `z^n`.
    pub fn laurent(&self) -> Vec<Complex64> {
        let n = self.atoms.len();
        let zetas = self.zetas();
        let factor = |zeta: Complex64| vec![-zeta, Complex64::new(2.0, 0.0), -zeta.conj()];
        let mut total = vec![Complex64::new(1.0, 0.0)];
        for &zeta in &zetas {
            total = convolve(&total, &factor(zeta));
        }
        for (j, &(_, c)) in self.atoms.iter().enumerate() {
            let mut term = vec![Complex64::new(c, 0.0)];
            for (i, &zeta) in zetas.iter().enumerate() {
                if i != j {
                    term = convolve(&term, &factor(zeta));
                }
            }
            // term spans z^{-(n-1)}..z^{n-1}
            for (k, t) in term.iter().enumerate() {
                total[k + 1] += t;
            }
        }
        debug_assert_eq!(total.len(), 2 * n + 1);
        total
    }

    /// Sample point on the circle farthest (in angle) from every atom.
    fn gap_midpoint(&self) -> Complex64 {
        let mut angles: Vec<f64> = self.atoms.iter().map(|&(a, _)| num_traits::Euclid::rem_euclid(&a, &(2.0 * PI))).collect();
        angles.sort_by(f64::total_cmp);
        let mut best = (0.0, 0.0);
        for i in 0..angles.len() {
            let start = angles[i];
            let end = if i + 1 < angles.len() {
                angles[i + 1]
            } else {
                angles[0] + 2.0 * PI
            };
            if end - start > best.0 {
                best = (end - start, start + 0.5 * (end - start));
            }
        }
        Complex64::from_polar(1.0, best.1)
    }
}

fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The monic degree-`2n` polynomial `f` with `L(z) = (lead / z^n) f(z)` on
/// the circle, where `lead = prod(-conj zeta_j)`.
pub fn build_f(measure: &GeneralMeasure) -> ComplexPolynomial {
    let laurent = measure.laurent();
    let lead = *laurent.last().expect("nonempty");
    ComplexPolynomial::new(laurent.iter().map(|c| c / lead).collect())
}

/// `g(x) = x^4 - (6 + 2c) x^3 + (4 + 14c) x^2 - (6 + 2c) x + 1`; for unit
/// weights `b = |alpha_1 alpha_2|` is a root.
pub fn g_polynomial(cos_theta: f64) -> ComplexPolynomial {
    let c = cos_theta;
    ComplexPolynomial::from_real(&[1.0, -(6.0 + 2.0 * c), 4.0 + 14.0 * c, -(6.0 + 2.0 * c), 1.0])
}

/// Geometry of the two outside roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaseTag {
    /// Equal moduli, `alpha_2 = xi conj(alpha_1)`.
    Conjugate,
    /// Same argument, `alpha_2 = k alpha_1` with `k > 1`.
    Collinear { k: f64 },
    /// Double root.
    Confluent,
}

impl CaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::Conjugate => "Conjugate",
            CaseTag::Collinear { .. } => "Collinear",
            CaseTag::Confluent => "Confluent",
        }
    }
}

/// Diagnostics for a two-atom factorization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseReport {
    pub case: CaseTag,
    /// `|alpha_1 alpha_2|`
    pub b: f64,
    /// `3b / (b + 1)`
    pub a: f64,
    pub g_residual: f64,
    /// `|alpha_1 alpha_2 - b xi|`
    pub product_residual: f64,
    /// `|alpha_1 + alpha_2 - a (1 + xi)|`
    pub sum_residual: f64,
    /// Conjugate: `|alpha_2 - xi conj alpha_1|`; Collinear: largest
    /// `|Im(alpha_j / (1 + xi))| / |alpha_j / (1 + xi)|`; Confluent: `|alpha_1 - alpha_2|`.
    pub relation_residual: f64,
    /// `b > 5` iff `cos theta < 0.6` (and `b < 5` iff `cos theta > 0.6`).
    pub bound_ok: bool,
    /// Only meaningful for unit weights.
    pub unit_weights: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub measure: GeneralMeasure,
    /// The monic boundary polynomial.
    pub f: ComplexPolynomial,
    /// Roots of `f` outside the closed disk, ordered by (modulus, argument).
    pub alphas: Vec<Complex64>,
    /// Monic `q = prod (z - alpha_j)`.
    pub q: ComplexPolynomial,
    pub d: f64,
    /// Relative boundary identity residual over the circle samples.
    pub identity_residual: f64,
    /// Present when the measure has exactly two atoms.
    pub two_point: Option<CaseReport>,
}

impl Factorization {
    pub fn case(&self) -> Option<CaseTag> {
        self.two_point.map(|r| r.case)
    }

    pub fn b(&self) -> Option<f64> {
        self.two_point.map(|r| r.b)
    }

    pub fn a(&self) -> Option<f64> {
        self.two_point.map(|r| r.a)
    }

    pub fn is_confluent(&self) -> bool {
        matches!(self.case(), Some(CaseTag::Confluent))
    }
}

/// Factors `L = d |q|^2`.
pub fn factorize(measure: &GeneralMeasure, tol: &Tolerances) -> Result<Factorization> {
    let n = measure.len();
    let f = build_f(measure);
    let roots = f.roots(tol.root)?.roots;

    let mut alphas = Vec::with_capacity(n);
    let mut inside = Vec::with_capacity(n);
    for &r in &roots {
        let gap = r.norm() - 1.0;
        if gap.abs() <= tol.outside_margin {
            return Err(Error::DegenerateFactorization {
                detail: "root on the unit circle",
                value: gap.abs(),
            });
        }
        if gap > 0.0 {
            alphas.push(r);
        } else {
            inside.push(r);
        }
    }
    if alphas.len() != n {
        return Err(Error::DegenerateFactorization {
            detail: "outside root count differs from atom count",
            value: alphas.len() as f64,
        });
    }
    let pairing_tol = 1e-7;
    for &alpha in &alphas {
        let mirror = alpha.conj().inv();
        let miss = inside
            .iter()
            .map(|r| (r - mirror).norm())
            .fold(f64::INFINITY, f64::min);
        if miss > pairing_tol {
            return Err(Error::DegenerateFactorization {
                detail: "reciprocal root pairing failed",
                value: miss,
            });
        }
    }
    if n == 2 && (alphas[0] - alphas[1]).norm() < tol.confluence {
        let mean = (alphas[0] + alphas[1]) * 0.5;
        alphas = vec![mean, mean];
    }
    sort_roots(&mut alphas);

    let q = ComplexPolynomial::from_roots(Complex64::new(1.0, 0.0), &alphas);
    let z0 = measure.gap_midpoint();
    let d = measure.boundary_lhs(z0) / q.eval(z0).norm_sqr();

    let mut max_lhs: f64 = 0.0;
    let mut max_err: f64 = 0.0;
    for s in 0..IDENTITY_SAMPLES {
        let z = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / IDENTITY_SAMPLES as f64);
        let lhs = measure.boundary_lhs(z);
        max_lhs = max_lhs.max(lhs);
        max_err = max_err.max((lhs - d * q.eval(z).norm_sqr()).abs());
    }
    let identity_residual = max_err / (1.0 + max_lhs);
    if identity_residual > tol.identity {
        return Err(Error::IdentityResidual {
            residual: identity_residual,
        });
    }

    let mut fact = Factorization {
        measure: measure.clone(),
        f,
        alphas,
        q,
        d,
        identity_residual,
        two_point: None,
    };
    if n == 2 {
        fact.two_point = Some(classify(&fact, tol)?);
    }
    Ok(fact)
}

/// Factorization of a two-point measure with the trichotomy check applied
/// for unit weights.
pub fn factorize_two_point(measure: &TwoPointMeasure, tol: &Tolerances) -> Result<Factorization> {
    let fact = factorize(&measure.to_general(), tol)?;
    if measure.unit_weights() {
        two_point_diagnostics(&fact, measure.theta(), tol)?;
    }
    Ok(fact)
}

/// Geometric case of the two outside roots (no cos theta input).
fn classify(fact: &Factorization, tol: &Tolerances) -> Result<CaseReport> {
    let (a1, a2) = (fact.alphas[0], fact.alphas[1]);
    let zetas = fact.measure.zetas();
    let weights = fact.measure.weights();
    // rotate so that the first atom sits at 1
    let xi = zetas[1] / zetas[0];
    let cos_theta = xi.re;

    let b = (a1 * a2).norm();
    let a = 3.0 * b / (b + 1.0);
    let one = Complex64::new(1.0, 0.0);
    let separation = (a1 - a2).norm();
    let ratio = a2 / a1;

    let (case, relation_residual) = if separation < tol.confluence {
        (CaseTag::Confluent, separation)
    } else if ratio.arg().abs() < tol.ray && ratio.norm() > 1.0 {
        let on_ray = |alpha: Complex64| {
            let t = alpha / (one + xi);
            t.im.abs() / t.norm()
        };
        (CaseTag::Collinear { k: ratio.norm() }, on_ray(a1).max(on_ray(a2)))
    } else {
        (CaseTag::Conjugate, (a2 - xi * a1.conj()).norm())
    };

    let rot = zetas[0];
    let product_residual = (a1 * a2 / (rot * rot) - b * xi).norm();
    let sum_residual = ((a1 + a2) / rot - (one + xi) * a).norm();
    let g_residual = g_polynomial(cos_theta).eval(Complex64::new(b, 0.0)).norm();
    let bound_ok = if cos_theta < 0.6 {
        b > 5.0
    } else if cos_theta > 0.6 {
        b < 5.0
    } else {
        true
    };

    Ok(CaseReport {
        case,
        b,
        a,
        g_residual,
        product_residual,
        sum_residual,
        relation_residual,
        bound_ok,
        unit_weights: weights.iter().all(|&w| w == 1.0),
    })
}

/// Case report for a unit-weight two-point factorization, checked against
/// the cos theta trichotomy.
///
/// Near `cos theta = 0.6` the geometric gate decides; away from it
/// (beyond `1e-6`) geometry and cos theta must agree.
pub fn two_point_diagnostics(fact: &Factorization, theta: f64, tol: &Tolerances) -> Result<CaseReport> {
    let report = fact
        .two_point
        .ok_or(Error::UnsupportedMeasure("two atoms required"))?;
    if !report.unit_weights {
        return Err(Error::UnsupportedMeasure("unit weights required"));
    }
    let cos_theta = theta.cos();
    let margin = 1e-6;
    let expected = if cos_theta < 0.6 - margin {
        Some("Conjugate")
    } else if cos_theta > 0.6 + margin {
        Some("Collinear")
    } else {
        None
    };
    if let Some(name) = expected {
        if report.case.name() != name {
            return Err(Error::CaseMismatch {
                cos_theta,
                detail: "outside-root geometry contradicts the cos theta trichotomy",
            });
        }
        if !report.bound_ok {
            return Err(Error::CaseMismatch {
                cos_theta,
                detail: "b is on the wrong side of 5",
            });
        }
    }
    let structural = tol.identity * 1e3;
    if report.product_residual > structural || report.sum_residual > structural {
        return Err(Error::CaseMismatch {
            cos_theta,
            detail: "alpha_1 alpha_2 = b xi or alpha_1 + alpha_2 = a (1 + xi) violated",
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn f_matches_rank_two_formula() {
        for theta in [0.4, 1.3, 2.2, PI] {
            let m = TwoPointMeasure::unit(theta).unwrap();
            let xi = m.xi();
            let one = c(1.0, 0.0);
            let expected = ComplexPolynomial::new(vec![
                xi * xi,
                -(xi + xi * xi) * 3.0,
                xi * (8.0 + 2.0 * theta.cos()),
                -(one + xi) * 3.0,
                one,
            ]);
            assert!(build_f(&m.to_general()).max_coeff_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn antipodal_middle_coefficient() {
        let f = build_f(&TwoPointMeasure::unit(PI).unwrap().to_general());
        assert!((f.coeff(2) - c(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn single_atom() {
        let m = GeneralMeasure::new(vec![(0.0, 1.0)]).unwrap();
        let f = build_f(&m);
        assert!(f.max_coeff_diff(&ComplexPolynomial::from_real(&[1.0, -3.0, 1.0])) < 1e-15);
        let fact = factorize(&m, &Tolerances::default()).unwrap();
        let alpha = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((fact.alphas[0] - c(alpha, 0.0)).norm() < 1e-12);
        assert!((fact.d - 2.0 / (3.0 + 5f64.sqrt())).abs() < 1e-12);
        assert!(fact.two_point.is_none());
    }

    #[test]
    fn confluent_factorization() {
        let m = TwoPointMeasure::from_cos(0.6, 1.0, 1.0).unwrap();
        let fact = factorize_two_point(&m, &Tolerances::default()).unwrap();
        for alpha in &fact.alphas {
            assert!((alpha - c(2.0, 1.0)).norm() < 1e-9);
        }
        let report = fact.two_point.unwrap();
        assert_eq!(report.case, CaseTag::Confluent);
        assert!((report.b - 5.0).abs() < 1e-10);
        assert!((report.a - 2.5).abs() < 1e-10);
        assert!((fact.d - 0.2).abs() < 1e-10);
    }

    #[test]
    fn quarter_turn_b() {
        let fact = factorize_two_point(&TwoPointMeasure::unit(PI / 2.0).unwrap(), &Tolerances::default()).unwrap();
        let y = 3.0 + 7f64.sqrt();
        let b = (y + (y * y - 4.0).sqrt()) / 2.0;
        let report = fact.two_point.unwrap();
        assert!((report.b - b).abs() < 1e-10);
        assert!((report.b - 5.46269).abs() < 1e-5);
        assert_eq!(report.case, CaseTag::Conjugate);
        let xi = c(0.0, 1.0);
        assert!((fact.alphas[1] - xi * fact.alphas[0].conj()).norm() < 1e-10);
        assert!((fact.alphas[0].norm() - fact.alphas[1].norm()).abs() < 1e-10);
        assert!((fact.d - 1.0 / report.b).abs() < 1e-10);
    }

    #[test]
    fn collinear_case() {
        let m = TwoPointMeasure::from_cos(0.8, 1.0, 1.0).unwrap();
        let fact = factorize_two_point(&m, &Tolerances::default()).unwrap();
        let report = fact.two_point.unwrap();
        match report.case {
            CaseTag::Collinear { k } => assert!(k > 1.0),
            other => panic!("expected collinear, got {other:?}"),
        }
        let one_plus_xi = c(1.0, 0.0) + m.xi();
        for alpha in &fact.alphas {
            let t = alpha / one_plus_xi;
            assert!(t.im.abs() < 1e-10 && t.re > 0.0);
        }
    }

    #[test]
    fn antipodal_roots() {
        let fact = factorize_two_point(&TwoPointMeasure::unit(PI).unwrap(), &Tolerances::default()).unwrap();
        let r = 1.0 + 2f64.sqrt();
        assert!((fact.alphas[0] - c(r, 0.0)).norm() < 1e-10);
        assert!((fact.alphas[1] - c(-r, 0.0)).norm() < 1e-10);
        assert_eq!(fact.case(), Some(CaseTag::Conjugate));
    }

    #[test]
    fn d_matches_leading_coefficient_route() {
        let m = GeneralMeasure::new(vec![(0.0, 2.0), (1.0, 0.5), (-2.2, 3.0)]).unwrap();
        let fact = factorize(&m, &Tolerances::default()).unwrap();
        let lead = m.laurent().last().unwrap().norm();
        let prod: f64 = fact.alphas.iter().map(|a| a.norm()).product();
        assert!((fact.d - lead / prod).abs() < 1e-10 * fact.d);
    }

    #[test]
    fn rejects_bad_measures() {
        assert!(TwoPointMeasure::unit(0.0).is_err());
        assert!(TwoPointMeasure::unit(4.0).is_err());
        assert!(TwoPointMeasure::new(1.0, -1.0, 1.0).is_err());
        assert!(GeneralMeasure::new(vec![(0.0, 1.0), (2.0 * PI, 1.0)]).is_err());
    }
}
