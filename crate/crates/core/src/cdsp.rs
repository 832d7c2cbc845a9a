//! Subnormality of the Cauchy dual of `M_z` on `D(mu)`.
//!
//! Refutation uses either the orthogonality test (for poles with
//! `alpha_r conj(alpha_t)` off the ray `[1, inf)`, subnormal iff
//! `sum_j p_j(alpha_1) conj p_j(alpha_2) = 0`) or a negative eigenvalue of a
//! truncation of the matrices
//!
//! ```text
//! N_l(m, n) = sum_{s=0}^{l} (-1)^s C(l, s) B_{m+1+s} . B_{n+1+s}^*
//! ```
//!
//! which must all be positive semidefinite for a subnormal dual.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::complexpoly::ComplexPolynomial;
use crate::debranges::{partial_fraction_denominators, AMatrixMode, Convention, DeBrangesData, TaylorRows};
use crate::dirichlet::{GramData, Kernel, OuterFunction};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rieszfejer::{factorize, factorize_two_point, CaseTag, Factorization, GeneralMeasure, TwoPointMeasure};
use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Antipodal,
    RankOne,
    Cor43,
    MinorDistinct,
    MinorConfluent,
    Case2Closed,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Antipodal => "Antipodal",
            Route::RankOne => "RankOne",
            Route::Cor43 => "Cor43",
            Route::MinorDistinct => "MinorDistinct",
            Route::MinorConfluent => "MinorConfluent",
            Route::Case2Closed => "Case2Closed",
        }
    }
}

/// Distance from `w` to the ray `[1, inf)`.
pub fn ray_distance(w: Complex64) -> f64 {
    if w.re >= 1.0 {
        w.im.abs()
    } else {
        (w - Complex64::new(1.0, 0.0)).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cor43Report {
    /// Every `alpha_r conj(alpha_t)`, `r != t`, is farther than the ray
    /// tolerance from `[1, inf)`.
    pub applicable: bool,
    pub ray_distance: f64,
    /// `sum_j p_j(alpha_1) conj p_j(alpha_2)`
    pub defect: Complex64,
    /// `sum_j |p_j(alpha_1)| |p_j(alpha_2)|`, the natural size of the defect.
    pub scale: f64,
}

impl Cor43Report {
    pub fn defect_is_zero(&self, tol: &Tolerances) -> bool {
        self.defect.norm() <= tol.decision * (1.0 + self.scale)
    }
}

/// Orthogonality test on the first two poles.
pub fn cor43_test(p_polys: &[ComplexPolynomial], alphas: &[Complex64], tol: &Tolerances) -> Result<Cor43Report> {
    if alphas.len() < 2 {
        return Err(Error::UnsupportedMeasure("orthogonality test needs two poles"));
    }
    let mut dist = f64::INFINITY;
    for (r, ar) in alphas.iter().enumerate() {
        for (t, at) in alphas.iter().enumerate() {
            if r != t {
                dist = dist.min(ray_distance(ar * at.conj()));
            }
        }
    }
    let (a1, a2) = (alphas[0], alphas[1]);
    let mut defect = Complex64::zero();
    let mut scale = 0.0;
    for pj in p_polys {
        let (x, y) = (pj.eval(a1), pj.eval(a2));
        defect += x * y.conj();
        scale += x.norm() * y.norm();
    }
    Ok(Cor43Report {
        applicable: dist > tol.ray,
        ray_distance: dist,
        defect,
        scale,
    })
}

/// Truncated `N_l` with its PSD diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorReport {
    pub l: usize,
    pub size: usize,
    pub matrix: CMatrix,
    /// Leading principal minors, sizes `1..=size` (real parts).
    pub minors: Vec<f64>,
    /// Smallest eigenvalue of each leading truncation, sizes `1..=size`.
    pub min_eigenvalues: Vec<f64>,
    /// PSD thresholds `decision * (1 + ||N_k||_F)` per truncation.
    pub thresholds: Vec<f64>,
    pub norms: Vec<f64>,
}

impl MinorReport {
    pub fn from_matrix(matrix: CMatrix, l: usize, tol: &Tolerances) -> Result<Self> {
        let size = matrix.rows();
        let mut minors = Vec::with_capacity(size);
        let mut min_eigenvalues = Vec::with_capacity(size);
        let mut thresholds = Vec::with_capacity(size);
        let mut norms = Vec::with_capacity(size);
        for k in 1..=size {
            let lead = matrix.leading(k);
            minors.push(lead.det()?.re);
            min_eigenvalues.push(lead.min_hermitian_eigenvalue()?);
            let norm = lead.frobenius_norm();
            norms.push(norm);
            thresholds.push(tol.decision * (1.0 + norm));
        }
        Ok(Self {
            l,
            size,
            matrix,
            minors,
            min_eigenvalues,
            thresholds,
            norms,
        })
    }

    /// Some truncation has an eigenvalue below its PSD threshold.
    pub fn refuted(&self) -> bool {
        self.min_eigenvalues
            .iter()
            .zip(&self.thresholds)
            .any(|(e, t)| *e < -t)
    }

    /// Most negative `lambda_min / ||N_k||` over refuting truncations, with
    /// the truncation size.
    pub fn most_decisive(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for k in 0..self.size {
            let e = self.min_eigenvalues[k];
            if e < -self.thresholds[k] {
                let rel = e / self.norms[k];
                if best.is_none_or(|(_, r)| rel < r) {
                    best = Some((k + 1, rel));
                }
            }
        }
        best
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn binomial(l: usize, s: usize) -> f64 {
    (0..s).fold(1.0, |acc, i| acc * (l - i) as f64 / (i + 1) as f64)
}

/// `N_l` truncated to `size` from explicit Taylor rows.
pub fn minor_matrix_from_rows(rows: &TaylorRows, l: usize, size: usize) -> Result<CMatrix> {
    let need = size + l;
    if rows.m_max() < need {
        return Err(Error::InsufficientRows {
            have: rows.m_max(),
            need,
        });
    }
    Ok(CMatrix::from_fn(size, size, |m, n| {
        (0..=l)
            .map(|s| {
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                rows.inner(m + 1 + s, n + 1 + s) * (sign * binomial(l, s))
            })
            .sum()
    }))
}

/// Distinct poles: `N_l(m, n) = sum_{r,t} K_rt (1 - 1/(alpha_r conj alpha_t))^l
/// / (alpha_r^{m+2} conj(alpha_t)^{n+2})` with
/// `K_rt = sum_j p_j(alpha_r) conj p_j(alpha_t) / (a_r conj a_t)`.
pub fn minor_distinct(
    p_polys: &[ComplexPolynomial],
    alphas: &[Complex64],
    l: usize,
    size: usize,
    tol: &Tolerances,
) -> Result<MinorReport> {
    let separation = min_separation(alphas);
    if separation < tol.confluence {
        return Err(Error::ConfluentPoles { separation });
    }
    let denoms = partial_fraction_denominators(alphas)?;
    let k = alphas.len();
    let values: Vec<Vec<Complex64>> = p_polys.iter().map(|pj| alphas.iter().map(|&a| pj.eval(a)).collect()).collect();
    let one = Complex64::new(1.0, 0.0);
    let mut weight = CMatrix::zeros(k, k);
    for r in 0..k {
        for t in 0..k {
            let s: Complex64 = values.iter().map(|v| v[r] * v[t].conj()).sum();
            weight[(r, t)] = s / (denoms[r] * denoms[t].conj()) * (one - (alphas[r] * alphas[t].conj()).inv()).powu(l as u32);
        }
    }
    let matrix = CMatrix::from_fn(size, size, |m, n| {
        let mut acc = Complex64::zero();
        for r in 0..k {
            for t in 0..k {
                acc += weight[(r, t)] / (alphas[r].powu(m as u32 + 2) * alphas[t].conj().powu(n as u32 + 2));
            }
        }
        acc
    });
    MinorReport::from_matrix(matrix, l, tol)
}

/// Confluent poles: `N_l` from the Taylor rows.
pub fn minor_confluent(rows: &TaylorRows, l: usize, size: usize, tol: &Tolerances) -> Result<MinorReport> {
    MinorReport::from_matrix(minor_matrix_from_rows(rows, l, size)?, l, tol)
}

fn min_separation(alphas: &[Complex64]) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..alphas.len() {
        for j in (i + 1)..alphas.len() {
            sep = sep.min((alphas[i] - alphas[j]).norm());
        }
    }
    sep
}

/// Closed form of the `l = 1`, `2 x 2` determinant for collinear poles
/// `alpha_2 = k alpha_1`, up to the factor `(1 - 1/k)^2 / (k^4 |alpha_1|^10)`.
///
/// With `x = p_1(alpha_1)`, `y = p_2(alpha_1)`, `w = p_1(alpha_2)`,
/// `s = 1/|alpha_1|^2`:
///
/// ```text
/// D |alpha_1|^4 (k-1)^4 = -s (1-1/k)^2 |x|^2 |w|^2 + k^2 (k^2-s)(1-s) |x|^2 |y|^2
///     + (1-s)(1-s/k^2) |y|^2 |w|^2 - k^2 s (k-1)^2 |y|^4 - 2 (k-s)^2 |y|^2 Re(x conj w)
/// ```
///
/// Requires `p_2` to be a multiple of `z^2`, which holds for any upper
/// triangular factor.
pub fn case2_closed_minor(fact: &Factorization, p_polys: &[ComplexPolynomial]) -> Result<f64> {
    let k = match fact.case() {
        Some(CaseTag::Collinear { k }) => k,
        _ => return Err(Error::WrongCase { expected: "Collinear" }),
    };
    if p_polys.len() != 2 {
        return Err(Error::DimensionMismatch);
    }
    let (a1, a2) = (fact.alphas[0], fact.alphas[1]);
    let x = p_polys[0].eval(a1);
    let y = p_polys[1].eval(a1);
    let w = p_polys[0].eval(a2);
    let s = 1.0 / a1.norm_sqr();
    let (xx, yy, ww) = (x.norm_sqr(), y.norm_sqr(), w.norm_sqr());
    let re = (x * w.conj()).re;
    let u = 1.0 - 1.0 / k;
    let body = -s * u * u * xx * ww + k * k * (k * k - s) * (1.0 - s) * xx * yy + (1.0 - s) * (1.0 - s / (k * k)) * yy * ww
        - k * k * s * (k - 1.0).powi(2) * yy * yy
        - 2.0 * (k - s).powi(2) * yy * re;
    Ok(body / (a1.norm_sqr().powi(2) * (k - 1.0).powi(4)))
}

/// `(1 - 1/k)^2 / (k^4 |alpha_1|^10)`
pub fn case2_prefactor(k: f64, alpha1: Complex64) -> f64 {
    (1.0 - 1.0 / k).powi(2) / (k.powi(4) * alpha1.norm().powi(10))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseOverride {
    Conjugate,
    Collinear,
    Confluent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecideConfig {
    /// Largest `l` scanned by the minor tests.
    pub l_max: usize,
    /// Truncation size of `N_l`.
    pub size: usize,
    pub tol: Tolerances,
    pub convention: Convention,
    pub case_override: Option<CaseOverride>,
}

impl Default for DecideConfig {
    fn default() -> Self {
        Self {
            l_max: 32,
            size: 6,
            tol: Tolerances::default(),
            convention: Convention::KernelConsistent,
            case_override: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Case2Report {
    pub k: f64,
    pub d: f64,
    /// `prefactor * D`
    pub m_closed: f64,
    /// `l = 1`, `2 x 2` determinant of the truncated matrix.
    pub m_minor: f64,
}

/// Result of scanning `l = 1..=l_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorScan {
    pub l_max: usize,
    pub size: usize,
    pub first_refuting_l: Option<usize>,
    /// Report at the most decisive `l` (if any refutes).
    pub best: Option<MinorReport>,
    /// Truncation size at which `best` is most decisive.
    pub best_size: usize,
    /// `l = 1` report.
    pub first: MinorReport,
}

impl MinorScan {
    pub fn refuted(&self) -> bool {
        self.first_refuting_l.is_some()
    }

    /// Smallest eigenvalue of the most decisive truncation.
    pub fn witness(&self) -> Option<f64> {
        self.best.as_ref().map(|b| b.min_eigenvalues[self.best_size - 1])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub subnormal: bool,
    pub route: Route,
    /// Orthogonality defect or most negative eigenvalue; zero on the
    /// antipodal and rank-one routes.
    pub witness: Complex64,
    pub l_used: usize,
    pub size_used: usize,
    /// False when the weights are not both 1 (evidence only).
    pub certified: bool,
    pub case: Option<CaseTag>,
    pub cor43: Option<Cor43Report>,
    pub case2: Option<Case2Report>,
    pub scan: Option<MinorScan>,
}

/// Factorization, outer function, Gram data and de Branges data for one measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Pipeline {
    pub measure: TwoPointMeasure,
    pub fact: Factorization,
    pub outer: OuterFunction,
    pub gram: GramData,
    pub debranges: DeBrangesData,
}

impl Pipeline {
    pub fn new(measure: &TwoPointMeasure, tol: &Tolerances, convention: Convention) -> Result<Self> {
        let fact = factorize_two_point(measure, tol)?;
        let outer = OuterFunction::new(&fact);
        let gram = GramData::new(&outer, tol)?;
        let debranges = DeBrangesData::build(&fact, &outer, &gram, AMatrixMode::Generic, convention, tol)?;
        Ok(Self {
            measure: *measure,
            fact,
            outer,
            gram,
            debranges,
        })
    }

    pub fn kernel(&self) -> Kernel {
        Kernel::new(&self.fact, self.outer.clone(), self.gram.clone(), Some(self.debranges.clone()))
    }

    /// Minor report for one `l`, picking the distinct or confluent formula.
    pub fn minor(&self, l: usize, size: usize, tol: &Tolerances) -> Result<MinorReport> {
        if self.debranges.confluent {
            let rows = self.debranges.taylor_rows(size + l)?;
            minor_confluent(&rows, l, size, tol)
        } else {
            minor_distinct(&self.debranges.p_polys, &self.debranges.alphas, l, size, tol)
        }
    }

    pub fn scan(&self, l_max: usize, size: usize, tol: &Tolerances) -> Result<MinorScan> {
        let first = self.minor(1, size, tol)?;
        let mut first_refuting_l = None;
        let mut best: Option<(MinorReport, usize, f64)> = None;
        for l in 1..=l_max.max(1) {
            let report = if l == 1 { first.clone() } else { self.minor(l, size, tol)? };
            if let Some((k, rel)) = report.most_decisive() {
                first_refuting_l.get_or_insert(l);
                if best.as_ref().is_none_or(|(_, _, r)| rel < *r) {
                    best = Some((report, k, rel));
                }
            }
        }
        let (best, best_size) = match best {
            Some((r, k, _)) => (Some(r), k),
            None => (None, 0),
        };
        Ok(MinorScan {
            l_max,
            size,
            first_refuting_l,
            best,
            best_size,
            first,
        })
    }

    pub fn decide(&self, cfg: &DecideConfig) -> Result<Verdict> {
        let tol = &cfg.tol;
        let certified = self.measure.unit_weights();
        let case = self.fact.case();
        let db = &self.debranges;

        if (self.measure.theta() - PI).abs() <= tol.antipodal {
            let scan = self.scan(cfg.l_max.min(3), cfg.size, tol)?;
            let cor43 = cor43_test(&db.p_polys, &db.alphas, tol)?;
            return Ok(Verdict {
                subnormal: true,
                route: Route::Antipodal,
                witness: Complex64::zero(),
                l_used: 0,
                size_used: 0,
                certified,
                case,
                cor43: Some(cor43),
                case2: None,
                scan: Some(scan),
            });
        }

        let geometric = match case {
            Some(CaseTag::Conjugate) => CaseOverride::Conjugate,
            Some(CaseTag::Collinear { .. }) => CaseOverride::Collinear,
            _ => CaseOverride::Confluent,
        };
        let dispatch = cfg.case_override.unwrap_or(geometric);
        if dispatch == CaseOverride::Confluent && !db.confluent {
            return Err(Error::WrongCase { expected: "Confluent" });
        }

        let scan = self.scan(cfg.l_max, cfg.size, tol)?;
        let scan_verdict = |scan: MinorScan, route: Route, case2: Option<Case2Report>, cor43: Option<Cor43Report>| {
            match (scan.witness(), scan.best.as_ref()) {
                (Some(w), Some(best)) => Ok(Verdict {
                    subnormal: false,
                    route,
                    witness: Complex64::new(w, 0.0),
                    l_used: best.l,
                    size_used: scan.best_size,
                    certified,
                    case,
                    cor43,
                    case2,
                    scan: Some(scan),
                }),
                _ => Err(Error::Inconclusive { l_max: scan.l_max }),
            }
        };

        match dispatch {
            CaseOverride::Conjugate => {
                let cor43 = cor43_test(&db.p_polys, &db.alphas, tol)?;
                if !cor43.applicable {
                    return scan_verdict(scan, Route::MinorDistinct, None, Some(cor43));
                }
                let subnormal = cor43.defect_is_zero(tol);
                Ok(Verdict {
                    subnormal,
                    route: Route::Cor43,
                    witness: if subnormal { Complex64::zero() } else { cor43.defect },
                    l_used: 0,
                    size_used: 0,
                    certified,
                    case,
                    cor43: Some(cor43),
                    case2: None,
                    scan: Some(scan),
                })
            }
            CaseOverride::Collinear => {
                let d = case2_closed_minor(&self.fact, &db.p_polys)?;
                let k = match case {
                    Some(CaseTag::Collinear { k }) => k,
                    _ => unreachable!("case2_closed_minor checked the case"),
                };
                let first2 = scan.first.minors[1.min(scan.first.size - 1)];
                let m_closed = case2_prefactor(k, db.alphas[0]) * d;
                let case2 = Case2Report {
                    k,
                    d,
                    m_closed,
                    m_minor: first2,
                };
                if m_closed < -tol.decision * (1.0 + scan.first.norms[1.min(scan.first.size - 1)]) {
                    return Ok(Verdict {
                        subnormal: false,
                        route: Route::Case2Closed,
                        witness: Complex64::new(m_closed, 0.0),
                        l_used: 1,
                        size_used: 2,
                        certified,
                        case,
                        cor43: None,
                        case2: Some(case2),
                        scan: Some(scan),
                    });
                }
                scan_verdict(scan, Route::MinorDistinct, Some(case2), None)
            }
            CaseOverride::Confluent => scan_verdict(scan, Route::MinorConfluent, None, None),
        }
    }
}

/// Verdict for a two-point measure.
pub fn decide(measure: &TwoPointMeasure, cfg: &DecideConfig) -> Result<Verdict> {
    Pipeline::new(measure, &cfg.tol, cfg.convention)?.decide(cfg)
}

/// Verdict for one or two atoms; two atoms are rotated so the first sits at 1.
pub fn decide_measure(measure: &GeneralMeasure, cfg: &DecideConfig) -> Result<Verdict> {
    match measure.atoms() {
        [_] => {
            factorize(measure, &cfg.tol)?;
            Ok(Verdict {
                subnormal: true,
                route: Route::RankOne,
                witness: Complex64::zero(),
                l_used: 0,
                size_used: 0,
                certified: true,
                case: None,
                cor43: None,
                case2: None,
                scan: None,
            })
        }
        [(a0, c1), (a1, c2)] => {
            let mut theta = num_traits::Euclid::rem_euclid(&(a1 - a0), &(2.0 * PI));
            let (mut c1, mut c2) = (*c1, *c2);
            if theta > PI {
                // reflect so that theta lies in (0, pi]
                theta = 2.0 * PI - theta;
                core::mem::swap(&mut c1, &mut c2);
            }
            decide(&TwoPointMeasure::new(theta, c1, c2)?, cfg)
        }
        _ => Err(Error::UnsupportedMeasure("verdict only for one or two atoms")),
    }
}
