//! Cauchy dual subnormality of `M_z` on Dirichlet-type spaces `D(mu)` for
//! measures `mu` supported at finitely many points of the unit circle.
//!
//! The pipeline runs bottom-up:
//!
//! * [`rieszfejer`] builds the boundary polynomial `f` and factors it into
//!   `d |q|^2` with the zeros `alpha_j` of `q` outside the closed disk;
//! * [`dirichlet`] forms the outer function `O = p/q`, the Gram matrix of the
//!   boundary functionals and evaluates the reproducing kernel;
//! * [`debranges`] identifies `D(mu)` with a de Branges–Rovnyak space `H(B)`
//!   and produces the Taylor rows of `B`;
//! * [`cdsp`] runs the orthogonality and minor tests and returns a verdict.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod cdsp;
pub mod complexpoly;
pub mod debranges;
pub mod dirichlet;
pub mod error;
pub mod linalg;
pub mod rieszfejer;

pub use num_complex::Complex64;

pub use cdsp::{decide, DecideConfig, MinorReport, Route, Verdict};
pub use complexpoly::{ComplexPolynomial, RootSet};
pub use debranges::{Convention, DeBrangesData, TaylorRows};
pub use dirichlet::{GramData, Kernel, KernelMethod, OuterFunction};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use rieszfejer::{CaseTag, Factorization, GeneralMeasure, TwoPointMeasure};

/// Numerical thresholds used across the pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Scale-aware residual target for refined roots.
    pub root: f64,
    /// Scale-aware remainder bound for exact division.
    pub divisibility: f64,
    /// Roots of `q` closer than this are treated as one double pole.
    pub confluence: f64,
    /// Outside roots must satisfy `|alpha| > 1 + outside_margin`.
    pub outside_margin: f64,
    /// Relative residual allowed in the boundary identity and structural checks.
    pub identity: f64,
    /// Decision threshold: PSD rule `lambda_min >= -decision (1 + ||M||)` and
    /// the zero test for the orthogonality defect.
    pub decision: f64,
    /// Minimum distance from `alpha_r conj(alpha_t)` to the ray `[1, inf)`.
    pub ray: f64,
    /// Largest admissible Gram condition number.
    pub gram_condition: f64,
    /// `|theta - pi|` below this counts as antipodal.
    pub antipodal: f64,
    /// Smallest admissible Cholesky pivot.
    pub pivot: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root: 1e-11,
            divisibility: 1e-9,
            confluence: 1e-6,
            outside_margin: 1e-9,
            identity: 1e-9,
            decision: 1e-10,
            ray: 1e-8,
            gram_condition: 1e12,
            antipodal: 1e-9,
            pivot: 1e-12,
        }
    }
}
