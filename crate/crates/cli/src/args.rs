use std::f64::consts::PI;
use std::path::PathBuf;

use cdsp_core::cdsp::CaseOverride;
use cdsp_core::{Complex64, Convention, KernelMethod};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cdsp", version, about = "Cauchy-dual subnormality of M_z on two-point Dirichlet-type spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factor the boundary polynomial of the measure and report the outside roots.
    Factorize(FactorizeArgs),
    /// Run the full pipeline and decide subnormality.
    ///
    /// Exit status: 0 subnormal, 3 not subnormal, 4 uncertified (non-unit
    /// weights or an inconclusive scan), 2 pipeline error, 1 usage error.
    Certify(CertifyArgs),
    /// Decide over an inclusive grid of angles and write CSV.
    ///
    /// Columns, in this order: theta, cos_theta, case, a, b, witness_re,
    /// witness_im, verdict. The verdict column holds true, false,
    /// inconclusive or error.
    Sweep(SweepArgs),
    /// Evaluate the reproducing kernel K(z, w).
    Kernel(KernelArgs),
}

#[derive(Args, Debug, Clone)]
pub struct MeasureArgs {
    /// Angle of the second atom in radians; accepts forms like pi, pi/2, 2*pi/3.
    #[arg(long, value_parser = parse_theta, conflicts_with = "cos_theta", required_unless_present = "cos_theta")]
    pub theta: Option<f64>,
    /// Cosine of the angle; converted with arccos into (0, pi].
    #[arg(long, allow_hyphen_values = true)]
    pub cos_theta: Option<f64>,
    /// Weight of the atom at 1.
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    /// Weight of the atom at e^{i theta}.
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
}

impl MeasureArgs {
    pub fn theta(&self) -> Result<f64, String> {
        match (self.theta, self.cos_theta) {
            (Some(t), _) => Ok(t),
            (None, Some(c)) if (-1.0..1.0).contains(&c) => Ok(c.acos()),
            (None, Some(c)) => Err(format!("cos-theta {c} must lie in [-1, 1)")),
            (None, None) => Err("one of --theta or --cos-theta is required".into()),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Decision tolerance for sign tests.
    #[arg(long, env = "CDSP_TOL")]
    pub tol: Option<f64>,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, value_enum, default_value_t = ConventionArg::KernelConsistent)]
    pub convention: ConventionArg,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Largest l scanned by the minor tests.
    #[arg(long, default_value_t = 32)]
    pub l_max: usize,
    /// Truncation size of the minor matrices.
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    /// Force a case instead of the geometric classification.
    #[arg(long = "case", value_enum)]
    pub case_override: Option<CaseArg>,
}

#[derive(Args, Debug)]
pub struct FactorizeArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_theta)]
    pub theta_min: f64,
    #[arg(long, value_parser = parse_theta, default_value = "pi")]
    pub theta_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[arg(long, env = "CDSP_TOL")]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::KernelConsistent)]
    pub convention: ConventionArg,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// First point as re,im.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    /// Second point as re,im.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub w: Complex64,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseArg {
    Conjugate,
    Collinear,
    Confluent,
}

impl From<CaseArg> for CaseOverride {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Conjugate => CaseOverride::Conjugate,
            CaseArg::Collinear => CaseOverride::Collinear,
            CaseArg::Confluent => CaseOverride::Confluent,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionArg {
    KernelConsistent,
    Literal,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::KernelConsistent => Convention::KernelConsistent,
            ConventionArg::Literal => Convention::Literal,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Costara,
    Closed,
    Debranges,
    All,
}

impl MethodArg {
    pub fn methods(self) -> Vec<KernelMethod> {
        match self {
            MethodArg::Costara => vec![KernelMethod::Costara],
            MethodArg::Closed => vec![KernelMethod::ClosedTwoPoint],
            MethodArg::Debranges => vec![KernelMethod::DeBranges],
            MethodArg::All => KernelMethod::ALL.to_vec(),
        }
    }
}

fn parse_factor(s: &str) -> Result<f64, String> {
    match s.trim() {
        "pi" | "π" => Ok(PI),
        t => t.parse::<f64>().map_err(|_| format!("cannot read '{t}' as a number")),
    }
}

/// `x`, `pi`, `k*pi`, each optionally followed by `/d`.
pub fn parse_theta(s: &str) -> Result<f64, String> {
    let s = s.trim().to_ascii_lowercase();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.to_string(), parse_factor(d)?),
        None => (s.clone(), 1.0),
    };
    let value = num.split('*').map(parse_factor).try_fold(1.0, |acc, f| f.map(|f| acc * f))?;
    let theta = value / den;
    if theta.is_finite() {
        Ok(theta)
    } else {
        Err(format!("'{s}' is not a finite angle"))
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = re.trim().parse::<f64>().map_err(|e| format!("real part: {e}"))?;
    let im = im.trim().parse::<f64>().map_err(|e| format!("imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}
