//! JSON report blocks. Field order is fixed by the struct layout and every
//! float is written with 17 significant digits, so equal inputs give equal bytes.

use std::io;

use cdsp_core::cdsp::{Case2Report, Cor43Report, Pipeline};
use cdsp_core::rieszfejer::Factorization;
use cdsp_core::{CMatrix, CaseTag, Complex64, ComplexPolynomial, Error, Tolerances, Verdict};
use serde::Serialize;
use serde_json::ser::Formatter;

pub type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn matrix(m: &CMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows()).map(|i| m.row(i).iter().copied().map(pair).collect()).collect()
}

fn poly(p: &ComplexPolynomial) -> Vec<Pair> {
    p.coeffs().iter().copied().map(pair).collect()
}

#[derive(Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input: Input,
    pub factorization: Option<FactorizationBlock>,
    pub gram: Option<GramBlock>,
    pub debranges: Option<DeBrangesBlock>,
    pub verdict: Option<VerdictBlock>,
    pub timing: Timing,
    pub error: Option<ErrorBlock>,
}

impl Report {
    pub fn new(command: &'static str, input: Input) -> Self {
        Self {
            command,
            input,
            factorization: None,
            gram: None,
            debranges: None,
            verdict: None,
            timing: Timing { elapsed_ms: None },
            error: None,
        }
    }

    pub fn fill_pipeline(&mut self, p: &Pipeline) {
        self.factorization = Some(FactorizationBlock::new(&p.fact));
        let b_diag: Vec<f64> = (0..p.gram.b.rows()).map(|j| p.gram.b[(j, j)].re).collect();
        let b_diagonal_residual = p
            .fact
            .a()
            .map(|a| b_diag.iter().map(|d| (d - (a - 1.0)).abs()).fold(0.0, f64::max));
        self.gram = Some(GramBlock {
            delta: p.gram.delta,
            delta_closed: p.gram.delta_closed,
            condition: p.gram.condition,
            b_diagonal: b_diag,
            b_diagonal_residual,
            c: matrix(&p.gram.c),
        });
        self.debranges = Some(DeBrangesBlock {
            convention: format!("{:?}", p.debranges.convention),
            confluent: p.debranges.confluent,
            a: matrix(&p.debranges.a),
            p: matrix(&p.debranges.p),
            p_polynomials: p.debranges.p_polys.iter().map(poly).collect(),
        });
    }
}

#[derive(Serialize)]
pub struct Input {
    pub theta: f64,
    pub cos_theta: f64,
    pub c1: f64,
    pub c2: f64,
    pub l_max: Option<usize>,
    pub size: Option<usize>,
    pub case_override: Option<String>,
    pub convention: String,
    pub tolerances: TolBlock,
}

#[derive(Serialize)]
pub struct TolBlock {
    pub root: f64,
    pub divisibility: f64,
    pub confluence: f64,
    pub identity: f64,
    pub decision: f64,
    pub ray: f64,
    pub antipodal: f64,
}

impl From<&Tolerances> for TolBlock {
    fn from(t: &Tolerances) -> Self {
        Self {
            root: t.root,
            divisibility: t.divisibility,
            confluence: t.confluence,
            identity: t.identity,
            decision: t.decision,
            ray: t.ray,
            antipodal: t.antipodal,
        }
    }
}

#[derive(Serialize)]
pub struct FactorizationBlock {
    pub case: Option<&'static str>,
    pub k: Option<f64>,
    pub alphas: Vec<Pair>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub d: f64,
    pub g_residual: Option<f64>,
    pub product_residual: Option<f64>,
    pub sum_residual: Option<f64>,
    pub relation_residual: Option<f64>,
    pub bound_ok: Option<bool>,
    pub identity_residual: f64,
    pub f: Vec<Pair>,
    pub q: Vec<Pair>,
}

impl FactorizationBlock {
    pub fn new(f: &Factorization) -> Self {
        let r = f.two_point;
        Self {
            case: f.case().map(|c| c.name()),
            k: match f.case() {
                Some(CaseTag::Collinear { k }) => Some(k),
                _ => None,
            },
            alphas: f.alphas.iter().copied().map(pair).collect(),
            a: f.a(),
            b: f.b(),
            d: f.d,
            g_residual: r.map(|r| r.g_residual),
            product_residual: r.map(|r| r.product_residual),
            sum_residual: r.map(|r| r.sum_residual),
            relation_residual: r.map(|r| r.relation_residual),
            bound_ok: r.map(|r| r.bound_ok),
            identity_residual: f.identity_residual,
            f: poly(&f.f),
            q: poly(&f.q),
        }
    }
}

#[derive(Serialize)]
pub struct GramBlock {
    pub delta: f64,
    pub delta_closed: Option<f64>,
    pub condition: f64,
    pub b_diagonal: Vec<f64>,
    /// Largest `|B_jj - (a - 1)|`.
    pub b_diagonal_residual: Option<f64>,
    pub c: Vec<Vec<Pair>>,
}

#[derive(Serialize)]
pub struct DeBrangesBlock {
    pub convention: String,
    pub confluent: bool,
    pub a: Vec<Vec<Pair>>,
    pub p: Vec<Vec<Pair>>,
    pub p_polynomials: Vec<Vec<Pair>>,
}

#[derive(Serialize)]
pub struct Cor43Block {
    pub applicable: bool,
    pub ray_distance: f64,
    pub defect: Pair,
    pub scale: f64,
}

impl From<&Cor43Report> for Cor43Block {
    fn from(r: &Cor43Report) -> Self {
        Self {
            applicable: r.applicable,
            ray_distance: r.ray_distance,
            defect: pair(r.defect),
            scale: r.scale,
        }
    }
}

#[derive(Serialize)]
pub struct Case2Block {
    pub k: f64,
    pub d: f64,
    pub m_closed: f64,
    pub m_minor: f64,
}

impl From<&Case2Report> for Case2Block {
    fn from(r: &Case2Report) -> Self {
        Self {
            k: r.k,
            d: r.d,
            m_closed: r.m_closed,
            m_minor: r.m_minor,
        }
    }
}

#[derive(Serialize)]
pub struct VerdictBlock {
    pub subnormal: bool,
    pub certified: bool,
    pub route: &'static str,
    pub witness: Pair,
    pub l: usize,
    pub size: usize,
    pub first_refuting_l: Option<usize>,
    /// Leading 2x2 determinant of the l = 1 minor matrix.
    pub first_minor_det: Option<f64>,
    pub first_minor_dets: Option<Vec<f64>>,
    pub cor43: Option<Cor43Block>,
    pub case2: Option<Case2Block>,
}

impl From<&Verdict> for VerdictBlock {
    fn from(v: &Verdict) -> Self {
        let first = v.scan.as_ref().map(|s| &s.first);
        Self {
            subnormal: v.subnormal,
            certified: v.certified,
            route: v.route.name(),
            witness: pair(v.witness),
            l: v.l_used,
            size: v.size_used,
            first_refuting_l: v.scan.as_ref().and_then(|s| s.first_refuting_l),
            first_minor_det: first.and_then(|f| f.minors.get(1).copied()),
            first_minor_dets: first.map(|f| f.minors.clone()),
            cor43: v.cor43.as_ref().map(Into::into),
            case2: v.case2.as_ref().map(Into::into),
        }
    }
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_ms: Option<f64>,
}

#[derive(Serialize)]
pub struct ErrorBlock {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorBlock {
    fn from(e: &Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string();
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
struct FixedDigits(serde_json::ser::PrettyFormatter<'static>);

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{}", fmt_f64(v))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report serializes");
    String::from_utf8(out).expect("utf8 json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-5.0), "-5.0000000000000000e0");
        let json = to_json(&Timing { elapsed_ms: Some(2.5) });
        assert!(json.contains("2.5000000000000000e0"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["elapsed_ms"].as_f64(), Some(2.5));
    }
}
