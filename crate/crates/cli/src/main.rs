// stdout writes that tolerate a closed pipe
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

mod args;
mod report;
mod sweep;

use std::process::ExitCode;
use std::time::Instant;

use cdsp_core::cdsp::{DecideConfig, Pipeline};
use cdsp_core::rieszfejer::factorize_two_point;
use cdsp_core::{Complex64, Error, Tolerances, TwoPointMeasure};
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{CertifyArgs, Cli, Command, CommonArgs, FactorizeArgs, KernelArgs, MeasureArgs, ScanArgs};
use report::{fmt_f64, to_json, ErrorBlock, Input, Report, TolBlock, VerdictBlock};

const EXIT_USAGE: u8 = 1;
const EXIT_PIPELINE: u8 = 2;
const EXIT_NOT_SUBNORMAL: u8 = 3;
const EXIT_UNCERTIFIED: u8 = 4;
const EXIT_IO: u8 = 5;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let code = match cli.command {
        Command::Factorize(a) => factorize(a),
        Command::Certify(a) => certify(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Kernel(a) => kernel(a),
    };
    ExitCode::from(code)
}

fn usage(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

pub(crate) fn tolerances(tol: Option<f64>) -> Tolerances {
    let mut t = Tolerances::default();
    if let Some(d) = tol {
        t.decision = d;
    }
    t
}

fn measure(m: &MeasureArgs) -> Result<TwoPointMeasure, String> {
    let theta = m.theta()?;
    TwoPointMeasure::new(theta, m.c1, m.c2).map_err(|e| e.to_string())
}

fn input(m: &TwoPointMeasure, common: &CommonArgs, scan: Option<&ScanArgs>, tol: &Tolerances) -> Input {
    Input {
        theta: m.theta(),
        cos_theta: m.theta().cos(),
        c1: m.c1(),
        c2: m.c2(),
        l_max: scan.map(|s| s.l_max),
        size: scan.map(|s| s.size),
        case_override: scan.and_then(|s| s.case_override).map(|c| format!("{c:?}")),
        convention: format!("{:?}", common.convention),
        tolerances: TolBlock::from(tol),
    }
}

fn elapsed(start: Instant, enabled: bool) -> Option<f64> {
    enabled.then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn c_str(z: Complex64) -> String {
    format!("{} {} {}i", fmt_f64(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_f64(z.im.abs()))
}

fn factorize(a: FactorizeArgs) -> u8 {
    let start = Instant::now();
    let m = match measure(&a.measure) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    let tol = tolerances(a.common.tol);
    let mut rep = Report::new("factorize", input(&m, &a.common, None, &tol));
    let code = match factorize_two_point(&m, &tol) {
        Ok(f) => {
            rep.factorization = Some(report::FactorizationBlock::new(&f));
            0
        }
        Err(e) => {
            rep.error = Some(ErrorBlock::from(&e));
            EXIT_PIPELINE
        }
    };
    rep.timing.elapsed_ms = elapsed(start, a.common.timing);
    if a.common.json {
        out!("{}", to_json(&rep));
    } else if let Some(f) = &rep.factorization {
        out!("case: {}", f.case.unwrap_or("-"));
        for (j, al) in f.alphas.iter().enumerate() {
            out!("alpha{}: {}", j + 1, c_str(Complex64::new(al[0], al[1])));
        }
        if let (Some(a), Some(b)) = (f.a, f.b) {
            out!("a: {}\nb: {}", fmt_f64(a), fmt_f64(b));
        }
        out!("d: {}\nidentity_residual: {}", fmt_f64(f.d), fmt_f64(f.identity_residual));
    }
    if let Some(e) = &rep.error {
        eprintln!("error: {}", e.message);
    }
    code
}

fn certify(a: CertifyArgs) -> u8 {
    let start = Instant::now();
    let m = match measure(&a.measure) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    let tol = tolerances(a.common.tol);
    let cfg = DecideConfig {
        l_max: a.scan.l_max,
        size: a.scan.size,
        tol,
        convention: a.common.convention.into(),
        case_override: a.scan.case_override.map(Into::into),
    };
    let mut rep = Report::new("certify", input(&m, &a.common, Some(&a.scan), &tol));
    let outcome = Pipeline::new(&m, &tol, cfg.convention).and_then(|p| {
        rep.fill_pipeline(&p);
        p.decide(&cfg)
    });
    let code = match &outcome {
        Ok(v) => {
            rep.verdict = Some(VerdictBlock::from(v));
            match (v.certified, v.subnormal) {
                (false, _) => EXIT_UNCERTIFIED,
                (true, true) => 0,
                (true, false) => EXIT_NOT_SUBNORMAL,
            }
        }
        Err(e) => {
            rep.error = Some(ErrorBlock::from(e));
            match e {
                Error::Inconclusive { .. } => EXIT_UNCERTIFIED,
                _ => EXIT_PIPELINE,
            }
        }
    };
    rep.timing.elapsed_ms = elapsed(start, a.common.timing);
    if a.common.json {
        out!("{}", to_json(&rep));
    } else {
        if let Some(f) = &rep.factorization {
            out!("case: {}", f.case.unwrap_or("-"));
        }
        if let Some(v) = &rep.verdict {
            out!("subnormal: {}", v.subnormal);
            out!("certified: {}", v.certified);
            out!("route: {}", v.route);
            out!("witness: {}", c_str(Complex64::new(v.witness[0], v.witness[1])));
            out!("l: {}\nsize: {}", v.l, v.size);
            if let Some(d) = v.first_minor_det {
                out!("first_minor_det: {}", fmt_f64(d));
            }
        }
        if let Some(t) = rep.timing.elapsed_ms {
            out!("elapsed_ms: {t:.3}");
        }
    }
    if let Some(e) = &rep.error {
        eprintln!("error: {}", e.message);
    }
    code
}

#[derive(Serialize)]
struct KernelValue {
    method: &'static str,
    value: Option<report::Pair>,
    error: Option<String>,
}

#[derive(Serialize)]
struct KernelReport {
    command: &'static str,
    input: Input,
    z: report::Pair,
    w: report::Pair,
    values: Vec<KernelValue>,
    /// `|costara - debranges|` when both were evaluated.
    discrepancy: Option<f64>,
    /// Largest gap between the closed formula and the other routes.
    closed_discrepancy: Option<f64>,
    timing: report::Timing,
    error: Option<ErrorBlock>,
}

fn kernel(a: KernelArgs) -> u8 {
    use cdsp_core::KernelMethod;

    let start = Instant::now();
    let m = match measure(&a.measure) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    let tol = tolerances(a.common.tol);
    let mut rep = KernelReport {
        command: "kernel",
        input: input(&m, &a.common, None, &tol),
        z: [a.z.re, a.z.im],
        w: [a.w.re, a.w.im],
        values: Vec::new(),
        discrepancy: None,
        closed_discrepancy: None,
        timing: report::Timing { elapsed_ms: None },
        error: None,
    };
    let mut code = 0;
    match Pipeline::new(&m, &tol, a.common.convention.into()) {
        Ok(p) => {
            let k = p.kernel();
            let mut got = Vec::new();
            for method in a.method.methods() {
                let r = if k.supports(method) {
                    k.eval(a.z, a.w, method)
                } else {
                    Err(Error::UnsupportedMeasure("closed formula needs unit weights"))
                };
                match r {
                    Ok(v) => {
                        got.push((method, v));
                        rep.values.push(KernelValue { method: method.name(), value: Some([v.re, v.im]), error: None });
                    }
                    Err(e) => {
                        if matches!(e, Error::OutsideDomain) {
                            code = EXIT_USAGE;
                        }
                        rep.values.push(KernelValue { method: method.name(), value: None, error: Some(e.to_string()) });
                    }
                }
            }
            let find = |m: KernelMethod| got.iter().find(|(g, _)| *g == m).map(|(_, v)| *v);
            if let (Some(c), Some(d)) = (find(KernelMethod::Costara), find(KernelMethod::DeBranges)) {
                rep.discrepancy = Some((c - d).norm());
            }
            if let Some(cl) = find(KernelMethod::ClosedTwoPoint) {
                rep.closed_discrepancy = got
                    .iter()
                    .filter(|(g, _)| *g != KernelMethod::ClosedTwoPoint)
                    .map(|(_, v)| (cl - v).norm())
                    .reduce(f64::max);
            }
        }
        Err(e) => {
            code = EXIT_PIPELINE;
            rep.error = Some(ErrorBlock::from(&e));
        }
    }
    rep.timing.elapsed_ms = elapsed(start, a.common.timing);
    if a.common.json {
        out!("{}", to_json(&rep));
    } else {
        for v in &rep.values {
            match (&v.value, &v.error) {
                (Some(x), _) => out!("{}: {}", v.method, c_str(Complex64::new(x[0], x[1]))),
                (None, Some(e)) => out!("{}: error: {e}", v.method),
                _ => {}
            }
        }
        if let Some(d) = rep.discrepancy {
            out!("discrepancy: {}", fmt_f64(d));
        }
        if let Some(d) = rep.closed_discrepancy {
            out!("closed_discrepancy: {}", fmt_f64(d));
        }
    }
    if let Some(e) = &rep.error {
        eprintln!("error: {}", e.message);
    }
    code
}
