use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::thread;

use cdsp_core::cdsp::{decide, DecideConfig};
use cdsp_core::{Error, TwoPointMeasure};

use crate::args::SweepArgs;
use crate::report::fmt_f64;
use crate::{tolerances, EXIT_IO, EXIT_USAGE};

pub const HEADER: [&str; 8] = ["theta", "cos_theta", "case", "a", "b", "witness_re", "witness_im", "verdict"];

struct Row {
    theta: f64,
    case: String,
    a: Option<f64>,
    b: Option<f64>,
    witness: Option<(f64, f64)>,
    verdict: &'static str,
}

fn row(theta: f64, c1: f64, c2: f64, cfg: &DecideConfig) -> Row {
    let mut r = Row {
        theta,
        case: String::new(),
        a: None,
        b: None,
        witness: None,
        verdict: "error",
    };
    let measure = match TwoPointMeasure::new(theta, c1, c2) {
        Ok(m) => m,
        Err(_) => return r,
    };
    match decide(&measure, cfg) {
        Ok(v) => {
            if let Some(c) = v.case {
                r.case = c.name().to_string();
            }
            r.witness = Some((v.witness.re, v.witness.im));
            r.verdict = if v.subnormal { "true" } else { "false" };
            if let Ok(f) = cdsp_core::rieszfejer::factorize_two_point(&measure, &cfg.tol) {
                r.a = f.a();
                r.b = f.b();
            }
        }
        Err(e) => {
            r.verdict = if matches!(e, Error::Inconclusive { .. }) { "inconclusive" } else { "error" };
            if let Ok(f) = cdsp_core::rieszfejer::factorize_two_point(&measure, &cfg.tol) {
                r.case = f.case().map(|c| c.name().to_string()).unwrap_or_default();
                r.a = f.a();
                r.b = f.b();
            }
        }
    }
    r
}

/// Inclusive grid; the last point is `theta_max` exactly.
pub fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| if i + 1 == steps { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 })
        .collect()
}

fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for r in rows {
        w.write_record([
            fmt_f64(r.theta),
            fmt_f64(r.theta.cos()),
            r.case.clone(),
            opt(r.a),
            opt(r.b),
            opt(r.witness.map(|w| w.0)),
            opt(r.witness.map(|w| w.1)),
            r.verdict.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(a: SweepArgs) -> u8 {
    if !(a.theta_min > 0.0 && a.theta_min < a.theta_max && a.theta_max <= PI) {
        eprintln!("error: need 0 < theta-min < theta-max <= pi");
        return EXIT_USAGE;
    }
    if a.steps < 2 {
        eprintln!("error: steps must be at least 2");
        return EXIT_USAGE;
    }
    let cfg = DecideConfig {
        l_max: a.scan.l_max,
        size: a.scan.size,
        tol: tolerances(a.tol),
        convention: a.convention.into(),
        case_override: a.scan.case_override.map(Into::into),
    };
    let thetas = grid(a.theta_min, a.theta_max, a.steps);
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(thetas.len());
    let chunk = thetas.len().div_ceil(workers);
    // chunks are joined in order, so rows stay sorted by theta
    let rows: Vec<Row> = thread::scope(|s| {
        let handles: Vec<_> = thetas
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(|&t| row(t, a.c1, a.c2, &cfg)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let result = match &a.out {
        Some(path) => File::create(path).map_err(csv::Error::from).and_then(|f| write_csv(f, &rows)),
        None => write_csv(io::stdout().lock(), &rows),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let g = grid(0.1, PI, 5);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[4], PI);
        assert_eq!(grid(1.0, 2.0, 2), vec![1.0, 2.0]);
    }
}
