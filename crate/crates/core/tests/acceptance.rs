//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;

use cdsp_core::cdsp::{case2_closed_minor, case2_prefactor, cor43_test, minor_confluent, Pipeline, Route};
use cdsp_core::debranges::{distinct_rows, AMatrixMode};
use cdsp_core::rieszfejer::{factorize, factorize_two_point, g_polynomial};
use cdsp_core::{
    CaseTag, CMatrix, Complex64, ComplexPolynomial, Convention, DeBrangesData, DecideConfig, GramData,
    KernelMethod, OuterFunction, Tolerances, TwoPointMeasure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm()
}

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn random_disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

fn golden_confluent() -> Outcome {
    let tol = Tolerances::default();
    let m = TwoPointMeasure::from_cos(0.6, 1.0, 1.0).map_err(|e| e.to_string())?;
    let kc = Pipeline::new(&m, &tol, Convention::KernelConsistent).map_err(|e| e.to_string())?;
    let fact = &kc.fact;
    for alpha in &fact.alphas {
        ensure((alpha - c(2.0, 1.0)).norm() < 1e-9, format!("alpha = {alpha}"))?;
    }
    let report = fact.two_point.ok_or("no two-point report")?;
    ensure(report.case == CaseTag::Confluent, format!("case {:?}", report.case))?;
    ensure((report.b - 5.0).abs() < 1e-10, format!("b = {}", report.b))?;
    ensure((report.a - 2.5).abs() < 1e-10, format!("a = {}", report.a))?;
    ensure((kc.gram.delta - 1.0).abs() < 1e-10, format!("Delta = {}", kc.gram.delta))?;
    let expected = CMatrix::from_rows(&[vec![c(14.0, 0.0), c(-8.0, -4.0)], vec![c(-8.0, 4.0), c(6.0, 0.0)]]);
    let gap = kc.debranges.a.max_abs_diff(&expected);
    ensure(gap < 1e-9, format!("A off by {gap:e}"))?;

    // minor entries under the literal factor and shortcut rows
    let db = DeBrangesData::build(fact, &kc.outer, &kc.gram, AMatrixMode::Generic, Convention::Literal, &tol)
        .map_err(|e| e.to_string())?;
    let rows = db.taylor_rows(8).map_err(|e| e.to_string())?;
    let minor = minor_confluent(&rows, 1, 2, &tol).map_err(|e| e.to_string())?;
    let n = &minor.matrix;
    let n00 = c(228.0 / 625.0, 0.0);
    let n01 = c(344.0 / 3125.0, 512.0 / 3125.0);
    let n11 = c(332.0 / 3125.0, 0.0);
    let det = -2000.0 / 9765625.0;
    let errs = [
        rel(n[(0, 0)], n00),
        rel(n[(0, 1)], n01),
        rel(n[(1, 1)], n11),
        (minor.minors[1] - det).abs() / det.abs(),
    ];
    ensure(
        errs.iter().all(|e| *e < 1e-12),
        format!("n00 {} n01 {} n11 {} N {} (rel errs {errs:?})", n[(0, 0)], n[(0, 1)], n[(1, 1)], minor.minors[1]),
    )?;
    let kc_minor = kc.minor(1, 2, &tol).map_err(|e| e.to_string())?;
    Ok(format!(
        "alpha=2+i double, b=5, a=5/2, Delta=1, A exact; N={:.6e} (literal rows); kernel-consistent l=1 det={:.6e}",
        minor.minors[1], kc_minor.minors[1]
    ))
}

fn verdict_table() -> Outcome {
    let cfg = DecideConfig::default();
    let mut summary = Vec::new();
    for (theta, expect_subnormal) in [
        (PI, true),
        (0.3, false),
        (0.7, false),
        (PI / 2.0, false),
        (0.6f64.acos(), false),
        (2.0, false),
        (2.8, false),
    ] {
        let m = TwoPointMeasure::unit(theta).map_err(|e| e.to_string())?;
        let v = cdsp_core::decide(&m, &cfg).map_err(|e| format!("theta {theta}: {e}"))?;
        ensure(v.subnormal == expect_subnormal, format!("theta {theta}: subnormal = {}", v.subnormal))?;
        if expect_subnormal {
            ensure(v.route == Route::Antipodal, format!("theta {theta}: route {:?}", v.route))?;
        } else {
            let w = v.witness;
            let ok = match v.route {
                Route::Cor43 => w.norm() > 1e-8,
                _ => w.im == 0.0 && w.re < -1e-8,
            };
            ensure(ok, format!("theta {theta}: witness {w} via {:?}", v.route))?;
        }
        summary.push(format!("{theta:.4}:{}", v.route.name()));
    }
    Ok(summary.join(" "))
}

fn riesz_fejer_residual() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta = rng.gen_range(1e-3..PI);
        let c1 = rng.gen_range(0.1..10.0);
        let c2 = rng.gen_range(0.1..10.0);
        let m = TwoPointMeasure::new(theta, c1, c2).map_err(|e| e.to_string())?;
        let fact = factorize(&m.to_general(), &tol).map_err(|e| format!("({theta}, {c1}, {c2}): {e}"))?;
        worst = worst.max(fact.identity_residual);
    }
    ensure(worst < 1e-9, format!("worst relative residual {worst:e}"))?;
    Ok(format!("100 measures, worst relative residual {worst:.2e}"))
}

fn kernel_routes() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for theta in [0.3, PI / 2.0, 0.6f64.acos(), 2.5, PI] {
        let m = TwoPointMeasure::unit(theta).map_err(|e| e.to_string())?;
        let k = Pipeline::new(&m, &tol, Convention::KernelConsistent)
            .map_err(|e| e.to_string())?
            .kernel();
        for _ in 0..100 {
            let z = random_disk_point(&mut rng, 0.9);
            let w = random_disk_point(&mut rng, 0.9);
            let a = k.eval(z, w, KernelMethod::Costara).map_err(|e| e.to_string())?;
            let b = k.eval(z, w, KernelMethod::DeBranges).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).norm());
        }
        let points: Vec<Complex64> = (0..8).map(|_| random_disk_point(&mut rng, 0.9)).collect();
        for method in [KernelMethod::Costara, KernelMethod::DeBranges] {
            let gram = k.matrix(&points, method).map_err(|e| e.to_string())?;
            min_eig = min_eig.min(gram.min_hermitian_eigenvalue().map_err(|e| e.to_string())?);
        }
    }
    ensure(worst < 1e-8, format!("route gap {worst:e}"))?;
    ensure(min_eig >= -1e-9, format!("kernel matrix eigenvalue {min_eig:e}"))?;
    Ok(format!("max |costara - debranges| {worst:.2e}, min kernel-matrix eigenvalue {min_eig:.2e}"))
}

fn structural_identities() -> Outcome {
    let tol = Tolerances::default();
    let mut worst = [0.0f64; 5];
    for i in 1..=50 {
        let theta = PI * i as f64 / 50.0;
        let m = TwoPointMeasure::unit(theta).map_err(|e| e.to_string())?;
        let fact = factorize_two_point(&m, &tol).map_err(|e| format!("theta {theta}: {e}"))?;
        let r = fact.two_point.ok_or("no report")?;
        let xi = m.xi();
        let (a1, a2) = (fact.alphas[0], fact.alphas[1]);
        let outer = OuterFunction::new(&fact);
        let gram = GramData::new(&outer, &tol).map_err(|e| e.to_string())?;
        let cos = theta.cos();
        let vals = [
            (a1 * a2 - xi * r.b).norm(),
            (a1 + a2 - (c(1.0, 0.0) + xi) * r.a).norm(),
            g_polynomial(cos).eval(c(r.b, 0.0)).norm(),
            (gram.b[(0, 0)] - r.a + 1.0).norm().max((gram.b[(1, 1)] - r.a + 1.0).norm()),
            (gram.c[(0, 1)].norm_sqr() - 1.0 / (2.0 * (1.0 - cos))).abs(),
        ];
        for (w, v) in worst.iter_mut().zip(vals) {
            *w = w.max(v);
        }
    }
    let limits = [1e-9, 1e-9, 1e-8, 1e-9, 1e-9];
    ensure(
        worst.iter().zip(limits).all(|(w, l)| *w < l),
        format!("worst residuals {worst:?}"),
    )?;
    Ok(format!(
        "50 angles: product {:.1e}, sum {:.1e}, g(b) {:.1e}, B diag {:.1e}, |c12|^2 {:.1e}",
        worst[0], worst[1], worst[2], worst[3], worst[4]
    ))
}

fn case2_cross_route() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for cos in [0.65, 0.8, 0.9, 0.95] {
        let m = TwoPointMeasure::from_cos(cos, 1.0, 1.0).map_err(|e| e.to_string())?;
        let p = Pipeline::new(&m, &tol, Convention::KernelConsistent).map_err(|e| e.to_string())?;
        let k = match p.fact.case() {
            Some(CaseTag::Collinear { k }) => k,
            other => return Err(format!("cos {cos}: case {other:?}")),
        };
        let d = case2_closed_minor(&p.fact, &p.debranges.p_polys).map_err(|e| e.to_string())?;
        let minor = p.minor(1, 2, &tol).map_err(|e| e.to_string())?.minors[1];
        let closed = case2_prefactor(k, p.fact.alphas[0]) * d;
        worst = worst.max((closed - minor).abs() / minor.abs());
    }
    ensure(worst < 1e-10, format!("relative gap {worst:e}"))?;
    Ok(format!("4 angles, worst relative gap {worst:.2e}"))
}

fn cor43_consistency() -> Outcome {
    let tol = Tolerances::default();
    let cfg = DecideConfig::default();
    let mut applicable = 0;
    for i in 1..=50 {
        let theta = PI * i as f64 / 51.0;
        if (theta.cos() - 0.6).abs() < 1e-3 {
            continue;
        }
        let m = TwoPointMeasure::unit(theta).map_err(|e| e.to_string())?;
        let p = Pipeline::new(&m, &tol, Convention::KernelConsistent).map_err(|e| e.to_string())?;
        let cor = cor43_test(&p.debranges.p_polys, &p.debranges.alphas, &tol).map_err(|e| e.to_string())?;
        if !cor.applicable {
            continue;
        }
        applicable += 1;
        let cor_subnormal = cor.defect_is_zero(&tol);
        let scan = p.scan(cfg.l_max, cfg.size, &tol).map_err(|e| e.to_string())?;
        ensure(
            cor_subnormal != scan.refuted(),
            format!("theta {theta}: defect {} vs scan refuted {}", cor.defect, scan.refuted()),
        )?;
    }
    ensure(applicable > 0, "defect test never applicable".into())?;
    Ok(format!("{applicable} grid angles with the defect test applicable, all agree with the minor scan"))
}

/// Taylor coefficients of `p / prod (z - alpha_r)` as a product of
/// geometric series `1/(z - alpha) = -sum z^m / alpha^{m+1}`.
fn geometric_oracle(p: &ComplexPolynomial, alphas: &[Complex64], terms: usize) -> Vec<Complex64> {
    let mut acc: Vec<Complex64> = (0..terms).map(|m| p.coeff(m)).collect();
    for &alpha in alphas {
        let geo: Vec<Complex64> = (0..terms).map(|m| -alpha.powi(-(m as i32) - 1)).collect();
        acc = (0..terms).map(|m| (0..=m).map(|i| acc[i] * geo[m - i]).sum()).collect();
    }
    acc
}

fn taylor_oracle() -> Outcome {
    let tol = Tolerances::default();
    let m_max = 40;
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut thetas: Vec<f64> = (0..20).map(|_| rng.gen_range(0.05..PI)).collect();
    thetas.push(0.6f64.acos());
    for theta in thetas {
        let m = TwoPointMeasure::unit(theta).map_err(|e| e.to_string())?;
        let p = Pipeline::new(&m, &tol, Convention::KernelConsistent).map_err(|e| e.to_string())?;
        let db = &p.debranges;
        let rows = if db.confluent {
            db.taylor_rows(m_max).map_err(|e| e.to_string())?
        } else {
            distinct_rows(&db.p_polys, &db.alphas, m_max).map_err(|e| e.to_string())?
        };
        for (j, pj) in db.p_polys.iter().enumerate() {
            let oracle = geometric_oracle(pj, &db.alphas, m_max + 1);
            for mm in 1..=m_max {
                worst = worst.max((rows.row(mm)[j] - oracle[mm]).norm());
            }
        }
        let ld = db.long_division_rows(m_max).map_err(|e| e.to_string())?;
        for mm in 1..=m_max {
            for (x, y) in rows.row(mm).iter().zip(ld.row(mm)) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    ensure(worst < 1e-12, format!("max coefficient error {worst:e}"))?;
    Ok(format!("20 distinct + 1 confluent configuration, m <= 40, max error {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden confluent case", golden_confluent),
        ("verdict table", verdict_table),
        ("Riesz-Fejer residual", riesz_fejer_residual),
        ("kernel route agreement", kernel_routes),
        ("structural identities", structural_identities),
        ("Case-2 cross-route", case2_cross_route),
        ("defect test vs minor scan", cor43_consistency),
        ("Taylor oracle", taylor_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
