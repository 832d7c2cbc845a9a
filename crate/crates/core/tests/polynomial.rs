use cdsp_core::{Complex64, ComplexPolynomial, GeneralMeasure, TwoPointMeasure};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_reconstruct(coeffs in prop::collection::vec(complex(), 2..=9)) {
        prop_assume!(coeffs.last().unwrap().norm() > 0.1);
        let p = ComplexPolynomial::new(coeffs.clone());
        let roots = p.roots(1e-11).unwrap().roots;
        prop_assert_eq!(roots.len(), p.degree().unwrap());
        let rebuilt = ComplexPolynomial::from_roots(p.leading(), &roots);
        let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        prop_assert!(rebuilt.max_coeff_diff(&p) < 1e-10 * scale, "gap {}", rebuilt.max_coeff_diff(&p));
    }

    #[test]
    fn synthetic_division_inverts_multiplication(
        coeffs in prop::collection::vec(complex(), 1..=6),
        r in complex(),
    ) {
        let q = ComplexPolynomial::new(coeffs);
        let linear = ComplexPolynomial::new(vec![-r, Complex64::new(1.0, 0.0)]);
        let product = &q * &linear;
        let back = product.synth_divide(r, 1e-9).unwrap();
        prop_assert!(back.max_coeff_diff(&q) < 1e-12 * (1.0 + r.norm()).powi(6));
    }

    #[test]
    fn boundary_polynomial_is_self_reciprocal(theta in 0.01..std::f64::consts::PI, c1 in 0.1..10.0f64, c2 in 0.1..10.0f64) {
        let m = TwoPointMeasure::new(theta, c1, c2).unwrap().to_general();
        let laurent = m.laurent();
        let n = laurent.len() - 1;
        for k in 0..=n {
            prop_assert!((laurent[k] - laurent[n - k].conj()).norm() < 1e-12 * (1.0 + laurent[k].norm()));
        }
    }
}

#[test]
fn degree_and_trimming() {
    let p = ComplexPolynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
    assert_eq!(p.degree(), Some(1));
    assert_eq!(ComplexPolynomial::zero().degree(), None);
}

#[test]
fn nondivisible_root_is_reported() {
    let p = ComplexPolynomial::from_real(&[1.0, 0.0, 1.0]);
    assert!(p.synth_divide(Complex64::new(1.0, 0.0), 1e-9).is_err());
}

#[test]
fn general_measure_validation() {
    assert!(GeneralMeasure::new(vec![]).is_err());
    assert!(GeneralMeasure::new(vec![(0.0, -1.0)]).is_err());
    assert!(TwoPointMeasure::new(0.0, 1.0, 1.0).is_err());
    assert!(TwoPointMeasure::new(4.0, 1.0, 1.0).is_err());
}
