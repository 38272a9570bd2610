mod common;

use std::f64::consts::PI;

use common::{complex, normalized_path, planar_path, tensor};
use logsig::cartan::{
    cartan_element, cn_formula_residual, commutator, d12_closed_form_residuals, develop_2d_identity_residual,
    fdk_residual, hat_f, matrix_unit, max_norm, nilpotent_sum, ComplexMatrix, DevelopmentMap,
};
use logsig::path::{figure_eight, line_conjugate, random_normalized};
use logsig::signature::{log_signature, signature};
use logsig::{GradedTensor, C64};
use proptest::prelude::*;

fn mat_exp(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.nrows();
    let mut out = ComplexMatrix::identity(n, n);
    let mut term = ComplexMatrix::identity(n, n);
    for k in 1..60 {
        term = &term * a / C64::new(k as f64, 0.0);
        out += &term;
    }
    out
}

fn trace(a: &ComplexMatrix) -> C64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

#[test]
fn root_pattern() {
    let rates = [C64::new(0.3, 1.0), C64::new(-2.0, 0.5), C64::new(1.5, -0.7)];
    let m = rates.len();
    let a = cartan_element(&rates).unwrap();
    assert!(trace(&a).norm() <= 1e-14);
    assert!(max_norm(&(commutator(&matrix_unit(3, 1, 2), &matrix_unit(3, 2, 3)) - matrix_unit(3, 1, 3))) == 0.0);
    for k in 1..=m {
        for j in 1..=m + 1 - k {
            let e = matrix_unit(m + 1, j, j + k);
            let weight: C64 = rates[j - 1..j - 1 + k].iter().sum();
            assert!(max_norm(&(commutator(&a, &e) - &e * weight)) <= 1e-14, "j = {j}, k = {k}");
        }
    }
    let d = nilpotent_sum(m).unwrap();
    assert!(max_norm(&(d.clone() - (1..=m).fold(ComplexMatrix::zeros(m + 1, m + 1), |acc, j| acc + matrix_unit(m + 1, j, j + 1)))) == 0.0);
}

#[test]
fn d12_closed_forms_at_depth_14() {
    let rates = [C64::new(0.6, 0.3), C64::new(-0.4, 0.8)];
    for p in [figure_eight(), line_conjugate(), random_normalized(3, 5).unwrap()] {
        let (r1, r2) = d12_closed_form_residuals(&p, rates, 14).unwrap();
        assert!(r1 <= 1e-6 && r2 <= 1e-6, "{:?}: {r1} {r2}", p.name());
    }
}

#[test]
fn develop_identity_at_lattice_lambda() {
    for k in 1..=3 {
        let lambda = C64::new(0.0, 2.0 * PI * k as f64);
        let r = develop_2d_identity_residual(&line_conjugate(), lambda, C64::new(1.0, 0.0), 18).unwrap();
        assert!(r.residual <= 1e-6, "k = {k}: {r:?}");
    }
}

#[test]
fn fdk_on_figure_eight() {
    let rates = [C64::new(0.6, 0.3), C64::new(-0.4, 0.8), C64::new(0.5, -0.7)];
    for k in 1..=3 {
        let r = fdk_residual(&figure_eight(), &rates, k, 14).unwrap();
        assert!(r.residual <= 1e-6, "k = {k}: {r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hat_f_matches_product_of_exponentials(p in planar_path(1..=3), rates in prop::collection::vec(complex(1.0), 2)) {
        let p = p.map_points(|v| vec![0.3 * v[0], 0.3 * v[1]]).unwrap();
        let f = DevelopmentMap::sl(&rates).unwrap();
        let lhs = hat_f(&signature(&p, 16).unwrap(), &f).unwrap();
        let mut rhs = ComplexMatrix::identity(3, 3);
        for w in p.vertices().windows(2) {
            let gen = &f.images()[0] * C64::new(w[1][0] - w[0][0], 0.0) + &f.images()[1] * C64::new(w[1][1] - w[0][1], 0.0);
            rhs *= mat_exp(&gen);
        }
        prop_assert!(max_norm(&(lhs - rhs)) <= 1e-10);
    }

    #[test]
    fn hat_f_is_multiplicative_on_homogeneous(x in tensor(2, 3), y in tensor(2, 3), i in 0usize..=3, j in 0usize..=3, rates in prop::collection::vec(complex(1.0), 2)) {
        let f = DevelopmentMap::sl(&rates).unwrap();
        let xi = x.homogeneous(i).with_depth(6).unwrap();
        let yj = y.homogeneous(j).with_depth(6).unwrap();
        let lhs = hat_f(&xi.mul(&yj).unwrap(), &f).unwrap();
        let rhs = hat_f(&xi, &f).unwrap() * hat_f(&yj, &f).unwrap();
        prop_assert!(max_norm(&(lhs - &rhs)) <= 1e-12 * max_norm(&rhs).max(1.0));
    }

    #[test]
    fn lie_elements_are_traceless(p in planar_path(1..=5), rates in prop::collection::vec(complex(2.0), 1..=3)) {
        let f = DevelopmentMap::sl(&rates).unwrap();
        let img = hat_f(&log_signature(&p, 8).unwrap(), &f).unwrap();
        prop_assert!(trace(&img).norm() <= 1e-10);
    }

    #[test]
    fn cn_formula(p in normalized_path(1..=3), lambda in complex(2.0)) {
        let r = cn_formula_residual(&p, lambda, C64::new(1.0, 0.0), 16).unwrap();
        prop_assert!(r <= 1e-6, "{}", r);
    }

    #[test]
    fn develop_identity_random_lambda(lambda in complex(2.0), mu in complex(1.0)) {
        let r = develop_2d_identity_residual(&line_conjugate(), lambda, mu, 18).unwrap();
        prop_assert!(r.residual <= 1e-6, "{:?}", r);
    }
}

#[test]
fn letters_develop_to_images() {
    let rates = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
    let f = DevelopmentMap::sl(&rates).unwrap();
    let e1 = GradedTensor::letter(2, 2, 0).unwrap();
    let e2 = GradedTensor::letter(2, 2, 1).unwrap();
    assert_eq!(hat_f(&e1, &f).unwrap(), f.images()[0]);
    assert_eq!(hat_f(&e2, &f).unwrap(), f.images()[1]);
    let e12 = e1.mul(&e2).unwrap();
    assert_eq!(hat_f(&e12, &f).unwrap(), &f.images()[0] * &f.images()[1]);
}
