mod common;

use common::{complex, nilpotent_tensor};
use logsig::free_lie::{
    bch, bernoulli, consecutive_shuffle_rhs, consecutive_shuffle_sum, hausdorff_h1, hausdorff_hn,
    hausdorff_partial_sum, hn_vector_direct, hn_vector_recursive, liemon_expand, neo_classical_sides,
    right_nested_bracket, set_partitions,
};
use logsig::tensor::index_word;
use logsig::{GradedTensor, C64};
use proptest::prelude::*;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn bernoulli_table() {
    let table = [
        1.0,
        -0.5,
        1.0 / 6.0,
        0.0,
        -1.0 / 30.0,
        0.0,
        1.0 / 42.0,
        0.0,
        -1.0 / 30.0,
        0.0,
        5.0 / 66.0,
        0.0,
        -691.0 / 2730.0,
        0.0,
        7.0 / 6.0,
    ];
    for (m, b) in table.iter().enumerate() {
        assert!((bernoulli(m).unwrap() - b).abs() <= 1e-15 * b.abs().max(1.0), "B_{m}");
    }
}

#[test]
fn bch_low_degree_terms() {
    let v = GradedTensor::letter(2, 3, 0).unwrap();
    let w = GradedTensor::letter(2, 3, 1).unwrap();
    let vw = v.bracket(&w).unwrap();
    let expected = v
        .add(&w)
        .unwrap()
        .add(&vw.scale(r(0.5)))
        .unwrap()
        .add(&v.bracket(&vw).unwrap().scale(r(1.0 / 12.0)))
        .unwrap()
        .sub(&w.bracket(&vw).unwrap().scale(r(1.0 / 12.0)))
        .unwrap();
    assert!(bch(&v, &w).unwrap().max_abs_diff(&expected).unwrap() <= 1e-15);
}

#[test]
fn hausdorff_sum_equals_bch_on_letters() {
    let v = GradedTensor::letter(2, 8, 0).unwrap();
    let w = GradedTensor::letter(2, 8, 1).unwrap();
    let b = bch(&v, &w).unwrap();
    let mut sum = GradedTensor::zeros(2, 8).unwrap();
    for n in 0..=8 {
        sum = sum.add(&hausdorff_hn(n, &v, &w).unwrap()).unwrap();
    }
    assert!(sum.max_abs_diff(&b).unwrap() <= 1e-10);
    assert!(hausdorff_partial_sum(8, &v, &w).unwrap().max_abs_diff(&b).unwrap() <= 1e-10);
}

#[test]
fn hausdorff_terms_are_homogeneous_in_v() {
    let v = GradedTensor::letter(2, 6, 0).unwrap();
    let w = GradedTensor::letter(2, 6, 1).unwrap();
    for n in 0..=4 {
        let h = hausdorff_hn(n, &v, &w).unwrap();
        for deg in 0..=6 {
            for (idx, c) in h.level(deg).iter().enumerate() {
                if c.norm() > 0.0 {
                    let vs = index_word(2, deg, idx).iter().filter(|&&a| a == 0).count();
                    assert_eq!(vs, n);
                }
            }
        }
    }
}

#[test]
fn liemon_exhaustive() {
    for m in 1..=6usize {
        for idx in 0..3usize.pow(m as u32) {
            let word = index_word(3, m, idx);
            assert_eq!(liemon_expand(3, &word).unwrap(), right_nested_bracket(3, &word).unwrap(), "{word:?}");
        }
    }
}

#[test]
fn hn_recursion_matches_definition() {
    for n in 1..=3usize {
        for idx in 0..3usize.pow(n as u32) {
            let ks: Vec<usize> = index_word(3, n, idx).into_iter().map(|k| k + 1).collect();
            let (_, direct) = hn_vector_direct(&ks, 5).unwrap();
            let (_, rec) = hn_vector_recursive(&ks, 5).unwrap();
            assert!(direct.max_abs_diff(&rec).unwrap() <= 1e-12, "K = {ks:?}");
        }
    }
}

#[test]
fn set_partition_counts_are_bell_numbers() {
    let bell = [1, 1, 2, 5, 15, 52];
    for (n, b) in bell.iter().enumerate().skip(1) {
        let items: Vec<usize> = (0..n).collect();
        assert_eq!(set_partitions(&items).len(), *b);
    }
}

#[test]
fn neo_classical_inequality() {
    for p in [1.0, 2.0, 3.0] {
        for m in 0..=30 {
            let (lhs, rhs) = neo_classical_sides(p, m);
            assert!(lhs <= rhs * (1.0 + 1e-12), "p = {p}, m = {m}: {lhs} > {rhs}");
        }
    }
    // p = 1 is the binomial theorem
    for m in 0..=20 {
        let (lhs, rhs) = neo_classical_sides(1.0, m);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }
}

fn consecutive_sums_ok(c: &[C64]) -> bool {
    (0..c.len()).all(|i| (i..c.len()).all(|j| c[i..=j].iter().sum::<C64>().norm() >= 0.1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hausdorff_sum_equals_bch(v in nilpotent_tensor(2, 5), w in nilpotent_tensor(2, 5)) {
        let b = bch(&v, &w).unwrap();
        let s = hausdorff_partial_sum(5, &v, &w).unwrap();
        prop_assert!(s.max_abs_diff(&b).unwrap() <= 1e-10 * b.max_abs().max(1.0));
    }

    #[test]
    fn h1_is_linear_part_of_bch(v in nilpotent_tensor(2, 4), w in nilpotent_tensor(2, 4)) {
        // d/dt bch(t v, w) at t = 0, by a symmetric difference on a polynomial in t
        let t = 1e-3;
        let plus = bch(&v.scale(r(t)), &w).unwrap();
        let minus = bch(&v.scale(r(-t)), &w).unwrap();
        let fd = plus.sub(&minus).unwrap().scale(r(0.5 / t));
        let h1 = hausdorff_h1(&v, &w).unwrap();
        prop_assert!(fd.max_abs_diff(&h1).unwrap() <= 1e-4 * h1.max_abs().max(1.0));
    }

    #[test]
    fn consecutive_shuffle_identity(c in prop::collection::vec(complex(2.0), 1..=7), s_frac in 0.0f64..1.0) {
        prop_assume!(consecutive_sums_ok(&c));
        let big_r = c.len() - 1;
        let s = ((big_r + 1) as f64 * s_frac) as usize;
        let s = s.min(big_r);
        let lhs = consecutive_shuffle_sum(&c, s).unwrap();
        let rhs = consecutive_shuffle_rhs(&c, s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm(), "{} vs {}", lhs, rhs);
    }
}
