mod common;

use std::f64::consts::PI;

use common::{complex, normalized_path, planar_path, riemann_iterated};
use logsig::exp_integrals::{
    exp_line_integral, iterated_exp_integral, line_integral_quadrature, one_form_integral, pq_double_integral,
    s_m, s_m_route_a, s_m_route_b, FourierOneForm,
};
use logsig::identity::is_nondegenerate;
use logsig::path::{figure_eight, line, PiecewisePath};
use logsig::tensor::{index_word, shuffle};
use logsig::C64;
use proptest::prelude::*;

fn tpi(k: i64) -> C64 {
    C64::new(0.0, 2.0 * PI * k as f64)
}

#[test]
fn figure_eight_pq_value() {
    let v = pq_double_integral(&figure_eight(), 1, 2).unwrap();
    let expected = C64::new(0.0, -1.0 / (2.0 * PI * PI));
    assert!((v - expected).norm() <= 1e-10, "{v}");
    let oracle = riemann_iterated(&figure_eight(), &[tpi(1), tpi(2)], 20_000);
    assert!((v - oracle).norm() <= 1e-6, "{v} vs {oracle}");
}

#[test]
fn line_diagonal_iterated_vanish() {
    let diag = line(&[1.0, 1.0]).unwrap();
    let ks: Vec<i64> = (-2..=2).filter(|&k| k != 0).collect();
    for m in 1..=3usize {
        for idx in 0..ks.len().pow(m as u32) {
            let seq: Vec<i64> = index_word(ks.len(), m, idx).into_iter().map(|i| ks[i]).collect();
            if !is_nondegenerate(&seq) {
                continue;
            }
            let rates: Vec<C64> = seq.iter().map(|&k| tpi(k)).collect();
            assert!(s_m(&diag, &rates).unwrap().norm() <= 1e-10, "{seq:?}");
        }
    }
}

#[test]
fn one_form_against_trapezoid() {
    let p = PiecewisePath::planar(&[(0.0, 0.0), (0.3, 0.8), (0.9, -0.4), (1.0, 0.0)]).unwrap();
    let form = FourierOneForm::new()
        .with_f(2, vec![C64::new(0.5, 0.0), C64::new(0.0, 1.0)])
        .with_g(-1, vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
        .with_g(0, vec![C64::new(0.25, 0.0)]);
    let mut oracle = C64::new(0.0, 0.0);
    let n = 20_000;
    for w in p.vertices().windows(2) {
        let (dx, dy) = (w[1][0] - w[0][0], w[1][1] - w[0][1]);
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let (f, g) = form.eval(w[0][0] + t * dx, w[0][1] + t * dy);
            oracle += (f * dx + g * dy) / n as f64;
        }
    }
    assert!((one_form_integral(&p, &form).unwrap() - oracle).norm() <= 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn line_integral_matches_oracle(p in planar_path(1..=4), a in complex(6.0)) {
        let v = exp_line_integral(&p, a).unwrap();
        let o = riemann_iterated(&p, &[a], 4000);
        prop_assert!((v - o).norm() <= 1e-5 * o.norm().max(1.0), "{} vs {}", v, o);
    }

    #[test]
    fn iterated_matches_oracle(p in planar_path(1..=3), rates in prop::collection::vec(complex(4.0), 1..=3)) {
        let v = iterated_exp_integral(&p, &rates).unwrap();
        let o = riemann_iterated(&p, &rates, 4000);
        prop_assert!((v - o).norm() <= 1e-5 * o.norm().max(1.0), "{} vs {}", v, o);
    }

    #[test]
    fn shuffle_relation(p in planar_path(4..=4), pool in prop::collection::vec(complex(3.0), 4), nu in 1usize..=3, nv in 1usize..=3) {
        prop_assume!(nu + nv <= 4);
        // letters index into `pool`
        let u: Vec<usize> = (0..nu).collect();
        let v: Vec<usize> = (nu..nu + nv).collect();
        let rate = |w: &[usize]| -> Vec<C64> { w.iter().map(|&i| pool[i]).collect() };
        let lhs = iterated_exp_integral(&p, &rate(&u)).unwrap() * iterated_exp_integral(&p, &rate(&v)).unwrap();
        let rhs: C64 = shuffle(&u, &v).iter().map(|w| iterated_exp_integral(&p, &rate(w)).unwrap()).sum();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn s_m_routes_agree(p in planar_path(1..=4), rates in prop::collection::vec(complex(3.0), 1..=4)) {
        let a = s_m_route_a(&p, &rates).unwrap();
        let b = s_m_route_b(&p, &rates).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn s_m_on_diagonal_line(ks in prop::collection::vec((1i64..=3, any::<bool>()), 1..=4)) {
        let seq: Vec<i64> = ks.iter().map(|&(k, neg)| if neg { -k } else { k }).collect();
        prop_assume!(is_nondegenerate(&seq));
        let rates: Vec<C64> = seq.iter().map(|&k| tpi(k)).collect();
        prop_assert!(s_m(&line(&[1.0, 1.0]).unwrap(), &rates).unwrap().norm() <= 1e-10);
    }

    #[test]
    fn integration_by_parts(p in normalized_path(1..=4), k in 1i64..=3, lambda in -4.0f64..4.0) {
        let w = 2.0 * PI * k as f64;
        let phase = move |x: f64, y: f64| C64::new(0.0, w * x + lambda * y).exp();
        let zero = C64::new(0.0, 0.0);
        let ix = line_integral_quadrature(&p, 1e-12, |x, y| (phase(x, y), zero)).unwrap();
        let iy = line_integral_quadrature(&p, 1e-12, |x, y| (zero, phase(x, y))).unwrap();
        prop_assert!((ix * w + iy * lambda).norm() <= 1e-9, "{} {}", ix, iy);
    }
}
