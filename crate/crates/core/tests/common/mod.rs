//! Independent reference computations and proptest strategies shared by
//! the integration tests. Nothing here calls the library's kernels.

#![allow(dead_code)]

use std::collections::HashMap;

use logsig::path::PiecewisePath;
use logsig::C64;
use proptest::prelude::*;

pub type WordMap = HashMap<Vec<usize>, f64>;

fn all_words(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..d).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Signature as an explicit word map: product of segment exponentials,
/// each word coefficient written out by hand.
pub fn naive_signature(p: &PiecewisePath, depth: usize) -> WordMap {
    let d = p.dim();
    let words: Vec<Vec<usize>> = (0..=depth).flat_map(|n| all_words(d, n)).collect();
    let mut s: WordMap = words.iter().map(|w| (w.clone(), if w.is_empty() { 1.0 } else { 0.0 })).collect();
    for pair in p.vertices().windows(2) {
        let delta: Vec<f64> = pair[1].iter().zip(&pair[0]).map(|(b, a)| b - a).collect();
        let seg = |w: &[usize]| -> f64 {
            let fact: f64 = (1..=w.len()).map(|k| k as f64).product();
            w.iter().map(|&a| delta[a]).product::<f64>() / fact
        };
        let mut next = WordMap::new();
        for w in &words {
            let v: f64 = (0..=w.len()).map(|i| s[&w[..i].to_vec()] * seg(&w[i..])).sum();
            next.insert(w.clone(), v);
        }
        s = next;
    }
    s
}

/// `∫_{t_1<...<t_m} prod e^{a_k x_{t_k}} dy_{t_1}...dy_{t_m}` by the
/// trapezoid rule on `n` steps per segment.
pub fn riemann_iterated(p: &PiecewisePath, rates: &[C64], n: usize) -> C64 {
    let zero = C64::new(0.0, 0.0);
    let mut f = vec![zero; rates.len() + 1];
    f[0] = C64::new(1.0, 0.0);
    for pair in p.vertices().windows(2) {
        let (x0, y0) = (pair[0][0], pair[0][1]);
        let (dx, dy) = (pair[1][0] - x0, pair[1][1] - y0);
        let h = 1.0 / n as f64;
        for step in 0..n {
            let (ua, ub) = (step as f64 * h, (step + 1) as f64 * h);
            let (xa, xb) = (x0 + ua * dx, x0 + ub * dx);
            // second-order step for the triangular system F_k' = e^{a_k x} F_{k-1} y'
            let old = f.clone();
            let mut pred = old.clone();
            for k in 1..=rates.len() {
                pred[k] = old[k] + (rates[k - 1] * xa).exp() * old[k - 1] * dy * h;
            }
            for k in 1..=rates.len() {
                let ga = (rates[k - 1] * xa).exp() * old[k - 1];
                let gb = (rates[k - 1] * xb).exp() * pred[k - 1];
                f[k] = old[k] + (ga + gb) * (0.5 * dy * h);
            }
            // reuse the corrected lower levels for the upper ones
            for k in 1..=rates.len() {
                let ga = (rates[k - 1] * xa).exp() * old[k - 1];
                let gb = (rates[k - 1] * xb).exp() * f[k - 1];
                f[k] = old[k] + (ga + gb) * (0.5 * dy * h);
            }
        }
    }
    f[rates.len()]
}

/// Winding number by signed crossings of the rightward horizontal ray.
pub fn crossing_winding(p: &PiecewisePath, q: (f64, f64)) -> i64 {
    let mut w = 0;
    for pair in p.vertices().windows(2) {
        let (ax, ay, bx, by) = (pair[0][0], pair[0][1], pair[1][0], pair[1][1]);
        let cross = (bx - ax) * (q.1 - ay) - (q.0 - ax) * (by - ay);
        if ay <= q.1 && by > q.1 && cross > 0.0 {
            w += 1;
        } else if ay > q.1 && by <= q.1 && cross < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Planar path with `segments` random increments in `[-1, 1]^2`.
pub fn planar_path(segments: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PiecewisePath> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), segments).prop_map(|steps| {
        let mut pts = vec![(0.0, 0.0)];
        for (dx, dy) in steps {
            let (x, y) = *pts.last().unwrap();
            pts.push((x + dx, y + dy));
        }
        PiecewisePath::planar(&pts).unwrap()
    })
}

/// Path from `(0,0)` to `(1,0)` through random interior vertices.
pub fn normalized_path(interior: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PiecewisePath> {
    prop::collection::vec((-0.5f64..1.5, -1.0f64..1.0), interior).prop_map(|mid| {
        let mut pts = vec![(0.0, 0.0)];
        pts.extend(mid);
        pts.push((1.0, 0.0));
        PiecewisePath::planar(&pts).unwrap()
    })
}

pub fn complex(bound: f64) -> impl Strategy<Value = C64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| C64::new(re, im))
}

/// Random tensor over `dim` letters with every coefficient in the unit box.
pub fn tensor(dim: usize, depth: usize) -> impl Strategy<Value = logsig::GradedTensor> {
    let sizes: Vec<usize> = (0..=depth).map(|n| dim.pow(n as u32)).collect();
    let total: usize = sizes.iter().sum();
    prop::collection::vec(complex(1.0), total).prop_map(move |flat| {
        let mut levels = Vec::new();
        let mut at = 0;
        for &s in &sizes {
            levels.push(flat[at..at + s].to_vec());
            at += s;
        }
        logsig::GradedTensor::from_levels(dim, levels).unwrap()
    })
}

/// Same as [`tensor`] with a zero scalar part.
pub fn nilpotent_tensor(dim: usize, depth: usize) -> impl Strategy<Value = logsig::GradedTensor> {
    tensor(dim, depth).prop_map(|mut t| {
        t.level_mut(0)[0] = C64::new(0.0, 0.0);
        t
    })
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
