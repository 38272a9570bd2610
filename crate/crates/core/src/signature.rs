//! Signatures and log-signatures of piecewise-linear paths.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{PathTime, PiecewisePath};
use crate::tensor::GradedTensor;

/// Multiplies `s` on the right by `exp(delta)` in place.
fn mul_segment_exp(s: &mut GradedTensor, delta: &[f64]) {
    let d = s.dim();
    for n in (1..=s.depth()).rev() {
        // level n of s ⊗ exp(delta) = sum_k s_{n-k} delta^k / k!
        let mut t: Vec<C64> = s.level(0).to_vec();
        for j in 1..=n {
            let inv = 1.0 / (n - j + 1) as f64;
            let len = t.len();
            let mut next: Vec<C64> = s.level(j).to_vec();
            for (a, &da) in delta.iter().enumerate() {
                if da == 0.0 {
                    continue;
                }
                let f = da * inv;
                for (u, &tu) in t.iter().enumerate() {
                    next[u + len * a] += tu * f;
                }
            }
            t = next;
        }
        s.level_mut(n).copy_from_slice(&t);
    }
    debug_assert_eq!(s.level(0).len(), 1);
    let _ = d;
}

/// Truncated signature: the ordered product of segment exponentials.
pub fn signature(p: &PiecewisePath, depth: usize) -> Result<GradedTensor> {
    let mut s = GradedTensor::one(p.dim(), depth)?;
    for delta in p.increments() {
        mul_segment_exp(&mut s, &delta);
    }
    Ok(s)
}

/// Signature of the restriction of `p` to `[s, t]`.
pub fn signature_interval(p: &PiecewisePath, s: PathTime, t: PathTime, depth: usize) -> Result<GradedTensor> {
    signature(&p.sub_path(s, t)?, depth)
}

/// Truncated log-signature.
pub fn log_signature(p: &PiecewisePath, depth: usize) -> Result<GradedTensor> {
    signature(p, depth)?.log()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rebuilds the signature of a planar path from `x_0 = 0` to `x_1 = 1` as
/// `(sum_n ∫ Ad(x)e_2 ⊗ ... ⊗ Ad(x)e_2 dy...dy) ⊗ exp(e_1)`, where
/// `Ad(x)e_2 = e^{x ad_{e_1}}(e_2)`, and returns the largest deviation from
/// [`signature`]. Each segment is integrated exactly as a polynomial in the
/// segment parameter.
pub fn verify_adjoint_rep(p: &PiecewisePath, depth: usize) -> Result<f64> {
    p.require_planar()?;
    if p.first()[0].abs() > 1e-12 || (p.last()[0] - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition("adjoint check needs x_0 = 0 and x_1 = 1".into()));
    }
    let e1 = GradedTensor::letter(2, depth, 0)?;
    // a[m] = ad_{e1}^m(e2) / m!
    let mut a = vec![GradedTensor::letter(2, depth, 1)?];
    for m in 1..depth {
        let next = e1.bracket(&a[m - 1])?.scale(C64::new(1.0 / m as f64, 0.0));
        a.push(next);
    }
    let mut u_total = GradedTensor::one(2, depth)?;
    for [x0, _, dx, dy] in p.planar_segments()? {
        // z[j]: coefficient of u^j in e^{(x0 + u dx) ad}(e2)
        let mut z = vec![GradedTensor::zeros(2, depth)?; depth.max(1)];
        for (m, am) in a.iter().enumerate() {
            for (j, zj) in z.iter_mut().enumerate().take(m + 1) {
                let c = binomial(m, j) * x0.powi((m - j) as i32) * dx.powi(j as i32);
                if c != 0.0 {
                    zj.add_assign_scaled(am, C64::new(c, 0.0))?;
                }
            }
        }
        // V' = V ⊗ Z dy, V(0) = 1, solved coefficientwise in u
        let mut v = vec![GradedTensor::one(2, depth)?];
        let mut v_at_one = v[0].clone();
        for j in 0..depth * depth + 1 {
            let mut next = GradedTensor::zeros(2, depth)?;
            for (i, vi) in v.iter().enumerate().take(j + 1) {
                if let Some(zk) = z.get(j - i) {
                    next.add_assign_scaled(&vi.mul(zk)?, C64::new(1.0, 0.0))?;
                }
            }
            next.scale_mut(C64::new(dy / (j + 1) as f64, 0.0));
            if next.is_zero() {
                break;
            }
            v_at_one.add_assign_scaled(&next, C64::new(1.0, 0.0))?;
            v.push(next);
        }
        u_total = u_total.mul(&v_at_one)?;
    }
    let rebuilt = u_total.mul(&e1.exp()?)?;
    rebuilt.max_abs_diff(&signature(p, depth)?)
}

/// Tail-decay classification of a log-signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RocVerdict {
    FiniteConsistent,
    InfiniteConsistent,
    DegenerateTail,
}

/// Per-degree norms of a log-signature and the fitted growth rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocProfile {
    /// `level_norm(π_n L)` for `n = 1..=N`.
    pub norms: Vec<f64>,
    /// `level_norm(π_n L)^(1/n)`.
    pub roots: Vec<f64>,
    /// Least-squares slope of `ln level_norm` over degrees `ceil(N/2)..=N`.
    pub slope: f64,
    pub verdict: RocVerdict,
}

/// Smallest growth ratio classed as finite radius of convergence.
pub const RHO_MIN: f64 = 1.05;
/// Level-`n` norms at or below `DEGENERATE_CUTOFF * max(1, |π_1 L|)^n`
/// count as zero.
pub const DEGENERATE_CUTOFF: f64 = 1e-14;

/// Classifies the tail of `log_sig`. Heuristic only.
pub fn roc_profile(log_sig: &GradedTensor) -> Result<RocProfile> {
    let n_max = log_sig.depth();
    if n_max < 6 {
        return Err(Error::InsufficientDegrees { needed: 6, got: n_max });
    }
    if log_sig.scalar().norm() > 1e-12 {
        return Err(Error::Domain("log-signature must have zero scalar part".into()));
    }
    let norms: Vec<f64> = (1..=n_max).map(|n| log_sig.level_norm(n)).collect();
    let roots: Vec<f64> = norms.iter().enumerate().map(|(i, x)| x.powf(1.0 / (i + 1) as f64)).collect();
    let lo = n_max.div_ceil(2);
    let pts: Vec<(f64, f64)> = (lo..=n_max)
        .map(|n| (n as f64, norms[n - 1].max(1e-300).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let scale = norms[0].max(1.0);
    let degenerate = norms
        .iter()
        .enumerate()
        .skip(2)
        .all(|(i, &x)| x <= DEGENERATE_CUTOFF * scale.powi(i as i32 + 1));
    let verdict = if degenerate {
        RocVerdict::DegenerateTail
    } else if slope >= RHO_MIN.ln() {
        RocVerdict::FiniteConsistent
    } else {
        RocVerdict::InfiniteConsistent
    };
    Ok(RocProfile { norms, roots, slope, verdict })
}
