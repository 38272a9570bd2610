//! Developments of planar tensor series into `sl_{m+1}(C)`.
//!
//! The letter `e_1` goes to a diagonal Cartan element `A` and `e_2` to the
//! superdiagonal nilpotent `D`, so brackets of `e_2` images land on fixed
//! root spaces and log-signature coefficients show up as matrix entries.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_integrals::{exp_line_integral, iterated_exp_integral, s_m};
use crate::free_lie::bernoulli_over_factorial;
use crate::path::{line, PiecewisePath};
use crate::signature::log_signature;
use crate::tensor::GradedTensor;

pub type ComplexMatrix = DMatrix<C64>;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Images of the letters `e_1 .. e_d` under a linear map into square matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct DevelopmentMap {
    images: Vec<ComplexMatrix>,
}

impl DevelopmentMap {
    pub fn new(images: Vec<ComplexMatrix>) -> Result<Self> {
        let n = images.first().map(|m| m.nrows()).ok_or(Error::InvalidArgument("no images".into()))?;
        if images.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::InvalidArgument("images must be square and of one size".into()));
        }
        Ok(Self { images })
    }

    /// `e_1 -> image_e1`, `e_2 -> image_e2`.
    pub fn planar(image_e1: ComplexMatrix, image_e2: ComplexMatrix) -> Result<Self> {
        Self::new(vec![image_e1, image_e2])
    }

    /// `e_1 -> cartan_element(rates)`, `e_2 -> nilpotent_sum(m)`.
    pub fn sl(rates: &[C64]) -> Result<Self> {
        Self::planar(cartan_element(rates)?, nilpotent_sum(rates.len())?)
    }

    pub fn size(&self) -> usize {
        self.images[0].nrows()
    }

    pub fn images(&self) -> &[ComplexMatrix] {
        &self.images
    }
}

/// Traceless diagonal `A` with `A_kk - A_{k+1,k+1} = p_k`.
pub fn cartan_element(rates: &[C64]) -> Result<ComplexMatrix> {
    let m = rates.len();
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one rate".into()));
    }
    let first: C64 = rates
        .iter()
        .enumerate()
        .map(|(j, p)| p * (m - j) as f64)
        .sum::<C64>()
        / (m + 1) as f64;
    let mut diag = vec![first];
    for p in rates {
        let last = *diag.last().expect("nonempty");
        diag.push(last - p);
    }
    Ok(ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
}

/// `E_12 + E_23 + ... + E_{m,m+1}`.
pub fn nilpotent_sum(m: usize) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    Ok(ComplexMatrix::from_fn(m + 1, m + 1, |i, j| if j == i + 1 { ONE } else { ZERO }))
}

/// Matrix unit `E_{ij}` (1-based) of size `n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(n, n);
    e[(i - 1, j - 1)] = ONE;
    e
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Largest entry modulus.
pub fn max_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// sum over words of the given level, first letter is the lowest digit
fn hat_f_level(coeffs: &[C64], offset: usize, stride: usize, n: usize, f: &DevelopmentMap) -> Option<ComplexMatrix> {
    if n == 0 {
        let c = coeffs[offset];
        return (c != ZERO).then(|| ComplexMatrix::identity(f.size(), f.size()) * c);
    }
    let d = f.images.len();
    let mut acc: Option<ComplexMatrix> = None;
    for (a, image) in f.images.iter().enumerate() {
        if let Some(rest) = hat_f_level(coeffs, offset + a * stride, stride * d, n - 1, f) {
            let term = image * rest;
            acc = Some(match acc {
                Some(x) => x + term,
                None => term,
            });
        }
    }
    acc
}

/// Per-degree images `F̂(π_n x)` for `n = 0..=depth`.
pub fn hat_f_levels(x: &GradedTensor, f: &DevelopmentMap) -> Result<Vec<ComplexMatrix>> {
    if x.dim() != f.images.len() {
        return Err(Error::AlphabetMismatch(x.dim(), f.images.len()));
    }
    let size = f.size();
    Ok((0..=x.depth())
        .map(|n| hat_f_level(x.level(n), 0, 1, n, f).unwrap_or_else(|| ComplexMatrix::zeros(size, size)))
        .collect())
}

/// The algebra homomorphism induced by `f`, applied to a truncated series.
pub fn hat_f(x: &GradedTensor, f: &DevelopmentMap) -> Result<ComplexMatrix> {
    let size = f.size();
    Ok(hat_f_levels(x, f)?.into_iter().fold(ComplexMatrix::zeros(size, size), |a, b| a + b))
}

/// A residual at truncation `N` and its change since `N - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesResidual {
    pub residual: f64,
    pub tail: f64,
}

fn partial_sums(levels: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(levels.len());
    for l in levels {
        let next = match out.last() {
            Some(prev) => prev + l,
            None => l.clone(),
        };
        out.push(next);
    }
    out
}

fn series_residual(levels: &[ComplexMatrix], target: &ComplexMatrix, scale: C64) -> SeriesResidual {
    let sums = partial_sums(levels);
    let n = sums.len() - 1;
    let residual = max_norm(&(&sums[n] * scale - target));
    let tail = if n >= 2 { max_norm(&((&sums[n] - &sums[n - 2]) * scale)) } else { residual };
    SeriesResidual { residual, tail }
}

fn require_normalized(p: &PiecewisePath) -> Result<()> {
    p.require_planar()?;
    if !p.is_x_normalized() {
        return Err(Error::Precondition("path must start at the origin and end at x = 1".into()));
    }
    Ok(())
}

/// Log-signature of `p ⊔ ←e_1`.
pub fn tilde_log_signature(p: &PiecewisePath, depth: usize) -> Result<GradedTensor> {
    let back = line(&[-1.0, 0.0])?;
    log_signature(&p.concat(&back, true)?, depth)
}

/// `∫ x^j dy` along a planar path.
pub fn x_moment(p: &PiecewisePath, j: usize) -> Result<f64> {
    let mut total = 0.0;
    for [x0, _, dx, dy] in p.planar_segments()? {
        // ∫_0^1 (x0 + u dx)^j du via the binomial expansion
        let mut binom = 1.0;
        let mut acc = 0.0;
        for i in 0..=j {
            acc += binom * x0.powi((j - i) as i32) * dx.powi(i as i32) / (i + 1) as f64;
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
        total += dy * acc;
    }
    Ok(total)
}

fn two_dim_development(lambda: C64, mu: C64) -> Result<(DevelopmentMap, ComplexMatrix, ComplexMatrix)> {
    let a = cartan_element(&[ONE])?;
    let d = nilpotent_sum(1)?;
    let f = DevelopmentMap::planar(&a * lambda, &d * mu)?;
    Ok((f, a, d))
}

/// Residual of the two-dimensional development identity
/// `(e^λ - 1)(F̂(π^N L) - λ x_1 A) = λ μ ∫ e^{λx} dy D`, where
/// `F(e_1) = λA`, `F(e_2) = μD` and `[A, D] = D`.
pub fn develop_2d_identity_residual(p: &PiecewisePath, lambda: C64, mu: C64, depth: usize) -> Result<SeriesResidual> {
    require_normalized(p)?;
    let (f, a, d) = two_dim_development(lambda, mu)?;
    let x1 = p.last()[0] - p.first()[0];
    let mut levels = hat_f_levels(&log_signature(p, depth)?, &f)?;
    levels[1] -= &a * (lambda * x1);
    let target = &d * (lambda * mu * exp_line_integral(p, lambda)?);
    let scale = lambda.exp() - ONE;
    Ok(series_residual(&levels, &target, scale))
}

/// Compares `F̂(π^N L̃)` with `C_N D`, `C_N = μ sum_{j<N} (∫ x^j/j! dy) λ^j`.
pub fn cn_formula_residual(p: &PiecewisePath, lambda: C64, mu: C64, depth: usize) -> Result<f64> {
    require_normalized(p)?;
    let (f, _, d) = two_dim_development(lambda, mu)?;
    let lhs = hat_f(&tilde_log_signature(p, depth)?, &f)?;
    let mut cn = ZERO;
    let mut fact = 1.0;
    for j in 0..depth {
        if j > 0 {
            fact *= j as f64;
        }
        cn += mu * lambda.powu(j as u32) * (x_moment(p, j)? / fact);
    }
    Ok(max_norm(&(lhs - d * cn)))
}

/// `‖F̂(π^N D_k L̃) - sum_j S_k(a_j..a_{j+k-1}) E_{j,j+k}‖` for the
/// development built from `rates`.
pub fn fdk_residual(p: &PiecewisePath, rates: &[C64], k: usize, depth: usize) -> Result<SeriesResidual> {
    require_normalized(p)?;
    let m = rates.len();
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!("k must lie in 1..={m}")));
    }
    let f = DevelopmentMap::sl(rates)?;
    let levels = hat_f_levels(&tilde_log_signature(p, depth)?.dm_project(k)?, &f)?;
    let mut target = ComplexMatrix::zeros(m + 1, m + 1);
    for j in 0..=m - k {
        target[(j, j + k)] = s_m(p, &rates[j..j + k])?;
    }
    Ok(series_residual(&levels, &target, ONE))
}

/// `|entry (1, m+1) of F̂_I(π^N D_m L̃) - (log S(B))^I|`, `B` the path with
/// `dB^j = e^{p_j x} dy` and `m = |I|`.
pub fn dm_dev_coeff_residual(p: &PiecewisePath, rates: &[C64], word: &[usize], depth: usize) -> Result<SeriesResidual> {
    require_normalized(p)?;
    if word.is_empty() {
        return Err(Error::InvalidArgument("word must be nonempty".into()));
    }
    if let Some(&bad) = word.iter().find(|&&i| i >= rates.len()) {
        return Err(Error::LetterOutOfRange { letter: bad, dim: rates.len() });
    }
    let m = word.len();
    let chosen: Vec<C64> = word.iter().map(|&i| rates[i]).collect();
    let f = DevelopmentMap::sl(&chosen)?;
    let levels = hat_f_levels(&tilde_log_signature(p, depth)?.dm_project(m)?, &f)?;
    let corner: Vec<ComplexMatrix> = levels
        .iter()
        .map(|l| ComplexMatrix::from_element(1, 1, l[(0, m)]))
        .collect();
    let target = ComplexMatrix::from_element(1, 1, s_m(p, &chosen)?);
    Ok(series_residual(&corner, &target, ONE))
}

fn ad_series(a: &ComplexMatrix, x: &ComplexMatrix, terms: usize) -> Result<Vec<ComplexMatrix>> {
    let mut out = vec![x.clone()];
    for _ in 1..terms {
        let next = commutator(a, out.last().expect("nonempty"));
        out.push(next);
    }
    Ok(out)
}

/// Residuals of the closed forms for `D_1 L` and `D_2 L` (Bernoulli
/// series in `ad_A`) against `F̂(D_1 π^N L)` and `F̂(D_2 π^N L)` under the
/// `sl_3` development with rates `(a, b)`.
pub fn d12_closed_form_residuals(p: &PiecewisePath, rates: [C64; 2], depth: usize) -> Result<(f64, f64)> {
    require_normalized(p)?;
    const TERMS: usize = 40;
    let f = DevelopmentMap::sl(&rates)?;
    let a = cartan_element(&rates)?;
    let log = log_signature(p, depth)?;
    let lhs1 = hat_f(&log.dm_project(1)?, &f)?;
    let lhs2 = hat_f(&log.dm_project(2)?, &f)?;

    // Γ1 = ∫ e^{x ad A}(D) dy, Γ2 = ½ ∫∫ [e^{x_s ad A}D, e^{x_t ad A}D] dy dy
    let mut gamma1 = ComplexMatrix::zeros(3, 3);
    for k in 0..2 {
        gamma1[(k, k + 1)] = exp_line_integral(p, rates[k])?;
    }
    let e12 = matrix_unit(3, 1, 2);
    let e23 = matrix_unit(3, 2, 3);
    let gamma2 = commutator(&e12, &e23)
        * ((iterated_exp_integral(p, &[rates[0], rates[1]])? - iterated_exp_integral(p, &[rates[1], rates[0]])?) * 0.5);

    let bern: Vec<f64> = (0..TERMS).map(bernoulli_over_factorial).collect::<Result<_>>()?;
    let ad1 = ad_series(&a, &gamma1, TERMS)?;
    let ad2 = ad_series(&a, &gamma2, TERMS)?;
    let h1 = ad1.iter().zip(&bern).fold(ComplexMatrix::zeros(3, 3), |acc, (x, b)| acc + x * C64::from(*b));
    let mut rhs2 = ad2.iter().zip(&bern).fold(ComplexMatrix::zeros(3, 3), |acc, (x, b)| acc + x * C64::from(*b));
    for (m, b) in bern.iter().enumerate().skip(1) {
        if *b == 0.0 {
            continue;
        }
        for k in 1..=m {
            let inner = commutator(&h1, &ad1[m - k]);
            let mut term = inner;
            for _ in 0..k - 1 {
                term = commutator(&a, &term);
            }
            rhs2 += term * C64::from(0.5 * b);
        }
    }
    Ok((max_norm(&(lhs1 - h1)), max_norm(&(lhs2 - rhs2))))
}
