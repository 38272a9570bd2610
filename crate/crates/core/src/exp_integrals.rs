//! Exponential line integrals and iterated integrals along planar
//! piecewise-linear paths, the `S_m` functionals and the identity
//! expressions built from them.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_lie::{bracket_coeff_distinct, chen_strichartz_coeff, Permutation};
use crate::path::PiecewisePath;
use crate::tensor::GradedTensor;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Rates closer than this are merged.
pub const RATE_MERGE_TOL: f64 = 1e-12;
/// Below this modulus `e^{βs}` is expanded in its Taylor series.
pub const TAYLOR_RADIUS: f64 = 0.5;
/// Largest `m` accepted by [`s_m`].
pub const S_M_MAX: usize = 6;

/// Finite sum of `c s^p e^{β s}` on a segment parameter `s ∈ [0, 1]`.
///
/// Terms are grouped by rate; each group carries a dense polynomial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPolynomial {
    groups: Vec<(C64, Vec<C64>)>,
}

/// One term `coeff * s^power * e^{rate s}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpTerm {
    pub power: usize,
    pub rate: C64,
    pub coeff: C64,
}

fn poly_add_into(acc: &mut Vec<C64>, p: &[C64], scale: C64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ZERO);
    }
    for (a, &b) in acc.iter_mut().zip(p) {
        *a += scale * b;
    }
}

fn poly_eval(p: &[C64], s: f64) -> C64 {
    p.iter().rev().fold(ZERO, |acc, &c| acc * s + c)
}

/// Taylor coefficients of `e^{β s}` down to negligible size.
fn exp_taylor(beta: C64) -> Vec<C64> {
    let mut out = vec![ONE];
    let mut term = ONE;
    let mut n = 1.0;
    while term.norm() > 1e-20 && out.len() < 200 {
        term = term * beta / n;
        out.push(term);
        n += 1.0;
    }
    out
}

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == ZERO {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl ExpPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        let mut p = Self::zero();
        p.push(0, ZERO, c);
        p
    }

    /// Adds `coeff s^power e^{rate s}`, merging equal rates.
    pub fn push(&mut self, power: usize, rate: C64, coeff: C64) {
        let mut poly = vec![ZERO; power + 1];
        poly[power] = coeff;
        self.add_group(rate, &poly, ONE);
    }

    fn add_group(&mut self, rate: C64, poly: &[C64], scale: C64) {
        if let Some((_, acc)) = self.groups.iter_mut().find(|(r, _)| (r - rate).norm() <= RATE_MERGE_TOL) {
            poly_add_into(acc, poly, scale);
        } else {
            let mut acc = Vec::new();
            poly_add_into(&mut acc, poly, scale);
            self.groups.push((rate, acc));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ExpTerm> + '_ {
        self.groups.iter().flat_map(|(rate, poly)| {
            poly.iter()
                .enumerate()
                .filter(|(_, c)| **c != ZERO)
                .map(move |(power, &coeff)| ExpTerm { power, rate: *rate, coeff })
        })
    }

    pub fn eval(&self, s: f64) -> C64 {
        self.groups
            .iter()
            .map(|(rate, poly)| (rate * s).exp() * poly_eval(poly, s))
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (rate, poly) in &other.groups {
            out.add_group(*rate, poly, ONE);
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for (_, poly) in &mut out.groups {
            for x in poly.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    /// Multiplies by `e^{β s}`.
    pub fn mul_exp(&self, beta: C64) -> Self {
        let mut out = Self::zero();
        for (rate, poly) in &self.groups {
            out.add_group(rate + beta, poly, ONE);
        }
        out
    }

    /// `s -> ∫_0^s self`.
    ///
    /// Groups with `|β| <= TAYLOR_RADIUS` are expanded into polynomials and
    /// integrated exactly. Larger rates use `e^{βs} Q(s) - Q(0)` with
    /// `Q = sum_k (-1)^k P^(k) / β^(k+1)`.
    pub fn antiderivative(&self) -> Self {
        let mut poly_part: Vec<C64> = Vec::new();
        let mut out = Self::zero();
        for (rate, poly) in &self.groups {
            if rate.norm() <= TAYLOR_RADIUS {
                let expanded = if *rate == ZERO { poly.clone() } else { poly_mul(poly, &exp_taylor(*rate)) };
                let mut integ = vec![ZERO; expanded.len() + 1];
                for (p, c) in expanded.iter().enumerate() {
                    integ[p + 1] = c / (p + 1) as f64;
                }
                poly_add_into(&mut poly_part, &integ, ONE);
            } else {
                let inv = rate.inv();
                let mut q = vec![ZERO; poly.len()];
                let mut deriv = poly.clone();
                let mut factor = inv;
                while !deriv.is_empty() {
                    poly_add_into(&mut q, &deriv, factor);
                    deriv = deriv.iter().enumerate().skip(1).map(|(p, c)| c * p as f64).collect();
                    factor *= -inv;
                }
                let q0 = q.first().copied().unwrap_or(ZERO);
                out.add_group(*rate, &q, ONE);
                poly_add_into(&mut poly_part, &[-q0], ONE);
            }
        }
        if !poly_part.is_empty() {
            out.add_group(ZERO, &poly_part, ONE);
        }
        out
    }
}

/// `(e^z - 1) / z`, accurate near zero.
fn phi1(z: C64) -> C64 {
    if z.norm() < TAYLOR_RADIUS {
        let mut term = ONE;
        let mut sum = ONE;
        for n in 2..30 {
            term = term * z / n as f64;
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (z.exp() - ONE) / z
    }
}

/// `∫ e^{a x_t} dy_t` along a planar path.
pub fn exp_line_integral(p: &PiecewisePath, a: C64) -> Result<C64> {
    Ok(p.planar_segments()?
        .iter()
        .map(|&[x0, _, dx, dy]| dy * (a * x0).exp() * phi1(a * dx))
        .sum())
}

/// `∫_{t_1 < ... < t_n} prod_k e^{a_k x_{t_k}} dy_{t_1} ... dy_{t_n}`.
///
/// Each segment is cut into pieces on which every rate times the piece's
/// x-increment stays inside the Taylor radius, and the running integrals
/// are carried as exact polynomials in the piece parameter.
pub fn iterated_exp_integral(p: &PiecewisePath, rates: &[C64]) -> Result<C64> {
    if rates.is_empty() {
        return Err(Error::InvalidArgument("rate word must be nonempty".into()));
    }
    let bound: f64 = rates.iter().map(|a| a.norm()).sum();
    let mut values = vec![ZERO; rates.len()];
    for piece in pieces(p, bound)? {
        let mut f_prev = ExpPolynomial::constant(ONE);
        let starts = values.clone();
        for (k, &a) in rates.iter().enumerate() {
            let integrand = f_prev.mul_exp(a * piece.dx).scale(piece.dy * (a * piece.x0).exp());
            let f_k = integrand.antiderivative().add(&ExpPolynomial::constant(starts[k]));
            values[k] = f_k.eval(1.0);
            f_prev = f_k;
        }
    }
    Ok(values[rates.len() - 1])
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    x0: f64,
    dx: f64,
    dy: f64,
}

fn pieces(p: &PiecewisePath, rate_bound: f64) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for [x0, _, dx, dy] in p.planar_segments()? {
        let n = ((rate_bound * dx.abs()) / (0.9 * TAYLOR_RADIUS)).ceil().max(1.0) as usize;
        for i in 0..n {
            out.push(Piece {
                x0: x0 + dx * i as f64 / n as f64,
                dx: dx / n as f64,
                dy: dy / n as f64,
            });
        }
    }
    Ok(out)
}

/// Level-`n` coefficients, for `n <= depth`, of the signature of the path
/// `B` with `dB^j = e^{a_j x} dy`, built word by word from iterated
/// exponential integrals.
pub fn exp_path_signature(p: &PiecewisePath, rates: &[C64], depth: usize) -> Result<GradedTensor> {
    let m = rates.len();
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one rate".into()));
    }
    let mut sig = GradedTensor::one(m, depth)?;
    let max_rate = rates.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let segs = pieces(p, max_rate * depth as f64)?;
    // depth-first over words; each node holds the running integral on every piece
    struct Node {
        word: Vec<usize>,
        funcs: Vec<ExpPolynomial>,
    }
    let root = Node { word: Vec::new(), funcs: vec![ExpPolynomial::constant(ONE); segs.len()] };
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.word.len() == depth {
            continue;
        }
        for (j, &a) in rates.iter().enumerate() {
            let mut funcs = Vec::with_capacity(segs.len());
            let mut start = ZERO;
            for (piece, f_prev) in segs.iter().zip(&node.funcs) {
                let integrand = f_prev.mul_exp(a * piece.dx).scale(piece.dy * (a * piece.x0).exp());
                let f = integrand.antiderivative().add(&ExpPolynomial::constant(start));
                start = f.eval(1.0);
                funcs.push(f);
            }
            let mut word = node.word.clone();
            word.push(j);
            sig.set_coeff(&word, start)?;
            stack.push(Node { word, funcs });
        }
    }
    Ok(sig)
}

/// `S_m(a_1..a_m)` by building the auxiliary signature, taking its log and
/// reading the coefficient of the word `(1, ..., m)`.
pub fn s_m_route_a(p: &PiecewisePath, rates: &[C64]) -> Result<C64> {
    check_s_m(rates)?;
    let m = rates.len();
    let log = exp_path_signature(p, rates, m)?.log()?;
    Ok(log.coeff(&(0..m).collect::<Vec<_>>()))
}

fn check_s_m(rates: &[C64]) -> Result<()> {
    if rates.is_empty() || rates.len() > S_M_MAX {
        return Err(Error::InvalidArgument(format!(
            "S_m needs 1 <= m <= {S_M_MAX}, got {}",
            rates.len()
        )));
    }
    Ok(())
}

type Weights = Vec<(Vec<usize>, f64)>;

/// Chen–Strichartz weights: `S_m = sum_w weight(w) ∫ e^{a_{w_1} x} ... `
/// over orderings `w` of `0..m`.
fn strichartz_weights(m: usize) -> &'static [(Vec<usize>, f64)] {
    static CACHE: OnceLock<Vec<Weights>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=S_M_MAX)
            .map(|m| {
                let target: Vec<usize> = (0..m).collect();
                let sigmas: Vec<(Permutation, f64)> =
                    Permutation::all(m).map(|s| {
                        let c = chen_strichartz_coeff(&s);
                        (s, c)
                    }).collect();
                Permutation::all(m)
                    .filter_map(|w| {
                        let w = w.images().to_vec();
                        let weight: f64 = sigmas
                            .iter()
                            .map(|(s, c)| {
                                let j: Vec<usize> = s.images().iter().map(|&k| w[k]).collect();
                                c * bracket_coeff_distinct(&j, &target) as f64
                            })
                            .sum();
                        (weight.abs() > 1e-15).then_some((w, weight))
                    })
                    .collect()
            })
            .collect()
    });
    &all[m]
}

/// `S_m(a_1..a_m)` by the Chen–Strichartz combination of iterated integrals.
pub fn s_m_route_b(p: &PiecewisePath, rates: &[C64]) -> Result<C64> {
    check_s_m(rates)?;
    let mut total = ZERO;
    for (w, weight) in strichartz_weights(rates.len()) {
        let permuted: Vec<C64> = w.iter().map(|&k| rates[k]).collect();
        total += *weight * iterated_exp_integral(p, &permuted)?;
    }
    Ok(total)
}

/// `S_m(a_1..a_m)`, the log-signature coefficient of `(1..m)` for the
/// auxiliary path `dB^j = e^{a_j x} dy`.
pub fn s_m(p: &PiecewisePath, rates: &[C64]) -> Result<C64> {
    s_m_route_b(p, rates)
}

fn two_pi_i(k: f64) -> C64 {
    C64::new(0.0, 2.0 * PI * k)
}

/// `∫_{s<t} e^{2πi(p x_s + q x_t)} dy_s dy_t`.
pub fn pq_double_integral(path: &PiecewisePath, pk: i64, qk: i64) -> Result<C64> {
    iterated_exp_integral(path, &[two_pi_i(pk as f64), two_pi_i(qk as f64)])
}

/// The double-integral identity expression at `(k, b)`; vanishes when the
/// log-signature has infinite radius of convergence.
pub fn doubint_expression(path: &PiecewisePath, k: i64, b: C64) -> Result<C64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be nonzero".into()));
    }
    let w = two_pi_i(k as f64);
    let first = iterated_exp_integral(path, &[w - b, b])? - iterated_exp_integral(path, &[b, w - b])?;
    let second = exp_line_integral(path, b)? * exp_line_integral(path, w - b)?;
    Ok((ONE - b.cosh()) * first + b.sinh() * second)
}

/// One-form `f dx + g dy` with `f = sum_k F_k(y) e^{2πikx}` and likewise
/// `g`, each `F_k` a polynomial in `y` (ascending coefficients).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FourierOneForm {
    pub f_modes: BTreeMap<i64, Vec<C64>>,
    pub g_modes: BTreeMap<i64, Vec<C64>>,
}

/// Largest y-degree accepted in a [`FourierOneForm`].
pub const ONE_FORM_MAX_DEGREE: usize = 8;

impl FourierOneForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_f(mut self, k: i64, poly: Vec<C64>) -> Self {
        self.f_modes.insert(k, poly);
        self
    }

    pub fn with_g(mut self, k: i64, poly: Vec<C64>) -> Self {
        self.g_modes.insert(k, poly);
        self
    }

    /// `sin(2πkx) dy`.
    pub fn sin_dy(k: i64) -> Self {
        let h = C64::new(0.0, -0.5);
        Self::new().with_g(k, vec![h]).with_g(-k, vec![-h])
    }

    /// Checks the zero-mean condition on `f` and the degree bound.
    pub fn validate(&self) -> Result<()> {
        for poly in self.f_modes.values().chain(self.g_modes.values()) {
            if poly.len() > ONE_FORM_MAX_DEGREE + 1 {
                return Err(Error::Precondition(format!(
                    "y-degree above {ONE_FORM_MAX_DEGREE} is not supported"
                )));
            }
        }
        if let Some(f0) = self.f_modes.get(&0) {
            if f0.iter().any(|c| *c != ZERO) {
                return Err(Error::Precondition("f has a nonzero k = 0 mode".into()));
            }
        }
        Ok(())
    }

    fn eval_modes(modes: &BTreeMap<i64, Vec<C64>>, x: f64, y: f64) -> C64 {
        modes
            .iter()
            .map(|(&k, poly)| poly.iter().rev().fold(ZERO, |acc, &c| acc * y + c) * two_pi_i(k as f64 * x).exp())
            .sum()
    }

    /// `(f(x, y), g(x, y))`.
    pub fn eval(&self, x: f64, y: f64) -> (C64, C64) {
        (Self::eval_modes(&self.f_modes, x, y), Self::eval_modes(&self.g_modes, x, y))
    }
}

fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let rule = gauss_quad::legendre::GaussLegendre::new(32.try_into().expect("nonzero"));
        rule.as_node_weight_pairs().to_vec()
    })
}

/// Default accuracy target for adaptive line quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// `∫ F_x dx + F_y dy` along the path, where `field(x, y) = (F_x, F_y)`.
/// Each segment uses 32-point Gauss–Legendre on `2^j` equal pieces, doubling
/// until two successive estimates differ by less than `tol`.
pub fn line_integral_quadrature<F>(p: &PiecewisePath, tol: f64, field: F) -> Result<C64>
where
    F: Fn(f64, f64) -> (C64, C64),
{
    let rule = gauss_legendre();
    let mut total = ZERO;
    for [x0, y0, dx, dy] in p.planar_segments()? {
        let estimate = |n: usize| -> C64 {
            let h = 1.0 / n as f64;
            let mut acc = ZERO;
            for i in 0..n {
                let a = i as f64 * h;
                for &(node, weight) in rule {
                    let u = a + 0.5 * h * (node + 1.0);
                    let (fx, fy) = field(x0 + u * dx, y0 + u * dy);
                    acc += (fx * dx + fy * dy) * (0.5 * h * weight);
                }
            }
            acc
        };
        let mut n = 1;
        let mut prev = estimate(n);
        loop {
            n *= 2;
            let next = estimate(n);
            let done = (next - prev).norm() < tol || n >= 1 << 12;
            prev = next;
            if done {
                break;
            }
        }
        total += prev;
    }
    Ok(total)
}

/// `∫ f dx + g dy` for a Fourier one-form.
pub fn one_form_integral(p: &PiecewisePath, form: &FourierOneForm) -> Result<C64> {
    form.validate()?;
    line_integral_quadrature(p, QUAD_TOL, |x, y| form.eval(x, y))
}
