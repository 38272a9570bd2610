//! Residual batteries for the integral identities that an infinite radius
//! of convergence forces. A large residual certifies a finite radius; small
//! residuals prove nothing.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;
use crate::exp_integrals::{
    doubint_expression, exp_line_integral, one_form_integral, pq_double_integral, s_m, FourierOneForm,
    QUAD_TOL,
};
use crate::path::{brownian_sample, conjugated_line, line, PiecewisePath};
use crate::signature::{log_signature, roc_profile, signature, RocProfile, RocVerdict};

/// Tolerance of the closed-form exponential integrals.
pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// Residuals above this count as nonzero for an engine tolerance `tol`.
pub fn certification_threshold(tol: f64) -> f64 {
    (100.0 * tol).max(1e-6)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    FiniteRocCertified,
    Inconclusive,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub params: Value,
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub truncation: usize,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub path: String,
    pub battery: String,
    pub rows: Vec<ReportRow>,
    pub verdict: Verdict,
    pub engine: EngineInfo,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl IdentityReport {
    fn new(p: &PiecewisePath, battery: &str, tol: f64) -> Self {
        let mut tolerances = BTreeMap::new();
        tolerances.insert("engine".to_string(), tol);
        tolerances.insert("certification".to_string(), certification_threshold(tol));
        Self {
            path: p.name().unwrap_or("unnamed").to_string(),
            battery: battery.to_string(),
            rows: Vec::new(),
            verdict: Verdict::Inconclusive,
            engine: EngineInfo { truncation: 0, tolerances },
            notes: Vec::new(),
        }
    }

    fn not_applicable(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::NotApplicable;
        self.notes.push(why.into());
        self
    }

    fn threshold(&self) -> f64 {
        self.engine.tolerances.get("certification").copied().unwrap_or(1e-6)
    }

    fn finish(mut self) -> Self {
        if self.verdict != Verdict::NotApplicable {
            let t = self.threshold();
            self.verdict = if self.rows.iter().any(|r| r.residual > t) {
                Verdict::FiniteRocCertified
            } else {
                Verdict::Inconclusive
            };
        }
        self
    }

    /// Largest residual, zero for an empty report.
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// Joins several reports into one under the battery name `all`.
    pub fn merge(p: &PiecewisePath, parts: Vec<IdentityReport>) -> Self {
        let mut out = Self::new(p, "all", 0.0);
        out.engine.tolerances.clear();
        let mut any_applicable = false;
        let mut certified = false;
        for part in parts {
            for (k, v) in part.engine.tolerances {
                out.engine.tolerances.insert(format!("{}.{k}", part.battery), v);
            }
            out.engine.truncation = out.engine.truncation.max(part.engine.truncation);
            out.notes.extend(part.notes.into_iter().map(|n| format!("{}: {n}", part.battery)));
            any_applicable |= part.verdict != Verdict::NotApplicable;
            certified |= part.verdict == Verdict::FiniteRocCertified;
            out.rows.extend(part.rows);
        }
        out.verdict = match (any_applicable, certified) {
            (_, true) => Verdict::FiniteRocCertified,
            (true, false) => Verdict::Inconclusive,
            (false, false) => Verdict::NotApplicable,
        };
        out
    }
}

/// No consecutive block of `seq` sums to zero.
pub fn is_nondegenerate(seq: &[i64]) -> bool {
    (0..seq.len()).all(|i| {
        let mut acc = 0i64;
        seq[i..].iter().all(|&k| {
            acc += k;
            acc != 0
        })
    })
}

fn two_pi_i(k: i64) -> C64 {
    C64::new(0.0, 2.0 * PI * k as f64)
}

fn nonzero_range(k_max: i64) -> impl Iterator<Item = i64> {
    (-k_max..=k_max).filter(|&k| k != 0)
}

/// `|∫ e^{2πik x} dy|` for `0 < |k| <= k_max`, after mapping the path to
/// run from `x = 0` to `x = 1`.
pub fn thm_lineint_battery(p: &PiecewisePath, k_max: i64, tol: f64) -> Result<IdentityReport> {
    let report = IdentityReport::new(p, "lineint", tol);
    let Some(q) = p.x_normalized()? else {
        return Ok(report.not_applicable("x_1 = x_0; the line-integral identity needs a non-closed x"));
    };
    let mut report = report;
    for k in nonzero_range(k_max) {
        report.rows.push(ReportRow {
            id: "lineint".into(),
            params: json!({ "k": k }),
            residual: exp_line_integral(&q, two_pi_i(k))?.norm(),
        });
    }
    Ok(report.finish())
}

/// Default `b` values for the full double-integral family.
pub fn default_b_grid() -> Vec<C64> {
    let mut out = Vec::new();
    for s in [1.0, -1.0] {
        out.push(C64::new(s, 0.0));
        out.push(C64::new(2.0 * s, 0.0));
        out.push(C64::new(0.0, PI * s));
        for r in [1.0, 2.0] {
            out.push(C64::new(0.0, 2.0 * PI * r * s));
        }
    }
    out
}

/// `|∫∫ e^{2πi(p x_s + q x_t)} dy_s dy_t|` over `p, q ∈ [-K, K] \ {0}`,
/// `p + q != 0`, and the full `(k, b)` expression over `b_grid`.
pub fn doubint_battery(p: &PiecewisePath, k_max: i64, b_grid: &[C64], tol: f64) -> Result<IdentityReport> {
    let report = IdentityReport::new(p, "doubint", tol);
    let Some(path) = p.x_normalized()? else {
        return Ok(report.not_applicable("x_1 = x_0; the double-integral identity needs a non-closed x"));
    };
    let mut report = report;
    let mut pairs = Vec::new();
    for a in nonzero_range(k_max) {
        for b in nonzero_range(k_max) {
            if a + b != 0 {
                pairs.push((a, b));
            }
        }
    }
    let pq_rows: Vec<ReportRow> = pairs
        .par_iter()
        .map(|&(a, b)| {
            Ok(ReportRow {
                id: "doubint".into(),
                params: json!({ "p": a, "q": b }),
                residual: pq_double_integral(&path, a, b)?.norm(),
            })
        })
        .collect::<Result<_>>()?;
    report.rows.extend(pq_rows);
    for k in nonzero_range(k_max) {
        for b in b_grid {
            report.rows.push(ReportRow {
                id: "doubint-b".into(),
                params: json!({ "k": k, "b": [b.re, b.im] }),
                residual: doubint_expression(&path, k, *b)?.norm(),
            });
        }
    }
    Ok(report.finish())
}

/// Upper limit on enumerated sequences per iterated-integral battery.
pub const MAX_SEQUENCES: usize = 20_000;

/// `|S_m(2πik_1, ..., 2πik_m)|` over non-degenerate sequences with
/// `m <= m_max` and `|k_j| <= k_bound`.
pub fn iterint_battery(p: &PiecewisePath, m_max: usize, k_bound: i64, tol: f64) -> Result<IdentityReport> {
    let report = IdentityReport::new(p, "iterint", tol);
    let Some(path) = p.x_normalized()? else {
        return Ok(report.not_applicable("x_1 = x_0; the iterated-integral identities need a non-closed x"));
    };
    let mut report = report;
    let m_max = m_max.min(crate::exp_integrals::S_M_MAX);
    let mut seqs: Vec<Vec<i64>> = Vec::new();
    let mut frontier: Vec<Vec<i64>> = vec![Vec::new()];
    'outer: for _ in 0..m_max {
        let mut next = Vec::new();
        for s in &frontier {
            for k in nonzero_range(k_bound) {
                let mut t = s.clone();
                t.push(k);
                if is_nondegenerate(&t) {
                    if seqs.len() >= MAX_SEQUENCES {
                        report.notes.push(format!("enumeration truncated at {MAX_SEQUENCES} sequences"));
                        break 'outer;
                    }
                    seqs.push(t.clone());
                }
                next.push(t);
            }
        }
        frontier = next;
    }
    let rows: Vec<ReportRow> = seqs
        .par_iter()
        .map(|ks| {
            let rates: Vec<C64> = ks.iter().map(|&k| two_pi_i(k)).collect();
            Ok(ReportRow {
                id: format!("iterint-m{}", ks.len()),
                params: json!({ "k": ks }),
                residual: s_m(&path, &rates)?.norm(),
            })
        })
        .collect::<Result<_>>()?;
    report.notes.push(format!("{} sequences", rows.len()));
    report.rows = rows;
    Ok(report.finish())
}

/// One-forms `y^j e^{2πikx} dx` and `y^j e^{2πikx} dy` for `0 < |k| <= 4`,
/// `j <= 2`, plus `y^j dy`.
pub fn one_form_library() -> Vec<(String, Value, FourierOneForm)> {
    let mut out = Vec::new();
    for j in 0..=2usize {
        let mut poly = vec![C64::new(0.0, 0.0); j + 1];
        poly[j] = C64::new(1.0, 0.0);
        out.push((
            "genform".to_string(),
            json!({ "k": 0, "power": j, "component": "dy" }),
            FourierOneForm::new().with_g(0, poly.clone()),
        ));
        for k in nonzero_range(4) {
            out.push((
                "genform".to_string(),
                json!({ "k": k, "power": j, "component": "dx" }),
                FourierOneForm::new().with_f(k, poly.clone()),
            ));
            out.push((
                "genform".to_string(),
                json!({ "k": k, "power": j, "component": "dy" }),
                FourierOneForm::new().with_g(k, poly.clone()),
            ));
        }
    }
    out
}

/// Integrals of [`one_form_library`] forms; needs `y_1 = y_0`.
pub fn gen_lineint_battery(p: &PiecewisePath, tol: f64) -> Result<IdentityReport> {
    let report = IdentityReport::new(p, "genform", tol);
    let Some(path) = p.x_normalized()? else {
        return Ok(report.not_applicable("x_1 = x_0; the one-form identity needs a non-closed x"));
    };
    if path.last()[1].abs() > 1e-10 {
        return Ok(report.not_applicable("y_1 != y_0; the one-form identity needs y_1 = y_0"));
    }
    let mut report = report;
    let rows: Vec<ReportRow> = one_form_library()
        .into_par_iter()
        .map(|(id, params, form)| {
            Ok(ReportRow { id, params, residual: one_form_integral(&path, &form)?.norm() })
        })
        .collect::<Result<_>>()?;
    report.rows = rows;
    Ok(report.finish())
}

/// Which batteries [`run_battery`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Battery {
    Lineint,
    Doubint,
    Iterint,
    Genform,
    All,
}

/// Bounds shared by the batteries.
#[derive(Clone, Debug, PartialEq)]
pub struct BatteryOptions {
    pub k_max: i64,
    pub m_max: usize,
    pub k_bound: i64,
    /// Overrides every engine tolerance when set.
    pub tol: Option<f64>,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        Self { k_max: 5, m_max: 3, k_bound: 3, tol: None }
    }
}

pub fn run_battery(p: &PiecewisePath, battery: Battery, opts: &BatteryOptions) -> Result<IdentityReport> {
    let closed = opts.tol.unwrap_or(CLOSED_FORM_TOL);
    let quad = opts.tol.unwrap_or(QUAD_TOL);
    Ok(match battery {
        Battery::Lineint => thm_lineint_battery(p, opts.k_max, closed)?,
        Battery::Doubint => doubint_battery(p, opts.k_bound, &default_b_grid(), closed)?,
        Battery::Iterint => iterint_battery(p, opts.m_max, opts.k_bound, closed)?,
        Battery::Genform => gen_lineint_battery(p, quad)?,
        Battery::All => IdentityReport::merge(
            p,
            vec![
                thm_lineint_battery(p, opts.k_max, closed)?,
                doubint_battery(p, opts.k_bound, &default_b_grid(), closed)?,
                iterint_battery(p, opts.m_max, opts.k_bound, closed)?,
                gen_lineint_battery(p, quad)?,
            ],
        ),
    })
}

/// Outcome of [`brownian_lineint_study`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrownianStudy {
    pub samples: usize,
    pub exceeding: usize,
    pub fraction: f64,
    pub certified: bool,
}

/// Fraction of seeded planar Brownian samples with
/// `|∫ sin(2π X_t / X_1) dY_t| > threshold`; certified when at least 95%.
pub fn brownian_lineint_study(samples: usize, steps: usize, first_seed: u64, threshold: f64) -> Result<BrownianStudy> {
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let p = brownian_sample(steps, first_seed + i, 2)?;
            let x1 = p.last()[0];
            let scaled = p.map_points(|v| vec![v[0] / x1, v[1]])?;
            Ok(exp_line_integral(&scaled, two_pi_i(1))?.im.abs())
        })
        .collect::<Result<_>>()?;
    let exceeding = values.iter().filter(|&&v| v > threshold).count();
    let fraction = exceeding as f64 / samples.max(1) as f64;
    Ok(BrownianStudy { samples, exceeding, fraction, certified: fraction >= 0.95 })
}

/// ROC profile of `α ⊔ e_1 ⊔ ←α` and the coefficientwise residual of
/// `log S(α ⊔ γ ⊔ ←α) = S(α) ⊗ log S(γ) ⊗ S(α)^{-1}` with `γ = e_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub profile: RocProfile,
    pub expected: RocVerdict,
    pub identity_residual: f64,
}

impl ConjugationReport {
    pub fn consistent(&self) -> bool {
        self.profile.verdict == self.expected
    }
}

/// Checks that conjugating the unit line keeps the log-signature tail
/// decaying (a degenerate tail when `α` is a single point).
pub fn conjugation_decay_check(alpha: &PiecewisePath, depth: usize) -> Result<ConjugationReport> {
    let conj = conjugated_line(alpha)?;
    let profile = roc_profile(&log_signature(&conj, depth)?)?;
    let expected = if alpha.segment_count() == 0 {
        RocVerdict::DegenerateTail
    } else {
        RocVerdict::InfiniteConsistent
    };
    let n = depth.min(8);
    let gamma = line(&[1.0, 0.0])?;
    let s_alpha = signature(alpha, n)?;
    let rhs = s_alpha.mul(&log_signature(&gamma, n)?)?.mul(&s_alpha.inv()?)?;
    let identity_residual = log_signature(&conj, n)?.max_abs_diff(&rhs)?;
    Ok(ConjugationReport { profile, expected, identity_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{figure_eight, line_conjugate};

    #[test]
    fn nondegenerate_examples() {
        assert!(is_nondegenerate(&[1, 2]));
        assert!(!is_nondegenerate(&[1, -1, 3]));
        assert!(!is_nondegenerate(&[2, -1, -1]));
        assert!(!is_nondegenerate(&[0]));
    }

    #[test]
    fn figure_eight_batteries() {
        let f = figure_eight();
        let opts = BatteryOptions::default();
        assert_eq!(run_battery(&f, Battery::Lineint, &opts).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(run_battery(&f, Battery::Genform, &opts).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(run_battery(&f, Battery::Doubint, &opts).unwrap().verdict, Verdict::FiniteRocCertified);
        let it = iterint_battery(&f, 2, 2, CLOSED_FORM_TOL).unwrap();
        assert_eq!(it.verdict, Verdict::FiniteRocCertified);
    }

    #[test]
    fn infinite_roc_fixtures_pass_everything() {
        let opts = BatteryOptions::default();
        for p in [line_conjugate(), line(&[1.0, 1.0]).unwrap()] {
            let r = run_battery(&p, Battery::All, &opts).unwrap();
            assert_ne!(r.verdict, Verdict::FiniteRocCertified);
            assert!(r.max_residual() <= 1e-9, "{}", r.max_residual());
        }
        let vertical = line(&[0.0, 1.0]).unwrap();
        assert_eq!(run_battery(&vertical, Battery::Lineint, &opts).unwrap().verdict, Verdict::NotApplicable);
        let diag = line(&[1.0, 1.0]).unwrap();
        assert_eq!(run_battery(&diag, Battery::Genform, &opts).unwrap().verdict, Verdict::NotApplicable);
    }

    #[test]
    fn conjugation_examples() {
        let alpha = PiecewisePath::planar(&[(0.0, 0.0), (0.0, 1.0)]).unwrap();
        let r = conjugation_decay_check(&alpha, 12).unwrap();
        assert!(r.consistent(), "{:?}", r.profile);
        assert!(r.identity_residual < 1e-10);
        let point = PiecewisePath::planar(&[(0.0, 0.0)]).unwrap();
        let r = conjugation_decay_check(&point, 8).unwrap();
        assert!(r.consistent(), "{:?}", r.profile);
    }
}
