//! Winding numbers of closed polygons and Green's theorem with winding
//! weights for self-intersecting loops.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_integrals::line_integral_quadrature;
use crate::path::PiecewisePath;

/// Points closer than this to the trace have no winding number.
pub const ON_TRACE_EPS: f64 = 1e-9;

fn closed_vertices(p: &PiecewisePath) -> Result<&[Vec<f64>]> {
    p.require_planar()?;
    if !p.is_closed() {
        return Err(Error::NotClosed);
    }
    Ok(p.vertices())
}

fn segment_distance(a: &[f64], b: &[f64], q: (f64, f64)) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((q.0 - a[0]) * dx + (q.1 - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    let (px, py) = (a[0] + t * dx - q.0, a[1] + t * dy - q.1);
    (px * px + py * py).sqrt()
}

/// Distance from `q` to the trace of `p`.
pub fn trace_distance(p: &PiecewisePath, q: (f64, f64)) -> f64 {
    let vs = p.vertices();
    if vs.len() == 1 {
        return ((vs[0][0] - q.0).powi(2) + (vs[0][1] - q.1).powi(2)).sqrt();
    }
    vs.windows(2).map(|w| segment_distance(&w[0], &w[1], q)).fold(f64::INFINITY, f64::min)
}

/// Sum of signed turning angles about `q`, divided by `2π`.
pub fn winding_number(p: &PiecewisePath, q: (f64, f64)) -> Result<i64> {
    let vs = closed_vertices(p)?;
    let d = trace_distance(p, q);
    if d <= ON_TRACE_EPS {
        return Err(Error::OnTrace(d));
    }
    let total: f64 = vs
        .windows(2)
        .map(|w| {
            let (ax, ay) = (w[0][0] - q.0, w[0][1] - q.1);
            let (bx, by) = (w[1][0] - q.0, w[1][1] - q.1);
            (ax * by - ay * bx).atan2(ax * bx + ay * by)
        })
        .sum();
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Axis-aligned rectangle sampled at cell centres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if !(x.0 < x.1 && y.0 < y.1) || nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("grid needs a nonempty rectangle and resolution".into()));
        }
        Ok(Self { x_min: x.0, x_max: x.1, y_min: y.0, y_max: y.1, nx, ny })
    }

    /// Bounding box of `p` padded by `pad` on every side.
    pub fn around(p: &PiecewisePath, pad: f64, nx: usize, ny: usize) -> Result<Self> {
        p.require_planar()?;
        let xs = p.vertices().iter().map(|v| v[0]);
        let ys = p.vertices().iter().map(|v| v[1]);
        let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
        Self::new((x0 - pad, x1 + pad), (y0 - pad, y1 + pad), nx, ny)
    }

    pub fn cell(&self) -> (f64, f64) {
        ((self.x_max - self.x_min) / self.nx as f64, (self.y_max - self.y_min) / self.ny as f64)
    }

    /// Centre of cell `(i, j)`, `i` along x.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let (hx, hy) = self.cell();
        (self.x_min + (i as f64 + 0.5) * hx, self.y_min + (j as f64 + 0.5) * hy)
    }

    fn mask_radius(&self) -> f64 {
        let (hx, hy) = self.cell();
        2.0 * ON_TRACE_EPS + 0.5 * (hx * hx + hy * hy).sqrt()
    }
}

/// Winding numbers at cell centres; `None` marks cells touching the trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingGrid {
    pub spec: GridSpec,
    /// `values[j][i]`: row `j` (y), column `i` (x).
    pub values: Vec<Vec<Option<i64>>>,
}

impl WindingGrid {
    pub fn unmasked(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.iter().flatten().flatten().copied()
    }

    pub fn masked_count(&self) -> usize {
        self.values.iter().flatten().filter(|v| v.is_none()).count()
    }
}

pub fn winding_field(p: &PiecewisePath, spec: GridSpec) -> Result<WindingGrid> {
    closed_vertices(p)?;
    let radius = spec.mask_radius();
    let values = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            (0..spec.nx)
                .map(|i| {
                    let q = spec.center(i, j);
                    if trace_distance(p, q) <= radius {
                        Ok(None)
                    } else {
                        winding_number(p, q).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WindingGrid { spec, values })
}

/// `a exp(-|z - c|^2 / (2 σ^2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub center: (f64, f64),
    pub width: f64,
}

impl Bump {
    pub fn zero() -> Self {
        Self { amplitude: 0.0, center: (0.0, 0.0), width: 1.0 }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let r2 = (x - self.center.0).powi(2) + (y - self.center.1).powi(2);
        self.amplitude * (-r2 / (2.0 * self.width * self.width)).exp()
    }

    /// `(∂_x, ∂_y)`.
    pub fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        let v = self.eval(x, y) / (self.width * self.width);
        (-(x - self.center.0) * v, -(y - self.center.1) * v)
    }

    /// Half-width of the square outside which the bump is below `1e-16` of
    /// its peak.
    pub fn reach(&self) -> f64 {
        if self.amplitude == 0.0 {
            0.0
        } else {
            self.width * (2.0 * 16.0 * 10f64.ln()).sqrt()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenCheck {
    /// `∬ (∂_x f + ∂_y g) η dx dy` by the midpoint rule; cells touching
    /// the trace are split recursively.
    pub area: f64,
    /// `∮ f dy - g dx`.
    pub line: f64,
    pub residual: f64,
}

/// Halvings applied to a cell that touches the trace.
const MASKED_SPLITS: usize = 8;

// integral of div * η over a cell touching the trace, split into quarters
// until the pieces clear the trace
fn masked_cell_integral(p: &PiecewisePath, c: (f64, f64), h: (f64, f64), splits: usize, div: &impl Fn(f64, f64) -> f64) -> f64 {
    let clear = trace_distance(p, c) > 2.0 * ON_TRACE_EPS + 0.5 * (h.0 * h.0 + h.1 * h.1).sqrt();
    if clear || splits == 0 {
        return match winding_number(p, c) {
            Ok(0) | Err(_) => 0.0,
            Ok(eta) => div(c.0, c.1) * eta as f64 * h.0 * h.1,
        };
    }
    let q = (0.5 * h.0, 0.5 * h.1);
    [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)]
        .iter()
        .map(|(sx, sy)| masked_cell_integral(p, (c.0 + 0.5 * sx * q.0, c.1 + 0.5 * sy * q.1), q, splits - 1, div))
        .sum()
}

/// Compares both sides of Green's theorem weighted by the winding number
/// on an `n × n` grid covering the trace and both bumps.
pub fn green_residual(p: &PiecewisePath, f: Bump, g: Bump, n: usize) -> Result<GreenCheck> {
    closed_vertices(p)?;
    let mut spec = GridSpec::around(p, 0.0, n, n)?;
    for b in [f, g] {
        let r = b.reach();
        if r > 0.0 {
            spec.x_min = spec.x_min.min(b.center.0 - r);
            spec.x_max = spec.x_max.max(b.center.0 + r);
            spec.y_min = spec.y_min.min(b.center.1 - r);
            spec.y_max = spec.y_max.max(b.center.1 + r);
        }
    }
    let grid = winding_field(p, spec)?;
    let (hx, hy) = spec.cell();
    let div = |x: f64, y: f64| f.grad(x, y).0 + g.grad(x, y).1;
    let area: f64 = grid
        .values
        .par_iter()
        .enumerate()
        .map(|(j, row)| {
            row.iter()
                .enumerate()
                .map(|(i, eta)| {
                    let (x, y) = spec.center(i, j);
                    match eta {
                        Some(0) => 0.0,
                        Some(e) => div(x, y) * *e as f64 * hx * hy,
                        None => masked_cell_integral(p, (x, y), (hx, hy), MASKED_SPLITS, &div),
                    }
                })
                .sum::<f64>()
        })
        .sum::<f64>();
    let line = line_integral_quadrature(p, 1e-12, |x, y| {
        (C64::new(-g.eval(x, y), 0.0), C64::new(f.eval(x, y), 0.0))
    })?
    .re;
    Ok(GreenCheck { area, line, residual: (area - line).abs() })
}

/// One sample of [`windapp_diagnostic`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindAppRow {
    pub x: f64,
    pub y: f64,
    pub winding: i64,
    pub row_mean: f64,
    pub residual: f64,
}

/// `|η(γ̃, (x, y)) - ∫_0^1 η(γ̃, (v, y)) dv|` at each sample point off the
/// trace, `γ̃` the path closed by its chord. Returns `None` when the path
/// does not run from `(0,0)` to `(1,0)` inside the strip `0 <= x <= 1`.
/// Reports only; the hypothesis on one-form integrals is not checked.
pub fn windapp_diagnostic(p: &PiecewisePath, samples: &[(f64, f64)], row_points: usize) -> Result<Option<Vec<WindAppRow>>> {
    p.require_planar()?;
    let in_strip = p.vertices().iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(&v[0]));
    if !p.is_normalized() || !in_strip {
        return Ok(None);
    }
    let closed = p.tilde()?;
    let n = row_points.max(1);
    let mut rows = Vec::new();
    for &(x, y) in samples {
        if trace_distance(&closed, (x, y)) <= ON_TRACE_EPS {
            continue;
        }
        let winding = winding_number(&closed, (x, y))?;
        let mut sum = 0.0;
        let mut count = 0usize;
        for k in 0..n {
            let v = (k as f64 + 0.5) / n as f64;
            if let Ok(eta) = winding_number(&closed, (v, y)) {
                sum += eta as f64;
                count += 1;
            }
        }
        let row_mean = if count == 0 { 0.0 } else { sum / n as f64 };
        rows.push(WindAppRow { x, y, winding, row_mean, residual: (winding as f64 - row_mean).abs() });
    }
    Ok(Some(rows))
}
