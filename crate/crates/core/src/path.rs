//! Piecewise-linear paths and the named fixtures.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Endpoint tolerance for concatenation and closedness.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// A point in time along a path: segment index and fraction within it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathTime {
    pub segment: usize,
    pub fraction: f64,
}

impl PathTime {
    pub fn new(segment: usize, fraction: f64) -> Self {
        Self { segment, fraction }
    }

    pub fn start() -> Self {
        Self::new(0, 0.0)
    }

    fn key(&self) -> (usize, f64) {
        (self.segment, self.fraction)
    }
}

/// Finite vertex list joined by straight segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePath {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl PiecewisePath {
    /// Validates coordinates and drops zero-length segments.
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPath("dimension must be positive".into()));
        }
        if vertices.is_empty() {
            return Err(Error::InvalidPath("at least one vertex is required".into()));
        }
        let mut clean: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidPath(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidPath(format!("vertex {i} has a non-finite coordinate")));
            }
            if clean.last() != Some(&v) {
                clean.push(v);
            }
        }
        Ok(Self { dim, vertices: clean, name: None })
    }

    /// Planar path from `(x, y)` pairs.
    pub fn planar(points: &[(f64, f64)]) -> Result<Self> {
        Self::new(2, points.iter().map(|&(x, y)| vec![x, y]).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> &[f64] {
        &self.vertices[0]
    }

    pub fn last(&self) -> &[f64] {
        &self.vertices[self.vertices.len() - 1]
    }

    /// Segment increments.
    pub fn increments(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.vertices
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
    }

    /// Planar segments as `(x0, y0, dx, dy)`.
    pub fn planar_segments(&self) -> Result<Vec<[f64; 4]>> {
        self.require_planar()?;
        Ok(self
            .vertices
            .windows(2)
            .map(|w| [w[0][0], w[0][1], w[1][0] - w[0][0], w[1][1] - w[0][1]])
            .collect())
    }

    pub(crate) fn require_planar(&self) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::InvalidPath(format!("expected a planar path, got dimension {}", self.dim)));
        }
        Ok(())
    }

    /// Total variation using the ℓ1 norm of increments.
    pub fn total_variation(&self) -> f64 {
        self.increments().map(|d| d.iter().map(|x| x.abs()).sum::<f64>()).sum()
    }

    pub fn is_closed(&self) -> bool {
        dist(self.first(), self.last()) <= ENDPOINT_TOL
    }

    /// `p ⊔ q`. With `translate`, `q` is shifted to start at the end of `p`.
    pub fn concat(&self, q: &Self, translate: bool) -> Result<Self> {
        if self.dim != q.dim {
            return Err(Error::InvalidPath(format!("dimensions differ: {} vs {}", self.dim, q.dim)));
        }
        let shift: Vec<f64> = if translate {
            self.last().iter().zip(q.first()).map(|(a, b)| a - b).collect()
        } else {
            if dist(self.last(), q.first()) > ENDPOINT_TOL {
                return Err(Error::EndpointMismatch(format!(
                    "{:?} does not meet {:?}",
                    self.last(),
                    q.first()
                )));
            }
            vec![0.0; self.dim]
        };
        let mut vs = self.vertices.clone();
        for v in q.vertices.iter().skip(1) {
            vs.push(v.iter().zip(&shift).map(|(a, s)| a + s).collect());
        }
        Self::new(self.dim, vs)
    }

    /// `←p`, the reversed path.
    pub fn reverse(&self) -> Self {
        let mut out = self.clone();
        out.vertices.reverse();
        out
    }

    fn check_time(&self, t: PathTime) -> Result<()> {
        let segs = self.segment_count();
        let ok = if segs == 0 {
            t.segment == 0 && t.fraction == 0.0
        } else {
            t.segment < segs && (0.0..=1.0).contains(&t.fraction)
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("time {t:?} outside a path with {segs} segments")))
        }
    }

    /// The point at time `t`.
    pub fn point_at(&self, t: PathTime) -> Result<Vec<f64>> {
        self.check_time(t)?;
        if self.segment_count() == 0 {
            return Ok(self.first().to_vec());
        }
        let a = &self.vertices[t.segment];
        let b = &self.vertices[t.segment + 1];
        Ok(a.iter().zip(b).map(|(x, y)| x + t.fraction * (y - x)).collect())
    }

    /// End time of the path.
    pub fn end_time(&self) -> PathTime {
        match self.segment_count() {
            0 => PathTime::start(),
            n => PathTime::new(n - 1, 1.0),
        }
    }

    /// Restriction to `[s, t]`, splitting the boundary segments.
    pub fn sub_path(&self, s: PathTime, t: PathTime) -> Result<Self> {
        self.check_time(s)?;
        self.check_time(t)?;
        if s.key() > t.key() {
            return Err(Error::InvalidArgument(format!("start {s:?} is after end {t:?}")));
        }
        let mut vs = vec![self.point_at(s)?];
        for k in s.segment + 1..=t.segment {
            vs.push(self.vertices[k].clone());
        }
        vs.push(self.point_at(t)?);
        let mut p = Self::new(self.dim, vs)?;
        p.name = self.name.clone();
        Ok(p)
    }

    /// Restriction to `[s, t]` mapped so that it runs from `(0,0)` to `(1,0)`.
    pub fn normalize(&self, s: PathTime, t: PathTime) -> Result<Self> {
        self.require_planar()?;
        let sub = self.sub_path(s, t)?;
        let zs = C64::new(sub.first()[0], sub.first()[1]);
        let zt = C64::new(sub.last()[0], sub.last()[1]);
        let chord = zt - zs;
        if chord.norm() <= ENDPOINT_TOL {
            return Err(Error::DegenerateChord);
        }
        let n = sub.vertices.len();
        let mut vs: Vec<Vec<f64>> = sub
            .vertices
            .iter()
            .map(|v| {
                let z = (C64::new(v[0], v[1]) - zs) / chord;
                vec![z.re, z.im]
            })
            .collect();
        vs[0] = vec![0.0, 0.0];
        vs[n - 1] = vec![1.0, 0.0];
        let mut p = Self::new(2, vs)?;
        p.name = self.name.clone();
        Ok(p)
    }

    /// Whole-path normalisation.
    pub fn normalized(&self) -> Result<Self> {
        self.normalize(PathTime::start(), self.end_time())
    }

    /// Whether the path starts at `(0,0)` and ends at `(1,0)`.
    pub fn is_normalized(&self) -> bool {
        self.dim == 2 && dist(self.first(), &[0.0, 0.0]) <= ENDPOINT_TOL && dist(self.last(), &[1.0, 0.0]) <= ENDPOINT_TOL
    }

    /// Whether `x_0 = y_0 = 0` and `x_1 = 1`; the end height is free.
    pub fn is_x_normalized(&self) -> bool {
        self.dim == 2
            && dist(self.first(), &[0.0, 0.0]) <= ENDPOINT_TOL
            && (self.last()[0] - 1.0).abs() <= ENDPOINT_TOL
    }

    /// Image under `(x, y) -> ((x - x_0) / (x_1 - x_0), y - y_0)`, or `None`
    /// when `x_1 = x_0`.
    pub fn x_normalized(&self) -> Result<Option<Self>> {
        self.require_planar()?;
        let (x0, y0) = (self.first()[0], self.first()[1]);
        let span = self.last()[0] - x0;
        if span.abs() <= ENDPOINT_TOL {
            return Ok(None);
        }
        self.map_points(|v| vec![(v[0] - x0) / span, v[1] - y0]).map(Some)
    }

    /// `p ⊔` the straight chord back to its start; always closed.
    pub fn tilde(&self) -> Result<Self> {
        self.require_planar()?;
        let mut vs = self.vertices.clone();
        vs.push(self.first().to_vec());
        let mut p = Self::new(2, vs)?;
        p.name = self.name.as_ref().map(|n| format!("{n}~"));
        Ok(p)
    }

    /// Applies an affine map `z -> scale * z + shift` to each vertex.
    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let mut p = Self::new(self.dim, self.vertices.iter().map(|v| f(v)).collect())?;
        p.name = self.name.clone();
        Ok(p)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Straight segment from the origin to `v`.
pub fn line(v: &[f64]) -> Result<PiecewisePath> {
    Ok(PiecewisePath::new(v.len(), vec![vec![0.0; v.len()], v.to_vec()])?.with_name("line"))
}

/// Counter-clockwise unit square based at the origin.
pub fn square_loop() -> PiecewisePath {
    PiecewisePath::planar(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)])
        .expect("valid fixture")
        .with_name("square")
}

/// The figure-eight trajectory: a run to `(1/2, 0)`, four triangular loops
/// that cancel pairwise, and a run to `(1, 0)`.
pub fn figure_eight() -> PiecewisePath {
    PiecewisePath::planar(&[
        (0.0, 0.0),
        (0.5, 0.0),
        (0.75, 0.25),
        (0.5, 0.25),
        (0.5, 0.0),
        (0.25, -0.25),
        (0.5, -0.25),
        (0.5, 0.0),
        (0.5, 0.25),
        (0.75, 0.25),
        (0.5, 0.0),
        (0.5, -0.25),
        (0.25, -0.25),
        (0.5, 0.0),
        (1.0, 0.0),
    ])
    .expect("valid fixture")
    .with_name("figure8")
}

/// `α ⊔ e_1 ⊔ ←α` for a planar `α`; runs from `α`'s start to that point
/// plus `(1, 0)`.
pub fn conjugated_line(alpha: &PiecewisePath) -> Result<PiecewisePath> {
    alpha.require_planar()?;
    let e1 = PiecewisePath::planar(&[(0.0, 0.0), (1.0, 0.0)])?;
    let p = alpha.concat(&e1, true)?.concat(&alpha.reverse(), true)?;
    Ok(p.with_name("line-conjugate"))
}

/// The one-segment conjugate `(0,0) -> (0,1) -> (1,1) -> (1,0)`.
pub fn line_conjugate() -> PiecewisePath {
    let alpha = PiecewisePath::planar(&[(0.0, 0.0), (0.0, 1.0)]).expect("valid fixture");
    conjugated_line(&alpha).expect("valid fixture")
}

/// Gaussian random walk with `steps` increments of variance `1/steps` per
/// coordinate, started at the origin.
pub fn brownian_sample(steps: usize, seed: u64, dim: usize) -> Result<PiecewisePath> {
    if steps == 0 || dim == 0 {
        return Err(Error::InvalidArgument("brownian_sample needs steps >= 1 and dim >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (steps as f64).sqrt();
    let mut pos = vec![0.0; dim];
    let mut vs = vec![pos.clone()];
    for _ in 0..steps {
        for x in pos.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *x += scale * z;
        }
        vs.push(pos.clone());
    }
    Ok(PiecewisePath::new(dim, vs)?.with_name(format!("brownian-{seed}")))
}

/// Random planar path from the origin to `(1, 0)` with `segments` pieces;
/// interior vertices are uniform in `[-0.5, 1.5] x [-1, 1]`.
pub fn random_normalized(segments: usize, seed: u64) -> Result<PiecewisePath> {
    use rand::Rng;
    if segments == 0 {
        return Err(Error::InvalidArgument("need at least one segment".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![(0.0, 0.0)];
    for _ in 1..segments {
        pts.push((rng.random_range(-0.5..1.5), rng.random_range(-1.0..1.0)));
    }
    pts.push((1.0, 0.0));
    Ok(PiecewisePath::planar(&pts)?.with_name(format!("random-{segments}-{seed}")))
}
