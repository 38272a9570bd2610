//! Command-line front end. JSON in, JSON out.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cartan::{develop_2d_identity_residual, fdk_residual};
use crate::error::{Error, Result};
use crate::identity::{run_battery, Battery, BatteryOptions};
use crate::path::{brownian_sample, figure_eight, line, square_loop, PiecewisePath};
use crate::signature::{log_signature, roc_profile, signature};
use crate::tensor::GradedTensor;
use crate::winding::{winding_field, winding_number, GridSpec};

/// On-disk path format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFile {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl From<&PiecewisePath> for PathFile {
    fn from(p: &PiecewisePath) -> Self {
        Self { dimension: p.dim(), vertices: p.vertices().to_vec(), name: p.name().map(str::to_string) }
    }
}

impl TryFrom<PathFile> for PiecewisePath {
    type Error = Error;

    fn try_from(f: PathFile) -> Result<Self> {
        let p = PiecewisePath::new(f.dimension, f.vertices)?;
        Ok(match f.name {
            Some(n) => p.with_name(n),
            None => p,
        })
    }
}

pub fn read_path(file: &Path) -> Result<PiecewisePath> {
    let text = fs::read_to_string(file)?;
    let parsed: PathFile = serde_json::from_str(&text)?;
    parsed.try_into()
}

/// Per-level coefficient dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub dimension: usize,
    pub depth: usize,
    pub levels: Vec<Vec<C64>>,
}

impl From<&GradedTensor> for TensorFile {
    fn from(t: &GradedTensor) -> Self {
        Self { dimension: t.dim(), depth: t.depth(), levels: t.levels().iter().map(|l| l.to_vec()).collect() }
    }
}

impl TryFrom<TensorFile> for GradedTensor {
    type Error = Error;

    fn try_from(f: TensorFile) -> Result<Self> {
        GradedTensor::from_levels(f.dimension, f.levels)
    }
}

/// Parses `3`, `-2.5i`, `1+2i`, `i`, `-0.5-1e-3i`.
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number `{s}`");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

fn parse_point(s: &str) -> std::result::Result<(f64, f64), String> {
    let v = parse_floats(s)?;
    match v.as_slice() {
        [x, y] => Ok((*x, *y)),
        _ => Err(format!("expected `x,y`, got `{s}`")),
    }
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number `{x}`")))
        .collect()
}

#[derive(Parser, Debug)]
#[command(
    name = "logsig",
    version,
    about = "Signatures, log-signatures and radius-of-convergence checks for piecewise-linear paths",
    long_about = "Signatures, log-signatures and radius-of-convergence checks for piecewise-linear paths.\n\n\
Paths are JSON objects {\"dimension\", \"vertices\", \"name\"}. Tensor dumps list one flat array per level; \
the word (i_1, ..., i_n) sits at index i_1 + d*i_2 + ... + d^(n-1)*i_n (letters from 0), and complex \
coefficients are [re, im] pairs.\n\nExit status: 0 when the command ran (whatever the verdict), 2 on usage or input errors. \
LOGSIG_THREADS caps the worker pool."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builder {
    Line,
    Square,
    Figure8,
    Brownian,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BatteryArg {
    Lineint,
    Doubint,
    Iterint,
    Genform,
    All,
}

impl From<BatteryArg> for Battery {
    fn from(b: BatteryArg) -> Self {
        match b {
            BatteryArg::Lineint => Battery::Lineint,
            BatteryArg::Doubint => Battery::Doubint,
            BatteryArg::Iterint => Battery::Iterint,
            BatteryArg::Genform => Battery::Genform,
            BatteryArg::All => Battery::All,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a fixture path.
    Gen {
        name: Builder,
        /// Increment of the straight line, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,0", allow_hyphen_values = true)]
        v: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated signature.
    Sig {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated log-signature.
    Logsig {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-degree norms of the log-signature and the tail verdict.
    Roc {
        path: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identity residual batteries.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = BatteryArg::All)]
        battery: BatteryArg,
        /// Largest |k| in the line-integral battery.
        #[arg(long, default_value_t = 5)]
        kmax: i64,
        /// Longest sequence in the iterated-integral battery.
        #[arg(long, default_value_t = 3)]
        mmax: usize,
        /// Largest |k_j| in the double and iterated batteries.
        #[arg(long, default_value_t = 3)]
        kbound: i64,
        /// Engine tolerance; the certification threshold is max(1e-6, 100 tol).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Development identities into sl_{m+1}(C).
    Develop {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Rates, comma separated, e.g. `1,0.5-2i,6.2831853i`.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, required = true, allow_hyphen_values = true)]
        rates: Vec<C64>,
        /// Scale of the e_2 image when m = 1.
        #[arg(long, value_parser = parse_complex, default_value = "1")]
        mu: C64,
        #[arg(long, default_value_t = 14)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Winding numbers of a closed path.
    Winding {
        path: PathBuf,
        #[arg(long, value_parser = parse_point, conflicts_with = "grid", allow_hyphen_values = true)]
        point: Option<(f64, f64)>,
        /// Grid resolution `nx,ny`.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        /// Grid rectangle `x0,x1,y0,y1`; defaults to the padded bounding box.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        bounds: Option<Vec<f64>>,
        /// Close the path with its chord first.
        #[arg(long)]
        tilde: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(file) => {
            fs::write(file, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn build(name: Builder, v: &[f64], steps: usize, seed: u64, dim: usize) -> Result<PiecewisePath> {
    Ok(match name {
        Builder::Line => line(v)?.with_name("line"),
        Builder::Square => square_loop(),
        Builder::Figure8 => figure_eight(),
        Builder::Brownian => brownian_sample(steps, seed, dim)?.with_name(format!("brownian-{seed}")),
    })
}

/// Runs a parsed command and returns what should go to stdout.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Gen { name, v, steps, seed, dim, out } => {
            let p = build(name, &v, steps, seed, dim)?;
            emit(&PathFile::from(&p), out.as_deref())
        }
        Command::Sig { path, depth, out } => {
            emit(&TensorFile::from(&signature(&read_path(&path)?, depth)?), out.as_deref())
        }
        Command::Logsig { path, depth, out } => {
            emit(&TensorFile::from(&log_signature(&read_path(&path)?, depth)?), out.as_deref())
        }
        Command::Roc { path, depth, out } => {
            emit(&roc_profile(&log_signature(&read_path(&path)?, depth)?)?, out.as_deref())
        }
        Command::Check { path, battery, kmax, mmax, kbound, tol, out } => {
            let p = read_path(&path)?;
            let opts = BatteryOptions { k_max: kmax, m_max: mmax, k_bound: kbound, tol };
            let report = run_battery(&p, battery.into(), &opts)?;
            emit(&report, out.as_deref())
        }
        Command::Develop { path, m, rates, mu, depth, out } => {
            let p = read_path(&path)?;
            if rates.len() != m {
                return Err(Error::InvalidArgument(format!("--m {m} needs {m} rates, got {}", rates.len())));
            }
            let q = p.x_normalized()?.ok_or(Error::DegenerateChord)?;
            let value = if m == 1 {
                let r = develop_2d_identity_residual(&q, rates[0], mu, depth)?;
                json!({
                    "identity": "two-dimensional",
                    "depth": depth,
                    "rows": [{ "lambda": rates[0], "mu": mu, "residual": r.residual, "tail": r.tail }],
                })
            } else {
                let rows = (1..=m)
                    .map(|k| {
                        let r = fdk_residual(&q, &rates, k, depth)?;
                        Ok(json!({ "k": k, "residual": r.residual, "tail": r.tail }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                json!({ "identity": "projection", "depth": depth, "rates": rates, "rows": rows })
            };
            emit(&value, out.as_deref())
        }
        Command::Winding { path, point, grid, bounds, tilde, out } => {
            let mut p = read_path(&path)?;
            if tilde {
                p = p.tilde()?;
            }
            if let Some(q) = point {
                let eta = winding_number(&p, q)?;
                return emit(&json!({ "point": [q.0, q.1], "winding": eta }), out.as_deref());
            }
            let res = grid.unwrap_or_else(|| vec![50, 50]);
            let &[nx, ny] = res.as_slice() else {
                return Err(Error::InvalidArgument("--grid takes `nx,ny`".into()));
            };
            let spec = match bounds.as_deref() {
                Some([x0, x1, y0, y1]) => GridSpec::new((*x0, *x1), (*y0, *y1), nx, ny)?,
                Some(_) => return Err(Error::InvalidArgument("--bounds takes `x0,x1,y0,y1`".into())),
                None => GridSpec::around(&p, 0.25, nx, ny)?,
            };
            emit(&winding_field(&p, spec)?, out.as_deref())
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("LOGSIG_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call fails harmlessly when the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match execute(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2.5i").unwrap(), C64::new(0.0, 2.5));
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("-0.5-1e-3i").unwrap(), C64::new(-0.5, -1e-3));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex("2e-1").unwrap(), C64::new(0.2, 0.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn path_file_round_trip() {
        let p = figure_eight();
        let text = serde_json::to_string(&PathFile::from(&p)).unwrap();
        let back: PiecewisePath = serde_json::from_str::<PathFile>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, p);
        let bad: PathFile = serde_json::from_str(r#"{"dimension":2,"vertices":[[0,0],[1]]}"#).unwrap();
        assert!(PiecewisePath::try_from(bad).is_err());
    }
}
