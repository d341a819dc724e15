use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use fqmoments::charmod::UnitGroupCache;
use fqmoments::fieldpoly::{Poly, PrimeField};
use fqmoments::moments::{Family, MomentEngine, Normalization};

use crate::Failure;

/// Inclusive degree range: `4`, `3..6`, `3..=6` or `3-6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegRange {
    pub lo: usize,
    pub hi: usize,
}

impl DegRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for DegRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree {t:?}"));
        let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = s.split_once("..") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = s.split_once('-') {
            (num(a)?, num(b)?)
        } else {
            let d = num(s)?;
            (d, d)
        };
        if lo > hi {
            return Err(format!("empty degree range {s:?}"));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for DegRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand; each can also come from `FQMOMENTS_<FLAG>`.
#[derive(Args, Debug)]
pub struct Common {
    /// Odd prime q
    #[arg(long, global = true, env = "FQMOMENTS_Q", default_value_t = 3)]
    pub q: u32,
    /// Output file (stdout when absent)
    #[arg(long, global = true, env = "FQMOMENTS_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "FQMOMENTS_FORMAT", value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Directory for cached unit-group tables
    #[arg(long, global = true, env = "FQMOMENTS_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores); never changes the output
    #[arg(long, global = true, env = "FQMOMENTS_WORKERS")]
    pub workers: Option<usize>,
    /// Seed for every sampled grid
    #[arg(long, global = true, env = "FQMOMENTS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Override the primary tolerance of the command
    #[arg(long, global = true, env = "FQMOMENTS_TOLERANCE")]
    pub tolerance: Option<f64>,
    /// Record wall time per cell (output is then no longer byte-stable)
    #[arg(long, global = true, env = "FQMOMENTS_TIMING")]
    pub timing: bool,
}

impl Common {
    pub fn field(&self) -> Result<PrimeField, Failure> {
        Ok(PrimeField::new(self.q)?)
    }

    pub fn engine(&self) -> MomentEngine {
        match &self.cache_dir {
            Some(dir) => MomentEngine::with_cache(UnitGroupCache::new(dir)),
            None => MomentEngine::new(),
        }
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly, Failure> {
        Ok(Poly::parse(self.field()?, s)?)
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Degrees of the moduli R
    #[arg(long, env = "FQMOMENTS_DEG_R", default_value = "1..4")]
    pub deg_r: DegRange,
    /// Largest twist degree in the main-term sums
    #[arg(long, env = "FQMOMENTS_DEG_H", default_value_t = 2)]
    pub deg_h: usize,
    /// Moduli up to this degree get every residue pair in the orthogonality check
    #[arg(long, default_value_t = 3)]
    pub exhaustive_deg: usize,
    /// Sampled residue pairs per larger modulus
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
}

#[derive(Args, Debug)]
pub struct ReciprocityArgs {
    /// Degrees of the prime moduli P and Q
    #[arg(long, env = "FQMOMENTS_DEG_R", default_value = "1..3")]
    pub deg_r: DegRange,
    /// Twist the second moment by +P instead of −P (expected to fail)
    #[arg(long)]
    pub negative_control: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Direct,
    DirectAfe,
    Decomposition,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Degrees of the moduli R
    #[arg(long, env = "FQMOMENTS_DEG_R", default_value = "3..6")]
    pub deg_r: DegRange,
    /// Largest deg H
    #[arg(long, env = "FQMOMENTS_DEG_H", default_value_t = 2)]
    pub deg_h: usize,
    /// Largest deg K (two-twist scans)
    #[arg(long, env = "FQMOMENTS_DEG_K", default_value_t = 2)]
    pub deg_k: usize,
    /// primitive, nonprincipal-even or nonprincipal-odd
    #[arg(long, env = "FQMOMENTS_FAMILY", default_value = "primitive")]
    pub family: Family,
    /// mean, parity-scaled or raw
    #[arg(long, env = "FQMOMENTS_NORMALIZATION", default_value = "mean")]
    pub normalization: Normalization,
    /// Moduli per degree; larger degrees are sampled with --seed
    #[arg(long, env = "FQMOMENTS_SAMPLE")]
    pub sample: Option<usize>,
    /// Rows to emit per cell
    #[arg(long, value_enum, value_delimiter = ',', default_value = "direct")]
    pub routes: Vec<RouteArg>,
    /// Cells with deg R up to this are cross-checked against the decomposition route
    #[arg(long, default_value_t = 5)]
    pub dual_route_max_deg: usize,
    /// Single-cell mode: the modulus R (digit or text form)
    #[arg(long, requires = "twist")]
    pub modulus: Option<String>,
    /// Single-cell mode: H
    #[arg(long)]
    pub twist: Option<String>,
    /// Single-cell mode: K
    #[arg(long)]
    pub twist_k: Option<String>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// The modulus R (digit or text form)
    #[arg(long)]
    pub modulus: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LemmaSuite {
    All,
    MainTerm,
    Offdiag,
    Arithmetic,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    /// Degrees of the moduli R
    #[arg(long, env = "FQMOMENTS_DEG_R", default_value = "1..4")]
    pub deg_r: DegRange,
    /// Largest twist degree
    #[arg(long, env = "FQMOMENTS_DEG_H", default_value_t = 2)]
    pub deg_h: usize,
    /// Largest x in the main-term sums
    #[arg(long, default_value_t = 6)]
    pub max_x: i64,
    #[arg(long, value_enum, default_value_t = LemmaSuite::All)]
    pub suite: LemmaSuite,
    /// Largest accepted off-diagonal ratio
    #[arg(long, default_value_t = 3.0)]
    pub offdiag_constant: f64,
    /// ε values for the arithmetic ratio
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25")]
    pub epsilon: Vec<f64>,
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// List cached tables
    Inspect,
    /// Delete every cached table
    Clear,
}
