//! Batch command-line surface: sweeps, certificates and generators.
//!
//! Every command writes one JSON document (to `--out` or stdout). Exit status
//! is 0 when every verification passed, 1 when one failed and 2 on bad input.

mod commands;
mod gap_rule;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use gap_rule::GapRule;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Parser)]
#[command(name = "coarse-lab", version, about = "Cover calculus and coarse-geometry certificates on finite metric spaces")]
pub struct SweepConfig {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "COARSE_LAB_JOBS", default_value_t = 0)]
    pub jobs: usize,

    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Scales {
    /// Inclusive range `a:b:step`.
    #[arg(long = "scales", conflicts_with = "list")]
    pub range: Option<ScaleRange>,

    /// Comma-separated scales.
    #[arg(long = "scale-list", value_delimiter = ',')]
    pub list: Option<Vec<f64>>,
}

impl Scales {
    pub fn values(&self) -> Vec<f64> {
        match (&self.range, &self.list) {
            (Some(r), _) => r.0.clone(),
            (None, Some(l)) => l.clone(),
            (None, None) => Vec::new(),
        }
    }

    fn required(&self) -> Result<Vec<f64>> {
        let v = self.values();
        if v.is_empty() {
            return Err(Error::malformed("a nonempty --scales or --scale-list is required"));
        }
        if let Some(bad) = v.iter().find(|s| !(**s >= 0.0) || s.is_infinite()) {
            return Err(Error::malformed(format!("scale {bad} is not a finite non-negative number")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRange(pub Vec<f64>);

impl FromStr for ScaleRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        let [a, b, step] = parts[..] else {
            return Err("expected a:b:step".into());
        };
        if !(step > 0.0) || !a.is_finite() || !b.is_finite() || a > b {
            return Err(format!("empty or unbounded range {s}"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        Ok(ScaleRange((0..count).map(|k| a + k as f64 * step).collect()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// The given cover itself, checked against the ball cover at each scale.
    MultCover,
    /// Split the given cover into gap-separated families.
    Kolmogorov,
    /// Build a coloring from brick coarsenings (grid spaces).
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Path,
    Grid,
    RandomGraph,
    BrickCover,
    BallCover,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Multiplicity, mesh and Lebesgue number of a cover and of ball covers.
    Analyze {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[command(flatten)]
        scales: Scales,
    },
    /// Emit asymptotic-dimension certificates, one per scale.
    CertifyAsdim {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::MultCover)]
        method: Method,
        #[command(flatten)]
        scales: Scales,
    },
    /// Certify a map n-to-1 over an (S, R) sweep.
    CheckMap {
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        scales: Scales,
        #[arg(long, default_value = "2S+1", value_parser = parse_gap_rule)]
        gap_rule: GapRule,
        /// Fail unless every row has this n.
        #[arg(long)]
        expect_n: Option<usize>,
        /// Embed every certificate in the report.
        #[arg(long)]
        certificates: bool,
    },
    /// Push a source cover forward to a bounded-multiplicity target cover.
    Push {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        /// Target ball radius S.
        #[arg(long)]
        scale: f64,
        #[arg(long, default_value = "2S+1", value_parser = parse_gap_rule)]
        gap_rule: GapRule,
    },
    /// Chain metric of a basis chain and its two-sided level bounds.
    Metrize {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        chain: PathBuf,
    },
    /// Randomized suite running every construction's verifier.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 40)]
        max_n: usize,
    },
    /// Write a generated space or cover file.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        edge_probability: f64,
        #[arg(long, default_value_t = 1)]
        min_weight: u32,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
        /// Brick side.
        #[arg(long)]
        size: Option<usize>,
        /// Space for `ball-cover`.
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Re-verify certificates from files.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
}

fn parse_gap_rule(s: &str) -> std::result::Result<GapRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A rendered report and whether every verification in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub passed: bool,
}

pub fn run(config: &SweepConfig) -> Result<Report> {
    crate::par::with_jobs(config.jobs, || commands::dispatch(&config.command))
}

/// Parse, run and write; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match SweepConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&config).and_then(|report| emit(&config, &report).map(|()| report)) {
        Ok(report) => i32::from(!report.passed),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn emit(config: &SweepConfig, report: &Report) -> Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, &report.body)
            .map_err(|source| Error::Io { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(report.body.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}
