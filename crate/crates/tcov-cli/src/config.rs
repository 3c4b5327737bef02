use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use clap::Args;

use tcov::census::{all_cells_cached, Budget, CensusLevel};
use tcov::complex::DeltaComplex;
use tcov::pcover::check_prime;

use crate::{Format, Target};

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Directory for the census cache.
    #[arg(long, global = true, env = "TCOV_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache and recompute.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Largest prime accepted.
    #[arg(long, global = true, default_value_t = 13)]
    pub max_prime: u32,
    /// Cap on the total number of cells.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_cells: usize,
    /// Wall-clock cap in seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<u64>,
    /// Output format (each command has its own default).
    #[arg(long, short = 'f', global = true, value_enum)]
    pub format: Option<Format>,
    /// Print progress and timings to stderr.
    #[arg(long, short = 'v', global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

/// Exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Failure {
    Usage = 1,
    Budget = 2,
    Consistency = 3,
}

/// A failed internal cross-check.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConsistencyError(pub String);

/// Bad flags or values caught after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl Failure {
    pub fn classify(e: &anyhow::Error) -> Self {
        if e.downcast_ref::<ConsistencyError>().is_some() {
            return Failure::Consistency;
        }
        match e.downcast_ref::<tcov::Error>() {
            Some(tcov::Error::ResourceBudgetExceeded(_)) => Failure::Budget,
            Some(
                tcov::Error::InconsistentEuler { .. }
                | tcov::Error::MissingFace { .. }
                | tcov::Error::UnclassifiableCell(_),
            ) => Failure::Consistency,
            _ => Failure::Usage,
        }
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub genus: u32,
    pub prime: u32,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub max_cells: usize,
    pub time_limit: Option<Duration>,
    pub verbose: u8,
}

impl RunConfig {
    pub fn new(global: &GlobalOpts, target: Target, default_format: Format, allowed: &[Format]) -> Result<Self> {
        let format = global.format.unwrap_or(default_format);
        if !allowed.contains(&format) {
            bail!(UsageError(format!("format {format:?} is not available here (use one of {allowed:?})")));
        }
        check_genus(target.genus)?;
        check_prime_in_range(target.prime, global.max_prime)?;
        if global.max_cells == 0 || global.time_limit == Some(0) {
            bail!(UsageError("budget must be positive".into()));
        }
        Ok(Self {
            genus: target.genus,
            prime: target.prime,
            format,
            cache_dir: if global.no_cache { None } else { global.cache_dir.clone() },
            max_cells: global.max_cells,
            time_limit: global.time_limit.map(Duration::from_secs),
            verbose: global.verbose,
        })
    }

    pub fn budget(&self) -> Budget {
        Budget { max_cells: self.max_cells, deadline: self.time_limit.map(|t| Instant::now() + t) }
    }

    pub fn census(&self) -> Result<Vec<CensusLevel>> {
        let start = Instant::now();
        let (levels, warnings) = all_cells_cached(self.genus, self.prime, self.budget(), self.cache_dir.as_deref())?;
        for w in warnings {
            eprintln!("warning: {w}");
        }
        self.note(format_args!("census g={} p={}: {:?} in {:.2?}", self.genus, self.prime, sizes(&levels), start.elapsed()));
        Ok(levels)
    }

    pub fn complex(&self) -> Result<DeltaComplex> {
        let levels = self.census()?;
        let start = Instant::now();
        let x = DeltaComplex::assemble(&levels)?;
        self.note(format_args!("assembled in {:.2?}", start.elapsed()));
        Ok(x)
    }

    pub fn note(&self, msg: std::fmt::Arguments<'_>) {
        if self.verbose > 0 {
            eprintln!("{msg}");
        }
    }
}

pub fn check_genus(g: u32) -> Result<()> {
    if !(2..=3).contains(&g) {
        bail!(UsageError(format!("genus {g} is not supported (2 or 3)")));
    }
    Ok(())
}

pub fn check_prime_in_range(p: u32, max: u32) -> Result<()> {
    check_prime(p)?;
    if p > max {
        bail!(UsageError(format!("p = {p} exceeds the maximum {max} (raise --max-prime)")));
    }
    Ok(())
}

fn sizes(levels: &[CensusLevel]) -> Vec<usize> {
    levels.iter().map(|l| l.len()).collect()
}
