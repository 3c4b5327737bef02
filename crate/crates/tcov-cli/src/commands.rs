use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use tcov::census::{family, target_type, CensusLevel};
use tcov::complex::format_vector;
use tcov::genus2::{Genus2Expectation, TopCellFamily};
use tcov::loci::{LociReport, Locus};

use crate::config::{check_prime_in_range, ConsistencyError, GlobalOpts, RunConfig, UsageError};
use crate::{dot, Format, Target};

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    target: Target,
    /// Directory for the per-dimension files (nothing is written without it).
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CensusRow<'a> {
    dimension: usize,
    index: usize,
    key: String,
    target_type: String,
    family: &'a str,
    cover: String,
}

fn census_rows(level: &CensusLevel) -> Vec<CensusRow<'_>> {
    level
        .cells
        .iter()
        .enumerate()
        .map(|(index, c)| CensusRow {
            dimension: level.dimension,
            index,
            key: c.key.to_hex(),
            target_type: target_type(c.cover.target()),
            family: family(&c.cover),
            cover: c.cover.describe(),
        })
        .collect()
}

fn write_csv<T: Serialize>(w: impl Write, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(mut w: impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))
}

pub fn census(global: &GlobalOpts, args: CensusArgs) -> Result<()> {
    let cfg = RunConfig::new(global, args.target, Format::Csv, &[Format::Csv, Format::Json, Format::Text])?;
    let levels = cfg.census()?;
    if let Some(dir) = &args.out {
        for level in &levels {
            let stem = format!("census_g{}_p{}_n{}", cfg.genus, cfg.prime, level.dimension);
            match cfg.format {
                Format::Json => write_json(create(&dir.join(format!("{stem}.json")))?, &level.records())?,
                _ => write_csv(create(&dir.join(format!("{stem}.csv")))?, &census_rows(level))?,
            }
        }
    }
    let mut stdout = io::stdout().lock();
    for level in &levels {
        writeln!(stdout, "n={} rows {}", level.dimension, level.len())?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    #[command(flatten)]
    target: Target,
    /// Only compute the first Betti number.
    #[arg(long)]
    only_b1: bool,
}

#[derive(Serialize)]
struct HomologyReport {
    genus: u32,
    p: u32,
    betti: Vec<usize>,
    reduced: Vec<i64>,
    chain_dims: Vec<usize>,
    euler: i64,
}

pub fn homology(global: &GlobalOpts, args: HomologyArgs) -> Result<()> {
    let cfg = RunConfig::new(global, args.target, Format::Text, &[Format::Text, Format::Json])?;
    let x = cfg.complex()?;
    let mut stdout = io::stdout().lock();
    if args.only_b1 {
        let b = x.betti_up_to(1);
        let b1 = b.get(1).copied().unwrap_or(0);
        match cfg.format {
            Format::Json => write_json(&mut stdout, &serde_json::json!({ "genus": cfg.genus, "p": cfg.prime, "b1": b1 }))?,
            _ => writeln!(stdout, "b1 = {b1}")?,
        }
        return Ok(());
    }
    let b = x.betti();
    let euler = x.euler_characteristic()?;
    match cfg.format {
        Format::Json => write_json(
            &mut stdout,
            &HomologyReport {
                genus: cfg.genus,
                p: cfg.prime,
                reduced: b.reduced(),
                betti: b.betti,
                chain_dims: b.chain_dims,
                euler,
            },
        )?,
        _ => {
            writeln!(stdout, "b = {}", format_vector(&b.betti))?;
            writeln!(stdout, "reduced = {}", format_vector(&b.reduced()))?;
            writeln!(stdout, "chains = {}", format_vector(&b.chain_dims))?;
            writeln!(stdout, "euler = {euler} (chains and homology agree)")?;
        }
    }
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum LocusArg {
    W,
    Lw,
    Br,
    Scon,
    Par,
}

impl From<LocusArg> for Locus {
    fn from(l: LocusArg) -> Self {
        match l {
            LocusArg::W => Locus::W,
            LocusArg::Lw => Locus::Lw,
            LocusArg::Br => Locus::Br,
            LocusArg::Scon => Locus::Scon,
            LocusArg::Par => Locus::Par,
        }
    }
}

#[derive(Args, Debug)]
pub struct LociArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, short = 'l', value_enum)]
    locus: LocusArg,
    /// Also compute the reduced homology of the locus.
    #[arg(long)]
    betti: bool,
    /// Permit scon and par at p = 2, where they are not known to be contractible.
    #[arg(long)]
    allow_p2_experimental: bool,
    /// Write the membership table here as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct MembershipRow {
    dimension: usize,
    index: usize,
    key: String,
    member: bool,
    generating: bool,
    witness: String,
}

#[derive(Serialize)]
struct LociSummary {
    genus: u32,
    p: u32,
    locus: Locus,
    cells: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced: Option<Vec<i64>>,
    members: Vec<MembershipRow>,
}

pub fn loci(global: &GlobalOpts, args: LociArgs) -> Result<()> {
    let cfg = RunConfig::new(global, args.target, Format::Text, &[Format::Text, Format::Json, Format::Csv])?;
    let locus = Locus::from(args.locus);
    if cfg.prime == 2 && matches!(locus, Locus::Scon | Locus::Par) && !args.allow_p2_experimental {
        bail!(UsageError(format!("locus {locus} at p = 2 needs --allow-p2-experimental")));
    }
    let x = cfg.complex()?;
    let report = LociReport::compute(&x)?;
    if !report.is_nested() {
        bail!(ConsistencyError("loci are not nested".into()));
    }
    let generating = report.generating(locus);
    let rows: Vec<MembershipRow> = report
        .cells
        .iter()
        .flatten()
        .map(|c| MembershipRow {
            dimension: c.dim,
            index: c.index,
            key: c.key.to_hex(),
            member: c.is_member(locus),
            generating: generating[c.dim][c.index],
            witness: c.witness_for(locus),
        })
        .collect();
    if let Some(path) = &args.csv {
        write_csv(create(path)?, &rows)?;
    }
    let cells = report.counts(locus);
    let reduced = args.betti.then(|| report.subcomplex(&x, locus).betti().reduced());
    let mut stdout = io::stdout().lock();
    match cfg.format {
        Format::Csv => write_csv(&mut stdout, &rows)?,
        Format::Json => write_json(
            &mut stdout,
            &LociSummary { genus: cfg.genus, p: cfg.prime, locus, cells, reduced: reduced.clone(), members: rows },
        )?,
        _ => {
            writeln!(stdout, "locus {locus}: cells {}", format_vector(&cells))?;
            if let Some(r) = &reduced {
                writeln!(stdout, "reduced = {}", format_vector(r))?;
            }
        }
    }
    if let (Format::Csv, Some(r)) = (cfg.format, &reduced) {
        eprintln!("reduced = {}", format_vector(r));
    }
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportWhat {
    /// Cells of one dimension (or all).
    Cells,
    /// Cells with their faces and stabilisers.
    Complex,
    /// Genus-2 closed-form expectations for a list of primes.
    Expectations,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long, value_enum, default_value = "cells")]
    what: ExportWhat,
    #[arg(long, short = 'g')]
    genus: Option<u32>,
    #[arg(long, short = 'p')]
    prime: Option<u32>,
    /// Restrict cells to one dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Primes for the expectation table.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13")]
    primes: Vec<u32>,
    /// Output file (stdout when absent).
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ExpectationRow {
    p: u32,
    maximal_cells: u64,
    wedge_count: u64,
    free_theta_distinct: Option<u64>,
    dilated_theta_distinct: Option<u64>,
    family_counts: String,
}

fn expectation_row(e: &Genus2Expectation) -> ExpectationRow {
    let families: Vec<String> = TopCellFamily::ALL
        .iter()
        .filter_map(|f| e.family_rows.get(f).map(|n| format!("{f}={n}")))
        .collect();
    ExpectationRow {
        p: e.p,
        maximal_cells: e.maximal_cells,
        wedge_count: e.wedge_count,
        free_theta_distinct: e.free_theta_distinct,
        dilated_theta_distinct: e.dilated_theta_distinct,
        family_counts: families.join(" "),
    }
}

pub fn export(global: &GlobalOpts, args: ExportArgs) -> Result<()> {
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(io::BufWriter::new(create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    if args.what == ExportWhat::Expectations {
        let format = global.format.unwrap_or(Format::Csv);
        let mut table = Vec::new();
        for &p in &args.primes {
            check_prime_in_range(p, global.max_prime)?;
            table.push(Genus2Expectation::for_prime(p)?);
        }
        match format {
            Format::Csv => write_csv(sink, &table.iter().map(expectation_row).collect::<Vec<_>>())?,
            Format::Json => write_json(sink, &table)?,
            other => bail!(UsageError(format!("expectations cannot be written as {other:?}"))),
        }
        return Ok(());
    }
    let (Some(genus), Some(prime)) = (args.genus, args.prime) else {
        bail!(UsageError("--genus and --prime are required".into()));
    };
    let cfg = RunConfig::new(global, Target { genus, prime }, Format::Dot, &[Format::Dot, Format::Json, Format::Csv])?;
    let levels = cfg.census()?;
    let chosen: Vec<&CensusLevel> = levels.iter().filter(|l| args.dim.is_none_or(|n| l.dimension == n)).collect();
    if chosen.is_empty() {
        bail!(UsageError(format!("no dimension {:?} (top dimension is {})", args.dim, levels.len() - 1)));
    }
    match (args.what, cfg.format) {
        (ExportWhat::Complex, Format::Json) => {
            let x = tcov::complex::DeltaComplex::assemble(&levels)?;
            write_json(sink, &x.dump())?;
        }
        (ExportWhat::Complex, other) => bail!(UsageError(format!("the complex can only be written as json, not {other:?}"))),
        (_, Format::Dot) => {
            for level in chosen {
                for (i, c) in level.cells.iter().enumerate() {
                    dot::write_cover(&mut sink, &format!("g{genus}_p{prime}_n{}_{i}", level.dimension), &c.cover)?;
                }
            }
            sink.flush()?;
        }
        (_, Format::Json) => {
            let records: Vec<_> = chosen.iter().flat_map(|l| l.records()).collect();
            write_json(sink, &records)?;
        }
        (_, _) => {
            let rows: Vec<_> = chosen.iter().flat_map(|l| census_rows(l)).collect();
            write_csv(sink, &rows)?;
        }
    }
    Ok(())
}
