use std::collections::BTreeMap;
use std::io::{self, Write};

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;

use tcov::complex::{format_vector, DeltaComplex};
use tcov::genus2::{self, TopCellFamily};
use tcov::loci::{LociReport, Locus};
use tcov::PCover;

use crate::config::{ConsistencyError, GlobalOpts, RunConfig};
use crate::{Format, Target};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, short = 'g', default_value_t = 2)]
    genus: u32,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    primes: Vec<u32>,
    /// Closed-form counts, Betti numbers and loci (the default).
    #[arg(long, alias = "paper")]
    closed_forms: bool,
    /// Structural invariants: ∂∘∂ = 0, canonical forms, switching, nesting.
    #[arg(long)]
    property_suite: bool,
}

#[derive(Serialize)]
struct Check {
    genus: u32,
    p: u32,
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Summary {
    passed: bool,
    failures: usize,
    checks: Vec<Check>,
}

struct Recorder {
    genus: u32,
    p: u32,
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { genus: self.genus, p: self.p, name: name.into(), passed, detail });
    }
}

pub fn run(global: &GlobalOpts, args: VerifyArgs) -> Result<()> {
    let run_closed = args.closed_forms || !args.property_suite;
    let mut checks = Vec::new();
    let mut format = Format::Json;
    for &p in &args.primes {
        let cfg = RunConfig::new(global, Target { genus: args.genus, prime: p }, Format::Json, &[Format::Json, Format::Text])?;
        format = cfg.format;
        let levels = cfg.census()?;
        let x = DeltaComplex::assemble(&levels)?;
        let loci = LociReport::compute(&x)?;
        let mut rec = Recorder { genus: cfg.genus, p, checks: Vec::new() };
        if run_closed {
            if cfg.genus == 2 {
                genus_two(&mut rec, &levels, &x)?;
            } else {
                let b = x.betti_up_to(1);
                rec.check("first Betti number", b.get(1) == Some(&0), format!("b1 = {}", b.get(1).copied().unwrap_or(0)));
            }
            loci_checks(&mut rec, &x, &loci);
        }
        if args.property_suite {
            properties(&mut rec, &levels, &x, &loci);
        }
        checks.extend(rec.checks);
    }
    let failures = checks.iter().filter(|c| !c.passed).count();
    let summary = Summary { passed: failures == 0, failures, checks };
    let mut stdout = io::stdout().lock();
    match format {
        Format::Text => {
            for c in &summary.checks {
                writeln!(
                    stdout,
                    "{} g={} p={} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.genus,
                    c.p,
                    c.name,
                    c.detail
                )?;
            }
        }
        _ => {
            serde_json::to_writer_pretty(&mut stdout, &summary)?;
            writeln!(stdout)?;
        }
    }
    if failures > 0 {
        bail!(ConsistencyError(format!("{failures} verification checks failed")));
    }
    Ok(())
}

fn genus_two(rec: &mut Recorder, levels: &[tcov::census::CensusLevel], x: &DeltaComplex) -> Result<()> {
    let p = rec.p;
    let expect = genus2::Genus2Expectation::for_prime(p)?;
    let top = &levels[2];
    rec.check(
        "maximal cells",
        top.len() as u64 == expect.maximal_cells,
        format!("maximal cells {} (expected {})", top.len(), expect.maximal_cells),
    );
    let b = x.betti();
    let want = vec![1, 0, expect.wedge_count as usize];
    rec.check(
        "betti numbers",
        b.betti == want,
        format!("b = {}, b2 = {} (expected {})", format_vector(&b.betti), b.betti[2], expect.wedge_count),
    );
    let euler = x.euler_characteristic();
    rec.check("euler characteristic", euler.is_ok(), format!("{:?}", euler.map_err(|e| e.to_string())));
    if p < 5 {
        return Ok(());
    }
    match genus2::family_census_check(p, top) {
        Ok(r) => {
            let counts: Vec<String> = TopCellFamily::ALL.iter().map(|f| format!("{f}={}", r.counts[f])).collect();
            rec.check("maximal-cell families", r.matches(), counts.join(" "));
        }
        Err(e) => rec.check("maximal-cell families", false, e.to_string()),
    }
    let mut fam: BTreeMap<TopCellFamily, u64> = BTreeMap::new();
    for c in &top.cells {
        if let Ok(f) = genus2::classify_top_cell(&c.cover) {
            *fam.entry(f).or_default() += 1;
        }
    }
    let count = |f| fam.get(&f).copied().unwrap_or(0);
    let free = count(TopCellFamily::FreeThetaDihedral) + count(TopCellFamily::FreeThetaCyclic);
    let polya = genus2::polya_free_theta_count(p)?;
    let bracelets = genus2::bracelet_orbit_count(p)?;
    rec.check(
        "free thetas",
        free == polya && polya == bracelets,
        format!("census {free}, cycle index {polya}, bracelets {bracelets}"),
    );
    let dil = genus2::dilated_theta_census(p)?;
    let (d, r) = (count(TopCellFamily::DilatedThetaDistinct), count(TopCellFamily::DilatedThetaRepeatedFlow));
    rec.check(
        "dilated thetas",
        d == dil.distinct && r == dil.reflection,
        format!("census {d} distinct + {r} reflection, enumerated {} + {}", dil.distinct, dil.reflection),
    );
    Ok(())
}

fn loci_checks(rec: &mut Recorder, x: &DeltaComplex, loci: &LociReport) {
    for l in Locus::ALL {
        if rec.p == 2 && matches!(l, Locus::Scon | Locus::Par) {
            continue;
        }
        let b = loci.subcomplex(x, l).betti();
        rec.check(&format!("locus {l} acyclic"), b.is_acyclic(), format!("reduced = {}", format_vector(&b.reduced())));
    }
}

/// Deterministic relabelling: reverse the cells, then switch every free
/// vertex by its index.
fn scrambled(c: &PCover) -> Result<PCover> {
    let n = c.target().num_cells();
    let perm: Vec<usize> = (0..n).rev().collect();
    let mut out = c.relabel(&perm)?;
    for v in 0..out.target().num_vertices() {
        if !out.is_dilated_vertex(v) {
            out = out.switch(v, v as u32 + 1)?;
        }
    }
    Ok(out)
}

fn properties(rec: &mut Recorder, levels: &[tcov::census::CensusLevel], x: &DeltaComplex, loci: &LociReport) {
    rec.check("boundary squares to zero", x.boundary_squares_to_zero(), format!("chains {}", format_vector(&x.chain_dims())));
    let (mut total, mut canon_bad, mut rh_bad) = (0, 0, 0);
    for level in levels {
        for c in &level.cells {
            total += 1;
            match scrambled(&c.cover) {
                Ok(s) if s.canonical_form().key == c.key => {}
                _ => canon_bad += 1,
            }
            let ok = c.cover.build_source().is_ok_and(|src| {
                let p = c.cover.p() as i64;
                let global = src.source.genus().ok().map(|g| g as i64)
                    == c.cover.target().genus().ok().map(|g| p * (g as i64 - 1) + 1);
                global && src.local_riemann_hurwitz(&c.cover) && src.quotient_matches(&c.cover)
            });
            if !ok {
                rh_bad += 1;
            }
        }
    }
    rec.check(
        "canonical form under relabelling and switching",
        canon_bad == 0,
        format!("{total} cells, {canon_bad} failures"),
    );
    rec.check("riemann-hurwitz", rh_bad == 0, format!("{total} sources, {rh_bad} failures"));
    rec.check("loci nested", loci.is_nested(), "w ⊆ lw ⊆ br ⊆ scon ⊆ par".into());
}
