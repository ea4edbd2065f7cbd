//! Suites: ordered groups of checks with their artifacts.

use crate::checks::{amplifier, geometry, hecke, lattice, oscillatory, spherical};
use crate::config::{OutFormat, RunConfig};
use crate::report::{Record, SuiteReport, Timings};
use crate::{CliError, Result};
use std::path::Path;
use std::time::Instant;

pub const SUITES: [&str; 6] = ["hecke", "amplifier", "lattice", "spherical", "oscillatory", "report"];

/// A report, its timings sidecar, and extra files `(name, contents)`.
#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub reports: Vec<SuiteReport>,
    pub timings: Timings,
    pub artifacts: Vec<(String, String)>,
}

impl SuiteOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(SuiteReport::passed)
    }
}

struct Runner {
    report: SuiteReport,
    timings: Timings,
}

impl Runner {
    fn new(name: &str, seed: u64) -> Self {
        Runner { report: SuiteReport::new(name, seed), timings: Timings::default() }
    }

    fn run<F: FnOnce() -> Result<Vec<Record>>>(&mut self, f: F) -> Result<()> {
        let start = Instant::now();
        let records = f()?;
        let elapsed = start.elapsed();
        for r in records {
            eprintln!("  {:<22} {:?}", r.id, r.status);
            self.timings.add(&r.id, elapsed);
            self.report.push(r);
        }
        Ok(())
    }

    fn finish(self, artifacts: Vec<(String, String)>) -> SuiteOutput {
        SuiteOutput { reports: vec![self.report], timings: self.timings, artifacts }
    }
}

pub fn cmd_hecke(cfg: &RunConfig) -> Result<SuiteOutput> {
    let mut r = Runner::new("hecke", cfg.seed.unwrap_or(0));
    let p = &cfg.primes;
    r.run(|| Ok(vec![hecke::heckerel(p)?]))?;
    r.run(|| Ok(vec![hecke::volumes(p)?]))?;
    r.run(|| Ok(vec![hecke::phi0(p)?]))?;
    r.run(|| Ok(vec![hecke::algebra_identities(p)?]))?;
    Ok(r.finish(Vec::new()))
}

pub fn cmd_amplifier(cfg: &RunConfig) -> Result<SuiteOutput> {
    let seed = cfg.require_seed()?;
    let mut r = Runner::new("amplifier", seed);
    let p = &cfg.primes;
    r.run(|| Ok(vec![amplifier::dichotomy(p, seed, amplifier::SAMPLES)?]))?;
    r.run(|| Ok(vec![amplifier::forced_quadratic(p)?]))?;
    r.run(|| Ok(vec![amplifier::worst_case_table(p)?]))?;
    let mut ledger = None;
    r.run(|| {
        let (rec, l) = amplifier::ledger_audit(cfg.n, seed)?;
        ledger = Some(l);
        Ok(vec![rec])
    })?;
    let ledger = ledger.expect("ledger built");
    let mut text = serde_json::to_string_pretty(&ledger.to_json_rows()).expect("ledger serializes");
    text.push('\n');
    Ok(r.finish(vec![("amplifier_ledger.json".into(), text)]))
}

pub fn cmd_lattice(cfg: &RunConfig) -> Result<SuiteOutput> {
    let seed = cfg.require_seed()?;
    let mut r = Runner::new("lattice", seed);
    r.run(|| Ok(vec![lattice::minor_polynomial(seed, lattice::QUADRUPLES)?]))?;
    r.run(|| Ok(vec![lattice::return_lemma(seed, lattice::INSTANCES)?]))?;
    let mut witnesses = Vec::new();
    r.run(|| {
        let (rec, ws) = lattice::witnesses(0.3)?;
        witnesses = ws;
        Ok(vec![rec])
    })?;
    let jsonl: String = witnesses.iter().map(|w| format!("{}\n", w.to_json())).collect();
    Ok(r.finish(vec![("lattice_witnesses.jsonl".into(), jsonl)]))
}

pub fn cmd_spherical(cfg: &RunConfig) -> Result<SuiteOutput> {
    let seed = cfg.require_seed()?;
    let mut r = Runner::new("spherical", seed);
    r.run(|| Ok(vec![geometry::iwasawa_and_derivatives(seed)?]))?;
    r.run(|| Ok(vec![geometry::kostant_hessian(seed)?]))?;
    r.run(|| Ok(vec![geometry::xkpsi(seed)?]))?;
    r.run(|| Ok(vec![spherical::phi_at_identity(&cfg.t_spherical, cfg.tol)?]))?;
    r.run(|| Ok(vec![spherical::envelope(&cfg.t_spherical, cfg.grid, cfg.tol)?]))?;
    r.run(|| Ok(vec![spherical::phat_bounds(&cfg.t_spherical, &cfg.beta)?]))?;
    Ok(r.finish(Vec::new()))
}

pub fn cmd_oscillatory(cfg: &RunConfig) -> Result<SuiteOutput> {
    let mut r = Runner::new("oscillatory", cfg.seed.unwrap_or(0));
    let mut rows = Vec::new();
    r.run(|| {
        let (recs, rs) = oscillatory::decay(&cfg.t, cfg.tol, true)?;
        rows = rs;
        Ok(recs)
    })?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(|e| CliError::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(r.finish(vec![("oscillatory_sweep.csv".into(), String::from_utf8(bytes).expect("csv is utf-8"))]))
}

/// Every suite in order; the aggregate passes when all do.
pub fn cmd_report(cfg: &RunConfig) -> Result<SuiteOutput> {
    let seed = cfg.require_seed()?;
    let mut out = SuiteOutput::default();
    let mut summary = SuiteReport::new("report", seed);
    for f in [cmd_hecke, cmd_amplifier, cmd_lattice, cmd_spherical, cmd_oscillatory] {
        let o = f(cfg)?;
        for rep in &o.reports {
            summary.push(Record::new(
                &format!("suite.{}", rep.suite),
                "aggregate",
                rep.passed(),
                serde_json::json!({"records": rep.records.len(), "failed": rep.records.iter().filter(|r| !r.passed()).map(|r| r.id.clone()).collect::<Vec<_>>()}),
                serde_json::json!({"failed": []}),
            ));
        }
        out.reports.extend(o.reports);
        out.timings.entries.extend(o.timings.entries);
        out.artifacts.extend(o.artifacts);
    }
    out.reports.push(summary);
    Ok(out)
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteOutput> {
    match name {
        "hecke" => cmd_hecke(cfg),
        "amplifier" => cmd_amplifier(cfg),
        "lattice" => cmd_lattice(cfg),
        "spherical" => cmd_spherical(cfg),
        "oscillatory" => cmd_oscillatory(cfg),
        "report" => cmd_report(cfg),
        _ => Err(CliError::Usage(format!("unknown suite {name}"))),
    }
}

/// Writes `<suite>.json` or `<suite>.csv` per report, the artifacts, and `timings.json`.
pub fn write_output(out: &SuiteOutput, cfg: &RunConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for rep in &out.reports {
        match cfg.out {
            OutFormat::Json => std::fs::write(dir.join(format!("{}.json", rep.suite)), rep.to_json_string())?,
            OutFormat::Csv => std::fs::write(dir.join(format!("{}.csv", rep.suite)), rep.to_csv().map_err(|e| CliError::Io(e.into()))?)?,
        }
    }
    for (name, text) in &out.artifacts {
        std::fs::write(dir.join(name), text)?;
    }
    let mut t = serde_json::to_string_pretty(&out.timings.to_json()).expect("timings serialize");
    t.push('\n');
    std::fs::write(dir.join("timings.json"), t)?;
    Ok(())
}
