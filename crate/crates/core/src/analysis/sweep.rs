//! Seeded Monte Carlo sweeps over lattice size, loss rate and error rate.
//!
//! Trial `t` of every row draws from stream `t` of the row seed, so rows at
//! different `p` share random numbers (smoother curves) and the result does
//! not depend on how trials are spread over threads.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::SurfaceCode;
use crate::error::{check_probability, Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::loss::DamagedCode;
use crate::noise::{sample, NoiseParams};
use crate::stabilizer::ErrorType;

pub const CSV_HEADER: &str = "lattice,L,error_type,p_loss,p,trials,failures,rate,stderr,seed";
pub const DEFAULT_TRIAL_CAP: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub lattice: LatticeKind,
    pub sizes: Vec<usize>,
    pub error_type: ErrorType,
    pub p_grid: Vec<f64>,
    #[serde(default = "no_loss")]
    pub loss_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub trial_cap: u64,
}

fn no_loss() -> Vec<f64> {
    vec![0.0]
}

fn default_cap() -> u64 {
    DEFAULT_TRIAL_CAP
}

impl SweepConfig {
    pub fn total_trials(&self) -> u64 {
        (self.sizes.len() * self.p_grid.len() * self.loss_grid.len()) as u64 * self.trials
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.p_grid.is_empty() || self.loss_grid.is_empty() {
            return Err(Error::InvalidArgument(
                "sizes, p grid and loss grid must be nonempty".into(),
            ));
        }
        if let Some(&l) = self.sizes.iter().find(|&&l| l < 2) {
            return Err(Error::InvalidSize(l));
        }
        for &p in &self.p_grid {
            check_probability("p", p)?;
        }
        for &p in &self.loss_grid {
            check_probability("p_loss", p)?;
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        let requested = self.total_trials();
        if requested > self.trial_cap {
            return Err(Error::TrialCap {
                requested,
                cap: self.trial_cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lattice: String,
    #[serde(rename = "L")]
    pub size: usize,
    pub error_type: ErrorType,
    pub p_loss: f64,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl SweepRow {
    pub fn new(
        lattice: &LatticeKind,
        size: usize,
        error_type: ErrorType,
        p_loss: f64,
        p: f64,
        trials: u64,
        failures: u64,
        seed: u64,
    ) -> Self {
        let rate = failures as f64 / trials as f64;
        SweepRow {
            lattice: lattice.to_string(),
            size,
            error_type,
            p_loss,
            p,
            trials,
            failures,
            rate,
            stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
            seed,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Number of failed trials among `trials` at error rate `p` and loss rate
/// `p_loss`.
pub fn count_failures(
    code: &SurfaceCode,
    error_type: ErrorType,
    p: f64,
    p_loss: f64,
    seed: u64,
    trials: u64,
) -> Result<u64> {
    let (p_x, p_z) = match error_type {
        ErrorType::X => (p, 0.0),
        ErrorType::Z => (0.0, p),
    };
    let outcomes: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let params = NoiseParams {
                p_x,
                p_z,
                p_loss,
                seed,
                trial_index: t,
            };
            let pat = sample(code.lattice(), &params)?;
            let errors = match error_type {
                ErrorType::X => &pat.x_errors,
                ErrorType::Z => &pat.z_errors,
            };
            let out = if pat.lost.is_empty() {
                code.decode(errors, error_type)?
            } else {
                DamagedCode::new(code, &pat.lost)?.decode(errors, error_type)?
            };
            Ok(out.failed)
        })
        .collect();
    Ok(outcomes?.into_iter().filter(|&f| f).count() as u64)
}

/// Runs every grid point of `config`; rows are ordered by size, then loss,
/// then error rate.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepTable> {
    config.validate()?;
    let mut rows = Vec::new();
    for &size in &config.sizes {
        let code = SurfaceCode::new(Lattice::build(config.lattice.clone(), size)?);
        for &p_loss in &config.loss_grid {
            for &p in &config.p_grid {
                let failures =
                    count_failures(&code, config.error_type, p, p_loss, config.seed, config.trials)?;
                log::debug!("L={size} p_loss={p_loss} p={p}: {failures}/{}", config.trials);
                rows.push(SweepRow::new(
                    &config.lattice,
                    size,
                    config.error_type,
                    p_loss,
                    p,
                    config.trials,
                    failures,
                    config.seed,
                ));
            }
        }
    }
    Ok(SweepTable { rows })
}

/// Writes `# `-prefixed comment lines, then the header and rows.
pub fn write_csv<W: Write>(table: &SweepTable, comments: &[String], mut out: W) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in &table.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`write_csv`]. Errors carry the 1-based line.
pub fn read_csv<R: BufRead>(input: R, path: &Path) -> Result<SweepTable> {
    let parse_error = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let number = i as u64 + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            if trimmed != CSV_HEADER {
                return Err(parse_error(number, format!("expected header `{CSV_HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(trimmed.as_bytes());
        let headers = csv::StringRecord::from(CSV_HEADER.split(',').collect::<Vec<_>>());
        let record = reader
            .records()
            .next()
            .unwrap_or_else(|| Ok(csv::StringRecord::new()))
            .map_err(|e| parse_error(number, e.to_string()))?;
        let row: SweepRow = record
            .deserialize(Some(&headers))
            .map_err(|e| parse_error(number, e.to_string()))?;
        if row.failures > row.trials || row.trials == 0 {
            return Err(parse_error(
                number,
                format!("failures {} not within trials {}", row.failures, row.trials),
            ));
        }
        rows.push(row);
    }
    if !header_seen {
        return Err(parse_error(0, "missing header".into()));
    }
    Ok(SweepTable { rows })
}
