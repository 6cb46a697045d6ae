//! Threshold search without a prior guess: a coarse scan with the smallest
//! and largest sizes brackets the crossing, then a fine grid around it is
//! simulated for every size and fitted.

use super::fit::{crossing_estimate, fit_points, FitOptions, FitPoint, ScalingFit};
use super::sweep::{count_failures, SweepRow};
use crate::decoder::SurfaceCode;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::stabilizer::ErrorType;

#[derive(Clone, Debug, PartialEq)]
pub struct LocateConfig {
    pub sizes: Vec<usize>,
    pub coarse_trials: u64,
    pub trials: u64,
    pub seed: u64,
    /// Coarse scan: geometric grid from `coarse_min` up to `coarse_max`
    /// with consecutive ratio `coarse_ratio`.
    pub coarse_min: f64,
    pub coarse_max: f64,
    pub coarse_ratio: f64,
    /// Fine grid: `fine_points` values spanning `x0 * (1 -+ fine_span)`.
    pub fine_points: usize,
    pub fine_span: f64,
    pub fit: FitOptions,
}

impl Default for LocateConfig {
    fn default() -> Self {
        LocateConfig {
            sizes: vec![8, 12, 16],
            coarse_trials: 400,
            trials: 2000,
            seed: 1,
            coarse_min: 0.003,
            coarse_max: 0.3,
            coarse_ratio: 0.8,
            fine_points: 7,
            fine_span: 0.2,
            fit: FitOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Located {
    Threshold { fit: ScalingFit, rows: Vec<SweepRow> },
    /// Larger codes already fail more often without any Pauli errors: the
    /// loss rate is past the cutoff.
    Vanished { rows: Vec<SweepRow> },
}

impl Located {
    /// Fitted threshold, or zero when it vanished.
    pub fn threshold(&self) -> f64 {
        match self {
            Located::Threshold { fit, .. } => fit.p_th,
            Located::Vanished { .. } => 0.0,
        }
    }

    pub fn rows(&self) -> &[SweepRow] {
        match self {
            Located::Threshold { rows, .. } | Located::Vanished { rows } => rows,
        }
    }
}

/// Which rate the search moves along.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Axis {
    /// Pauli error rate at a fixed loss rate.
    Error { p_loss: f64 },
    /// Loss rate with no Pauli errors.
    Loss,
}

struct Search<'a> {
    kind: &'a LatticeKind,
    codes: Vec<SurfaceCode>,
    error_type: ErrorType,
    axis: Axis,
    cfg: &'a LocateConfig,
    rows: Vec<SweepRow>,
}

impl Search<'_> {
    fn run(&mut self, index: usize, x: f64, trials: u64) -> Result<f64> {
        let (p, p_loss) = match self.axis {
            Axis::Error { p_loss } => (x, p_loss),
            Axis::Loss => (0.0, x),
        };
        let code = &self.codes[index];
        let failures = count_failures(code, self.error_type, p, p_loss, self.cfg.seed, trials)?;
        let row = SweepRow::new(
            self.kind,
            code.lattice().size(),
            self.error_type,
            p_loss,
            p,
            trials,
            failures,
            self.cfg.seed,
        );
        let rate = row.rate;
        log::debug!("L={} p={p} p_loss={p_loss}: {failures}/{trials}", row.size);
        self.rows.push(row);
        Ok(rate)
    }

    /// Returns a bracket `[lo, hi]` of the first significant overtaking, or
    /// `None` if the largest size is already significantly worse at `x = 0`.
    fn bracket(&mut self) -> Result<Option<(f64, f64)>> {
        let last = self.codes.len() - 1;
        let n = self.cfg.coarse_trials;
        let ahead = |small: f64, large: f64| {
            let se = ((small * (1.0 - small) + large * (1.0 - large)) / n as f64).sqrt();
            large - small > se && small > 0.0
        };
        if matches!(self.axis, Axis::Error { p_loss } if p_loss > 0.0) {
            let small = self.run(0, 0.0, n)?;
            let large = self.run(last, 0.0, n)?;
            if ahead(small, large) {
                return Ok(None);
            }
        }
        let mut grid = vec![self.cfg.coarse_max];
        while let Some(&x) = grid.last() {
            let next = x * self.cfg.coarse_ratio;
            if next < self.cfg.coarse_min {
                break;
            }
            grid.push(next);
        }
        grid.reverse();
        // Last grid point where the largest size was not worse.
        let mut lo = 0.0;
        for &x in &grid {
            let small = self.run(0, x, n)?;
            let large = self.run(last, x, n)?;
            if ahead(small, large) {
                return Ok(Some((lo, x)));
            }
            if large <= small {
                lo = x;
            }
        }
        Err(Error::NoCrossing(format!(
            "coarse scan up to {} found no crossing",
            self.cfg.coarse_max
        )))
    }

    /// Crossing of the extreme sizes inside `[lo, hi]` on a five-point grid
    /// with twice the coarse trial count.
    fn refine(&mut self, lo: f64, hi: f64) -> Result<f64> {
        let last = self.codes.len() - 1;
        let n = 2 * self.cfg.coarse_trials;
        let mut points = Vec::new();
        for k in 0..5 {
            let x = lo + (hi - lo) * k as f64 / 4.0;
            for index in [0, last] {
                let rate = self.run(index, x, n)?;
                points.push(FitPoint {
                    size: self.codes[index].lattice().size() as f64,
                    x,
                    rate,
                    trials: n,
                });
            }
        }
        Ok(crossing_estimate(&points).unwrap_or(0.5 * (lo + hi)))
    }

    fn fine(&mut self, center: f64, span: f64) -> Result<Vec<FitPoint>> {
        let m = self.cfg.fine_points.max(2);
        let mut points = Vec::new();
        for i in 0..self.codes.len() {
            for j in 0..m {
                let x = center * (1.0 - span + 2.0 * span * j as f64 / (m - 1) as f64);
                let x = (x * 1e9).round() / 1e9;
                let rate = self.run(i, x, self.cfg.trials)?;
                points.push(FitPoint {
                    size: self.codes[i].lattice().size() as f64,
                    x,
                    rate,
                    trials: self.cfg.trials,
                });
            }
        }
        Ok(points)
    }

    fn locate(&mut self) -> Result<Located> {
        let Some((lo, hi)) = self.bracket()? else {
            return Ok(Located::Vanished {
                rows: std::mem::take(&mut self.rows),
            });
        };
        let mut center = self.refine(lo, hi)?;
        let mut span = self.cfg.fine_span;
        let mut points = Vec::new();
        // A noisy coarse stage can miss the crossing; recenter on the points
        // gathered so far, widening the span on the last attempt.
        for attempt in 0..3 {
            points.extend(self.fine(center, span)?);
            match fit_points(&points, &self.cfg.fit) {
                Ok(fit) => {
                    return Ok(Located::Threshold {
                        fit,
                        rows: std::mem::take(&mut self.rows),
                    })
                }
                Err(e @ (Error::NoCrossing(_) | Error::InsufficientData(_))) => {
                    if attempt == 2 {
                        return Err(e);
                    }
                    log::debug!("fit around {center} failed ({e}); recentering");
                    center = crossing_estimate(&points).unwrap_or(center);
                    if attempt == 1 {
                        span = (2.0 * span).min(0.5);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        unreachable!("every attempt returns or continues")
    }
}

fn search<'a>(
    kind: &'a LatticeKind,
    error_type: ErrorType,
    axis: Axis,
    cfg: &'a LocateConfig,
) -> Result<Search<'a>> {
    if cfg.sizes.len() < 2 {
        return Err(Error::InsufficientData("need at least two sizes".into()));
    }
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    let codes = sizes
        .iter()
        .map(|&l| Lattice::build(kind.clone(), l).map(SurfaceCode::new))
        .collect::<Result<Vec<_>>>()?;
    Ok(Search {
        kind,
        codes,
        error_type,
        axis,
        cfg,
        rows: Vec::new(),
    })
}

/// Error threshold of `kind` for `error_type` at loss rate `p_loss`.
pub fn locate_threshold(
    kind: &LatticeKind,
    error_type: ErrorType,
    p_loss: f64,
    cfg: &LocateConfig,
) -> Result<Located> {
    search(kind, error_type, Axis::Error { p_loss }, cfg)?.locate()
}

#[derive(Clone, Debug)]
pub struct LossCutoff {
    /// Median pairwise crossing of the failure curves along the loss axis.
    pub cutoff: f64,
    pub rows: Vec<SweepRow>,
}

/// Loss rate at which decoding `error_type` fails even without Pauli
/// errors. Failure there is pure percolation, whose curves are too steep
/// for the linear ansatz, so the crossing itself is reported. The coarse
/// scan stops at `cfg.coarse_max`, which must lie above the cutoff.
pub fn locate_loss_cutoff(
    kind: &LatticeKind,
    error_type: ErrorType,
    cfg: &LocateConfig,
) -> Result<LossCutoff> {
    let mut s = search(kind, error_type, Axis::Loss, cfg)?;
    let (lo, hi) = s.bracket()?.expect("loss axis always brackets");
    let center = s.refine(lo, hi)?;
    let points = s.fine(center, cfg.fine_span)?;
    let cutoff = crossing_estimate(&points)?;
    Ok(LossCutoff {
        cutoff,
        rows: s.rows,
    })
}
