//! Monte Carlo sweeps, threshold fits, percolation and bound conversions.

mod fit;
mod locate;
mod percolation;
mod sweep;

pub use fit::{
    crossing_estimate, fit_points, fit_threshold, FitOptions, FitPoint, Interval, ScalingFit,
};
pub use locate::{locate_loss_cutoff, locate_threshold, LocateConfig, Located, LossCutoff};
pub use percolation::{first_wrap_fraction, percolation_threshold, PercolationEstimate, SizeMedian};
pub use sweep::{
    count_failures, read_csv, run_sweep, write_csv, SweepConfig, SweepRow, SweepTable,
    CSV_HEADER, DEFAULT_TRIAL_CAP,
};

use crate::error::{Error, Result};

/// Binary Shannon entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Gilbert-Varshamov rate `1 - h(p_x) - h(p_z)` for probabilities in (0, 1).
pub fn gv_residual(p_x: f64, p_z: f64) -> Result<f64> {
    gv_residual_with(p_x, p_z, false)
}

/// As [`gv_residual`]; `allow_endpoints` admits 0 and 1 with `h = 0` there.
pub fn gv_residual_with(p_x: f64, p_z: f64, allow_endpoints: bool) -> Result<f64> {
    for (name, p) in [("p_x", p_x), ("p_z", p_z)] {
        let ok = if allow_endpoints {
            (0.0..=1.0).contains(&p)
        } else {
            p > 0.0 && p < 1.0
        };
        if !ok {
            return Err(Error::InvalidProbability {
                name,
                value: p,
                range: if allow_endpoints { "[0, 1]" } else { "(0, 1)" },
            });
        }
    }
    Ok(1.0 - binary_entropy(p_x) - binary_entropy(p_z))
}

/// Inverse temperature on the Nishimori line, `exp(-2 beta) = p / (1 - p)`.
pub fn nishimori_beta(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidProbability {
            name: "p",
            value: p,
            range: "(0, 1/2)",
        });
    }
    Ok(-0.5 * (p / (1.0 - p)).ln())
}
