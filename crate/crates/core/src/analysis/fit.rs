//! Finite-size scaling fit `rate = A + B (x - x_th) L^(1/nu)`.
//!
//! For fixed `(x_th, nu)` the model is linear in `A` and `B`, so those are
//! solved exactly and the simplex search runs over the two nonlinear
//! parameters only. Confidence intervals come from refitting binomially
//! resampled data.

use std::collections::BTreeMap;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::sweep::SweepRow;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitPoint {
    pub size: f64,
    /// Control parameter: error rate, or loss rate for loss cutoffs.
    pub x: f64,
    pub rate: f64,
    /// Trial count behind `rate`, used for resampling.
    pub trials: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    /// Keep points with `|x - x0| <= window * x0` around the crossing `x0`.
    pub window: f64,
    pub nu_init: f64,
    pub bootstrap: usize,
    pub seed: u64,
    pub min_sizes: usize,
    pub min_points_per_size: usize,
    pub max_iters: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            window: 0.3,
            nu_init: 1.5,
            bootstrap: 200,
            seed: 0,
            min_sizes: 3,
            min_points_per_size: 5,
            max_iters: 400,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    pub nu: f64,
    pub p_th: f64,
    pub sse: f64,
    /// Crossing estimate the fit started from.
    pub initial_p_th: f64,
    pub points_used: usize,
    pub iterations: u64,
    /// Successful bootstrap refits and the 95% percentile intervals.
    pub bootstrap_samples: usize,
    pub a_ci: Option<Interval>,
    pub b_ci: Option<Interval>,
    pub nu_ci: Option<Interval>,
    pub p_th_ci: Option<Interval>,
}

fn by_size(points: &[FitPoint]) -> BTreeMap<u64, Vec<(f64, f64)>> {
    let mut map: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
    for p in points {
        map.entry(p.size.to_bits()).or_default().push((p.x, p.rate));
    }
    for curve in map.values_mut() {
        curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    map
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median over size pairs of the points where the larger size's curve
/// overtakes the smaller one's (linear interpolation between grid points).
pub fn crossing_estimate(points: &[FitPoint]) -> Result<f64> {
    let curves: Vec<(f64, Vec<(f64, f64)>)> = by_size(points)
        .into_iter()
        .map(|(k, v)| (f64::from_bits(k), v))
        .collect();
    if curves.len() < 2 {
        return Err(Error::InsufficientData("need at least two sizes".into()));
    }
    let mut pair_crossings = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let (small, large) = if curves[i].0 < curves[j].0 {
                (&curves[i].1, &curves[j].1)
            } else {
                (&curves[j].1, &curves[i].1)
            };
            let diff: Vec<(f64, f64)> = small
                .iter()
                .filter_map(|&(x, r)| {
                    large
                        .iter()
                        .find(|&&(y, _)| y == x)
                        .map(|&(_, q)| (x, q - r))
                })
                .collect();
            let mut found = Vec::new();
            for w in diff.windows(2) {
                let ((x0, d0), (x1, d1)) = (w[0], w[1]);
                if d0 < 0.0 && d1 >= 0.0 {
                    found.push(x0 + (x1 - x0) * d0 / (d0 - d1));
                }
            }
            if !found.is_empty() {
                pair_crossings.push(median(&mut found));
            }
        }
    }
    if pair_crossings.is_empty() {
        let lo = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        return Err(Error::NoCrossing(format!(
            "curves do not cross in [{lo}, {hi}]"
        )));
    }
    Ok(median(&mut pair_crossings))
}

struct Problem<'a> {
    points: &'a [FitPoint],
}

impl Problem<'_> {
    /// Least-squares `(A, B, sse)` for fixed `(x_th, nu)`.
    fn linear_part(&self, x_th: f64, nu: f64) -> Option<(f64, f64, f64)> {
        if !(nu > 0.05 && nu < 50.0) || !x_th.is_finite() {
            return None;
        }
        let n = self.points.len() as f64;
        let z: Vec<f64> = self
            .points
            .iter()
            .map(|p| (p.x - x_th) * p.size.powf(1.0 / nu))
            .collect();
        let mz = z.iter().sum::<f64>() / n;
        let my = self.points.iter().map(|p| p.rate).sum::<f64>() / n;
        let mut szz = 0.0;
        let mut szy = 0.0;
        for (zi, p) in z.iter().zip(self.points) {
            szz += (zi - mz) * (zi - mz);
            szy += (zi - mz) * (p.rate - my);
        }
        if szz <= 0.0 {
            return None;
        }
        let b = szy / szz;
        let a = my - b * mz;
        let sse = z
            .iter()
            .zip(self.points)
            .map(|(zi, p)| (p.rate - a - b * zi).powi(2))
            .sum();
        Some((a, b, sse))
    }
}

impl CostFunction for Problem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, param: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(match self.linear_part(param[0], param[1]) {
            Some((_, _, sse)) => sse,
            None => 1e30,
        })
    }
}

struct Minimum {
    x_th: f64,
    nu: f64,
    a: f64,
    b: f64,
    sse: f64,
    iterations: u64,
}

fn simplex_run(
    points: &[FitPoint],
    start: [f64; 2],
    scale: [f64; 2],
    max_iters: u64,
) -> Result<([f64; 2], u64)> {
    let simplex = vec![
        vec![start[0], start[1]],
        vec![start[0] + scale[0], start[1]],
        vec![start[0], start[1] + scale[1]],
    ];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(0.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let res = Executor::new(Problem { points }, solver)
        .configure(|s| s.max_iters(max_iters))
        .run()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let best = res
        .state
        .best_param
        .clone()
        .ok_or(Error::NotConverged {
            iterations: res.state.iter as usize,
            sse: f64::NAN,
        })?;
    Ok(([best[0], best[1]], res.state.iter))
}

/// Three simplex runs with shrinking initial simplices; the last restart
/// must not move the optimum.
fn minimize(points: &[FitPoint], start: [f64; 2], max_iters: u64) -> Result<Minimum> {
    let scale0 = [0.05 * start[0].abs().max(1e-3), 0.3 * start[1]];
    let (p1, i1) = simplex_run(points, start, scale0, max_iters)?;
    let (p2, i2) = simplex_run(points, p1, [scale0[0] * 0.1, scale0[1] * 0.1], max_iters)?;
    let (p3, i3) = simplex_run(points, p2, [scale0[0] * 0.01, scale0[1] * 0.01], max_iters)?;
    let iterations = i1 + i2 + i3;
    let problem = Problem { points };
    let (a, b, sse) = problem.linear_part(p3[0], p3[1]).ok_or(Error::NotConverged {
        iterations: iterations as usize,
        sse: f64::NAN,
    })?;
    let moved = (p3[0] - p2[0]).abs() / p3[0].abs().max(1e-12)
        + (p3[1] - p2[1]).abs() / p3[1].abs().max(1e-12);
    if moved > 1e-6 || !(p3[0] > 0.0 && p3[0] < 1.0) {
        return Err(Error::NotConverged {
            iterations: iterations as usize,
            sse,
        });
    }
    Ok(Minimum {
        x_th: p3[0],
        nu: p3[1],
        a,
        b,
        sse,
        iterations,
    })
}

fn percentile_interval(values: &mut [f64]) -> Option<Interval> {
    if values.len() < 10 {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let at = |q: f64| values[((values.len() - 1) as f64 * q).round() as usize];
    Some(Interval {
        lo: at(0.025),
        hi: at(0.975),
    })
}

/// Fits the scaling ansatz to `points` around their crossing.
pub fn fit_points(points: &[FitPoint], opts: &FitOptions) -> Result<ScalingFit> {
    let x0 = crossing_estimate(points)?;
    let windowed: Vec<FitPoint> = points
        .iter()
        .copied()
        .filter(|p| (p.x - x0).abs() <= opts.window * x0.abs() + 1e-12)
        .collect();
    let curves = by_size(&windowed);
    let sizes = curves
        .values()
        .filter(|c| c.len() >= opts.min_points_per_size)
        .count();
    if sizes < opts.min_sizes {
        return Err(Error::InsufficientData(format!(
            "{sizes} sizes with at least {} points within {:.0}% of the crossing {x0:.5}; need {}",
            opts.min_points_per_size,
            opts.window * 100.0,
            opts.min_sizes
        )));
    }
    let best = minimize(&windowed, [x0, opts.nu_init], opts.max_iters)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut draws: [Vec<f64>; 4] = Default::default();
    for _ in 0..opts.bootstrap {
        let resampled: Vec<FitPoint> = windowed
            .iter()
            .map(|p| {
                let r = p.rate.clamp(0.0, 1.0);
                let k = Binomial::new(p.trials, r)
                    .map(|d| d.sample(&mut rng))
                    .unwrap_or(0);
                FitPoint {
                    rate: k as f64 / p.trials.max(1) as f64,
                    ..*p
                }
            })
            .collect();
        if let Ok(m) = minimize(&resampled, [best.x_th, best.nu], opts.max_iters) {
            for (slot, v) in draws.iter_mut().zip([m.a, m.b, m.nu, m.x_th]) {
                slot.push(v);
            }
        }
    }
    let bootstrap_samples = draws[0].len();
    let [mut da, mut db, mut dnu, mut dth] = draws;
    Ok(ScalingFit {
        a: best.a,
        b: best.b,
        nu: best.nu,
        p_th: best.x_th,
        sse: best.sse,
        initial_p_th: x0,
        points_used: windowed.len(),
        iterations: best.iterations,
        bootstrap_samples,
        a_ci: percentile_interval(&mut da),
        b_ci: percentile_interval(&mut db),
        nu_ci: percentile_interval(&mut dnu),
        p_th_ci: percentile_interval(&mut dth),
    })
}

/// Fits one (lattice, error type, loss rate) group of sweep rows.
pub fn fit_threshold(rows: &[SweepRow], opts: &FitOptions) -> Result<ScalingFit> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InsufficientData("empty table".into()))?;
    if rows.iter().any(|r| {
        r.lattice != first.lattice || r.error_type != first.error_type || r.p_loss != first.p_loss
    }) {
        return Err(Error::InvalidArgument(
            "rows must share lattice, error type and loss rate".into(),
        ));
    }
    let points: Vec<FitPoint> = rows
        .iter()
        .map(|r| FitPoint {
            size: r.size as f64,
            x: r.p,
            rate: r.rate,
            trials: r.trials,
        })
        .collect();
    fit_points(&points, opts)
}
