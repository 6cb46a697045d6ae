//! Bond-percolation thresholds from the first noncontractible cluster.
//!
//! Each sample adds the edges of a torus lattice in random order and records
//! the occupied fraction at which some cluster first wraps. The per-size
//! median approaches the threshold as `p_c + a L^(-1/nu)` with the 2D
//! percolation exponent `nu = 4/3`, which is extrapolated to `L -> inf`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fit::Interval;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::wrap::{Union, WrapUnionFind};

const NU: f64 = 4.0 / 3.0;
const BOOTSTRAP: usize = 200;

/// Fraction of edges occupied, in a uniformly random order, when a
/// noncontractible cycle first closes.
pub fn first_wrap_fraction(lat: &Lattice, rng: &mut ChaCha8Rng) -> f64 {
    let mut order: Vec<usize> = (0..lat.num_edges()).collect();
    order.shuffle(rng);
    let mut uf = WrapUnionFind::new(lat.num_vertices());
    for (k, &e) in order.iter().enumerate() {
        let edge = lat.edge(e);
        if let Union::Wrapping(_) = uf.union(edge.tail, edge.head, edge.wrap) {
            return (k + 1) as f64 / order.len() as f64;
        }
    }
    1.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeMedian {
    pub size: usize,
    pub median: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PercolationEstimate {
    pub kind: LatticeKind,
    pub p_c: f64,
    pub ci: Interval,
    /// Amplitude of the `L^(-3/4)` correction.
    pub slope: f64,
    pub per_size: Vec<SizeMedian>,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Least-squares line `m = p_c + slope * L^(-1/nu)`; returns `(p_c, slope)`.
fn extrapolate(sizes: &[usize], medians: &[f64]) -> (f64, f64) {
    let u: Vec<f64> = sizes.iter().map(|&l| (l as f64).powf(-1.0 / NU)).collect();
    let n = u.len() as f64;
    let mu = u.iter().sum::<f64>() / n;
    let mm = medians.iter().sum::<f64>() / n;
    let (mut suu, mut sum) = (0.0, 0.0);
    for (ui, mi) in u.iter().zip(medians) {
        suu += (ui - mu) * (ui - mu);
        sum += (ui - mu) * (mi - mm);
    }
    let slope = sum / suu;
    (mm - slope * mu, slope)
}

fn size_stream(seed: u64, size: usize) -> u64 {
    seed ^ (size as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn percolation_threshold(
    kind: &LatticeKind,
    sizes: &[usize],
    samples: usize,
    seed: u64,
) -> Result<PercolationEstimate> {
    let mut distinct = sizes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::InsufficientData(
            "percolation extrapolation needs at least two sizes".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let mut fractions = Vec::with_capacity(distinct.len());
    for &size in &distinct {
        let lat = Lattice::build(kind.clone(), size)?;
        let base = size_stream(seed, size);
        let f: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(base);
                rng.set_stream(s);
                first_wrap_fraction(&lat, &mut rng)
            })
            .collect();
        fractions.push(f);
    }
    let medians: Vec<f64> = fractions.iter().map(|f| median(&mut f.clone())).collect();
    let (p_c, slope) = extrapolate(&distinct, &medians);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot = Vec::with_capacity(BOOTSTRAP);
    let mut scratch = Vec::with_capacity(samples);
    for _ in 0..BOOTSTRAP {
        let m: Vec<f64> = fractions
            .iter()
            .map(|f| {
                scratch.clear();
                scratch.extend((0..f.len()).map(|_| f[rng.random_range(0..f.len())]));
                median(&mut scratch)
            })
            .collect();
        boot.push(extrapolate(&distinct, &m).0);
    }
    boot.sort_by(f64::total_cmp);
    let at = |q: f64| boot[((boot.len() - 1) as f64 * q).round() as usize];
    Ok(PercolationEstimate {
        kind: kind.clone(),
        p_c,
        ci: Interval {
            lo: at(0.025),
            hi: at(0.975),
        },
        slope,
        per_size: distinct
            .iter()
            .zip(&medians)
            .map(|(&size, &median)| SizeMedian {
                size,
                median,
                samples,
            })
            .collect(),
    })
}
