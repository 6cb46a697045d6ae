//! Independent Pauli errors and qubit loss on lattice edges.
//!
//! Every trial owns a ChaCha8 stream selected by `(seed, trial_index)`. Within
//! the stream the uniform draw for edge `e` on channel `c` (loss = 0, Z = 1,
//! X = 2) is the `(c * |E| + e)`-th `f64`, so a sample never depends on the
//! order or thread in which trials are evaluated.
//!
//! Errors are only recorded on surviving edges: a lost qubit is traced out
//! and its stabilizers are merged, so a Pauli acting on it has no effect on
//! decoding. The nominal `p_x` and `p_z` are therefore rates conditional on
//! survival.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_probability, Result};
use crate::lattice::Lattice;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    pub p_x: f64,
    pub p_z: f64,
    pub p_loss: f64,
    pub seed: u64,
    pub trial_index: u64,
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        check_probability("p_x", self.p_x)?;
        check_probability("p_z", self.p_z)?;
        check_probability("p_loss", self.p_loss)
    }
}

/// Sorted edge sets hit by each channel.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ErrorPattern {
    pub z_errors: Vec<usize>,
    pub x_errors: Vec<usize>,
    pub lost: Vec<usize>,
}

impl ErrorPattern {
    pub fn is_empty(&self) -> bool {
        self.z_errors.is_empty() && self.x_errors.is_empty() && self.lost.is_empty()
    }
}

const LOSS: u128 = 0;
const Z_CHANNEL: u128 = 1;
const X_CHANNEL: u128 = 2;

fn draw(rng: &mut ChaCha8Rng, channel: u128, edges: usize, p: f64, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    if p <= 0.0 {
        return Vec::new();
    }
    // Each f64 consumes two 32-bit words of the stream.
    rng.set_word_pos(channel * edges as u128 * 2);
    let mut hits = Vec::new();
    for e in 0..edges {
        let u: f64 = rng.random();
        if u < p && keep(e) {
            hits.push(e);
        }
    }
    hits
}

pub fn sample(lat: &Lattice, params: &NoiseParams) -> Result<ErrorPattern> {
    params.validate()?;
    let edges = lat.num_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(params.trial_index);
    let lost = draw(&mut rng, LOSS, edges, params.p_loss, |_| true);
    let mut is_lost = vec![false; edges];
    for &e in &lost {
        is_lost[e] = true;
    }
    let z_errors = draw(&mut rng, Z_CHANNEL, edges, params.p_z, |e| !is_lost[e]);
    let x_errors = draw(&mut rng, X_CHANNEL, edges, params.p_x, |e| !is_lost[e]);
    Ok(ErrorPattern {
        z_errors,
        x_errors,
        lost,
    })
}
