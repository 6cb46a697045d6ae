//! Error syndromes from incidence parity.
//!
//! A Z error on edge `e` anticommutes with the star stabilizers at both
//! endpoints of `e`; an X error anticommutes with the plaquettes on both
//! sides. Defects are therefore the odd-degree vertices of the Z-error chain
//! and the odd-degree faces (dual vertices) of the X-error chain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::noise::ErrorPattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorType {
    X,
    Z,
}

impl ErrorType {
    pub fn conjugate(self) -> ErrorType {
        match self {
            ErrorType::X => ErrorType::Z,
            ErrorType::Z => ErrorType::X,
        }
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorType::X => "X",
            ErrorType::Z => "Z",
        })
    }
}

impl FromStr for ErrorType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" | "x" => Ok(ErrorType::X),
            "Z" | "z" => Ok(ErrorType::Z),
            other => Err(Error::InvalidArgument(format!(
                "error type must be X or Z, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    pub error_type: ErrorType,
    /// Sorted defect sites: vertices for Z errors, faces for X errors.
    pub defects: Vec<usize>,
}

fn odd_sites(sites: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut parity = vec![false; sites];
    for (a, b) in pairs {
        parity[a] ^= true;
        parity[b] ^= true;
    }
    parity
        .iter()
        .enumerate()
        .filter_map(|(i, &odd)| odd.then_some(i))
        .collect()
}

/// Vertices with an odd number of incident edges from `edges`.
pub fn chain_boundary(lat: &Lattice, edges: &[usize]) -> Vec<usize> {
    odd_sites(
        lat.num_vertices(),
        edges.iter().map(|&e| (lat.edge(e).tail, lat.edge(e).head)),
    )
}

/// Faces with an odd number of boundary edges from `edges`.
pub fn dual_chain_boundary(lat: &Lattice, edges: &[usize]) -> Vec<usize> {
    odd_sites(
        lat.num_faces(),
        edges.iter().map(|&e| (lat.edge(e).left, lat.edge(e).right)),
    )
}

/// Syndrome of the lossless code. Patterns with lost edges must go through
/// [`crate::loss::DamagedCode`].
pub fn syndrome(lat: &Lattice, pattern: &ErrorPattern, error_type: ErrorType) -> Result<Syndrome> {
    if !pattern.lost.is_empty() {
        return Err(Error::LostEdgesPresent(pattern.lost.len()));
    }
    let count = lat.num_edges();
    let edges = match error_type {
        ErrorType::Z => &pattern.z_errors,
        ErrorType::X => &pattern.x_errors,
    };
    if let Some(&edge) = edges.iter().find(|&&e| e >= count) {
        return Err(Error::EdgeOutOfRange { edge, count });
    }
    let defects = match error_type {
        ErrorType::Z => chain_boundary(lat, edges),
        ErrorType::X => dual_chain_boundary(lat, edges),
    };
    Ok(Syndrome {
        error_type,
        defects,
    })
}
