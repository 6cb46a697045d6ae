//! Minimum-weight perfect matching decoder with homology failure detection.

pub mod blossom;
mod defect;
mod graph;

pub use defect::DefectGraph;
pub use graph::{DecodingGraph, GraphEdge};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::stabilizer::{ErrorType, Syndrome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Sorted edges flipped by the decoder.
    pub correction: Vec<usize>,
    /// Sorted `error △ correction`; always a cycle of the decoding graph.
    pub residual: Vec<usize>,
    pub failed: bool,
    /// Seam-crossing parities of the residual.
    pub failure_class: [u8; 2],
    /// Set when no conjugate logical operator survives loss, so the trial
    /// fails without decoding.
    pub logical_lost: bool,
}

impl DecodeOutcome {
    pub(crate) fn lost() -> Self {
        DecodeOutcome {
            correction: Vec::new(),
            residual: Vec::new(),
            failed: true,
            failure_class: [0, 0],
            logical_lost: true,
        }
    }
}

/// Matched defect pairs `(i, j)` with `i < j`, sorted, as defect indices.
pub fn mwpm(g: &DefectGraph) -> Result<Vec<(usize, usize)>> {
    let n = g.len();
    if n % 2 == 1 {
        return Err(Error::OddDefectCount(n));
    }
    let mate = blossom::min_cost_perfect_matching(n, |i, j| g.dist(i, j) as i64);
    Ok((0..n).filter(|&i| i < mate[i]).map(|i| (i, mate[i])).collect())
}

/// Total hop length of a matching.
pub fn matching_weight(g: &DefectGraph, pairs: &[(usize, usize)]) -> u64 {
    pairs.iter().map(|&(i, j)| g.dist(i, j) as u64).sum()
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Decodes `errors` (sorted, distinct edges) on `graph`. A residual fails when
/// it has odd intersection with one of the conjugate logical classes in
/// `conjugate`, given as winding parities.
pub fn decode_on_graph(
    graph: &DecodingGraph,
    conjugate: &[[u8; 2]],
    errors: &[usize],
) -> Result<DecodeOutcome> {
    if let Some(&edge) = errors.iter().find(|&&e| e >= graph.num_edges()) {
        return Err(Error::EdgeOutOfRange {
            edge,
            count: graph.num_edges(),
        });
    }
    let defects = graph.boundary(errors);
    let dg = DefectGraph::build(graph, &defects);
    let pairs = mwpm(&dg)?;
    let mut flip = vec![false; graph.num_edges()];
    for &(i, j) in &pairs {
        for e in dg.path(i, j) {
            flip[e] ^= true;
        }
    }
    let correction: Vec<usize> = (0..flip.len()).filter(|&e| flip[e]).collect();
    let mut sorted = errors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let residual = symmetric_difference(&sorted, &correction);
    let w = graph.winding_parity(&residual);
    let failed = conjugate.iter().any(|u| (w[0] & u[1]) ^ (w[1] & u[0]) == 1);
    Ok(DecodeOutcome {
        correction,
        residual,
        failed,
        failure_class: w,
        logical_lost: false,
    })
}

/// Both decoding graphs of a lossless code, built once and shared across
/// trials.
#[derive(Clone, Debug)]
pub struct SurfaceCode {
    lattice: Lattice,
    primal: DecodingGraph,
    dual: DecodingGraph,
}

/// Both winding classes of the torus.
pub(crate) const FULL_HOMOLOGY: [[u8; 2]; 2] = [[1, 0], [0, 1]];

impl SurfaceCode {
    pub fn new(lattice: Lattice) -> Self {
        let primal = DecodingGraph::primal(&lattice);
        let dual = DecodingGraph::primal(&lattice.dual());
        SurfaceCode {
            lattice,
            primal,
            dual,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Vertex graph for Z errors, face graph for X errors.
    pub fn graph(&self, error_type: ErrorType) -> &DecodingGraph {
        match error_type {
            ErrorType::Z => &self.primal,
            ErrorType::X => &self.dual,
        }
    }

    pub fn defect_distances(&self, syn: &Syndrome) -> Result<DefectGraph> {
        if syn.defects.len() % 2 == 1 {
            return Err(Error::OddDefectCount(syn.defects.len()));
        }
        Ok(DefectGraph::build(self.graph(syn.error_type), &syn.defects))
    }

    pub fn decode(&self, errors: &[usize], error_type: ErrorType) -> Result<DecodeOutcome> {
        decode_on_graph(self.graph(error_type), &FULL_HOMOLOGY, errors)
    }
}

/// One-shot decode; prefer [`SurfaceCode`] when decoding many patterns.
pub fn decode(lat: &Lattice, errors: &[usize], error_type: ErrorType) -> Result<DecodeOutcome> {
    let graph = match error_type {
        ErrorType::Z => DecodingGraph::primal(lat),
        ErrorType::X => DecodingGraph::primal(&lat.dual()),
    };
    decode_on_graph(&graph, &FULL_HOMOLOGY, errors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeKind;

    #[test]
    fn empty_error_succeeds() {
        let code = SurfaceCode::new(Lattice::build(LatticeKind::Kagome, 4).unwrap());
        let out = code.decode(&[], ErrorType::Z).unwrap();
        assert!(!out.failed && out.correction.is_empty() && out.residual.is_empty());
    }

    #[test]
    fn single_error_is_undone() {
        let code = SurfaceCode::new(Lattice::build(LatticeKind::Square, 5).unwrap());
        for ty in [ErrorType::X, ErrorType::Z] {
            let out = code.decode(&[13], ty).unwrap();
            assert_eq!(out.correction, vec![13]);
            assert!(out.residual.is_empty() && !out.failed);
        }
    }

    #[test]
    fn logical_loop_fails() {
        let lat = Lattice::build(LatticeKind::Hexagonal, 4).unwrap();
        let loop_ = lat.noncontractible_cycle([0, 1]);
        let out = decode(&lat, &loop_, ErrorType::Z).unwrap();
        assert!(out.failed);
        assert!(out.correction.is_empty());
        assert_eq!(out.failure_class, [0, 1]);
    }

    #[test]
    fn adjacent_defects_and_wrapped_distance() {
        let lat = Lattice::build(LatticeKind::Square, 8).unwrap();
        let graph = DecodingGraph::primal(&lat);
        let e = *lat.edge(0);
        let dg = DefectGraph::build(&graph, &[e.tail.min(e.head), e.tail.max(e.head)]);
        assert_eq!(dg.dist(0, 1), 1);
        assert_eq!(dg.path(0, 1), vec![0]);
        // Vertex 0 and vertex (4, 4) are 8 hops apart either way round.
        let far = 4 * 8 + 4;
        let dg = DefectGraph::build(&graph, &[0, far]);
        assert_eq!(dg.dist(0, 1), 8);
        assert_eq!(dg.path(0, 1).len(), 8);
        // Vertex (7, 0) is one wrapped hop away.
        let dg = DefectGraph::build(&graph, &[0, 7]);
        assert_eq!(dg.dist(0, 1), 1);
    }

    #[test]
    fn odd_defects_rejected() {
        let code = SurfaceCode::new(Lattice::build(LatticeKind::Square, 3).unwrap());
        let syn = Syndrome {
            error_type: ErrorType::Z,
            defects: vec![0, 1, 2],
        };
        assert!(matches!(code.defect_distances(&syn), Err(Error::OddDefectCount(3))));
    }
}
