//! Qubit loss: merged stabilizers, surviving logicals and lossy decoding.
//!
//! Losing the qubit on edge `e` merges the two vertex stars at its ends into
//! one star and the two plaquettes beside it into one plaquette. Both merges
//! are edge contractions: of `e` in the primal graph and of its dual edge in
//! the dual graph. Matching then runs on the contracted graphs, which is
//! the same as giving lost edges zero weight.
//!
//! A logical operator survives when the surviving edges still contain a
//! noncontractible cycle of its lattice (primal for Z, dual for X).

use crate::decoder::{decode_on_graph, DecodeOutcome, DecodingGraph, GraphEdge, SurfaceCode};
use crate::error::{Error, Result};
use crate::stabilizer::ErrorType;
use crate::wrap::{Union, WrapUnionFind};

/// One side (primal or dual) of a damaged code.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Site -> merged site. Labels follow first appearance, so no loss gives
    /// the identity.
    pub site_map: Vec<usize>,
    pub graph: DecodingGraph,
    /// Surviving edges whose ends were merged.
    pub self_loops: Vec<usize>,
    /// Nonzero winding parities of cycles made of surviving edges.
    pub surviving_classes: Vec<[u8; 2]>,
}

fn contract(graph: &DecodingGraph, is_lost: &[bool]) -> Contraction {
    let n = graph.num_nodes();
    let mut uf = WrapUnionFind::new(n);
    for (e, &lost) in is_lost.iter().enumerate() {
        if lost {
            let edge = graph.edge(e).expect("base graph has every edge");
            uf.union(edge.ends[0] as usize, edge.ends[1] as usize, edge.wrap);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut site_map = vec![0; n];
    let mut offset = vec![[0, 0]; n];
    let mut next = 0;
    for v in 0..n {
        let (root, off) = uf.find(v);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        site_map[v] = label[root];
        offset[v] = off;
    }
    let mut self_loops = Vec::new();
    let edges = (0..graph.num_edges())
        .map(|e| {
            if is_lost[e] {
                return None;
            }
            let edge = graph.edge(e).expect("base graph has every edge");
            let [a, b] = edge.ends.map(|x| x as usize);
            let (oa, ob) = (offset[a], offset[b]);
            let ends = [site_map[a] as u32, site_map[b] as u32];
            if ends[0] == ends[1] {
                self_loops.push(e);
            }
            Some(GraphEdge {
                ends,
                wrap: [oa[0] + edge.wrap[0] - ob[0], oa[1] + edge.wrap[1] - ob[1]],
            })
        })
        .collect();
    Contraction {
        site_map,
        graph: DecodingGraph::new(next, edges),
        self_loops,
        surviving_classes: surviving_classes(graph, is_lost),
    }
}

fn surviving_classes(graph: &DecodingGraph, is_lost: &[bool]) -> Vec<[u8; 2]> {
    let mut uf = WrapUnionFind::new(graph.num_nodes());
    let mut classes: Vec<[u8; 2]> = Vec::new();
    for (e, &lost) in is_lost.iter().enumerate() {
        if lost {
            continue;
        }
        let edge = graph.edge(e).expect("base graph has every edge");
        if let Union::Wrapping(w) = uf.union(edge.ends[0] as usize, edge.ends[1] as usize, edge.wrap) {
            let class = [(w[0] & 1) as u8, (w[1] & 1) as u8];
            if class != [0, 0] && !classes.contains(&class) {
                classes.push(class);
                if classes.len() == 3 {
                    break;
                }
            }
        }
    }
    classes.sort_unstable();
    classes
}

/// A surface code after losing the qubits on `lost`.
#[derive(Clone, Debug)]
pub struct DamagedCode<'a> {
    code: &'a SurfaceCode,
    lost: Vec<usize>,
    primal: Contraction,
    dual: Contraction,
}

impl<'a> DamagedCode<'a> {
    pub fn new(code: &'a SurfaceCode, lost: &[usize]) -> Result<Self> {
        let count = code.lattice().num_edges();
        let mut is_lost = vec![false; count];
        for &e in lost {
            if e >= count {
                return Err(Error::EdgeOutOfRange { edge: e, count });
            }
            is_lost[e] = true;
        }
        let lost = (0..count).filter(|&e| is_lost[e]).collect();
        Ok(DamagedCode {
            code,
            lost,
            primal: contract(code.graph(ErrorType::Z), &is_lost),
            dual: contract(code.graph(ErrorType::X), &is_lost),
        })
    }

    pub fn code(&self) -> &SurfaceCode {
        self.code
    }

    pub fn lost(&self) -> &[usize] {
        &self.lost
    }

    /// Merged vertex stars (`Z`, which detect Z errors) or merged
    /// plaquettes (`X`).
    pub fn contraction(&self, error_type: ErrorType) -> &Contraction {
        match error_type {
            ErrorType::Z => &self.primal,
            ErrorType::X => &self.dual,
        }
    }

    /// Whether a logical of `operator_type` can still be supported: Z
    /// logicals live on primal cycles, X logicals on dual cycles.
    pub fn logical_survives(&self, operator_type: ErrorType) -> bool {
        !self.logical_classes(operator_type).is_empty()
    }

    fn logical_classes(&self, operator_type: ErrorType) -> &[[u8; 2]] {
        match operator_type {
            ErrorType::Z => &self.primal.surviving_classes,
            ErrorType::X => &self.dual.surviving_classes,
        }
    }

    /// Edges acted on by the merged stabilizer at `site` of the contracted
    /// graph detecting `error_type`.
    pub fn stabilizer_support(&self, error_type: ErrorType, site: usize) -> Vec<usize> {
        let c = self.contraction(error_type);
        let base = self.code.graph(error_type);
        (0..base.num_edges())
            .filter(|&e| {
                let ends = base.edge(e).expect("base graph has every edge").ends;
                let inside = ends.iter().filter(|&&v| c.site_map[v as usize] == site).count();
                inside == 1
            })
            .collect()
    }

    /// Defect sites of the contracted graph for an error on surviving edges.
    pub fn syndrome(&self, errors: &[usize], error_type: ErrorType) -> Result<Vec<usize>> {
        self.check_surviving(errors)?;
        Ok(self.contraction(error_type).graph.boundary(errors))
    }

    fn check_surviving(&self, errors: &[usize]) -> Result<()> {
        let count = self.code.lattice().num_edges();
        for &e in errors {
            if e >= count {
                return Err(Error::EdgeOutOfRange { edge: e, count });
            }
            if self.lost.binary_search(&e).is_ok() {
                return Err(Error::InvalidArgument(format!("error on lost edge {e}")));
            }
        }
        Ok(())
    }

    /// Decodes errors on surviving edges. A residual fails when it
    /// anticommutes with a surviving conjugate logical; if none survives the
    /// trial fails outright.
    pub fn decode(&self, errors: &[usize], error_type: ErrorType) -> Result<DecodeOutcome> {
        self.check_surviving(errors)?;
        let conjugate = self.logical_classes(error_type.conjugate());
        if conjugate.is_empty() {
            return Ok(DecodeOutcome::lost());
        }
        decode_on_graph(&self.contraction(error_type).graph, conjugate, errors)
    }
}
