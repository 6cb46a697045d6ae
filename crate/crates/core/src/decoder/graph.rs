//! Sparse graphs that matching runs on.

use crate::lattice::Lattice;

/// One original lattice edge as seen by the decoder. `ends` may coincide
/// (a self-loop after contraction); such edges never enter the adjacency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub ends: [u32; 2],
    pub wrap: [i32; 2],
}

/// Node/edge graph indexed by the original edge numbering. Absent edges
/// (lost qubits) are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodingGraph {
    num_nodes: usize,
    edges: Vec<Option<GraphEdge>>,
    offsets: Vec<u32>,
    /// `(neighbour, edge)` pairs, sorted by neighbour then edge per node.
    adjacency: Vec<(u32, u32)>,
}

impl DecodingGraph {
    pub fn new(num_nodes: usize, edges: Vec<Option<GraphEdge>>) -> Self {
        let mut lists: Vec<Vec<(u32, u32)>> = vec![Vec::new(); num_nodes];
        for (e, edge) in edges.iter().enumerate() {
            if let Some(GraphEdge { ends: [a, b], .. }) = *edge {
                if a != b {
                    lists[a as usize].push((b, e as u32));
                    lists[b as usize].push((a, e as u32));
                }
            }
        }
        let mut offsets = Vec::with_capacity(num_nodes + 1);
        let mut adjacency = Vec::new();
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable();
            adjacency.extend(list);
            offsets.push(adjacency.len() as u32);
        }
        DecodingGraph {
            num_nodes,
            edges,
            offsets,
            adjacency,
        }
    }

    /// Vertex graph of the lattice: the Z-error decoding graph.
    pub fn primal(lat: &Lattice) -> Self {
        let edges = lat
            .edges()
            .iter()
            .map(|e| {
                Some(GraphEdge {
                    ends: [e.tail as u32, e.head as u32],
                    wrap: e.wrap,
                })
            })
            .collect();
        Self::new(lat.num_vertices(), edges)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> Option<&GraphEdge> {
        self.edges[e].as_ref()
    }

    pub fn neighbours(&self, node: usize) -> &[(u32, u32)] {
        let lo = self.offsets[node] as usize;
        let hi = self.offsets[node + 1] as usize;
        &self.adjacency[lo..hi]
    }

    /// Nodes with an odd number of incident edges from `edges`.
    pub fn boundary(&self, edges: &[usize]) -> Vec<usize> {
        let mut odd = vec![false; self.num_nodes];
        for &e in edges {
            if let Some(GraphEdge { ends: [a, b], .. }) = self.edges[e] {
                odd[a as usize] ^= true;
                odd[b as usize] ^= true;
            }
        }
        odd.iter()
            .enumerate()
            .filter_map(|(i, &o)| o.then_some(i))
            .collect()
    }

    /// Seam parities of an edge set, using this graph's wrap vectors.
    pub fn winding_parity(&self, edges: &[usize]) -> [u8; 2] {
        let mut p = [0u8; 2];
        for &e in edges {
            if let Some(edge) = &self.edges[e] {
                p[0] ^= (edge.wrap[0] & 1) as u8;
                p[1] ^= (edge.wrap[1] & 1) as u8;
            }
        }
        p
    }
}
