//! Periodic lattices on the torus, their duals and stellated refinements.
//!
//! Qubits live on edges. Vertices carry the X-type star stabilizers and faces
//! the Z-type plaquette stabilizers; the dual lattice exchanges the two while
//! keeping edge indices, so edge `i` of `lat.dual()` crosses edge `i` of `lat`.
//!
//! Indices are dense and row-major over unit cells: the element with
//! sublattice index `s` in cell `(x, y)` has index `(y * L + x) * per_cell + s`.

mod export;
mod iso;
mod tiling;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
pub use iso::{canonical_code, find_isomorphism, Isomorphism};
use tiling::{add, Offset, Tiling};

/// Default cap on the stellation depth of recursive lattices.
pub const DEFAULT_MAX_LEVEL: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LatticeKind {
    Square,
    Kagome,
    Hexagonal,
    Trihexa,
    Dual(Box<LatticeKind>),
    Recursive(usize),
}

impl LatticeKind {
    /// The four base geometries in order of increasing primal bond-percolation
    /// threshold.
    pub const BASE: [LatticeKind; 4] = [
        LatticeKind::Square,
        LatticeKind::Kagome,
        LatticeKind::Hexagonal,
        LatticeKind::Trihexa,
    ];

    pub fn dual(&self) -> LatticeKind {
        LatticeKind::Dual(Box::new(self.clone()))
    }

    fn tiling(&self) -> Result<Tiling> {
        match self {
            LatticeKind::Square => tiling::square(),
            LatticeKind::Kagome => tiling::kagome(),
            LatticeKind::Hexagonal => tiling::hexagonal(),
            LatticeKind::Trihexa => tiling::trihexa(),
            LatticeKind::Dual(inner) => inner.tiling()?.dual(),
            LatticeKind::Recursive(level) => {
                let mut t = tiling::square()?;
                for _ in 0..*level {
                    t = t.stellate()?;
                }
                Ok(t)
            }
        }
    }

    fn recursion_depth(&self) -> usize {
        match self {
            LatticeKind::Recursive(n) => *n,
            LatticeKind::Dual(inner) => inner.recursion_depth(),
            _ => 0,
        }
    }
}

impl TryFrom<String> for LatticeKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LatticeKind> for String {
    fn from(k: LatticeKind) -> String {
        k.to_string()
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Square => f.write_str("square"),
            LatticeKind::Kagome => f.write_str("kagome"),
            LatticeKind::Hexagonal => f.write_str("hexagonal"),
            LatticeKind::Trihexa => f.write_str("trihexa"),
            LatticeKind::Dual(inner) => write!(f, "dual-{inner}"),
            LatticeKind::Recursive(n) => write!(f, "recursive-{n}"),
        }
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    /// Accepts `square`, `kagome`, `hexagonal`, `trihexa`, `recursive-<n>`
    /// and `dual-<kind>` (nestable), plus `triangular` for the hexagonal dual.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(inner) = lower.strip_prefix("dual-") {
            return Ok(inner.parse::<LatticeKind>()?.dual());
        }
        if let Some(level) = lower.strip_prefix("recursive-") {
            return level
                .parse()
                .map(LatticeKind::Recursive)
                .map_err(|_| Error::UnknownKind(s.to_string()));
        }
        match lower.as_str() {
            "square" => Ok(LatticeKind::Square),
            "kagome" => Ok(LatticeKind::Kagome),
            "hexagonal" | "honeycomb" => Ok(LatticeKind::Hexagonal),
            "trihexa" | "tri-hexa" => Ok(LatticeKind::Trihexa),
            "triangular" => Ok(LatticeKind::Hexagonal.dual()),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub cell: [usize; 2],
    pub sublattice: usize,
    pub position: [f64; 2],
    /// Outgoing half-edges in counter-clockwise order.
    pub half_edges: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    /// Face on the left when walking tail -> head.
    pub left: usize,
    pub right: usize,
    /// Torus wraps crossed walking tail -> head.
    pub wrap: [i32; 2],
}

#[derive(Clone, Debug)]
pub struct Face {
    pub cell: [usize; 2],
    pub sublattice: usize,
    /// Boundary half-edges, counter-clockwise with the face on their left.
    pub half_edges: Vec<usize>,
}

/// Immutable cell complex of a periodic lattice on an `L x L` torus.
#[derive(Clone, Debug)]
pub struct Lattice {
    kind: LatticeKind,
    size: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    seams: [Vec<usize>; 2],
    tiling: Arc<Tiling>,
}

fn floor_div(a: i32, n: i32) -> i32 {
    a.div_euclid(n)
}

impl Lattice {
    /// Builds `kind` on an `size x size` torus of unit cells.
    pub fn build(kind: LatticeKind, size: usize) -> Result<Self> {
        Self::build_capped(kind, size, DEFAULT_MAX_LEVEL)
    }

    pub fn build_capped(kind: LatticeKind, size: usize, max_level: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidSize(size));
        }
        let level = kind.recursion_depth();
        if level > max_level {
            return Err(Error::RecursionTooDeep {
                level,
                max: max_level,
            });
        }
        let tiling = kind.tiling()?;
        Ok(Self::instantiate(kind, size, Arc::new(tiling)))
    }

    /// Stellated square lattice of the given level; level 0 is the square
    /// lattice itself.
    pub fn build_recursive(level: usize, size: usize) -> Result<Self> {
        Self::build(LatticeKind::Recursive(level), size)
    }

    /// The dual lattice: vertex `i` of the dual is face `i` of `self` and edge
    /// `i` of the dual joins the left and right faces of edge `i`.
    pub fn dual(&self) -> Lattice {
        let tiling = self
            .tiling
            .dual()
            .expect("dual of a traced tiling is always traceable");
        Self::instantiate(self.kind.dual(), self.size, Arc::new(tiling))
    }

    fn instantiate(kind: LatticeKind, size: usize, tiling: Arc<Tiling>) -> Self {
        let l = size as i32;
        let cells = size * size;
        let (ns, ne, nf) = (tiling.sites.len(), tiling.edges.len(), tiling.faces.len());
        let cell_index = |c: Offset| -> usize {
            let x = c[0].rem_euclid(l) as usize;
            let y = c[1].rem_euclid(l) as usize;
            y * size + x
        };
        let cell_coords = |i: usize| -> Offset { [(i % size) as i32, (i / size) as i32] };

        let mut edges = Vec::with_capacity(cells * ne);
        for ci in 0..cells {
            let c = cell_coords(ci);
            for (e, t) in tiling.edges.iter().enumerate() {
                let tc = add(c, t.tail.1);
                let hc = add(c, t.head.1);
                let (lf, loff) = tiling.half_face[2 * e];
                let (rf, roff) = tiling.half_face[2 * e + 1];
                edges.push(Edge {
                    tail: cell_index(tc) * ns + t.tail.0,
                    head: cell_index(hc) * ns + t.head.0,
                    left: cell_index(add(c, loff)) * nf + lf,
                    right: cell_index(add(c, roff)) * nf + rf,
                    wrap: [
                        floor_div(hc[0], l) - floor_div(tc[0], l),
                        floor_div(hc[1], l) - floor_div(tc[1], l),
                    ],
                });
            }
        }

        let half_id = |h: usize, anchor: Offset| -> usize {
            2 * (cell_index(anchor) * ne + h / 2) + h % 2
        };
        let mut vertices = Vec::with_capacity(cells * ns);
        for ci in 0..cells {
            let c = cell_coords(ci);
            for (s, rot) in tiling.rotation.iter().enumerate() {
                vertices.push(Vertex {
                    cell: [c[0] as usize, c[1] as usize],
                    sublattice: s,
                    position: tiling.position(s, c),
                    half_edges: rot.iter().map(|&(h, a)| half_id(h, add(c, a))).collect(),
                });
            }
        }
        let mut faces = Vec::with_capacity(cells * nf);
        for ci in 0..cells {
            let c = cell_coords(ci);
            for (k, f) in tiling.faces.iter().enumerate() {
                faces.push(Face {
                    cell: [c[0] as usize, c[1] as usize],
                    sublattice: k,
                    half_edges: f
                        .boundary
                        .iter()
                        .map(|&(h, off)| half_id(h, add(c, off)))
                        .collect(),
                });
            }
        }

        let seams = [0, 1].map(|axis| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.wrap[axis] % 2 != 0)
                .map(|(i, _)| i)
                .collect()
        });
        Lattice {
            kind,
            size,
            vertices,
            edges,
            faces,
            seams,
            tiling,
        }
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    /// Linear size in unit cells.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// `(vertices, edges, faces)` per unit cell.
    pub fn per_cell(&self) -> [usize; 3] {
        [
            self.tiling.sites.len(),
            self.tiling.edges.len(),
            self.tiling.faces.len(),
        ]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].half_edges.len()
    }

    pub fn face_size(&self, f: usize) -> usize {
        self.faces[f].half_edges.len()
    }

    pub fn half_origin(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h % 2 == 0 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn half_target(&self, h: usize) -> usize {
        self.half_origin(h ^ 1)
    }

    /// Face on the left of half-edge `h`.
    pub fn half_face(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h % 2 == 0 {
            e.left
        } else {
            e.right
        }
    }

    /// Wrap vector of half-edge `h` (negated for the head -> tail direction).
    pub fn half_wrap(&self, h: usize) -> [i32; 2] {
        let w = self.edges[h / 2].wrap;
        if h % 2 == 0 {
            w
        } else {
            [-w[0], -w[1]]
        }
    }

    /// Edges incident to a vertex, in counter-clockwise order.
    pub fn vertex_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertices[v].half_edges.iter().map(|h| h / 2)
    }

    /// Boundary edges of a face, in counter-clockwise order.
    pub fn face_edges(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        self.faces[f].half_edges.iter().map(|h| h / 2)
    }

    /// Corners of a face, in counter-clockwise order.
    pub fn face_vertices(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        self.faces[f].half_edges.iter().map(|&h| self.half_origin(h))
    }

    /// Edge sets crossing the two fundamental cuts: `seams()[0]` is crossed
    /// by cycles winding in the first lattice direction, `seams()[1]` by
    /// cycles winding in the second.
    pub fn seams(&self) -> &[Vec<usize>; 2] {
        &self.seams
    }

    /// Crossing parities of an edge set against the two seams.
    pub fn seam_crossing_parity<I>(&self, edge_set: I) -> [u8; 2]
    where
        I: IntoIterator<Item = usize>,
    {
        let mut parity = [0u8; 2];
        for e in edge_set {
            let w = self.edges[e].wrap;
            parity[0] ^= (w[0] & 1) as u8;
            parity[1] ^= (w[1] & 1) as u8;
        }
        parity
    }

    /// A shortest cycle whose seam parity equals `class` (which must be
    /// nonzero), found by breadth-first search on the `Z2 x Z2` cover.
    pub fn noncontractible_cycle(&self, class: [u8; 2]) -> Vec<usize> {
        assert!(class != [0, 0], "class must be noncontractible");
        let per_cell = self.per_cell()[0];
        let mut best: Option<Vec<usize>> = None;
        // Translation symmetry: starting points in one unit cell suffice.
        for start in 0..per_cell {
            if let Some(cycle) = self.shortest_cover_cycle(start, class) {
                if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                    best = Some(cycle);
                }
            }
        }
        best.expect("torus lattices always carry noncontractible cycles")
    }

    /// Length of the shortest noncontractible cycle.
    pub fn distance(&self) -> usize {
        [[1, 0], [0, 1], [1, 1]]
            .into_iter()
            .map(|c| self.noncontractible_cycle(c).len())
            .min()
            .unwrap_or(0)
    }

    fn shortest_cover_cycle(&self, start: usize, class: [u8; 2]) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let state = |v: usize, p: [u8; 2]| v * 4 + (p[0] as usize) * 2 + p[1] as usize;
        let mut via = vec![usize::MAX; 4 * n];
        let mut seen = vec![false; 4 * n];
        let mut queue = std::collections::VecDeque::new();
        seen[state(start, [0, 0])] = true;
        queue.push_back((start, [0u8, 0u8]));
        let goal = state(start, class);
        while let Some((v, p)) = queue.pop_front() {
            if state(v, p) == goal {
                break;
            }
            for &h in &self.vertices[v].half_edges {
                let w = self.edges[h / 2].wrap;
                let q = [p[0] ^ (w[0] & 1) as u8, p[1] ^ (w[1] & 1) as u8];
                let t = self.half_target(h);
                let s = state(t, q);
                if !seen[s] {
                    seen[s] = true;
                    via[s] = h;
                    queue.push_back((t, q));
                }
            }
        }
        if !seen[goal] {
            return None;
        }
        let mut cycle = Vec::new();
        let (mut v, mut p) = (start, class);
        while state(v, p) != state(start, [0, 0]) {
            let h = via[state(v, p)];
            let w = self.edges[h / 2].wrap;
            cycle.push(h / 2);
            v = self.half_origin(h);
            p = [p[0] ^ (w[0] & 1) as u8, p[1] ^ (w[1] & 1) as u8];
        }
        cycle.reverse();
        Some(cycle)
    }

    /// Checks the structural invariants; used by tests and after parsing.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::DegenerateTiling(m));
        if self.euler_characteristic() != 0 {
            return fail(format!("euler characteristic {}", self.euler_characteristic()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.left == e.right {
                return fail(format!("edge {i} has the same face on both sides"));
            }
        }
        for (f, face) in self.faces.iter().enumerate() {
            let mut net = [0, 0];
            let k = face.half_edges.len();
            for i in 0..k {
                let h = face.half_edges[i];
                let next = face.half_edges[(i + 1) % k];
                if self.half_target(h) != self.half_origin(next) {
                    return fail(format!("face {f} boundary is not a closed walk"));
                }
                if self.half_face(h) != f {
                    return fail(format!("face {f} boundary half-edge {h} points elsewhere"));
                }
                net = add(net, self.half_wrap(h));
            }
            if net != [0, 0] {
                return fail(format!("face {f} boundary has net wrap {net:?}"));
            }
        }
        Ok(())
    }
}
