//! Periodic tilings described by a single unit cell.
//!
//! A [`Tiling`] is the infinite-plane object: sites inside one cell, edge
//! templates that may reach into neighbouring cells, a rotation system
//! (counter-clockwise order of the half-edges leaving each site) and the faces
//! traced from it. Instantiating a tiling on an `L x L` torus is a pure
//! re-indexing step, so faces and incidences are never traced on the torus
//! itself and small tori cannot confuse the tracing.
//!
//! Half-edge `2e` runs tail -> head of edge template `e`, half-edge `2e + 1`
//! runs head -> tail. Offsets are integer cell vectors.

use crate::error::{Error, Result};

pub(crate) type Offset = [i32; 2];

pub(crate) fn add(a: Offset, b: Offset) -> Offset {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn sub(a: Offset, b: Offset) -> Offset {
    [a[0] - b[0], a[1] - b[1]]
}

/// One endpoint of an edge template: a site and its cell relative to the
/// edge's anchor cell.
pub(crate) type Endpoint = (usize, Offset);

#[derive(Clone, Debug)]
pub(crate) struct EdgeTemplate {
    pub tail: Endpoint,
    pub head: Endpoint,
}

#[derive(Clone, Debug)]
pub(crate) struct FaceTemplate {
    /// Boundary half-edges in counter-clockwise order (face on the left),
    /// each with its anchor cell relative to the face's home cell.
    pub boundary: Vec<(usize, Offset)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Tiling {
    pub basis: [[f64; 2]; 2],
    pub sites: Vec<[f64; 2]>,
    pub edges: Vec<EdgeTemplate>,
    /// Outgoing half-edges of each site, counter-clockwise, with the anchor
    /// cell of the half-edge relative to the site's cell.
    pub rotation: Vec<Vec<(usize, Offset)>>,
    pub faces: Vec<FaceTemplate>,
    /// Face on the left of each half-edge, with the face's home cell relative
    /// to the edge anchor.
    pub half_face: Vec<(usize, Offset)>,
}

impl Tiling {
    pub fn origin(&self, half: usize) -> Endpoint {
        let e = &self.edges[half / 2];
        if half % 2 == 0 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn target(&self, half: usize) -> Endpoint {
        self.origin(half ^ 1)
    }

    pub fn position(&self, site: usize, cell: Offset) -> [f64; 2] {
        let [bx, by] = self.basis;
        let p = self.sites[site];
        [
            p[0] + cell[0] as f64 * bx[0] + cell[1] as f64 * by[0],
            p[1] + cell[0] as f64 * bx[1] + cell[1] as f64 * by[1],
        ]
    }

    /// Builds a tiling from straight-line geometry; the rotation system is the
    /// angular order of the edges at each site.
    pub fn from_geometry(
        basis: [[f64; 2]; 2],
        sites: Vec<[f64; 2]>,
        edges: Vec<EdgeTemplate>,
    ) -> Result<Self> {
        let mut outgoing: Vec<Vec<(f64, usize, Offset)>> = vec![Vec::new(); sites.len()];
        let mut tiling = Tiling {
            basis,
            sites,
            edges,
            rotation: Vec::new(),
            faces: Vec::new(),
            half_face: Vec::new(),
        };
        for half in 0..2 * tiling.edges.len() {
            let (site, off) = tiling.origin(half);
            let (tsite, toff) = tiling.target(half);
            // Anchor relative to the origin cell.
            let anchor = sub([0, 0], off);
            let from = tiling.position(site, [0, 0]);
            let to = tiling.position(tsite, add(anchor, toff));
            let (dx, dy) = (to[0] - from[0], to[1] - from[1]);
            if dx.hypot(dy) < 1e-9 {
                return Err(Error::DegenerateTiling(format!(
                    "half-edge {half} has zero length"
                )));
            }
            outgoing[site].push((dy.atan2(dx), half, anchor));
        }
        let mut rotation = Vec::with_capacity(outgoing.len());
        for (site, mut out) in outgoing.into_iter().enumerate() {
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
            for pair in out.windows(2) {
                if (pair[1].0 - pair[0].0).abs() < 1e-9 {
                    return Err(Error::DegenerateTiling(format!(
                        "overlapping edges at site {site}"
                    )));
                }
            }
            rotation.push(out.into_iter().map(|(_, h, a)| (h, a)).collect());
        }
        tiling.rotation = rotation;
        tiling.trace_faces()?;
        Ok(tiling)
    }

    /// Builds a tiling from an explicit rotation system.
    pub fn from_rotation(
        basis: [[f64; 2]; 2],
        sites: Vec<[f64; 2]>,
        edges: Vec<EdgeTemplate>,
        rotation: Vec<Vec<(usize, Offset)>>,
    ) -> Result<Self> {
        let mut tiling = Tiling {
            basis,
            sites,
            edges,
            rotation,
            faces: Vec::new(),
            half_face: Vec::new(),
        };
        tiling.trace_faces()?;
        Ok(tiling)
    }

    fn trace_faces(&mut self) -> Result<()> {
        let halves = 2 * self.edges.len();
        // Where each half-edge sits in its origin's rotation.
        let mut slot = vec![(usize::MAX, usize::MAX); halves];
        for (site, rot) in self.rotation.iter().enumerate() {
            for (i, &(h, _)) in rot.iter().enumerate() {
                if slot[h].0 != usize::MAX {
                    return Err(Error::DegenerateTiling(format!(
                        "half-edge {h} listed twice in the rotation system"
                    )));
                }
                slot[h] = (site, i);
            }
        }
        if let Some(h) = slot.iter().position(|s| s.0 == usize::MAX) {
            return Err(Error::DegenerateTiling(format!(
                "half-edge {h} missing from the rotation system"
            )));
        }

        let mut half_face: Vec<Option<(usize, Offset)>> = vec![None; halves];
        let mut faces = Vec::new();
        for start in 0..halves {
            if half_face[start].is_some() {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut h, mut anchor) = (start, [0, 0]);
            loop {
                cycle.push((h, anchor));
                if cycle.len() > halves {
                    return Err(Error::DegenerateTiling(format!(
                        "face through half-edge {start} does not close"
                    )));
                }
                let (tsite, toff) = self.target(h);
                let tcell = add(anchor, toff);
                let (site, idx) = slot[h ^ 1];
                debug_assert_eq!(site, tsite);
                let rot = &self.rotation[site];
                let (next, noff) = rot[(idx + rot.len() - 1) % rot.len()];
                h = next;
                anchor = add(tcell, noff);
                if h == start && anchor == [0, 0] {
                    break;
                }
            }
            let first = (0..cycle.len()).min_by_key(|&i| cycle[i].0).unwrap_or(0);
            cycle.rotate_left(first);
            let home = cycle[0].1;
            let face = faces.len();
            let boundary: Vec<(usize, Offset)> =
                cycle.iter().map(|&(h, a)| (h, sub(a, home))).collect();
            for &(h, off) in &boundary {
                if half_face[h].is_some() {
                    return Err(Error::DegenerateTiling(format!(
                        "face {face} meets half-edge {h} twice"
                    )));
                }
                half_face[h] = Some((face, sub([0, 0], off)));
            }
            faces.push(FaceTemplate { boundary });
        }
        self.faces = faces;
        self.half_face = half_face.into_iter().map(|f| f.expect("traced")).collect();
        Ok(())
    }

    /// Centre of a face in its home frame.
    pub fn face_centroid(&self, face: usize) -> [f64; 2] {
        let boundary = &self.faces[face].boundary;
        let mut c = [0.0, 0.0];
        for &(h, off) in boundary {
            let (site, soff) = self.origin(h);
            let p = self.position(site, add(off, soff));
            c[0] += p[0];
            c[1] += p[1];
        }
        let k = boundary.len() as f64;
        [c[0] / k, c[1] / k]
    }

    /// The dual tiling: one site per face, one edge per edge (left face ->
    /// right face, same index), rotation given by the face boundary order.
    pub fn dual(&self) -> Result<Self> {
        let sites = (0..self.faces.len())
            .map(|f| self.face_centroid(f))
            .collect();
        let edges = (0..self.edges.len())
            .map(|e| EdgeTemplate {
                tail: self.half_face[2 * e],
                head: self.half_face[2 * e + 1],
            })
            .collect();
        // Dual half-edge h leaves the face on the left of primal half-edge h.
        let rotation = self
            .faces
            .iter()
            .map(|f| f.boundary.clone())
            .collect();
        Tiling::from_rotation(self.basis, sites, edges, rotation)
    }

    /// Inserts a vertex at the centre of every face and joins it to each
    /// corner of that face.
    pub fn stellate(&self) -> Result<Self> {
        let base = self.sites.len();
        let mut sites = self.sites.clone();
        let mut edges = self.edges.clone();
        for (f, face) in self.faces.iter().enumerate() {
            sites.push(self.face_centroid(f));
            for &(h, off) in &face.boundary {
                let (corner, coff) = self.origin(h);
                edges.push(EdgeTemplate {
                    tail: (base + f, [0, 0]),
                    head: (corner, add(off, coff)),
                });
            }
        }
        Tiling::from_geometry(self.basis, sites, edges)
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn edge(tail: usize, head: usize, off: Offset) -> EdgeTemplate {
    EdgeTemplate {
        tail: (tail, [0, 0]),
        head: (head, off),
    }
}

pub(crate) fn square() -> Result<Tiling> {
    Tiling::from_geometry(
        [[1.0, 0.0], [0.0, 1.0]],
        vec![[0.0, 0.0]],
        vec![edge(0, 0, [1, 0]), edge(0, 0, [0, 1])],
    )
}

const TRIANGULAR_BASIS: [[f64; 2]; 2] = [[1.0, 0.0], [0.5, SQRT3 / 2.0]];

pub(crate) fn hexagonal() -> Result<Tiling> {
    Tiling::from_geometry(
        TRIANGULAR_BASIS,
        vec![[0.0, 0.0], [0.5, SQRT3 / 6.0]],
        vec![edge(0, 1, [0, 0]), edge(0, 1, [-1, 0]), edge(0, 1, [0, -1])],
    )
}

pub(crate) fn kagome() -> Result<Tiling> {
    Tiling::from_geometry(
        TRIANGULAR_BASIS,
        vec![[0.0, 0.0], [0.5, 0.0], [0.25, SQRT3 / 4.0]],
        vec![
            edge(0, 1, [0, 0]),
            edge(0, 2, [0, 0]),
            edge(1, 2, [0, 0]),
            edge(1, 0, [1, 0]),
            edge(1, 2, [1, -1]),
            edge(2, 0, [0, 1]),
        ],
    )
}

/// Truncated hexagonal (3.12.12) tiling: every honeycomb vertex replaced by
/// a triangle, sized so triangle and dodecagon sides agree.
pub(crate) fn trihexa() -> Result<Tiling> {
    let t = 1.0 / (2.0 + SQRT3);
    let a = [0.0, 0.0];
    let b = [0.5, SQRT3 / 6.0];
    let bonds = [[0.5, SQRT3 / 6.0], [-0.5, SQRT3 / 6.0], [0.0, -SQRT3 / 3.0]];
    let mut sites = Vec::with_capacity(6);
    for d in &bonds {
        sites.push([a[0] + t * d[0], a[1] + t * d[1]]);
    }
    for d in &bonds {
        sites.push([b[0] - t * d[0], b[1] - t * d[1]]);
    }
    Tiling::from_geometry(
        TRIANGULAR_BASIS,
        sites,
        vec![
            edge(0, 1, [0, 0]),
            edge(1, 2, [0, 0]),
            edge(2, 0, [0, 0]),
            edge(3, 4, [0, 0]),
            edge(4, 5, [0, 0]),
            edge(5, 3, [0, 0]),
            edge(0, 3, [0, 0]),
            edge(1, 4, [-1, 0]),
            edge(2, 5, [0, -1]),
        ],
    )
}
