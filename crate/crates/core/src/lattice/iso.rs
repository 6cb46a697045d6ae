//! Isomorphism of lattices as combinatorial maps.
//!
//! A torus lattice is fully described by its half-edges together with two
//! permutations: `twin` (reverse the half-edge) and `next` (the following
//! half-edge counter-clockwise around the origin). Because the map is
//! connected, an isomorphism is pinned down by the image of a single
//! half-edge, so labelling half-edges in breadth-first order from a root
//! yields a code that is equal for two roots exactly when a root-preserving
//! isomorphism exists. Mirror images are covered by running the same search
//! with `next` inverted.

use super::Lattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// `vertex_map[v]` is the image in the second lattice of vertex `v`.
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub face_map: Vec<usize>,
    /// True when the map reverses the cyclic orientation.
    pub mirrored: bool,
}

struct Rotation {
    next: Vec<usize>,
    prev: Vec<usize>,
}

fn rotation(lat: &Lattice) -> Rotation {
    let halves = 2 * lat.num_edges();
    let mut next = vec![0; halves];
    let mut prev = vec![0; halves];
    for v in lat.vertices() {
        let k = v.half_edges.len();
        for i in 0..k {
            let h = v.half_edges[i];
            let g = v.half_edges[(i + 1) % k];
            next[h] = g;
            prev[g] = h;
        }
    }
    Rotation { next, prev }
}

/// Breadth-first labelling from `root`; returns (code, label order).
fn labelled_code(step: &[usize], root: usize) -> (Vec<u32>, Vec<usize>) {
    let halves = step.len();
    let mut label = vec![u32::MAX; halves];
    let mut order = Vec::with_capacity(halves);
    label[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let h = order[head];
        head += 1;
        for g in [step[h], h ^ 1] {
            if label[g] == u32::MAX {
                label[g] = order.len() as u32;
                order.push(g);
            }
        }
    }
    let mut code = Vec::with_capacity(2 * halves);
    for &h in &order {
        code.push(label[step[h]]);
        code.push(label[h ^ 1]);
    }
    (code, order)
}

/// Lexicographically smallest rooted code over all roots and both
/// orientations. Equal codes mean isomorphic lattices (possibly mirrored).
pub fn canonical_code(lat: &Lattice) -> Vec<u32> {
    let rot = rotation(lat);
    let mut best: Option<Vec<u32>> = None;
    for step in [&rot.next, &rot.prev] {
        for root in 0..step.len() {
            let (code, _) = labelled_code(step, root);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

/// Finds an explicit isomorphism from `a` to `b`, if one exists.
pub fn find_isomorphism(a: &Lattice, b: &Lattice) -> Option<Isomorphism> {
    if (a.num_vertices(), a.num_edges(), a.num_faces())
        != (b.num_vertices(), b.num_edges(), b.num_faces())
    {
        return None;
    }
    if a.num_edges() == 0 {
        return None;
    }
    let ra = rotation(a);
    let rb = rotation(b);
    let (code_a, order_a) = labelled_code(&ra.next, 0);
    for (mirrored, step) in [(false, &rb.next), (true, &rb.prev)] {
        for root in 0..step.len() {
            let (code_b, order_b) = labelled_code(step, root);
            if code_b != code_a {
                continue;
            }
            let mut half_map = vec![0; order_a.len()];
            for (&ha, &hb) in order_a.iter().zip(&order_b) {
                half_map[ha] = hb;
            }
            let mut vertex_map = vec![0; a.num_vertices()];
            let mut face_map = vec![0; a.num_faces()];
            for (ha, &hb) in half_map.iter().enumerate() {
                vertex_map[a.half_origin(ha)] = b.half_origin(hb);
                // Mirroring swaps the sides of every edge.
                let fb = if mirrored {
                    b.half_face(hb ^ 1)
                } else {
                    b.half_face(hb)
                };
                face_map[a.half_face(ha)] = fb;
            }
            let edge_map = (0..a.num_edges()).map(|e| half_map[2 * e] / 2).collect();
            return Some(Isomorphism {
                vertex_map,
                edge_map,
                face_map,
                mirrored,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeKind;

    fn check(iso: &Isomorphism, a: &Lattice, b: &Lattice) {
        for (e, edge) in a.edges().iter().enumerate() {
            let image = b.edge(iso.edge_map[e]);
            let mut ends = [iso.vertex_map[edge.tail], iso.vertex_map[edge.head]];
            let mut want = [image.tail, image.head];
            ends.sort_unstable();
            want.sort_unstable();
            assert_eq!(ends, want, "edge {e}");
        }
        let mut seen = iso.vertex_map.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), a.num_vertices());
    }

    #[test]
    fn square_is_self_dual() {
        for size in [2, 3, 4] {
            let sq = Lattice::build(LatticeKind::Square, size).unwrap();
            let d = sq.dual();
            let iso = find_isomorphism(&sq, &d).expect("square is self-dual");
            check(&iso, &sq, &d);
            assert_eq!(canonical_code(&sq), canonical_code(&d));
        }
    }

    #[test]
    fn double_dual_is_isomorphic() {
        for kind in LatticeKind::BASE {
            let lat = Lattice::build(kind, 3).unwrap();
            let dd = lat.dual().dual();
            let iso = find_isomorphism(&lat, &dd).expect("involution");
            check(&iso, &lat, &dd);
        }
    }

    #[test]
    fn hexagonal_is_not_self_dual() {
        let hex = Lattice::build(LatticeKind::Hexagonal, 3).unwrap();
        assert!(find_isomorphism(&hex, &hex.dual()).is_none());
        let kag = Lattice::build(LatticeKind::Kagome, 3).unwrap();
        assert_ne!(canonical_code(&kag), canonical_code(&kag.dual()));
    }
}
