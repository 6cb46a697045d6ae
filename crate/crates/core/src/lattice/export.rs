//! Line-oriented text export of a lattice.
//!
//! ```text
//! # surface-lab lattice v1
//! kind hexagonal
//! size 4
//! counts <V> <E> <F>
//! vertex <i> cell <x> <y> sub <s> pos <px> <py> edges <e...>
//! edge <i> tail <a> head <b> left <f> right <g> wrap <dx> <dy>
//! face <i> cell <x> <y> sub <s> edges <e...> vertices <v...>
//! seam <axis> <e...>
//! ```
//!
//! Vertex edge lists and face boundaries are counter-clockwise. Positions are
//! printed with six decimals.

use std::fmt::Write as _;
use std::io;

use super::Lattice;

pub const FORMAT_HEADER: &str = "# surface-lab lattice v1";

fn join(items: impl Iterator<Item = usize>) -> String {
    let mut s = String::new();
    for (i, x) in items.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x}");
    }
    s
}

impl Lattice {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_HEADER}");
        let _ = writeln!(out, "kind {}", self.kind());
        let _ = writeln!(out, "size {}", self.size());
        let _ = writeln!(
            out,
            "counts {} {} {}",
            self.num_vertices(),
            self.num_edges(),
            self.num_faces()
        );
        for (i, v) in self.vertices().iter().enumerate() {
            let _ = writeln!(
                out,
                "vertex {i} cell {} {} sub {} pos {:.6} {:.6} edges {}",
                v.cell[0],
                v.cell[1],
                v.sublattice,
                v.position[0],
                v.position[1],
                join(self.vertex_edges(i))
            );
        }
        for (i, e) in self.edges().iter().enumerate() {
            let _ = writeln!(
                out,
                "edge {i} tail {} head {} left {} right {} wrap {} {}",
                e.tail, e.head, e.left, e.right, e.wrap[0], e.wrap[1]
            );
        }
        for (i, f) in self.faces().iter().enumerate() {
            let _ = writeln!(
                out,
                "face {i} cell {} {} sub {} edges {} vertices {}",
                f.cell[0],
                f.cell[1],
                f.sublattice,
                join(self.face_edges(i)),
                join(self.face_vertices(i))
            );
        }
        for (axis, seam) in self.seams().iter().enumerate() {
            let _ = writeln!(out, "seam {axis} {}", join(seam.iter().copied()));
        }
        out
    }

    pub fn write_text<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_text().as_bytes())
    }
}
