//! Union-find that tracks positions in the universal cover of the torus.
//!
//! Each element stores its displacement (in unit cells) relative to its
//! parent. Joining two elements that already share a root closes a loop;
//! the loop is noncontractible exactly when the displacements disagree.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Union {
    Merged,
    Contractible,
    /// The new edge closes a loop with this net winding.
    Wrapping([i32; 2]),
}

#[derive(Clone, Debug)]
pub struct WrapUnionFind {
    parent: Vec<u32>,
    offset: Vec<[i32; 2]>,
    rank: Vec<u8>,
}

impl WrapUnionFind {
    pub fn new(n: usize) -> Self {
        WrapUnionFind {
            parent: (0..n as u32).collect(),
            offset: vec![[0, 0]; n],
            rank: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `x` and the position of `x` relative to that root.
    pub fn find(&mut self, x: usize) -> (usize, [i32; 2]) {
        let mut root = x;
        let mut acc = [0, 0];
        while self.parent[root] as usize != root {
            let o = self.offset[root];
            acc = [acc[0] + o[0], acc[1] + o[1]];
            root = self.parent[root] as usize;
        }
        let mut y = x;
        let mut rest = acc;
        while self.parent[y] as usize != y {
            let next = self.parent[y] as usize;
            let o = self.offset[y];
            self.parent[y] = root as u32;
            self.offset[y] = rest;
            rest = [rest[0] - o[0], rest[1] - o[1]];
            y = next;
        }
        (root, acc)
    }

    /// Adds an edge from `a` to `b` whose head sits at `a + displacement`.
    pub fn union(&mut self, a: usize, b: usize, displacement: [i32; 2]) -> Union {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        // Position of rb relative to ra.
        let rel = [
            oa[0] + displacement[0] - ob[0],
            oa[1] + displacement[1] - ob[1],
        ];
        if ra == rb {
            return if rel == [0, 0] {
                Union::Contractible
            } else {
                Union::Wrapping(rel)
            };
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb as u32;
            self.offset[ra] = [-rel[0], -rel[1]];
        } else {
            self.parent[rb] = ra as u32;
            self.offset[rb] = rel;
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
        }
        Union::Merged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_around_the_torus() {
        // Four sites in a row; the last edge wraps once in x.
        let mut uf = WrapUnionFind::new(4);
        assert_eq!(uf.union(0, 1, [0, 0]), Union::Merged);
        assert_eq!(uf.union(1, 2, [0, 0]), Union::Merged);
        assert_eq!(uf.union(2, 3, [0, 0]), Union::Merged);
        assert_eq!(uf.union(3, 0, [1, 0]), Union::Wrapping([1, 0]));
        assert_eq!(uf.union(0, 2, [0, 0]), Union::Contractible);
    }

    #[test]
    fn offsets_survive_path_compression() {
        let mut uf = WrapUnionFind::new(6);
        uf.union(0, 1, [1, 0]);
        uf.union(2, 3, [0, 1]);
        uf.union(1, 2, [0, 0]);
        uf.union(4, 5, [0, 0]);
        uf.union(5, 3, [-1, 0]);
        let (r0, o0) = uf.find(0);
        let (r4, o4) = uf.find(4);
        assert_eq!(r0, r4);
        // 0 -> 1 -> 2 -> 3 is (1, 1); 4 -> 5 -> 3 is (-1, 0).
        assert_eq!([o4[0] - o0[0], o4[1] - o0[1]], [2, 1]);
        assert_eq!(uf.union(4, 0, [-2, -1]), Union::Contractible);
    }
}
