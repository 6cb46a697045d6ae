//! All-pairs hop distances between defects by repeated breadth-first search.

use std::collections::VecDeque;

use super::graph::DecodingGraph;

const UNSEEN: u32 = u32::MAX;

/// Complete graph on the defects. Distances are hop counts; for each pair
/// `(i, j)` with `i < j` the shortest path is read off the BFS tree grown
/// from defect `i`, neighbours visited in increasing node then edge index.
#[derive(Clone, Debug)]
pub struct DefectGraph {
    defects: Vec<usize>,
    dist: Vec<u32>,
    nodes: usize,
    /// `parent_edge[i * nodes + v]`: tree edge into `v` in the tree of defect `i`.
    parent_edge: Vec<u32>,
    parent_node: Vec<u32>,
}

impl DefectGraph {
    pub fn build(graph: &DecodingGraph, defects: &[usize]) -> Self {
        let n = defects.len();
        let nodes = graph.num_nodes();
        let mut dist = vec![0; n * n];
        // Trees are only needed from every defect but the last.
        let trees = n.saturating_sub(1);
        let mut parent_edge = vec![UNSEEN; trees * nodes];
        let mut parent_node = vec![UNSEEN; trees * nodes];
        let mut depth = vec![UNSEEN; nodes];
        let mut target_index = vec![UNSEEN; nodes];
        for (j, &d) in defects.iter().enumerate() {
            target_index[d] = j as u32;
        }
        let mut queue = VecDeque::new();
        let mut touched = Vec::new();
        for i in 0..trees {
            let pe = &mut parent_edge[i * nodes..(i + 1) * nodes];
            let pn = &mut parent_node[i * nodes..(i + 1) * nodes];
            let src = defects[i];
            depth[src] = 0;
            touched.push(src);
            queue.push_back(src);
            // Defects j > i still to be reached.
            let mut remaining = n - 1 - i;
            'bfs: while let Some(u) = queue.pop_front() {
                for &(v, e) in graph.neighbours(u) {
                    let v = v as usize;
                    if depth[v] != UNSEEN {
                        continue;
                    }
                    depth[v] = depth[u] + 1;
                    pe[v] = e;
                    pn[v] = u as u32;
                    touched.push(v);
                    queue.push_back(v);
                    let j = target_index[v];
                    if j != UNSEEN && j as usize > i {
                        dist[i * n + j as usize] = depth[v];
                        dist[j as usize * n + i] = depth[v];
                        remaining -= 1;
                        if remaining == 0 {
                            break 'bfs;
                        }
                    }
                }
            }
            assert_eq!(remaining, 0, "defects lie in one connected component");
            queue.clear();
            for v in touched.drain(..) {
                depth[v] = UNSEEN;
            }
        }
        DefectGraph {
            defects: defects.to_vec(),
            dist,
            nodes,
            parent_edge,
            parent_node,
        }
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn defects(&self) -> &[usize] {
        &self.defects
    }

    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.defects.len() + j]
    }

    /// Edges of the stored shortest path between defects `i` and `j`,
    /// listed from the lower-indexed defect's far end back to it.
    pub fn path(&self, i: usize, j: usize) -> Vec<usize> {
        if i == j {
            return Vec::new();
        }
        let (src, dst) = (i.min(j), i.max(j));
        let base = src * self.nodes;
        let root = self.defects[src];
        let mut v = self.defects[dst];
        let mut edges = Vec::with_capacity(self.dist(i, j) as usize);
        while v != root {
            edges.push(self.parent_edge[base + v] as usize);
            v = self.parent_node[base + v] as usize;
        }
        edges
    }
}
