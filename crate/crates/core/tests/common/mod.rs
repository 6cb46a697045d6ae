//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use surface_lab::Lattice;

const UNREACHABLE: u64 = u64::MAX / 4;

/// All-pairs shortest paths over an explicit edge list.
pub fn floyd_warshall(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<u64>> {
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (a, b) in edges {
        if a != b {
            d[a][b] = 1;
            d[b][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn primal_distances(lat: &Lattice) -> Vec<Vec<u64>> {
    floyd_warshall(lat.num_vertices(), lat.edges().iter().map(|e| (e.tail, e.head)))
}

pub fn dual_distances(lat: &Lattice) -> Vec<Vec<u64>> {
    floyd_warshall(lat.num_faces(), lat.edges().iter().map(|e| (e.left, e.right)))
}

/// Minimum perfect matching weight by exhaustive recursion.
pub fn brute_force_matching(d: &[Vec<u64>], sites: &[usize]) -> u64 {
    if sites.is_empty() {
        return 0;
    }
    let first = sites[0];
    (1..sites.len())
        .map(|k| {
            let rest: Vec<usize> = sites[1..]
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 != k)
                .map(|(_, &s)| s)
                .collect();
            d[first][sites[k]] + brute_force_matching(d, &rest)
        })
        .min()
        .unwrap()
}
