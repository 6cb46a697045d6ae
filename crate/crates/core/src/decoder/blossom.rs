//! Exact minimum-weight perfect matching on a complete graph.
//!
//! Primal-dual Edmonds blossom algorithm in the dense-matrix form (O(n^3)):
//! every vertex and blossom keeps the best edge towards every other vertex or
//! blossom, and slack is tracked per top-level blossom. The solver maximises
//! weight; a minimum-cost perfect matching is obtained by feeding it
//! `2 * (big - cost)` with `big` large enough that every perfect matching
//! beats every non-perfect one. Doubling keeps all dual updates integral.
//!
//! Indices are 1-based internally; 0 means "none".

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, Default)]
struct Arc {
    u: u32,
    v: u32,
    w: i64,
}

struct Solver {
    n: usize,
    nx: usize,
    cap: usize,
    g: Vec<Arc>,
    lab: Vec<i64>,
    mate: Vec<usize>,
    slack: Vec<usize>,
    st: Vec<usize>,
    pa: Vec<usize>,
    // flower_from[b * (n + 1) + x]: child of blossom b that contains vertex x.
    flower_from: Vec<usize>,
    label: Vec<i8>,
    vis: Vec<u32>,
    stamp: u32,
    flower: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
}

const FREE: i8 = -1;
const EVEN: i8 = 0;
const ODD: i8 = 1;

impl Solver {
    fn new(n: usize) -> Self {
        let cap = 2 * n + 1;
        let mut g = vec![Arc::default(); cap * cap];
        for u in 0..cap {
            for v in 0..cap {
                g[u * cap + v] = Arc {
                    u: u as u32,
                    v: v as u32,
                    w: 0,
                };
            }
        }
        let mut st = vec![0; cap];
        for (u, s) in st.iter_mut().enumerate().take(n + 1) {
            *s = u;
        }
        let mut flower_from = vec![0; cap * (n + 1)];
        for u in 1..=n {
            flower_from[u * (n + 1) + u] = u;
        }
        Solver {
            n,
            nx: n,
            cap,
            g,
            lab: vec![0; cap],
            mate: vec![0; cap],
            slack: vec![0; cap],
            st,
            pa: vec![0; cap],
            flower_from,
            label: vec![FREE; cap],
            vis: vec![0; cap],
            stamp: 0,
            flower: vec![Vec::new(); cap],
            queue: VecDeque::new(),
        }
    }

    #[inline]
    fn arc(&self, u: usize, v: usize) -> Arc {
        self.g[u * self.cap + v]
    }

    #[inline]
    fn delta(&self, e: Arc) -> i64 {
        self.lab[e.u as usize] + self.lab[e.v as usize] - e.w * 2
    }

    fn ff(&self, b: usize, x: usize) -> usize {
        self.flower_from[b * (self.n + 1) + x]
    }

    fn update_slack(&mut self, u: usize, x: usize) {
        let s = self.slack[x];
        if s == 0 || self.delta(self.arc(u, x)) < self.delta(self.arc(s, x)) {
            self.slack[x] = u;
        }
    }

    fn set_slack(&mut self, x: usize) {
        self.slack[x] = 0;
        for u in 1..=self.n {
            if self.arc(u, x).w > 0 && self.st[u] != x && self.label[self.st[u]] == EVEN {
                self.update_slack(u, x);
            }
        }
    }

    fn push(&mut self, x: usize) {
        if x <= self.n {
            self.queue.push_back(x);
        } else {
            for i in 0..self.flower[x].len() {
                let y = self.flower[x][i];
                self.push(y);
            }
        }
    }

    fn set_st(&mut self, x: usize, b: usize) {
        self.st[x] = b;
        if x > self.n {
            for i in 0..self.flower[x].len() {
                let y = self.flower[x][i];
                self.set_st(y, b);
            }
        }
    }

    fn get_pr(&mut self, b: usize, xr: usize) -> usize {
        let pr = self.flower[b]
            .iter()
            .position(|&x| x == xr)
            .expect("child belongs to blossom");
        if pr % 2 == 1 {
            self.flower[b][1..].reverse();
            self.flower[b].len() - pr
        } else {
            pr
        }
    }

    fn set_match(&mut self, u: usize, v: usize) {
        let e = self.arc(u, v);
        self.mate[u] = e.v as usize;
        if u > self.n {
            let xr = self.ff(u, e.u as usize);
            let pr = self.get_pr(u, xr);
            for i in 0..pr {
                let (a, b) = (self.flower[u][i], self.flower[u][i ^ 1]);
                self.set_match(a, b);
            }
            self.set_match(xr, v);
            self.flower[u].rotate_left(pr);
        }
    }

    fn augment(&mut self, mut u: usize, mut v: usize) {
        loop {
            let xnv = self.st[self.mate[u]];
            self.set_match(u, v);
            if xnv == 0 {
                return;
            }
            let t = self.st[self.pa[xnv]];
            self.set_match(xnv, t);
            u = t;
            v = xnv;
        }
    }

    fn lca(&mut self, mut u: usize, mut v: usize) -> usize {
        self.stamp += 1;
        let t = self.stamp;
        while u != 0 || v != 0 {
            if u != 0 {
                if self.vis[u] == t {
                    return u;
                }
                self.vis[u] = t;
                u = self.st[self.mate[u]];
                if u != 0 {
                    u = self.st[self.pa[u]];
                }
            }
            std::mem::swap(&mut u, &mut v);
        }
        0
    }

    fn add_blossom(&mut self, u: usize, lca: usize, v: usize) {
        let mut b = self.n + 1;
        while b <= self.nx && self.st[b] != 0 {
            b += 1;
        }
        if b > self.nx {
            self.nx += 1;
        }
        self.lab[b] = 0;
        self.label[b] = EVEN;
        self.mate[b] = self.mate[lca];
        let mut flower = vec![lca];
        let mut x = u;
        while x != lca {
            flower.push(x);
            let y = self.st[self.mate[x]];
            flower.push(y);
            self.push(y);
            x = self.st[self.pa[y]];
        }
        flower[1..].reverse();
        x = v;
        while x != lca {
            flower.push(x);
            let y = self.st[self.mate[x]];
            flower.push(y);
            self.push(y);
            x = self.st[self.pa[y]];
        }
        self.flower[b] = flower;
        self.set_st(b, b);
        let cap = self.cap;
        for x in 1..=self.nx {
            self.g[b * cap + x].w = 0;
            self.g[x * cap + b].w = 0;
        }
        let row = self.n + 1;
        for x in 1..=self.n {
            self.flower_from[b * row + x] = 0;
        }
        for i in 0..self.flower[b].len() {
            let xs = self.flower[b][i];
            for x in 1..=self.nx {
                let candidate = self.g[xs * cap + x];
                let current = self.g[b * cap + x];
                if current.w == 0 || self.delta(candidate) < self.delta(current) {
                    self.g[b * cap + x] = candidate;
                    self.g[x * cap + b] = self.g[x * cap + xs];
                }
            }
            for x in 1..=self.n {
                if self.flower_from[xs * row + x] != 0 {
                    self.flower_from[b * row + x] = xs;
                }
            }
        }
        self.set_slack(b);
    }

    fn expand_blossom(&mut self, b: usize) {
        for i in 0..self.flower[b].len() {
            let x = self.flower[b][i];
            self.set_st(x, x);
        }
        let entry = self.arc(b, self.pa[b]).u as usize;
        let xr = self.ff(b, entry);
        let pr = self.get_pr(b, xr);
        let mut i = 0;
        while i < pr {
            let xs = self.flower[b][i];
            let xns = self.flower[b][i + 1];
            self.pa[xs] = self.arc(xns, xs).u as usize;
            self.label[xs] = ODD;
            self.label[xns] = EVEN;
            self.slack[xs] = 0;
            self.set_slack(xns);
            self.push(xns);
            i += 2;
        }
        self.label[xr] = ODD;
        self.pa[xr] = self.pa[b];
        for i in pr + 1..self.flower[b].len() {
            let xs = self.flower[b][i];
            self.label[xs] = FREE;
            self.set_slack(xs);
        }
        self.st[b] = 0;
    }

    fn on_found_edge(&mut self, e: Arc) -> bool {
        let u = self.st[e.u as usize];
        let v = self.st[e.v as usize];
        if self.label[v] == FREE {
            self.pa[v] = e.u as usize;
            self.label[v] = ODD;
            let nu = self.st[self.mate[v]];
            self.slack[v] = 0;
            self.slack[nu] = 0;
            self.label[nu] = EVEN;
            self.push(nu);
        } else if self.label[v] == EVEN {
            let lca = self.lca(u, v);
            if lca == 0 {
                self.augment(u, v);
                self.augment(v, u);
                return true;
            }
            self.add_blossom(u, lca, v);
        }
        false
    }

    /// One augmentation stage; false when no augmenting path exists.
    fn stage(&mut self) -> bool {
        for x in 1..=self.nx {
            self.label[x] = FREE;
            self.slack[x] = 0;
        }
        self.queue.clear();
        for x in 1..=self.nx {
            if self.st[x] == x && self.mate[x] == 0 {
                self.pa[x] = 0;
                self.label[x] = EVEN;
                self.push(x);
            }
        }
        if self.queue.is_empty() {
            return false;
        }
        loop {
            while let Some(u) = self.queue.pop_front() {
                if self.label[self.st[u]] == ODD {
                    continue;
                }
                for v in 1..=self.n {
                    let e = self.arc(u, v);
                    if e.w > 0 && self.st[u] != self.st[v] {
                        if self.delta(e) == 0 {
                            if self.on_found_edge(e) {
                                return true;
                            }
                        } else {
                            let sv = self.st[v];
                            self.update_slack(u, sv);
                        }
                    }
                }
            }
            let mut d = i64::MAX;
            for b in self.n + 1..=self.nx {
                if self.st[b] == b && self.label[b] == ODD {
                    d = d.min(self.lab[b] / 2);
                }
            }
            for x in 1..=self.nx {
                if self.st[x] == x && self.slack[x] != 0 {
                    let s = self.delta(self.arc(self.slack[x], x));
                    if self.label[x] == FREE {
                        d = d.min(s);
                    } else if self.label[x] == EVEN {
                        d = d.min(s / 2);
                    }
                }
            }
            for u in 1..=self.n {
                match self.label[self.st[u]] {
                    EVEN => {
                        if self.lab[u] <= d {
                            return false;
                        }
                        self.lab[u] -= d;
                    }
                    ODD => self.lab[u] += d,
                    _ => {}
                }
            }
            for b in self.n + 1..=self.nx {
                if self.st[b] == b {
                    match self.label[b] {
                        EVEN => self.lab[b] += 2 * d,
                        ODD => self.lab[b] -= 2 * d,
                        _ => {}
                    }
                }
            }
            self.queue.clear();
            for x in 1..=self.nx {
                let s = self.slack[x];
                if self.st[x] == x && s != 0 && self.st[s] != x && self.delta(self.arc(s, x)) == 0 {
                    let e = self.arc(s, x);
                    if self.on_found_edge(e) {
                        return true;
                    }
                }
            }
            for b in self.n + 1..=self.nx {
                if self.st[b] == b && self.label[b] == ODD && self.lab[b] == 0 {
                    self.expand_blossom(b);
                }
            }
        }
    }
}

/// Maximum-weight matching of the complete graph on `n` vertices with
/// positive integer weights. Returns `mate[i]`, `None` for unmatched.
pub fn max_weight_matching(n: usize, weight: impl Fn(usize, usize) -> i64) -> Vec<Option<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let mut s = Solver::new(n);
    let mut w_max = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            let w = weight(u - 1, v - 1);
            assert!(w > 0, "weights must be positive");
            s.g[u * s.cap + v].w = w;
            s.g[v * s.cap + u].w = w;
            w_max = w_max.max(w);
        }
    }
    for u in 1..=n {
        s.lab[u] = w_max;
    }
    while s.stage() {}
    (1..=n)
        .map(|u| match s.mate[u] {
            0 => None,
            m => Some(m - 1),
        })
        .collect()
}

/// Minimum-cost perfect matching of the complete graph on an even number of
/// vertices with non-negative integer costs. Returns `mate`.
pub fn min_cost_perfect_matching(n: usize, cost: impl Fn(usize, usize) -> i64) -> Vec<usize> {
    assert!(n % 2 == 0, "perfect matching needs an even vertex count");
    let mut max_cost = 0;
    for u in 0..n {
        for v in u + 1..n {
            max_cost = max_cost.max(cost(u, v));
        }
    }
    // Any perfect matching outweighs any matching with one pair fewer.
    let big = (n as i64 / 2 + 1) * (max_cost + 1);
    let mate = max_weight_matching(n, |u, v| 2 * (big - cost(u, v)));
    mate.into_iter()
        .map(|m| m.expect("complete graph with dominant weights is perfectly matched"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive minimum over all (n - 1)!! perfect matchings.
    fn brute_force(n: usize, cost: &dyn Fn(usize, usize) -> i64) -> i64 {
        fn go(free: &mut Vec<usize>, cost: &dyn Fn(usize, usize) -> i64) -> i64 {
            if free.is_empty() {
                return 0;
            }
            let a = free.remove(0);
            let mut best = i64::MAX;
            for i in 0..free.len() {
                let b = free.remove(i);
                best = best.min(cost(a, b) + go(free, cost));
                free.insert(i, b);
            }
            free.insert(0, a);
            best
        }
        go(&mut (0..n).collect(), cost)
    }

    fn total(mate: &[usize], cost: &dyn Fn(usize, usize) -> i64) -> i64 {
        (0..mate.len())
            .filter(|&u| u < mate[u])
            .map(|u| cost(u, mate[u]))
            .sum()
    }

    #[test]
    fn matches_brute_force_on_random_costs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = 2 * rng.random_range(1..=5);
            let max = rng.random_range(1..=20);
            let table: Vec<i64> = (0..n * n).map(|_| rng.random_range(0..=max)).collect();
            let cost = |u: usize, v: usize| table[u.min(v) * n + u.max(v)];
            let mate = min_cost_perfect_matching(n, cost);
            for u in 0..n {
                assert_eq!(mate[mate[u]], u);
                assert_ne!(mate[u], u);
            }
            assert_eq!(total(&mate, &cost), brute_force(n, &cost));
        }
    }

    #[test]
    fn odd_cycle_needs_a_blossom() {
        // Two triangles joined by a cheap bridge.
        let cheap = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
        let cost = |u: usize, v: usize| {
            if cheap.contains(&(u.min(v), u.max(v))) {
                1
            } else {
                10
            }
        };
        let mate = min_cost_perfect_matching(6, cost);
        assert_eq!(total(&mate, &cost), 3);
        assert_eq!(mate[2], 3);
    }
}
