//! Brute-force reference implementations, built from the edge list alone.
#![allow(dead_code)]

use std::collections::HashMap;

use cubecyl::generators::{
    gen_band, gen_grid, gen_hypercube, gen_staircase, gen_tree, random_pocset, sageev_dual,
};
use cubecyl::{CubeComplex, Edge};

pub type VSet = Vec<bool>;

pub struct Brute {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub dist: Vec<Vec<u32>>,
    /// Every halfspace as a vertex set, sorted.
    pub halfspaces: Vec<VSet>,
    index: HashMap<VSet, usize>,
}

impl Brute {
    pub fn new(c: &CubeComplex) -> Self {
        let n = c.vertex_count();
        let edges = c.edges().to_vec();
        let inf = u32::MAX / 4;
        let mut dist = vec![vec![inf; n]; n];
        for (v, row) in dist.iter_mut().enumerate() {
            row[v] = 0;
        }
        for &(a, b) in &edges {
            dist[a][b] = 1;
            dist[b][a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        // W(a, b) = {v : d(v, a) < d(v, b)}
        let mut halfspaces: Vec<VSet> = edges
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .map(|(a, b)| (0..n).map(|v| dist[v][a] < dist[v][b]).collect())
            .collect();
        halfspaces.sort();
        halfspaces.dedup();
        let index = halfspaces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, h)| (h, i))
            .collect();
        Brute {
            n,
            edges,
            dist,
            halfspaces,
            index,
        }
    }

    /// Brute index of a halfspace of `c`.
    pub fn index_of(&self, c: &CubeComplex, h: usize) -> usize {
        let set: VSet = (0..self.n)
            .map(|v| c.halfspace(h).vertices.contains(v))
            .collect();
        self.index[&set]
    }

    pub fn complement(&self, h: usize) -> usize {
        let set: VSet = self.halfspaces[h].iter().map(|&b| !b).collect();
        self.index[&set]
    }

    pub fn interval(&self, x: usize, y: usize) -> VSet {
        (0..self.n)
            .map(|z| self.dist[x][z] + self.dist[z][y] == self.dist[x][y])
            .collect()
    }

    pub fn medians(&self, x: usize, y: usize, z: usize) -> Vec<usize> {
        let d = &self.dist;
        (0..self.n)
            .filter(|&m| {
                d[x][m] + d[m][y] == d[x][y]
                    && d[y][m] + d[m][z] == d[y][z]
                    && d[x][m] + d[m][z] == d[x][z]
            })
            .collect()
    }

    /// All vertices of `set` at minimal distance from `v`.
    pub fn nearest(&self, set: &VSet, v: usize) -> Vec<usize> {
        let best = (0..self.n)
            .filter(|&u| set[u])
            .map(|u| self.dist[v][u])
            .min()
            .unwrap();
        (0..self.n)
            .filter(|&u| set[u] && self.dist[v][u] == best)
            .collect()
    }

    pub fn delta_doubled(&self) -> i64 {
        let d = &self.dist;
        let n = self.n;
        let mut best = 0i64;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for e in c + 1..n {
                        let mut s = [d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]];
                        s.sort_unstable();
                        best = best.max((s[2] - s[1]) as i64);
                    }
                }
            }
        }
        best
    }

    /// Strict inclusion of vertex sets.
    pub fn nested(&self, h: usize, k: usize) -> bool {
        let (a, b) = (&self.halfspaces[h], &self.halfspaces[k]);
        h != k && a.iter().zip(b).all(|(&p, &q)| !p || q)
    }

    /// All four sides intersect.
    pub fn crosses(&self, h: usize, k: usize) -> bool {
        let (a, b) = (&self.halfspaces[h], &self.halfspaces[k]);
        [(true, true), (true, false), (false, true), (false, false)]
            .iter()
            .all(|&(p, q)| (0..self.n).any(|v| a[v] == p && b[v] == q))
    }

    /// Longest strictly nested chain within `cands`, by exhaustive search.
    pub fn longest_chain(&self, cands: &[usize]) -> usize {
        fn extend(b: &Brute, cands: &[usize], last: usize) -> usize {
            cands
                .iter()
                .filter(|&&k| b.nested(last, k))
                .map(|&k| 1 + extend(b, cands, k))
                .max()
                .unwrap_or(0)
        }
        cands
            .iter()
            .map(|&h| 1 + extend(self, cands, h))
            .max()
            .unwrap_or(0)
    }

    pub fn intersection_number(&self, h: usize, set: &[usize]) -> usize {
        let cands: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&k| self.crosses(h, k))
            .collect();
        self.longest_chain(&cands)
    }

    pub fn peripheral(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&h| !self.halfspaces[h][x] && !self.halfspaces[h][y])
            .collect()
    }

    pub fn separating(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&h| !self.halfspaces[h][x] && self.halfspaces[h][y])
            .collect()
    }

    pub fn d_peripheral(&self, x: usize, y: usize, grid_d: usize) -> Vec<usize> {
        let sep = self.separating(x, y);
        self.peripheral(x, y)
            .into_iter()
            .filter(|&h| self.intersection_number(h, &sep) <= grid_d)
            .collect()
    }

    pub fn cylinder(&self, x: usize, y: usize, grid_d: usize) -> VSet {
        let dp = self.d_peripheral(x, y, grid_d);
        (0..self.n)
            .map(|v| dp.iter().all(|&h| !self.halfspaces[h][v]))
            .collect()
    }

    /// Every nested chain, each listed once per orientation.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        fn grow(b: &Brute, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(chain.clone());
            let last = *chain.last().unwrap();
            for k in 0..b.halfspaces.len() {
                if b.nested(last, k) {
                    chain.push(k);
                    grow(b, chain, out);
                    chain.pop();
                }
            }
        }
        let mut out = Vec::new();
        for h in 0..self.halfspaces.len() {
            grow(self, &mut vec![h], &mut out);
        }
        out
    }

    /// Largest `m` with two pencils of length `m` crossing pairwise.
    pub fn max_grid(&self) -> usize {
        self.chains()
            .iter()
            .map(|a| {
                let cross: Vec<usize> = (0..self.halfspaces.len())
                    .filter(|&k| a.iter().all(|&h| self.crosses(h, k)))
                    .collect();
                a.len().min(self.longest_chain(&cross))
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest family of pairwise crossing hyperplanes.
    pub fn dimension(&self) -> usize {
        // one halfspace per hyperplane: those not containing vertex 0
        let reps: Vec<usize> = (0..self.halfspaces.len())
            .filter(|&h| !self.halfspaces[h][0])
            .collect();
        fn grow(b: &Brute, reps: &[usize], clique: &mut Vec<usize>, from: usize) -> usize {
            let mut best = clique.len();
            for i in from..reps.len() {
                if clique.iter().all(|&h| b.crosses(h, reps[i])) {
                    clique.push(reps[i]);
                    best = best.max(grow(b, reps, clique, i + 1));
                    clique.pop();
                }
            }
            best
        }
        grow(self, &reps, &mut Vec::new(), 0)
    }

    pub fn to_indices(set: &VSet) -> Vec<usize> {
        (0..set.len()).filter(|&v| set[v]).collect()
    }
}

/// A named complex with what the suite knows about it in advance.
pub struct Member {
    pub name: String,
    pub c: CubeComplex,
}

fn member(name: impl Into<String>, c: CubeComplex) -> Member {
    Member {
        name: name.into(),
        c,
    }
}

/// Small complexes for oracle comparisons.
pub fn small_suite() -> Vec<Member> {
    let mut out = Vec::new();
    for (n, seed) in [(1, 0), (2, 0), (5, 1), (9, 2), (13, 3)] {
        out.push(member(format!("tree({n},{seed})"), gen_tree(n, seed)));
    }
    for d in 1..=4 {
        out.push(member(format!("Q{d}"), gen_hypercube(d)));
    }
    for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 2)] {
        out.push(member(format!("grid({m},{n})"), gen_grid(m, n)));
    }
    for n in 1..=5 {
        out.push(member(format!("staircase({n})"), gen_staircase(n)));
    }
    out.push(member("band(4,2)", gen_band(4, 2)));
    for (walls, density, seed) in [(5, 0.3, 1), (6, 0.5, 2), (7, 0.4, 3), (8, 0.6, 4)] {
        let c = sageev_dual(&random_pocset(walls, density, seed)).unwrap();
        if c.vertex_count() <= 40 {
            out.push(member(format!("sageev({walls},{density},{seed})"), c));
        }
    }
    out
}
