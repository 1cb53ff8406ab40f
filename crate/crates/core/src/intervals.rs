//! Separating and peripheral halfspaces, intervals, medians, gates and the
//! cubical embedding of an interval.

use crate::bitset::BitSet;
use crate::complex::{CubeComplex, Vertex};
use crate::error::{Error, Result};
use crate::half::HalfInt;

/// The interval `I(x, y)` together with its gate map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub x: Vertex,
    pub y: Vertex,
    pub vertices: BitSet,
    /// `gate[v]` is the nearest-point projection of `v` onto the interval.
    pub gate: Vec<u32>,
}

impl Interval {
    #[inline]
    pub fn project(&self, v: Vertex) -> Vertex {
        self.gate[v] as usize
    }

    /// Image of a vertex set under the gate map.
    pub fn project_set(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.gate.len());
        for v in set.iter() {
            out.insert(self.gate[v] as usize);
        }
        out
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(v)
    }
}

/// Coordinates of an interval inside `ℤ^k`, one axis per chain of nested
/// separating halfspaces.
#[derive(Clone, Debug)]
pub struct IntervalEmbedding {
    /// Each chain lists halfspace ids from smallest to largest.
    pub chains: Vec<Vec<usize>>,
    /// `(vertex, coordinates)` for every vertex of the interval, by vertex id.
    pub coords: Vec<(Vertex, Vec<u32>)>,
}

impl IntervalEmbedding {
    pub fn l1(a: &[u32], b: &[u32]) -> u32 {
        a.iter().zip(b).map(|(&p, &q)| p.abs_diff(q)).sum()
    }
}

impl CubeComplex {
    /// `{h : x ∉ h ∋ y}`, as a set of halfspace ids.
    pub fn separating(&self, x: Vertex, y: Vertex) -> BitSet {
        let mut out = BitSet::new(self.halfspace_count());
        for i in 0..self.hyperplane_count() {
            let (sx, sy) = (self.side_of(i, x), self.side_of(i, y));
            if sx != sy {
                out.insert(sy);
            }
        }
        out
    }

    /// `{h : x, y ∈ h*}`.
    pub fn peripheral(&self, x: Vertex, y: Vertex) -> BitSet {
        let mut out = BitSet::new(self.halfspace_count());
        for i in 0..self.hyperplane_count() {
            let sx = self.side_of(i, x);
            if sx == self.side_of(i, y) {
                out.insert(sx ^ 1);
            }
        }
        out
    }

    /// `{z : d(x,y) = d(x,z) + d(z,y)}`.
    pub fn interval_by_metric(&self, x: Vertex, y: Vertex) -> BitSet {
        let dxy = self.dist(x, y);
        let (rx, ry) = (self.dist_row(x), self.dist_row(y));
        BitSet::from_indices(
            self.vertex_count(),
            (0..self.vertex_count()).filter(|&z| rx[z] + ry[z] == dxy),
        )
    }

    /// `⋂ h*` over the peripheral halfspaces of `(x, y)`.
    pub fn interval_by_halfspaces(&self, x: Vertex, y: Vertex) -> BitSet {
        let mut out = BitSet::full(self.vertex_count());
        for h in self.peripheral(x, y).iter() {
            out.difference_with(&self.halfspace(h).vertices);
        }
        out
    }

    /// Gate of `v` onto `I(x, y)`: the vertex agreeing with `v` on every
    /// hyperplane separating `x` from `y` and with `x` on all others.
    pub fn gate(&self, x: Vertex, y: Vertex, v: Vertex) -> Vertex {
        let mut key = vec![0u64; self.sig_words()];
        self.gate_into(x, y, v, &mut key)
    }

    fn gate_into(&self, x: Vertex, y: Vertex, v: Vertex, key: &mut [u64]) -> Vertex {
        let (sx, sy, sv) = (self.signature(x), self.signature(y), self.signature(v));
        for w in 0..key.len() {
            let mask = sx[w] ^ sy[w];
            key[w] = (sv[w] & mask) | (sx[w] & !mask);
        }
        self.vertex_with_signature(key)
            .expect("gate exists in a median graph")
    }

    pub fn interval(&self, x: Vertex, y: Vertex) -> Interval {
        let vertices = self.interval_by_metric(x, y);
        debug_assert_eq!(vertices, self.interval_by_halfspaces(x, y));
        let mut key = vec![0u64; self.sig_words()];
        let gate = (0..self.vertex_count())
            .map(|v| self.gate_into(x, y, v, &mut key) as u32)
            .collect();
        Interval {
            x,
            y,
            vertices,
            gate,
        }
    }

    /// `π_I(h)` for a halfspace id `h`.
    pub fn project_set(&self, interval: &Interval, h: usize) -> BitSet {
        interval.project_set(&self.halfspace(h).vertices)
    }

    /// The unique vertex of `I(x,y) ∩ I(y,z) ∩ I(x,z)`, found by majority vote
    /// on hyperplane sides.
    pub fn median(&self, x: Vertex, y: Vertex, z: Vertex) -> Vertex {
        let (a, b, c) = (self.signature(x), self.signature(y), self.signature(z));
        let key: Vec<u64> = (0..a.len())
            .map(|w| (a[w] & b[w]) | (a[w] & c[w]) | (b[w] & c[w]))
            .collect();
        self.vertex_with_signature(&key)
            .expect("median exists in a median graph")
    }

    /// `(y.z)_x = ½(d(x,y) + d(x,z) − d(y,z))`.
    pub fn gromov_product(&self, x: Vertex, y: Vertex, z: Vertex) -> HalfInt {
        let doubled = self.dist(x, y) as i64 + self.dist(x, z) as i64 - self.dist(y, z) as i64;
        HalfInt::from_doubled(doubled)
    }

    /// Lexicographically smallest shortest path from `x` to `y`, walking back
    /// from `y` through the smallest-id predecessor.
    pub fn bfs_geodesic(&self, x: Vertex, y: Vertex) -> Vec<Vertex> {
        let rx = self.dist_row(x);
        let mut path = vec![y];
        let mut cur = y;
        while cur != x {
            cur = *self
                .neighbors(cur)
                .iter()
                .find(|&&w| rx[w] + 1 == rx[cur])
                .expect("predecessor on a shortest path");
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Largest distance from a vertex of `I(x, y)` to the geodesic
    /// [`bfs_geodesic`](Self::bfs_geodesic).
    pub fn interval_thinness(&self, x: Vertex, y: Vertex) -> u32 {
        let path = self.bfs_geodesic(x, y);
        self.interval_by_metric(x, y)
            .iter()
            .map(|v| path.iter().map(|&p| self.dist(v, p)).min().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Embeds `I(x, y)` isometrically in `ℤ^k` with `k ≤ dim`.
    ///
    /// The separating halfspaces of `(x, y)` are pairwise nested or transverse,
    /// so a minimum chain cover of their nesting order has at most `dim`
    /// chains. The cover comes from a maximum matching in the split bipartite
    /// graph of the strict order.
    pub fn embed_interval(&self, x: Vertex, y: Vertex, dim: usize) -> Result<IntervalEmbedding> {
        let rel = self.relations();
        let sep = self.separating(x, y).to_vec();
        let m = sep.len();
        let succ: Vec<Vec<usize>> = (0..m)
            .map(|a| (0..m).filter(|&b| rel.lt(sep[a], sep[b])).collect())
            .collect();
        let matched_right = max_matching(&succ, m);
        let mut next = vec![usize::MAX; m];
        let mut has_pred = vec![false; m];
        for (b, &a) in matched_right.iter().enumerate() {
            if a != usize::MAX {
                next[a] = b;
                has_pred[b] = true;
            }
        }
        let chains: Vec<Vec<usize>> = (0..m)
            .filter(|&a| !has_pred[a])
            .map(|start| {
                let mut chain = vec![sep[start]];
                let mut cur = start;
                while next[cur] != usize::MAX {
                    cur = next[cur];
                    chain.push(sep[cur]);
                }
                chain
            })
            .collect();
        if chains.len() > dim {
            return Err(Error::ChainCountExceeded {
                chains: chains.len(),
                dim,
            });
        }
        let coords = self
            .interval_by_metric(x, y)
            .iter()
            .map(|z| {
                let c = chains
                    .iter()
                    .map(|chain| {
                        chain
                            .iter()
                            .filter(|&&h| self.halfspace(h).vertices.contains(z))
                            .count() as u32
                    })
                    .collect();
                (z, c)
            })
            .collect();
        Ok(IntervalEmbedding { chains, coords })
    }
}

/// Kuhn's augmenting-path matching; returns, for each right vertex, its
/// matched left vertex or `usize::MAX`. Neighbours are tried in index order.
fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<usize> {
    fn augment(a: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [usize]) -> bool {
        for &b in &adj[a] {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            if owner[b] == usize::MAX || augment(owner[b], adj, seen, owner) {
                owner[b] = a;
                return true;
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; right];
    for a in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(a, adj, &mut seen, &mut owner);
    }
    owner
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_hypercube};

    fn path(n: usize) -> CubeComplex {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        CubeComplex::new(n, &edges).unwrap()
    }

    fn star() -> CubeComplex {
        // center 0, leaves a=1, b=2, e=3
        CubeComplex::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    // vertex (i, j) of gen_grid(2, 2)
    fn g(i: usize, j: usize) -> usize {
        i * 3 + j
    }

    #[test]
    fn separating_on_path() {
        let c = path(5);
        let s = c.separating(0, 3);
        assert_eq!(s.count(), 3);
        for h in s.iter() {
            let hs = c.halfspace(h);
            assert!(hs.vertices.contains(3) && !hs.vertices.contains(0));
        }
        assert!(c.separating(2, 2).is_empty());
    }

    #[test]
    fn square_separating_is_transverse() {
        let c = gen_hypercube(2);
        let s = c.separating(0, 3).to_vec();
        assert_eq!(s.len(), 2);
        let (a, b) = (c.halfspace(s[0]).hyperplane, c.halfspace(s[1]).hyperplane);
        assert!(c.relations().transverse(a, b));
        assert!(c.peripheral(0, 3).is_empty());
    }

    #[test]
    fn peripheral_examples() {
        let c = path(3);
        let p = c.peripheral(0, 1).to_vec();
        assert_eq!(p.len(), 1);
        assert_eq!(c.halfspace(p[0]).vertices.to_vec(), vec![2]);

        let c = star();
        let p = c.peripheral(1, 2).to_vec();
        assert_eq!(p.len(), 1);
        assert_eq!(c.halfspace(p[0]).vertices.to_vec(), vec![3]);
    }

    #[test]
    fn interval_examples() {
        assert_eq!(gen_hypercube(2).interval(0, 3).vertices.count(), 4);
        assert_eq!(path(5).interval(1, 3).vertices.to_vec(), vec![1, 2, 3]);
        let c = gen_grid(2, 2);
        let i = c.interval(g(0, 0), g(2, 1));
        let expect: Vec<usize> = (0..=2)
            .flat_map(|a| (0..=1).map(move |b| g(a, b)))
            .collect();
        let mut got = i.vertices.to_vec();
        got.sort();
        let mut expect = expect;
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn projection_examples() {
        let c = star();
        let i = c.interval(1, 2);
        assert_eq!(i.project(3), 0);
        assert_eq!(i.project(1), 1);
        let c = gen_grid(2, 2);
        let i = c.interval(g(0, 0), g(2, 0));
        assert_eq!(i.project(g(1, 2)), g(1, 0));
    }

    #[test]
    fn project_set_examples() {
        // branch {3} hangs off path vertex 1
        let c = CubeComplex::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let i = c.interval(0, 2);
        let branch = (0..c.halfspace_count())
            .find(|&h| c.halfspace(h).vertices.to_vec() == vec![3])
            .unwrap();
        assert_eq!(c.project_set(&i, branch).to_vec(), vec![1]);
        // a halfspace containing the whole interval projects onto it
        let big = branch ^ 1;
        assert_eq!(c.project_set(&i, big), i.vertices);
    }

    #[test]
    fn median_examples() {
        let c = path(5);
        assert_eq!(c.median(0, 4, 2), 2);
        assert_eq!(c.median(3, 3, 1), 3);
        let q = gen_hypercube(2);
        assert_eq!(q.median(0, 1, 2), 0);
    }

    #[test]
    fn gromov_examples() {
        let c = path(5);
        assert_eq!(c.gromov_product(0, 4, 2), HalfInt::from_int(2));
        assert_eq!(c.gromov_product(0, 3, 3), HalfInt::from_int(3));
        let q = gen_hypercube(2);
        assert_eq!(q.gromov_product(0, 3, 1), HalfInt::from_int(1));
    }

    #[test]
    fn embedding_examples() {
        let c = path(6);
        let e = c.embed_interval(0, 5, 1).unwrap();
        assert_eq!(e.chains.len(), 1);
        let coords: Vec<u32> = e.coords.iter().map(|(_, c)| c[0]).collect();
        assert_eq!(coords, vec![0, 1, 2, 3, 4, 5]);

        let q = gen_hypercube(2);
        let e = q.embed_interval(0, 3, 2).unwrap();
        assert_eq!(e.chains.len(), 2);
        let mut pts: Vec<Vec<u32>> = e.coords.iter().map(|(_, c)| c.clone()).collect();
        pts.sort();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        assert_eq!(
            q.embed_interval(0, 3, 1).unwrap_err(),
            Error::ChainCountExceeded { chains: 2, dim: 1 }
        );
    }

    #[test]
    fn degenerate_interval() {
        let c = gen_grid(2, 2);
        let i = c.interval(4, 4);
        assert_eq!(i.vertices.to_vec(), vec![4]);
        assert!(i.gate.iter().all(|&v| v == 4));
        let e = c.embed_interval(4, 4, 2).unwrap();
        assert!(e.chains.is_empty());
        assert_eq!(e.coords, vec![(4, vec![])]);
    }
}
