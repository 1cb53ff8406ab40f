//! Intersection numbers, `D`-peripheral halfspaces and cylinders `I_D(x, y)`.

use crate::bitset::BitSet;
use crate::complex::{CubeComplex, Vertex};
use crate::half::HalfInt;
use crate::intervals::Interval;

/// `C(x, y) = I_D(x, y)` with the halfspaces that cut it out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub x: Vertex,
    pub y: Vertex,
    pub grid_d: usize,
    pub vertices: BitSet,
    /// The `D`-peripheral halfspaces of `(x, y)`.
    pub defining_set: BitSet,
}

impl CubeComplex {
    /// Length of the longest pencil `k₁ < … < k_n` inside `set` whose
    /// hyperplanes all cross `ĥ`.
    pub fn intersection_number(&self, h: usize, set: &BitSet) -> usize {
        let hyp = self.halfspace(h).hyperplane;
        let cand = set.intersection(self.relations().crossing_halfspaces(hyp));
        self.longest_chain(&cand)
    }

    /// Longest strictly nested chain within a set of halfspaces.
    pub fn longest_chain(&self, set: &BitSet) -> usize {
        let rel = self.relations();
        let mut cand: Vec<usize> = set.to_vec();
        cand.sort_by_key(|&k| (self.halfspace(k).vertices.count(), k));
        let mut best = vec![0usize; cand.len()];
        for i in 0..cand.len() {
            best[i] = 1
                + (0..i)
                    .filter(|&j| rel.lt(cand[j], cand[i]))
                    .map(|j| best[j])
                    .max()
                    .unwrap_or(0);
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// `{h peripheral to (x,y) : i(h, separating(x,y)) ≤ D}`.
    pub fn d_peripheral(&self, x: Vertex, y: Vertex, grid_d: usize) -> BitSet {
        let sep = self.separating(x, y);
        let mut out = self.peripheral(x, y);
        for h in out.clone().iter() {
            if self.intersection_number(h, &sep) > grid_d {
                out.remove(h);
            }
        }
        out
    }

    /// `⋂ h*` over a set of halfspaces.
    pub fn complement_intersection(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.vertex_count());
        for h in set.iter() {
            out.difference_with(&self.halfspace(h).vertices);
        }
        out
    }

    pub fn cylinder(&self, x: Vertex, y: Vertex, grid_d: usize) -> Cylinder {
        let defining_set = self.d_peripheral(x, y, grid_d);
        Cylinder {
            x,
            y,
            grid_d,
            vertices: self.complement_intersection(&defining_set),
            defining_set,
        }
    }

    /// `max {d(x, a) : a ∈ set}`; 0 for the empty set.
    pub fn d_max(&self, x: Vertex, set: &BitSet) -> u32 {
        let row = self.dist_row(x);
        set.iter().map(|v| row[v]).max().unwrap_or(0)
    }

    /// `D`-peripheral halfspaces whose projection to `I(x, y)` lies strictly
    /// within `rho` of `x`.
    pub fn d_peripheral_truncated(
        &self,
        x: Vertex,
        y: Vertex,
        grid_d: usize,
        rho: HalfInt,
    ) -> BitSet {
        let interval = self.interval(x, y);
        let mut out = self.d_peripheral(x, y, grid_d);
        for h in out.clone().iter() {
            let proj = self.project_set(&interval, h);
            if 2 * self.d_max(x, &proj) as i64 >= rho.doubled() {
                out.remove(h);
            }
        }
        out
    }

    /// Distance from `v` to a nonempty vertex set.
    pub fn dist_to_set(&self, v: Vertex, set: &BitSet) -> u32 {
        let row = self.dist_row(v);
        set.iter().map(|u| row[u]).min().expect("nonempty set")
    }
}

/// A `D`-peripheral halfspace with its projection onto the interval.
#[derive(Clone, Debug)]
pub(crate) struct Projection {
    pub h: usize,
    pub set: BitSet,
    pub d_max: u32,
}

/// Everything the stability checks need about one ordered pair `(x, y)`.
#[derive(Clone, Debug)]
pub(crate) struct PairData {
    pub interval: Interval,
    pub dper: BitSet,
    pub cylinder: BitSet,
    pub projections: Vec<Projection>,
}

impl PairData {
    pub fn new(c: &CubeComplex, x: Vertex, y: Vertex, grid_d: usize) -> Self {
        let interval = c.interval(x, y);
        let dper = c.d_peripheral(x, y, grid_d);
        let cylinder = c.complement_intersection(&dper);
        let projections = dper
            .iter()
            .map(|h| {
                let set = c.project_set(&interval, h);
                let d_max = c.d_max(x, &set);
                Projection { h, set, d_max }
            })
            .collect();
        PairData {
            interval,
            dper,
            cylinder,
            projections,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_hypercube, gen_tree};

    fn g(i: usize, j: usize) -> usize {
        i * 3 + j
    }

    #[test]
    fn intersection_number_examples() {
        let c = gen_grid(2, 2);
        assert_eq!(
            c.intersection_number(0, &BitSet::new(c.halfspace_count())),
            0
        );
        // bottom-row pair: both vertical separating halfspaces
        let sep = c.separating(g(0, 0), g(2, 0));
        assert_eq!(sep.count(), 2);
        let horizontal = (0..c.halfspace_count())
            .find(|&h| {
                let v = &c.halfspace(h).vertices;
                v.contains(g(0, 0)) && v.contains(g(2, 0)) && !v.contains(g(0, 2))
            })
            .unwrap();
        assert_eq!(c.intersection_number(horizontal, &sep), 2);

        let t = gen_tree(10, 4);
        let all = BitSet::full(t.halfspace_count());
        for h in 0..t.halfspace_count() {
            assert_eq!(t.intersection_number(h, &all), 0);
        }
    }

    #[test]
    fn tree_cylinders_are_geodesics() {
        let t = gen_tree(12, 9);
        for x in 0..12 {
            for y in 0..12 {
                assert_eq!(t.d_peripheral(x, y, 0), t.peripheral(x, y));
                assert_eq!(t.cylinder(x, y, 0).vertices, t.interval_by_metric(x, y));
            }
        }
    }

    #[test]
    fn degenerate_pair() {
        let c = gen_grid(2, 2);
        let dp = c.d_peripheral(4, 4, 2);
        let expect = BitSet::from_indices(
            c.halfspace_count(),
            (0..c.halfspace_count()).filter(|&h| !c.halfspace(h).vertices.contains(4)),
        );
        assert_eq!(dp, expect);
        assert_eq!(c.cylinder(4, 4, 2).vertices.to_vec(), vec![4]);
    }

    #[test]
    fn square_cylinder_is_everything() {
        let q = gen_hypercube(2);
        let cyl = q.cylinder(0, 3, 1);
        assert!(cyl.defining_set.is_empty());
        assert_eq!(cyl.vertices.count(), 4);
    }

    #[test]
    fn truncation_examples() {
        // path 0-1-2-3-4 with a leaf 5 attached at 2
        let c = CubeComplex::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap();
        let leaf = (0..c.halfspace_count())
            .find(|&h| c.halfspace(h).vertices.to_vec() == vec![5])
            .unwrap();
        let tr = c.d_peripheral_truncated(0, 4, 0, HalfInt::from_int(3));
        assert!(tr.contains(leaf));
        let tr = c.d_peripheral_truncated(0, 4, 0, HalfInt::from_int(2));
        assert!(!tr.contains(leaf));
        assert!(c.d_peripheral_truncated(0, 4, 0, HalfInt::ZERO).is_empty());
        // beyond d(x,y) + Dd every D-peripheral halfspace survives
        let far = HalfInt::from_int(c.dist(0, 4) as i64 + 1);
        assert_eq!(
            c.d_peripheral_truncated(0, 4, 0, far),
            c.d_peripheral(0, 4, 0)
        );
    }
}
