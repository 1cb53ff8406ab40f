//! Deterministic test complexes.
//!
//! Randomised generators draw from ChaCha8 seeded with a `u64`, which is
//! reproducible across platforms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::complex::{CubeComplex, Edge, Vertex};
use crate::error::{Error, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: &[Edge]) -> CubeComplex {
    CubeComplex::new(n, edges).expect("generator output is a median graph")
}

/// Random labelled tree on `n` vertices, decoded from a seeded Prüfer sequence.
pub fn tree_edges(n: usize, seed: u64) -> Vec<Edge> {
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let mut r = rng(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| r.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &code {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &code {
        let leaf = leaves.pop_first().expect("a leaf");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let a = leaves.pop_first().unwrap();
    let b = leaves.pop_first().unwrap();
    edges.push((a, b));
    edges
}

pub fn gen_tree(n: usize, seed: u64) -> CubeComplex {
    build(n.max(1), &tree_edges(n, seed))
}

pub fn hypercube_edges(d: u32) -> Vec<Edge> {
    let n = 1usize << d;
    (0..n)
        .flat_map(|v| (0..d).map(move |i| (v, v ^ (1 << i))))
        .filter(|&(a, b)| a < b)
        .collect()
}

/// `Q_d`; vertex ids are the bit vectors.
pub fn gen_hypercube(d: u32) -> CubeComplex {
    assert!(
        (1..=12).contains(&d),
        "hypercube dimension must be in 1..=12"
    );
    build(1 << d, &hypercube_edges(d))
}

/// Vertex `(i, j)` of the `(m+1) × (n+1)` grid has id `i·(n+1) + j`.
pub fn grid_edges(m: usize, n: usize) -> Vec<Edge> {
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let mut edges = Vec::new();
    for i in 0..=m {
        for j in 0..=n {
            if i < m {
                edges.push((id(i, j), id(i + 1, j)));
            }
            if j < n {
                edges.push((id(i, j), id(i, j + 1)));
            }
        }
    }
    edges
}

pub fn gen_grid(m: usize, n: usize) -> CubeComplex {
    assert!(m >= 1 && n >= 1);
    build((m + 1) * (n + 1), &grid_edges(m, n))
}

/// Lattice points `(i, j) ∈ [0,n]²` with `|i − j| ≤ width`, in lexicographic order.
pub fn band_vertices(n: usize, width: usize) -> Vec<(usize, usize)> {
    (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| i.abs_diff(j) <= width)
        .collect()
}

/// Unit-distance edges between the band's lattice points.
pub fn band_edges(n: usize, width: usize) -> (usize, Vec<Edge>) {
    let verts = band_vertices(n, width);
    let index: HashMap<(usize, usize), usize> =
        verts.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut edges = Vec::new();
    for (k, &(i, j)) in verts.iter().enumerate() {
        for q in [(i + 1, j), (i, j + 1)] {
            if let Some(&l) = index.get(&q) {
                edges.push((k, l));
            }
        }
    }
    (verts.len(), edges)
}

/// Diagonal band of width `width` along `[0,n]²`; width 1 is the staircase.
pub fn gen_band(n: usize, width: usize) -> CubeComplex {
    assert!(n >= 1);
    let (count, edges) = band_edges(n, width);
    build(count, &edges)
}

/// `{(i, j) ∈ [0,n]² : |i − j| ≤ 1}`: `n` unit squares glued corner to corner.
pub fn gen_staircase(n: usize) -> CubeComplex {
    gen_band(n, 1)
}

/// The flip `(i, j) ↦ (j, i)` of a band, as a vertex permutation.
pub fn band_flip(n: usize, width: usize) -> Vec<Vertex> {
    let verts = band_vertices(n, width);
    let index: HashMap<(usize, usize), usize> =
        verts.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    verts.iter().map(|&(i, j)| index[&(j, i)]).collect()
}

/// The half-turn `(i, j) ↦ (n − i, n − j)` of a band.
pub fn band_half_turn(n: usize, width: usize) -> Vec<Vertex> {
    let verts = band_vertices(n, width);
    let index: HashMap<(usize, usize), usize> =
        verts.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    verts.iter().map(|&(i, j)| index[&(n - i, n - j)]).collect()
}

/// Quarter turn `(i, j) ↦ (j, m − i)` of the square grid `gen_grid(m, m)`.
pub fn grid_rotation(m: usize) -> Vec<Vertex> {
    let id = |i: usize, j: usize| i * (m + 1) + j;
    let mut perm = vec![0; (m + 1) * (m + 1)];
    for i in 0..=m {
        for j in 0..=m {
            perm[id(i, j)] = id(j, m - i);
        }
    }
    perm
}

/// Reflection `(i, j) ↦ (m − i, j)` of `gen_grid(m, n)`.
pub fn grid_reflection(m: usize, n: usize) -> Vec<Vertex> {
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let mut perm = vec![0; (m + 1) * (n + 1)];
    for i in 0..=m {
        for j in 0..=n {
            perm[id(i, j)] = id(m - i, j);
        }
    }
    perm
}

/// Automorphism of `Q_d` that flips bit `flip` and swaps bits `swap`.
pub fn hypercube_symmetry(d: u32, flip: usize, swap: (u32, u32)) -> Vec<Vertex> {
    let (a, b) = swap;
    (0..1usize << d)
        .map(|v| {
            let (ba, bb) = ((v >> a) & 1, (v >> b) & 1);
            let mut w = v & !(1 << a) & !(1 << b);
            w |= ba << b | bb << a;
            w ^ flip
        })
        .collect()
}

/// A halfspace literal of an abstract pocset: side `positive` of wall `wall`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub wall: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(wall: usize) -> Self {
        Literal {
            wall,
            positive: true,
        }
    }

    pub fn neg(wall: usize) -> Self {
        Literal {
            wall,
            positive: false,
        }
    }

    pub fn complement(self) -> Self {
        Literal {
            wall: self.wall,
            positive: !self.positive,
        }
    }

    fn index(self) -> usize {
        2 * self.wall + usize::from(!self.positive)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.wall)
    }
}

/// An abstract finite pocset: walls, and relations `a ≤ b` between literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PocsetSpec {
    pub pairs: usize,
    pub order: Vec<(Literal, Literal)>,
    /// Orientation given the vertex id 0 in the dual, if any. `true` picks the
    /// positive literal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<bool>>,
}

pub const MAX_WALLS: usize = 20;

impl PocsetSpec {
    /// Reflexive-transitive closure of the order, closed under `a ≤ b ⇒ b* ≤ a*`.
    /// `closure[a]` holds the literal indices `b` with `a ≤ b`.
    pub fn closure(&self) -> Result<Vec<BitSet>> {
        let lits = 2 * self.pairs;
        let mut up = vec![BitSet::new(lits); lits];
        for (a, row) in up.iter_mut().enumerate() {
            row.insert(a);
        }
        for &(a, b) in &self.order {
            if a.wall >= self.pairs || b.wall >= self.pairs {
                return Err(Error::InconsistentSpec(format!(
                    "relation {a} <= {b} names a wall outside 0..{}",
                    self.pairs
                )));
            }
            up[a.index()].insert(b.index());
            up[b.complement().index()].insert(a.complement().index());
        }
        for k in 0..lits {
            let via = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&via);
                }
            }
        }
        for a in 0..lits {
            let lit = literal_of(a);
            if up[a].contains(a ^ 1) {
                return Err(Error::InconsistentSpec(format!(
                    "{lit} <= {} is forced",
                    lit.complement()
                )));
            }
            if let Some(b) = up[a].iter().find(|&b| b != a && up[b].contains(a)) {
                return Err(Error::InconsistentSpec(format!(
                    "{lit} and {} are forced equal",
                    literal_of(b)
                )));
            }
        }
        Ok(up)
    }

    /// All consistent orientations as bit masks (bit `w` set = negative side
    /// of wall `w`), sorted, with `base` moved to the front when given.
    pub fn orientations(&self) -> Result<Vec<u32>> {
        if self.pairs > MAX_WALLS {
            return Err(Error::TooManyPairs {
                pairs: self.pairs,
                max: MAX_WALLS,
            });
        }
        let up = self.closure()?;
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(self.pairs);
        orient(&up, self.pairs, &mut chosen, &mut out);
        out.sort_unstable();
        if let Some(base) = &self.base {
            if base.len() != self.pairs {
                return Err(Error::InconsistentSpec(
                    "base orientation has the wrong length".into(),
                ));
            }
            let mask = base
                .iter()
                .enumerate()
                .fold(0u32, |m, (w, &p)| if p { m } else { m | 1 << w });
            let pos = out.iter().position(|&o| o == mask).ok_or_else(|| {
                Error::InconsistentSpec("base orientation is not consistent".into())
            })?;
            out[..=pos].rotate_right(1);
        }
        Ok(out)
    }
}

fn literal_of(index: usize) -> Literal {
    Literal {
        wall: index / 2,
        positive: index.is_multiple_of(2),
    }
}

fn orient(up: &[BitSet], walls: usize, chosen: &mut Vec<usize>, out: &mut Vec<u32>) {
    let w = chosen.len();
    if w == walls {
        out.push(
            chosen
                .iter()
                .enumerate()
                .fold(0, |m, (w, &l)| m | ((l as u32 & 1) << w)),
        );
        return;
    }
    for lit in [2 * w, 2 * w + 1] {
        // an orientation is an up-closed choice: no chosen c with c ≤ lit*,
        // and lit itself must not lie below the complement of a chosen c
        let ok = chosen
            .iter()
            .all(|&c| !up[c].contains(lit ^ 1) && !up[lit].contains(c ^ 1));
        if ok {
            chosen.push(lit);
            orient(up, walls, chosen, out);
            chosen.pop();
        }
    }
}

/// Dual cube complex of a finite pocset: one vertex per consistent
/// orientation, edges between orientations differing on a single wall.
pub fn sageev_dual(spec: &PocsetSpec) -> Result<CubeComplex> {
    let masks = spec.orientations()?;
    let index: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut edges = Vec::new();
    for (i, &m) in masks.iter().enumerate() {
        for w in 0..spec.pairs {
            if let Some(&j) = index.get(&(m ^ (1 << w))) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    CubeComplex::new(masks.len(), &edges)
}

/// The pocset of a complex: one wall per hyperplane, the positive literal
/// being the side containing vertex 0.
pub fn pocset_of(c: &CubeComplex) -> PocsetSpec {
    let rel = c.relations();
    let lit = |h: usize| Literal {
        wall: h / 2,
        positive: h.is_multiple_of(2),
    };
    let mut order = Vec::new();
    for h in 0..c.halfspace_count() {
        for k in rel.up_set(h).iter() {
            if k / 2 != h / 2 {
                order.push((lit(h), lit(k)));
            }
        }
    }
    PocsetSpec {
        pairs: c.hyperplane_count(),
        order,
        base: Some(vec![true; c.hyperplane_count()]),
    }
}

/// Random pocset on `walls` walls: each pair of walls receives, with
/// probability `density`, a random nesting relation, kept only when the
/// closure stays consistent.
pub fn random_pocset(walls: usize, density: f64, seed: u64) -> PocsetSpec {
    let mut r = rng(seed);
    let mut spec = PocsetSpec {
        pairs: walls,
        order: Vec::new(),
        base: None,
    };
    for i in 0..walls {
        for j in i + 1..walls {
            if !r.gen_bool(density) {
                continue;
            }
            let a = Literal {
                wall: i,
                positive: r.gen_bool(0.5),
            };
            let b = Literal {
                wall: j,
                positive: r.gen_bool(0.5),
            };
            let rel = if r.gen_bool(0.5) { (a, b) } else { (b, a) };
            spec.order.push(rel);
            if spec.closure().is_err() {
                spec.order.pop();
            }
        }
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolicity::{dimension, max_grid_size};

    #[test]
    fn trees() {
        assert_eq!(gen_tree(1, 0).vertex_count(), 1);
        let t = gen_tree(2, 0);
        assert_eq!(t.edges(), &[(0, 1)]);
        let t = gen_tree(5, 1);
        assert_eq!(t.edges().len(), 4);
        assert_eq!(gen_tree(5, 1).edges(), t.edges());
        assert_eq!(max_grid_size(&gen_tree(30, 5)).0, 0);
        assert_eq!(dimension(&gen_tree(30, 5)), 1);
    }

    #[test]
    fn hypercubes() {
        let q = gen_hypercube(1);
        assert_eq!(q.edges(), &[(0, 1)]);
        let q = gen_hypercube(2);
        assert_eq!(max_grid_size(&q).0, 1);
        let q = gen_hypercube(3);
        assert_eq!(dimension(&q), 3);
        assert_eq!(q.hyperplane_count(), 3);
    }

    #[test]
    fn grids() {
        assert_eq!(gen_grid(1, 1).edges(), gen_hypercube(2).edges());
        assert_eq!(max_grid_size(&gen_grid(2, 2)).0, 2);
        assert_eq!(max_grid_size(&gen_grid(3, 2)).0, 2);
    }

    #[test]
    fn staircases() {
        assert_eq!(gen_staircase(1).edges(), gen_hypercube(2).edges());
        let s = gen_staircase(4);
        assert_eq!(s.vertex_count(), 13);
        assert_eq!(dimension(&s), 2);
        assert_eq!(
            max_grid_size(&gen_staircase(2)).0,
            max_grid_size(&gen_staircase(6)).0
        );
    }

    #[test]
    fn symmetries_are_automorphisms() {
        let s = gen_staircase(5);
        s.check_automorphism(&band_flip(5, 1)).unwrap();
        s.check_automorphism(&band_half_turn(5, 1)).unwrap();
        gen_grid(3, 3)
            .check_automorphism(&grid_rotation(3))
            .unwrap();
        gen_grid(3, 2)
            .check_automorphism(&grid_reflection(3, 2))
            .unwrap();
        gen_hypercube(4)
            .check_automorphism(&hypercube_symmetry(4, 0b1010, (0, 3)))
            .unwrap();
        gen_band(6, 2).check_automorphism(&band_flip(6, 2)).unwrap();
    }

    #[test]
    fn dual_of_free_pocset_is_square() {
        let spec = PocsetSpec {
            pairs: 2,
            ..Default::default()
        };
        let c = sageev_dual(&spec).unwrap();
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.edges().len(), 4);
        assert_eq!(c.hyperplane_count(), 2);
    }

    #[test]
    fn dual_of_chain_is_path() {
        let spec = PocsetSpec {
            pairs: 2,
            order: vec![(Literal::pos(0), Literal::pos(1))],
            base: None,
        };
        let c = sageev_dual(&spec).unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.edges().len(), 2);
        assert_eq!(c.diameter(), 2);
    }

    #[test]
    fn inconsistent_spec() {
        // h ≤ k and k* ≤ h force k* ≤ k
        let spec = PocsetSpec {
            pairs: 2,
            order: vec![
                (Literal::pos(0), Literal::pos(1)),
                (Literal::neg(1), Literal::pos(0)),
            ],
            base: None,
        };
        assert!(matches!(
            sageev_dual(&spec),
            Err(Error::InconsistentSpec(_))
        ));
        let spec = PocsetSpec {
            pairs: 21,
            ..Default::default()
        };
        assert_eq!(
            sageev_dual(&spec).unwrap_err(),
            Error::TooManyPairs { pairs: 21, max: 20 }
        );
    }

    #[test]
    fn base_orientation_becomes_vertex_zero() {
        let spec = PocsetSpec {
            pairs: 2,
            order: vec![(Literal::pos(0), Literal::pos(1))],
            base: Some(vec![false, false]),
        };
        assert_eq!(spec.orientations().unwrap()[0], 0b11);
    }
}
