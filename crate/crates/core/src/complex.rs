//! Finite CAT(0) cube complexes, represented by their 1-skeleton.
//!
//! A [`CubeComplex`] is built from a vertex count and an edge list. Building
//! checks that the graph is a median graph, then extracts the hyperplanes
//! (Djoković–Winkler classes), the two halfspaces of each hyperplane, and the
//! nesting/crossing relations between them.
//!
//! Halfspace ids are laid out so that hyperplane `i` owns halfspaces `2i` and
//! `2i + 1`; `2i` is always the side containing vertex 0, and the complement
//! of halfspace `h` is `h ^ 1`.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub id: usize,
    /// Edges dual to this hyperplane, each `(u, v)` with `u < v`, sorted.
    pub edges: Vec<Edge>,
    /// Halfspace ids `[2 * id, 2 * id + 1]`; the first contains vertex 0.
    pub sides: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub id: usize,
    pub vertices: BitSet,
    pub complement: usize,
    pub hyperplane: usize,
}

/// Nesting order and transversality on the pocset of halfspaces.
#[derive(Clone, Debug)]
pub struct PocsetRelations {
    /// `up[h]` = halfspaces `k` with `h ⊆ k` (including `h` itself).
    up: Vec<BitSet>,
    /// `transverse[i]` = hyperplanes crossing hyperplane `i`.
    transverse: Vec<BitSet>,
    /// `crossing[i]` = halfspaces whose hyperplane crosses hyperplane `i`.
    crossing: Vec<BitSet>,
}

impl PocsetRelations {
    /// `h ≤ k`: vertex-set inclusion.
    #[inline]
    pub fn leq(&self, h: usize, k: usize) -> bool {
        self.up[h].contains(k)
    }

    /// Strict nesting `h < k`.
    #[inline]
    pub fn lt(&self, h: usize, k: usize) -> bool {
        h != k && self.up[h].contains(k)
    }

    /// Halfspaces containing `h`.
    pub fn up_set(&self, h: usize) -> &BitSet {
        &self.up[h]
    }

    /// `ĥ ⋔ k̂` for hyperplane ids.
    #[inline]
    pub fn transverse(&self, a: usize, b: usize) -> bool {
        self.transverse[a].contains(b)
    }

    pub fn transverse_set(&self, hyperplane: usize) -> &BitSet {
        &self.transverse[hyperplane]
    }

    /// All halfspaces bounded by a hyperplane that crosses `hyperplane`.
    pub fn crossing_halfspaces(&self, hyperplane: usize) -> &BitSet {
        &self.crossing[hyperplane]
    }
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
    dist: Vec<u32>,
    hyperplanes: Vec<Hyperplane>,
    halfspaces: Vec<Halfspace>,
    relations: PocsetRelations,
    sig_words: usize,
    signatures: Vec<u64>,
    by_signature: HashMap<Box<[u64]>, u32>,
}

/// Checks the edge list and returns it canonicalised (each pair ascending, sorted).
fn canonical_edges(n: usize, edges: &[Edge]) -> Result<Vec<Edge>> {
    let mut out = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::MalformedEdge(a, b, "endpoint out of range"));
        }
        if a == b {
            return Err(Error::MalformedEdge(a, b, "loop"));
        }
        out.push((a.min(b), a.max(b)));
    }
    out.sort_unstable();
    if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::MalformedEdge(w[0].0, w[0].1, "duplicate"));
    }
    Ok(out)
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    adj
}

/// Breadth-first distances from `src`; `u32::MAX` marks unreachable vertices.
pub(crate) fn bfs(adj: &[Vec<Vertex>], src: Vertex, out: &mut [u32]) {
    out.fill(u32::MAX);
    let mut queue = VecDeque::new();
    out[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = out[u];
        for &w in &adj[u] {
            if out[w] == u32::MAX {
                out[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
}

fn all_pairs_distances(adj: &[Vec<Vertex>]) -> Result<Vec<u32>> {
    let n = adj.len();
    let mut dist = vec![0u32; n * n];
    dist.par_chunks_mut(n)
        .enumerate()
        .for_each(|(src, row)| bfs(adj, src, row));
    if let Some(v) = dist[..n].iter().position(|&d| d == u32::MAX) {
        return Err(Error::Disconnected { unreachable: v });
    }
    Ok(dist)
}

fn connected_within(adj: &[Vec<Vertex>], side: &BitSet) -> bool {
    let Some(start) = side.first() else {
        return false;
    };
    let mut seen = BitSet::new(adj.len());
    seen.insert(start);
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if side.contains(w) && !seen.contains(w) {
                seen.insert(w);
                count += 1;
                stack.push(w);
            }
        }
    }
    count == side.count()
}

/// Splits the edges of a connected graph into Djoković–Winkler classes.
///
/// For an unassigned edge `uv` the class is the cut between
/// `W(u,v) = {w : d(w,u) < d(w,v)}` and `W(v,u)`. The split is rejected when
/// the graph is not bipartite, when a cut edge was already claimed by another
/// class, or when a side is disconnected. The returned halfspaces are the two
/// sides, with `2i` containing vertex 0.
pub fn hyperplane_classes(
    n: usize,
    edges: &[Edge],
    adj: &[Vec<Vertex>],
    dist: &[u32],
) -> Result<(Vec<Hyperplane>, Vec<Halfspace>)> {
    let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut class_of = vec![usize::MAX; edges.len()];
    let mut hyperplanes = Vec::new();
    let mut halfspaces = Vec::new();

    for (ei, &(u, v)) in edges.iter().enumerate() {
        if class_of[ei] != usize::MAX {
            continue;
        }
        let id = hyperplanes.len();
        let (du, dv) = (&dist[u * n..(u + 1) * n], &dist[v * n..(v + 1) * n]);
        let mut side_u = BitSet::new(n);
        for w in 0..n {
            match du[w].cmp(&dv[w]) {
                std::cmp::Ordering::Less => side_u.insert(w),
                std::cmp::Ordering::Greater => {}
                std::cmp::Ordering::Equal => return Err(Error::SeparationFailure(u, v)),
            }
        }
        let side_v = side_u.complement();
        let mut class = Vec::new();
        for a in side_u.iter() {
            for &b in &adj[a] {
                if side_v.contains(b) {
                    let e = (a.min(b), a.max(b));
                    let j = index[&e];
                    if class_of[j] != usize::MAX {
                        return Err(Error::SeparationFailure(u, v));
                    }
                    class_of[j] = id;
                    class.push(e);
                }
            }
        }
        if !connected_within(adj, &side_u) || !connected_within(adj, &side_v) {
            return Err(Error::SeparationFailure(u, v));
        }
        class.sort_unstable();
        let (base, other) = if side_u.contains(0) {
            (side_u, side_v)
        } else {
            (side_v, side_u)
        };
        halfspaces.push(Halfspace {
            id: 2 * id,
            vertices: base,
            complement: 2 * id + 1,
            hyperplane: id,
        });
        halfspaces.push(Halfspace {
            id: 2 * id + 1,
            vertices: other,
            complement: 2 * id,
            hyperplane: id,
        });
        hyperplanes.push(Hyperplane {
            id,
            edges: class,
            sides: [2 * id, 2 * id + 1],
        });
    }
    Ok((hyperplanes, halfspaces))
}

/// Computes nesting and transversality by bitset tests on the vertex sets.
pub fn relations(halfspaces: &[Halfspace]) -> PocsetRelations {
    let hs = halfspaces.len();
    let hp = hs / 2;
    let up: Vec<BitSet> = halfspaces
        .par_iter()
        .map(|h| {
            let mut row = BitSet::new(hs);
            for k in halfspaces {
                // h ⊆ k  iff  h ∩ k* = ∅
                if !h.vertices.intersects(&halfspaces[k.complement].vertices) {
                    row.insert(k.id);
                }
            }
            row
        })
        .collect();
    let mut transverse = vec![BitSet::new(hp); hp];
    for a in 0..hp {
        for b in a + 1..hp {
            let nested = [2 * a, 2 * a + 1]
                .iter()
                .any(|&h| up[h].contains(2 * b) || up[h].contains(2 * b + 1));
            let reverse = [2 * b, 2 * b + 1]
                .iter()
                .any(|&k| up[k].contains(2 * a) || up[k].contains(2 * a + 1));
            if !nested && !reverse {
                transverse[a].insert(b);
                transverse[b].insert(a);
            }
        }
    }
    let crossing = transverse
        .iter()
        .map(|t| BitSet::from_indices(hs, t.iter().flat_map(|j| [2 * j, 2 * j + 1])))
        .collect();
    PocsetRelations {
        up,
        transverse,
        crossing,
    }
}

/// Brute-force search for a triple without exactly one median. Quartic; only
/// reached when the fast partial-cube path already failed.
fn find_median_witness(n: usize, dist: &[u32]) -> Option<([usize; 3], usize)> {
    let d = |a: usize, b: usize| dist[a * n + b];
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let medians = (0..n)
                    .filter(|&m| {
                        d(x, m) + d(m, y) == d(x, y)
                            && d(y, m) + d(m, z) == d(y, z)
                            && d(x, m) + d(m, z) == d(x, z)
                    })
                    .count();
                if medians != 1 {
                    return Some(([x, y, z], medians));
                }
            }
        }
    }
    None
}

impl CubeComplex {
    /// Builds and validates a complex from its 1-skeleton.
    pub fn new(n: usize, edges: &[Edge]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let edges = canonical_edges(n, edges)?;
        let adj = adjacency(n, &edges);
        let dist = all_pairs_distances(&adj)?;

        let (hyperplanes, halfspaces) = match hyperplane_classes(n, &edges, &adj, &dist) {
            Ok(x) => x,
            Err(e) => {
                return Err(match find_median_witness(n, &dist) {
                    Some((triple, medians)) => Error::NotMedian { triple, medians },
                    None => e,
                })
            }
        };

        let hp = hyperplanes.len();
        let sig_words = hp.div_ceil(64).max(1);
        let mut signatures = vec![0u64; n * sig_words];
        for (i, _) in hyperplanes.iter().enumerate() {
            for v in halfspaces[2 * i + 1].vertices.iter() {
                signatures[v * sig_words + i / 64] |= 1 << (i % 64);
            }
        }

        // Wall metric must equal graph metric (isometric hypercube embedding).
        let sig = |v: usize| &signatures[v * sig_words..(v + 1) * sig_words];
        let bad_pair = (0..n).into_par_iter().find_map_first(|u| {
            (u + 1..n).find_map(|v| {
                let walls: u32 = sig(u)
                    .iter()
                    .zip(sig(v))
                    .map(|(a, b)| (a ^ b).count_ones())
                    .sum();
                (walls != dist[u * n + v]).then_some((u, v))
            })
        });
        if let Some((u, v)) = bad_pair {
            return Err(match find_median_witness(n, &dist) {
                Some((triple, medians)) => Error::NotMedian { triple, medians },
                None => Error::SeparationFailure(u, v),
            });
        }

        let by_signature: HashMap<Box<[u64]>, u32> = (0..n)
            .map(|v| (sig(v).to_vec().into_boxed_slice(), v as u32))
            .collect();

        // In a partial cube the three intervals meet exactly in the vertices
        // carrying the majority signature, so each triple has 0 or 1 medians.
        let missing = (0..n).into_par_iter().find_map_first(|x| {
            let mut key = vec![0u64; sig_words];
            for y in x + 1..n {
                for z in y + 1..n {
                    for (w, k) in key.iter_mut().enumerate() {
                        let (a, b, c) = (sig(x)[w], sig(y)[w], sig(z)[w]);
                        *k = (a & b) | (a & c) | (b & c);
                    }
                    if !by_signature.contains_key(key.as_slice()) {
                        return Some([x, y, z]);
                    }
                }
            }
            None
        });
        if let Some(triple) = missing {
            return Err(Error::NotMedian { triple, medians: 0 });
        }

        let relations = relations(&halfspaces);
        Ok(CubeComplex {
            n,
            edges,
            adj,
            dist,
            hyperplanes,
            halfspaces,
            relations,
            sig_words,
            signatures,
            by_signature,
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    #[inline]
    pub fn dist(&self, a: Vertex, b: Vertex) -> u32 {
        self.dist[a * self.n + b]
    }

    pub fn dist_row(&self, a: Vertex) -> &[u32] {
        &self.dist[a * self.n..(a + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn halfspace(&self, h: usize) -> &Halfspace {
        &self.halfspaces[h]
    }

    pub fn relations(&self) -> &PocsetRelations {
        &self.relations
    }

    pub fn hyperplane_count(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn halfspace_count(&self) -> usize {
        self.halfspaces.len()
    }

    /// Side of hyperplane `i` containing `v`.
    #[inline]
    pub fn side_of(&self, i: usize, v: Vertex) -> usize {
        2 * i + ((self.signatures[v * self.sig_words + i / 64] >> (i % 64)) & 1) as usize
    }

    pub(crate) fn signature(&self, v: Vertex) -> &[u64] {
        &self.signatures[v * self.sig_words..(v + 1) * self.sig_words]
    }

    pub(crate) fn sig_words(&self) -> usize {
        self.sig_words
    }

    pub(crate) fn vertex_with_signature(&self, sig: &[u64]) -> Option<Vertex> {
        self.by_signature.get(sig).map(|&v| v as usize)
    }

    /// Closed ball `{v : d(center, v) ≤ radius}`.
    pub fn ball(&self, center: Vertex, radius: u32) -> BitSet {
        BitSet::from_indices(
            self.n,
            self.dist_row(center)
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d <= radius)
                .map(|(v, _)| v),
        )
    }

    /// Checks that `perm` is a bijection of the vertices preserving adjacency.
    pub fn check_automorphism(&self, perm: &[Vertex]) -> Result<()> {
        if perm.len() != self.n {
            return Err(Error::NotPermutation(self.n));
        }
        let mut seen = BitSet::new(self.n);
        for &p in perm {
            if p >= self.n || seen.contains(p) {
                return Err(Error::NotPermutation(self.n));
            }
            seen.insert(p);
        }
        // A bijection that maps edges to edges is an automorphism of a finite graph.
        for &(a, b) in &self.edges {
            if !self.has_edge(perm[a], perm[b]) {
                return Err(Error::NotAutomorphism(a, b));
            }
        }
        Ok(())
    }
}
