//! Hyperbolicity constant, dimension and maximal grid size of a complex.
//!
//! Grid search relies on a sandwich property of pencils: if `k̂` crosses `ĥ₁`
//! and `ĥ_m` and `h₁ < h < h_m`, then `k̂` crosses `ĥ`. So a grid of size `m`
//! exists iff there are chains of length `m` from `h₁` to `h_m` and from
//! `k₁` to `k_m` whose four endpoint pairs cross.

use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::complex::CubeComplex;
use crate::half::HalfInt;

/// Two pencils of halfspaces with every cross pair transverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub pencil_a: Vec<usize>,
    pub pencil_b: Vec<usize>,
}

impl Grid {
    pub fn size(&self) -> usize {
        self.pencil_a.len()
    }

    /// Both pencils strictly nested, equal length, all `m²` crossings present.
    pub fn is_valid(&self, c: &CubeComplex) -> bool {
        let rel = c.relations();
        let nested = |p: &[usize]| p.windows(2).all(|w| rel.lt(w[0], w[1]));
        self.pencil_a.len() == self.pencil_b.len()
            && nested(&self.pencil_a)
            && nested(&self.pencil_b)
            && self.pencil_a.iter().all(|&h| {
                self.pencil_b
                    .iter()
                    .all(|&k| rel.transverse(c.halfspace(h).hyperplane, c.halfspace(k).hyperplane))
            })
    }
}

/// Four-point hyperbolicity constant.
///
/// For each quadruple the three pair-sums are sorted and the gap between the
/// two largest is halved. Pairs are scanned by decreasing distance; a pair
/// `(a, b)` bounds the gap of any quadruple in which it is the shorter half of
/// the largest sum by `2·d(a,b)`, so the scan stops once that bound cannot
/// beat the running maximum.
pub fn delta_four_point(c: &CubeComplex) -> HalfInt {
    let n = c.vertex_count();
    let mut pairs: Vec<(u32, u32, u32)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a as u32, b as u32)))
        .map(|(a, b)| (c.dist(a as usize, b as usize), a, b))
        .collect();
    pairs.sort_unstable_by(|p, q| q.0.cmp(&p.0).then((p.1, p.2).cmp(&(q.1, q.2))));
    let best = AtomicI64::new(0);
    pairs.par_iter().enumerate().for_each(|(i, &(dab, a, b))| {
        if 2 * dab as i64 <= best.load(Ordering::Relaxed) {
            return;
        }
        let (a, b) = (a as usize, b as usize);
        let mut local = best.load(Ordering::Relaxed);
        for &(dcd, cc, dd) in &pairs[..i] {
            let (cc, dd) = (cc as usize, dd as usize);
            let s1 = (dab + dcd) as i64;
            let s2 = (c.dist(a, cc) + c.dist(b, dd)) as i64;
            let s3 = (c.dist(a, dd) + c.dist(b, cc)) as i64;
            let mut s = [s1, s2, s3];
            s.sort_unstable();
            local = local.max(s[2] - s[1]);
        }
        best.fetch_max(local, Ordering::Relaxed);
    });
    HalfInt::from_doubled(best.into_inner())
}

/// Size of the largest family of pairwise transverse hyperplanes.
pub fn dimension(c: &CubeComplex) -> usize {
    let hp = c.hyperplane_count();
    if hp == 0 {
        return 0;
    }
    let rel = c.relations();
    let mut best = 1;
    fn expand(rel: &crate::complex::PocsetRelations, size: usize, cand: BitSet, best: &mut usize) {
        if cand.is_empty() {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count() <= *best {
            return;
        }
        let mut cand = cand;
        while let Some(v) = cand.first() {
            if size + cand.count() <= *best {
                return;
            }
            cand.remove(v);
            expand(
                rel,
                size + 1,
                cand.intersection(rel.transverse_set(v)),
                best,
            );
        }
    }
    expand(rel, 0, BitSet::full(hp), &mut best);
    best
}

/// Longest strictly nested chain lengths between halfspaces.
///
/// `len(h, k)` counts the chain members including both ends and is `0` when
/// `h ⊄ k`; `len(h, h) = 1`.
#[derive(Clone, Debug)]
pub struct ChainLengths {
    hs: usize,
    len: Vec<u16>,
}

impl ChainLengths {
    pub fn new(c: &CubeComplex) -> Self {
        let hs = c.halfspace_count();
        let rel = c.relations();
        let mut order: Vec<usize> = (0..hs).collect();
        order.sort_by_key(|&h| (c.halfspace(h).vertices.count(), h));
        let rows: Vec<Vec<u16>> = (0..hs)
            .into_par_iter()
            .map(|h| {
                let mut row = vec![0u16; hs];
                row[h] = 1;
                let up = rel.up_set(h);
                for &k in &order {
                    if k == h || !up.contains(k) {
                        continue;
                    }
                    // predecessors j with h ≤ j < k, all earlier in `order`
                    let mut best = 0;
                    for j in up.iter() {
                        if j != k && rel.lt(j, k) && row[j] > best {
                            best = row[j];
                        }
                    }
                    row[k] = best + 1;
                }
                row
            })
            .collect();
        ChainLengths {
            hs,
            len: rows.concat(),
        }
    }

    #[inline]
    pub fn get(&self, h: usize, k: usize) -> usize {
        self.len[h * self.hs + k] as usize
    }

    /// A longest chain from `h` to `k`, smallest ids first at each step.
    pub fn chain(&self, c: &CubeComplex, h: usize, k: usize) -> Vec<usize> {
        let rel = c.relations();
        let mut out = vec![h];
        let mut cur = h;
        while cur != k {
            let need = self.get(cur, k) - 1;
            cur = (0..self.hs)
                .find(|&j| rel.lt(cur, j) && self.get(j, k) == need)
                .expect("chain step");
            out.push(cur);
        }
        out
    }
}

/// Largest `m` admitting a grid of size `m`, with a witness when `m ≥ 1`.
pub fn max_grid_size(c: &CubeComplex) -> (usize, Option<Grid>) {
    let hs = c.halfspace_count();
    let rel = c.relations();
    let chains = ChainLengths::new(c);
    let hyp = |h: usize| c.halfspace(h).hyperplane;

    let mut ends: Vec<(usize, usize, usize)> = (0..hs)
        .flat_map(|h| rel.up_set(h).iter().map(move |k| (h, k)))
        .map(|(h, k)| (chains.get(h, k), h, k))
        .collect();
    ends.sort_unstable_by(|p, q| q.0.cmp(&p.0).then((p.1, p.2).cmp(&(q.1, q.2))));

    let mut best = 0;
    let mut witness = None;
    for &(la, h1, hm) in &ends {
        if la <= best {
            break;
        }
        let cross = rel
            .crossing_halfspaces(hyp(h1))
            .intersection(rel.crossing_halfspaces(hyp(hm)));
        for k1 in cross.iter() {
            for km in rel.up_set(k1).intersection(&cross).iter() {
                let m = la.min(chains.get(k1, km));
                if m > best {
                    best = m;
                    witness = Some((h1, hm, k1, km));
                }
            }
        }
    }
    let grid = witness.map(|(h1, hm, k1, km)| Grid {
        pencil_a: trim_chain(chains.chain(c, h1, hm), best),
        pencil_b: trim_chain(chains.chain(c, k1, km), best),
    });
    (best, grid)
}

/// Keeps the first `m - 1` members and the last one.
fn trim_chain(mut chain: Vec<usize>, m: usize) -> Vec<usize> {
    if chain.len() > m {
        let last = *chain.last().unwrap();
        chain.truncate(m.saturating_sub(1));
        chain.push(last);
    }
    chain
}

/// δ, d, D and the cylinder constants derived from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryConstants {
    pub delta4: HalfInt,
    pub dim: usize,
    pub grid_d: usize,
    /// `D·d + δ`.
    pub theta: HalfInt,
    /// `5·D·d`.
    pub radius: u32,
}

impl GeometryConstants {
    pub fn new(delta4: HalfInt, dim: usize, grid_d: usize) -> Self {
        let dd = (grid_d * dim) as i64;
        GeometryConstants {
            delta4,
            dim,
            grid_d,
            theta: HalfInt::from_int(dd) + delta4,
            radius: 5 * dd as u32,
        }
    }

    pub fn compute(c: &CubeComplex) -> Self {
        Self::new(delta_four_point(c), dimension(c), max_grid_size(c).0)
    }

    /// `D·d`.
    pub fn dd(&self) -> u32 {
        (self.grid_d * self.dim) as u32
    }
}

/// `d·m³`: length forcing a monotone or constant subsequence of length `m` in
/// a poset of width `d`.
pub fn n2(m: &BigUint, d: u64) -> BigUint {
    m.pow(3) * d
}

/// `m·(R+1)²·d·K`: count forcing `m` subcomplexes of diameter `≤ R` in `ℝ^d`
/// separated by a pencil.
pub fn n1(m: &BigUint, r: u64, d: u64, k: &BigUint) -> BigUint {
    m * BigUint::from((r + 1) * (r + 1)) * d * k
}

/// Largest bit length of `K` materialised as an integer.
const MAX_K_BITS: u64 = 1 << 24;

/// The pigeonhole counts behind the bounded-difference argument.
///
/// `K(d, R)` is replaced by its upper bound `2^((2R+1)^d)`, the number of
/// subsets of cells of `[0,R]^d`, so `m_bound` is an upper bound as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PigeonholeBounds {
    pub dim: u64,
    pub grid_d: u64,
    /// `2D + 2`.
    pub l: BigUint,
    /// `N₂` iterated `D + 1` times from `L`.
    pub t: BigUint,
    /// Diameter bound of projections fed to `N₁`: `D·d`.
    pub projection_diameter: u64,
    /// Exponent `(2R+1)^d` in the bound `K ≤ 2^exponent`.
    pub k_log2_upper: BigUint,
    /// `N₁(T, Dd, d)` with `K` at its upper bound; `None` when `K` alone has
    /// more than `2^24` bits.
    pub m_bound: Option<BigUint>,
    /// `5·D·d`.
    pub radius: u64,
    /// `D·d + δ`.
    pub theta: HalfInt,
}

pub fn pigeonhole_bounds(dim: u64, delta: HalfInt, grid_d: u64) -> PigeonholeBounds {
    let l = BigUint::from(2 * grid_d + 2);
    let mut t = l.clone();
    for _ in 0..=grid_d {
        t = n2(&t, dim);
    }
    let r = grid_d * dim;
    let k_log2_upper = BigUint::from(2 * r + 1).pow(dim as u32);
    let m_bound = k_log2_upper
        .to_u64()
        .filter(|&bits| bits <= MAX_K_BITS)
        .map(|bits| n1(&t, r, dim, &(BigUint::one() << bits)));
    PigeonholeBounds {
        dim,
        grid_d,
        l,
        t,
        projection_diameter: r,
        k_log2_upper,
        m_bound,
        radius: 5 * r,
        theta: HalfInt::from_int(r as i64) + delta,
    }
}

impl PigeonholeBounds {
    /// Whether an observed count stays within the `M` bound.
    pub fn within_m_bound(&self, count: u64) -> bool {
        match &self.m_bound {
            Some(m) => BigUint::from(count) <= *m,
            // K alone exceeds 2^(2^24)
            None => true,
        }
    }
}

/// Decimal digits when short, bit length otherwise.
pub fn abbreviate(v: &BigUint) -> String {
    let s = v.to_str_radix(10);
    if s.len() <= 60 {
        s
    } else {
        format!("<{}-bit integer>", v.bits())
    }
}

impl fmt::Display for PigeonholeBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "L = {}", self.l)?;
        writeln!(f, "T = {}", abbreviate(&self.t))?;
        writeln!(f, "K <= 2^{}", abbreviate(&self.k_log2_upper))?;
        match &self.m_bound {
            Some(m) => writeln!(f, "M <= {}", abbreviate(m))?,
            None => writeln!(f, "M <= (not materialised; K exceeds 2^(2^24))")?,
        }
        writeln!(f, "R = {}", self.radius)?;
        write!(f, "theta = {}", self.theta)
    }
}
