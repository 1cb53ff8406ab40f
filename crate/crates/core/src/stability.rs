//! Stability of the cylinder family `C(x, y) = I_D(x, y)`.
//!
//! For a triple `(x, y, z)` with `ρ = (y.z)_x`, the truncations
//! `C(x,y) ∩ B(x,ρ)` and `C(x,z) ∩ B(x,ρ)` must agree outside a bounded
//! number of balls of radius `R`. The balls are centred at the median
//! `m(x, y, z)` and at the projections of the halfspaces that are
//! `D`-peripheral for one pair but not the other.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::complex::{CubeComplex, Vertex};
use crate::cylinders::PairData;
use crate::error::Result;
use crate::generators::rng;
use crate::half::HalfInt;
use crate::hyperbolicity::GeometryConstants;

/// At most this many failing triples are kept in a [`SweepReport`].
pub const MAX_REPORTED_FAILURES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub triple: [Vertex; 3],
    pub rho: HalfInt,
    pub sym_diff_size: usize,
    pub witness_centers: Vec<Vertex>,
    pub radius: u32,
    pub covered: bool,
    /// Balls used by the greedy cover of the symmetric difference.
    pub empirical_k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SweepMode {
    All,
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: Option<String>,
    pub vertices: usize,
    pub grid_d: usize,
    pub dim: usize,
    pub delta4: HalfInt,
    pub radius: u32,
    pub mode: SweepMode,
    pub triples_checked: u64,
    /// Triples whose truncated symmetric difference is nonempty.
    pub nonempty_differences: u64,
    pub max_sym_diff: usize,
    pub max_witness_centers: usize,
    pub max_empirical_k: usize,
    /// Largest number of distinct projections of halfspaces that are
    /// `D`-peripheral and `(ρ − Dd)`-close for `(x, y)` but not
    /// `D`-peripheral for `(x, z)`.
    pub max_projection_difference: usize,
    /// Triples where a `(ρ − Dd)`-close `D`-peripheral halfspace of `(x, y)`
    /// is not peripheral for `(x, z)`.
    pub containment_violations: u64,
    pub failure_count: u64,
    /// The first failures in lexicographic triple order.
    pub failures: Vec<TripleReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Ball lookups for one sweep.
struct Balls<'a> {
    c: &'a CubeComplex,
    radius: u32,
    cached: Option<Vec<BitSet>>,
}

impl<'a> Balls<'a> {
    fn new(c: &'a CubeComplex, radius: u32, cache: bool) -> Self {
        let cached = cache.then(|| {
            (0..c.vertex_count())
                .into_par_iter()
                .map(|p| c.ball(p, radius))
                .collect()
        });
        Balls { c, radius, cached }
    }

    fn ball(&self, p: Vertex) -> std::borrow::Cow<'_, BitSet> {
        match &self.cached {
            Some(b) => std::borrow::Cow::Borrowed(&b[p]),
            None => std::borrow::Cow::Owned(self.c.ball(p, self.radius)),
        }
    }
}

/// `B(x, ρ)` for a half-integer `ρ` (empty when `ρ < 0`).
fn ball_half(c: &CubeComplex, x: Vertex, rho: HalfInt) -> BitSet {
    if rho.doubled() < 0 {
        return BitSet::new(c.vertex_count());
    }
    c.ball(x, rho.floor() as u32)
}

struct TripleOutcome {
    report: TripleReport,
    projection_difference: usize,
    containment_violation: bool,
}

fn centers_from(
    c: &CubeComplex,
    z: Vertex,
    pxy: &PairData,
    pxz: &PairData,
    rho: HalfInt,
    dd: u32,
) -> BitSet {
    let mut centers = BitSet::new(c.vertex_count());
    centers.insert(pxy.interval.project(z));
    let limit = rho.doubled() + 2 * dd as i64;
    for (p, q) in [(pxy, pxz), (pxz, pxy)] {
        for proj in &p.projections {
            if !q.dper.contains(proj.h) && 2 * (proj.d_max as i64) < limit {
                centers.union_with(&proj.set);
            }
        }
    }
    centers
}

fn projection_difference(pxy: &PairData, pxz: &PairData, rho: HalfInt, dd: u32) -> usize {
    let limit = rho.doubled() - 2 * dd as i64;
    let mut sets: Vec<&BitSet> = pxy
        .projections
        .iter()
        .filter(|p| !pxz.dper.contains(p.h) && 2 * (p.d_max as i64) < limit)
        .map(|p| &p.set)
        .collect();
    sets.sort_unstable();
    sets.dedup();
    sets.len()
}

/// Greedy cover of `target` by balls around `centers`: repeatedly takes the
/// ball covering the most uncovered vertices, ties to the smallest centre.
/// Returns the chosen centres; they may leave part of `target` uncovered.
fn greedy_cover(target: &BitSet, centers: &BitSet, balls: &Balls<'_>) -> Vec<Vertex> {
    let mut remaining = target.clone();
    let mut chosen = Vec::new();
    let cand: Vec<(Vertex, BitSet)> = centers
        .iter()
        .map(|p| (p, balls.ball(p).into_owned()))
        .collect();
    while !remaining.is_empty() {
        let best = cand
            .iter()
            .map(|(p, b)| (b.intersection_count(&remaining), std::cmp::Reverse(*p), b))
            .max_by_key(|&(gain, p, _)| (gain, p));
        match best {
            Some((gain, std::cmp::Reverse(p), b)) if gain > 0 => {
                chosen.push(p);
                remaining.difference_with(b);
            }
            _ => break,
        }
    }
    chosen
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    c: &CubeComplex,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    pxy: &PairData,
    pxz: &PairData,
    dd: u32,
    balls: &Balls<'_>,
) -> TripleOutcome {
    let rho = c.gromov_product(x, y, z);
    let mut sym = pxy.cylinder.symmetric_difference(&pxz.cylinder);
    sym.intersect_with(&ball_half(c, x, rho));
    let centers = centers_from(c, z, pxy, pxz, rho, dd);

    let mut cover = BitSet::new(c.vertex_count());
    let (covered, empirical_k) = if sym.is_empty() {
        (true, 0)
    } else {
        for p in centers.iter() {
            cover.union_with(&balls.ball(p));
        }
        (
            sym.is_subset(&cover),
            greedy_cover(&sym, &centers, balls).len(),
        )
    };

    let limit = rho.doubled() - 2 * dd as i64;
    let containment_violation = pxy.projections.iter().any(|p| {
        2 * (p.d_max as i64) < limit && {
            let h = &c.halfspace(p.h).vertices;
            h.contains(x) || h.contains(z)
        }
    });

    TripleOutcome {
        report: TripleReport {
            triple: [x, y, z],
            rho,
            sym_diff_size: sym.count(),
            witness_centers: centers.to_vec(),
            radius: balls.radius,
            covered,
            empirical_k,
        },
        projection_difference: projection_difference(pxy, pxz, rho, dd),
        containment_violation,
    }
}

/// `(C(x,y) ∩ B(x,ρ)) △ (C(x,z) ∩ B(x,ρ))` with `ρ = (y.z)_x`.
pub fn truncated_sym_diff(
    c: &CubeComplex,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    grid_d: usize,
) -> BitSet {
    let rho = c.gromov_product(x, y, z);
    let mut sym = c
        .cylinder(x, y, grid_d)
        .vertices
        .symmetric_difference(&c.cylinder(x, z, grid_d).vertices);
    sym.intersect_with(&ball_half(c, x, rho));
    sym
}

/// Ball centres for the triple: the median, plus the projections onto
/// `I(x, y)` of halfspaces `D`-peripheral and `(ρ + Dd)`-close for `(x, y)`
/// but not `D`-peripheral for `(x, z)`, plus the same with `y` and `z`
/// exchanged.
pub fn witness_centers(
    c: &CubeComplex,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    grid_d: usize,
    dim: usize,
) -> BitSet {
    let pxy = PairData::new(c, x, y, grid_d);
    let pxz = PairData::new(c, x, z, grid_d);
    let rho = c.gromov_product(x, y, z);
    centers_from(c, z, &pxy, &pxz, rho, (grid_d * dim) as u32)
}

pub fn check_triple(
    c: &CubeComplex,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    grid_d: usize,
    dim: usize,
    radius: u32,
) -> TripleReport {
    let pxy = PairData::new(c, x, y, grid_d);
    let pxz = PairData::new(c, x, z, grid_d);
    let balls = Balls::new(c, radius, false);
    evaluate(c, x, y, z, &pxy, &pxz, (grid_d * dim) as u32, &balls).report
}

/// Distinct projections onto `I(x, y)` of halfspaces `D`-peripheral and
/// `(ρ − Dd)`-close for `(x, y)` but not `D`-peripheral for `(x, z)`.
pub fn projection_difference_count(
    c: &CubeComplex,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    grid_d: usize,
    dim: usize,
) -> usize {
    let pxy = PairData::new(c, x, y, grid_d);
    let pxz = PairData::new(c, x, z, grid_d);
    projection_difference(&pxy, &pxz, c.gromov_product(x, y, z), (grid_d * dim) as u32)
}

#[derive(Default)]
struct Partial {
    checked: u64,
    nonempty: u64,
    max_sym: usize,
    max_centers: usize,
    max_k: usize,
    max_proj: usize,
    containment: u64,
    failure_count: u64,
    failures: Vec<TripleReport>,
}

impl Partial {
    fn add(&mut self, o: TripleOutcome) {
        let r = o.report;
        self.checked += 1;
        self.nonempty += u64::from(r.sym_diff_size > 0);
        self.max_sym = self.max_sym.max(r.sym_diff_size);
        self.max_centers = self.max_centers.max(r.witness_centers.len());
        self.max_k = self.max_k.max(r.empirical_k);
        self.max_proj = self.max_proj.max(o.projection_difference);
        self.containment += u64::from(o.containment_violation);
        if !r.covered {
            self.failure_count += 1;
            self.failures.push(r);
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.checked += other.checked;
        self.nonempty += other.nonempty;
        self.max_sym = self.max_sym.max(other.max_sym);
        self.max_centers = self.max_centers.max(other.max_centers);
        self.max_k = self.max_k.max(other.max_k);
        self.max_proj = self.max_proj.max(other.max_proj);
        self.containment += other.containment;
        self.failure_count += other.failure_count;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|r| r.triple);
        self.failures.truncate(MAX_REPORTED_FAILURES);
        self
    }
}

/// The seeded triple sample used by [`SweepMode::Sample`].
pub fn sample_triples(n: usize, count: usize, seed: u64) -> Vec<[Vertex; 3]> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| [r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n)])
        .collect()
}

/// Runs [`check_triple`] over every ordered triple or over a seeded sample.
///
/// Work is split by the first vertex `x`; all pair data for `(x, ·)` is built
/// once per `x`. The report does not depend on the number of worker threads.
pub fn stability_sweep(
    c: &CubeComplex,
    geometry: &GeometryConstants,
    grid_d: usize,
    radius: u32,
    mode: SweepMode,
) -> SweepReport {
    let n = c.vertex_count();
    let dd = (grid_d * geometry.dim) as u32;
    let balls = Balls::new(c, radius, true);

    let partial = match mode {
        SweepMode::All => (0..n)
            .into_par_iter()
            .map(|x| {
                let row: Vec<PairData> = (0..n).map(|y| PairData::new(c, x, y, grid_d)).collect();
                let mut acc = Partial::default();
                for y in 0..n {
                    for z in 0..n {
                        acc.add(evaluate(c, x, y, z, &row[y], &row[z], dd, &balls));
                    }
                    acc.failures.truncate(MAX_REPORTED_FAILURES);
                }
                acc
            })
            .reduce(Partial::default, Partial::merge),
        SweepMode::Sample { count, seed } => {
            let mut by_x: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); n];
            for [x, y, z] in sample_triples(n, count, seed) {
                by_x[x].push((y, z));
            }
            by_x.into_par_iter()
                .enumerate()
                .map(|(x, triples)| {
                    let mut row: HashMap<Vertex, PairData> = HashMap::new();
                    let mut acc = Partial::default();
                    for (y, z) in triples {
                        for v in [y, z] {
                            row.entry(v)
                                .or_insert_with(|| PairData::new(c, x, v, grid_d));
                        }
                        acc.add(evaluate(c, x, y, z, &row[&y], &row[&z], dd, &balls));
                    }
                    acc.failures.sort_by_key(|r| r.triple);
                    acc.failures.truncate(MAX_REPORTED_FAILURES);
                    acc
                })
                .reduce(Partial::default, Partial::merge)
        }
    };

    let mut failures = partial.failures;
    failures.sort_by_key(|r| r.triple);
    failures.truncate(MAX_REPORTED_FAILURES);
    SweepReport {
        name: None,
        vertices: n,
        grid_d,
        dim: geometry.dim,
        delta4: geometry.delta4,
        radius,
        mode,
        triples_checked: partial.checked,
        nonempty_differences: partial.nonempty,
        max_sym_diff: partial.max_sym,
        max_witness_centers: partial.max_centers,
        max_empirical_k: partial.max_k,
        max_projection_difference: partial.max_proj,
        containment_violations: partial.containment,
        failure_count: partial.failure_count,
        failures,
    }
}

/// Whether `perm(C(x, y)) = C(perm x, perm y)` for the given pairs (all
/// pairs when `pairs` is `None`). Fails if `perm` is not an automorphism.
pub fn check_invariance(
    c: &CubeComplex,
    perm: &[Vertex],
    pairs: Option<&[(Vertex, Vertex)]>,
    grid_d: usize,
) -> Result<bool> {
    c.check_automorphism(perm)?;
    let n = c.vertex_count();
    let all: Vec<(Vertex, Vertex)>;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            all = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
            &all
        }
    };
    Ok(pairs.par_iter().all(|&(x, y)| {
        let image =
            BitSet::from_indices(n, c.cylinder(x, y, grid_d).vertices.iter().map(|v| perm[v]));
        image == c.cylinder(perm[x], perm[y], grid_d).vertices
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::generators::{gen_grid, gen_hypercube, gen_staircase, gen_tree, grid_rotation};

    #[test]
    fn tree_triples_are_trivial() {
        let t = gen_tree(15, 2);
        for (x, y, z) in [(0, 5, 9), (3, 3, 12), (7, 1, 14)] {
            assert!(truncated_sym_diff(&t, x, y, z, 0).is_empty());
            let centers = witness_centers(&t, x, y, z, 0, 1);
            assert_eq!(centers.to_vec(), vec![t.median(x, y, z)]);
            let r = check_triple(&t, x, y, z, 0, 1, 0);
            assert!(r.covered);
            assert_eq!(r.empirical_k, 0);
            assert_eq!(projection_difference_count(&t, x, y, z, 0, 1), 0);
        }
    }

    #[test]
    fn equal_endpoints() {
        let c = gen_grid(3, 2);
        for (x, y) in [(0, 5), (4, 11), (2, 2)] {
            assert!(truncated_sym_diff(&c, x, y, y, 2).is_empty());
            let r = check_triple(&c, x, y, y, 2, 2, 20);
            assert!(r.covered);
            assert_eq!(r.empirical_k, 0);
            assert_eq!(projection_difference_count(&c, x, y, y, 2, 2), 0);
        }
        assert_eq!(witness_centers(&c, 3, 3, 3, 2, 2).to_vec(), vec![3]);
    }

    #[test]
    fn sweep_on_tree_and_cube() {
        let t = gen_tree(12, 4);
        let g = GeometryConstants::compute(&t);
        let r = stability_sweep(&t, &g, g.grid_d, g.radius, SweepMode::All);
        assert_eq!(r.triples_checked, 12 * 12 * 12);
        assert!(r.passed());
        assert_eq!(r.max_empirical_k, 0);

        let q = gen_hypercube(3);
        let g = GeometryConstants::compute(&q);
        let r = stability_sweep(&q, &g, g.grid_d, g.radius, SweepMode::All);
        assert!(r.passed());
    }

    #[test]
    fn sample_sweep_is_seeded() {
        let s = gen_staircase(6);
        let g = GeometryConstants::compute(&s);
        let mode = SweepMode::Sample {
            count: 500,
            seed: 7,
        };
        let a = stability_sweep(&s, &g, g.grid_d, g.radius, mode);
        let b = stability_sweep(&s, &g, g.grid_d, g.radius, mode);
        assert_eq!(a, b);
        assert_eq!(a.triples_checked, 500);
    }

    #[test]
    fn invariance() {
        let c = gen_grid(2, 2);
        let id: Vec<usize> = (0..9).collect();
        assert!(check_invariance(&c, &id, None, 2).unwrap());
        assert!(check_invariance(&c, &grid_rotation(2), None, 2).unwrap());
        let mut bad = id.clone();
        bad.swap(0, 1);
        assert!(matches!(
            check_invariance(&c, &bad, None, 2),
            Err(Error::NotAutomorphism(..))
        ));
    }
}
