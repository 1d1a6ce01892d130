//! The dense-subgraph extractor.
//!
//! Candidates come from two families. The piecing pipeline builds `T_{a,t−1}`,
//! groups its copies by leaf image, and takes unions of copies from the
//! largest group. The baselines are min-degree peeling, the exact densest
//! subgraph and greedy local search. Every candidate is also shrunk by
//! min-degree peeling inside it, and the smallest set reaching the target
//! wins.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::ops::ControlFlow;

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::census::{census, for_each_copy, TreeCopy};
use crate::densest::densest_subgraph;
use crate::error::{input, Result};
use crate::graph::{Graph, Vertex};
use crate::params::{derive_params_bounded, derive_params_polylog, Derivation, ParamOrigin, ParameterSet};
use crate::rational::{self, Ratio};
use crate::report::{Branch, Criterion, DensityReport};
use crate::rng;
use crate::tree::build_caterpillar;

/// Vertices and edges of a union of tree copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyUnion {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl CopyUnion {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Union of copies of one tree sharing one leaf image. For a balanced tree
/// the result has `e(H) ≥ (|V(H)| − q)·ρ_T`.
pub fn union_of_copies(copies: &[TreeCopy<'_>]) -> Result<CopyUnion> {
    let Some(first) = copies.first() else {
        return input("union of an empty collection of copies");
    };
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for c in copies {
        if c.tree != first.tree {
            return input("copies of different trees");
        }
        if c.leaf_image != first.leaf_image {
            return input("copies with different leaf images");
        }
        vertices.extend(c.map.iter().copied());
        edges.extend(c.edges());
    }
    let union = CopyUnion { vertices: vertices.into_iter().collect(), edges: edges.into_iter().collect() };
    if cfg!(debug_assertions) && first.tree.known_balanced() {
        let tree = first.tree;
        let q = tree.leaf_count();
        let a = tree.non_leaf_count() as u128;
        let lhs = union.edge_count() as u128 * a;
        let rhs = (union.vertex_count() - q) as u128 * (tree.vertex_count() as u128 - 1);
        debug_assert!(lhs >= rhs, "union density bound violated: e = {}, |V| = {}", union.edge_count(), union.vertex_count());
    }
    Ok(union)
}

/// Adds copies in order until their union spans at least `r − t` vertices;
/// the span then lies in `[r − t, r]`.
pub fn select_subcollection<'t>(copies: &[TreeCopy<'t>], r: usize, t: usize) -> Result<Vec<TreeCopy<'t>>> {
    if t >= r {
        return input(format!("need t < r, got t = {t}, r = {r}"));
    }
    if let Some(c) = copies.iter().find(|c| c.map.len() != t) {
        return input(format!("copy with {} vertices, expected t = {t}", c.map.len()));
    }
    let goal = r - t;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in copies {
        if seen.len() >= goal {
            break;
        }
        seen.extend(c.map.iter().copied());
        out.push(c.clone());
    }
    if seen.len() < goal {
        return input(format!("all copies together span {} < r − t = {goal} vertices", seen.len()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractOptions {
    /// `ρ = (s/2)(1 + δ)`.
    pub delta: Ratio,
    /// `C` in the polylog derivation.
    pub log_exponent: u32,
    /// `ε` in the bounded-size derivation.
    pub epsilon: Ratio,
    /// Copies enumerated in total across all pipeline cells.
    pub census_limit: u64,
    pub grid_t_max: usize,
    pub local_search_starts: usize,
    pub local_search_max_size: usize,
    pub seed: u64,
    pub pipeline: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            delta: Ratio::new(1, 100),
            log_exponent: 1,
            epsilon: Ratio::new(1, 2),
            census_limit: crate::census::DEFAULT_CENSUS_LIMIT,
            grid_t_max: 24,
            local_search_starts: 32,
            local_search_max_size: 512,
            seed: 0,
            pipeline: true,
        }
    }
}

struct Candidate {
    vertices: Vec<Vertex>,
    branch: Branch,
    source: String,
    params: Option<ParameterSet>,
}

/// Both derivations for `g` at target `s`.
pub fn derivations(g: &Graph, s: Ratio, options: &ExtractOptions) -> Result<Vec<Derivation>> {
    let n = g.vertex_count() as u64;
    let rho = s / 2 * (Ratio::from_integer(1) + options.delta);
    let d = g.average_degree()?;
    let mut out = Vec::new();
    if d > Ratio::from_integer(1) {
        out.push(derive_params_polylog(n, rational::to_f64(&d), rho, options.log_exponent)?);
    }
    out.push(derive_params_bounded(n, &rational::to_big(&d), rho, options.epsilon)?);
    Ok(out)
}

/// Pipeline cells `(t, a, [r…], origin)`.
fn pipeline_cells(n: usize, rho: Ratio, derived: &[Derivation], t_max: usize) -> Vec<(usize, usize, Vec<usize>, ParamOrigin)> {
    let mut cells = Vec::new();
    for d in derived {
        if let Derivation::Feasible(p) = d {
            let (t, a, r) = (p.t as usize, p.a as usize, p.r as usize);
            if t <= t_max && a >= 1 && a + 2 <= t && r > t {
                cells.push((t, a, vec![r.min(n)], p.origin));
            }
        }
    }
    let ceil_two_rho = rational::ceil(&(rho * 2)) as usize;
    for t in 4..=t_max.min(n) {
        let tr = Ratio::from_integer(t as i64);
        let lo = rational::ceil(&(tr / (rho * 2))).max(1) as usize;
        let hi = (rational::floor(&(tr / rho)) as usize).min(t - 2);
        let lower = 2 * (ceil_two_rho + 3) * t;
        let mut rs = Vec::new();
        let mut r = lower.min(n);
        loop {
            if r > t {
                rs.push(r);
            }
            if r >= n {
                break;
            }
            r = (r * 2).min(n);
        }
        if rs.is_empty() {
            continue;
        }
        for a in lo..=hi {
            cells.push((t, a, rs.clone(), ParamOrigin::Grid));
        }
    }
    cells
}

fn run_cell(g: &Graph, rho: Ratio, cell: &(usize, usize, Vec<usize>, ParamOrigin), limit: u64) -> Result<Vec<Candidate>> {
    let (t, a, rs, origin) = cell;
    let tree = build_caterpillar(*a, t - 1)?;
    let report = census(g, &tree, Some(limit))?;
    let Some((leafset, _)) = report.largest_group() else {
        return Ok(Vec::new());
    };
    let leafset = leafset.to_vec();
    let mut copies = Vec::new();
    for_each_copy(g, &tree, Some(limit), |c| {
        if c.leaf_image == leafset {
            copies.push(c.clone());
        }
        ControlFlow::Continue(())
    })?;
    let label = |r: usize| format!("piecing t={t} a={a} r={r}");
    let params = |r: usize| {
        let mut p = ParameterSet::explicit(rho, *t as u64, *a as u64, r as u64, *origin);
        if *origin != ParamOrigin::Grid {
            p.k = (rational::ceil(&(rho * 2)) + 1) as u64;
            p.c0 = crate::params::c0_for(&rho, p.k);
        }
        p
    };
    let whole = union_of_copies(&copies)?;
    let mut out = vec![Candidate {
        vertices: whole.vertices.clone(),
        branch: Branch::Pipeline,
        source: format!("piecing t={t} a={a} all"),
        params: Some(params(*rs.last().expect("non-empty r list"))),
    }];
    for &r in rs {
        if whole.vertex_count() + t < r {
            continue;
        }
        let chosen = select_subcollection(&copies, r, *t)?;
        let sub = union_of_copies(&chosen)?;
        out.push(Candidate { vertices: sub.vertices, branch: Branch::Pipeline, source: label(r), params: Some(params(r)) });
    }
    Ok(out)
}

/// Sets `R \ {first i peeled vertices}` for the min-degree peeling order of
/// `G[R]`; returns the smallest one with `2e ≥ s|R|`.
fn shrink(g: &Graph, set: &[Vertex], s: &Ratio) -> Option<Vec<Vertex>> {
    let sub = g.induced_subgraph(set).ok()?;
    let h = &sub.graph;
    let n = h.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, Vertex)>> = (0..n).map(|v| Reverse((degree[v], v))).collect();
    let mut edges = h.edge_count();
    let mut order = Vec::with_capacity(n);
    let mut best_step = None;
    let mut alive = n;
    loop {
        if alive > 0 && rational::ge_scaled(2 * edges as u64, s, alive as u64) {
            best_step = Some(order.len());
        }
        if alive <= 1 {
            break;
        }
        let v = loop {
            let Reverse((d, v)) = heap.pop().expect("alive vertices remain");
            if !removed[v] && degree[v] == d {
                break v;
            }
        };
        removed[v] = true;
        alive -= 1;
        edges -= degree[v];
        order.push(v);
        for &u in h.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
                heap.push(Reverse((degree[u], u)));
            }
        }
    }
    let step = best_step?;
    let gone: BTreeSet<Vertex> = order[..step].iter().copied().collect();
    Some((0..n).filter(|v| !gone.contains(v)).map(|v| sub.to_host(v)).collect())
}

fn baseline_candidates(g: &Graph, s: &Ratio, options: &ExtractOptions) -> Vec<Candidate> {
    let mut out = Vec::new();
    let baseline = |vertices: Vec<Vertex>, source: &str| Candidate {
        vertices,
        branch: Branch::Baseline,
        source: source.to_string(),
        params: None,
    };
    let half = rational::ceil(&(*s / 2)) + 1;
    for (theta, name) in [(Ratio::from_integer(half), "peel"), (*s, "peel-s")] {
        let peeled = g.peel_min_degree(theta);
        if !peeled.is_empty() {
            out.push(baseline(peeled.vertices, name));
        }
    }
    if let Some(dense) = densest_subgraph(g) {
        out.push(baseline(dense.vertices, "densest-flow"));
    }
    let n = g.vertex_count();
    let starts: Vec<Vertex> = if n <= options.local_search_starts {
        (0..n).collect()
    } else {
        let mut rng = rng::from_seed(options.seed);
        let mut v = sample(&mut rng, n, options.local_search_starts).into_vec();
        v.sort_unstable();
        v
    };
    for start in starts {
        let mut found = None;
        g.greedy_grow(start, options.local_search_max_size, |set, edges| {
            if rational::ge_scaled(2 * edges as u64, s, set.len() as u64) {
                found = Some(set.to_vec());
                return false;
            }
            true
        });
        if let Some(set) = found {
            out.push(baseline(set, "local-search"));
        }
    }
    out
}

/// Searches for a small `R` with average degree of `G[R]` at least `s`.
///
/// `achieved` in the result is exact: the densest subgraph is always among
/// the candidates, so a miss means no subgraph reaches `s`.
pub fn extract_dense_subgraph(g: &Graph, s: Ratio, options: &ExtractOptions) -> Result<DensityReport> {
    if s <= Ratio::from_integer(2) {
        return input(format!("s must exceed 2, got {}", rational::format_ratio(&s)));
    }
    let n = g.vertex_count();
    if n == 0 {
        return input("graph has no vertices");
    }
    let rho = s / 2 * (Ratio::from_integer(1) + options.delta);
    let mut candidates = Vec::new();
    let mut derived = Vec::new();
    if options.pipeline && g.edge_count() > 0 {
        derived = derivations(g, s, options)?;
        let cells = pipeline_cells(n, rho, &derived, options.grid_t_max);
        let per_cell = (options.census_limit / cells.len().max(1) as u64).max(1);
        let found: Vec<Vec<Candidate>> = cells.par_iter().map(|cell| run_cell(g, rho, cell, per_cell)).collect::<Result<_>>()?;
        candidates.extend(found.into_iter().flatten());
    }
    candidates.extend(baseline_candidates(g, &s, options));

    let mut shrunk = Vec::new();
    for c in &candidates {
        if let Some(v) = shrink(g, &c.vertices, &s) {
            if v.len() < c.vertices.len() {
                shrunk.push(Candidate { vertices: v, branch: c.branch, source: format!("{}+shrink", c.source), params: c.params.clone() });
            }
        }
    }
    candidates.extend(shrunk);

    let mut best: Option<DensityReport> = None;
    for c in candidates {
        let mut report = DensityReport::measure(g, c.vertices, Some(s), Criterion::AverageDegree, c.branch, c.source)?;
        report.params = c.params;
        if best.as_ref().is_none_or(|b| better(&report, b)) {
            best = Some(report);
        }
    }
    let mut best = best.expect("the densest-subgraph baseline always yields a candidate");
    if best.params.is_none() {
        best.params = derived.iter().find(|d| d.is_feasible()).map(|d| d.params().clone());
    }
    best.bound_claim = size_bound_claim(g, &s);
    Ok(best)
}

/// `n·d^{−s/(s−2)}` for the graph's average degree `d`.
pub fn size_bound_claim(g: &Graph, s: &Ratio) -> Option<f64> {
    let n = g.vertex_count() as f64;
    let d = rational::to_f64(&g.average_degree().ok()?);
    let s = rational::to_f64(s);
    (d > 0.0 && s > 2.0).then(|| n * d.powf(-s / (s - 2.0)))
}

/// Achieving beats not achieving; then smaller size, then the
/// lexicographically smaller set. Among non-achieving reports the denser
/// one wins.
fn better(a: &DensityReport, b: &DensityReport) -> bool {
    match (a.achieved, b.achieved) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => (a.size(), &a.witness) < (b.size(), &b.witness),
        (false, false) => {
            a.average_degree > b.average_degree
                || (a.average_degree == b.average_degree && (a.size(), &a.witness) < (b.size(), &b.witness))
        }
    }
}

/// Searches for a non-empty subgraph of minimum degree at least `s`: extracts
/// an average-degree-`2s` witness and peels it to minimum degree `s`.
pub fn extract_min_degree_subgraph(g: &Graph, s: Ratio, options: &ExtractOptions) -> Result<DensityReport> {
    if s < Ratio::from_integer(1) {
        return input(format!("s must be at least 1, got {}", rational::format_ratio(&s)));
    }
    if g.vertex_count() == 0 {
        return input("graph has no vertices");
    }
    let dense = if s * 2 > Ratio::from_integer(2) { Some(extract_dense_subgraph(g, s * 2, options)?) } else { None };
    let mut witness = None;
    let mut params = None;
    let mut source = "peel-host";
    if let Some(d) = &dense {
        let peeled = g.induced_subgraph(&d.witness)?.graph.peel_min_degree(s);
        if !peeled.is_empty() {
            let inner = g.induced_subgraph(&d.witness)?;
            witness = Some(peeled.vertices.iter().map(|&v| inner.to_host(v)).collect::<Vec<_>>());
            params = d.params.clone();
            source = "extract+peel";
        }
    }
    if witness.is_none() {
        let peeled = g.peel_min_degree(s);
        if !peeled.is_empty() {
            witness = Some(peeled.vertices);
        }
    }
    let (witness, branch) = match (witness, &dense) {
        (Some(w), Some(d)) if source == "extract+peel" => (w, d.branch),
        (Some(w), _) => (w, Branch::Baseline),
        (None, Some(d)) => (d.witness.clone(), d.branch),
        (None, None) => ((0..g.vertex_count()).collect(), Branch::Baseline),
    };
    let mut report = DensityReport::measure(g, witness, Some(s), Criterion::MinDegree, branch, source)?;
    report.params = params;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_copies;
    use crate::constructions::gnp;

    fn r(n: i64, d: i64) -> Ratio {
        Ratio::new(n, d)
    }

    #[test]
    fn single_copy_union_is_the_tree() {
        let tree = build_caterpillar(2, 3).unwrap();
        let copies = enumerate_copies(&Graph::path(4), &tree, None).unwrap();
        let u = union_of_copies(&copies).unwrap();
        assert_eq!((u.vertex_count(), u.edge_count()), (4, 3));
        let twice = vec![copies[0].clone(), copies[0].clone()];
        assert_eq!(union_of_copies(&twice).unwrap(), u);
    }

    #[test]
    fn two_disjoint_spines_share_leaves() {
        let tree = build_caterpillar(2, 3).unwrap();
        let g = Graph::complete(6);
        let copies: Vec<_> = enumerate_copies(&g, &tree, None).unwrap().into_iter().filter(|c| c.leaf_image == vec![0, 1]).collect();
        let spine = |c: &TreeCopy<'_>| -> Vec<Vertex> {
            let mut v: Vec<_> = c.map.iter().copied().filter(|x| !c.leaf_image.contains(x)).collect();
            v.sort_unstable();
            v
        };
        let mut pick: Vec<_> = copies.iter().filter(|c| spine(c) == [2, 3] || spine(c) == [4, 5]).cloned().collect();
        pick.dedup_by_key(|c| spine(c));
        let mut spines: Vec<_> = pick.iter().map(spine).collect();
        spines.sort();
        assert_eq!(spines, vec![vec![2, 3], vec![4, 5]]);
        let u = union_of_copies(&pick).unwrap();
        assert_eq!((u.vertex_count(), u.edge_count()), (6, 6));
    }

    #[test]
    fn union_rejects_mixed_leaf_images() {
        let tree = build_caterpillar(2, 3).unwrap();
        let copies = enumerate_copies(&Graph::complete(5), &tree, None).unwrap();
        let a = copies.iter().find(|c| c.leaf_image == vec![0, 1]).unwrap().clone();
        let b = copies.iter().find(|c| c.leaf_image == vec![0, 2]).unwrap().clone();
        assert!(union_of_copies(&[a, b]).is_err());
        assert!(union_of_copies(&[]).is_err());
    }

    #[test]
    fn subcollection_of_disjoint_copies() {
        let tree = build_caterpillar(2, 3).unwrap();
        let g = Graph::from_edge_list(400, (0..100).flat_map(|i| [(4 * i, 4 * i + 1), (4 * i + 1, 4 * i + 2), (4 * i + 2, 4 * i + 3)])).unwrap();
        let copies = enumerate_copies(&g, &tree, None).unwrap();
        assert_eq!(copies.len(), 100);
        let chosen = select_subcollection(&copies, 21, 4).unwrap();
        assert_eq!(chosen.len(), 5);
        assert!(select_subcollection(&copies[..2], 21, 4).is_err());
        assert!(select_subcollection(&copies, 4, 4).is_err());
    }

    #[test]
    fn subcollection_with_shared_leaves() {
        let tree = build_caterpillar(2, 3).unwrap();
        let copies: Vec<_> =
            enumerate_copies(&Graph::complete(12), &tree, None).unwrap().into_iter().filter(|c| c.leaf_image == vec![0, 1]).collect();
        let chosen = select_subcollection(&copies, 10, 4).unwrap();
        let span: BTreeSet<_> = chosen.iter().flat_map(|c| c.map.iter().copied()).collect();
        assert!((6..=10).contains(&span.len()));
    }

    #[test]
    fn clique_gives_k4() {
        let rep = extract_dense_subgraph(&Graph::complete(10), r(3, 1), &ExtractOptions::default()).unwrap();
        assert!(rep.achieved);
        assert_eq!(rep.witness, vec![0, 1, 2, 3]);
        assert_eq!(rep.average_degree, r(3, 1));
        rep.validate(&Graph::complete(10)).unwrap();
    }

    #[test]
    fn cycle_never_achieves() {
        let rep = extract_dense_subgraph(&Graph::cycle(100), r(3, 1), &ExtractOptions::default()).unwrap();
        assert!(!rep.achieved);
        assert_eq!(rep.average_degree, r(2, 1));
    }

    #[test]
    fn small_targets_are_rejected() {
        assert!(extract_dense_subgraph(&Graph::complete(5), r(2, 1), &ExtractOptions::default()).is_err());
        assert!(extract_dense_subgraph(&Graph::empty(0), r(3, 1), &ExtractOptions::default()).is_err());
    }

    #[test]
    fn never_worse_than_baselines() {
        let g = gnp(120, 10.0 / 119.0, 4).unwrap();
        let s = r(3, 1);
        let full = extract_dense_subgraph(&g, s, &ExtractOptions { census_limit: 200_000, ..Default::default() }).unwrap();
        let base = extract_dense_subgraph(&g, s, &ExtractOptions { pipeline: false, ..Default::default() }).unwrap();
        assert!(full.achieved);
        assert!(full.size() <= base.size());
        let two_core = g.peel_min_degree(r(2, 1));
        assert!(full.size() <= two_core.vertices.len());
    }

    #[test]
    fn pipeline_candidates_satisfy_union_bound() {
        let g = gnp(30, 0.5, 11).unwrap();
        let rho = r(3, 2);
        let cell = (6, 3, vec![12, 30], ParamOrigin::Grid);
        let found = run_cell(&g, rho, &cell, 10_000).unwrap();
        assert!(!found.is_empty());
        for c in &found {
            let e = g.induced_edge_count(&c.vertices);
            // the union of copies is a subgraph of G[R], and T_{3,5} has ρ_T = 5/3
            assert!(3 * e >= 5 * (c.vertices.len() - 3));
        }
    }

    #[test]
    fn min_degree_variants() {
        let opts = ExtractOptions::default();
        let rep = extract_min_degree_subgraph(&Graph::complete(10), r(2, 1), &opts).unwrap();
        assert!(rep.achieved && rep.size() >= 4 && rep.min_degree >= 2);
        let tree = Graph::from_edge_list(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        assert!(!extract_min_degree_subgraph(&tree, r(2, 1), &opts).unwrap().achieved);
        let rep = extract_min_degree_subgraph(&Graph::cycle(6), r(2, 1), &opts).unwrap();
        assert!(rep.achieved);
        assert_eq!(rep.witness, (0..6).collect::<Vec<_>>());
    }
}
