//! Undirected simple graphs over dense vertex ids `0..n`, plus the density,
//! peeling, expansion and sparsity primitives the rest of the crate builds on.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::budget::OracleBudget;
use crate::densest::densest_subgraph;
use crate::error::{capability, input, Error, Result};
use crate::rational::{self, Ratio};
use crate::rng;
use crate::subsets::{subsets_up_to, Combinations};

pub type Vertex = usize;

/// Immutable undirected simple graph. Neighbor lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a simple graph; duplicate pairs and self-loops are dropped.
    pub fn from_edge_list<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            if u >= n || v >= n {
                return input(format!("edge ({u}, {v}) has an endpoint outside 0..{n}"));
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Self { adj, edge_count: edge_count / 2 })
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Self { adj, edge_count: n * n.saturating_sub(1) / 2 }
    }

    pub fn path(n: usize) -> Self {
        Self::from_edge_list(n, (1..n).map(|v| (v - 1, v))).expect("path edges in range")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_edge_list(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges in range")
    }

    /// `K_{1,leaves}` with center `0`.
    pub fn star(leaves: usize) -> Self {
        Self::from_edge_list(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v < self.adj.len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    /// Degree sequence `d₁ ≥ d₂ ≥ … ≥ dₙ`.
    pub fn degrees_desc(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Exact `2m/n`. The empty vertex set has no average degree.
    pub fn average_degree(&self) -> Result<Ratio> {
        if self.adj.is_empty() {
            return input("average degree of a graph with no vertices is undefined");
        }
        Ok(rational::average_degree(self.edge_count, self.adj.len()))
    }

    /// Neighbor bit-masks, available when `n ≤ 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.adj.len() > 64 {
            return None;
        }
        Some(self.adj.iter().map(|list| list.iter().fold(0u64, |m, &v| m | (1 << v))).collect())
    }

    /// Number of edges of `G[vertices]`. `vertices` need not be sorted but
    /// must be distinct and in range.
    pub fn induced_edge_count(&self, vertices: &[Vertex]) -> usize {
        let mut mark = vec![false; self.adj.len()];
        for &v in vertices {
            mark[v] = true;
        }
        let twice: usize = vertices.iter().map(|&v| self.adj[v].iter().filter(|&&u| mark[u]).count()).sum();
        twice / 2
    }

    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<InducedSubgraph> {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&v) = sorted.iter().find(|&&v| v >= self.adj.len()) {
            return input(format!("vertex {v} is not in the graph"));
        }
        let mut local = vec![usize::MAX; self.adj.len()];
        for (i, &v) in sorted.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); sorted.len()];
        let mut edge_count = 0;
        for (i, &v) in sorted.iter().enumerate() {
            adj[i] = self.adj[v].iter().filter_map(|&u| (local[u] != usize::MAX).then_some(local[u])).collect();
            edge_count += adj[i].len();
        }
        Ok(InducedSubgraph { vertices: sorted, graph: Graph { adj, edge_count: edge_count / 2 } })
    }

    /// `Γ_G(S)`: every vertex with at least one neighbor in `S`. May
    /// intersect `S`.
    pub fn neighborhood(&self, set: &[Vertex]) -> Result<Vec<Vertex>> {
        let mut mark = vec![false; self.adj.len()];
        for &v in set {
            if v >= self.adj.len() {
                return input(format!("vertex {v} is not in the graph"));
            }
            for &u in &self.adj[v] {
                mark[u] = true;
            }
        }
        Ok((0..self.adj.len()).filter(|&v| mark[v]).collect())
    }

    /// The unique maximal induced subgraph with minimum degree at least
    /// `theta` (possibly empty).
    pub fn peel_min_degree(&self, theta: Ratio) -> InducedSubgraph {
        let order: Vec<Vertex> = (0..self.adj.len()).collect();
        let kept = self.peel_in_order(theta, &order);
        self.induced_subgraph(&kept).expect("peeled vertices are in range")
    }

    /// Peeling with an explicit initial priority among low-degree vertices.
    /// The surviving set does not depend on `order`.
    pub(crate) fn peel_in_order(&self, theta: Ratio, order: &[Vertex]) -> Vec<Vertex> {
        let need = rational::ceil(&theta).max(0) as usize;
        let n = self.adj.len();
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut queued = vec![false; n];
        let mut work = VecDeque::new();
        for &v in order {
            if degree[v] < need && !queued[v] {
                queued[v] = true;
                work.push_back(v);
            }
        }
        while let Some(v) = work.pop_front() {
            removed[v] = true;
            for &u in &self.adj[v] {
                if removed[u] {
                    continue;
                }
                degree[u] -= 1;
                if degree[u] < need && !queued[u] {
                    queued[u] = true;
                    work.push_back(u);
                }
            }
        }
        (0..n).filter(|&v| !removed[v]).collect()
    }

    /// Checks the expansion hypothesis `|Γ(S)| ≥ (k+1)|S|` for every
    /// non-empty `S` with `|S| ≤ 2m − 2`.
    pub fn expansion_check(&self, k: usize, m: usize, mode: ExpansionMode) -> Result<ExpansionVerdict> {
        if k == 0 || m == 0 {
            return input("expansion check needs k ≥ 1 and m ≥ 1");
        }
        let n = self.adj.len();
        if n == 0 {
            return input("expansion check on a graph with no vertices");
        }
        let max_size = (2 * m - 2).min(n);
        let factor = k + 1;
        let masks = self.adjacency_masks();
        let mut scratch = vec![0u32; n];
        let mut stamp = 0u32;
        let mut violates = |set: &[Vertex]| -> bool {
            let gamma = match &masks {
                Some(masks) => set.iter().fold(0u64, |acc, &v| acc | masks[v]).count_ones() as usize,
                None => {
                    stamp += 1;
                    let mut count = 0;
                    for &v in set {
                        for &u in &self.adj[v] {
                            if scratch[u] != stamp {
                                scratch[u] = stamp;
                                count += 1;
                            }
                        }
                    }
                    count
                }
            };
            gamma < factor * set.len()
        };
        match mode {
            ExpansionMode::Exact => {
                let needed = subsets_up_to(n as u64, max_size as u64);
                if needed > EXPANSION_EXACT_CAP as u128 {
                    return capability(format!(
                        "exact expansion check needs {needed} subsets (cap {EXPANSION_EXACT_CAP}); use sampled mode"
                    ));
                }
                for size in 1..=max_size {
                    let mut combos = Combinations::new(n, size);
                    while let Some(set) = combos.next_combination() {
                        if violates(set) {
                            return Ok(ExpansionVerdict::Fails(set.to_vec()));
                        }
                    }
                }
                Ok(ExpansionVerdict::Pass)
            }
            ExpansionMode::Sampled { samples, seed } => {
                if max_size == 0 {
                    return Ok(ExpansionVerdict::Pass);
                }
                let mut rng = rng::from_seed(seed);
                // singletons are cheap and catch the most common failures
                for v in 0..n {
                    if violates(&[v]) {
                        return Ok(ExpansionVerdict::Fails(vec![v]));
                    }
                }
                for _ in 0..samples {
                    let size = rng.random_range(1..=max_size);
                    let mut set = sample(&mut rng, n, size).into_vec();
                    set.sort_unstable();
                    if violates(&set) {
                        return Ok(ExpansionVerdict::Fails(set));
                    }
                }
                Ok(ExpansionVerdict::PassProbable)
            }
        }
    }

    /// Decides (or searches for a counterexample to) `(ρ, r)`-sparsity:
    /// every `R` with `|R| ≤ r` spans at most `ρ|R|` edges.
    pub fn is_sparse(&self, rho: Ratio, r: usize, mode: SparsityMode, budget: &OracleBudget) -> Result<SparsityCertificate> {
        if r == 0 {
            return input("sparsity radius r must be at least 1");
        }
        if !rational::is_positive(&rho) {
            return input("sparsity ratio rho must be positive");
        }
        match mode {
            SparsityMode::Exact => self.is_sparse_exact(rho, r, budget),
            SparsityMode::Heuristic { seed } => Ok(self.is_sparse_heuristic(rho, r, seed)),
        }
    }

    fn is_sparse_exact(&self, rho: Ratio, r: usize, budget: &OracleBudget) -> Result<SparsityCertificate> {
        let sparse = SparsityCertificate { rho, r, verdict: Verdict::Sparse, witness: None, method: Method::Exact };
        let n = self.adj.len();
        let size_cap = r.min(n);
        if size_cap == 0 || self.edge_count == 0 {
            return Ok(sparse);
        }
        // A clique on size_cap vertices has density (size_cap − 1)/2.
        if !rational::gt_scaled((size_cap - 1) as u64, &rho, 2) {
            return Ok(sparse);
        }
        // The global densest subgraph bounds every R at once.
        let densest = densest_subgraph(self).expect("graph is non-empty");
        if !rational::gt_scaled(densest.edges as u64, &rho, densest.vertices.len() as u64) {
            return Ok(sparse);
        }
        if densest.vertices.len() <= r {
            return Ok(SparsityCertificate::not_sparse(rho, r, densest.vertices, Method::Exact));
        }
        budget.check_subsets(subsets_up_to(n as u64, size_cap as u64), "exact sparsity check")?;
        let mut search = SubsetSearch { graph: self, rho, cap: size_cap, chosen: Vec::new(), clock: budget.clock() };
        match search.run(0, 0)? {
            Some(witness) => Ok(SparsityCertificate::not_sparse(rho, r, witness, Method::Exact)),
            None => Ok(sparse),
        }
    }

    fn is_sparse_heuristic(&self, rho: Ratio, r: usize, seed: u64) -> SparsityCertificate {
        let n = self.adj.len();
        let mut best: Option<Vec<Vertex>> = None;
        if n > 0 {
            let mut rng = rng::from_seed(seed);
            let starts = sample(&mut rng, n, n.min(HEURISTIC_RESTARTS)).into_vec();
            for start in starts {
                self.greedy_grow(start, r, |set, edges| {
                    if rational::gt_scaled(edges as u64, &rho, set.len() as u64) {
                        let mut w = set.to_vec();
                        w.sort_unstable();
                        if best.as_ref().is_none_or(|b| (w.len(), &w) < (b.len(), b)) {
                            best = Some(w);
                        }
                        return false;
                    }
                    true
                });
            }
        }
        match best {
            Some(w) => SparsityCertificate::not_sparse(rho, r, w, Method::Heuristic),
            None => SparsityCertificate { rho, r, verdict: Verdict::Unknown, witness: None, method: Method::Heuristic },
        }
    }

    /// Grows a set from `start`, always adding the outside vertex with the
    /// most neighbors inside (ties to the smallest id), up to `max_size`
    /// vertices. `visit(set, edges)` sees every prefix and stops the growth by
    /// returning `false`.
    pub(crate) fn greedy_grow<F>(&self, start: Vertex, max_size: usize, mut visit: F)
    where
        F: FnMut(&[Vertex], usize) -> bool,
    {
        let n = self.adj.len();
        let mut gain = vec![0usize; n];
        let mut inside = vec![false; n];
        let mut heap: BinaryHeap<(usize, Reverse<Vertex>)> = BinaryHeap::new();
        let mut set = Vec::with_capacity(max_size.min(n));
        let mut edges = 0;
        let mut next_fresh = 0;
        let mut current = start;
        loop {
            inside[current] = true;
            edges += gain[current];
            set.push(current);
            if !visit(&set, edges) || set.len() >= max_size.min(n) {
                return;
            }
            for &u in &self.adj[current] {
                if !inside[u] {
                    gain[u] += 1;
                    heap.push((gain[u], Reverse(u)));
                }
            }
            current = loop {
                match heap.pop() {
                    Some((g, Reverse(u))) if !inside[u] && gain[u] == g => break u,
                    Some(_) => continue,
                    None => {
                        while inside[next_fresh] {
                            next_fresh += 1;
                        }
                        break next_fresh;
                    }
                }
            };
        }
    }
}

/// Number of random restarts used by the heuristic sparsity search.
pub const HEURISTIC_RESTARTS: usize = 32;

/// Exact expansion checks refuse above this many subsets.
pub const EXPANSION_EXACT_CAP: u64 = 10_000_000;

/// Lexicographic DFS over vertex subsets of size ≤ cap with incremental edge
/// counts. Returns the first subset spanning more than `ρ|R|` edges.
struct SubsetSearch<'a> {
    graph: &'a Graph,
    rho: Ratio,
    cap: usize,
    chosen: Vec<Vertex>,
    clock: crate::budget::Deadline,
}

impl SubsetSearch<'_> {
    fn run(&mut self, from: Vertex, edges: usize) -> Result<Option<Vec<Vertex>>> {
        let n = self.graph.vertex_count();
        for v in from..n {
            self.clock.tick("exact sparsity check")?;
            let added = self.chosen.iter().filter(|&&u| self.graph.has_edge(u, v)).count();
            self.chosen.push(v);
            let e = edges + added;
            if rational::gt_scaled(e as u64, &self.rho, self.chosen.len() as u64) {
                return Ok(Some(self.chosen.clone()));
            }
            if self.chosen.len() < self.cap {
                if let Some(found) = self.run(v + 1, e)? {
                    return Ok(Some(found));
                }
            }
            self.chosen.pop();
        }
        Ok(None)
    }
}

/// A graph induced on a vertex subset, relabelled to `0..k`. `vertices[i]`
/// is the host id of local vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub vertices: Vec<Vertex>,
    pub graph: Graph,
}

impl InducedSubgraph {
    pub fn to_host(&self, local: Vertex) -> Vertex {
        self.vertices[local]
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionVerdict {
    Pass,
    PassProbable,
    Fails(Vec<Vertex>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparsityMode {
    Exact,
    Heuristic { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Sparse,
    NotSparse,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Heuristic,
}

/// Verdict on `(ρ, r)`-sparsity. A `NotSparse` verdict always carries a
/// witness `R` with `|R| ≤ r` and `e(G[R]) > ρ|R|`; `Sparse` only comes from
/// the exact method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityCertificate {
    pub rho: Ratio,
    pub r: usize,
    pub verdict: Verdict,
    pub witness: Option<Vec<Vertex>>,
    pub method: Method,
}

impl SparsityCertificate {
    pub(crate) fn not_sparse(rho: Ratio, r: usize, witness: Vec<Vertex>, method: Method) -> Self {
        Self { rho, r, verdict: Verdict::NotSparse, witness: Some(witness), method }
    }

    /// Re-checks the certificate's own invariants against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        match (self.verdict, &self.witness) {
            (Verdict::NotSparse, Some(w)) => {
                let e = g.induced_edge_count(w);
                if w.len() > self.r || !rational::gt_scaled(e as u64, &self.rho, w.len() as u64) {
                    return Err(Error::Input(format!("witness {w:?} does not violate sparsity")));
                }
            }
            (Verdict::NotSparse, None) => return input("not-sparse verdict without witness"),
            (Verdict::Sparse, _) if self.method != Method::Exact => {
                return input("heuristic method cannot certify sparsity")
            }
            (_, Some(_)) => return input("only not-sparse verdicts carry a witness"),
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;

    fn k4_plus_pendant() -> Graph {
        let mut pairs: Vec<(usize, usize)> = Graph::complete(4).edges().collect();
        pairs.push((3, 4));
        Graph::from_edge_list(5, pairs).unwrap()
    }

    #[test]
    fn drops_duplicates_and_loops() {
        let g = Graph::from_edge_list(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn out_of_range_endpoint_names_pair() {
        let err = Graph::from_edge_list(3, [(0, 1), (1, 3)]).unwrap_err();
        assert!(err.to_string().contains("(1, 3)"), "{err}");
    }

    #[test]
    fn average_degrees() {
        assert_eq!(Graph::empty(5).average_degree().unwrap(), Ratio::from_integer(0));
        assert_eq!(Graph::complete(4).average_degree().unwrap(), Ratio::from_integer(3));
        assert_eq!(Graph::path(4).average_degree().unwrap(), Ratio::new(3, 2));
        assert_eq!(Graph::star(5).average_degree().unwrap(), Ratio::new(5, 3));
        assert!(Graph::empty(0).average_degree().is_err());
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = k4_plus_pendant();
        let sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn peeling_examples() {
        assert_eq!(Graph::complete(4).peel_min_degree(Ratio::new(3, 2)).vertices, vec![0, 1, 2, 3]);
        assert!(Graph::path(4).peel_min_degree(Ratio::from_integer(2)).is_empty());
        let peeled = k4_plus_pendant().peel_min_degree(Ratio::from_integer(2));
        assert_eq!(peeled.vertices, vec![0, 1, 2, 3]);
        assert_eq!(peeled.graph, Graph::complete(4));
    }

    #[test]
    fn peeling_is_order_independent() {
        let mut rng = rng::from_seed(11);
        for _ in 0..50 {
            let n = rng.random_range(1..30);
            let pairs: Vec<_> = (0..n * 2).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
            let g = Graph::from_edge_list(n, pairs).unwrap();
            let theta = Ratio::new(rng.random_range(0..8), 2);
            let base = g.peel_in_order(theta, &(0..n).collect::<Vec<_>>());
            let mut order: Vec<_> = (0..n).collect();
            order.shuffle(&mut rng);
            assert_eq!(g.peel_in_order(theta, &order), base);
        }
    }

    #[test]
    fn neighborhoods() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.neighborhood(&[2]).unwrap(), vec![0, 1, 3]);
        assert!(k4.neighborhood(&[]).unwrap().is_empty());
        assert_eq!(Graph::path(4).neighborhood(&[1]).unwrap(), vec![0, 2]);
        assert!(k4.neighborhood(&[4]).is_err());
    }

    #[test]
    fn expansion_examples() {
        let k10 = Graph::complete(10);
        assert_eq!(k10.expansion_check(2, 2, ExpansionMode::Exact).unwrap(), ExpansionVerdict::Pass);
        // |S| ranges up to 2m − 2 = 4, and any 4-set has |Γ(S)| = 10 < 12.
        assert_eq!(k10.expansion_check(2, 3, ExpansionMode::Exact).unwrap(), ExpansionVerdict::Fails(vec![0, 1, 2, 3]));
        // isolated vertex 5 next to a K5
        let g = Graph::from_edge_list(6, Graph::complete(5).edges()).unwrap();
        assert_eq!(g.expansion_check(1, 2, ExpansionMode::Exact).unwrap(), ExpansionVerdict::Fails(vec![5]));
        // single edge: every singleton already has |Γ| = 1 < 2
        let edge = Graph::path(2);
        match edge.expansion_check(1, 2, ExpansionMode::Exact).unwrap() {
            ExpansionVerdict::Fails(s) => {
                let gamma = edge.neighborhood(&s).unwrap();
                assert!(gamma.len() < 2 * s.len());
            }
            other => panic!("expected failure, got {other:?}"),
        }
        // S = both endpoints also violates: |Γ| = 2 < 4
        assert!(edge.neighborhood(&[0, 1]).unwrap().len() < 4);
    }

    #[test]
    fn expansion_exact_refuses_above_cap() {
        let g = Graph::complete(200);
        let err = g.expansion_check(2, 5, ExpansionMode::Exact).unwrap_err();
        assert!(matches!(err, Error::Capability(_)));
        assert!(err.to_string().contains("sampled"));
        let sampled = g.expansion_check(2, 5, ExpansionMode::Sampled { samples: 500, seed: 1 }).unwrap();
        assert_eq!(sampled, ExpansionVerdict::PassProbable);
    }

    #[test]
    fn sparsity_examples() {
        let budget = OracleBudget::default();
        let k4 = Graph::complete(4).is_sparse(Ratio::from_integer(1), 4, SparsityMode::Exact, &budget).unwrap();
        assert_eq!(k4.verdict, Verdict::NotSparse);
        let w = k4.witness.clone().unwrap();
        assert!(Graph::complete(4).induced_edge_count(&w) > w.len());
        k4.validate(&Graph::complete(4)).unwrap();

        let empty = Graph::empty(6).is_sparse(Ratio::new(1, 3), 5, SparsityMode::Exact, &budget).unwrap();
        assert_eq!(empty.verdict, Verdict::Sparse);

        let c6 = Graph::cycle(6).is_sparse(Ratio::from_integer(1), 6, SparsityMode::Exact, &budget).unwrap();
        assert_eq!(c6.verdict, Verdict::Sparse);
    }

    #[test]
    fn sparsity_enumeration_path_finds_small_witness() {
        // K_{3,3} has density 3/2 but every 4-set spans at most 4 edges, so
        // for r = 4 the densest-subgraph shortcut cannot decide and the subset
        // search has to run.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                pairs.push((u, v));
            }
        }
        pairs.extend((6..10).map(|v| (v - 1, v)));
        let g = Graph::from_edge_list(10, pairs).unwrap();
        let budget = OracleBudget::default();
        let cert = g.is_sparse(Ratio::new(5, 4), 4, SparsityMode::Exact, &budget).unwrap();
        assert_eq!(cert.verdict, Verdict::Sparse);
        let cert = g.is_sparse(Ratio::new(7, 8), 4, SparsityMode::Exact, &budget).unwrap();
        assert_eq!(cert.verdict, Verdict::NotSparse);
        assert_eq!(cert.witness.as_deref(), Some(&[0, 1, 3, 4][..]));
        cert.validate(&g).unwrap();
    }

    #[test]
    fn heuristic_never_claims_sparse() {
        let c6 = Graph::cycle(6).is_sparse(Ratio::from_integer(1), 6, SparsityMode::Heuristic { seed: 3 }, &OracleBudget::default()).unwrap();
        assert_eq!(c6.verdict, Verdict::Unknown);
        let k5 = Graph::complete(5).is_sparse(Ratio::from_integer(1), 5, SparsityMode::Heuristic { seed: 3 }, &OracleBudget::default()).unwrap();
        assert_eq!(k5.verdict, Verdict::NotSparse);
        assert_eq!(k5.witness.as_deref(), Some(&[0, 1, 2, 3][..]));
        k5.validate(&Graph::complete(5)).unwrap();
    }

    #[test]
    fn greedy_grow_visits_prefixes() {
        let mut sizes = Vec::new();
        Graph::complete(6).greedy_grow(2, 4, |set, edges| {
            sizes.push((set.len(), edges));
            true
        });
        assert_eq!(sizes, vec![(1, 0), (2, 1), (3, 3), (4, 6)]);
    }
}
