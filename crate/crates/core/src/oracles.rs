//! Exhaustive reference implementations. They share no code path with the
//! fast routines they check: subset scans use bit masks or an adjacency
//! matrix, and copy counting deduplicates injective maps by edge set.
//!
//! Every oracle refuses with a capability error instead of approximating
//! once its budget is exceeded. Witnesses are the lexicographically smallest
//! optimal vertex sets.

use std::collections::HashSet;

use crate::budget::{Deadline, OracleBudget};
use crate::error::{capability, input, Error, Result};
use crate::graph::{Graph, Method, SparsityCertificate, Verdict, Vertex};
use crate::rational::{self, Ratio};
use crate::report::{Branch, Criterion, DensityReport};
use crate::subsets::{binomial, Combinations};
use crate::tree::Tree;

/// Edge counter for arbitrary vertex subsets.
enum Counter {
    Masks(Vec<u64>),
    Matrix { n: usize, adj: Vec<bool> },
}

impl Counter {
    fn new(g: &Graph) -> Self {
        match g.adjacency_masks() {
            Some(m) => Counter::Masks(m),
            None => {
                let n = g.vertex_count();
                let mut adj = vec![false; n * n];
                for (u, v) in g.edges() {
                    adj[u * n + v] = true;
                    adj[v * n + u] = true;
                }
                Counter::Matrix { n, adj }
            }
        }
    }

    fn edges(&self, set: &[Vertex]) -> usize {
        match self {
            Counter::Masks(masks) => {
                let mask = set.iter().fold(0u64, |m, &v| m | 1 << v);
                set.iter().map(|&v| (masks[v] & mask).count_ones() as usize).sum::<usize>() / 2
            }
            Counter::Matrix { n, adj } => {
                let mut e = 0;
                for (i, &u) in set.iter().enumerate() {
                    for &v in &set[i + 1..] {
                        e += adj[u * n + v] as usize;
                    }
                }
                e
            }
        }
    }
}

/// Visits every subset of size `k`, in lexicographic order, with its induced
/// edge count. Stops early when `f` returns `true`.
fn scan_size<F>(counter: &Counter, n: usize, k: usize, clock: &mut Deadline, mut f: F) -> Result<bool>
where
    F: FnMut(&[Vertex], usize) -> bool,
{
    let mut combos = Combinations::new(n, k);
    while let Some(set) = combos.next_combination() {
        clock.tick("subset scan")?;
        if f(set, counter.edges(set)) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn total_subsets(n: usize, sizes: impl Iterator<Item = usize>) -> u128 {
    sizes.fold(0u128, |acc, k| acc.saturating_add(binomial(n as u64, k as u64)))
}

/// Densest induced subgraph on at most `tmax` vertices by exhaustive scan.
/// The report's `average_degree` is the maximum; its witness is the
/// lexicographically smallest set attaining it.
pub fn densest_subgraph_at_most(g: &Graph, tmax: usize, budget: &OracleBudget) -> Result<DensityReport> {
    let n = g.vertex_count();
    if n == 0 || tmax == 0 {
        return input("the densest-subgraph oracle needs a non-empty graph and tmax ≥ 1");
    }
    let top = tmax.min(n);
    budget.check_subsets(total_subsets(n, 1..=top), "densest-subgraph oracle")?;
    let counter = Counter::new(g);
    let mut clock = budget.clock();
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    for k in 1..=top {
        scan_size(&counter, n, k, &mut clock, |set, e| {
            let better = match &best {
                None => true,
                Some((be, bs)) => {
                    let lhs = e as u128 * bs.len() as u128;
                    let rhs = *be as u128 * set.len() as u128;
                    lhs > rhs || (lhs == rhs && set < bs.as_slice())
                }
            };
            if better {
                best = Some((e, set.to_vec()));
            }
            false
        })?;
    }
    let (_, witness) = best.expect("at least one subset was scanned");
    DensityReport::measure(g, witness, None, Criterion::AverageDegree, Branch::Oracle, "exhaustive-densest")
}

/// Smallest `|R|` with average degree of `G[R]` at least `s`, and the
/// lexicographically smallest such `R`.
pub fn min_dense_witness(g: &Graph, s: Ratio, budget: &OracleBudget) -> Result<Option<Vec<Vertex>>> {
    let n = g.vertex_count();
    let counter = Counter::new(g);
    let mut clock = budget.clock();
    let mut spent = 0u128;
    for k in 1..=n {
        // a k-set carries at most C(k, 2) edges
        if !rational::ge_scaled((k * (k - 1)) as u64, &s, k as u64) {
            continue;
        }
        spent = spent.saturating_add(binomial(n as u64, k as u64));
        if spent > budget.max_subsets as u128 {
            return capability(format!(
                "minimum dense size search exhausted its budget of {} subsets at size {k}",
                budget.max_subsets
            ));
        }
        let mut found = None;
        scan_size(&counter, n, k, &mut clock, |set, e| {
            if rational::ge_scaled(2 * e as u64, &s, set.len() as u64) {
                found = Some(set.to_vec());
                return true;
            }
            false
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

pub fn min_dense_size(g: &Graph, s: Ratio, budget: &OracleBudget) -> Result<Option<usize>> {
    Ok(min_dense_witness(g, s, budget)?.map(|w| w.len()))
}

/// Exact `(ρ, r)`-sparsity through [`densest_subgraph_at_most`].
pub fn is_sparse_exact(g: &Graph, rho: Ratio, r: usize, budget: &OracleBudget) -> Result<SparsityCertificate> {
    let sparse = SparsityCertificate { rho, r, verdict: Verdict::Sparse, witness: None, method: Method::Exact };
    if g.vertex_count() == 0 || r == 0 {
        return Ok(sparse);
    }
    let best = densest_subgraph_at_most(g, r, budget)?;
    if rational::gt_scaled(best.edges as u64, &rho, best.size() as u64) {
        Ok(SparsityCertificate::not_sparse(rho, r, best.witness, Method::Exact))
    } else {
        Ok(sparse)
    }
}

/// Canonical key of a copy: its edge set, or its vertex for a one-vertex tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum CopyKey {
    /// Bit `pair_index(u, v)` set per edge; hosts with at most 16 vertices.
    Small(u128),
    Edges(Vec<(Vertex, Vertex)>),
}

fn pair_index(u: Vertex, v: Vertex) -> u32 {
    let (u, v) = (u.min(v) as u32, u.max(v) as u32);
    v * (v - 1) / 2 + u
}

/// Distinct copies of `tree` in `g`, each as a sorted host edge list (for a
/// one-vertex tree, the list `[(v, v)]`). Works for any tree.
pub fn copies_reference(g: &Graph, tree: &Tree, budget: &OracleBudget) -> Result<Vec<Vec<(Vertex, Vertex)>>> {
    let t = tree.vertex_count();
    let n = g.vertex_count();
    if n < t {
        return Ok(Vec::new());
    }
    if t == 1 {
        return Ok((0..n).map(|v| vec![(v, v)]).collect());
    }
    // BFS order from tree vertex 0; every later vertex has its parent earlier
    let tg = tree.graph();
    let mut order = vec![0];
    let mut parent = vec![usize::MAX; t];
    let mut seen = vec![false; t];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in tg.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let tree_edges: Vec<(Vertex, Vertex)> = tg.edges().collect();
    let small = n <= 16;
    let mut state = Search {
        g,
        order: &order,
        parent: &parent,
        map: vec![usize::MAX; t],
        used: vec![false; n],
        keys: HashSet::new(),
        embeddings: 0,
        budget,
        clock: budget.clock(),
    };
    state.run(0, &|map: &[Vertex]| {
        if small {
            CopyKey::Small(tree_edges.iter().fold(0u128, |k, &(x, y)| k | 1u128 << pair_index(map[x], map[y])))
        } else {
            let mut edges: Vec<_> = tree_edges.iter().map(|&(x, y)| (map[x].min(map[y]), map[x].max(map[y]))).collect();
            edges.sort_unstable();
            CopyKey::Edges(edges)
        }
    })?;
    let mut out: Vec<Vec<(Vertex, Vertex)>> = state
        .keys
        .into_iter()
        .map(|key| match key {
            CopyKey::Edges(e) => e,
            CopyKey::Small(bits) => {
                let mut e = Vec::new();
                for v in 1..n {
                    for u in 0..v {
                        if bits >> pair_index(u, v) & 1 == 1 {
                            e.push((u, v));
                        }
                    }
                }
                e.sort_unstable();
                e
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

struct Search<'a> {
    g: &'a Graph,
    order: &'a [Vertex],
    parent: &'a [Vertex],
    map: Vec<Vertex>,
    used: Vec<bool>,
    keys: HashSet<CopyKey>,
    embeddings: u64,
    budget: &'a OracleBudget,
    clock: Deadline,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, key: &dyn Fn(&[Vertex]) -> CopyKey) -> Result<()> {
        if depth == self.order.len() {
            self.embeddings += 1;
            if self.embeddings > self.budget.max_embeddings {
                return Err(Error::Capability(format!(
                    "reference copy count exceeded its budget of {} embeddings",
                    self.budget.max_embeddings
                )));
            }
            self.clock.tick("reference copy count")?;
            self.keys.insert(key(&self.map));
            return Ok(());
        }
        let x = self.order[depth];
        let candidates: Vec<Vertex> = if depth == 0 {
            (0..self.g.vertex_count()).collect()
        } else {
            self.g.neighbors(self.map[self.parent[x]]).to_vec()
        };
        for v in candidates {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.map[x] = v;
            self.run(depth + 1, key)?;
            self.used[v] = false;
        }
        self.map[x] = usize::MAX;
        Ok(())
    }
}

/// Number of distinct copies of `tree` in `g` by exhaustive backtracking.
pub fn count_copies_reference(g: &Graph, tree: &Tree, budget: &OracleBudget) -> Result<u64> {
    Ok(copies_reference(g, tree, budget)?.len() as u64)
}

/// Leaf image of a copy given as an edge list: its degree-one vertices.
pub fn leaf_image_of(edges: &[(Vertex, Vertex)]) -> Vec<Vertex> {
    let mut deg = std::collections::BTreeMap::<Vertex, usize>::new();
    for &(u, v) in edges {
        if u != v {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
    }
    deg.into_iter().filter(|&(_, d)| d == 1).map(|(v, _)| v).collect()
}

/// Exhaustive check of `|Γ(S)| ≥ (k+1)|S|` over all sets with `|S| ≤ 2m − 2`.
/// Returns the lexicographically first violating set of smallest size.
pub fn expansion_violator(g: &Graph, k: usize, m: usize, budget: &OracleBudget) -> Result<Option<Vec<Vertex>>> {
    let n = g.vertex_count();
    if k == 0 || m == 0 {
        return input("expansion needs k ≥ 1 and m ≥ 1");
    }
    let top = (2 * m).saturating_sub(2).min(n);
    budget.check_subsets(total_subsets(n, 1..=top), "expansion oracle")?;
    let mut clock = budget.clock();
    for size in 1..=top {
        let mut combos = Combinations::new(n, size);
        while let Some(set) = combos.next_combination() {
            clock.tick("expansion oracle")?;
            let mut seen = vec![false; n];
            for &v in set {
                for &u in g.neighbors(v) {
                    seen[u] = true;
                }
            }
            let gamma = seen.iter().filter(|&&x| x).count();
            if gamma < (k + 1) * size {
                return Ok(Some(set.to_vec()));
            }
        }
    }
    Ok(None)
}

/// Whether any injective edge-preserving map of `tree` into `g` exists.
pub fn has_embedding(g: &Graph, tree: &Tree, budget: &OracleBudget) -> Result<bool> {
    let tight = OracleBudget { max_embeddings: 1, ..*budget };
    match copies_reference(g, tree, &tight) {
        Ok(copies) => Ok(!copies.is_empty()),
        Err(Error::Capability(msg)) if msg.contains("embeddings") => Ok(true),
        Err(e) => Err(e),
    }
}
