//! Constructive embeddings of small bounded-degree trees.
//!
//! Placement is greedy with backtracking: the spine goes first (breadth-first
//! order for other trees), and each tree vertex tries the free neighbors of
//! its parent's image in order of decreasing residual degree, then id.

use crate::census::TreeCopy;
use crate::error::{input, Result};
use crate::graph::{ExpansionMode, ExpansionVerdict, Graph, Vertex, EXPANSION_EXACT_CAP};
use crate::rational::{self, Ratio};
use crate::subsets::subsets_up_to;
use crate::tree::Tree;

/// Backtracks allowed before the search gives up.
pub const BACKTRACK_LIMIT: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbedOutcome<'t> {
    Embedded(TreeCopy<'t>),
    NotFound,
    BudgetExhausted,
}

impl<'t> EmbedOutcome<'t> {
    pub fn copy(&self) -> Option<&TreeCopy<'t>> {
        match self {
            EmbedOutcome::Embedded(c) => Some(c),
            _ => None,
        }
    }
}

/// Tree vertices in placement order with each one's parent (`None` for the
/// root).
fn placement_order(tree: &Tree) -> Vec<(Vertex, Option<Vertex>)> {
    let g = tree.graph();
    let t = tree.vertex_count();
    let mut order = Vec::with_capacity(t);
    let mut placed = vec![false; t];
    if let Some(spine) = tree.spine().filter(|s| !s.is_empty()) {
        for (i, &v) in spine.iter().enumerate() {
            order.push((v, (i > 0).then(|| spine[i - 1])));
            placed[v] = true;
        }
        for &v in spine {
            for &u in g.neighbors(v) {
                if !placed[u] {
                    placed[u] = true;
                    order.push((u, Some(v)));
                }
            }
        }
        return order;
    }
    let root = (0..t).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
    placed[root] = true;
    order.push((root, None));
    let mut head = 0;
    while head < order.len() {
        let x = order[head].0;
        head += 1;
        for &y in g.neighbors(x) {
            if !placed[y] {
                placed[y] = true;
                order.push((y, Some(x)));
            }
        }
    }
    order
}

struct Placer<'a> {
    g: &'a Graph,
    tree: &'a Tree,
    order: Vec<(Vertex, Option<Vertex>)>,
    map: Vec<Vertex>,
    used: Vec<bool>,
    residual: Vec<usize>,
    backtracks: u64,
}

enum Step {
    Done,
    Dead,
    OutOfBudget,
}

impl Placer<'_> {
    fn place(&mut self, v: Vertex) {
        self.used[v] = true;
        for &u in self.g.neighbors(v) {
            self.residual[u] -= 1;
        }
    }

    fn unplace(&mut self, v: Vertex) {
        self.used[v] = false;
        for &u in self.g.neighbors(v) {
            self.residual[u] += 1;
        }
    }

    fn run(&mut self, depth: usize) -> Step {
        if depth == self.order.len() {
            return Step::Done;
        }
        let (x, parent) = self.order[depth];
        let need = self.tree.graph().degree(x);
        let pool: Vec<Vertex> = match parent {
            None => (0..self.g.vertex_count()).collect(),
            Some(p) => self.g.neighbors(self.map[p]).to_vec(),
        };
        let mut candidates: Vec<Vertex> = pool.into_iter().filter(|&v| !self.used[v] && self.g.degree(v) >= need).collect();
        candidates.sort_by_key(|&v| (std::cmp::Reverse(self.residual[v]), v));
        for v in candidates {
            self.place(v);
            self.map[x] = v;
            match self.run(depth + 1) {
                Step::Done => return Step::Done,
                Step::OutOfBudget => return Step::OutOfBudget,
                Step::Dead => {}
            }
            self.unplace(v);
            self.backtracks += 1;
            if self.backtracks > BACKTRACK_LIMIT {
                return Step::OutOfBudget;
            }
        }
        Step::Dead
    }
}

/// Embeds `tree` (at most `m` vertices, maximum degree at most `k`) into
/// `g`. Succeeds whenever `g` passes the exact `(k, m)` expansion check.
pub fn embed_tree_in_expander<'t>(g: &Graph, tree: &'t Tree, k: usize, m: usize) -> Result<EmbedOutcome<'t>> {
    if tree.vertex_count() > m {
        return input(format!("tree has {} vertices, more than m = {m}", tree.vertex_count()));
    }
    if tree.max_degree() > k {
        return input(format!("tree has maximum degree {}, more than k = {k}", tree.max_degree()));
    }
    Ok(embed_any(g, tree))
}

fn embed_any<'t>(g: &Graph, tree: &'t Tree) -> EmbedOutcome<'t> {
    if g.vertex_count() < tree.vertex_count() {
        return EmbedOutcome::NotFound;
    }
    let mut placer = Placer {
        g,
        tree,
        order: placement_order(tree),
        map: vec![usize::MAX; tree.vertex_count()],
        used: vec![false; g.vertex_count()],
        residual: (0..g.vertex_count()).map(|v| g.degree(v)).collect(),
        backtracks: 0,
    };
    match placer.run(0) {
        Step::Done => {
            let map = placer.map;
            let mut leaf_image: Vec<Vertex> = tree.leaves().iter().map(|&l| map[l]).collect();
            leaf_image.sort_unstable();
            EmbedOutcome::Embedded(TreeCopy { tree, map, leaf_image })
        }
        Step::Dead => EmbedOutcome::NotFound,
        Step::OutOfBudget => EmbedOutcome::BudgetExhausted,
    }
}

/// Result of looking for a tree in a graph presumed `(ρ, r)`-sparse.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseTreeSearch<'t> {
    pub outcome: EmbedOutcome<'t>,
    /// Vertices left after peeling to minimum degree `2ρ(k+2)`.
    pub peeled: Vec<Vertex>,
    /// `avg(G) ≥ 4ρ(k+2)`, the hypothesis under which success is guaranteed.
    pub density_hypothesis: bool,
    /// On failure: a set `R = S ∪ Γ(S)` in the peeled graph with `|R| ≤ r`
    /// and `e(G[R]) > ρ|R|`, showing `G` is not `(ρ, r)`-sparse.
    pub dense_witness: Option<Vec<Vertex>>,
}

/// Peels `g` to minimum degree `2ρ(k+2)` and embeds `tree` there, with `k`
/// the tree's maximum degree. Requires `2(k+2)·|V(T)| ≤ r`.
pub fn find_tree_in_sparse_graph<'t>(g: &Graph, tree: &'t Tree, rho: Ratio, r: usize) -> Result<SparseTreeSearch<'t>> {
    if !rational::is_positive(&rho) {
        return input("ρ must be positive");
    }
    let k = tree.max_degree();
    let t = tree.vertex_count();
    if 2 * (k + 2) * t > r {
        return input(format!("tree has {t} vertices, more than r/(2(k+2)) = {r}/{}", 2 * (k + 2)));
    }
    let factor = Ratio::from_integer((k + 2) as i64);
    let density_hypothesis = g.vertex_count() > 0
        && rational::average_degree(g.edge_count(), g.vertex_count()) >= rho * factor * 4;
    let peeled = g.peel_min_degree(rho * factor * 2);
    let outcome = match embed_any(&peeled.graph, tree) {
        EmbedOutcome::Embedded(copy) => {
            let map: Vec<Vertex> = copy.map.iter().map(|&v| peeled.to_host(v)).collect();
            let mut leaf_image: Vec<Vertex> = copy.leaf_image.iter().map(|&v| peeled.to_host(v)).collect();
            leaf_image.sort_unstable();
            EmbedOutcome::Embedded(TreeCopy { tree, map, leaf_image })
        }
        other => other,
    };
    let mut dense_witness = None;
    if outcome.copy().is_none() && !peeled.is_empty() {
        let n = peeled.graph.vertex_count();
        let top = (2 * t).saturating_sub(2).min(n) as u64;
        if subsets_up_to(n as u64, top) <= EXPANSION_EXACT_CAP as u128 {
            if let ExpansionVerdict::Fails(s) = peeled.graph.expansion_check(k.max(1), t, ExpansionMode::Exact)? {
                let mut local = peeled.graph.neighborhood(&s)?;
                local.extend_from_slice(&s);
                local.sort_unstable();
                local.dedup();
                let host: Vec<Vertex> = local.iter().map(|&v| peeled.to_host(v)).collect();
                let e = g.induced_edge_count(&host);
                if host.len() <= r && rational::gt_scaled(e as u64, &rho, host.len() as u64) {
                    dense_witness = Some(host);
                }
            }
        }
    }
    Ok(SparseTreeSearch { outcome, peeled: peeled.vertices, density_hypothesis, dense_witness })
}
