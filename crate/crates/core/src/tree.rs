//! Trees with a designated leaf set, the caterpillars `T_{a,b}`, and the
//! balancedness machinery: `ρ_T(S) = e_S / |S|` where `e_S` counts tree edges
//! touching `S`, and `T` is balanced when no non-empty set of non-leaves has
//! `ρ_T(S) < ρ_T`.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{capability, input, Result};
use crate::graph::{Graph, Vertex};
use crate::rational::Ratio;

/// Largest number of non-leaves `is_balanced` will enumerate subsets of.
pub const BALANCE_CAP: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
    leaves: Vec<Vertex>,
    is_leaf: Vec<bool>,
    spine: Option<Vec<Vertex>>,
    known_balanced: bool,
    name: Option<String>,
}

impl Tree {
    /// Validates that `graph` is a tree and records a spine when the
    /// non-leaves induce a path.
    pub fn from_graph(graph: Graph) -> Result<Self> {
        let t = graph.vertex_count();
        if t == 0 {
            return input("a tree needs at least one vertex");
        }
        if graph.edge_count() != t - 1 || !is_connected(&graph) {
            return input("graph is not a tree (needs to be connected with n − 1 edges)");
        }
        let is_leaf: Vec<bool> = (0..t).map(|v| graph.degree(v) == 1).collect();
        let leaves = (0..t).filter(|&v| is_leaf[v]).collect();
        let spine = detect_spine(&graph, &is_leaf);
        Ok(Self { graph, leaves, is_leaf, spine, known_balanced: false, name: None })
    }

    /// Like [`Tree::from_graph`] but takes the spine order from the caller
    /// and checks it.
    pub fn with_spine(graph: Graph, spine: Vec<Vertex>) -> Result<Self> {
        let mut tree = Self::from_graph(graph)?;
        if tree.spine.is_none() {
            return input("spine given for a tree that is not a caterpillar");
        }
        let mut sorted = spine.clone();
        sorted.sort_unstable();
        let non_leaves = tree.non_leaves();
        if sorted != non_leaves || spine.windows(2).any(|w| !tree.graph.has_edge(w[0], w[1])) {
            return input("spine order must list every non-leaf along a path");
        }
        tree.spine = Some(spine);
        Ok(tree)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn leaves(&self) -> &[Vertex] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn non_leaves(&self) -> Vec<Vertex> {
        (0..self.vertex_count()).filter(|&v| !self.is_leaf[v]).collect()
    }

    pub fn non_leaf_count(&self) -> usize {
        self.vertex_count() - self.leaves.len()
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.is_leaf[v]
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// Non-leaf vertices in path order, when the tree is a caterpillar.
    pub fn spine(&self) -> Option<&[Vertex]> {
        self.spine.as_deref()
    }

    pub fn is_caterpillar(&self) -> bool {
        self.spine.is_some()
    }

    /// Set for trees known to be balanced by construction (`T_{a,b}`).
    pub fn known_balanced(&self) -> bool {
        self.known_balanced
    }

    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("tree(t={},a={})", self.vertex_count(), self.non_leaf_count()))
    }

    /// Leaves hanging off each spine vertex, in spine order.
    pub fn spine_leaf_counts(&self) -> Option<Vec<usize>> {
        self.spine.as_ref().map(|spine| {
            spine.iter().map(|&v| self.graph.neighbors(v).iter().filter(|&&u| self.is_leaf[u]).count()).collect()
        })
    }

    /// `ρ_T(S)` for a non-empty set of non-leaves.
    pub fn rho_of_subset(&self, set: &[Vertex]) -> Result<Ratio> {
        if set.is_empty() {
            return input("ρ_T(S) needs a non-empty S");
        }
        let mut mark = vec![false; self.vertex_count()];
        for &v in set {
            if v >= self.vertex_count() {
                return input(format!("vertex {v} is not in the tree"));
            }
            if self.is_leaf[v] {
                return input(format!("vertex {v} is a leaf; S must avoid L"));
            }
            if mark[v] {
                return input(format!("vertex {v} repeated in S"));
            }
            mark[v] = true;
        }
        let touching = self.graph.edges().filter(|&(u, v)| mark[u] || mark[v]).count();
        Ok(Ratio::new(touching as i64, set.len() as i64))
    }

    /// `ρ_T = (t − 1)/a`.
    pub fn rho(&self) -> Result<Ratio> {
        if self.vertex_count() < 3 {
            return input("ρ_T is only defined here for trees with at least three vertices");
        }
        Ok(Ratio::new(self.edge_count() as i64, self.non_leaf_count() as i64))
    }

    /// Exhaustive balancedness check over all non-empty sets of non-leaves,
    /// in Gray-code order with incremental `e_S`.
    pub fn is_balanced(&self) -> Result<Balance> {
        let rho = self.rho()?;
        let non_leaves = self.non_leaves();
        let a = non_leaves.len();
        if a > BALANCE_CAP {
            return capability(format!("is_balanced enumerates 2^{a} subsets; cap is a ≤ {BALANCE_CAP}"));
        }
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in non_leaves.iter().enumerate() {
            index[v] = i;
        }
        let inner_masks: Vec<u32> = non_leaves
            .iter()
            .map(|&v| {
                self.graph.neighbors(v).iter().filter(|&&u| index[u] != usize::MAX).fold(0u32, |m, &u| m | (1 << index[u]))
            })
            .collect();
        let degree: Vec<i64> = non_leaves.iter().map(|&v| self.graph.degree(v) as i64).collect();

        let mut mask: u32 = 0;
        let mut touching: i64 = 0;
        // (edges, size, mask) of the smallest ratio seen
        let mut best: Option<(i64, i64, u32)> = None;
        for step in 1u64..(1u64 << a) {
            let bit = step.trailing_zeros() as usize;
            let flag = 1u32 << bit;
            if mask & flag == 0 {
                touching += degree[bit] - (inner_masks[bit] & mask).count_ones() as i64;
                mask |= flag;
            } else {
                mask &= !flag;
                touching -= degree[bit] - (inner_masks[bit] & mask).count_ones() as i64;
            }
            let size = mask.count_ones() as i64;
            let better = match best {
                None => true,
                Some((be, bs, bm)) => match (touching * bs).cmp(&(be * size)) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => (size, mask_to_vertices(mask, &non_leaves)) < (bs, mask_to_vertices(bm, &non_leaves)),
                },
            };
            if better {
                best = Some((touching, size, mask));
            }
        }
        let (edges, size, mask) = best.expect("a ≥ 1 gives at least one subset");
        if edges * *rho.denom() < *rho.numer() * size {
            Ok(Balance::Unbalanced { witness: mask_to_vertices(mask, &non_leaves), rho: Ratio::new(edges, size) })
        } else {
            Ok(Balance::Balanced)
        }
    }

    /// The same tree with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Tree> {
        let t = self.vertex_count();
        let mut seen = vec![false; t];
        if perm.len() != t || perm.iter().any(|&p| p >= t || std::mem::replace(&mut seen[p], true)) {
            return input("relabelling must be a permutation of the tree's vertices");
        }
        let graph = Graph::from_edge_list(t, self.graph.edges().map(|(u, v)| (perm[u], perm[v])))?;
        let mut tree = match &self.spine {
            Some(spine) => Tree::with_spine(graph, spine.iter().map(|&v| perm[v]).collect())?,
            None => Tree::from_graph(graph)?,
        };
        tree.known_balanced = self.known_balanced;
        tree.name = self.name.clone();
        Ok(tree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Balance {
    Balanced,
    /// `witness` minimizes `ρ_T(S)` (ties: fewer vertices, then
    /// lexicographically smallest) and `rho` is that minimum.
    Unbalanced { witness: Vec<Vertex>, rho: Ratio },
}

impl Balance {
    pub fn is_balanced(&self) -> bool {
        matches!(self, Balance::Balanced)
    }
}

fn mask_to_vertices(mask: u32, non_leaves: &[Vertex]) -> Vec<Vertex> {
    (0..non_leaves.len()).filter(|&i| mask & (1 << i) != 0).map(|i| non_leaves[i]).collect()
}

fn is_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                queue.push_back(u);
            }
        }
    }
    count == n
}

fn detect_spine(g: &Graph, is_leaf: &[bool]) -> Option<Vec<Vertex>> {
    let non_leaves: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| !is_leaf[v]).collect();
    let inner = |v: Vertex| g.neighbors(v).iter().copied().filter(|&u| !is_leaf[u]).collect::<Vec<_>>();
    if non_leaves.iter().any(|&v| inner(v).len() > 2) {
        return None;
    }
    let Some(&start) = non_leaves.iter().find(|&&v| inner(v).len() <= 1) else {
        return Some(Vec::new());
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut current = start;
    while let Some(next) = inner(current).into_iter().find(|&u| u != prev) {
        order.push(next);
        prev = current;
        current = next;
    }
    Some(order)
}

/// Number of leaves attached to each of the `a` spine vertices of `T_{a,b}`.
pub fn caterpillar_leaf_counts(a: usize, b: usize) -> Result<Vec<usize>> {
    if a == 0 || b <= a {
        return input(format!("T_{{a,b}} needs 1 ≤ a < b, got a = {a}, b = {b}"));
    }
    if b > 2 * a {
        let mut counts = caterpillar_leaf_counts(a, b - a)?;
        counts.iter_mut().for_each(|c| *c += 1);
        return Ok(counts);
    }
    let i = b - a;
    let mut counts = vec![0; a];
    for j in 0..i {
        // 1-based position ⌊1 + j·a/i⌋
        let position = 1 + j * a / i;
        counts[position - 1] += 1;
    }
    counts[a - 1] += 1;
    Ok(counts)
}

/// The caterpillar `T_{a,b}`: spine `0..a` in order, leaves numbered from
/// `a` upwards in spine order.
pub fn build_caterpillar(a: usize, b: usize) -> Result<Tree> {
    let counts = caterpillar_leaf_counts(a, b)?;
    let mut pairs: Vec<(Vertex, Vertex)> = (1..a).map(|v| (v - 1, v)).collect();
    let mut next = a;
    for (v, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            pairs.push((v, next));
            next += 1;
        }
    }
    let graph = Graph::from_edge_list(next, pairs)?;
    let mut tree = Tree::with_spine(graph, (0..a).collect())?;
    tree.known_balanced = true;
    tree.name = Some(format!("T_{{{a},{b}}}"));
    Ok(tree)
}
