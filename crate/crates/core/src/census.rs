//! Copies of a caterpillar in a host graph: enumeration, exact counting,
//! the `n·(2m/a)^{ak}` upper bound, leaf-set grouping and edge sampling.
//!
//! A copy is a distinct host subgraph isomorphic to the tree. Enumeration
//! walks ordered host paths for the spine and then picks leaves as ascending
//! combinations, so each subgraph appears once per spine orientation; when
//! the spine's leaf-count sequence is a palindrome the orientation with
//! `img(first) > img(last)` is skipped.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{capability, input, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rng;
use crate::subsets::{binomial, Combinations};
use crate::tree::Tree;

/// Default cap on enumerated copies.
pub const DEFAULT_CENSUS_LIMIT: u64 = 10_000_000;

/// One copy of `tree` in a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCopy<'t> {
    pub tree: &'t Tree,
    /// `map[x]` is the host image of tree vertex `x`.
    pub map: Vec<Vertex>,
    /// Sorted host images of the tree's leaves.
    pub leaf_image: Vec<Vertex>,
}

impl TreeCopy<'_> {
    /// Host edges of the copy, each as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = self
            .tree
            .graph()
            .edges()
            .map(|(x, y)| {
                let (u, v) = (self.map[x], self.map[y]);
                (u.min(v), u.max(v))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Sorted host vertex set.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = self.map.clone();
        out.sort_unstable();
        out
    }

    /// Checks injectivity, edge preservation and the leaf image.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let t = self.tree.vertex_count();
        if self.map.len() != t {
            return input("copy map has the wrong length");
        }
        let verts = self.vertices();
        if verts.windows(2).any(|w| w[0] == w[1]) || verts.iter().any(|&v| !g.contains_vertex(v)) {
            return input("copy map is not an injection into the host");
        }
        if self.tree.graph().edges().any(|(x, y)| !g.has_edge(self.map[x], self.map[y])) {
            return input("copy map does not preserve a tree edge");
        }
        let mut leaves: Vec<_> = self.tree.leaves().iter().map(|&l| self.map[l]).collect();
        leaves.sort_unstable();
        if leaves != self.leaf_image {
            return input("leaf image does not match the map");
        }
        Ok(())
    }
}

/// Tree-side data shared by every walk.
struct Shape<'t> {
    tree: &'t Tree,
    spine: Vec<Vertex>,
    counts: Vec<usize>,
    /// Tree leaves hanging off each spine position, ascending.
    slots: Vec<Vec<Vertex>>,
    palindrome: bool,
    /// Tree degree of each spine position.
    need: Vec<usize>,
}

impl<'t> Shape<'t> {
    fn new(tree: &'t Tree) -> Result<Self> {
        let Some(spine) = tree.spine() else {
            return capability("tree is not a caterpillar; use the reference counter for general trees");
        };
        let spine = spine.to_vec();
        let g = tree.graph();
        let slots: Vec<Vec<Vertex>> = spine
            .iter()
            .map(|&v| g.neighbors(v).iter().copied().filter(|&u| tree.is_leaf(u)).collect())
            .collect();
        let counts: Vec<usize> = slots.iter().map(Vec::len).collect();
        let palindrome = counts.iter().eq(counts.iter().rev());
        let need = spine.iter().map(|&v| g.degree(v)).collect();
        Ok(Self { tree, spine, counts, slots, palindrome, need })
    }

    fn a(&self) -> usize {
        self.spine.len()
    }
}

/// Depth-first walker rooted at one start vertex.
struct Walker<'g, 't, 's> {
    g: &'g Graph,
    shape: &'s Shape<'t>,
    used: Vec<bool>,
    path: Vec<Vertex>,
    map: Vec<Vertex>,
}

impl<'g, 't, 's> Walker<'g, 't, 's> {
    fn new(g: &'g Graph, shape: &'s Shape<'t>) -> Self {
        Self {
            g,
            shape,
            used: vec![false; g.vertex_count()],
            path: Vec::with_capacity(shape.a()),
            map: vec![usize::MAX; shape.tree.vertex_count()],
        }
    }

    fn spine_fits(&self, pos: usize, v: Vertex) -> bool {
        self.g.degree(v) >= self.shape.need[pos]
    }

    fn orientation_ok(&self) -> bool {
        let a = self.shape.a();
        !(self.shape.palindrome && a >= 2 && self.path[0] > self.path[a - 1])
    }

    fn visit_paths<F>(&mut self, start: Vertex, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&mut Self) -> ControlFlow<()>,
    {
        if !self.spine_fits(0, start) {
            return ControlFlow::Continue(());
        }
        self.used[start] = true;
        self.path.push(start);
        let flow = self.extend_path(f);
        self.path.pop();
        self.used[start] = false;
        flow
    }

    fn extend_path<F>(&mut self, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&mut Self) -> ControlFlow<()>,
    {
        let pos = self.path.len();
        if pos == self.shape.a() {
            if !self.orientation_ok() {
                return ControlFlow::Continue(());
            }
            return f(self);
        }
        let last = self.path[pos - 1];
        let g = self.g;
        for &w in g.neighbors(last) {
            if self.used[w] || !self.spine_fits(pos, w) {
                continue;
            }
            self.used[w] = true;
            self.path.push(w);
            let flow = self.extend_path(f);
            self.path.pop();
            self.used[w] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn free_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.g.neighbors(v).iter().copied().filter(|&u| !self.used[u]).collect()
    }

    /// Number of leaf assignments for spine positions `pos..`.
    fn count_leaves(&mut self, pos: usize) -> u128 {
        let a = self.shape.a();
        let c = self.shape.counts[pos];
        let free = self.free_neighbors(self.path[pos]);
        if pos + 1 == a {
            return binomial(free.len() as u64, c as u64);
        }
        if c == 0 {
            return self.count_leaves(pos + 1);
        }
        let mut total = 0u128;
        let mut combos = Combinations::new(free.len(), c);
        while let Some(idx) = combos.next_combination() {
            let chosen: Vec<Vertex> = idx.iter().map(|&i| free[i]).collect();
            for &u in &chosen {
                self.used[u] = true;
            }
            total += self.count_leaves(pos + 1);
            for &u in &chosen {
                self.used[u] = false;
            }
        }
        total
    }

    fn emit_leaves<F>(&mut self, pos: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&TreeCopy<'t>) -> ControlFlow<()>,
    {
        let shape = self.shape;
        if pos == shape.a() {
            for (i, &x) in shape.spine.iter().enumerate() {
                self.map[x] = self.path[i];
            }
            let mut leaf_image: Vec<Vertex> = shape.tree.leaves().iter().map(|&l| self.map[l]).collect();
            leaf_image.sort_unstable();
            return f(&TreeCopy { tree: shape.tree, map: self.map.clone(), leaf_image });
        }
        let c = shape.counts[pos];
        let free = self.free_neighbors(self.path[pos]);
        let mut combos = Combinations::new(free.len(), c);
        while let Some(idx) = combos.next_combination() {
            let chosen: Vec<Vertex> = idx.iter().map(|&i| free[i]).collect();
            for (j, &u) in chosen.iter().enumerate() {
                self.used[u] = true;
                self.map[shape.slots[pos][j]] = u;
            }
            let flow = self.emit_leaves(pos + 1, f);
            for &u in &chosen {
                self.used[u] = false;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `f` on every copy of `tree` in `g`, in deterministic order, stopping
/// after `limit` copies. Returns `(visited, truncated)`.
pub fn for_each_copy<'t, F>(g: &Graph, tree: &'t Tree, limit: Option<u64>, mut f: F) -> Result<(u64, bool)>
where
    F: FnMut(&TreeCopy<'t>) -> ControlFlow<()>,
{
    let shape = Shape::new(tree)?;
    let mut seen = 0u64;
    let mut truncated = false;
    let mut emit = |copy: &TreeCopy<'t>| {
        if limit.is_some_and(|l| seen >= l) {
            truncated = true;
            return ControlFlow::Break(());
        }
        seen += 1;
        f(copy)
    };
    if shape.a() == 0 {
        for (u, v) in g.edges() {
            if emit(&TreeCopy { tree, map: vec![u, v], leaf_image: vec![u, v] }).is_break() {
                break;
            }
        }
    } else {
        let mut walker = Walker::new(g, &shape);
        for start in 0..g.vertex_count() {
            let flow = walker.visit_paths(start, &mut |w: &mut Walker<'_, 't, '_>| w.emit_leaves(0, &mut emit));
            if flow.is_break() {
                break;
            }
        }
    }
    Ok((seen, truncated))
}

/// Collects up to `limit` copies.
pub fn enumerate_copies<'t>(g: &Graph, tree: &'t Tree, limit: Option<u64>) -> Result<Vec<TreeCopy<'t>>> {
    let mut out = Vec::new();
    for_each_copy(g, tree, limit, |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Exact number of copies of `tree` in `g`.
pub fn count_copies(g: &Graph, tree: &Tree) -> Result<u64> {
    let shape = Shape::new(tree)?;
    if shape.a() == 0 {
        return Ok(g.edge_count() as u64);
    }
    let total: u128 = (0..g.vertex_count())
        .into_par_iter()
        .map_init(
            || Walker::new(g, &shape),
            |walker, start| {
                let mut sum = 0u128;
                let _ = walker.visit_paths(start, &mut |w: &mut Walker<'_, '_, '_>| {
                    sum += w.count_leaves(0);
                    ControlFlow::Continue(())
                });
                sum
            },
        )
        .sum();
    u64::try_from(total).map_err(|_| Error::Capability(format!("copy count {total} does not fit in 64 bits")))
}

/// `n·(2m/a)^{a·k}` with `a` the number of non-leaves and `k` the maximum
/// degree of `tree`, exactly.
pub fn count_upper_bound(g: &Graph, tree: &Tree) -> Result<BigRational> {
    let a = tree.non_leaf_count();
    if a == 0 {
        return input("the copy-count bound needs a tree with at least one non-leaf");
    }
    let k = tree.max_degree() as u64;
    let base = BigRational::new(BigInt::from(2 * g.edge_count()), BigInt::from(a));
    let n = BigRational::from_integer(BigInt::from(g.vertex_count()));
    Ok(n * crate::rational::big_pow(&base, a as u64 * k))
}

/// Number of vertex-distinct paths on `a` vertices starting at `v`, and the
/// bound `d₁···d_{a−1}` from the degree sequence sorted in decreasing order
/// (missing degrees count as 0).
pub fn path_count_from(g: &Graph, v: Vertex, a: usize) -> Result<(u64, BigUint)> {
    if !g.contains_vertex(v) {
        return input(format!("vertex {v} is not in the graph"));
    }
    if a == 0 {
        return input("paths need at least one vertex");
    }
    let degrees = g.degrees_desc();
    let bound = (0..a - 1).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(degrees.get(i).copied().unwrap_or(0)));
    let mut used = vec![false; g.vertex_count()];
    used[v] = true;
    let exact = count_paths(g, v, a - 1, &mut used);
    Ok((exact, bound))
}

fn count_paths(g: &Graph, v: Vertex, remaining: usize, used: &mut [bool]) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for &w in g.neighbors(v) {
        if !used[w] {
            used[w] = true;
            total += count_paths(g, w, remaining - 1, used);
            used[w] = false;
        }
    }
    total
}

/// Copies grouped by leaf image.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub tree_name: String,
    pub tree_vertices: usize,
    pub tree_non_leaves: usize,
    pub exact_count: u64,
    pub upper_bound: Option<BigRational>,
    pub groups: BTreeMap<Vec<Vertex>, u64>,
    pub largest_group_size: u64,
    /// Smallest leaf image among the largest groups.
    pub largest_group_leafset: Vec<Vertex>,
    /// Set when enumeration stopped at its limit; the groups then cover a
    /// prefix only.
    pub truncated: bool,
}

impl CensusReport {
    fn empty(tree: Option<&Tree>) -> Self {
        Self {
            tree_name: tree.map(Tree::name).unwrap_or_default(),
            tree_vertices: tree.map_or(0, Tree::vertex_count),
            tree_non_leaves: tree.map_or(0, Tree::non_leaf_count),
            exact_count: 0,
            upper_bound: None,
            groups: BTreeMap::new(),
            largest_group_size: 0,
            largest_group_leafset: Vec::new(),
            truncated: false,
        }
    }

    fn add(&mut self, leaf_image: &[Vertex]) {
        self.exact_count += 1;
        *self.groups.entry(leaf_image.to_vec()).or_insert(0) += 1;
    }

    fn finish(&mut self) {
        self.largest_group_size = 0;
        self.largest_group_leafset.clear();
        for (set, &size) in &self.groups {
            if size > self.largest_group_size {
                self.largest_group_size = size;
                self.largest_group_leafset = set.clone();
            }
        }
    }

    /// Members of the largest group as host vertex sets `leaf_image ∪ spine`.
    pub fn largest_group(&self) -> Option<(&[Vertex], u64)> {
        (self.largest_group_size > 0).then_some((&self.largest_group_leafset[..], self.largest_group_size))
    }
}

/// Buckets copies by leaf image. All copies must come from the same tree.
pub fn group_by_leaf_set<'t, I>(copies: I) -> Result<CensusReport>
where
    I: IntoIterator<Item = TreeCopy<'t>>,
{
    let mut tree: Option<&'t Tree> = None;
    let mut report = CensusReport::empty(None);
    for copy in copies {
        match tree {
            None => {
                tree = Some(copy.tree);
                report = CensusReport::empty(tree);
            }
            Some(t) if !std::ptr::eq(t, copy.tree) && t != copy.tree => {
                return input("copies from different trees cannot be grouped together");
            }
            _ => {}
        }
        report.add(&copy.leaf_image);
    }
    report.finish();
    Ok(report)
}

/// Enumerates up to `limit` copies, groups them by leaf image and attaches
/// the copy-count bound.
pub fn census(g: &Graph, tree: &Tree, limit: Option<u64>) -> Result<CensusReport> {
    let mut report = CensusReport::empty(Some(tree));
    let (_, truncated) = for_each_copy(g, tree, limit, |c| {
        report.add(&c.leaf_image);
        ControlFlow::Continue(())
    })?;
    report.truncated = truncated;
    report.upper_bound = count_upper_bound(g, tree).ok();
    report.finish();
    Ok(report)
}

/// Keeps each edge independently with probability `p`, walking edges in
/// canonical order with a seeded generator.
pub fn sparsify(g: &Graph, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return input(format!("edge probability must lie in [0, 1], got {p}"));
    }
    let mut rng = rng::from_seed(seed);
    let kept: Vec<_> = g.edges().filter(|_| rng.random_bool(p)).collect();
    Graph::from_edge_list(g.vertex_count(), kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_caterpillar;
    use num_traits::Zero;

    fn p3() -> Tree {
        Tree::from_graph(Graph::path(3)).unwrap()
    }

    fn p4() -> Tree {
        build_caterpillar(2, 3).unwrap()
    }

    #[test]
    fn counts_small_hosts() {
        assert_eq!(count_copies(&Graph::complete(4), &p3()).unwrap(), 12);
        assert_eq!(count_copies(&Graph::cycle(6), &p4()).unwrap(), 6);
        assert_eq!(count_copies(&Graph::complete(6), &p4()).unwrap(), 180);
        assert_eq!(count_copies(&Graph::complete(3), &p4()).unwrap(), 0);
        assert_eq!(count_copies(&Graph::empty(7), &p4()).unwrap(), 0);
        assert_eq!(count_copies(&Graph::path(4), &p4()).unwrap(), 1);
    }

    #[test]
    fn single_path_copy_has_end_leaves() {
        let tree = p4();
        let copies = enumerate_copies(&Graph::path(4), &tree, None).unwrap();
        assert_eq!(copies.len(), 1);
        assert_eq!(copies[0].leaf_image, vec![0, 3]);
        copies[0].validate(&Graph::path(4)).unwrap();
    }

    #[test]
    fn degenerate_trees() {
        let k2 = Tree::from_graph(Graph::path(2)).unwrap();
        assert_eq!(count_copies(&Graph::complete(5), &k2).unwrap(), 10);
        let dot = Tree::from_graph(Graph::empty(1)).unwrap();
        assert_eq!(count_copies(&Graph::complete(5), &dot).unwrap(), 5);
        assert_eq!(enumerate_copies(&Graph::complete(5), &dot, None).unwrap().len(), 5);
    }

    #[test]
    fn enumeration_matches_count_and_is_distinct() {
        let g = Graph::complete(6);
        for (a, b) in [(1, 3), (2, 3), (2, 4), (3, 4), (3, 5)] {
            let tree = build_caterpillar(a, b).unwrap();
            let copies = enumerate_copies(&g, &tree, None).unwrap();
            assert_eq!(copies.len() as u64, count_copies(&g, &tree).unwrap());
            let mut keys: Vec<_> = copies.iter().map(TreeCopy::edges).collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), copies.len());
            for c in &copies {
                c.validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn limit_truncates() {
        let tree = p4();
        let (seen, truncated) = for_each_copy(&Graph::complete(6), &tree, Some(7), |_| ControlFlow::Continue(())).unwrap();
        assert_eq!((seen, truncated), (7, true));
        let (seen, truncated) = for_each_copy(&Graph::cycle(6), &tree, Some(6), |_| ControlFlow::Continue(())).unwrap();
        assert_eq!((seen, truncated), (6, false));
    }

    #[test]
    fn non_caterpillar_is_refused() {
        // spider with three legs of length 2
        let g = Graph::from_edge_list(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let tree = Tree::from_graph(g).unwrap();
        assert!(matches!(count_copies(&Graph::complete(8), &tree), Err(Error::Capability(_))));
    }

    #[test]
    fn upper_bound_values() {
        let b = count_upper_bound(&Graph::complete(4), &p3()).unwrap();
        assert_eq!(b, BigRational::from_integer(576.into()));
        assert!(count_upper_bound(&Graph::empty(5), &p4()).unwrap().is_zero());
        let g = Graph::from_edge_list(10, (0..10).flat_map(|i| [(i, (i + 1) % 10), (i, (i + 3) % 10)])).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert_eq!(count_upper_bound(&g, &p4()).unwrap(), BigRational::from_integer(1_600_000.into()));
    }

    #[test]
    fn path_counts() {
        let k4 = Graph::complete(4);
        assert_eq!(path_count_from(&k4, 0, 2).unwrap(), (3, BigUint::from(3u32)));
        assert_eq!(path_count_from(&k4, 2, 3).unwrap(), (6, BigUint::from(9u32)));
        assert_eq!(path_count_from(&Graph::star(4), 0, 3).unwrap(), (0, BigUint::from(4u32)));
        assert_eq!(path_count_from(&k4, 0, 1).unwrap(), (1, BigUint::from(1u32)));
        assert!(path_count_from(&k4, 4, 2).is_err());
    }

    #[test]
    fn grouping() {
        let tree = p4();
        let report = group_by_leaf_set(enumerate_copies(&Graph::path(4), &tree, None).unwrap()).unwrap();
        assert_eq!(report.groups.len(), 1);
        assert_eq!(report.largest_group_size, 1);

        let k4 = Graph::complete(4);
        let copies = enumerate_copies(&k4, &tree, None).unwrap();
        let total = copies.len() as u64;
        let report = group_by_leaf_set(copies).unwrap();
        assert_eq!(report.groups.values().sum::<u64>(), total);
        assert!(report.groups.keys().all(|k| k.len() == 2));
        // each pair of leaves is joined by the two paths through the other two vertices
        assert_eq!((report.groups.len(), report.largest_group_size), (6, 2));
        assert_eq!(report.largest_group_leafset, vec![0, 1]);

        let empty = group_by_leaf_set(Vec::new()).unwrap();
        assert_eq!((empty.exact_count, empty.largest_group_size), (0, 0));

        let other = p3();
        let mut mixed = enumerate_copies(&k4, &tree, Some(1)).unwrap();
        mixed.extend(enumerate_copies(&k4, &other, Some(1)).unwrap());
        assert!(group_by_leaf_set(mixed).is_err());
    }

    #[test]
    fn census_report_is_consistent() {
        let g = Graph::complete(6);
        let tree = build_caterpillar(2, 4).unwrap();
        let r = census(&g, &tree, None).unwrap();
        assert_eq!(r.exact_count, count_copies(&g, &tree).unwrap());
        assert!(!r.truncated);
        let q = tree.leaf_count() as u64;
        assert!(r.largest_group_size as u128 * binomial(6, q) >= r.exact_count as u128);
        assert!(BigRational::from_integer(r.exact_count.into()) <= r.upper_bound.unwrap());
    }

    #[test]
    fn sparsify_extremes_and_determinism() {
        let g = Graph::complete(12);
        assert_eq!(sparsify(&g, 1.0, 3).unwrap(), g);
        assert_eq!(sparsify(&g, 0.0, 3).unwrap(), Graph::empty(12));
        assert_eq!(sparsify(&g, 0.5, 9).unwrap(), sparsify(&g, 0.5, 9).unwrap());
        assert!(sparsify(&g, 1.5, 0).is_err());
        assert!(sparsify(&g, f64::NAN, 0).is_err());
    }
}
