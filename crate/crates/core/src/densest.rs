//! Exact maximum-density subgraph via Dinkelbach iteration over a max-closure
//! min cut. Polynomial; used to decide whether *any* subgraph reaches a
//! target density before searching for small ones.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};

/// A vertex set together with the number of edges it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseSet {
    pub vertices: Vec<Vertex>,
    pub edges: usize,
}

impl DenseSet {
    /// `edges / |vertices|` compared exactly against `other`.
    pub fn denser_than(&self, other: &DenseSet) -> bool {
        (self.edges as u128) * (other.vertices.len() as u128)
            > (other.edges as u128) * (self.vertices.len() as u128)
    }
}

/// Returns a vertex set maximizing `e(G[S]) / |S|`, or `None` for the empty
/// graph. Edgeless graphs return the single vertex `0`.
pub fn densest_subgraph(g: &Graph) -> Option<DenseSet> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    if g.edge_count() == 0 {
        return Some(DenseSet { vertices: vec![0], edges: 0 });
    }
    let mut best = DenseSet { vertices: (0..n).collect(), edges: g.edge_count() };
    loop {
        let (p, q) = (best.edges as i64, best.vertices.len() as i64);
        let candidate = max_closure(g, p, q);
        match candidate {
            Some(set) if set.denser_than(&best) => best = set,
            _ => return Some(best),
        }
    }
}

/// Maximizes `q·e(S) − p·|S|` and returns the maximizing source side, if
/// non-empty.
fn max_closure(g: &Graph, p: i64, q: i64) -> Option<DenseSet> {
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let m = edges.len();
    let source = 0;
    let sink = 1;
    let edge_node = |i: usize| 2 + i;
    let vertex_node = |v: usize| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + n);
    let inf = i64::MAX / 4;
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(source, edge_node(i), q);
        net.add_arc(edge_node(i), vertex_node(u), inf);
        net.add_arc(edge_node(i), vertex_node(v), inf);
    }
    for v in 0..n {
        net.add_arc(vertex_node(v), sink, p);
    }
    net.max_flow(source, sink);
    let reach = net.reachable_from(source);
    let vertices: Vec<Vertex> = (0..n).filter(|&v| reach[vertex_node(v)]).collect();
    if vertices.is_empty() {
        return None;
    }
    let edges = g.induced_edge_count(&vertices);
    Some(DenseSet { vertices, edges })
}

struct Arc {
    to: usize,
    cap: i64,
}

/// Dinic's algorithm on an adjacency-list residual network.
struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), out: vec![Vec::new(); nodes], level: vec![0; nodes], cursor: vec![0; nodes] }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.out[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.cursor[u] < self.out[u].len() {
            let id = self.out[u][self.cursor[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[id].cap -= got;
                    self.arcs[id ^ 1].cap += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &id in &self.out[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_with_pendant_picks_clique() {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                pairs.push((u, v));
            }
        }
        pairs.push((3, 4));
        let g = Graph::from_edge_list(5, pairs).unwrap();
        let best = densest_subgraph(&g).unwrap();
        assert_eq!(best.vertices, vec![0, 1, 2, 3]);
        assert_eq!(best.edges, 6);
    }

    #[test]
    fn cycle_density_is_one() {
        let best = densest_subgraph(&Graph::cycle(6)).unwrap();
        assert_eq!(best.edges, best.vertices.len());
    }

    #[test]
    fn empty_and_edgeless() {
        assert!(densest_subgraph(&Graph::empty(0)).is_none());
        assert_eq!(densest_subgraph(&Graph::empty(3)).unwrap().edges, 0);
    }
}
