//! Seeded random graphs with no small dense subgraphs, and a Monte-Carlo
//! check of the lower-tail Chernoff bound.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::budget::OracleBudget;
use crate::error::{input, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracles;
use crate::rational::{self, Ratio};
use crate::rng;
use crate::subsets::binomial;

/// Largest `n` for which the sparse-random certificate is attempted.
pub const CERTIFY_MAX_N: usize = 40;
/// Largest size bound for which the sparse-random certificate is attempted.
pub const CERTIFY_MAX_BOUND: u64 = 8;
/// Cap on elementary checks in the deletion construction.
pub const DELETION_BUDGET: u128 = 1_000_000_000;

/// Erdős–Rényi `G(n, p)`, pairs visited in lexicographic order.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return input(format!("edge probability must lie in [0, 1], got {p}"));
    }
    let mut rng = rng::from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, edges)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseRandomSpec {
    pub n: usize,
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub d: Ratio,
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub s: Ratio,
    pub c_s: f64,
    pub seed: u64,
}

impl SparseRandomSpec {
    /// `p = 2d/(n−1)`, capped at 1.
    pub fn p(&self) -> f64 {
        (2.0 * rational::to_f64(&self.d) / (self.n as f64 - 1.0)).min(1.0)
    }

    /// `⌊c_s·n·d^{−s/(s−2)}⌋`.
    pub fn size_bound(&self) -> u64 {
        let s = rational::to_f64(&self.s);
        let d = rational::to_f64(&self.d);
        let x = self.c_s * self.n as f64 * d.powf(-s / (s - 2.0));
        let nearest = x.round();
        let x = if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) { nearest } else { x };
        x.floor().max(0.0) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseRandomDiagnostics {
    pub p: f64,
    pub edges: usize,
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub average_degree: Ratio,
    pub reached_d: bool,
    pub size_bound: u64,
    /// `Some(true)` when the oracle found no subgraph on at most
    /// `size_bound` vertices with average degree `≥ s`; `None` when the
    /// instance is too large to check.
    pub certified: Option<bool>,
    pub counterexample: Option<Vec<Vertex>>,
}

/// Samples `G(n, 2d/(n−1))` and certifies small instances.
pub fn gen_sparse_random(spec: &SparseRandomSpec) -> Result<(Graph, SparseRandomDiagnostics)> {
    let n = spec.n;
    if n < 2 {
        return input("need at least two vertices");
    }
    if spec.s <= Ratio::from_integer(2) {
        return input("s must exceed 2");
    }
    if spec.s > spec.d || spec.d > Ratio::from_integer(n as i64 - 1) {
        return input(format!(
            "need s ≤ d ≤ n − 1, got s = {}, d = {}, n = {n}",
            rational::format_ratio(&spec.s),
            rational::format_ratio(&spec.d)
        ));
    }
    if spec.c_s.is_nan() || spec.c_s <= 0.0 || !spec.c_s.is_finite() {
        return input("c_s must be positive");
    }
    let p = spec.p();
    let g = gnp(n, p, spec.seed)?;
    let average_degree = rational::average_degree(g.edge_count(), n);
    let size_bound = spec.size_bound();
    let (certified, counterexample) = if size_bound == 0 {
        (Some(true), None)
    } else if n <= CERTIFY_MAX_N && size_bound <= CERTIFY_MAX_BOUND {
        let best = oracles::densest_subgraph_at_most(&g, size_bound as usize, &OracleBudget::default())?;
        if best.average_degree >= spec.s {
            (Some(false), Some(best.witness))
        } else {
            (Some(true), None)
        }
    } else {
        (None, None)
    };
    let diagnostics = SparseRandomDiagnostics {
        p,
        edges: g.edge_count(),
        average_degree,
        reached_d: average_degree >= spec.d,
        size_bound,
        certified,
        counterexample,
    };
    Ok((g, diagnostics))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeletionSpec {
    pub n: usize,
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub s: Ratio,
    pub t: usize,
    pub seed: u64,
}

impl DeletionSpec {
    /// `ε = 1/(ts)`.
    pub fn epsilon(&self) -> f64 {
        1.0 / (self.t as f64 * rational::to_f64(&self.s))
    }

    /// `p = n^{−2/s + 2/(ts)}`.
    pub fn p(&self) -> f64 {
        let s = rational::to_f64(&self.s);
        (self.n as f64).powf(-2.0 / s + 2.0 * self.epsilon())
    }

    /// Edges needed on `r` vertices for average degree `s`: `⌈rs/2⌉`.
    pub fn bad_edges(&self, r: usize) -> usize {
        rational::ceil(&(self.s * Ratio::from_integer(r as i64) / 2)) as usize
    }

    /// `Σ_{r≤t} C(n, r)·C(C(r,2), ⌈rs/2⌉)`.
    pub fn work(&self) -> u128 {
        (1..=self.t)
            .map(|r| {
                let pairs = (r * (r - 1) / 2) as u64;
                binomial(self.n as u64, r as u64).saturating_mul(binomial(pairs, self.bad_edges(r) as u64))
            })
            .fold(0u128, u128::saturating_add)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeletionDiagnostics {
    pub p: f64,
    pub epsilon: f64,
    /// Edges of the sampled graph.
    pub x: usize,
    /// Edges removed.
    pub y: usize,
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub average_degree: Ratio,
    /// `n^{2−2/s+ε}`, the size the expectation argument predicts for `X − Y`.
    pub expectation_target: f64,
    pub exceeds_expectation_target: bool,
    /// Oracle re-check that no set of at most `t` vertices reaches average
    /// degree `s`; `None` when the oracle's budget is too small.
    pub certified: Option<bool>,
}

/// Samples `G(n, p)` and deletes one edge per dense small vertex set until
/// none is left.
pub fn gen_deletion_construction(spec: &DeletionSpec) -> Result<(Graph, DeletionDiagnostics)> {
    let n = spec.n;
    if spec.s <= Ratio::from_integer(2) {
        return input("s must exceed 2");
    }
    if spec.t == 0 || n == 0 {
        return input("need t ≥ 1 and n ≥ 1");
    }
    let p = spec.p();
    if p > 1.0 {
        return input(format!("edge probability {p} exceeds 1; n is too small"));
    }
    let work = spec.work();
    if work > DELETION_BUDGET {
        return Err(Error::Capability(format!(
            "deletion scan needs {work} checks, budget is {DELETION_BUDGET}"
        )));
    }
    let g = gnp(n, p, spec.seed)?;
    let x = g.edge_count();
    let mut adj = vec![false; n * n];
    for (u, v) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut y = 0;
    for r in 2..=spec.t.min(n) {
        let need = spec.bad_edges(r);
        if need > r * (r - 1) / 2 {
            continue;
        }
        let mut combos = crate::subsets::Combinations::new(n, r);
        while let Some(set) = combos.next_combination() {
            loop {
                let mut first = None;
                let mut e = 0;
                for (i, &u) in set.iter().enumerate() {
                    for &v in &set[i + 1..] {
                        if adj[u * n + v] {
                            e += 1;
                            first.get_or_insert((u, v));
                        }
                    }
                }
                if e < need {
                    break;
                }
                let (u, v) = first.expect("a bad set has edges");
                adj[u * n + v] = false;
                adj[v * n + u] = false;
                y += 1;
            }
        }
    }
    let kept: Vec<_> = g.edges().filter(|&(u, v)| adj[u * n + v]).collect();
    let out = Graph::from_edge_list(n, kept)?;
    let s = rational::to_f64(&spec.s);
    let expectation_target = (n as f64).powf(2.0 - 2.0 / s + spec.epsilon());
    let certified = match oracles::densest_subgraph_at_most(&out, spec.t, &OracleBudget::default()) {
        Ok(best) => Some(best.average_degree < spec.s),
        Err(Error::Capability(_)) => None,
        Err(e) => return Err(e),
    };
    let diagnostics = DeletionDiagnostics {
        p,
        epsilon: spec.epsilon(),
        x,
        y,
        average_degree: rational::average_degree(x - y, n),
        expectation_target,
        exceeds_expectation_target: (x - y) as f64 > expectation_target,
        certified,
    };
    Ok((out, diagnostics))
}

/// Monte-Carlo estimate of `P(X ≤ E[X]/2)` for a sum of independent
/// Bernoulli variables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernoffReport {
    pub expectation: f64,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// `e^{−E[X]/8}`.
    pub bound: f64,
    /// The interval's lower end does not exceed the bound.
    pub consistent: bool,
}

const WILSON_Z: f64 = 1.959963984540054;

/// 95% Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let phat = hits as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn chernoff_empirical(probs: &[f64], trials: u64, seed: u64) -> Result<ChernoffReport> {
    if trials == 0 {
        return input("need at least one trial");
    }
    if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return input("probabilities must lie in [0, 1]");
    }
    let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
    for p in probs {
        *groups.entry(p.to_bits()).or_insert(0) += 1;
    }
    let draws: Vec<Binomial> = groups
        .iter()
        .map(|(&bits, &count)| Binomial::new(count, f64::from_bits(bits)).map_err(|e| Error::Input(e.to_string())))
        .collect::<Result<_>>()?;
    let expectation: f64 = probs.iter().sum();
    let mut rng = rng::from_seed(seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let x: u64 = draws.iter().map(|d| d.sample(&mut rng)).sum();
        if 2.0 * x as f64 <= expectation {
            hits += 1;
        }
    }
    let (wilson_low, wilson_high) = wilson_interval(hits, trials);
    let bound = (-expectation / 8.0).exp();
    Ok(ChernoffReport {
        expectation,
        trials,
        hits,
        estimate: hits as f64 / trials as f64,
        wilson_low,
        wilson_high,
        bound,
        consistent: wilson_low <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio {
        Ratio::new(n, d)
    }

    #[test]
    fn gnp_is_deterministic() {
        assert_eq!(gnp(30, 0.3, 5).unwrap(), gnp(30, 0.3, 5).unwrap());
        assert_ne!(gnp(30, 0.3, 5).unwrap(), gnp(30, 0.3, 6).unwrap());
        assert_eq!(gnp(6, 1.0, 0).unwrap(), Graph::complete(6));
    }

    #[test]
    fn sparse_random_vacuous_bound() {
        let spec = SparseRandomSpec { n: 40, d: r(3, 1), s: r(3, 1), c_s: 0.1, seed: 7 };
        assert_eq!(spec.size_bound(), 0);
        let (g, diag) = gen_sparse_random(&spec).unwrap();
        assert_eq!(diag.certified, Some(true));
        assert_eq!(diag.average_degree, rational::average_degree(g.edge_count(), 40));
    }

    #[test]
    fn sparse_random_oracle_checked_bound() {
        // d = 3 < s is outside the generator's range; the bound arithmetic still applies
        let spec = SparseRandomSpec { n: 40, d: r(3, 1), s: r(4, 1), c_s: 1.0, seed: 7 };
        assert_eq!(spec.size_bound(), 4);
        assert!(gen_sparse_random(&spec).is_err());
        let spec = SparseRandomSpec { n: 40, d: r(4, 1), s: r(4, 1), c_s: 2.0, seed: 7 };
        assert_eq!(spec.size_bound(), 5);
        let (g, diag) = gen_sparse_random(&spec).unwrap();
        let best = oracles::densest_subgraph_at_most(&g, 5, &OracleBudget::default()).unwrap();
        assert_eq!(diag.certified, Some(best.average_degree < r(4, 1)));
    }

    #[test]
    fn sparse_random_full_probability_is_complete() {
        let spec = SparseRandomSpec { n: 9, d: r(8, 1), s: r(3, 1), c_s: 0.1, seed: 1 };
        let (g, _) = gen_sparse_random(&spec).unwrap();
        assert_eq!(g, Graph::complete(9));
    }

    #[test]
    fn sparse_random_rejects_ranges() {
        let bad = SparseRandomSpec { n: 10, d: r(2, 1), s: r(3, 1), c_s: 0.1, seed: 1 };
        assert!(gen_sparse_random(&bad).is_err());
        let bad = SparseRandomSpec { n: 10, d: r(12, 1), s: r(3, 1), c_s: 0.1, seed: 1 };
        assert!(gen_sparse_random(&bad).is_err());
    }

    #[test]
    fn deletion_construction_certifies() {
        let spec = DeletionSpec { n: 100, s: r(3, 1), t: 4, seed: 1 };
        let (g, diag) = gen_deletion_construction(&spec).unwrap();
        assert_eq!(diag.certified, Some(true));
        assert_eq!(g.edge_count(), diag.x - diag.y);
        assert_eq!(diag.average_degree, r(2 * (diag.x - diag.y) as i64, 100));
        let again = gen_deletion_construction(&spec).unwrap();
        assert_eq!(again.0, g);
    }

    #[test]
    fn deletion_trivial_cases() {
        let (g, diag) = gen_deletion_construction(&DeletionSpec { n: 50, s: r(3, 1), t: 1, seed: 3 }).unwrap();
        assert_eq!(diag.y, 0);
        assert_eq!(g.edge_count(), diag.x);
        let (_, diag) = gen_deletion_construction(&DeletionSpec { n: 50, s: r(3, 1), t: 2, seed: 3 }).unwrap();
        assert_eq!(diag.y, 0);
    }

    #[test]
    fn deletion_refuses_large_scans() {
        let spec = DeletionSpec { n: 300, s: r(3, 1), t: 5, seed: 0 };
        assert!(matches!(gen_deletion_construction(&spec), Err(Error::Capability(_))));
    }

    #[test]
    fn chernoff_degenerate_and_single() {
        let rep = chernoff_empirical(&[1.0; 20], 1000, 1).unwrap();
        assert_eq!(rep.hits, 0);
        let rep = chernoff_empirical(&[0.5], 100_000, 2).unwrap();
        assert!((rep.estimate - 0.5).abs() < 0.01);
        assert!((rep.bound - (-1.0f64 / 16.0).exp()).abs() < 1e-15);
        assert!(rep.consistent);
        assert!(chernoff_empirical(&[1.5], 10, 0).is_err());
        assert!(chernoff_empirical(&[0.5], 0, 0).is_err());
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo < 1e-12 && hi > 0.0);
    }
}
