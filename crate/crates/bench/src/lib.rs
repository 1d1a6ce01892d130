//! Fixtures shared by the benchmarks.

use densub_core::constructions::gnp;
use densub_core::Graph;

/// `G(n, d/(n−1))` with a fixed seed.
pub fn random_graph(n: usize, d: f64, seed: u64) -> Graph {
    gnp(n, d / (n as f64 - 1.0), seed).expect("valid G(n, p) parameters")
}
