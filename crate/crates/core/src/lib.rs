//! Finding small subgraphs of large average degree.
//!
//! The crate is organized around the pieces of the piecing argument:
//!
//! * [`graph`]: the simple-graph type with density, peeling, expansion and
//!   `(ρ, r)`-sparsity primitives.
//! * [`tree`]: balanced caterpillars `T_{a,b}`, `ρ_T(S)` and brute-force
//!   balancedness checks.
//! * [`census`] and [`embed`]: copies of a tree in a host graph, counting
//!   bounds, leaf-set grouping and constructive embeddings.
//! * [`params`] and [`extract`]: parameter derivations, the four-condition
//!   check and the dense-subgraph extractor.
//! * [`constructions`]: seeded lower-bound graph families.
//! * [`oracles`]: exhaustive reference implementations used for
//!   cross-validation.
//! * [`sweep`]: experiment configuration and CSV reporting.

pub mod budget;
pub mod census;
pub mod constructions;
pub mod densest;
pub mod embed;
pub mod error;
pub mod extract;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod params;
pub mod rational;
pub mod report;
pub mod rng;
pub mod subsets;
pub mod sweep;
pub mod tree;

pub use budget::OracleBudget;
pub use error::{Error, Result};
pub use graph::{
    ExpansionMode, ExpansionVerdict, Graph, InducedSubgraph, Method, SparsityCertificate, SparsityMode, Verdict,
    Vertex,
};
pub use rational::Ratio;
pub use tree::{build_caterpillar, Balance, Tree};
pub use census::{CensusReport, TreeCopy};
pub use extract::{extract_dense_subgraph, extract_min_degree_subgraph, ExtractOptions};
pub use params::{Derivation, ParameterSet};
pub use report::{Branch, Criterion, DensityReport};
pub use sweep::{SweepConfig, SweepRow};
