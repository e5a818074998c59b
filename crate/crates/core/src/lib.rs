//! Conformal subgraph compression.
//!
//! Given a weighted family of hyperedges (candidate routes, itineraries,
//! subtrees), [`nested_chain`] computes every Lagrangian-optimal subgraph by
//! exact parametric minimum cut, [`select`] picks a compact member of that
//! chain for a target coverage, and the [`conformal`] module calibrates the
//! target from held-out data.

pub mod baselines;
pub mod compressor;
pub mod conformal;
pub mod error;
pub mod experiments;
pub mod flow;
pub mod hypergraph;
pub mod io;
pub mod parametric;
pub mod rational;
pub mod rng;
pub mod samplers;

pub use compressor::{fractional_solution, select, tau_threshold, FractionalSolution, Selection};
pub use conformal::{
    calibrate, fixed_context_fit, predict, CalibrationConfig, CalibrationState, CandidateFamily,
    Distance, EdgeSymDiff, FixedOptions, LabeledPair,
};
pub use error::{Error, Result, Violation};
pub use hypergraph::{BicriteriaParams, Hyperedge, VertexId, VertexSet, WeightedHypergraph};
pub use parametric::{
    build_network, min_cut, nested_chain, FlowNetwork, LagrangianValue, MinCut, NestedChain,
};
pub use rational::Rational;
