//! Graph invariants of noncontextuality inequalities.
//!
//! The independence number, Lovász number, fractional packing number and
//! edge clique cover number of an exclusivity graph bound an inequality for
//! noncontextual models, quantum mechanics and general probabilistic
//! theories, and count the experiments it needs. This crate computes all of
//! them, exactly where possible, and checks the KCBS inequality and its
//! ten-test twin end to end.

pub mod cliques;
pub mod error;
pub mod graph;
pub mod inequality;
pub mod iso;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod quantum;
pub mod rational;
pub mod sdp;
pub mod search;
pub mod simulate;

pub use cliques::{
    edge_clique_cover_number, independence_number, maximal_cliques, EdgeCoverOutcome,
};
pub use error::{Error, Result};
pub use graph::{CliqueCover, Graph, NamedGraph, VertexSet};
pub use inequality::{
    evaluate_assignment, graph_by_id, inequality_graph, kcbs, nchv_max, nchv_max_exclusive, twin,
    Assignment, Bound, Bounds, Context, Inequality, InequalityGraph,
};
pub use iso::is_isomorphic;
pub use linalg::{eig_sym, SymMatrix};
pub use lp::{fractional_packing_number, simplex_solve, LinearProgram, LpSolution};
pub use polytope::{
    deterministic_behavior, facet_check, facet_check_in, polytope_dimension, AffineCertificate,
    Behavior, CoordinateSpace, Verdict,
};
pub use quantum::{
    inequality_quantum_lhs, paper_rep, paper_state, quantum_value, validate_ortho_rep, OrthoRep,
    StateVector,
};
pub use rational::Rational;
pub use sdp::{lovasz_theta, ThetaResult};
pub use search::{ortho_rep_search, SearchOptions, SearchResult};
pub use simulate::{simulate_sequential, SimulationOptions, SimulationReport};
