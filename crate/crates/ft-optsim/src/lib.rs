//! Deterministic simulator and analysis library for fault-tolerant
//! distributed scalar convex optimization on arbitrary directed graphs.
//!
//! The crate is organized around six pieces:
//!
//! - [`netgraph`]: directed graphs, source components, reduced-graph
//!   enumeration under Byzantine and crash fault models, and the solvability
//!   checkers.
//! - [`objective`]: admissible quadratic costs, the constraint interval with
//!   its projection, and diminishing step schedules.
//! - [`engine`]: synchronous round-based execution of the six algorithms
//!   with pluggable Byzantine behaviors and crash schedules, producing a
//!   complete per-round trace.
//! - [`ergodic`]: reconstruction of the per-round row-stochastic update
//!   matrices from traces, backward products, coefficients of ergodicity,
//!   limiting weight vectors, and the rate-bound certifiers.
//! - [`oracle`]: the valid-function families, exact optimum intervals for
//!   unit-curvature quadratics, and per-theorem guarantee parameters.
//! - [`harness`]: scenario files, experiment execution, analysis
//!   orchestration, sweeps, and machine-readable outputs.

pub mod engine;
pub mod ergodic;
pub mod harness;
pub mod netgraph;
pub mod objective;
pub mod oracle;
