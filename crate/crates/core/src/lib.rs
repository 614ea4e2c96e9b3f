//! Simulation and analytics for two network formation mechanisms.
//!
//! In the *meritocracy* model a node follows a candidate only if it beats the
//! quality of every current followee; in the *Matthew-effect* model targets
//! are chosen proportionally to in-degree plus one. Both cap out-degree at
//! `M`. A hybrid mixes them with probability `p`, and a directed
//! Erdős–Rényi generator provides a same-density baseline.
//!
//! Modules:
//! - [`graph`]: append-only directed graph, edge-list I/O, seeded randomness.
//! - [`formation`]: the generators.
//! - [`theory`]: expected in-degree curves and the exhaustive small-`n` oracle.
//! - [`metrics`]: degree distributions, power-law fits, Gini, paths, clustering.
//! - [`experiment`]: batches, sweeps, follower-data ingestion, exports.

pub mod experiment;
pub mod formation;
pub mod graph;
pub mod metrics;
pub mod sampling;
pub mod svg;
pub mod theory;

pub use experiment::{ExperimentError, ExperimentSpec, ResultSet};
pub use formation::{generate, ConfigError, FormationConfig, HybridMixing, MeritStrategy, ModelKind};
pub use graph::{DirectedGraph, GraphError, NodeId, ParseError, RandomSource};
pub use metrics::{MetricsError, MetricsReport};
pub use theory::{CurveSpec, TheoryError, TheoryTable};
