//! Diversity-seeking swap Schelling games on graphs.
//!
//! Agents of `t` types occupy every vertex of a graph; two agents of
//! different types swap places when both strictly gain utility. This crate
//! builds the graph families and worst-case assignments studied for these
//! games, runs swap dynamics to equilibrium, and measures how diverse the
//! resulting neighborhoods are.

pub mod assignment;
pub mod constructions;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod gstar;
pub mod measures;
pub mod oracle;
pub mod utility;

pub use assignment::{
    equitable_partition, random_assignment, Assignment, RandomMode, TypePartition, TypeVector,
};
pub use constructions::{Construction, Family, Target};
pub use dynamics::{
    find_swap, potential, run_to_equilibrium, verify_equilibrium, RunTrace, SwapMove, Verdict,
};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentResult, InputKind};
pub use graph::{load_edge_list, Graph};
pub use gstar::{GStar, GVertex, Side};
pub use measures::{Measure, MeasureReport, Rational};
pub use utility::{is_improving_swap, swap_condition_u_tau, utility, UtilityKind};
