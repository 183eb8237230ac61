//! Shared fixtures for the benchmarks.

use swapdiv::{random_assignment, Assignment, Graph, RandomMode};

/// The 30x30 torus used by the experiments.
pub fn torus900() -> Graph {
    Graph::torus(900).expect("900 is a square")
}

pub fn random_input(g: &Graph, t: usize, seed: u64) -> Assignment<'_> {
    random_assignment(g, t, seed, RandomMode::UniformPerVertex).expect("t fits the torus")
}
