//! Exhaustive ground truth on small instances.
//!
//! Every labeling with the requested type counts is visited in lexicographic
//! order. No symmetry is quotiented out, so results are easy to trust; a cap on
//! the number of labelings keeps the enumeration bounded.

use crate::assignment::{Assignment, TypePartition};
use crate::dynamics::verify_equilibrium;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::measures::{Measure, Rational};
use crate::utility::UtilityKind;

pub const DEFAULT_CAP: u128 = 10_000_000;

/// `n! / Π c_i!`, saturating.
pub fn labeling_count(partition: &TypePartition) -> u128 {
    let mut total: u128 = 1;
    let mut placed: u128 = 0;
    for &c in partition.counts() {
        for i in 1..=c as u128 {
            placed += 1;
            // C(placed, i) built incrementally stays integral at every step.
            total = match total.checked_mul(placed) {
                Some(x) => x / i,
                None => return u128::MAX,
            };
        }
    }
    total
}

fn next_permutation(l: &mut [usize]) -> bool {
    let Some(i) = l.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = l.iter().rposition(|&x| x > l[i]).unwrap();
    l.swap(i, j);
    l[i + 1..].reverse();
    true
}

/// Calls `f` on every labeling of `graph` with the counts of `partition`.
pub fn for_each_labeling<'g>(
    graph: &'g Graph,
    partition: &TypePartition,
    cap: u128,
    mut f: impl FnMut(&Assignment<'g>),
) -> Result<()> {
    if partition.n() != graph.n() {
        return Err(invalid(format!(
            "partition covers {} agents, graph has {} vertices",
            partition.n(),
            graph.n()
        )));
    }
    let required = labeling_count(partition);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let mut labels: Vec<usize> = partition
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
        .collect();
    loop {
        f(&Assignment::new(graph, partition.t(), labels.clone())?);
        if !next_permutation(&mut labels) {
            return Ok(());
        }
    }
}

/// All equilibria for `kind` among the labelings with the given counts, in
/// lexicographic order of their label sequences.
pub fn enumerate_equilibria<'g>(
    graph: &'g Graph,
    partition: &TypePartition,
    kind: UtilityKind,
    cap: u128,
) -> Result<Vec<Assignment<'g>>> {
    let mut out = Vec::new();
    for_each_labeling(graph, partition, cap, |a| {
        if verify_equilibrium(kind, a).is_equilibrium() {
            out.push(a.clone());
        }
    })?;
    Ok(out)
}

/// Maximum of `measure` over all labelings, with the lexicographically first
/// maximizer.
pub fn brute_force_optimum<'g>(
    graph: &'g Graph,
    partition: &TypePartition,
    measure: Measure,
    cap: u128,
) -> Result<(Rational, Assignment<'g>)> {
    let mut best: Option<(Rational, Assignment<'g>)> = None;
    for_each_labeling(graph, partition, cap, |a| {
        let x = measure.value(a);
        if best.as_ref().is_none_or(|(b, _)| x > *b) {
            best = Some((x, a.clone()));
        }
    })?;
    best.ok_or_else(|| Error::Invariant("no labeling enumerated".into()))
}

/// Minimum of `measure` over all equilibria for `kind` (the worst-case value
/// used for `wDoI_c`, `wDoI_t` and empirical price of anarchy).
pub fn worst_equilibrium_value(
    graph: &Graph,
    partition: &TypePartition,
    kind: UtilityKind,
    measure: Measure,
    cap: u128,
) -> Result<Rational> {
    enumerate_equilibria(graph, partition, kind, cap)?
        .iter()
        .map(|a| measure.value(a))
        .min()
        .ok_or_else(|| Error::Invariant(format!("{kind} has no equilibrium on this instance")))
}
