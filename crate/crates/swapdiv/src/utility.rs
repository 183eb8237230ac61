//! Agent utilities and the swap-improvement test.

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;

use crate::assignment::Assignment;
use crate::error::invalid;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UtilityKind {
    /// `U_b`: 1 if some neighbor has another type.
    Binary,
    /// `U_#`: number of neighbors of another type.
    DifferenceSeeking,
    /// `U_τ`: number of distinct other types among the neighbors.
    VarietySeeking,
    /// Fraction of same-type neighbors; only used to build Schelling inputs.
    SimilaritySeeking,
}

impl UtilityKind {
    pub const DIVERSITY: [UtilityKind; 3] = [
        UtilityKind::Binary,
        UtilityKind::DifferenceSeeking,
        UtilityKind::VarietySeeking,
    ];

    pub fn is_diversity(self) -> bool {
        self != UtilityKind::SimilaritySeeking
    }

    pub fn name(self) -> &'static str {
        match self {
            UtilityKind::Binary => "binary",
            UtilityKind::DifferenceSeeking => "diff",
            UtilityKind::VarietySeeking => "variety",
            UtilityKind::SimilaritySeeking => "similarity",
        }
    }
}

impl fmt::Display for UtilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UtilityKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "binary" | "b" => Ok(UtilityKind::Binary),
            "diff" | "difference" | "#" => Ok(UtilityKind::DifferenceSeeking),
            "variety" | "tau" => Ok(UtilityKind::VarietySeeking),
            "similarity" => Ok(UtilityKind::SimilaritySeeking),
            _ => Err(invalid(format!(
                "unknown utility {s:?} (expected binary, diff, variety or similarity)"
            ))),
        }
    }
}

/// Utility of the agent of type `own` placed on `v`, where `label` gives the
/// type on every other vertex. Returned as `(numerator, denominator)`.
pub(crate) fn raw_utility(
    kind: UtilityKind,
    graph: &Graph,
    v: usize,
    own: usize,
    label: impl Fn(usize) -> usize,
) -> (i64, i64) {
    let nbrs = graph.neighbors(v);
    match kind {
        UtilityKind::Binary => (nbrs.iter().any(|&w| label(w) != own) as i64, 1),
        UtilityKind::DifferenceSeeking => {
            (nbrs.iter().filter(|&&w| label(w) != own).count() as i64, 1)
        }
        UtilityKind::VarietySeeking => {
            let mut distinct = 0;
            for (i, &w) in nbrs.iter().enumerate() {
                let l = label(w);
                if l != own && nbrs[..i].iter().all(|&x| label(x) != l) {
                    distinct += 1;
                }
            }
            (distinct, 1)
        }
        UtilityKind::SimilaritySeeking => (
            nbrs.iter().filter(|&&w| label(w) == own).count() as i64,
            nbrs.len() as i64,
        ),
    }
}

pub fn utility(kind: UtilityKind, a: &Assignment<'_>, v: usize) -> Ratio<i64> {
    let labels = a.labels();
    let (num, den) = raw_utility(kind, a.graph(), v, labels[v], |w| labels[w]);
    Ratio::new(num, den)
}

fn less(x: (i64, i64), y: (i64, i64)) -> bool {
    x.0 * y.1 < y.0 * x.1
}

/// Both agents strictly gain when the agents on `u` and `v` exchange places,
/// judged on the post-swap labeling. Same-type pairs are never improving.
pub fn is_improving_swap(kind: UtilityKind, a: &Assignment<'_>, u: usize, v: usize) -> bool {
    let labels = a.labels();
    let (lu, lv) = (labels[u], labels[v]);
    if lu == lv {
        return false;
    }
    let g = a.graph();
    let before = |x: usize| labels[x];
    let after = |x: usize| {
        if x == u {
            lv
        } else if x == v {
            lu
        } else {
            labels[x]
        }
    };
    less(
        raw_utility(kind, g, u, lu, before),
        raw_utility(kind, g, v, lu, after),
    ) && less(
        raw_utility(kind, g, v, lv, before),
        raw_utility(kind, g, u, lv, after),
    )
}

/// Closed-form `U_τ` swap condition: the two agents are not adjacent, have
/// equal utility, and each one's own type is present only in its own
/// neighborhood.
pub fn swap_condition_u_tau(a: &Assignment<'_>, u: usize, v: usize) -> bool {
    let (lu, lv) = (a.label(u), a.label(v));
    if lu == lv || a.graph().has_edge(u, v) {
        return false;
    }
    if utility(UtilityKind::VarietySeeking, a, u) != utility(UtilityKind::VarietySeeking, a, v) {
        return false;
    }
    let (pu, pv) = (a.type_vector(u), a.type_vector(v));
    pu.count(lu) > 0 && pv.count(lu) == 0 && pv.count(lv) > 0 && pu.count(lv) == 0
}
