#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swapdiv::{is_improving_swap, swap_condition_u_tau, utility, Assignment, Graph, UtilityKind};

/// Connected graph on `n` vertices: a random recursive tree plus `extra`
/// random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Reference for `find_swap`: movers by ascending (utility, index), partners
/// in the same order, each pair checked literally.
pub fn naive_find_swap(kind: UtilityKind, a: &Assignment<'_>) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..a.n()).collect();
    order.sort_by_key(|&v| (utility(kind, a, v), v));
    for &u in &order {
        for &v in &order {
            if a.label(u) != a.label(v) && is_improving_swap(kind, a, u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

fn colorful(a: &Assignment<'_>, v: usize) -> usize {
    let g = a.graph();
    g.neighbors(v)
        .iter()
        .filter(|&&w| a.label(w) != a.label(v))
        .count()
}

/// Structural facts every equilibrium for `kind` must satisfy. Returns one
/// message per violated fact; the graph must be regular.
pub fn lemma_violations(kind: UtilityKind, a: &Assignment<'_>) -> Vec<String> {
    let g = a.graph();
    assert!(g.is_regular(), "lemma suite needs a regular graph");
    let d = g.delta_min();
    let n = a.n();
    let mut out = Vec::new();

    let seg: BTreeSet<usize> = (0..n)
        .filter(|&v| a.is_segregated(v))
        .map(|v| a.label(v))
        .collect();
    if seg.len() > 1 {
        out.push(format!("{kind}: types {seg:?} all have segregated agents"));
    }

    let cf: Vec<usize> = (0..n).map(|v| colorful(a, v)).collect();
    let types_with = |c: usize| {
        (0..n)
            .filter(|&v| cf[v] == c)
            .map(|v| a.label(v))
            .collect::<BTreeSet<_>>()
            .len()
    };

    match kind {
        UtilityKind::DifferenceSeeking => {
            'pairs: for u in 0..n {
                for v in u + 1..n {
                    if a.label(u) == a.label(v) {
                        continue;
                    }
                    let need = if g.has_edge(u, v) { d + 1 } else { d };
                    if cf[u] + cf[v] < need {
                        out.push(format!(
                            "diff: pair ({u},{v}) has utility sum {} < {need}",
                            cf[u] + cf[v]
                        ));
                        break 'pairs;
                    }
                }
            }
            for c in 0..d {
                let q = types_with(c);
                // q <= 2c/(d-c) + 1
                if q * (d - c) > 2 * c + (d - c) {
                    out.push(format!(
                        "diff: {q} types have agents with {c} colorful edges"
                    ));
                }
            }
        }
        UtilityKind::VarietySeeking => {
            for c in 1..d {
                let q = types_with(c);
                if q > c * c + 2 * c {
                    out.push(format!(
                        "variety: {q} types have agents with {c} colorful edges"
                    ));
                }
            }
        }
        _ => {}
    }
    if let Some(msg) = swap_condition_mismatch(a) {
        out.push(msg);
    }
    out
}

/// First pair where the closed-form variety-seeking swap condition disagrees
/// with the literal check.
pub fn swap_condition_mismatch(a: &Assignment<'_>) -> Option<String> {
    let n = a.n();
    for u in 0..n {
        for v in u + 1..n {
            if a.label(u) == a.label(v) {
                continue;
            }
            let lit = is_improving_swap(UtilityKind::VarietySeeking, a, u, v);
            if swap_condition_u_tau(a, u, v) != lit {
                return Some(format!(
                    "swap condition disagrees at ({u},{v}): literal {lit}"
                ));
            }
        }
    }
    None
}
