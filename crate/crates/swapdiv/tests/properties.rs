mod common;

use num::rational::Ratio;
use num::Zero;
use proptest::prelude::*;
use swapdiv::assignment::RandomMode;
use swapdiv::dynamics::default_max_steps;
use swapdiv::measures::{
    colorful_edges, degree_of_integration, doi_refined, evenness, evenness_bound,
    neighborhood_variety, DoiVariant,
};
use swapdiv::*;

use common::{naive_find_swap, random_connected, swap_condition_mismatch};

const KINDS: [UtilityKind; 4] = [
    UtilityKind::Binary,
    UtilityKind::DifferenceSeeking,
    UtilityKind::VarietySeeking,
    UtilityKind::SimilaritySeeking,
];

fn any_graph() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (6usize..40).prop_map(|n| Graph::cycle(n).unwrap()),
        (3usize..20).prop_map(|m| Graph::cylinder(2 * m).unwrap()),
        (3usize..9).prop_map(|s| Graph::torus(s * s).unwrap()),
        (6usize..40, 0usize..60, any::<u64>()).prop_map(|(n, e, s)| random_connected(n, e, s)),
    ]
}

fn regular_graph() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (6usize..40).prop_map(|n| Graph::cycle(n).unwrap()),
        (3usize..20).prop_map(|m| Graph::cylinder(2 * m).unwrap()),
        (3usize..9).prop_map(|s| Graph::torus(s * s).unwrap()),
        (3usize..6, 0usize..6)
            .prop_map(|(d, extra)| Graph::bipartite_regular(2 * (d + extra), d).unwrap()),
    ]
}

fn mode() -> impl Strategy<Value = RandomMode> {
    prop_oneof![
        Just(RandomMode::UniformPerVertex),
        Just(RandomMode::EquitableShuffle)
    ]
}

fn sum_utility(kind: UtilityKind, a: &Assignment<'_>) -> Ratio<i64> {
    (0..a.n()).map(|v| utility(kind, a, v)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn builders_are_regular(n in 3usize..60, m in 3usize..30, s in 3usize..12) {
        let c = Graph::cycle(n).unwrap();
        prop_assert!(c.is_regular() && c.delta_min() == 2 && c.edge_count() == n);
        let p = Graph::cylinder(2 * m).unwrap();
        prop_assert!(p.is_regular() && p.delta_min() == 3 && p.edge_count() == 3 * m);
        let t = Graph::torus(s * s).unwrap();
        prop_assert!(t.is_regular() && t.delta_min() == 4 && t.edge_count() == 2 * s * s);
    }

    #[test]
    fn bipartite_gadget_is_regular(q in 2usize..20, d in 2usize..20) {
        prop_assume!(d <= q);
        let g = Graph::bipartite_regular(2 * q, d).unwrap();
        prop_assert!(g.is_regular());
        prop_assert_eq!(g.delta_min(), d);
        for (u, v) in g.edges() {
            prop_assert!(u < q && v >= q);
        }
    }

    #[test]
    fn edge_list_round_trips(g in any_graph()) {
        let back = swapdiv::graph::parse_edge_list(&g.to_edge_list(), std::path::Path::new("x")).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn type_vectors_sum_to_degree(g in any_graph(), t in 2usize..6, seed: u64, m in mode()) {
        let a = random_assignment(&g, t, seed, m).unwrap();
        for v in 0..g.n() {
            let tv = a.type_vector(v);
            prop_assert_eq!((1..=t).map(|i| tv.count(i)).sum::<usize>(), g.degree(v));
        }
        let line = a.to_line();
        prop_assert_eq!(Assignment::parse(&g, &line, Some(t)).unwrap(), a);
    }

    #[test]
    fn random_assignments_are_reproducible(g in any_graph(), t in 2usize..6, seed: u64, m in mode()) {
        prop_assume!(t <= g.n());
        let a = random_assignment(&g, t, seed, m).unwrap();
        prop_assert_eq!(&a, &random_assignment(&g, t, seed, m).unwrap());
        prop_assert!(a.partition().counts().iter().all(|&c| c > 0));
        if m == RandomMode::EquitableShuffle {
            prop_assert!(a.partition().is_equitable());
        }
    }

    #[test]
    fn swaps_preserve_counts(g in any_graph(), t in 2usize..5, seed: u64, pairs in prop::collection::vec((any::<usize>(), any::<usize>()), 1..20)) {
        let mut a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        let before = a.partition().clone();
        for (u, v) in pairs {
            a.swap(u % g.n(), v % g.n());
        }
        let counts: Vec<usize> = (1..=t).map(|i| a.labels().iter().filter(|&&l| l == i).count()).collect();
        prop_assert_eq!(counts.as_slice(), before.counts());
    }

    #[test]
    fn engine_matches_naive_scan(g in any_graph(), t in 2usize..6, seed: u64, k in 0usize..4) {
        let kind = KINDS[k];
        let a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        let fast = find_swap(kind, &a).map(|m| (m.u, m.v));
        prop_assert_eq!(fast, naive_find_swap(kind, &a));
    }

    #[test]
    fn engine_matches_naive_scan_along_a_run(g in regular_graph(), t in 2usize..6, seed: u64, k in 0usize..4) {
        let kind = KINDS[k];
        let a = random_assignment(&g, t, seed, RandomMode::EquitableShuffle).unwrap();
        let trace = run_to_equilibrium(kind, &a, default_max_steps(kind, &g)).unwrap();
        let mut cur = a.clone();
        for m in &trace.moves {
            prop_assert_eq!(naive_find_swap(kind, &cur), Some((m.u, m.v)));
            cur.swap(m.u, m.v);
        }
        if trace.at_equilibrium {
            prop_assert_eq!(naive_find_swap(kind, &cur), None);
        }
    }

    #[test]
    fn variety_swap_condition_is_exact(g in any_graph(), t in 2usize..7, seed: u64) {
        let a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        prop_assert_eq!(swap_condition_mismatch(&a), None);
    }

    #[test]
    fn two_types_binary_is_variety(g in any_graph(), seed: u64) {
        let a = random_assignment(&g, 2, seed, RandomMode::UniformPerVertex).unwrap();
        for v in 0..g.n() {
            prop_assert_eq!(utility(UtilityKind::Binary, &a, v), utility(UtilityKind::VarietySeeking, &a, v));
        }
        prop_assert_eq!(
            find_swap(UtilityKind::Binary, &a).map(|m| (m.u, m.v)),
            find_swap(UtilityKind::VarietySeeking, &a).map(|m| (m.u, m.v))
        );
    }

    #[test]
    fn measure_identities(g in any_graph(), t in 2usize..7, seed: u64) {
        let a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        let n = Ratio::from_integer(g.n() as i64);
        prop_assert_eq!(degree_of_integration(&a), sum_utility(UtilityKind::Binary, &a) / n);
        prop_assert_eq!(
            Ratio::from_integer(2 * colorful_edges(&a) as i64),
            sum_utility(UtilityKind::DifferenceSeeking, &a)
        );
        prop_assert_eq!(neighborhood_variety(&a), sum_utility(UtilityKind::VarietySeeking, &a) / n);

        let r = MeasureReport::compute(&a);
        prop_assert!(r.doi >= Ratio::zero() && r.doi <= Ratio::from_integer(1));
        prop_assert!(r.nv <= Ratio::from_integer(g.delta_max().min(t - 1) as i64));
        prop_assert_eq!(r.doic_at(1), r.doi);
        prop_assert_eq!(r.doit_at(1), r.doi);
        for j in 1..=4 {
            prop_assert!(r.doic_at(j + 1) <= r.doic_at(j));
            prop_assert!(r.doit_at(j + 1) <= r.doit_at(j));
            prop_assert!(r.doit_at(j) <= r.doic_at(j));
            prop_assert_eq!(doi_refined(&a, j, DoiVariant::Colorful).unwrap(), r.doic_at(j));
            prop_assert_eq!(doi_refined(&a, j, DoiVariant::Types).unwrap(), r.doit_at(j));
        }
        prop_assert_eq!(evenness(&a), r.ev);
        if g.is_regular() {
            let bound = evenness_bound(t, g.n(), g.delta_min());
            prop_assert!(r.ev <= bound);
            prop_assert!(r.ev_norm.unwrap() <= Ratio::from_integer(1));
        }
    }

    #[test]
    fn dynamics_obey_the_potential_law(g in any_graph(), t in 2usize..6, seed: u64, k in 0usize..3) {
        let kind = UtilityKind::DIVERSITY[k];
        let a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        let trace = run_to_equilibrium(kind, &a, default_max_steps(kind, &g)).unwrap();
        prop_assert!(trace.at_equilibrium);
        prop_assert!(verify_equilibrium(kind, &trace.final_assignment).is_equilibrium());
        let bound = if kind == UtilityKind::Binary { g.n() / 2 } else { g.edge_count() / 2 };
        prop_assert!(trace.swap_count() <= bound);
        let mut p = potential(&a);
        for m in &trace.moves {
            prop_assert_eq!(m.potential_before, p);
            prop_assert!(m.potential_after + 2 <= m.potential_before);
            prop_assert!(m.post_u > m.pre_u && m.post_v > m.pre_v);
            p = m.potential_after;
        }
        prop_assert_eq!(p, trace.final_potential());
        prop_assert_eq!(trace.final_assignment.partition(), a.partition());

        let again = run_to_equilibrium(kind, &a, default_max_steps(kind, &g)).unwrap();
        prop_assert_eq!(again.final_assignment, trace.final_assignment);
    }

    #[test]
    fn diversity_equilibria_are_binary_equilibria(g in any_graph(), t in 2usize..6, seed: u64) {
        let a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        for kind in [UtilityKind::DifferenceSeeking, UtilityKind::VarietySeeking] {
            let trace = run_to_equilibrium(kind, &a, default_max_steps(kind, &g)).unwrap();
            prop_assert!(verify_equilibrium(UtilityKind::Binary, &trace.final_assignment).is_equilibrium());
        }
    }

    #[test]
    fn similarity_raises_the_potential_on_regular_graphs(g in regular_graph(), t in 2usize..5, seed: u64) {
        let kind = UtilityKind::SimilaritySeeking;
        let a = random_assignment(&g, t, seed, RandomMode::UniformPerVertex).unwrap();
        let trace = run_to_equilibrium(kind, &a, default_max_steps(kind, &g)).unwrap();
        prop_assert!(trace.at_equilibrium);
        for m in &trace.moves {
            prop_assert!(m.potential_after >= m.potential_before + 2);
        }
    }
}
