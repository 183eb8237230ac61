mod common;

use std::collections::BTreeSet;
use std::fs;

use num::rational::Ratio;
use swapdiv::constructions::{gstar_assignment, GStarWhich};
use swapdiv::dynamics::default_max_steps;
use swapdiv::oracle::{enumerate_equilibria, worst_equilibrium_value, DEFAULT_CAP};
use swapdiv::*;

#[test]
fn files_round_trip_through_dynamics() {
    let dir = tempfile::tempdir().unwrap();
    let g = Graph::torus(100).unwrap();
    let gpath = dir.path().join("t100.edges");
    fs::write(&gpath, format!("# torus 10x10\n{}", g.to_edge_list())).unwrap();
    let loaded = load_edge_list(&gpath).unwrap();
    assert_eq!(loaded, g);

    let a = random_assignment(&loaded, 4, 9, RandomMode::EquitableShuffle).unwrap();
    let apath = dir.path().join("a.txt");
    fs::write(&apath, a.to_line()).unwrap();
    let back = Assignment::parse(&loaded, &fs::read_to_string(&apath).unwrap(), Some(4)).unwrap();
    assert_eq!(back, a);

    let kind = UtilityKind::DifferenceSeeking;
    let trace = run_to_equilibrium(kind, &back, default_max_steps(kind, &loaded)).unwrap();
    assert!(verify_equilibrium(kind, &trace.final_assignment).is_equilibrium());
    let log = trace.move_log_csv();
    assert_eq!(log.lines().count(), trace.swap_count() + 1);
    let r = MeasureReport::compute(&trace.final_assignment);
    assert!(r.ce_norm > MeasureReport::compute(&a).ce_norm || trace.swap_count() == 0);
}

#[test]
fn loader_reports_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.edges");
    fs::write(&p, "0 1\n1 2\n\n# comment\n2 2\n").unwrap();
    match load_edge_list(&p) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(
        load_edge_list(dir.path().join("missing")),
        Err(Error::Io(_))
    ));
}

#[test]
fn two_types_binary_and_variety_share_equilibria() {
    for g in [
        Graph::cycle(6).unwrap(),
        Graph::cylinder(8).unwrap(),
        Graph::torus(9).unwrap(),
    ] {
        let p = equitable_partition(g.n(), 2).unwrap();
        let set = |k| -> BTreeSet<Vec<usize>> {
            enumerate_equilibria(&g, &p, k, DEFAULT_CAP)
                .unwrap()
                .into_iter()
                .map(|a| a.into_labels())
                .collect()
        };
        assert_eq!(set(UtilityKind::Binary), set(UtilityKind::VarietySeeking));
    }
}

#[test]
fn worst_type_refinement_is_below_colorful_refinement() {
    use swapdiv::measures::Measure::{DoiColorful, DoiTypes};
    for (g, t) in [
        (Graph::cycle(6).unwrap(), 3),
        (Graph::cylinder(6).unwrap(), 3),
        (Graph::torus(9).unwrap(), 3),
    ] {
        let p = equitable_partition(g.n(), t).unwrap();
        for kind in UtilityKind::DIVERSITY {
            for j in 1..=g.delta_max() {
                let c = worst_equilibrium_value(&g, &p, kind, DoiColorful(j), DEFAULT_CAP).unwrap();
                let ty = worst_equilibrium_value(&g, &p, kind, DoiTypes(j), DEFAULT_CAP).unwrap();
                assert!(ty <= c, "{kind} j={j}: {ty} > {c}");
            }
        }
    }
}

#[test]
fn single_type_labeling() {
    let g = Graph::cycle(5).unwrap();
    let a = Assignment::new(&g, 2, vec![1; 5]).unwrap();
    assert_eq!(potential(&a), 5);
    assert_eq!(MeasureReport::compute(&a).doi, Ratio::from_integer(0));
    assert!(verify_equilibrium(UtilityKind::Binary, &a).is_equilibrium());
}

#[test]
fn gstar_optimal_is_not_a_difference_equilibrium() {
    let gs = GStar::build(3, 7, 60).unwrap();
    let c = gstar_assignment(&gs, GStarWhich::Optimal).unwrap();
    assert!(!verify_equilibrium(UtilityKind::DifferenceSeeking, &c.assignment).is_equilibrium());
    assert!(common::lemma_violations(UtilityKind::VarietySeeking, &c.assignment).is_empty());
}

#[test]
fn c6_block_labeling_first_swap() {
    let g = Graph::cycle(6).unwrap();
    let a = Assignment::new(&g, 2, vec![1, 1, 1, 2, 2, 2]).unwrap();
    let m = find_swap(UtilityKind::Binary, &a).unwrap();
    assert_eq!((m.u, m.v), (1, 4));
    assert_eq!(
        common::naive_find_swap(UtilityKind::Binary, &a),
        Some((1, 4))
    );
}
