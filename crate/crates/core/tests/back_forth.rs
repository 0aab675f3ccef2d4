use std::sync::Arc;

use rado_lab::back_forth::{bf_run, make_fibred_sample, s0_experiment, FibredGraph, FibredWindow, S0Params};
use rado_lab::exact_geometry::{builtin, int, rat};
use rado_lab::random_graphs::Probability;

fn half() -> Probability {
    Probability::new(&rat(1, 2)).unwrap()
}

#[test]
fn completion_responds_to_fibre_density() {
    let dense = s0_experiment(&S0Params::hexagon(120, half(), 30), 8, 11).unwrap();
    let sparse = s0_experiment(&S0Params::hexagon(1, half(), 30), 8, 11).unwrap();
    assert!(dense.audits_passed && sparse.audits_passed);
    assert!(dense.conditional_rate >= 0.75, "dense {}", dense.conditional_rate);
    assert!(dense.conditional_rate > sparse.conditional_rate, "{} vs {}", dense.conditional_rate, sparse.conditional_rate);
}

#[test]
fn experiment_is_deterministic() {
    let params = S0Params::quick(Probability::new(&rat(3, 10)).unwrap());
    let a = s0_experiment(&params, 200, 4).unwrap();
    let b = s0_experiment(&params, 200, 4).unwrap();
    assert_eq!(a.trials, b.trials);
    let c = s0_experiment(&params, 200, 5).unwrap();
    assert_ne!(a.trials, c.trials);
}

#[test]
fn same_graph_on_both_sides_never_blocks_early() {
    let window = FibredWindow { u_radius: int(4), fibre_length: rat(1, 10), stagger: true };
    let sample = Arc::new(make_fibred_sample(&builtin::hexagon(), 10, 20, &window, 9).unwrap());
    let g = FibredGraph::new(sample.clone(), half(), 1);
    let h = FibredGraph::new(sample, half(), 1);
    let report = bf_run(&g, &h, 40, 0).unwrap();
    assert!(report.audits_passed);
    assert_eq!(report.blocked, None);
    assert_eq!(report.matched, 40);
}
