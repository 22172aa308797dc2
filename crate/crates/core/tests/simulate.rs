use ncgraph_core::inequality::{kcbs, twin};
use ncgraph_core::quantum::{paper_rep, paper_state, rep_by_id};
use ncgraph_core::simulate::{simulate_sequential, simulate_with, SimulationOptions};

#[test]
fn twin_contexts_fire_exactly_once() {
    let r = simulate_sequential(&twin(), &paper_rep(), &paper_state(), 100_000, 7).unwrap();
    for c in &r.contexts {
        assert!((c.exactly_one - 1.0).abs() <= 0.01, "context {}", c.context);
        for f in &c.test_frequencies {
            assert!((f - 0.25).abs() < 0.01);
        }
    }
    assert!((r.lhs - 2.5).abs() < 0.01);
}

#[test]
fn each_vector_as_state_fires_its_test() {
    let rep = paper_rep();
    let ineq = twin();
    for j in 0..10 {
        let psi = rep.vector(j).clone();
        let r = simulate_sequential(&ineq, &rep, &psi, 500, j as u64).unwrap();
        for c in &r.contexts {
            if let Some(pos) = c.tests.iter().position(|&t| t == j) {
                assert_eq!(c.test_frequencies[pos], 1.0);
            }
        }
    }
}

#[test]
fn measurement_order_does_not_matter() {
    let (rep, psi) = rep_by_id("c5-d3").unwrap();
    let ineq = kcbs();
    let shots = 50_000;
    let a = simulate_sequential(&ineq, &rep, &psi, shots, 1).unwrap();
    let mut opts = SimulationOptions::new(shots, 2);
    opts.orders = Some(vec![vec![1, 0]; 5]);
    let b = simulate_with(&ineq, &rep, &psi, &opts).unwrap();
    for (x, y) in a.contexts.iter().zip(&b.contexts) {
        for (p, q) in x.pattern_counts.iter().zip(&y.pattern_counts) {
            let (p, q) = (*p as f64 / shots as f64, *q as f64 / shots as f64);
            let se = ((p * (1.0 - p) + q * (1.0 - q)) / shots as f64).sqrt();
            assert!((p - q).abs() <= 5.0 * se + 1e-12);
        }
    }
}

#[test]
fn repeat_check_on_kcbs() {
    let (rep, psi) = rep_by_id("c5-d3").unwrap();
    let mut opts = SimulationOptions::new(20_000, 4);
    opts.repeat_each = true;
    let r = simulate_with(&kcbs(), &rep, &psi, &opts).unwrap();
    assert!(r
        .contexts
        .iter()
        .all(|c| c.repeat_agreements == Some(20_000)));
}

#[test]
fn error_shrinks_with_shots() {
    let (rep, psi) = rep_by_id("c5-d3").unwrap();
    let target = 5f64.sqrt();
    let mut last_se = f64::INFINITY;
    for shots in [1_000, 10_000, 100_000] {
        let r = simulate_sequential(&kcbs(), &rep, &psi, shots, 11).unwrap();
        assert!(
            (r.lhs - target).abs() <= 5.0 * r.lhs_std_err,
            "{shots}: {}",
            r.lhs
        );
        assert!(r.lhs_std_err < last_se);
        last_se = r.lhs_std_err;
    }
    assert!(last_se < 0.005);
}
