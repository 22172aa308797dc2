//! The ten acceptance criteria, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ncgraph_core::cliques::{edge_clique_cover_number, independence_number, maximal_cliques};
use ncgraph_core::graph::Graph;
use ncgraph_core::inequality::{
    inequality_graph, kcbs, nchv_max, nchv_max_exclusive, twin, Bounds, Context, Inequality,
};
use ncgraph_core::iso::is_isomorphic;
use ncgraph_core::lp::fractional_packing_number;
use ncgraph_core::polytope::{facet_check, Verdict};
use ncgraph_core::quantum::{inequality_quantum_lhs, paper_rep, paper_state, quantum_value};
use ncgraph_core::rational::{int, ratio, to_f64, Rational};
use ncgraph_core::sdp::lovasz_theta;
use ncgraph_core::search::ortho_rep_search;
use ncgraph_core::simulate::{simulate_with, SimulationOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn theta_prime(g: &Graph) -> usize {
    edge_clique_cover_number(g, g.edge_count().max(1))
        .number()
        .unwrap()
}

fn pentagon() -> Outcome {
    let g = Graph::cycle(5).unwrap();
    let alpha = independence_number(&g).0;
    let theta = lovasz_theta(&g, 1e-8).map_err(|e| e.to_string())?.value;
    let packing = fractional_packing_number(&g)
        .map_err(|e| e.to_string())?
        .value;
    let tp = theta_prime(&g);
    ensure!(alpha == 2, "alpha {alpha}");
    ensure!((theta - 5f64.sqrt()).abs() <= 1e-6, "theta {theta}");
    ensure!(packing == ratio(5, 2), "alpha* {packing}");
    ensure!(tp == 5, "theta' {tp}");
    Ok(format!(
        "alpha=2 theta={theta:.7} alpha*={packing} theta'={tp}"
    ))
}

fn twin_invariants() -> Outcome {
    let ineq = twin();
    let g = inequality_graph(&ineq).map_err(|e| e.to_string())?.graph;
    let alpha = independence_number(&g).0;
    let theta = lovasz_theta(&g, 1e-8).map_err(|e| e.to_string())?.value;
    let packing = fractional_packing_number(&g)
        .map_err(|e| e.to_string())?
        .value;
    let cover = edge_clique_cover_number(&g, 10);
    let tp = cover.number();
    ensure!(alpha == 2, "alpha {alpha}");
    ensure!((theta - 2.5).abs() <= 1e-6, "theta {theta}");
    ensure!(packing == ratio(5, 2), "alpha* {packing}");
    ensure!(tp == Some(5), "theta' {tp:?}");
    let ncgraph_core::cliques::EdgeCoverOutcome::Exact { cover, .. } = cover else {
        return Err("no cover".into());
    };
    let mut got: Vec<u64> = cover.cliques.iter().map(|c| c.bits()).collect();
    let mut want: Vec<u64> = ineq.contexts().iter().map(|c| c.set().bits()).collect();
    got.sort_unstable();
    want.sort_unstable();
    ensure!(got == want, "cover {got:?} is not the five contexts");
    let flag = (alpha as f64) < theta && (theta - to_f64(&packing)).abs() <= 1e-6;
    ensure!(flag, "fully contextual flag is false");
    Ok(format!(
        "alpha=2 theta={theta:.7} alpha*={packing} theta'=5 fully-contextual=TRUE"
    ))
}

fn structure() -> Outcome {
    let g = inequality_graph(&twin()).map_err(|e| e.to_string())?.graph;
    ensure!(
        is_isomorphic(&g, &Graph::johnson_5_2()).is_some(),
        "not J(5,2)"
    );
    ensure!(
        is_isomorphic(&g, &Graph::petersen().complement()).is_some(),
        "not the Petersen complement"
    );
    Ok("twin graph = J(5,2) = complement of Petersen".into())
}

fn nchv() -> Outcome {
    let k = nchv_max(&kcbs()).map_err(|e| e.to_string())?.0;
    let t = nchv_max(&twin()).map_err(|e| e.to_string())?.0;
    ensure!(k == int(2), "kcbs {k}");
    ensure!(t == int(2), "twin {t}");
    for ineq in [kcbs(), twin()] {
        let g = inequality_graph(&ineq).map_err(|e| e.to_string())?.graph;
        ensure!(independence_number(&g).0 == 2, "alpha mismatch");
    }
    Ok("kcbs 2 over 32 assignments, twin 2 over 1024".into())
}

fn construction() -> Outcome {
    let rep = paper_rep();
    let psi = paper_state();
    let gram = rep.gram();
    for (i, row) in gram.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j {
                1.0
            } else if rep.graph().has_edge(i, j) {
                0.0
            } else {
                0.5
            };
            ensure!((x - want).abs() <= 1e-12, "gram[{i}][{j}] = {x}");
        }
    }
    for (i, v) in rep.vectors().iter().enumerate() {
        let o = v.overlap(&psi);
        ensure!((o - 0.5).abs() <= 1e-12, "<v_{i}|psi> = {o}");
    }
    let q = quantum_value(&rep, &psi).map_err(|e| e.to_string())?;
    ensure!((q - 2.5).abs() <= 1e-12, "quantum value {q}");
    let lhs = inequality_quantum_lhs(&twin(), &rep, &psi).map_err(|e| e.to_string())?;
    for (c, t) in lhs.terms.iter().enumerate() {
        ensure!((t - 1.0).abs() <= 1e-12, "context {c} term {t}");
    }
    Ok(format!("quantum value {q:.7}, all context terms 1"))
}

fn facets() -> Outcome {
    let mut parts = Vec::new();
    for (name, ineq) in [("kcbs", kcbs()), ("twin", twin())] {
        let c = facet_check(&ineq).map_err(|e| e.to_string())?;
        ensure!(c.verdict == Verdict::Facet, "{name} {c:?}");
        ensure!(c.face_dim + 1 == c.polytope_dim, "{name} {c:?}");
        parts.push(format!("{name} {}/{}", c.face_dim, c.polytope_dim));
    }
    Ok(format!("facets: {}", parts.join(", ")))
}

fn search() -> Outcome {
    let g = inequality_graph(&twin()).map_err(|e| e.to_string())?.graph;
    let r = ortho_rep_search(&g, 6, 20, 0).map_err(|e| e.to_string())?;
    let best = r.best.ok_or("no accepted restart")?;
    ensure!(best.value >= 2.5 - 1e-6, "twin d6 best {}", best.value);
    ensure!(
        best.residual <= 1e-8,
        "twin d6 residual {:e}",
        best.residual
    );
    let c5 = Graph::cycle(5).unwrap();
    let p = ortho_rep_search(&c5, 3, 20, 0).map_err(|e| e.to_string())?;
    let pb = p.best.ok_or("no accepted pentagon restart")?;
    ensure!(
        (pb.value - 5f64.sqrt()).abs() <= 1e-6,
        "c5 d3 best {}",
        pb.value
    );
    Ok(format!(
        "twin d6 {:.7} (residual {:.1e}), c5 d3 {:.7}",
        best.value, best.residual, pb.value
    ))
}

fn dimension_five() -> Outcome {
    let g = inequality_graph(&twin()).map_err(|e| e.to_string())?.graph;
    let r = ortho_rep_search(&g, 5, 200, 0).map_err(|e| e.to_string())?;
    let max = r
        .restarts
        .iter()
        .filter(|o| o.accepted)
        .map(|o| o.value)
        .fold(f64::NEG_INFINITY, f64::max);
    ensure!(max <= 2.0 + 1e-3, "d5 reached {max}");
    Ok(format!(
        "d5 max {max:.7} over {} accepted restarts (heuristic, not a proof)",
        r.accepted()
    ))
}

fn monte_carlo() -> Outcome {
    let rep = paper_rep();
    let psi = paper_state();
    let mut opts = SimulationOptions::new(100_000, 7);
    opts.repeat_each = true;
    let a = simulate_with(&twin(), &rep, &psi, &opts).map_err(|e| e.to_string())?;
    let b = simulate_with(&twin(), &rep, &psi, &opts).map_err(|e| e.to_string())?;
    for c in &a.contexts {
        ensure!(
            (c.exactly_one - 1.0).abs() <= 0.01,
            "context {} {}",
            c.context,
            c.exactly_one
        );
        ensure!(
            c.repeat_agreements == Some(opts.shots),
            "context {} repeat",
            c.context
        );
    }
    ensure!(format!("{a:?}") == format!("{b:?}"), "runs differ");
    Ok(format!(
        "lhs {:.7} ± {:.7}, repeatability 100%",
        a.lhs, a.lhs_std_err
    ))
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.random_range(4..=9);
    let p: f64 = rng.random_range(0.2..0.8);
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Maximal cliques padded with singletons so each test lies in exactly `K`
/// contexts, all of weight `1/K`.
fn uniform_scenario(g: &Graph) -> Inequality {
    let cliques = maximal_cliques(g);
    let counts: Vec<usize> = (0..g.n())
        .map(|v| cliques.iter().filter(|c| c.contains(v)).count())
        .collect();
    let k = *counts.iter().max().unwrap();
    let w = ratio(1, k as i64);
    let mut ctx: Vec<Context> = cliques
        .iter()
        .map(|c| Context::new(c.to_vec(), w.clone()))
        .collect();
    for (v, &c) in counts.iter().enumerate() {
        for _ in c..k {
            ctx.push(Context::new(vec![v], w.clone()));
        }
    }
    Inequality::new(g.n(), ctx, Bounds::default()).unwrap()
}

fn cross_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2012);
    let mut max_gap: f64 = 0.0;
    let mut literal_equal = 0;
    for i in 0..10 {
        let g = random_graph(&mut rng);
        let alpha = independence_number(&g).0;
        let theta = lovasz_theta(&g, 1e-8).map_err(|e| format!("graph {i}: {e}"))?;
        let packing = to_f64(
            &fractional_packing_number(&g)
                .map_err(|e| e.to_string())?
                .value,
        );
        ensure!(
            alpha as f64 <= theta.value + 1e-6,
            "graph {i}: alpha {alpha} theta {}",
            theta.value
        );
        ensure!(
            theta.value <= packing + 1e-6,
            "graph {i}: theta {} alpha* {packing}",
            theta.value
        );
        ensure!(theta.gap <= 1e-8, "graph {i}: gap {:e}", theta.gap);
        max_gap = max_gap.max(theta.gap);

        let ineq = uniform_scenario(&g);
        let derived = inequality_graph(&ineq).map_err(|e| e.to_string())?;
        ensure!(derived.graph == g, "graph {i}: derived graph differs");
        let a = Rational::from_integer((alpha as i64).into());
        let exclusive = nchv_max_exclusive(&ineq).map_err(|e| e.to_string())?.0;
        ensure!(
            exclusive == a,
            "graph {i}: exclusive NCHV {exclusive} vs alpha {alpha}"
        );
        let literal = nchv_max(&ineq).map_err(|e| e.to_string())?.0;
        ensure!(
            literal >= a,
            "graph {i}: NCHV {literal} below alpha {alpha}"
        );
        literal_equal += (literal == a) as usize;
    }
    Ok(format!(
        "10 graphs: sandwich holds, max gap {max_gap:.1e}, exclusive NCHV = alpha, unrestricted NCHV = alpha on {literal_equal}/10"
    ))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("pentagon invariants", pentagon, Duration::from_secs(1)),
        ("twin invariants", twin_invariants, Duration::from_secs(30)),
        (
            "structure identification",
            structure,
            Duration::from_secs(1),
        ),
        ("NCHV brute force", nchv, Duration::from_secs(1)),
        (
            "explicit construction",
            construction,
            Duration::from_secs(1),
        ),
        ("facet certification", facets, Duration::from_secs(60)),
        ("representation search", search, Duration::from_secs(60)),
        (
            "dimension-5 heuristic",
            dimension_five,
            Duration::from_secs(120),
        ),
        ("Monte Carlo", monte_carlo, Duration::from_secs(60)),
        ("solver cross-checks", cross_checks, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > *limit => Err(format!("{msg}; took {elapsed:.2?} > {limit:?}")),
            r => r,
        };
        match result {
            Ok(msg) => println!("criterion {:>2} PASS {name} [{elapsed:.2?}]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{elapsed:.2?}]: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
