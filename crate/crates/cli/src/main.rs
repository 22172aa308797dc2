//! `ncgraph`: graph invariants and end-to-end checks of noncontextuality
//! inequalities.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ncgraph_core::cliques::{edge_clique_cover_number, independence_number, EdgeCoverOutcome};
use ncgraph_core::graph::Graph;
use ncgraph_core::inequality::{self, graph_by_id, inequality_graph, nchv_max, Bound, Inequality};
use ncgraph_core::iso::is_isomorphic;
use ncgraph_core::lp::fractional_packing_number;
use ncgraph_core::polytope::{facet_check_in, AffineCertificate, CoordinateSpace, Verdict};
use ncgraph_core::quantum::{
    inequality_quantum_lhs, rep_by_id, validate_ortho_rep, OrthoRep, StateVector,
};
use ncgraph_core::rational::{to_f64, Rational};
use ncgraph_core::sdp::{lovasz_theta, ThetaResult};
use ncgraph_core::search::ortho_rep_search;
use ncgraph_core::simulate::simulate_sequential;
use ncgraph_core::Error;

use report::{real, yes_no, Format, Report};

const DEFAULT_SHOTS: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "ncgraph",
    version,
    about = "Graph invariants of noncontextuality inequalities"
)]
struct Cli {
    /// Solver tolerance and comparison slack for real-valued bounds.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo shots; `verify` simulates only when this is given.
    #[arg(long, global = true)]
    shots: Option<u64>,
    #[arg(long, global = true, default_value_t = 50)]
    restarts: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// α, ϑ, α*, θ′ and the fully contextual candidate flag of a graph.
    Invariants {
        /// Graph id (`c<k>`, `petersen`, `j52`, `kcbs`, `twin`) or file.
        graph: String,
    },
    /// Bounds, graph, quantum value and facet certificate of an inequality.
    Verify {
        /// Inequality id (`kcbs`, `twin`) or file.
        inequality: String,
        /// Representation id (`twin-d6`, `c5-d3`) or file.
        #[arg(long)]
        rep: Option<String>,
        /// State file; defaults to the bundled state, else `e_0`.
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Numerical search for an orthogonal representation maximizing the
    /// quantum value.
    Search {
        graph: String,
        #[arg(long)]
        dim: usize,
        /// Write the best representation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Mismatch(Report, Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(report, reasons)) => {
            print!("{}", report.render(cli.format));
            for r in reasons {
                eprintln!("mismatch: {r}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Failure::Input(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    if cli.shots == Some(0) {
        return Err(Failure::Input("--shots must be at least 1".into()));
    }
    if cli.restarts == 0 {
        return Err(Failure::Input("--restarts must be at least 1".into()));
    }
    match &cli.command {
        Command::Invariants { graph } => invariants(cli, graph),
        Command::Verify {
            inequality,
            rep,
            state,
        } => verify(cli, inequality, rep.as_deref(), state.as_deref()),
        Command::Search { graph, dim, out } => search(cli, graph, *dim, out.as_deref()),
    }
}

fn header(cli: &Cli, command: &str) -> Report {
    let mut r = Report::default();
    r.section("config")
        .put("command", command)
        .put("tol", format!("{:e}", cli.tol))
        .put("seed", cli.seed)
        .put("shots", cli.shots.unwrap_or(DEFAULT_SHOTS))
        .put("restarts", cli.restarts)
        .put("format", cli.format.name());
    r
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: ncgraph_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(arg: &str) -> Result<Graph, Failure> {
    match graph_by_id(arg) {
        Ok(g) => Ok(g),
        Err(_) if Path::new(arg).is_file() => {
            let path = Path::new(arg);
            in_file(path, read_file(path)?.parse())
        }
        Err(e) => Err(Failure::Input(format!(
            "{e} (not a graph id or readable file)"
        ))),
    }
}

fn load_inequality(arg: &str) -> Result<Inequality, Failure> {
    match inequality::by_id(arg) {
        Ok(i) => Ok(i),
        Err(_) if Path::new(arg).is_file() => {
            let path = Path::new(arg);
            in_file(path, read_file(path)?.parse())
        }
        Err(e) => Err(Failure::Input(format!(
            "{e} (not an inequality id or readable file)"
        ))),
    }
}

/// `target` lies within the SDP bracket `[value, upper]` widened by `tol`.
fn theta_matches(theta: &ThetaResult, target: f64, tol: f64) -> bool {
    target >= theta.value - tol && target <= theta.upper.max(theta.value) + tol
}

fn cover_text(outcome: &EdgeCoverOutcome) -> String {
    match outcome {
        EdgeCoverOutcome::Exact { cover, .. } => {
            let parts: Vec<String> = cover.cliques.iter().map(|c| c.to_string()).collect();
            if parts.is_empty() {
                "-".into()
            } else {
                parts.join(" ")
            }
        }
        EdgeCoverOutcome::ExceedsBudget { budget } => format!("more than {budget}"),
    }
}

fn invariants(cli: &Cli, arg: &str) -> Outcome {
    let g = load_graph(arg)?;
    let mut r = header(cli, "invariants");
    r.put("graph", arg)
        .put("vertices", g.n())
        .put("edges", g.edge_count());

    let (alpha, witness) = independence_number(&g);
    let theta = lovasz_theta(&g, cli.tol)?;
    let packing = fractional_packing_number(&g)?;
    let cover = edge_clique_cover_number(&g, g.edge_count());
    let candidate = (alpha as f64) < theta.value - cli.tol
        && theta_matches(&theta, to_f64(&packing.value), cli.tol);

    r.section("results")
        .put("alpha", alpha)
        .put("alpha_witness", witness)
        .put("theta", real(theta.value))
        .put("theta_upper", real(theta.upper))
        .put("sdp_gap", format!("{:.1e}", theta.gap))
        .put("sdp_iterations", theta.iterations)
        .put("alpha_star", &packing.value)
        .put("alpha_star_weights", join(&packing.x))
        .put(
            "theta_prime",
            cover.number().map_or("-".into(), |k| k.to_string()),
        )
        .put("clique_cover", cover_text(&cover))
        .put(
            "fully_contextual_candidate",
            if candidate { "TRUE" } else { "FALSE" },
        );
    Ok(r)
}

fn join(xs: &[Rational]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn named_matches(g: &Graph) -> String {
    let mut candidates: Vec<(String, Graph)> = Vec::new();
    if g.n() >= 3 {
        candidates.push((format!("c{}", g.n()), Graph::cycle(g.n()).expect("n >= 3")));
    }
    candidates.push(("petersen".into(), Graph::petersen()));
    candidates.push(("j52".into(), Graph::johnson_5_2()));
    candidates.push((
        "complement(petersen)".into(),
        Graph::petersen().complement(),
    ));
    let names: Vec<String> = candidates
        .into_iter()
        .filter(|(_, h)| h.n() == g.n() && is_isomorphic(g, h).is_some())
        .map(|(name, _)| name)
        .collect();
    if names.is_empty() {
        "none".into()
    } else {
        names.join(", ")
    }
}

fn bundled_rep(arg: &str) -> Option<&'static str> {
    match arg {
        "twin" => Some("twin-d6"),
        "kcbs" => Some("c5-d3"),
        _ => None,
    }
}

fn load_rep(
    arg: &str,
    graph: &Graph,
    state: Option<&Path>,
) -> Result<(OrthoRep, StateVector, String), Failure> {
    let (rep, bundled_state) = match rep_by_id(arg) {
        Ok((rep, psi)) => {
            if rep.graph() != graph {
                return Err(Failure::Input(format!(
                    "representation {arg} does not match the inequality graph"
                )));
            }
            (rep, Some(psi))
        }
        Err(_) if Path::new(arg).is_file() => {
            let path = Path::new(arg);
            (
                in_file(path, OrthoRep::from_text(graph.clone(), &read_file(path)?))?,
                None,
            )
        }
        Err(e) => {
            return Err(Failure::Input(format!(
                "{e} (not a representation id or readable file)"
            )))
        }
    };
    let (psi, source) = match (state, bundled_state) {
        (Some(path), _) => (
            in_file(path, read_file(path)?.parse())?,
            path.display().to_string(),
        ),
        (None, Some(psi)) => (psi, "bundled".to_string()),
        (None, None) => (StateVector::basis(rep.dim(), 0), "e_0".to_string()),
    };
    if psi.dim() != rep.dim() {
        return Err(Failure::Input(format!(
            "state dimension {} does not match representation dimension {}",
            psi.dim(),
            rep.dim()
        )));
    }
    Ok((rep, psi, source))
}

fn facet_lines(r: &mut Report, prefix: &str, c: &AffineCertificate) {
    r.put(&format!("{prefix}_coordinates"), c.coordinates)
        .put(&format!("{prefix}_vertices"), c.vertices)
        .put(&format!("{prefix}_polytope_dim"), c.polytope_dim)
        .put(&format!("{prefix}_face_dim"), c.face_dim)
        .put(&format!("{prefix}_saturating"), c.saturating)
        .put(&format!("{prefix}_verdict"), c.verdict);
}

fn verify(cli: &Cli, arg: &str, rep_arg: Option<&str>, state: Option<&Path>) -> Outcome {
    let ineq = load_inequality(arg)?;
    let derived = inequality_graph(&ineq)?;
    let g = &derived.graph;
    let rep_id = rep_arg.or(bundled_rep(arg));
    let mut mismatches = Vec::new();

    let mut r = header(cli, "verify");
    r.put("inequality", arg)
        .put("tests", ineq.n_tests())
        .put("contexts", ineq.contexts().len())
        .put("representation", rep_id.unwrap_or("-"))
        .put("monte_carlo", yes_no(cli.shots.is_some()));

    r.section("inequality");
    for (k, c) in ineq.contexts().iter().enumerate() {
        let tests: Vec<String> = c.tests.iter().map(|t| t.to_string()).collect();
        r.put(
            &format!("context_{k}"),
            format!("{} x P(exactly one of {})", c.weight, tests.join(",")),
        );
    }
    for (name, b) in [
        ("nchv", &ineq.bounds.nchv),
        ("qm", &ineq.bounds.qm),
        ("gp", &ineq.bounds.gp),
    ] {
        r.put(
            &format!("declared_{name}"),
            b.as_ref().map_or("-".into(), |b| b.to_string()),
        );
    }

    let (nchv, witness) = nchv_max(&ineq)?;
    r.section("nchv")
        .put("max", &nchv)
        .put("witness", witness)
        .put("assignments", 1u64 << ineq.n_tests());
    if let Some(b) = &ineq.bounds.nchv {
        let ok = match b {
            Bound::Exact(q) => *q == nchv,
            Bound::Real(x) => (x - to_f64(&nchv)).abs() <= cli.tol,
        };
        r.put("matches_declared", yes_no(ok));
        if !ok {
            mismatches.push(format!("NCHV maximum {nchv} differs from declared {b}"));
        }
    }

    let (alpha, _) = independence_number(g);
    let theta = lovasz_theta(g, cli.tol)?;
    let packing = fractional_packing_number(g)?;
    let cover = edge_clique_cover_number(g, g.edge_count());
    r.section("graph")
        .put("vertices", g.n())
        .put("edges", g.edge_count())
        .put("isomorphic_to", named_matches(g))
        .put("alpha", alpha)
        .put(
            "alpha_equals_nchv",
            yes_no(Rational::from_integer((alpha as i64).into()) == nchv),
        )
        .put("theta", real(theta.value))
        .put("alpha_star", &packing.value)
        .put(
            "theta_prime",
            cover.number().map_or("-".into(), |k| k.to_string()),
        );
    if let Some(b) = &ineq.bounds.qm {
        let ok = theta_matches(&theta, b.to_f64(), cli.tol);
        r.put("theta_matches_qm", yes_no(ok));
        if !ok {
            mismatches.push(format!(
                "theta {} differs from declared QM bound {b}",
                real(theta.value)
            ));
        }
    }
    if let Some(b) = &ineq.bounds.gp {
        let ok = match b {
            Bound::Exact(q) => *q == packing.value,
            Bound::Real(x) => (x - to_f64(&packing.value)).abs() <= cli.tol,
        };
        r.put("alpha_star_matches_gp", yes_no(ok));
        if !ok {
            mismatches.push(format!(
                "alpha* {} differs from declared GP bound {b}",
                packing.value
            ));
        }
    }

    let mut quantum = None;
    r.section("quantum");
    match rep_id {
        None => {
            r.put("status", "no representation");
        }
        Some(id) => {
            let (rep, psi, state_source) = load_rep(id, g, state)?;
            let validation = validate_ortho_rep(&rep, cli.tol, false)?;
            let lhs = inequality_quantum_lhs(&ineq, &rep, &psi)?;
            r.put("dim", rep.dim())
                .put("state", state_source)
                .put(
                    "orthogonality",
                    if validation.passed {
                        "valid"
                    } else {
                        "INVALID"
                    },
                )
                .put(
                    "max_edge_overlap",
                    format!("{:.1e}", validation.max_edge_overlap),
                )
                .put("lhs", real(lhs.value));
            for (k, t) in lhs.terms.iter().enumerate() {
                r.put(&format!("term_{k}"), real(*t));
            }
            if !validation.passed {
                mismatches.push("representation violates orthogonality".into());
            }
            if let Some(b) = &ineq.bounds.qm {
                let within = lhs.value <= b.to_f64() + cli.tol;
                r.put("within_qm_bound", yes_no(within)).put(
                    "attains_qm_bound",
                    yes_no((lhs.value - b.to_f64()).abs() <= cli.tol),
                );
                if !within {
                    mismatches.push(format!(
                        "quantum value {} exceeds declared QM bound {b}",
                        real(lhs.value)
                    ));
                }
            }
            if let Some(b) = &ineq.bounds.nchv {
                r.put(
                    "violates_nchv_bound",
                    yes_no(lhs.value > b.to_f64() + cli.tol),
                );
            }
            quantum = Some((rep, psi));
        }
    }

    r.section("facet");
    match (
        facet_check_in(&ineq, CoordinateSpace::Events),
        facet_check_in(&ineq, CoordinateSpace::Full),
    ) {
        (Ok(events), Ok(full)) => {
            r.put("bound", &events.bound)
                .put("facet", yes_no(events.verdict == Verdict::Facet));
            facet_lines(&mut r, "events", &events);
            facet_lines(&mut r, "full", &full);
        }
        (Err(e @ (Error::NoSaturatingVertex { .. } | Error::BoundViolated { .. })), _) => {
            r.put("status", format!("not certified: {e}"));
            mismatches.push(e.to_string());
        }
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    }

    if let Some(shots) = cli.shots {
        r.section("monte_carlo");
        match &quantum {
            None => {
                r.put("status", "skipped: no representation");
            }
            Some((rep, psi)) => {
                let sim = simulate_sequential(&ineq, rep, psi, shots, cli.seed)?;
                r.put("shots", shots)
                    .put("lhs", real(sim.lhs))
                    .put("lhs_std_err", real(sim.lhs_std_err));
                for c in &sim.contexts {
                    r.put(
                        &format!("context_{}", c.context),
                        format!("{} +- {}", real(c.exactly_one), real(c.std_err)),
                    );
                }
            }
        }
    }

    r.section("summary").put(
        "status",
        if mismatches.is_empty() {
            "OK"
        } else {
            "MISMATCH"
        },
    );
    if mismatches.is_empty() {
        Ok(r)
    } else {
        Err(Failure::Mismatch(r, mismatches))
    }
}

fn search(cli: &Cli, arg: &str, dim: usize, out: Option<&Path>) -> Outcome {
    let g = load_graph(arg)?;
    let result = ortho_rep_search(&g, dim, cli.restarts, cli.seed)?;
    let mut r = header(cli, "search");
    r.put("graph", arg)
        .put("dim", dim)
        .put("penalty", real(result.options.penalty))
        .put("step", real(result.options.step))
        .put("max_iter", result.options.max_iter)
        .put("residual_cap", format!("{:e}", result.options.residual_cap));

    r.section("results").put(
        "accepted_restarts",
        format!("{}/{}", result.accepted(), cli.restarts),
    );
    match &result.best {
        None => {
            r.put("best_value", "-");
        }
        Some(best) => {
            r.put("best_value", real(best.value))
                .put("best_residual", format!("{:.1e}", best.residual))
                .put("best_restart", best.restart)
                .put("state", "e_0");
            if let Some(path) = out {
                fs::write(path, best.rep.to_text())
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                r.put("written", path.display());
            }
        }
    }
    r.put(
        "note",
        "heuristic: best of independent local searches; not a proof of optimality",
    );
    Ok(r)
}
