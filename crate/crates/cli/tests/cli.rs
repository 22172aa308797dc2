use std::fs;
use std::process::{Command, Output};

fn ncgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Value of `key` in the given section of tsv output.
fn field(tsv: &str, section: &str, key: &str) -> String {
    tsv.lines()
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .find(|f| f.len() == 3 && f[0] == section && f[1] == key)
        .unwrap_or_else(|| panic!("{section}.{key} missing in\n{tsv}"))[2]
        .to_string()
}

fn invariants(id: &str) -> String {
    let o = ncgraph(&["invariants", id, "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn pentagon_invariants() {
    let out = invariants("c5");
    assert_eq!(field(&out, "results", "alpha"), "2");
    assert_eq!(field(&out, "results", "theta"), "2.2360680");
    assert_eq!(field(&out, "results", "alpha_star"), "5/2");
    assert_eq!(field(&out, "results", "theta_prime"), "5");
    assert_eq!(
        field(&out, "results", "fully_contextual_candidate"),
        "FALSE"
    );
    assert_eq!(field(&out, "config", "tol"), "1e-8");
    assert_eq!(field(&out, "config", "shots"), "100000");
    assert_eq!(field(&out, "config", "restarts"), "50");
}

#[test]
fn twin_and_johnson_agree() {
    let twin = invariants("twin");
    let j52 = invariants("j52");
    for key in [
        "alpha",
        "theta",
        "alpha_star",
        "theta_prime",
        "fully_contextual_candidate",
    ] {
        assert_eq!(
            field(&twin, "results", key),
            field(&j52, "results", key),
            "{key}"
        );
    }
    assert_eq!(field(&twin, "results", "theta"), "2.5000000");
    assert_eq!(
        field(&twin, "results", "fully_contextual_candidate"),
        "TRUE"
    );
}

#[test]
fn verify_bundled_inequalities() {
    let o = ncgraph(&["verify", "twin", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "nchv", "max"), "2");
    assert_eq!(field(&out, "quantum", "lhs"), "2.5000000");
    assert_eq!(field(&out, "graph", "alpha_star"), "5/2");
    assert_eq!(
        field(&out, "graph", "isomorphic_to"),
        "j52, complement(petersen)"
    );
    assert_eq!(field(&out, "facet", "facet"), "YES");
    assert_eq!(field(&out, "summary", "status"), "OK");
    assert!(!out.contains("monte_carlo\tlhs"));

    let o = ncgraph(&["verify", "kcbs", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "nchv", "max"), "2");
    assert_eq!(field(&out, "quantum", "lhs"), "2.2360680");
    assert_eq!(field(&out, "graph", "alpha_star"), "5/2");
    assert_eq!(field(&out, "facet", "facet"), "YES");
}

#[test]
fn monte_carlo_is_reproducible() {
    let args = [
        "verify", "twin", "--shots", "20000", "--seed", "7", "--format", "json",
    ];
    let a = ncgraph(&args);
    let b = ncgraph(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["monte_carlo"]["lhs"], "2.5000000");
    assert_eq!(v["config"]["shots"], "20000");
    assert_eq!(v["config"]["seed"], "7");
}

#[test]
fn search_writes_a_usable_representation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.rep");
    let p = path.to_str().unwrap();
    let o = ncgraph(&[
        "search",
        "c5",
        "--dim",
        "3",
        "--restarts",
        "4",
        "--out",
        p,
        "--format",
        "tsv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "results", "best_value"), "2.2360680");
    assert!(fs::read_to_string(&path).unwrap().starts_with("dim 3\n"));

    let o = ncgraph(&["verify", "kcbs", "--rep", p, "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "quantum", "lhs"), "2.2360680");
}

#[test]
fn search_output_is_deterministic() {
    let args = [
        "search",
        "c5",
        "--dim",
        "3",
        "--restarts",
        "3",
        "--seed",
        "9",
    ];
    assert_eq!(ncgraph(&args).stdout, ncgraph(&args).stdout);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    fs::write(&bad, "n 3\n0 1\n# fine\n1 x\n").unwrap();
    let o = ncgraph(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let o = ncgraph(&["invariants", "no-such-graph"]);
    assert_eq!(o.status.code(), Some(2));

    let weights = dir.path().join("w.ineq");
    fs::write(&weights, "tests 3\ncontext 1: 0 1\ncontext 1: 1 2\n").unwrap();
    assert_eq!(
        ncgraph(&["verify", weights.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    assert_eq!(
        ncgraph(&["invariants", "c5", "--tol", "-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn wrong_declared_bound_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.ineq");
    fs::write(&path, "tests 2\ncontext 1: 0 1\nbound nchv 2\n").unwrap();
    let o = ncgraph(&["verify", path.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "summary", "status"), "MISMATCH");
    assert!(stderr(&o).contains("NCHV maximum 1"));
}

#[test]
fn inequality_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kcbs.ineq");
    fs::write(
        &path,
        "# pentagon\ntests 5\ncontext 1/2: 0 1\ncontext 1/2: 1 2\ncontext 1/2: 2 3\n\
         context 1/2: 3 4\ncontext 1/2: 4 0\nbound nchv 2\nbound qm sqrt(5)\nbound gp 5/2\n",
    )
    .unwrap();
    let o = ncgraph(&[
        "verify",
        path.to_str().unwrap(),
        "--rep",
        "c5-d3",
        "--format",
        "tsv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "quantum", "lhs"), "2.2360680");
    assert_eq!(field(&out, "graph", "isomorphic_to"), "c5");
}
