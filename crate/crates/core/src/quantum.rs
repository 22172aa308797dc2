//! Real orthogonal representations, pure states, and quantum values of
//! inequalities.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{strip_comment, Graph};
use crate::inequality::{inequality_graph, Inequality};

pub const UNIT_TOL: f64 = 1e-12;

/// Orthogonality tolerance used when checking that contexts are cliques of a
/// representation.
pub const CONTEXT_ORTHO_TOL: f64 = 1e-6;

/// Unit vector in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    /// Rejects vectors whose norm differs from 1 by more than `1e-12`.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let norm = norm(&components);
        if components.is_empty() || norm.is_nan() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { index: 0, norm });
        }
        Ok(StateVector(components))
    }

    /// Scales a nonzero vector to unit length.
    pub fn normalized(mut components: Vec<f64>) -> Result<Self> {
        let n = norm(&components);
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return Err(Error::NotUnit { index: 0, norm: n });
        }
        for c in components.iter_mut() {
            *c /= n;
        }
        Ok(StateVector(components))
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn overlap(&self, other: &StateVector) -> f64 {
        dot(&self.0, &other.0)
    }
}

impl AsRef<[f64]> for StateVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// One unit vector per vertex of `graph`, all in the same dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoRep {
    graph: Graph,
    dim: usize,
    vectors: Vec<StateVector>,
}

impl OrthoRep {
    /// Checks vertex count, common dimension and unit norms. Orthogonality
    /// is left to [`validate_ortho_rep`].
    pub fn new(graph: Graph, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.len() != graph.n() {
            return Err(Error::LengthMismatch {
                expected: graph.n(),
                found: vectors.len(),
            });
        }
        let dim = vectors[0].len();
        let mut out = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            out.push(StateVector::new(v).map_err(|e| match e {
                Error::NotUnit { norm, .. } => Error::NotUnit { index: i, norm },
                other => other,
            })?);
        }
        Ok(OrthoRep {
            graph,
            dim,
            vectors: out,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &StateVector {
        &self.vectors[i]
    }

    /// Gram matrix `<v_i|v_j>`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.vectors
            .iter()
            .map(|a| self.vectors.iter().map(|b| a.overlap(b)).collect())
            .collect()
    }

    /// Text form: `dim <d>` then one line of components per vertex.
    pub fn to_text(&self) -> String {
        vectors_to_text(self.dim, self.vectors.iter().map(StateVector::components))
    }

    /// Parses the text form and attaches it to `graph`.
    pub fn from_text(graph: Graph, text: &str) -> Result<Self> {
        let (_, rows) = parse_vectors(text)?;
        OrthoRep::new(graph, rows)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&vectors_to_text(
            self.dim(),
            std::iter::once(self.components()),
        ))
    }
}

impl FromStr for StateVector {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (_, mut rows) = parse_vectors(text)?;
        if rows.len() != 1 {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                msg: format!("expected exactly one state line, found {}", rows.len()),
            });
        }
        StateVector::new(rows.remove(0))
    }
}

fn vectors_to_text<'a>(dim: usize, rows: impl Iterator<Item = &'a [f64]>) -> String {
    let mut out = format!("dim {dim}\n");
    for row in rows {
        // `{:?}` prints the shortest representation that round-trips exactly.
        let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn parse_vectors(text: &str) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut dim: Option<usize> = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match dim {
            None => {
                if fields.len() != 2 || fields[0] != "dim" {
                    return Err(err(format!("expected `dim <d>`, found `{line}`")));
                }
                let d: usize = fields[1]
                    .parse()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| err(format!("invalid dimension `{}`", fields[1])))?;
                dim = Some(d);
            }
            Some(d) => {
                if fields.len() != d {
                    return Err(err(format!(
                        "expected {d} components, found {}",
                        fields.len()
                    )));
                }
                let row = fields
                    .iter()
                    .map(|t| {
                        t.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| err(format!("invalid component `{t}`")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                rows.push(row);
            }
        }
    }
    let d = dim.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing `dim <d>` header".into(),
    })?;
    if rows.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: "no vectors".into(),
        });
    }
    Ok((d, rows))
}

/// The dimension-six representation of the twin inequality's graph. Vertex
/// `i` is test `i` of [`crate::inequality::twin`].
pub fn paper_rep() -> OrthoRep {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let a = 8f64.powf(-0.5);
    let h = 0.5;
    let rows: [[f64; 6]; 10] = [
        [r2, -r2, 0.0, 0.0, 2.0, 0.0].map(|x| a * x),
        [r2, 0.0, 0.0, r2, -1.0, r3].map(|x| a * x),
        [1.0, -1.0, -1.0, -1.0, 0.0, 0.0].map(|x| h * x),
        [1.0, -1.0, 1.0, 1.0, 0.0, 0.0].map(|x| h * x),
        [r2, 0.0, 0.0, -r2, -1.0, r3].map(|x| a * x),
        [r2, 0.0, -r2, 0.0, -1.0, -r3].map(|x| a * x),
        [r2, 0.0, r2, 0.0, -1.0, -r3].map(|x| a * x),
        [1.0, 1.0, 1.0, -1.0, 0.0, 0.0].map(|x| h * x),
        [r2, r2, 0.0, 0.0, 2.0, 0.0].map(|x| a * x),
        [1.0, 1.0, -1.0, 1.0, 0.0, 0.0].map(|x| h * x),
    ];
    let graph = inequality_graph(&crate::inequality::twin())
        .expect("twin satisfies the weight condition")
        .graph;
    let vectors = rows
        .iter()
        .map(|r| normalize_exactish(r.to_vec()))
        .collect();
    OrthoRep::new(graph, vectors).expect("twin vectors are unit")
}

/// `ψ = (1, 0, 0, 0, 0, 0)`.
pub fn paper_state() -> StateVector {
    StateVector::basis(6, 0)
}

/// The optimal KCBS representation in dimension three: an umbrella of five
/// vectors around `ψ = e_0` with `cos²θ = 1/√5`, consecutive tests
/// `4π/5` apart in azimuth.
pub fn pentagon_rep() -> OrthoRep {
    let c2 = 1.0 / 5f64.sqrt();
    let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
    let vectors = (0..5)
        .map(|i| {
            let phi = 4.0 * std::f64::consts::PI * i as f64 / 5.0;
            normalize_exactish(vec![c, s * phi.cos(), s * phi.sin()])
        })
        .collect();
    OrthoRep::new(Graph::cycle(5).expect("k = 5"), vectors).expect("unit vectors")
}

pub fn pentagon_state() -> StateVector {
    StateVector::basis(3, 0)
}

fn normalize_exactish(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    for x in v.iter_mut() {
        *x /= n;
    }
    v
}

/// Bundled representations: `twin-d6` and `c5-d3`.
pub fn rep_by_id(id: &str) -> Result<(OrthoRep, StateVector)> {
    match id {
        "twin-d6" => Ok((paper_rep(), paper_state())),
        "c5-d3" => Ok((pentagon_rep(), pentagon_state())),
        _ => Err(Error::UnknownId(id.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub overlap: f64,
    pub kind: ViolationKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Adjacent vertices with non-orthogonal vectors.
    EdgeNotOrthogonal,
    /// Non-adjacent vertices with orthogonal vectors (faithful mode).
    NonEdgeOrthogonal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub passed: bool,
    pub max_norm_error: f64,
    /// Largest `|<v_i|v_j>|` over edges.
    pub max_edge_overlap: f64,
    /// Smallest `|<v_i|v_j>|` over non-edges (`None` for complete graphs).
    pub min_nonedge_overlap: Option<f64>,
    pub violations: Vec<Violation>,
}

/// Checks unit norms, orthogonality on edges and, if `faithful`,
/// non-orthogonality on non-edges.
pub fn validate_ortho_rep(rep: &OrthoRep, tol: f64, faithful: bool) -> Result<ValidationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let dim = rep.dim();
    if let Some(v) = rep.vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    let n = rep.graph.n();
    let max_norm_error = rep
        .vectors
        .iter()
        .map(|v| (norm(v.components()) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut max_edge_overlap = 0.0f64;
    let mut min_nonedge_overlap: Option<f64> = None;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let overlap = rep.vectors[i].overlap(&rep.vectors[j]);
            let abs = overlap.abs();
            if rep.graph.has_edge(i, j) {
                max_edge_overlap = max_edge_overlap.max(abs);
                if abs > tol {
                    violations.push(Violation {
                        i,
                        j,
                        overlap,
                        kind: ViolationKind::EdgeNotOrthogonal,
                    });
                }
            } else {
                min_nonedge_overlap = Some(min_nonedge_overlap.map_or(abs, |m| m.min(abs)));
                if faithful && abs <= tol {
                    violations.push(Violation {
                        i,
                        j,
                        overlap,
                        kind: ViolationKind::NonEdgeOrthogonal,
                    });
                }
            }
        }
    }
    Ok(ValidationReport {
        passed: violations.is_empty() && max_norm_error <= UNIT_TOL,
        max_norm_error,
        max_edge_overlap,
        min_nonedge_overlap,
        violations,
    })
}

fn check_dim(rep: &OrthoRep, psi: &StateVector) -> Result<()> {
    if psi.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: psi.dim(),
        });
    }
    Ok(())
}

/// `Σ_i <v_i|ψ>²`.
pub fn quantum_value(rep: &OrthoRep, psi: &StateVector) -> Result<f64> {
    check_dim(rep, psi)?;
    Ok(rep.vectors.iter().map(|v| v.overlap(psi).powi(2)).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumLhs {
    pub value: f64,
    /// `Σ_{j∈c} <v_j|ψ>²` for each context `c`.
    pub terms: Vec<f64>,
}

/// Quantum left-hand side of `ineq` for projectors onto `rep` and state
/// `psi`. For mutually orthogonal rank-one projectors at most one fires, so
/// `P(exactly one) = Σ_{j∈c} <v_j|ψ>²`.
pub fn inequality_quantum_lhs(
    ineq: &Inequality,
    rep: &OrthoRep,
    psi: &StateVector,
) -> Result<QuantumLhs> {
    check_dim(rep, psi)?;
    check_contexts(ineq, rep)?;
    let probs: Vec<f64> = rep.vectors.iter().map(|v| v.overlap(psi).powi(2)).collect();
    let terms: Vec<f64> = ineq
        .contexts()
        .iter()
        .map(|c| c.tests.iter().map(|&t| probs[t]).sum())
        .collect();
    let value = ineq
        .contexts()
        .iter()
        .zip(&terms)
        .map(|(c, t)| crate::rational::to_f64(&c.weight) * t)
        .sum();
    Ok(QuantumLhs { value, terms })
}

/// Every context must be a clique of the representation's graph and its
/// vectors mutually orthogonal.
pub(crate) fn check_contexts(ineq: &Inequality, rep: &OrthoRep) -> Result<()> {
    if ineq.n_tests() != rep.graph.n() {
        return Err(Error::LengthMismatch {
            expected: ineq.n_tests(),
            found: rep.graph.n(),
        });
    }
    for (k, c) in ineq.contexts().iter().enumerate() {
        let clique = rep.graph.is_clique(c.set());
        let orthogonal = c.tests.iter().enumerate().all(|(a, &i)| {
            c.tests[a + 1..]
                .iter()
                .all(|&j| rep.vectors[i].overlap(&rep.vectors[j]).abs() <= CONTEXT_ORTHO_TOL)
        });
        if !clique || !orthogonal {
            return Err(Error::NotAClique { context: k });
        }
    }
    Ok(())
}
