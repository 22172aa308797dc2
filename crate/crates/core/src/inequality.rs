//! Noncontextuality inequalities as weighted families of contexts.
//!
//! An inequality has the form `Σ_c w_c · P(exactly one test in c yields 1) <= bound`
//! where each context `c` is a set of mutually compatible, mutually exclusive
//! yes-no tests.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{strip_comment, CliqueCover, Graph, NamedGraph, VertexSet, MAX_VERTICES};
use crate::rational::{self, int, ratio, Rational};

/// Largest number of tests accepted by exhaustive enumeration.
pub const ENUMERATION_GUARD: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct Context {
    /// Tests in declaration (and measurement) order.
    pub tests: Vec<usize>,
    pub weight: Rational,
}

impl Context {
    pub fn new(tests: Vec<usize>, weight: Rational) -> Self {
        Context { tests, weight }
    }

    pub fn set(&self) -> VertexSet {
        self.tests.iter().copied().collect()
    }
}

/// A bound annotation: exact when rational, otherwise a real number.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(Rational),
    Real(f64),
}

impl Bound {
    pub fn to_f64(&self) -> f64 {
        match self {
            Bound::Exact(r) => rational::to_f64(r),
            Bound::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Bound::Exact(r) => Some(r),
            Bound::Real(_) => None,
        }
    }

    fn parse(text: &str) -> Result<Bound> {
        if let Ok(r) = rational::parse(text) {
            return Ok(Bound::Exact(r));
        }
        if let Some(arg) = text.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')) {
            let r = rational::parse(arg)?;
            return Ok(Bound::Real(rational::to_f64(&r).sqrt()));
        }
        text.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Bound::Real)
            .ok_or_else(|| Error::InvalidArgument(format!("invalid bound `{text}`")))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(r) => write!(f, "{r}"),
            Bound::Real(x) => write!(f, "{x:.7}"),
        }
    }
}

/// Declared bounds for noncontextual models, quantum mechanics and general
/// probabilistic theories.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bounds {
    pub nchv: Option<Bound>,
    pub qm: Option<Bound>,
    pub gp: Option<Bound>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    n_tests: usize,
    contexts: Vec<Context>,
    pub bounds: Bounds,
}

impl Inequality {
    /// Validates test indices, context contents and weights.
    pub fn new(n_tests: usize, contexts: Vec<Context>, bounds: Bounds) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidInequality(msg));
        if n_tests == 0 || n_tests > MAX_VERTICES {
            return invalid(format!(
                "number of tests must be in 1..={MAX_VERTICES}, got {n_tests}"
            ));
        }
        if contexts.is_empty() {
            return invalid("no contexts".into());
        }
        let mut seen = VertexSet::EMPTY;
        for (k, c) in contexts.iter().enumerate() {
            if c.tests.is_empty() {
                return invalid(format!("context {k} is empty"));
            }
            if let Some(&t) = c.tests.iter().find(|&&t| t >= n_tests) {
                return invalid(format!("context {k} names test {t} >= {n_tests}"));
            }
            if c.set().len() != c.tests.len() {
                return invalid(format!("context {k} repeats a test"));
            }
            if !c.weight.is_positive() {
                return invalid(format!("context {k} has non-positive weight {}", c.weight));
            }
            seen = seen.union(c.set());
        }
        if let Some(t) = VertexSet::full(n_tests).difference(seen).first() {
            return invalid(format!("test {t} appears in no context"));
        }
        Ok(Inequality {
            n_tests,
            contexts,
            bounds,
        })
    }

    pub fn n_tests(&self) -> usize {
        self.n_tests
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    /// `Σ` of all context weights: the trivial upper bound.
    pub fn total_weight(&self) -> Rational {
        self.contexts.iter().map(|c| &c.weight).sum()
    }

    /// Sum of context weights touching each test.
    pub fn weight_sums(&self) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.n_tests];
        for c in &self.contexts {
            for &t in &c.tests {
                sums[t] += &c.weight;
            }
        }
        sums
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tests {}\n", self.n_tests);
        for c in &self.contexts {
            let tests: Vec<String> = c.tests.iter().map(|t| t.to_string()).collect();
            let w = &c.weight;
            out.push_str(&format!(
                "context {}/{}: {}\n",
                w.numer(),
                w.denom(),
                tests.join(" ")
            ));
        }
        for (name, b) in [
            ("nchv", &self.bounds.nchv),
            ("qm", &self.bounds.qm),
            ("gp", &self.bounds.gp),
        ] {
            if let Some(b) = b {
                out.push_str(&format!("bound {name} {b}\n"));
            }
        }
        out
    }
}

impl FromStr for Inequality {
    type Err = Error;

    /// `tests <n>`, then `context p/q: i j k ...` lines and optional
    /// `bound nchv|qm|gp <value>` lines. `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut n_tests: Option<usize> = None;
        let mut contexts = Vec::new();
        let mut bounds = Bounds::default();
        let mut last_line = 1;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match keyword {
                "tests" if n_tests.is_none() => {
                    let n = rest
                        .parse()
                        .map_err(|_| err(format!("invalid test count `{rest}`")))?;
                    n_tests = Some(n);
                }
                _ if n_tests.is_none() => {
                    return Err(err(format!("expected `tests <n>`, found `{line}`")));
                }
                "context" => {
                    let (w, tests) = rest
                        .split_once(':')
                        .ok_or_else(|| err("expected `context p/q: i j ...`".into()))?;
                    let weight = rational::parse(w.trim()).map_err(|e| err(e.to_string()))?;
                    let tests = tests
                        .split_whitespace()
                        .map(|t| {
                            t.parse()
                                .map_err(|_| err(format!("invalid test index `{t}`")))
                        })
                        .collect::<Result<Vec<usize>>>()?;
                    contexts.push(Context::new(tests, weight));
                }
                "bound" => {
                    let (which, value) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| err("expected `bound <nchv|qm|gp> <value>`".into()))?;
                    let b = Bound::parse(value.trim()).map_err(|e| err(e.to_string()))?;
                    match which {
                        "nchv" => bounds.nchv = Some(b),
                        "qm" => bounds.qm = Some(b),
                        "gp" => bounds.gp = Some(b),
                        other => return Err(err(format!("unknown bound kind `{other}`"))),
                    }
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        let n = n_tests.ok_or(Error::Parse {
            line: last_line,
            msg: "missing `tests <n>` header".into(),
        })?;
        Inequality::new(n, contexts, bounds).map_err(|e| Error::Parse {
            line: last_line,
            msg: e.to_string(),
        })
    }
}

/// The KCBS inequality: five tests, contexts `{i, i+1 mod 5}`, weight 1/2,
/// bounds `2 <= √5 <= 5/2`.
pub fn kcbs() -> Inequality {
    let contexts = (0..5)
        .map(|i| Context::new(vec![i, (i + 1) % 5], ratio(1, 2)))
        .collect();
    let bounds = Bounds {
        nchv: Some(Bound::Exact(int(2))),
        qm: Some(Bound::Real(5f64.sqrt())),
        gp: Some(Bound::Exact(ratio(5, 2))),
    };
    Inequality::new(5, contexts, bounds).expect("KCBS is well formed")
}

/// The ten-test twin of KCBS: contexts `{i, i+1, i+5, i+7}` where the first
/// pair wraps in `0..5` and the second in `5..10`; weight 1/2; bounds
/// `2 <= 5/2 = 5/2`.
pub fn twin() -> Inequality {
    let contexts = (0..5)
        .map(|i| {
            let tests = vec![i, (i + 1) % 5, 5 + i % 5, 5 + (i + 2) % 5];
            Context::new(tests, ratio(1, 2))
        })
        .collect();
    let bounds = Bounds {
        nchv: Some(Bound::Exact(int(2))),
        qm: Some(Bound::Exact(ratio(5, 2))),
        gp: Some(Bound::Exact(ratio(5, 2))),
    };
    Inequality::new(10, contexts, bounds).expect("twin is well formed")
}

/// Exclusivity graph of an inequality with its contexts as an edge clique
/// cover.
#[derive(Clone, Debug)]
pub struct InequalityGraph {
    pub graph: Graph,
    pub cover: CliqueCover,
}

/// One vertex per test, edges between tests sharing a context.
///
/// Fails unless every test's context weights sum to exactly 1, which is what
/// makes the left-hand side collapse to `Σ_i P(Π_i = 1)` under exclusivity.
pub fn inequality_graph(ineq: &Inequality) -> Result<InequalityGraph> {
    for (test, sum) in ineq.weight_sums().into_iter().enumerate() {
        if !sum.is_one() {
            return Err(Error::WeightCondition {
                test,
                sum: sum.to_string(),
            });
        }
    }
    let mut graph = Graph::empty(ineq.n_tests())?;
    for c in ineq.contexts() {
        for (k, &u) in c.tests.iter().enumerate() {
            for &v in &c.tests[k + 1..] {
                graph.add_edge(u, v)?;
            }
        }
    }
    let cover = CliqueCover::new(ineq.contexts().iter().map(Context::set).collect());
    debug_assert!(cover.is_valid_for(&graph));
    Ok(InequalityGraph { graph, cover })
}

/// Values of all tests in a deterministic model; bit `i` is `Π_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    len: usize,
    bits: u64,
}

impl Assignment {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > 64 || (len < 64 && bits >> len != 0) {
            return Err(Error::InvalidArgument(format!(
                "assignment bits {bits:#x} do not fit in {len} tests"
            )));
        }
        Ok(Assignment { len, bits })
    }

    pub fn zeros(len: usize) -> Self {
        Assignment { len, bits: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn value(&self, test: usize) -> bool {
        self.bits >> test & 1 == 1
    }

    /// Tests whose value is 1.
    pub fn ones(&self) -> VertexSet {
        VertexSet::from_bits(self.bits)
    }
}

impl FromStr for Assignment {
    type Err = Error;

    /// A 0/1 string, test 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 64 => bits |= 1 << i,
                _ => return Err(Error::InvalidArgument(format!("invalid assignment `{s}`"))),
            }
        }
        Assignment::new(s.len(), bits)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.value(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `Σ_c w_c · [exactly one test of c is 1]`.
pub fn evaluate_assignment(ineq: &Inequality, a: &Assignment) -> Result<Rational> {
    if a.len() != ineq.n_tests() {
        return Err(Error::LengthMismatch {
            expected: ineq.n_tests(),
            found: a.len(),
        });
    }
    let ones = a.ones();
    Ok(ineq
        .contexts()
        .iter()
        .filter(|c| c.set().intersection(ones).len() == 1)
        .map(|c| &c.weight)
        .sum())
}

/// Exact maximum over all `2^n` deterministic assignments, with the smallest
/// maximizing assignment (read as an integer) as witness.
pub fn nchv_max(ineq: &Inequality) -> Result<(Rational, Assignment)> {
    let n = ineq.n_tests();
    if n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n,
            max: ENUMERATION_GUARD,
        });
    }
    // Integer weights over a common denominator keep the inner loop cheap.
    let denom = ineq
        .contexts()
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| {
            num_integer::lcm(acc, c.weight.denom().clone())
        });
    let scaled: Vec<(u64, num_bigint::BigInt)> = ineq
        .contexts()
        .iter()
        .map(|c| {
            (
                c.set().bits(),
                (&c.weight * Rational::from_integer(denom.clone())).to_integer(),
            )
        })
        .collect();
    let small: Option<Vec<(u64, i64)>> = scaled
        .iter()
        .map(|(m, w)| i64::try_from(w).ok().map(|w| (*m, w)))
        .collect();
    let total = 1u64 << n;

    let (best_score, best_bits) = match small
        .filter(|s| s.iter().map(|(_, w)| *w as i128).sum::<i128>() < i64::MAX as i128)
    {
        Some(ws) => (0..total)
            .into_par_iter()
            .map(|bits| {
                let score: i64 = ws
                    .iter()
                    .filter(|(m, _)| (bits & m).count_ones() == 1)
                    .map(|(_, w)| *w)
                    .sum();
                (score, bits)
            })
            .reduce(|| (i64::MIN, u64::MAX), pick_best),
        None => {
            // Huge weights: fall back to exact big-integer scoring.
            let mut best = (num_bigint::BigInt::from(-1), 0u64);
            for bits in 0..total {
                let score: num_bigint::BigInt = scaled
                    .iter()
                    .filter(|(m, _)| (bits & m).count_ones() == 1)
                    .map(|(_, w)| w.clone())
                    .sum();
                if score > best.0 {
                    best = (score, bits);
                }
            }
            return Ok((Rational::new(best.0, denom), Assignment::new(n, best.1)?));
        }
    };
    let value = Rational::new(num_bigint::BigInt::from(best_score), denom);
    Ok((value, Assignment::new(n, best_bits)?))
}

/// Maximum over the assignments that respect exclusivity (at most one test
/// with value 1 per context), smallest maximizing assignment as witness.
/// Under the per-test weight condition this is `α` of the inequality graph.
pub fn nchv_max_exclusive(ineq: &Inequality) -> Result<(Rational, Assignment)> {
    let n = ineq.n_tests();
    if n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n,
            max: ENUMERATION_GUARD,
        });
    }
    let masks: Vec<u64> = ineq.contexts().iter().map(|c| c.set().bits()).collect();
    let bits = (0..1u64 << n)
        .into_par_iter()
        .filter(|bits| masks.iter().all(|m| (bits & m).count_ones() <= 1))
        .collect::<Vec<u64>>();
    let mut best: Option<(Rational, u64)> = None;
    for b in bits {
        let v = evaluate_assignment(ineq, &Assignment::new(n, b)?)?;
        if best.as_ref().is_none_or(|(m, _)| v > *m) {
            best = Some((v, b));
        }
    }
    let (value, b) = best.expect("the all-zero assignment is exclusive");
    Ok((value, Assignment::new(n, b)?))
}

fn pick_best(a: (i64, u64), b: (i64, u64)) -> (i64, u64) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Built-in inequalities by id.
pub fn by_id(id: &str) -> Result<Inequality> {
    match id {
        "kcbs" => Ok(kcbs()),
        "twin" => Ok(twin()),
        _ => Err(Error::UnknownId(id.to_string())),
    }
}

/// Built-in graphs by id: `c<k>`, `petersen`, `j52`, `kcbs`, `twin` (the last
/// two are the exclusivity graphs of the built-in inequalities).
pub fn graph_by_id(id: &str) -> Result<Graph> {
    match id {
        "petersen" => Ok(Graph::petersen()),
        "j52" => Ok(Graph::johnson_5_2()),
        "kcbs" | "twin" => Ok(inequality_graph(&by_id(id)?)?.graph),
        _ => match id.strip_prefix('c').map(str::parse::<usize>) {
            Some(Ok(k)) => Graph::named(NamedGraph::Cycle(k)),
            _ => Err(Error::UnknownId(id.to_string())),
        },
    }
}
