//! Monte Carlo simulation of sequential projective measurements under the
//! Lüders rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inequality::Inequality;
use crate::polytope::pattern_bit;
use crate::quantum::{check_contexts, dot, norm, OrthoRep, StateVector};
use crate::rational::to_f64;

const COLLAPSE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationOptions {
    pub shots: u64,
    pub seed: u64,
    /// Measurement order per context as a permutation of positions in the
    /// context's test list; declaration order when `None`.
    pub orders: Option<Vec<Vec<usize>>>,
    /// Measure every test twice in a row and count agreements.
    pub repeat_each: bool,
}

impl SimulationOptions {
    pub fn new(shots: u64, seed: u64) -> Self {
        SimulationOptions {
            shots,
            seed,
            orders: None,
            repeat_each: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContextStats {
    pub context: usize,
    /// Tests in declaration order.
    pub tests: Vec<usize>,
    pub seed: u64,
    /// Counts of each outcome tuple, indexed as in
    /// [`pattern_index`](crate::polytope::pattern_index).
    pub pattern_counts: Vec<u64>,
    /// Empirical `P(exactly one test yields 1)`.
    pub exactly_one: f64,
    pub std_err: f64,
    /// Empirical `P(Π_t = 1)` for each test, in declaration order.
    pub test_frequencies: Vec<f64>,
    /// Shots in which every repeated measurement agreed with the first one.
    pub repeat_agreements: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub shots: u64,
    pub seed: u64,
    pub contexts: Vec<ContextStats>,
    /// `Σ_c w_c · exactly_one_c`.
    pub lhs: f64,
    pub lhs_std_err: f64,
}

/// Per-context derived seed.
pub fn context_seed(seed: u64, context: usize) -> u64 {
    seed ^ context as u64
}

pub fn simulate_sequential(
    ineq: &Inequality,
    rep: &OrthoRep,
    psi: &StateVector,
    shots: u64,
    seed: u64,
) -> Result<SimulationReport> {
    simulate_with(ineq, rep, psi, &SimulationOptions::new(shots, seed))
}

pub fn simulate_with(
    ineq: &Inequality,
    rep: &OrthoRep,
    psi: &StateVector,
    opts: &SimulationOptions,
) -> Result<SimulationReport> {
    if opts.shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if psi.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: psi.dim(),
        });
    }
    check_contexts(ineq, rep)?;
    let contexts = ineq.contexts();
    let orders: Vec<Vec<usize>> = match &opts.orders {
        Some(o) => {
            if o.len() != contexts.len() {
                return Err(Error::LengthMismatch {
                    expected: contexts.len(),
                    found: o.len(),
                });
            }
            for (c, ord) in contexts.iter().zip(o) {
                let mut sorted = ord.clone();
                sorted.sort_unstable();
                if sorted != (0..c.tests.len()).collect::<Vec<_>>() {
                    return Err(Error::InvalidArgument(format!(
                        "measurement order {ord:?} is not a permutation of 0..{}",
                        c.tests.len()
                    )));
                }
            }
            o.clone()
        }
        None => contexts
            .iter()
            .map(|c| (0..c.tests.len()).collect())
            .collect(),
    };

    let stats: Vec<ContextStats> = (0..contexts.len())
        .into_par_iter()
        .map(|k| run_context(k, &contexts[k].tests, &orders[k], rep, psi, opts))
        .collect::<Result<_>>()?;

    let weights: Vec<f64> = contexts.iter().map(|c| to_f64(&c.weight)).collect();
    let lhs = stats
        .iter()
        .zip(&weights)
        .map(|(s, w)| w * s.exactly_one)
        .sum();
    let var: f64 = stats
        .iter()
        .zip(&weights)
        .map(|(s, w)| w * w * s.std_err * s.std_err)
        .sum();
    Ok(SimulationReport {
        shots: opts.shots,
        seed: opts.seed,
        contexts: stats,
        lhs,
        lhs_std_err: var.sqrt(),
    })
}

fn run_context(
    k: usize,
    tests: &[usize],
    order: &[usize],
    rep: &OrthoRep,
    psi: &StateVector,
    opts: &SimulationOptions,
) -> Result<ContextStats> {
    let seed = context_seed(opts.seed, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pattern_counts = vec![0u64; 1 << tests.len()];
    let mut agreements = 0u64;
    let mut state = psi.components().to_vec();
    for _ in 0..opts.shots {
        state.copy_from_slice(psi.components());
        let mut pattern = 0usize;
        let mut agreed = true;
        for &pos in order {
            let v = rep.vector(tests[pos]).components();
            let outcome = measure(&mut state, v, &mut rng).ok_or(Error::DegenerateCollapse {
                context: k,
                test: tests[pos],
            })?;
            if opts.repeat_each {
                let again = measure(&mut state, v, &mut rng).ok_or(Error::DegenerateCollapse {
                    context: k,
                    test: tests[pos],
                })?;
                agreed &= again == outcome;
            }
            if outcome {
                pattern |= pattern_bit(tests.len(), pos);
            }
        }
        pattern_counts[pattern] += 1;
        agreements += agreed as u64;
    }

    let shots = opts.shots as f64;
    let one_hot: u64 = pattern_counts
        .iter()
        .enumerate()
        .filter(|(p, _)| p.count_ones() == 1)
        .map(|(_, c)| c)
        .sum();
    let exactly_one = one_hot as f64 / shots;
    let test_frequencies = (0..tests.len())
        .map(|t| {
            let ones: u64 = pattern_counts
                .iter()
                .enumerate()
                .filter(|(p, _)| p & pattern_bit(tests.len(), t) != 0)
                .map(|(_, c)| c)
                .sum();
            ones as f64 / shots
        })
        .collect();
    Ok(ContextStats {
        context: k,
        tests: tests.to_vec(),
        seed,
        pattern_counts,
        exactly_one,
        std_err: (exactly_one * (1.0 - exactly_one) / shots).sqrt(),
        test_frequencies,
        repeat_agreements: opts.repeat_each.then_some(agreements),
    })
}

/// Projective measurement of `|v><v|` on `state`; collapses `state` in
/// place. `None` on a collapse to (numerically) the zero vector.
fn measure(state: &mut [f64], v: &[f64], rng: &mut ChaCha8Rng) -> Option<bool> {
    let amp = dot(state, v);
    let p = (amp * amp).min(1.0);
    let outcome = rng.random::<f64>() < p;
    if outcome {
        if amp.abs() < COLLAPSE_TOL {
            return None;
        }
        let sign = amp.signum();
        for (s, x) in state.iter_mut().zip(v) {
            *s = sign * x;
        }
    } else {
        for (s, x) in state.iter_mut().zip(v) {
            *s -= amp * x;
        }
        let n = norm(state);
        if n < COLLAPSE_TOL {
            return None;
        }
        for s in state.iter_mut() {
            *s /= n;
        }
    }
    Some(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::twin;
    use crate::quantum::{paper_rep, paper_state};

    #[test]
    fn eigenstate_fires_with_certainty() {
        let rep = paper_rep();
        let psi = rep.vector(0).clone();
        let r = simulate_sequential(&twin(), &rep, &psi, 2000, 3).unwrap();
        // context 0 = {0,1,5,7}; Π_0 is the first test
        assert_eq!(r.contexts[0].test_frequencies[0], 1.0);
        assert_eq!(r.contexts[0].exactly_one, 1.0);
        // context 4 = {4,0,9,6}; Π_0 at position 1
        assert_eq!(r.contexts[4].test_frequencies[1], 1.0);
    }

    #[test]
    fn repeated_measurements_agree() {
        let mut opts = SimulationOptions::new(5000, 9);
        opts.repeat_each = true;
        let r = simulate_with(&twin(), &paper_rep(), &paper_state(), &opts).unwrap();
        assert!(r.contexts.iter().all(|c| c.repeat_agreements == Some(5000)));
    }

    #[test]
    fn same_seed_same_report() {
        let a = simulate_sequential(&twin(), &paper_rep(), &paper_state(), 3000, 42).unwrap();
        let b = simulate_sequential(&twin(), &paper_rep(), &paper_state(), 3000, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_sequential(&twin(), &paper_rep(), &paper_state(), 3000, 43).unwrap();
        assert_ne!(a.contexts[0].pattern_counts, c.contexts[0].pattern_counts);
    }

    #[test]
    fn degenerate_collapse_is_reported() {
        let mut state = vec![1.0, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(measure(&mut state, &[1.0, 0.0], &mut rng), Some(true));
        let mut zero = vec![0.0, 0.0];
        assert_eq!(measure(&mut zero, &[1.0, 0.0], &mut rng), None);
    }

    #[test]
    fn argument_errors() {
        let rep = paper_rep();
        assert!(simulate_sequential(&twin(), &rep, &paper_state(), 0, 0).is_err());
        assert!(simulate_sequential(&twin(), &rep, &StateVector::basis(3, 0), 10, 0).is_err());
        let mut opts = SimulationOptions::new(10, 0);
        opts.orders = Some(vec![vec![0, 0, 1, 2]; 5]);
        assert!(simulate_with(&twin(), &rep, &paper_state(), &opts).is_err());
    }
}
