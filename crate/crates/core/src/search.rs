//! Numerical search for orthogonal representations maximizing
//! `Σ_i <v_i|ψ>²`.
//!
//! The state is fixed to `ψ = e_0` (the objective is rotation invariant).
//! Edge orthogonality `<v_i|v_j> = 0` is enforced with an augmented
//! Lagrangian: the penalty `λ Σ g_e²` plus multiplier terms `Σ μ_e g_e`,
//! with multipliers updated between rounds of projected gradient ascent on
//! the product of unit spheres.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quantum::{dot, norm, OrthoRep, StateVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub dim: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Penalty weight `λ`.
    pub penalty: f64,
    /// Initial gradient step, halved whenever a step fails to improve.
    pub step: f64,
    /// Cap on gradient iterations per restart.
    pub max_iter: usize,
    /// Restarts whose final edge residual exceeds this are not ranked.
    pub residual_cap: f64,
}

impl SearchOptions {
    pub fn new(dim: usize, restarts: usize, seed: u64) -> Self {
        SearchOptions {
            dim,
            restarts,
            seed,
            penalty: 100.0,
            step: 0.05,
            max_iter: 10_000,
            residual_cap: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartOutcome {
    pub index: usize,
    pub seed: u64,
    pub value: f64,
    /// `max_e |<v_i|v_j>|` over edges.
    pub residual: f64,
    pub accepted: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct BestRep {
    pub value: f64,
    pub residual: f64,
    pub restart: usize,
    pub rep: OrthoRep,
    pub state: StateVector,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub options: SearchOptions,
    /// Best accepted restart (lowest index on ties), if any was accepted.
    pub best: Option<BestRep>,
    pub restarts: Vec<RestartOutcome>,
}

impl SearchResult {
    pub fn accepted(&self) -> usize {
        self.restarts.iter().filter(|r| r.accepted).count()
    }
}

/// Derived per-restart seed.
pub fn restart_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

pub fn ortho_rep_search(g: &Graph, dim: usize, restarts: usize, seed: u64) -> Result<SearchResult> {
    search_with(g, SearchOptions::new(dim, restarts, seed))
}

pub fn search_with(g: &Graph, opts: SearchOptions) -> Result<SearchResult> {
    if opts.dim == 0 {
        return Err(Error::InvalidArgument("dim must be at least 1".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let runs: Vec<(RestartOutcome, Vec<Vec<f64>>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| run_restart(g, &opts, k))
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (o, _) in &runs {
        if o.accepted && best.is_none_or(|(_, v)| o.value > v) {
            best = Some((o.index, o.value));
        }
    }
    let best = match best {
        Some((k, _)) => {
            let (o, vectors) = &runs[k];
            Some(BestRep {
                value: o.value,
                residual: o.residual,
                restart: k,
                rep: OrthoRep::new(g.clone(), vectors.clone())?,
                state: StateVector::basis(opts.dim, 0),
            })
        }
        None => None,
    };
    Ok(SearchResult {
        options: opts,
        best,
        restarts: runs.into_iter().map(|(o, _)| o).collect(),
    })
}

struct Problem<'a> {
    edges: &'a [(usize, usize)],
    penalty: f64,
}

impl Problem<'_> {
    /// Augmented Lagrangian value.
    fn objective(&self, v: &[Vec<f64>], mult: &[f64]) -> f64 {
        let gain: f64 = v.iter().map(|x| x[0] * x[0]).sum();
        let cost: f64 = self
            .edges
            .iter()
            .zip(mult)
            .map(|(&(i, j), m)| {
                let g = dot(&v[i], &v[j]);
                m * g + self.penalty * g * g
            })
            .sum();
        gain - cost
    }

    /// Euclidean gradient projected onto each sphere's tangent space.
    fn gradient(&self, v: &[Vec<f64>], mult: &[f64]) -> Vec<Vec<f64>> {
        let mut grad: Vec<Vec<f64>> = v
            .iter()
            .map(|x| {
                let mut g = vec![0.0; x.len()];
                g[0] = 2.0 * x[0];
                g
            })
            .collect();
        for (&(i, j), m) in self.edges.iter().zip(mult) {
            let c = m + 2.0 * self.penalty * dot(&v[i], &v[j]);
            for k in 0..v[i].len() {
                grad[i][k] -= c * v[j][k];
                grad[j][k] -= c * v[i][k];
            }
        }
        for (g, x) in grad.iter_mut().zip(v) {
            let r = dot(g, x);
            for (gk, xk) in g.iter_mut().zip(x) {
                *gk -= r * xk;
            }
        }
        grad
    }

    fn residual(&self, v: &[Vec<f64>]) -> f64 {
        self.edges
            .iter()
            .map(|&(i, j)| dot(&v[i], &v[j]).abs())
            .fold(0.0, f64::max)
    }
}

const OUTER_ROUNDS: usize = 60;
const INNER_GRAD_TOL: f64 = 1e-12;
const RESIDUAL_TARGET: f64 = 1e-11;
const MIN_STEP: f64 = 1e-12;

/// `v_i + step·g_i`, renormalized.
fn retract(v: &[Vec<f64>], grad: &[Vec<f64>], step: f64) -> Vec<Vec<f64>> {
    v.iter()
        .zip(grad)
        .map(|(x, g)| {
            let y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a + step * b).collect();
            let n = norm(&y);
            y.into_iter().map(|c| c / n).collect()
        })
        .collect()
}

fn run_restart(g: &Graph, opts: &SearchOptions, index: usize) -> (RestartOutcome, Vec<Vec<f64>>) {
    let seed = restart_seed(opts.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Vec<f64>> = (0..g.n())
        .map(|_| loop {
            let x: Vec<f64> = (0..opts.dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = norm(&x);
            if n > 1e-3 {
                break x.into_iter().map(|c| c / n).collect();
            }
        })
        .collect();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let problem = Problem {
        edges: &edges,
        penalty: opts.penalty,
    };
    let mut mult = vec![0.0; edges.len()];
    let mut iterations = 0;

    for round in 0..OUTER_ROUNDS {
        // Loose inner solves early, tighter as the multipliers settle.
        let grad_tol = (1e-2 * 0.1f64.powi(round as i32)).max(INNER_GRAD_TOL);
        let mut current = problem.objective(&v, &mult);
        while iterations < opts.max_iter {
            let grad = problem.gradient(&v, &mult);
            let gnorm = grad.iter().map(|g| dot(g, g)).sum::<f64>().sqrt();
            if gnorm < grad_tol {
                break;
            }
            iterations += 1;
            // Backtracking: start from the full step, halve until the
            // objective improves.
            let mut step = opts.step;
            let mut accepted = false;
            while step >= MIN_STEP {
                let trial = retract(&v, &grad, step);
                let value = problem.objective(&trial, &mult);
                if value > current {
                    v = trial;
                    current = value;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        for (m, &(i, j)) in mult.iter_mut().zip(&edges) {
            *m += 2.0 * opts.penalty * dot(&v[i], &v[j]);
        }
        if problem.residual(&v) <= RESIDUAL_TARGET || iterations >= opts.max_iter {
            break;
        }
    }

    let value: f64 = v.iter().map(|x| x[0] * x[0]).sum();
    let residual = problem.residual(&v);
    let outcome = RestartOutcome {
        index,
        seed,
        value,
        residual,
        accepted: residual <= opts.residual_cap,
        iterations,
    };
    (outcome, v)
}
