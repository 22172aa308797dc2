//! Primal-dual interior point solver for small dense SDPs, and the Lovász
//! number built on it.
//!
//! Standard form:
//!
//! ```text
//! primal: minimize <C, X>  s.t. <A_k, X> = b_k,  X ⪰ 0
//! dual:   maximize b·y     s.t. Z = C - Σ y_k A_k ⪰ 0
//! ```
//!
//! Search directions are HKM (`ΔX = sym(...)` with `Z⁻¹` on the right) with
//! a Mehrotra predictor-corrector. Step lengths are taken to 95% of the
//! distance to the cone boundary and then shrunk until both iterates admit a
//! Cholesky factorization, so iterates stay strictly inside the cone.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{eig_sym, lower_inverse, solve_spd, Matrix, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 500;

const STEP_FRACTION: f64 = 0.95;
const STEP_SHRINK: f64 = 0.8;

#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub c: SymMatrix,
    pub a: Vec<SymMatrix>,
    pub b: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            tol: DEFAULT_TOL,
            max_iter: MAX_ITERATIONS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub z: SymMatrix,
    pub primal_obj: f64,
    pub dual_obj: f64,
    /// `|<C,X> - b·y|`.
    pub gap: f64,
    /// `max_k |b_k - <A_k, X>|`.
    pub primal_infeas: f64,
    /// `max |C - Z - Σ y_k A_k|`.
    pub dual_infeas: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A starting point strictly inside both cones.
#[derive(Clone, Debug)]
pub struct StartPoint {
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub z: SymMatrix,
}

struct State<'a> {
    p: &'a SdpProblem,
    x: SymMatrix,
    y: Vec<f64>,
    z: SymMatrix,
}

impl State<'_> {
    fn primal_residual(&self) -> Vec<f64> {
        self.p
            .a
            .iter()
            .zip(&self.p.b)
            .map(|(a, b)| b - a.dot(&self.x))
            .collect()
    }

    fn dual_residual(&self) -> SymMatrix {
        let mut r = self.p.c.sub(&self.z);
        for (a, y) in self.p.a.iter().zip(&self.y) {
            r = r.axpy(-y, a);
        }
        r
    }

    fn snapshot(&self, iterations: usize, tol: f64) -> SdpSolution {
        let primal_obj = self.p.c.dot(&self.x);
        let dual_obj: f64 = self.p.b.iter().zip(&self.y).map(|(b, y)| b * y).sum();
        let gap = (primal_obj - dual_obj).abs();
        let primal_infeas = self
            .primal_residual()
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        let dual_infeas = self.dual_residual().max_abs();
        SdpSolution {
            x: self.x.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
            primal_obj,
            dual_obj,
            gap,
            primal_infeas,
            dual_infeas,
            iterations,
            converged: gap <= tol && primal_infeas <= tol && dual_infeas <= tol,
        }
    }
}

/// Runs the interior point method until the duality gap and both
/// infeasibilities are at most `opts.tol`, or the iteration cap is hit.
/// The returned solution is the last iterate; check `converged`.
pub fn solve_sdp(problem: &SdpProblem, start: Option<StartPoint>, opts: SdpOptions) -> SdpSolution {
    let n = problem.c.n();
    let m = problem.a.len();
    let start = start.unwrap_or_else(|| StartPoint {
        x: SymMatrix::identity(n),
        y: vec![0.0; m],
        z: SymMatrix::identity(n),
    });
    let mut st = State {
        p: problem,
        x: start.x,
        y: start.y,
        z: start.z,
    };

    for iter in 0..opts.max_iter {
        let snap = st.snapshot(iter, opts.tol);
        if snap.converged {
            return snap;
        }
        let Some(w) = st.z.inverse_pd() else {
            return snap;
        };
        let Some(schur) = schur_complement(problem, &st.x, &w) else {
            return snap;
        };
        let mu = st.x.dot(&st.z) / n as f64;

        // predictor
        let target = Matrix::zeros(n);
        let Some((dx_aff, dy_aff, dz_aff)) = direction(&st, &w, &schur, &target) else {
            return snap;
        };
        let ap = max_step(&st.x, &dx_aff);
        let ad = max_step(&st.z, &dz_aff);
        let mu_aff = st.x.axpy(ap, &dx_aff).dot(&st.z.axpy(ad, &dz_aff)) / n as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector: R = σμI - ΔX_aff ΔZ_aff
        let cross = dx_aff.as_matrix().mul(dz_aff.as_matrix());
        let target = Matrix::from_fn(n, |i, j| {
            let diag = if i == j { sigma * mu } else { 0.0 };
            diag - cross[(i, j)]
        });
        let (dx, dy, dz) = match direction(&st, &w, &schur, &target) {
            Some(d) => d,
            None => (dx_aff, dy_aff, dz_aff),
        };

        let ap = safe_step(&st.x, &dx);
        let ad = safe_step(&st.z, &dz);
        if ap == 0.0 && ad == 0.0 {
            return snap;
        }
        st.x = st.x.axpy(ap, &dx);
        st.z = st.z.axpy(ad, &dz);
        for (y, d) in st.y.iter_mut().zip(&dy) {
            *y += ad * d;
        }
    }
    st.snapshot(opts.max_iter, opts.tol)
}

/// `M_kl = tr(A_k X A_l W)`.
fn schur_complement(p: &SdpProblem, x: &SymMatrix, w: &SymMatrix) -> Option<Matrix> {
    let m = p.a.len();
    let products: Vec<Matrix> =
        p.a.iter()
            .map(|a| x.as_matrix().mul(a.as_matrix()).mul(w.as_matrix()))
            .collect();
    let mut schur = Matrix::zeros(m);
    for k in 0..m {
        for l in 0..m {
            schur[(k, l)] = trace_product(&p.a[k], &products[l]);
        }
    }
    schur.max_abs().is_finite().then_some(schur)
}

/// `tr(A G)` for symmetric `A`.
fn trace_product(a: &SymMatrix, g: &Matrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let aij = a.get(i, j);
            if aij != 0.0 {
                s += aij * g[(j, i)];
            }
        }
    }
    s
}

/// Newton direction for `XZ = R` (HKM symmetrization).
fn direction(
    st: &State<'_>,
    w: &SymMatrix,
    schur: &Matrix,
    target: &Matrix,
) -> Option<(SymMatrix, Vec<f64>, SymMatrix)> {
    let x = st.x.as_matrix();
    let wm = w.as_matrix();
    let rd = st.dual_residual();
    let rp = st.primal_residual();
    let xrdw = x.mul(rd.as_matrix()).mul(wm);
    let rw = target.mul(wm);
    let base = Matrix::from_fn(x.n(), |i, j| rw[(i, j)] - x[(i, j)] - xrdw[(i, j)]);
    let base = SymMatrix::sym_part(&base);
    let rhs: Vec<f64> =
        st.p.a
            .iter()
            .zip(&rp)
            .map(|(a, r)| r - a.dot(&base))
            .collect();
    let dy = solve_spd(schur, &rhs)?;
    if dy.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut dz = rd;
    for (a, d) in st.p.a.iter().zip(&dy) {
        dz = dz.axpy(-d, a);
    }
    let xdzw = x.mul(dz.as_matrix()).mul(wm);
    let dx = Matrix::from_fn(x.n(), |i, j| rw[(i, j)] - x[(i, j)] - xdzw[(i, j)]);
    Some((SymMatrix::sym_part(&dx), dy, dz))
}

/// Largest `α <= 1` keeping `M + α D` positive semidefinite.
fn max_step(m: &SymMatrix, d: &SymMatrix) -> f64 {
    let Some(l) = m.cholesky() else {
        return 0.0;
    };
    let li = lower_inverse(&l);
    let s = SymMatrix::sym_part(&li.mul(d.as_matrix()).mul(&li.transpose()));
    let lmin = eig_sym(&s).values[0];
    if lmin >= 0.0 {
        1.0
    } else {
        (-1.0 / lmin).min(1.0)
    }
}

/// Fraction of the boundary step, shrunk until `M + α D` factorizes.
fn safe_step(m: &SymMatrix, d: &SymMatrix) -> f64 {
    let mut alpha = STEP_FRACTION * max_step(m, d);
    for _ in 0..60 {
        if m.axpy(alpha, d).cholesky().is_some() {
            return alpha;
        }
        alpha *= STEP_SHRINK;
    }
    0.0
}

/// Lovász number with its certificate.
#[derive(Clone, Debug)]
pub struct ThetaResult {
    /// Primal value `Σ X_ij` of the returned witness.
    pub value: f64,
    /// Dual value: an upper bound on ϑ up to dual infeasibility.
    pub upper: f64,
    pub gap: f64,
    pub iterations: usize,
    /// `X` with `tr X = 1`, `X_ij = 0` on edges, `X ⪰ 0`.
    pub witness: SymMatrix,
}

/// Builds the Lovász SDP in standard form:
/// `min <-J, X>` with `tr X = 1` and `X_ij = 0` for every edge.
pub fn theta_problem(g: &Graph) -> SdpProblem {
    let n = g.n();
    let c = SymMatrix::from_fn(n, |_, _| -1.0);
    let mut a = vec![SymMatrix::identity(n)];
    let mut b = vec![1.0];
    for (u, v) in g.edges() {
        let mut e = SymMatrix::zeros(n);
        e.set(u, v, 1.0);
        a.push(e);
        b.push(0.0);
    }
    SdpProblem { c, a, b }
}

/// `ϑ(g)` to within `tol`, certified by a primal-dual gap of at most `tol`.
pub fn lovasz_theta(g: &Graph, tol: f64) -> Result<ThetaResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let n = g.n();
    let problem = theta_problem(g);
    // X = I/n is primal feasible; y_0 = -(n+1) makes Z = (n+1)I - J ≻ 0.
    let mut y = vec![0.0; problem.a.len()];
    y[0] = -(n as f64 + 1.0);
    let start = StartPoint {
        x: SymMatrix::identity(n).scaled(1.0 / n as f64),
        z: SymMatrix::from_fn(n, |i, j| if i == j { n as f64 } else { -1.0 }),
        y,
    };
    let sol = solve_sdp(
        &problem,
        Some(start),
        SdpOptions {
            tol,
            max_iter: MAX_ITERATIONS,
        },
    );
    let value = -sol.primal_obj;
    if !sol.converged {
        return Err(Error::SdpNotConverged {
            value,
            gap: sol.gap,
            iterations: sol.iterations,
        });
    }
    Ok(ThetaResult {
        value,
        upper: -sol.dual_obj,
        gap: sol.gap,
        iterations: sol.iterations,
        witness: sol.x,
    })
}
