//! Small dense real matrices: symmetric storage, Jacobi eigen-decomposition,
//! Cholesky factorization.

use crate::error::{Error, Result};

const SYM_TOL: f64 = 1e-12;

/// Dense square matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Dense symmetric matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix(Matrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    /// Row-major entries; rejects asymmetric or non-finite input.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        let m = Matrix { n, data };
        let scale = m.max_abs().max(1.0);
        for i in 0..n {
            for j in 0..n {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if (m[(i, j)] - m[(j, i)]).abs() > SYM_TOL * scale {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymMatrix(m).symmetrized())
    }

    /// Builds from the upper triangle of `f`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymMatrix(m)
    }

    /// `(M + Mᵀ) / 2` of a general matrix.
    pub fn sym_part(m: &Matrix) -> Self {
        SymMatrix::from_fn(m.n(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    fn symmetrized(self) -> Self {
        SymMatrix::sym_part(&self.0)
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.get(i, i)).sum()
    }

    pub fn sum(&self) -> f64 {
        self.0.data.iter().sum()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        self.0
            .data
            .iter()
            .zip(&other.0.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        self.map(|x| x * s)
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.zip(other, |a, b| a - b)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &SymMatrix) -> SymMatrix {
        self.zip(other, |a, b| a + s * b)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        SymMatrix(Matrix {
            n: self.n(),
            data: self.0.data.iter().map(|&x| f(x)).collect(),
        })
    }

    fn zip(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> SymMatrix {
        SymMatrix(Matrix {
            n: self.n(),
            data: self
                .0
                .data
                .iter()
                .zip(&other.0.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Lower-triangular `L` with `LLᵀ = self`, or `None` if not positive
    /// definite.
    pub fn cholesky(&self) -> Option<Matrix> {
        let n = self.n();
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= 0.0 || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    /// Inverse of a positive definite matrix.
    pub fn inverse_pd(&self) -> Option<SymMatrix> {
        let l = self.cholesky()?;
        let linv = lower_inverse(&l);
        // A⁻¹ = L⁻ᵀ L⁻¹
        Some(SymMatrix::sym_part(&linv.transpose().mul(&linv)))
    }
}

/// Inverse of a lower-triangular matrix with nonzero diagonal.
pub fn lower_inverse(l: &Matrix) -> Matrix {
    let n = l.n();
    let mut inv = Matrix::zeros(n);
    for j in 0..n {
        inv[(j, j)] = 1.0 / l[(j, j)];
        for i in j + 1..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = s / l[(i, i)];
        }
    }
    inv
}

/// Solves `A x = b` for a symmetric positive definite `A` given as a general
/// matrix; falls back to partial-pivoting elimination when Cholesky fails.
pub fn solve_spd(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let sym = SymMatrix::sym_part(a);
    if let Some(l) = sym.cholesky() {
        let n = a.n();
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[(i, k)] * y[k];
            }
            y[i] /= l[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= l[(k, i)] * y[k];
            }
            y[i] /= l[(i, i)];
        }
        return Some(y);
    }
    solve_lu(a, b)
}

fn solve_lu(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.n();
    let mut m = a.clone();
    let mut x = b.to_vec();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[(i, c)].abs().total_cmp(&m[(j, c)].abs()))?;
        if m[(p, c)].abs() < 1e-300 {
            return None;
        }
        if p != c {
            for j in 0..n {
                let t = m[(c, j)];
                m[(c, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            x.swap(c, p);
        }
        for i in c + 1..n {
            let f = m[(i, c)] / m[(c, c)];
            if f == 0.0 {
                continue;
            }
            for j in c..n {
                m[(i, j)] -= f * m[(c, j)];
            }
            x[i] -= f * x[c];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= m[(i, j)] * x[j];
        }
        x[i] /= m[(i, i)];
    }
    Some(x)
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.n())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigen-decomposition, iterated until the off-diagonal
/// Frobenius norm drops below `1e-12` relative to the matrix norm.
pub fn eig_sym(m: &SymMatrix) -> Eigen {
    let n = m.n();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = idx.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, |r, c| v[(r, idx[c])]);
    Eigen { values, vectors }
}

pub fn min_eigenvalue(m: &SymMatrix) -> f64 {
    eig_sym(m).values.first().copied().unwrap_or(0.0)
}
