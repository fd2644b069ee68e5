//! Resolvent solves `(shift - X) x = b` for self-adjoint sparse `X`.
//!
//! The Krylov space of a Hermitian operator is shift invariant, so a single
//! Lanczos run (with full reorthogonalization) reduces every shifted system to
//! a tridiagonal one. Starting from the vacuum the Krylov space is tiny (it is
//! exhausted after `depth + 1` steps), which makes depth-16 truncations cheap.
//! The returned vector's residual is always re-checked against the sparse
//! matrix itself.

use num_complex::Complex64;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-13;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // <a, b>, conjugate-linear in b
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves `(shift - diag(alpha) - offdiag(beta)) y = rhs0 * e_1`.
fn tridiagonal_solve(
    shift: Complex64,
    alpha: &[f64],
    beta: &[f64],
    rhs0: f64,
) -> Option<Vec<Complex64>> {
    let n = alpha.len();
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let diag = shift - alpha[i];
        let lower = if i > 0 { -beta[i - 1] } else { 0.0 };
        let pivot = if i > 0 { diag - c_prime[i - 1] * lower } else { diag };
        if pivot.norm() < 1e-300 {
            return None;
        }
        let upper = if i + 1 < n { -beta[i] } else { 0.0 };
        c_prime[i] = upper / pivot;
        let rhs = if i == 0 { Complex64::new(rhs0, 0.0) } else { Complex64::new(0.0, 0.0) };
        let prev = if i > 0 { d_prime[i - 1] } else { Complex64::new(0.0, 0.0) };
        d_prime[i] = (rhs - prev * lower) / pivot;
    }
    let mut y = d_prime;
    for i in (0..n.saturating_sub(1)).rev() {
        let next = y[i + 1];
        y[i] -= c_prime[i] * next;
    }
    if y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(y)
    } else {
        None
    }
}

/// Lanczos recurrence `op V = V T + beta e_k^T` with full reorthogonalization.
#[derive(Debug, Clone)]
struct Lanczos {
    basis: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    beta0: f64,
    scale: f64,
}

impl Lanczos {
    fn start(rhs: &[Complex64]) -> Option<Self> {
        let beta0 = norm(rhs);
        (beta0 > 0.0).then(|| Self {
            basis: vec![rhs.iter().map(|x| x / beta0).collect()],
            alpha: Vec::new(),
            beta: Vec::new(),
            beta0,
            scale: 1.0,
        })
    }

    /// Computes the next diagonal entry and leaves the unnormalized next
    /// direction in `w`; returns its norm.
    fn step(&mut self, op: &SparseMatrix, w: &mut [Complex64]) -> f64 {
        let last = self.basis.last().expect("basis is never empty");
        op.apply_into(last, w);
        let a = dot(w, last).re;
        self.alpha.push(a);
        self.scale = self.scale.max(a.abs());
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &self.basis {
                let h = dot(w, v);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= h * vi;
                }
            }
        }
        let b = norm(w);
        self.scale = self.scale.max(b);
        b
    }

    fn extend(&mut self, b: f64, w: &[Complex64]) {
        self.beta.push(b);
        self.basis.push(w.iter().map(|x| x / b).collect());
    }

    fn is_breakdown(&self, b: f64) -> bool {
        b <= 1e-12 * self.scale
    }

    fn coefficients(&self, shift: Complex64) -> Option<Vec<Complex64>> {
        tridiagonal_solve(shift, &self.alpha, &self.beta, self.beta0)
    }

    fn combine(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.basis[0].len()];
        for (c, v) in coeffs.iter().zip(&self.basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += c * vi;
            }
        }
        x
    }

    /// Re-checks `(shift - op) x = rhs` against the sparse matrix itself.
    fn verify(&self, op: &SparseMatrix, shift: Complex64, rhs: &[Complex64], x: &[Complex64]) -> Result<()> {
        let ax = op.apply(x);
        let true_residual = norm(
            &x.iter()
                .zip(&ax)
                .zip(rhs)
                .map(|((xi, axi), bi)| shift * xi - axi - bi)
                .collect::<Vec<_>>(),
        );
        let x_norm = norm(x);
        if !(true_residual <= 1e-10 * (self.beta0 + (shift.norm() + self.scale) * x_norm)) {
            return Err(singular(shift, format!("residual check failed ({true_residual:e})")));
        }
        Ok(())
    }
}

fn singular(shift: Complex64, reason: String) -> Error {
    Error::SingularSolve {
        re: shift.re,
        im: shift.im,
        reason,
    }
}

fn eigen_shift(shift: Complex64) -> Error {
    singular(shift, "shift is an eigenvalue of the Krylov projection".into())
}

/// Solves `(shift - op) x = rhs` for Hermitian `op`.
pub fn solve_shifted(op: &SparseMatrix, shift: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let dim = op.dim();
    let Some(mut lanczos) = Lanczos::start(rhs) else {
        return Ok(vec![Complex64::new(0.0, 0.0); dim]);
    };
    let max_iter = dim.min(4000);
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let coeffs = loop {
        let b = lanczos.step(op, &mut w);
        let y = lanczos.coefficients(shift).ok_or_else(|| eigen_shift(shift))?;
        let residual = b * y[y.len() - 1].norm();
        if lanczos.is_breakdown(b) || residual <= RESIDUAL_TOL * lanczos.beta0 {
            break y;
        }
        if lanczos.basis.len() >= max_iter {
            return Err(singular(
                shift,
                format!("no convergence after {max_iter} Lanczos steps (residual {residual:e})"),
            ));
        }
        lanczos.extend(b, &w);
    };
    let x = lanczos.combine(&coeffs);
    lanczos.verify(op, shift, rhs, &x)?;
    Ok(x)
}

/// A Lanczos decomposition run to exhaustion from a fixed right-hand side,
/// reusable for any number of shifts. Only worthwhile when the Krylov space
/// of `rhs` is small, as it is for the vacuum.
#[derive(Debug, Clone)]
pub struct ShiftedSolver {
    lanczos: Option<Lanczos>,
    rhs: Vec<Complex64>,
}

impl ShiftedSolver {
    /// Fails if the Krylov space does not close within `max_iter` steps.
    pub fn new(op: &SparseMatrix, rhs: &[Complex64], max_iter: usize) -> Result<Self> {
        let mut lanczos = Lanczos::start(rhs);
        if let Some(l) = lanczos.as_mut() {
            let mut w = vec![Complex64::new(0.0, 0.0); op.dim()];
            loop {
                let b = l.step(op, &mut w);
                if l.is_breakdown(b) {
                    break;
                }
                if l.basis.len() >= max_iter.min(op.dim()) {
                    return Err(Error::SingularSolve {
                        re: f64::NAN,
                        im: f64::NAN,
                        reason: format!("Krylov space did not close within {max_iter} steps"),
                    });
                }
                l.extend(b, &w);
            }
        }
        Ok(Self {
            lanczos,
            rhs: rhs.to_vec(),
        })
    }

    /// Dimension of the Krylov space.
    pub fn krylov_dim(&self) -> usize {
        self.lanczos.as_ref().map_or(0, |l| l.basis.len())
    }

    pub fn solve(&self, op: &SparseMatrix, shift: Complex64) -> Result<Vec<Complex64>> {
        let Some(lanczos) = &self.lanczos else {
            return Ok(vec![Complex64::new(0.0, 0.0); self.rhs.len()]);
        };
        let coeffs = lanczos.coefficients(shift).ok_or_else(|| eigen_shift(shift))?;
        let x = lanczos.combine(&coeffs);
        lanczos.verify(op, shift, &self.rhs, &x)?;
        Ok(x)
    }
}
