//! Truncated full Fock space over `C^2` and the operators
//! `X1 = l(v1) + l(v1)*`, `X2 = r(v2) + r(v2)*`.
//!
//! Basis words are strings over the letters `{e1, e2}`. A word of length `k`
//! with letters `a_1 ... a_k` (0 for `e1`, 1 for `e2`) has index
//! `2^k - 1 + sum_i a_i 2^(k - i)`, so the vacuum is index 0 and each level is
//! a contiguous block. Inner products are conjugate-linear in the second slot.
//!
//! Creation operators send words of maximal length to zero, i.e. `X1`, `X2`
//! are compressions of the infinite operators. Anything computed from words
//! shorter than `depth - 1` is exact.

mod pure_part;
mod solve;
mod sparse;

pub use pure_part::{
    krylov_pure_part, normal_generators, pure_part_basis, reducing_subspace_check, subspace_sine, KrylovSpan,
    PurePartBasis, ReducingReport,
};
pub use solve::{solve_shifted, ShiftedSolver};
pub use sparse::SparseMatrix;

use std::sync::OnceLock;

use ndarray::Array2;
use ndarray_linalg::{Determinant, EigVals, EigValsh, Inverse, UPLO};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::ensure_finite;
use crate::error::{Error, Result};

pub const MIN_DEPTH: usize = 2;
pub const MAX_DEPTH: usize = 20;

/// Relative slack used when deciding whether `|alpha| = norm1 * norm2`.
const DEPENDENCE_TOL: f64 = 1e-12;

/// The triple `(|v1|, |v2|, alpha = <v1, v2>)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub norm1: f64,
    pub norm2: f64,
    pub alpha: Complex64,
}

impl ModelConfig {
    pub fn new(norm1: f64, norm2: f64, alpha: Complex64) -> Result<Self> {
        let cfg = Self {
            norm1,
            norm2,
            alpha,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite(self.alpha, "alpha")?;
        if !(self.norm1.is_finite() && self.norm1 > 0.0) {
            return Err(Error::InvalidConfig(format!("norm1 must be positive, got {}", self.norm1)));
        }
        if !(self.norm2.is_finite() && self.norm2 > 0.0) {
            return Err(Error::InvalidConfig(format!("norm2 must be positive, got {}", self.norm2)));
        }
        let bound = self.norm1 * self.norm2;
        if self.alpha.norm() > bound * (1.0 + DEPENDENCE_TOL) {
            return Err(Error::InvalidConfig(format!(
                "|alpha| = {} exceeds norm1 * norm2 = {} (Cauchy-Schwarz)",
                self.alpha.norm(),
                bound
            )));
        }
        Ok(())
    }

    /// `<v2, v1> = conj(alpha)`.
    pub fn inner21(&self) -> Complex64 {
        self.alpha.conj()
    }

    /// `r = |alpha| / (norm1 norm2)`.
    pub fn correlation(&self) -> f64 {
        self.alpha.norm() / (self.norm1 * self.norm2)
    }

    pub fn is_independent(&self) -> bool {
        self.correlation() < 1.0 - DEPENDENCE_TOL
    }

    pub fn is_nonnormal(&self) -> bool {
        self.alpha.im != 0.0
    }

    /// Coordinates of `v1 = norm1 e1` and `v2 = c e1 + d e2` with `d >= 0`.
    pub fn realize(&self) -> ([Complex64; 2], [Complex64; 2]) {
        let c = self.alpha.conj() / self.norm1;
        let d = (self.norm2 * self.norm2 - c.norm_sqr()).max(0.0).sqrt();
        (
            [Complex64::new(self.norm1, 0.0), Complex64::new(0.0, 0.0)],
            [c, Complex64::new(d, 0.0)],
        )
    }
}

/// One of the two operators of the two-faced pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variable {
    X1,
    X2,
}

/// A basis word; the empty word is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockWord {
    /// `false` for `e1`, `true` for `e2`.
    pub letters: Vec<bool>,
}

impl FockWord {
    pub fn vacuum() -> Self {
        Self { letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index(&self) -> usize {
        let bits = self
            .letters
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        level_offset(self.len()) + bits
    }

    pub fn from_index(index: usize) -> Self {
        let level = level_of(index);
        let bits = index - level_offset(level);
        let letters = (0..level).map(|i| (bits >> (level - 1 - i)) & 1 == 1).collect();
        Self { letters }
    }
}

/// Index of the first word of length `level`.
pub fn level_offset(level: usize) -> usize {
    (1usize << level) - 1
}

pub fn level_of(index: usize) -> usize {
    (usize::BITS - (index + 1).leading_zeros() - 1) as usize
}

/// Number of basis words of length at most `depth`.
pub fn fock_dim(depth: usize) -> usize {
    (1usize << (depth + 1)) - 1
}

/// Truncated Fock model: immutable after [`build_model`].
#[derive(Debug, Clone)]
pub struct TruncatedFock {
    config: ModelConfig,
    depth: usize,
    v1: [Complex64; 2],
    v2: [Complex64; 2],
    x1: SparseMatrix,
    x2: SparseMatrix,
    // vacuum Krylov decompositions, built on first use
    vacuum_x1: OnceLock<ShiftedSolver>,
    vacuum_x2: OnceLock<ShiftedSolver>,
}

fn creation(depth: usize, v: [Complex64; 2], left: bool) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for level in 0..depth {
        let base = level_offset(level);
        let next = level_offset(level + 1);
        for bits in 0..(1usize << level) {
            for (letter, coeff) in v.iter().enumerate() {
                if *coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let target = if left {
                    (letter << level) | bits
                } else {
                    (bits << 1) | letter
                };
                out.push((next + target, base + bits, *coeff));
            }
        }
    }
    out
}

fn hermitian_part(dim: usize, creation: Vec<(usize, usize, Complex64)>) -> SparseMatrix {
    let adj: Vec<_> = creation.iter().map(|&(r, c, v)| (c, r, v.conj())).collect();
    SparseMatrix::from_triplets(dim, creation.into_iter().chain(adj).collect())
}

/// Assembles `X1`, `X2` on words of length `<= depth`.
pub fn build_model(config: ModelConfig, depth: usize) -> Result<TruncatedFock> {
    config.validate()?;
    if !(MIN_DEPTH..=MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidDepth { depth });
    }
    let (v1, v2) = config.realize();
    let dim = fock_dim(depth);
    let x1 = hermitian_part(dim, creation(depth, v1, true));
    let x2 = hermitian_part(dim, creation(depth, v2, false));
    Ok(TruncatedFock {
        config,
        depth,
        v1,
        v2,
        x1,
        x2,
        vacuum_x1: OnceLock::new(),
        vacuum_x2: OnceLock::new(),
    })
}

fn lapack(e: ndarray_linalg::error::LinalgError) -> Error {
    Error::OutOfRange(format!("dense eigen/factorization failed: {e}"))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

impl TruncatedFock {
    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        fock_dim(self.depth)
    }

    pub fn v1(&self) -> [Complex64; 2] {
        self.v1
    }

    pub fn v2(&self) -> [Complex64; 2] {
        self.v2
    }

    pub fn x1(&self) -> &SparseMatrix {
        &self.x1
    }

    pub fn x2(&self) -> &SparseMatrix {
        &self.x2
    }

    pub fn operator(&self, var: Variable) -> &SparseMatrix {
        match var {
            Variable::X1 => &self.x1,
            Variable::X2 => &self.x2,
        }
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Words of length `<= depth - 2`, on which a product of two of the
    /// operators is unaffected by truncation.
    pub fn safe_words(&self) -> std::ops::Range<usize> {
        0..fock_dim(self.depth - 2)
    }

    /// `P xi`, the projection onto the vacuum.
    pub fn project_vacuum(&self, xi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        out[0] = xi[0];
        out
    }

    /// `T = X1 + i X2` as a sparse matrix.
    pub fn t_operator(&self) -> SparseMatrix {
        self.x1
            .combine(Complex64::new(1.0, 0.0), &self.x2, Complex64::new(0.0, 1.0))
    }

    /// `<X_{w_1} ... X_{w_k} Omega, Omega>`.
    pub fn vacuum_expectation(&self, word: &[Variable]) -> Result<Complex64> {
        if word.len() > self.depth - 1 {
            return Err(Error::OutsideSafeZone {
                needed: word.len(),
                depth: self.depth,
                limit: self.depth - 1,
            });
        }
        let mut xi = self.vacuum();
        for var in word.iter().rev() {
            xi = self.operator(*var).apply(&xi);
        }
        Ok(xi[0])
    }

    /// `(shift - X) ^ -1 Omega`.
    pub fn resolvent_vacuum(&self, var: Variable, shift: Complex64) -> Result<Vec<Complex64>> {
        ensure_finite(shift, "resolvent shift")?;
        let cell = match var {
            Variable::X1 => &self.vacuum_x1,
            Variable::X2 => &self.vacuum_x2,
        };
        let solver = match cell.get() {
            Some(solver) => solver,
            None => {
                // the vacuum's Krylov space under X_i is span{v_i^k : k <= depth}
                let built = ShiftedSolver::new(self.operator(var), &self.vacuum(), self.depth + 2)?;
                cell.get_or_init(|| built)
            }
        };
        solver.solve(self.operator(var), shift)
    }

    /// `phi((t1 - X1)^-1 (t2 - X2)^-1)`.
    pub fn green_numeric(&self, t1: Complex64, t2: Complex64) -> Result<Complex64> {
        // <R1 R2 Omega, Omega> = <R2 Omega, R1* Omega> and R1* = (conj t1 - X1)^-1
        let right = self.resolvent_vacuum(Variable::X2, t2)?;
        let left = self.resolvent_vacuum(Variable::X1, t1.conj())?;
        Ok(inner(&right, &left))
    }

    /// `1 - 2 Im<v2, v1> i phi((X2 - l)^-1 (X1 - s)^-1)`.
    pub fn det_e_numeric(&self, l: Complex64, s: Complex64) -> Result<Complex64> {
        let im21 = self.config.inner21().im;
        // (X2 - l)^-1 (X1 - s)^-1 = (l - X2)^-1 (s - X1)^-1
        let right = self.resolvent_vacuum(Variable::X1, s)?;
        let left = self.resolvent_vacuum(Variable::X2, l.conj())?;
        let phi = inner(&right, &left);
        Ok(Complex64::new(1.0, 0.0) - Complex64::new(0.0, 2.0 * im21) * phi)
    }

    /// Largest `|([X1, X2] - 2 i Im<v2, v1> P) xi|` over safe-zone basis words.
    pub fn commutator_defect(&self) -> f64 {
        let expected = Complex64::new(0.0, 2.0 * self.config.inner21().im);
        self.safe_words()
            .map(|idx| {
                let e = unit(self.dim(), idx);
                let a = self.x1.apply(&self.x2.apply(&e));
                let b = self.x2.apply(&self.x1.apply(&e));
                let p = self.project_vacuum(&e);
                a.iter()
                    .zip(&b)
                    .zip(&p)
                    .map(|((x, y), z)| (x - y - expected * z).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|([T, T*] - coefficient P) xi|` over safe-zone basis words.
    pub fn self_commutator_defect(&self, coefficient: f64) -> f64 {
        let t = self.t_operator();
        let t_adj = t.adjoint();
        self.safe_words()
            .map(|idx| {
                let e = unit(self.dim(), idx);
                let a = t.apply(&t_adj.apply(&e));
                let b = t_adj.apply(&t.apply(&e));
                let p = self.project_vacuum(&e);
                a.iter()
                    .zip(&b)
                    .zip(&p)
                    .map(|((x, y), z)| (x - y - z * coefficient).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    fn require_dense(&self, max_depth: usize) -> Result<()> {
        if self.depth > max_depth {
            return Err(Error::InvalidDepth { depth: self.depth });
        }
        Ok(())
    }

    /// Spectral norms of the truncated `X1`, `X2` (dense eigensolve, depth <= 10).
    pub fn operator_norms(&self) -> Result<(f64, f64)> {
        self.require_dense(10)?;
        let norm = |m: &SparseMatrix| -> Result<f64> {
            let ev = m.to_dense().eigvalsh(UPLO::Lower).map_err(lapack)?;
            Ok(ev.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
        };
        Ok((norm(&self.x1)?, norm(&self.x2)?))
    }

    /// Eigenvalues of the truncated `T` (depth <= 10).
    ///
    /// `T` maps level `k` into levels `k +- 1`, so with the basis split into
    /// even and odd levels it has the form `[[0, B], [C, 0]]`. Its eigenvalues
    /// are `+-sqrt(mu)` for the eigenvalues `mu` of the odd-level block `C B`,
    /// plus `dim(even) - dim(odd)` zeros.
    pub fn t_eigenvalues(&self) -> Result<Vec<Complex64>> {
        self.require_dense(10)?;
        let t = self.t_operator();
        let (even, odd): (Vec<usize>, Vec<usize>) = (0..self.dim()).partition(|&i| level_of(i) % 2 == 0);
        let position = |i: usize, part: &[usize]| part.binary_search(&i).expect("index in its part");
        let mut b = Array2::<Complex64>::zeros((even.len(), odd.len()));
        let mut c = Array2::<Complex64>::zeros((odd.len(), even.len()));
        for (row, col, v) in t.triplets() {
            if level_of(row) % 2 == 0 {
                b[(position(row, &even), position(col, &odd))] += v;
            } else {
                c[(position(row, &odd), position(col, &even))] += v;
            }
        }
        let squares = c.dot(&b).eigvals().map_err(lapack)?;
        let mut out = Vec::with_capacity(self.dim());
        for mu in squares.iter() {
            let root = mu.sqrt();
            out.push(root);
            out.push(-root);
        }
        out.resize(self.dim(), Complex64::new(0.0, 0.0));
        Ok(out)
    }

    /// Evaluates the determinant route to `det E(l, s)` densely (depth <= 9).
    pub fn det_e_dense(&self, l: Complex64, s: Complex64) -> Result<DenseDetReport> {
        self.require_dense(9)?;
        let n = self.dim();
        let id = Array2::<Complex64>::eye(n);
        let a = self.x2.to_dense() - &id * l;
        let b = self.x1.to_dense() - &id * s;
        let singular = |z: Complex64| {
            move |e: ndarray_linalg::error::LinalgError| Error::SingularSolve {
                re: z.re,
                im: z.im,
                reason: format!("dense factorization failed: {e}"),
            }
        };
        let a_inv = a.inv().map_err(singular(l))?;
        let b_inv = b.inv().map_err(singular(s))?;
        let resolvents = a_inv.dot(&b_inv);

        let mut ideal = Array2::<Complex64>::zeros((n, n));
        ideal[(0, 0)] = Complex64::new(0.0, -2.0 * self.config.inner21().im);
        let projected = (&id + &ideal.dot(&resolvents)).det().map_err(lapack)?;

        let truncated_commutator = a.dot(&b) - b.dot(&a);
        let full = (&id + &truncated_commutator.dot(&resolvents)).det().map_err(lapack)?;
        Ok(DenseDetReport {
            projected,
            full,
            edge_discrepancy: (full - projected).norm(),
        })
    }
}

/// Dense determinant cross-check for [`TruncatedFock::det_e_dense`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseDetReport {
    /// `det(1 - 2 Im<v2, v1> i P (X2 - l)^-1 (X1 - s)^-1)` with dense matrices.
    pub projected: Complex64,
    /// `det((X2 - l)(X1 - s)(X2 - l)^-1 (X1 - s)^-1)` with the truncated
    /// matrices; always 1 in finite dimensions.
    pub full: Complex64,
    /// `|full - projected|`, the share carried by the truncation edge terms
    /// of the commutator.
    pub edge_discrepancy: f64,
}

pub(crate) fn unit(dim: usize, idx: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    e[idx] = Complex64::new(1.0, 0.0);
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::q;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn model(norm1: f64, norm2: f64, alpha: Complex64, depth: usize) -> TruncatedFock {
        build_model(ModelConfig::new(norm1, norm2, alpha).unwrap(), depth).unwrap()
    }

    #[test]
    fn word_indexing_round_trips() {
        for idx in 0..fock_dim(6) {
            let w = FockWord::from_index(idx);
            assert_eq!(w.index(), idx);
        }
        assert!(FockWord::vacuum().is_empty());
        assert_eq!(FockWord { letters: vec![true, false] }.index(), 3 + 2);
        assert_eq!(level_of(0), 0);
        assert_eq!(level_of(1), 1);
        assert_eq!(level_of(3), 2);
        assert_eq!(level_of(6), 2);
        assert_eq!(level_of(7), 3);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(ModelConfig::new(1.0, 1.0, c(1.1, 0.0)).is_err());
        assert!(ModelConfig::new(0.0, 1.0, c(0.0, 0.0)).is_err());
        assert!(ModelConfig::new(1.0, 1.0, c(f64::NAN, 0.0)).is_err());
        let cfg = ModelConfig::new(1.0, 1.0, c(0.0, 1.0)).unwrap();
        assert!(!cfg.is_independent());
        assert!(matches!(build_model(cfg, 1), Err(Error::InvalidDepth { .. })));
    }

    #[test]
    fn realization_reproduces_alpha() {
        let cfg = ModelConfig::new(1.3, 0.8, c(0.2, -0.5)).unwrap();
        let (v1, v2) = cfg.realize();
        let alpha = inner(&v1, &v2);
        assert!((alpha - cfg.alpha).norm() < 1e-15);
        assert!((inner(&v2, &v2).re - 0.64).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_vectors_commute() {
        let m = model(1.0, 1.0, c(0.0, 0.0), 2);
        assert_eq!(m.dim(), 7);
        assert!(m.commutator_defect() < 1e-15);
        let e = m.vacuum();
        let a = m.x1().apply(&m.x2().apply(&e));
        let b = m.x2().apply(&m.x1().apply(&e));
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-15));
    }

    #[test]
    fn figure_example_self_commutator() {
        let m = model(2f64.sqrt(), 1.0, c(1.0, -1.0) / 2f64.sqrt(), 6);
        assert!(m.self_commutator_defect(2.0 * 2f64.sqrt()) < 1e-13);
    }

    #[test]
    fn matrices_are_self_adjoint_and_bounded() {
        let m = model(1.7, 0.6, c(0.3, 0.4), 3);
        assert_eq!(m.x1().hermitian_defect(), 0.0);
        assert_eq!(m.x2().hermitian_defect(), 0.0);
        let (n1, n2) = m.operator_norms().unwrap();
        assert!(n1 <= 2.0 * 1.7 + 1e-12);
        assert!(n2 <= 2.0 * 0.6 + 1e-12);
    }

    #[test]
    fn moments() {
        use Variable::*;
        let m = model(1.5, 0.7, c(0.2, -0.4), 6);
        let phi = |w: &[Variable]| m.vacuum_expectation(w).unwrap();
        assert!((phi(&[X1, X1]) - c(2.25, 0.0)).norm() < 1e-12);
        assert!((phi(&[X2, X2]) - c(0.49, 0.0)).norm() < 1e-12);
        assert!((phi(&[X1, X2]) - c(0.2, 0.4)).norm() < 1e-12);
        assert!((phi(&[X1, X1, X1, X1]) - c(2.0 * 1.5f64.powi(4), 0.0)).norm() < 1e-12);
        assert!(phi(&[X1]).norm() < 1e-15);
        assert!(phi(&[X2, X2, X2]).norm() < 1e-15);
        assert!(matches!(
            m.vacuum_expectation(&[X1; 6]),
            Err(Error::OutsideSafeZone { .. })
        ));
    }

    #[test]
    fn green_numeric_examples() {
        let m = model(1.0, 1.0, c(0.0, 0.0), 16);
        let g = m.green_numeric(c(2.5, 0.0), c(2.5, 0.0)).unwrap();
        // truncation error ~ q^(2N) = 2^-32
        assert!((g - c(0.25, 0.0)).norm() < 1e-10);

        // <v2, v1> = i, i.e. alpha = -i
        let m = model(1.0, 1.0, c(0.0, -1.0), 16);
        let g = m.green_numeric(c(2.5, 0.0), c(2.5, 0.0)).unwrap();
        assert!((g - c(4.0, 1.0) / 17.0).norm() < 1e-10, "{g}");

        let g = m.green_numeric(c(1e6, 0.0), c(1e6, 0.0)).unwrap();
        assert!((g - c(1e-12, 0.0)).norm() < 1e-17);
    }

    #[test]
    fn det_e_numeric_examples() {
        let m = model(1.0, 1.0, c(0.7, 0.0), 10);
        let d = m.det_e_numeric(c(3.0, 0.5), c(-2.5, 1.0)).unwrap();
        assert_eq!(d, c(1.0, 0.0));

        let m = model(1.0, 1.0, c(0.0, 0.5), 12);
        let d = m.det_e_numeric(c(1e6, 0.0), c(1e6, 0.0)).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-10);

        // hand evaluation of the closed form at l = s = 3, alpha = i/2
        let q3 = q(c(3.0, 0.0)).unwrap();
        let alpha = c(0.0, 0.5);
        let expect = (1.0 - alpha.conj() * q3 * q3) / (1.0 - alpha * q3 * q3);
        let m = model(1.0, 1.0, alpha, 16);
        let d = m.det_e_numeric(c(3.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((d - expect).norm() < 1e-5);
    }

    #[test]
    fn dense_determinant_route() {
        let m = model(1.0, 1.0, c(0.0, 0.5), 5);
        let (l, s) = (c(3.0, 0.2), c(-3.1, 0.4));
        let rep = m.det_e_dense(l, s).unwrap();
        let scalar = m.det_e_numeric(l, s).unwrap();
        assert!((rep.projected - scalar).norm() < 1e-12);
        assert!((rep.full - c(1.0, 0.0)).norm() < 1e-10);
        assert!((rep.edge_discrepancy - (scalar - 1.0).norm()).abs() < 1e-10);
    }

    #[test]
    fn truncated_spectrum_in_rectangle() {
        let m = model(1.0, 1.0, c(0.0, 0.5), 6);
        for ev in m.t_eigenvalues().unwrap() {
            assert!(ev.re.abs() <= 2.0 + 1e-10 && ev.im.abs() <= 2.0 + 1e-10, "{ev}");
        }
    }

    #[test]
    fn parity_reduction_matches_full_schur() {
        let m = model(1.3, 0.8, c(0.3, -0.6), 5);
        let reduced = m.t_eigenvalues().unwrap();
        let full = m.t_operator().to_dense().eigvals().unwrap();
        assert_eq!(reduced.len(), full.len());
        // every full eigenvalue is matched by a reduced one (zeros are
        // defective, so allow a loose match near the origin)
        for z in full.iter() {
            let best = reduced.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6 || z.norm() < 1e-3, "{z} unmatched ({best:e})");
        }
        let sum_full: Complex64 = full.iter().map(|z| z * z).sum();
        let sum_reduced: Complex64 = reduced.iter().map(|z| z * z).sum();
        assert!((sum_full - sum_reduced).norm() < 1e-9);
    }
}
