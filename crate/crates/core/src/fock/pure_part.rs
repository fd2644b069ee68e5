//! The pure part `closure(alg(T, T*, 1) Omega)` and its complement.
//!
//! With `v2 = c v1 + d u` (`u` a unit vector orthogonal to `v1`), the level-`n`
//! slice of the pure part has the two orthogonal bases
//!
//! ```text
//! B_n  = { v1^n, v1^(n-1) u, v1^(n-2) u v2, ..., u v2^(n-1) }
//! B'_n = { v2^n, w v2^(n-1), v1 w v2^(n-2), ..., v1^(n-1) w }
//! ```
//!
//! where `w` spans the orthogonal complement of `v2` in `span(v1, u)`. Words
//! `v1^m u w v2^n` generate a reducing subspace on which `T` is normal.

use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;

use super::{fock_dim, level_offset, TruncatedFock};
use crate::error::{Error, Result};

type Vector = Vec<Complex64>;

const RANK_TOL: f64 = 1e-10;

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    inner(a, a).re.sqrt()
}

/// Embeds `f_1 (x) ... (x) f_n` (each factor a coordinate pair) into the
/// truncated Fock space of the given depth.
pub(crate) fn tensor(depth: usize, factors: &[[Complex64; 2]]) -> Vector {
    let n = factors.len();
    let mut out = vec![Complex64::new(0.0, 0.0); fock_dim(depth)];
    let base = level_offset(n);
    for bits in 0..(1usize << n) {
        let mut coeff = Complex64::new(1.0, 0.0);
        for (i, f) in factors.iter().enumerate() {
            coeff *= f[(bits >> (n - 1 - i)) & 1];
        }
        out[base + bits] = coeff;
    }
    out
}

/// Modified Gram-Schmidt (applied twice); vectors whose remainder falls below
/// `RANK_TOL` relative to their original norm are dropped.
fn orthonormalize(vectors: impl IntoIterator<Item = Vector>, basis: Vec<Vector>) -> Vec<Vector> {
    orthonormalize_scaled(vectors, basis, 0.0)
}

/// As [`orthonormalize`], but remainders are compared against
/// `max(original norm, floor)` so that round-off sized inputs are discarded.
fn orthonormalize_scaled(
    vectors: impl IntoIterator<Item = Vector>,
    mut basis: Vec<Vector>,
    floor: f64,
) -> Vec<Vector> {
    for mut v in vectors {
        let original = norm(&v);
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let h = inner(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= h * qi;
                }
            }
        }
        let rest = norm(&v);
        if rest > RANK_TOL * original.max(floor) {
            basis.push(v.into_iter().map(|x| x / rest).collect());
        }
    }
    basis
}

/// Sine of the largest principal angle between two subspaces, each given by
/// any spanning set. Returns 1 when their dimensions differ.
pub fn subspace_sine(a: &[Vector], b: &[Vector]) -> f64 {
    let qa = orthonormalize(a.iter().cloned(), Vec::new());
    let qb = orthonormalize(b.iter().cloned(), Vec::new());
    if qa.len() != qb.len() {
        return 1.0;
    }
    if qa.is_empty() {
        return 0.0;
    }
    one_sided_sine(&qa, &qb).max(one_sided_sine(&qb, &qa))
}

/// `|| (I - Qa Qa*) Qb ||_2` for orthonormal `Qa`, `Qb`.
fn one_sided_sine(qa: &[Vector], qb: &[Vector]) -> f64 {
    let residuals: Vec<Vector> = qb
        .iter()
        .map(|v| {
            let mut r = v.clone();
            for q in qa {
                let h = inner(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= h * qi;
                }
            }
            r
        })
        .collect();
    let k = residuals.len();
    let gram = Array2::from_shape_fn((k, k), |(i, j)| inner(&residuals[j], &residuals[i]));
    let top = gram
        .eigvalsh(UPLO::Lower)
        .map(|ev| ev.iter().fold(0.0f64, |acc, v| acc.max(*v)))
        .unwrap_or(f64::INFINITY);
    top.max(0.0).sqrt()
}

/// Coordinate realization of `B_n` or `B'_n`.
#[derive(Debug, Clone)]
pub struct PurePartBasis {
    pub level: usize,
    pub vectors: Vec<Vector>,
    /// Unit vector orthogonal to `v1` in `span(v1, v2)`.
    pub u: [Complex64; 2],
    /// `(1/sqrt 2) (c/|c|^2 v1 - d/|d|^2 u)`, orthogonal to `v2`.
    pub w: [Complex64; 2],
}

/// `(c, d)` with `v2 = c v1 + d u` and the vectors `u`, `w`.
fn decomposition(model: &TruncatedFock) -> Result<([Complex64; 2], [Complex64; 2])> {
    let cfg = model.config();
    if !cfg.is_independent() {
        return Err(Error::LinearlyDependent);
    }
    let v2 = model.v2();
    // v1 = norm1 e1, so v2 = (v2[0] / norm1) v1 + v2[1] e2
    let c = v2[0] / cfg.norm1;
    let d = v2[1];
    if c.norm() == 0.0 {
        return Err(Error::OutOfRange("v2 must not be orthogonal to v1 (alpha = 0)".into()));
    }
    let u = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    // <v2, a v1 + b u> = 0 with a = c / (|c|^2 |v1|^2), b = -d / |d|^2
    let a = c / (c.norm_sqr() * cfg.norm1 * cfg.norm1);
    let b = -d / d.norm_sqr();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let w = [a * cfg.norm1 * s, b * s];
    Ok((u, w))
}

/// `B_n` and `B'_n` at level `n`; requires `|v1| = 1`.
pub fn pure_part_basis(model: &TruncatedFock, n: usize) -> Result<(PurePartBasis, PurePartBasis)> {
    let norm1 = model.config().norm1;
    if (norm1 - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm1));
    }
    if n == 0 || n > model.depth() {
        return Err(Error::OutOfRange(format!(
            "level {n} must lie in 1..={}",
            model.depth()
        )));
    }
    let (u, w) = decomposition(model)?;
    let (v1, v2) = (model.v1(), model.v2());
    let depth = model.depth();

    let mut b = vec![tensor(depth, &vec![v1; n])];
    for j in 1..=n {
        let mut factors = vec![v1; n - j];
        factors.push(u);
        factors.extend(std::iter::repeat(v2).take(j - 1));
        b.push(tensor(depth, &factors));
    }

    let mut b_prime = vec![tensor(depth, &vec![v2; n])];
    for j in 1..=n {
        let mut factors = vec![v1; j - 1];
        factors.push(w);
        factors.extend(std::iter::repeat(v2).take(n - j));
        b_prime.push(tensor(depth, &factors));
    }

    let make = |vectors| PurePartBasis {
        level: n,
        vectors,
        u,
        w,
    };
    Ok((make(b), make(b_prime)))
}

/// Orthonormal basis of `span{ W Omega : W a word in X1, X2, |W| <= d }`.
#[derive(Debug, Clone)]
pub struct KrylovSpan {
    pub max_word_len: usize,
    pub basis: Vec<Vector>,
}

impl KrylovSpan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis of the level-`n` components of the span.
    pub fn level_component(&self, n: usize) -> Vec<Vector> {
        let lo = level_offset(n);
        let hi = level_offset(n + 1);
        let parts = self.basis.iter().map(|v| {
            let mut p = vec![Complex64::new(0.0, 0.0); v.len()];
            p[lo..hi].copy_from_slice(&v[lo..hi]);
            p
        });
        // the parts come from unit vectors, so tiny ones are round-off
        orthonormalize_scaled(parts, Vec::new(), 1.0)
    }

    /// `|P xi| / |xi|` for the orthogonal projection `P` onto the span.
    pub fn projection_ratio(&self, xi: &[Complex64]) -> f64 {
        let total = norm(xi);
        if total == 0.0 {
            return 0.0;
        }
        self.basis
            .iter()
            .map(|q| inner(xi, q).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / total
    }
}

pub fn krylov_pure_part(model: &TruncatedFock, max_word_len: usize) -> Result<KrylovSpan> {
    if max_word_len > model.depth() - 1 {
        return Err(Error::OutsideSafeZone {
            needed: max_word_len,
            depth: model.depth(),
            limit: model.depth() - 1,
        });
    }
    let mut basis = orthonormalize([model.vacuum()], Vec::new());
    let mut frontier = basis.clone();
    for _ in 0..max_word_len {
        let images: Vec<Vector> = frontier
            .iter()
            .flat_map(|v| [model.x1().apply(v), model.x2().apply(v)])
            .collect();
        let before = basis.len();
        basis = orthonormalize(images, basis);
        frontier = basis[before..].to_vec();
    }
    Ok(KrylovSpan {
        max_word_len,
        basis,
    })
}

/// Outcome of [`reducing_subspace_check`]; all fields are residual norms for
/// the unit generator `v1^m u w v2^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducingReport {
    pub m: usize,
    pub n: usize,
    /// Distance of `X1 xi` from the span of generators.
    pub closure_x1: f64,
    /// Distance of `X2 xi` from the span of generators.
    pub closure_x2: f64,
    /// `|[X1, X2] xi|`.
    pub commutator: f64,
}

impl ReducingReport {
    pub fn max_residual(&self) -> f64 {
        self.closure_x1.max(self.closure_x2).max(self.commutator)
    }
}

fn generator(model: &TruncatedFock, u: [Complex64; 2], w: [Complex64; 2], m: usize, n: usize) -> Vector {
    let mut factors = vec![model.v1(); m];
    factors.push(u);
    factors.push(w);
    factors.extend(std::iter::repeat(model.v2()).take(n));
    let v = tensor(model.depth(), &factors);
    let s = norm(&v);
    v.into_iter().map(|x| x / s).collect()
}

/// Generators `v1^m u w v2^n` of the normal reducing subspace with
/// `m + n + 2 <= max_level`, unit-normalized.
pub fn normal_generators(model: &TruncatedFock, max_level: usize) -> Result<Vec<(usize, usize, Vec<Complex64>)>> {
    let (u, w) = decomposition(model)?;
    let mut out = Vec::new();
    for total in 0..=max_level.saturating_sub(2) {
        for m in 0..=total {
            out.push((m, total - m, generator(model, u, w, m, total - m)));
        }
    }
    Ok(out)
}

/// Checks that `X1`, `X2` map `v1^m u w v2^n` into the span of such words and
/// commute on it.
pub fn reducing_subspace_check(model: &TruncatedFock, m: usize, n: usize) -> Result<ReducingReport> {
    let depth = model.depth();
    if m + n + 2 + 2 > depth {
        return Err(Error::OutsideSafeZone {
            needed: m + n + 2,
            depth,
            limit: depth.saturating_sub(2),
        });
    }
    let (u, w) = decomposition(model)?;
    let xi = generator(model, u, w, m, n);
    let span = orthonormalize(
        normal_generators(model, depth)?.into_iter().map(|(_, _, g)| g),
        Vec::new(),
    );
    let distance = |v: Vector| {
        let mut r = v;
        for q in &span {
            let h = inner(&r, q);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= h * qi;
            }
        }
        norm(&r)
    };
    let x1xi = model.x1().apply(&xi);
    let x2xi = model.x2().apply(&xi);
    let a = model.x1().apply(&x2xi);
    let b = model.x2().apply(&x1xi);
    let commutator = norm(&a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>());
    Ok(ReducingReport {
        m,
        n,
        closure_x1: distance(x1xi),
        closure_x2: distance(x2xi),
        commutator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_model, ModelConfig};

    fn model(alpha: Complex64, norm2: f64, depth: usize) -> TruncatedFock {
        build_model(ModelConfig::new(1.0, norm2, alpha).unwrap(), depth).unwrap()
    }

    fn pairwise_orthogonal(vs: &[Vector]) -> bool {
        for i in 0..vs.len() {
            for j in 0..i {
                if inner(&vs[i], &vs[j]).norm() > 1e-13 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn level_one_bases() {
        let m = model(Complex64::new(0.3, 0.4), 1.0, 4);
        let (b, bp) = pure_part_basis(&m, 1).unwrap();
        assert_eq!(b.vectors.len(), 2);
        assert_eq!(bp.vectors.len(), 2);
        assert!((inner(&[m.v2()[0], m.v2()[1]], &bp.w)).norm() < 1e-15);
        assert!(pairwise_orthogonal(&b.vectors));
        assert!(pairwise_orthogonal(&bp.vectors));
        assert!(subspace_sine(&b.vectors, &bp.vectors) < 1e-12);
    }

    #[test]
    fn level_two_excludes_u_w() {
        let m = model(Complex64::new(0.3, -0.4), 1.2, 4);
        let (b, _) = pure_part_basis(&m, 2).unwrap();
        assert_eq!(b.vectors.len(), 3);
        let uw = tensor(4, &[b.u, b.w]);
        for v in &b.vectors {
            assert!(inner(v, &uw).norm() < 1e-14);
        }
    }

    #[test]
    fn level_three_spans_agree() {
        let m = model(Complex64::new(-0.2, 0.5), 0.9, 5);
        let (b, bp) = pure_part_basis(&m, 3).unwrap();
        assert!(pairwise_orthogonal(&b.vectors));
        assert!(pairwise_orthogonal(&bp.vectors));
        let stacked: Vec<Vector> = b.vectors.iter().chain(&bp.vectors).cloned().collect();
        assert_eq!(orthonormalize(stacked, Vec::new()).len(), 4);
    }

    #[test]
    fn pure_part_preconditions() {
        let m = build_model(ModelConfig::new(2.0, 1.0, Complex64::new(0.0, 0.5)).unwrap(), 4).unwrap();
        assert!(matches!(pure_part_basis(&m, 1), Err(Error::NotNormalized(_))));
        let m = model(Complex64::new(0.0, 1.0), 1.0, 4);
        assert!(matches!(pure_part_basis(&m, 1), Err(Error::LinearlyDependent)));
        let m = model(Complex64::new(0.0, 0.5), 1.0, 4);
        assert!(pure_part_basis(&m, 5).is_err());
    }

    #[test]
    fn krylov_examples() {
        let m = model(Complex64::new(0.1, 0.6), 1.0, 6);
        assert_eq!(krylov_pure_part(&m, 0).unwrap().dim(), 1);
        let k2 = krylov_pure_part(&m, 2).unwrap();
        let level2 = k2.level_component(2);
        assert_eq!(level2.len(), 3);
        let (b2, _) = pure_part_basis(&m, 2).unwrap();
        assert!(subspace_sine(&level2, &b2.vectors) < 1e-10);

        let k4 = krylov_pure_part(&m, 4).unwrap();
        for (_, _, g) in normal_generators(&m, 4).unwrap() {
            assert!(k4.projection_ratio(&g) < 1e-10);
        }
        assert!(krylov_pure_part(&m, 6).is_err());
    }

    #[test]
    fn reducing_subspace_examples() {
        let m = model(Complex64::new(0.4, -0.3), 1.1, 6);
        let r = reducing_subspace_check(&m, 0, 0).unwrap();
        assert!(r.commutator < 1e-13);
        let r = reducing_subspace_check(&m, 1, 1).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        let m8 = model(Complex64::new(0.4, -0.3), 1.1, 8);
        let r = reducing_subspace_check(&m8, 2, 0).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        assert!(reducing_subspace_check(&m, 2, 1).is_err());
    }

    #[test]
    fn reducing_subspace_without_unit_v1() {
        let m = build_model(ModelConfig::new(1.7, 0.8, Complex64::new(0.2, 0.5)).unwrap(), 7).unwrap();
        let r = reducing_subspace_check(&m, 1, 2).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
    }
}
