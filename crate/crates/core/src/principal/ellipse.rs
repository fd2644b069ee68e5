//! Linearly dependent vectors: `v1 = lambda v2`.
//!
//! With `U` the unilateral shift, `T / |v2| = (lambda + i) U + (conj(lambda) + i) U*`,
//! whose essential spectrum is the ellipse traced by
//! `lambda t + conj(lambda t) + i (t + conj t)` for `|t| = 1`. The principal
//! function is `-sign(Im lambda)` on the open interior and 0 elsewhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::ensure_finite;
use crate::error::{Error, Result};
use crate::fock::ModelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseCase {
    /// `lambda` with `v1 = lambda v2`.
    pub alpha_dep: Complex64,
    pub norm2: f64,
}

impl EllipseCase {
    pub fn new(alpha_dep: Complex64, norm2: f64) -> Result<Self> {
        ensure_finite(alpha_dep, "ellipse alpha")?;
        if alpha_dep.im == 0.0 {
            return Err(Error::Normal);
        }
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::InvalidConfig(format!("norm2 must be positive, got {norm2}")));
        }
        Ok(Self { alpha_dep, norm2 })
    }

    /// The dependent case of a model configuration, `lambda = alpha / norm2^2`.
    pub fn from_config(config: &ModelConfig) -> Result<Self> {
        config.validate()?;
        if config.is_independent() {
            return Err(Error::InvalidConfig("vectors are linearly independent".into()));
        }
        Self::new(config.alpha / (config.norm2 * config.norm2), config.norm2)
    }

    /// `x^2 + |lambda|^2 y^2 - 2 Re(lambda) x y - 4 Im(lambda)^2`, negative inside.
    pub fn implicit(&self, x: f64, y: f64) -> f64 {
        let a = self.alpha_dep;
        x * x + a.norm_sqr() * y * y - 2.0 * a.re * x * y - 4.0 * a.im * a.im
    }

    /// Point of the boundary curve for the unit-circle parameter `t`, in
    /// unscaled (`|v2| = 1`) coordinates.
    pub fn curve_point(&self, t: Complex64) -> Complex64 {
        let lt = self.alpha_dep * t;
        Complex64::new(2.0 * lt.re, 2.0 * t.re)
    }
}

/// Signed indicator of the ellipse interior: `-1` inside when `Im lambda > 0`,
/// `+1` inside when `Im lambda < 0`, 0 on the curve and outside.
pub fn ellipse_principal(case: &EllipseCase, point: Complex64) -> Result<i32> {
    ensure_finite(point, "ellipse point")?;
    if case.alpha_dep.im == 0.0 {
        return Err(Error::Normal);
    }
    let p = point / case.norm2;
    if case.implicit(p.re, p.im) < 0.0 {
        Ok(if case.alpha_dep.im > 0.0 { -1 } else { 1 })
    } else {
        Ok(0)
    }
}

/// Largest residual of the implicit equation along `samples` equispaced points
/// of the parameterized curve.
pub fn ellipse_curve_check(case: &EllipseCase, samples: usize) -> Result<f64> {
    if samples < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 samples, got {samples}")));
    }
    let step = std::f64::consts::TAU / samples as f64;
    Ok((0..samples)
        .map(|k| {
            let p = case.curve_point(Complex64::from_polar(1.0, step * k as f64));
            case.implicit(p.re, p.im).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_for_alpha_i() {
        let e = EllipseCase::new(c(0.0, 1.0), 1.0).unwrap();
        assert_eq!(ellipse_principal(&e, c(0.0, 0.0)).unwrap(), -1);
        assert_eq!(ellipse_principal(&e, c(3.0, 0.0)).unwrap(), 0);
        assert_eq!(ellipse_principal(&e, c(1.9, 0.0)).unwrap(), -1);
        assert!(ellipse_curve_check(&e, 360).unwrap() < 1e-12);
        for k in 0..12 {
            let p = e.curve_point(Complex64::from_polar(1.0, k as f64));
            assert!((p.norm() - 2.0).abs() < 1e-14);
        }
        let e = EllipseCase::new(c(0.0, -1.0), 1.0).unwrap();
        assert_eq!(ellipse_principal(&e, c(0.0, 0.0)).unwrap(), 1);
    }

    #[test]
    fn curve_residuals() {
        for (a, n) in [(c(1.0, 1.0), 360), (c(0.0, 2.0), 4), (c(-3.0, 0.2), 17)] {
            let e = EllipseCase::new(a, 1.0).unwrap();
            assert!(ellipse_curve_check(&e, n).unwrap() < 1e-12);
        }
    }

    #[test]
    fn from_dependent_config() {
        // v1 = i v2 with |v2| = 2: <v1, v2> = 4i
        let cfg = ModelConfig::new(2.0, 2.0, c(0.0, 4.0)).unwrap();
        let e = EllipseCase::from_config(&cfg).unwrap();
        assert!((e.alpha_dep - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(ellipse_principal(&e, c(3.9, 0.0)).unwrap(), -1);
        assert_eq!(ellipse_principal(&e, c(4.1, 0.0)).unwrap(), 0);
        assert!(EllipseCase::from_config(&ModelConfig::new(1.0, 1.0, c(0.0, 0.5)).unwrap()).is_err());
    }

    #[test]
    fn rejects_real_alpha() {
        assert!(matches!(EllipseCase::new(c(0.5, 0.0), 1.0), Err(Error::Normal)));
        assert!(ellipse_curve_check(&EllipseCase::new(c(0.5, 1.0), 1.0).unwrap(), 2).is_err());
    }
}
