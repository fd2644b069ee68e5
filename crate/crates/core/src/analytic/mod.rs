//! Branch-correct elementary functions and boundary-value limits.
//!
//! Conventions used throughout the crate:
//!
//! * `sqrt`, `Arg` and `Log` are principal branches; [`arg`] returns values in
//!   `(-pi, pi]`.
//! * [`q`] is the inverse of `z -> z + 1/z` on the punctured unit disk, so its
//!   cut is exactly the real segment `[-2, 2]` and `q(t) ~ 1/t` at infinity.
//! * [`zeta`] is the boundary value of [`q`] from the upper half-plane.

mod stieltjes;

pub use stieltjes::{
    boundary_limit, q_boundary_limit, stieltjes_invert, stieltjes_jump, BoundaryEstimate,
    StieltjesSchedule,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used by every operation in the crate.
pub type ComplexScalar = Complex64;

/// A point `t` counts as lying on `[-2, 2]` when `|Im t| <= CUT_TOL` and
/// `|Re t| <= 2 + CUT_TOL`.
pub const CUT_TOL: f64 = 1e-13;

pub(crate) fn ensure_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Whether `t` lies on the real segment `[-half_width, half_width]`, up to
/// [`CUT_TOL`] scaled by `max(half_width, 1)`.
pub fn on_cut(t: Complex64, half_width: f64) -> bool {
    let tol = CUT_TOL * half_width.max(1.0);
    t.im.abs() <= tol && t.re.abs() <= half_width + tol
}

/// `q(t) = (t - sqrt(t^2 - 4)) / 2`, the root of `z^2 - t z + 1 = 0` inside
/// the unit disk.
///
/// `sqrt(t^2 - 4)` is evaluated as `sqrt(t - 2) * sqrt(t + 2)`, which is the
/// branch with cut `[-2, 2]` that behaves like `t` at infinity, and the result
/// is formed as `2 / (t + sqrt(t^2 - 4))` so no cancellation occurs for large
/// `|t|`.
pub fn q(t: Complex64) -> Result<Complex64> {
    ensure_finite(t, "q argument")?;
    if on_cut(t, 2.0) {
        return Err(Error::OnCut {
            func: "q",
            re: t.re,
            im: t.im,
        });
    }
    Ok(q_unchecked(t))
}

#[inline]
pub(crate) fn q_unchecked(t: Complex64) -> Complex64 {
    let mut root = (t - 2.0).sqrt() * (t + 2.0).sqrt();
    // The product form already selects the smaller-modulus root; the flip
    // only matters for inputs within round-off of the cut.
    if (t - root).norm_sqr() > (t + root).norm_sqr() {
        root = -root;
    }
    2.0 / (t + root)
}

/// `zeta(t) = (t - i sqrt(4 - t^2)) / 2` for real `t` in `[-2, 2]`.
pub fn zeta(t: f64) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::NonFinite("zeta argument"));
    }
    if t.abs() > 2.0 + CUT_TOL {
        return Err(Error::OffInterval {
            func: "zeta",
            value: t,
        });
    }
    Ok(zeta_unchecked(t.clamp(-2.0, 2.0)))
}

#[inline]
pub(crate) fn zeta_unchecked(t: f64) -> Complex64 {
    // (2 - t)(2 + t) keeps full relative accuracy near the endpoints.
    let s = ((2.0 - t) * (2.0 + t)).max(0.0).sqrt();
    Complex64::new(0.5 * t, -0.5 * s)
}

/// Principal argument in `(-pi, pi]`.
pub fn arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a == -PI {
        PI
    } else {
        a
    }
}

/// Principal logarithm, `ln|z| + i arg(z)`.
pub fn log(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), arg(z))
}

/// Argument remapped to `[0, 2 pi)`.
pub fn arg_0_2pi(z: Complex64) -> f64 {
    let a = arg(z);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn q_at_five_halves() {
        let v = q(c(2.5, 0.0)).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
        let v = q(c(-2.5, 0.0)).unwrap();
        assert!((v - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn q_at_three_solves_the_quadratic() {
        let v = q(c(3.0, 0.0)).unwrap();
        // substitution oracle
        assert!((v + 1.0 / v - c(3.0, 0.0)).norm() < 1e-14);
        assert!(v.norm() < 1.0);
        assert!((v.re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((v.re - 0.381_966_011_250_105_1).abs() < 1e-15);
    }

    #[test]
    fn q_rejects_the_cut() {
        assert!(matches!(q(c(1.0, 0.0)), Err(Error::OnCut { .. })));
        assert!(matches!(q(c(2.0, 5e-14)), Err(Error::OnCut { .. })));
        assert!(matches!(q(c(f64::NAN, 0.0)), Err(Error::NonFinite(_))));
        assert!(q(c(2.0, 1e-12)).is_ok());
        assert!(q(c(2.0 + 1e-12, 0.0)).is_ok());
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(0.0).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert!((zeta(2.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((zeta(-2.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        let z = zeta(1.0).unwrap();
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((z + 1.0 / z - c(1.0, 0.0)).norm() < 1e-15);
        assert!((arg(z) + PI / 3.0).abs() < 1e-15);
        assert!(matches!(zeta(2.1), Err(Error::OffInterval { .. })));
    }

    #[test]
    fn arg_is_half_open() {
        assert_eq!(arg(c(-1.0, 0.0)), PI);
        assert_eq!(arg(c(-1.0, -0.0)), PI);
        assert!((arg_0_2pi(c(1.0, -1.0)) - 7.0 * PI / 4.0).abs() < 1e-15);
        let l = log(c(0.0, 2.0));
        assert!((l - c(2f64.ln(), PI / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn q_is_asymptotic_to_reciprocal() {
        for k in 0..64 {
            let theta = k as f64 * 0.1;
            for radius in [10.0, 37.0, 1e3, 1e8] {
                let t = Complex64::from_polar(radius, theta);
                let v = q(t).unwrap();
                assert!((v * t - 1.0).norm() <= 5.0 / (radius * radius));
            }
        }
    }

    proptest! {
        #[test]
        fn zeta_is_on_the_lower_unit_semicircle(t in -2.0f64..=2.0) {
            let z = zeta(t).unwrap();
            prop_assert!((z.norm() - 1.0).abs() < 1e-15);
            prop_assert!(z.im <= 0.0);
            let a = arg(z);
            prop_assert!((-PI..=0.0).contains(&a) || a == PI);
        }

        #[test]
        fn q_inverts_joukowski(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            let t = c(re, im);
            prop_assume!(!on_cut(t, 2.0));
            let v = q(t).unwrap();
            prop_assert!(v.norm() < 1.0);
            prop_assert!((v + 1.0 / v - t).norm() <= 1e-12);
            let w = q(t.conj()).unwrap();
            prop_assert!((w - v.conj()).norm() <= 1e-13);
        }
    }
}
