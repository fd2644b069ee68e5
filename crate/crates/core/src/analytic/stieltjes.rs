//! Limits `eps -> 0+` of boundary values, estimated by Richardson
//! extrapolation along a geometric schedule of offsets.
//!
//! The functions handled here are boundary values of functions that are
//! either analytic across the open cut (an expansion in integer powers of
//! `eps`) or have a square-root branch point at a cut endpoint (half-integer
//! powers). The default schedule eliminates powers `eps^(k/2)`, which covers
//! both cases.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{on_cut, q_unchecked};
use crate::error::{Error, Result};

/// Geometric offset schedule `eps_k = eps_start * ratio^k`, `k = 0..=steps`,
/// and the extrapolation applied to the resulting sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StieltjesSchedule {
    pub eps_start: f64,
    pub ratio: f64,
    pub steps: usize,
    /// Number of error terms `eps^(power_step * k)`, `k = 1..=order`, removed.
    pub extrapolation_order: usize,
    /// Exponent spacing of the assumed error expansion.
    pub power_step: f64,
    /// Relative tolerance on the difference of the last two extrapolants.
    pub tolerance: f64,
}

impl Default for StieltjesSchedule {
    fn default() -> Self {
        Self {
            eps_start: 1e-2,
            ratio: 0.5,
            steps: 16,
            extrapolation_order: 3,
            power_step: 0.5,
            tolerance: 1e-8,
        }
    }
}

impl StieltjesSchedule {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSchedule(msg));
        if !(self.eps_start.is_finite() && self.eps_start > 0.0) {
            return bad(format!("eps_start must be positive, got {}", self.eps_start));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad(format!("ratio must lie in (0, 1), got {}", self.ratio));
        }
        if self.steps == 0 || self.steps < self.extrapolation_order + 1 {
            return bad(format!(
                "steps ({}) must exceed the extrapolation order ({})",
                self.steps, self.extrapolation_order
            ));
        }
        if !(self.power_step > 0.0) {
            return bad(format!("power_step must be positive, got {}", self.power_step));
        }
        if !(self.tolerance > 0.0) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        let floor = f64::EPSILON.sqrt();
        if self.smallest_offset() <= floor {
            return bad(format!(
                "smallest offset {:e} is below sqrt(machine epsilon) = {:e}",
                self.smallest_offset(),
                floor
            ));
        }
        Ok(())
    }

    pub fn smallest_offset(&self) -> f64 {
        self.eps_start * self.ratio.powi(self.steps as i32)
    }

    pub fn offsets(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.eps_start * self.ratio.powi(k as i32))
    }
}

/// Extrapolated limit together with the difference of the last two
/// extrapolants, used as the error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEstimate<T> {
    pub value: T,
    pub error: f64,
}

/// Richardson table over `samples[k] = F(eps_k)`; returns the two most refined
/// entries of the highest column.
fn richardson(samples: &[Complex64], schedule: &StieltjesSchedule) -> (Complex64, Complex64) {
    let mut column = samples.to_vec();
    for k in 1..=schedule.extrapolation_order {
        let rho = schedule.ratio.powf(schedule.power_step * k as f64);
        let scale = 1.0 / (1.0 - rho);
        column = column
            .windows(2)
            .map(|w| (w[1] - w[0] * rho) * scale)
            .collect();
    }
    let n = column.len();
    (column[n - 1], column[n - 2])
}

/// `lim_{eps -> 0+} sample(eps)` along the schedule.
///
/// `t0` is used only for error reporting.
pub fn boundary_limit<F>(
    sample: F,
    t0: f64,
    schedule: &StieltjesSchedule,
) -> Result<BoundaryEstimate<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    schedule.validate()?;
    let samples: Vec<Complex64> = schedule.offsets().map(&sample).collect();
    if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonConvergent {
            t0,
            estimate: f64::INFINITY,
            tolerance: schedule.tolerance,
        });
    }
    let (best, prev) = richardson(&samples, schedule);
    let error = (best - prev).norm();
    let allowed = schedule.tolerance * best.norm().max(1.0);
    if !(error <= allowed) {
        return Err(Error::NonConvergent {
            t0,
            estimate: error,
            tolerance: allowed,
        });
    }
    Ok(BoundaryEstimate { value: best, error })
}

/// `lim_{eps -> 0+} q(t0 + i eps)` for `t0` in `[-2, 2]`.
pub fn q_boundary_limit(
    t0: f64,
    schedule: &StieltjesSchedule,
) -> Result<BoundaryEstimate<Complex64>> {
    if !t0.is_finite() {
        return Err(Error::NonFinite("q_boundary_limit argument"));
    }
    if !on_cut(Complex64::new(t0, 0.0), 2.0) {
        return Err(Error::OffInterval {
            func: "q_boundary_limit",
            value: t0,
        });
    }
    boundary_limit(|eps| q_unchecked(Complex64::new(t0, eps)), t0, schedule)
}

/// `(1/pi) lim_{eps -> 0+} Im f(t0 + i eps)`.
///
/// This recovers the density of a real measure from its Cauchy transform
/// `f(z) = int dmu(x) / (x - z)`.
pub fn stieltjes_invert<F>(
    f: F,
    t0: f64,
    schedule: &StieltjesSchedule,
) -> Result<BoundaryEstimate<f64>>
where
    F: Fn(Complex64) -> Complex64,
{
    let est = boundary_limit(|eps| Complex64::new(f(Complex64::new(t0, eps)).im, 0.0), t0, schedule)?;
    Ok(BoundaryEstimate {
        value: est.value.re / PI,
        error: est.error / PI,
    })
}

/// `(1 / (2 pi i)) lim_{eps -> 0+} (f(t0 + i eps) - f(t0 - i eps))`.
///
/// The jump across the real axis; it equals [`stieltjes_invert`] whenever
/// `f(conj z) = conj f(z)`, and additionally recovers complex densities.
pub fn stieltjes_jump<F>(
    f: F,
    t0: f64,
    schedule: &StieltjesSchedule,
) -> Result<BoundaryEstimate<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
{
    let scale = Complex64::new(0.0, -0.5 / PI);
    let est = boundary_limit(
        |eps| (f(Complex64::new(t0, eps)) - f(Complex64::new(t0, -eps))) * scale,
        t0,
        schedule,
    )?;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{q, zeta};

    #[test]
    fn default_schedule_is_valid() {
        StieltjesSchedule::default().validate().unwrap();
    }

    #[test]
    fn schedule_floor_is_enforced() {
        let s = StieltjesSchedule {
            steps: 20,
            ..Default::default()
        };
        assert!(matches!(s.validate(), Err(Error::InvalidSchedule(_))));
        let s = StieltjesSchedule {
            ratio: 1.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn richardson_removes_polynomial_error() {
        let s = StieltjesSchedule {
            power_step: 1.0,
            extrapolation_order: 2,
            steps: 6,
            ..Default::default()
        };
        let est = boundary_limit(|e| Complex64::new(3.0 + 2.0 * e - 7.0 * e * e, e), 0.0, &s).unwrap();
        assert!((est.value - Complex64::new(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn q_limit_matches_zeta() {
        let s = StieltjesSchedule::default();
        for &t0 in &[0.0, 2.0, -2.0, 1.5, -1.999, 0.3] {
            let est = q_boundary_limit(t0, &s).unwrap();
            let z = zeta(t0).unwrap();
            assert!((est.value - z).norm() < 1e-8, "t0 = {t0}: {} vs {z}", est.value);
        }
        let v = q_boundary_limit(1.5, &s).unwrap().value;
        assert!((v - Complex64::new(0.75, -0.661_437_827_766_147_8)).norm() < 1e-8);
        assert!(q_boundary_limit(2.5, &s).is_err());
    }

    #[test]
    fn endpoints_need_half_integer_powers() {
        let s = StieltjesSchedule {
            power_step: 1.0,
            ..Default::default()
        };
        for t0 in [2.0, -2.0] {
            match q_boundary_limit(t0, &s) {
                Err(Error::NonConvergent { estimate, .. }) => assert!(estimate > 1e-5, "{estimate}"),
                other => panic!("expected stall at {t0}, got {other:?}"),
            }
        }
        let v = q_boundary_limit(1.5, &s).unwrap().value;
        assert!((v - zeta(1.5).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn point_mass_is_flagged() {
        let s = StieltjesSchedule::default();
        let r = stieltjes_invert(|z| 1.0 / (-z), 0.0, &s);
        assert!(matches!(r, Err(Error::NonConvergent { .. })));
    }

    #[test]
    fn semicircle_density_is_recovered() {
        let s = StieltjesSchedule::default();
        for &t0 in &[0.0, 0.7, -1.3, 1.9] {
            // int rho(x) / (x - z) dx = -q(z) for the standard semicircle
            let est = stieltjes_invert(|z| -q(z).unwrap(), t0, &s).unwrap();
            let density = (4.0 - t0 * t0).sqrt() / (2.0 * PI);
            assert!((est.value - density).abs() < 1e-9, "t0 = {t0}");
        }
        let at_zero = stieltjes_invert(|z| -q(z).unwrap(), 0.0, &s).unwrap();
        assert!((at_zero.value - 1.0 / PI).abs() < 1e-10);
    }

    #[test]
    fn real_constant_has_no_density() {
        let s = StieltjesSchedule::default();
        let est = stieltjes_invert(|_| Complex64::new(4.2, 0.0), 0.3, &s).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn jump_agrees_with_imaginary_part_for_real_measures() {
        let s = StieltjesSchedule::default();
        let f = |z: Complex64| -q(z).unwrap();
        let a = stieltjes_invert(f, 0.4, &s).unwrap().value;
        let b = stieltjes_jump(f, 0.4, &s).unwrap().value;
        assert!((b - Complex64::new(a, 0.0)).norm() < 1e-10);
    }
}
