//! Closed-form pipeline: Green's function, `det E`, the intermediate
//! transform `f(l, gamma)` and the principal function `g(delta, gamma)`.
//!
//! Throughout, `a = alpha / (norm1 norm2)`, `Q_s = q(s / norm1)`,
//! `Q_l = q(l / norm2)` and `zeta_gamma = zeta(gamma / norm1)`. The library
//! stores `alpha = <v1, v2>` and uses `<v2, v1> = conj(alpha)` wherever the
//! latter appears.

mod ellipse;
mod grid;
mod lemma;

pub use ellipse::{ellipse_curve_check, ellipse_principal, EllipseCase};
pub use grid::{principal_grid, PrincipalGrid};
pub use lemma::{h_extreme, h_function};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    arg, arg_0_2pi, ensure_finite, log, on_cut, q_unchecked, stieltjes_invert, stieltjes_jump,
    zeta_unchecked, BoundaryEstimate, StieltjesSchedule,
};
use crate::error::{Error, Result};
use crate::fock::ModelConfig;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn scaled_q(t: Complex64, norm: f64, name: &'static str) -> Result<Complex64> {
    ensure_finite(t, name)?;
    let x = t / norm;
    if on_cut(x, 2.0) {
        return Err(Error::OnCut {
            func: name,
            re: t.re,
            im: t.im,
        });
    }
    Ok(q_unchecked(x))
}

fn scaled_zeta(x: f64, norm: f64, name: &'static str) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(name));
    }
    let t = x / norm;
    if t.abs() > 2.0 + crate::analytic::CUT_TOL {
        return Err(Error::OffInterval { func: name, value: x });
    }
    Ok(zeta_unchecked(t.clamp(-2.0, 2.0)))
}

fn require_independent(config: &ModelConfig) -> Result<()> {
    config.validate()?;
    if config.is_independent() {
        Ok(())
    } else {
        Err(Error::LinearlyDependent)
    }
}

fn normalized_alpha(config: &ModelConfig) -> Complex64 {
    config.alpha / (config.norm1 * config.norm2)
}

/// `G(t1, t2) = phi((t1 - X1)^-1 (t2 - X2)^-1) = z w / (1 - <v2, v1> z w)`
/// with `z = q(t1/norm1)/norm1`, `w = q(t2/norm2)/norm2`.
pub fn green_closed(config: &ModelConfig, t1: Complex64, t2: Complex64) -> Result<Complex64> {
    config.validate()?;
    let z = scaled_q(t1, config.norm1, "green_closed t1")? / config.norm1;
    let w = scaled_q(t2, config.norm2, "green_closed t2")? / config.norm2;
    let zw = z * w;
    Ok(zw / (one() - config.inner21() * zw))
}

/// `R(z, w) = norm1^2 z^2 + norm2^2 w^2 + <v2, v1> z w`.
pub fn partial_r_transform(config: &ModelConfig, z: Complex64, w: Complex64) -> Complex64 {
    config.norm1 * config.norm1 * z * z + config.norm2 * config.norm2 * w * w + config.inner21() * z * w
}

/// `(Log(1 - conj(a) Q_s Q_l), Log(1 - a Q_s Q_l))`.
fn det_e_factors(config: &ModelConfig, l: Complex64, s: Complex64) -> Result<(Complex64, Complex64)> {
    require_independent(config)?;
    let qs = scaled_q(s, config.norm1, "det_e s")?;
    let ql = scaled_q(l, config.norm2, "det_e l")?;
    let a = normalized_alpha(config);
    let prod = qs * ql;
    Ok((one() - a.conj() * prod, one() - a * prod))
}

/// `det E(l, s) = (1 - conj(a) Q_s Q_l) / (1 - a Q_s Q_l)`.
pub fn det_e_closed(config: &ModelConfig, l: Complex64, s: Complex64) -> Result<Complex64> {
    let (num, den) = det_e_factors(config, l, s)?;
    Ok(num / den)
}

/// Continuous logarithm of [`det_e_closed`]: `Log(num) - Log(den)`. Both
/// factors stay in the disk of radius 1 about 1, so this is analytic on the
/// whole domain (unlike `Log` of the ratio).
pub fn log_det_e_closed(config: &ModelConfig, l: Complex64, s: Complex64) -> Result<Complex64> {
    let (num, den) = det_e_factors(config, l, s)?;
    Ok(log(num) - log(den))
}

/// `f(l, gamma) = int g(delta, gamma) d delta / (delta - l)`:
///
/// ```text
/// Log(1 - conj(a) zeta Q_l) + Log(1 - a conj(zeta) Q_l)
///   - Log(1 - a zeta Q_l) - Log(1 - conj(a) conj(zeta) Q_l)
/// ```
pub fn f_closed(config: &ModelConfig, l: Complex64, gamma: f64) -> Result<Complex64> {
    require_independent(config)?;
    let zg = scaled_zeta(gamma, config.norm1, "f_closed gamma")?;
    let ql = scaled_q(l, config.norm2, "f_closed l")?;
    let a = normalized_alpha(config);
    let term = |coef: Complex64, z: Complex64| log(one() - coef * z * ql);
    Ok(term(a.conj(), zg) + term(a, zg.conj()) - term(a, zg) - term(a.conj(), zg.conj()))
}

/// `(r, phi, theta1, theta2)` with `alpha / (norm1 norm2) = r e^{i phi}`,
/// `zeta(gamma/norm1) = e^{i theta1}`, `zeta(delta/norm2) = e^{i theta2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub r: f64,
    /// In `[0, 2 pi)`.
    pub phi: f64,
    /// In `[-pi, 0]`.
    pub theta1: f64,
    /// In `[-pi, 0]`.
    pub theta2: f64,
}

impl PolarForm {
    pub fn new(config: &ModelConfig, delta: f64, gamma: f64) -> Result<Self> {
        require_independent(config)?;
        let t1 = gamma / config.norm1;
        let t2 = delta / config.norm2;
        for (t, x) in [(t1, gamma), (t2, delta)] {
            if !t.is_finite() {
                return Err(Error::NonFinite("polar form coordinate"));
            }
            if t.abs() > 2.0 + crate::analytic::CUT_TOL {
                return Err(Error::OffInterval {
                    func: "PolarForm",
                    value: x,
                });
            }
        }
        let a = normalized_alpha(config);
        // zeta(t) = e^{i theta} with cos(theta) = t/2 and sin(theta) <= 0
        Ok(Self {
            r: a.norm(),
            phi: arg_0_2pi(a),
            theta1: -(0.5 * t1).clamp(-1.0, 1.0).acos(),
            theta2: -(0.5 * t2).clamp(-1.0, 1.0).acos(),
        })
    }
}

fn principal_guard(config: &ModelConfig, delta: f64, gamma: f64) -> Result<bool> {
    require_independent(config)?;
    if !config.is_nonnormal() {
        return Err(Error::Normal);
    }
    if !(delta.is_finite() && gamma.is_finite()) {
        return Err(Error::NonFinite("principal function coordinate"));
    }
    // outside the open rectangle, including its boundary, g vanishes
    Ok(gamma.abs() < 2.0 * config.norm1 && delta.abs() < 2.0 * config.norm2)
}

/// The principal function `g(delta, gamma)` in its four-`Arg` form:
///
/// ```text
/// pi g = Arg(1 - conj(a) z1 z2) + Arg(1 - a conj(z1) z2)
///      - Arg(1 - a z1 z2) - Arg(1 - conj(a) conj(z1) z2)
/// ```
///
/// with `z1 = zeta(gamma/norm1)`, `z2 = zeta(delta/norm2)`. Returns 0 on the
/// boundary of and outside the rectangle `|gamma| <= 2 norm1, |delta| <= 2 norm2`.
pub fn principal_function(config: &ModelConfig, delta: f64, gamma: f64) -> Result<f64> {
    if !principal_guard(config, delta, gamma)? {
        return Ok(0.0);
    }
    let z1 = zeta_unchecked(gamma / config.norm1);
    let z2 = zeta_unchecked(delta / config.norm2);
    let a = normalized_alpha(config);
    let t = |coef: Complex64, z: Complex64| arg(one() - coef * z * z2);
    Ok((t(a.conj(), z1) + t(a, z1.conj()) - t(a, z1) - t(a.conj(), z1.conj())) / PI)
}

/// The same function through the arctan form [`h_function`] of the polar
/// coordinates.
pub fn principal_function_arctan(config: &ModelConfig, delta: f64, gamma: f64) -> Result<f64> {
    if !principal_guard(config, delta, gamma)? {
        return Ok(0.0);
    }
    let p = PolarForm::new(config, delta, gamma)?;
    h_function(p.r, p.phi, p.theta1, p.theta2)
}

/// `f(l, gamma)` recovered from `2 pi i Log det E(l, s)` by the boundary jump
/// in `s` across `gamma`.
pub fn f_by_inversion(
    config: &ModelConfig,
    l: Complex64,
    gamma: f64,
    schedule: &StieltjesSchedule,
) -> Result<BoundaryEstimate<Complex64>> {
    require_independent(config)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    stieltjes_jump(
        |s| {
            log_det_e_closed(config, l, s)
                .map(|v| two_pi_i * v)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        },
        gamma,
        schedule,
    )
}

/// `g(delta, gamma) = (1/pi) lim Im f(delta + i eps, gamma)` using [`f_closed`].
pub fn principal_by_inversion(
    config: &ModelConfig,
    delta: f64,
    gamma: f64,
    schedule: &StieltjesSchedule,
) -> Result<BoundaryEstimate<f64>> {
    principal_guard(config, delta, gamma)?;
    stieltjes_invert(
        |l| f_closed(config, l, gamma).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        delta,
        schedule,
    )
}

/// `g(delta, gamma)` from `det E` alone: the jump in `s` gives `f(l, gamma)`,
/// then the imaginary boundary value in `l` gives `g`.
pub fn principal_by_double_inversion(
    config: &ModelConfig,
    delta: f64,
    gamma: f64,
    inner: &StieltjesSchedule,
    outer: &StieltjesSchedule,
) -> Result<BoundaryEstimate<f64>> {
    principal_guard(config, delta, gamma)?;
    stieltjes_invert(
        |l| {
            f_by_inversion(config, l, gamma, inner)
                .map(|e| e.value)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        },
        delta,
        outer,
    )
}

/// Whether `point` lies in the closed rectangle
/// `|Re| <= 2 norm1, |Im| <= 2 norm2`, the essential spectrum of `T`.
pub fn essential_spectrum_contains(config: &ModelConfig, point: Complex64) -> Result<bool> {
    require_independent(config)?;
    if !config.is_nonnormal() {
        return Err(Error::Normal);
    }
    ensure_finite(point, "spectrum point")?;
    Ok(point.re.abs() <= 2.0 * config.norm1 && point.im.abs() <= 2.0 * config.norm2)
}

/// Half-widths of the spectral rectangle `[-2 norm1, 2 norm1] + i[-2 norm2, 2 norm2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub gamma_max: f64,
    pub delta_max: f64,
}

impl Rectangle {
    pub fn of(config: &ModelConfig) -> Self {
        Self {
            gamma_max: 2.0 * config.norm1,
            delta_max: 2.0 * config.norm2,
        }
    }

    /// How far `point` lies outside the closed rectangle (0 if inside).
    pub fn violation(&self, point: Complex64) -> f64 {
        (point.re.abs() - self.gamma_max)
            .max(point.im.abs() - self.delta_max)
            .max(0.0)
    }
}
