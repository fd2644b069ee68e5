use std::f64::consts::PI;

use crate::error::{Error, Result};

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("r must lie in (0, 1), got {r}")))
    }
}

/// `arctan(r sin x / (1 - r cos x))`, i.e. `-Arg(1 - r e^{ix})`.
#[inline]
fn tilt(r: f64, x: f64) -> f64 {
    (r * x.sin() / (1.0 - r * x.cos())).atan()
}

/// The four-arctan combination
///
/// ```text
/// h = (1/pi) ( A(phi - nu) + A(phi + nu) - A(phi - mu) - A(phi + mu) )
/// ```
///
/// with `nu = theta1 + theta2`, `mu = theta1 - theta2` and
/// `A(x) = arctan(r sin x / (1 - r cos x))`.
pub fn h_function(r: f64, phi: f64, theta1: f64, theta2: f64) -> Result<f64> {
    check_r(r)?;
    let nu = theta1 + theta2;
    let mu = theta1 - theta2;
    Ok((tilt(r, phi - nu) + tilt(r, phi + nu) - tilt(r, phi - mu) - tilt(r, phi + mu)) / PI)
}

/// Value of [`h_function`] at `theta1 = theta2 = -pi/2`:
/// `-(2/pi) arctan(2 r sin(phi) / (1 - r^2))`.
pub fn h_extreme(r: f64, phi: f64) -> Result<f64> {
    check_r(r)?;
    Ok(-2.0 / PI * (2.0 * r * phi.sin() / (1.0 - r * r)).atan())
}
