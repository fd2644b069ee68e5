use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::principal_function;
use crate::error::{Error, Result};
use crate::fock::ModelConfig;

pub const MIN_GRID: usize = 3;

/// `g(delta, gamma)` sampled on a uniform lattice over the closed rectangle.
/// `values[i][j]` holds `g(delta_axis[j], gamma_axis[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalGrid {
    pub config: ModelConfig,
    pub gamma_axis: Vec<f64>,
    pub delta_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub min: f64,
    pub max: f64,
    /// `(delta, gamma)` of the largest value.
    pub argmax: (f64, f64),
}

/// `n` points from `-half` to `half`, exactly symmetric, with 0 in the middle
/// for odd `n`.
pub(crate) fn symmetric_axis(half: f64, n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n).map(|i| half * (2.0 * i as f64 - m) / m).collect()
}

pub fn principal_grid(config: &ModelConfig, n_gamma: usize, n_delta: usize) -> Result<PrincipalGrid> {
    if n_gamma < MIN_GRID || n_delta < MIN_GRID {
        return Err(Error::OutOfRange(format!(
            "grid must be at least {MIN_GRID}x{MIN_GRID}, got {n_gamma}x{n_delta}"
        )));
    }
    // surfaces the Normal / LinearlyDependent errors before any work
    principal_function(config, 0.0, 0.0)?;
    let gamma_axis = symmetric_axis(2.0 * config.norm1, n_gamma);
    let delta_axis = symmetric_axis(2.0 * config.norm2, n_delta);
    let values = gamma_axis
        .par_iter()
        .map(|&gamma| {
            delta_axis
                .iter()
                .map(|&delta| principal_function(config, delta, gamma))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut argmax = (0.0, 0.0);
    for (row, &gamma) in values.iter().zip(&gamma_axis) {
        for (&v, &delta) in row.iter().zip(&delta_axis) {
            min = min.min(v);
            if v > max {
                max = v;
                argmax = (delta, gamma);
            }
        }
    }
    Ok(PrincipalGrid {
        config: *config,
        gamma_axis,
        delta_axis,
        values,
        min,
        max,
        argmax,
    })
}

impl PrincipalGrid {
    /// Largest `|g|` over the first and last row and column.
    pub fn boundary_max(&self) -> f64 {
        let rows = self.values.len();
        let cols = self.delta_axis.len();
        let mut m = 0.0f64;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == 0 || j == 0 || i + 1 == rows || j + 1 == cols {
                    m = m.max(v.abs());
                }
            }
        }
        m
    }

    /// Node `(i, j)` as the spectral point `gamma + i delta`.
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.gamma_axis[i], self.delta_axis[j])
    }
}
