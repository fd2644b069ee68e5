use std::fmt::Write as _;
use std::io::Write;

use bifree_core::fock::build_model;
use bifree_core::principal::{
    ellipse_curve_check, ellipse_principal, principal_grid, EllipseCase, PrincipalGrid, Rectangle,
};
use bifree_core::verify::{run_suite, Suite, VerifyOptions, VerifyReport};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Eigenvalues may leave the rectangle by at most this much.
const SPECTRUM_MARGIN: f64 = 1e-8;

#[derive(Debug)]
pub struct CommandError {
    pub code: u8,
    pub message: String,
}

impl CommandError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

/// Writes to the configured output path, or standard output.
fn emit(run: &RunConfig, text: &str) -> Result<(), CommandError> {
    match &run.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CommandError::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CommandError::io(format!("cannot write to standard output: {e}")))
        }
    }
}

/// Model parameters as they appear in the configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub norm1: f64,
    pub norm2: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub n_gamma: usize,
    pub n_delta: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub config: ConfigEcho,
    pub grid: PrincipalGrid,
}

pub fn grid_csv(grid: &PrincipalGrid) -> String {
    let mut s = String::with_capacity(64 * grid.gamma_axis.len() * grid.delta_axis.len() + 16);
    s.push_str("gamma,delta,g\n");
    for (row, gamma) in grid.values.iter().zip(&grid.gamma_axis) {
        for (g, delta) in row.iter().zip(&grid.delta_axis) {
            // 17 significant digits round-trip every f64
            let _ = writeln!(s, "{gamma:.16e},{delta:.16e},{g:.16e}");
        }
    }
    s
}

pub fn cmd_grid(run: &RunConfig) -> Result<u8, CommandError> {
    if !run.model.is_independent() {
        return Err(CommandError::invalid(
            "v1 and v2 are linearly dependent; the principal function is the ellipse indicator (see `spectrum`)",
        ));
    }
    let grid = principal_grid(&run.model, run.n_gamma, run.n_delta)
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    let text = match run.format {
        Format::Csv => grid_csv(&grid),
        Format::Json => {
            let doc = GridDocument {
                config: ConfigEcho {
                    norm1: run.model.norm1,
                    norm2: run.model.norm2,
                    alpha_re: run.model.alpha.re,
                    alpha_im: run.model.alpha.im,
                    n_gamma: run.n_gamma,
                    n_delta: run.n_delta,
                },
                grid,
            };
            let mut t = serde_json::to_string_pretty(&doc).expect("grid serializes");
            t.push('\n');
            t
        }
    };
    emit(run, &text)?;
    Ok(EXIT_OK)
}

fn report_csv(report: &VerifyReport) -> String {
    let mut s = String::from("criterion,name,status,residual,tolerance,wall_ms,detail\n");
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{},{},{},{:.6e},{:.3e},{:.1},\"{}\"",
            c.criterion,
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.residual,
            c.tolerance,
            c.wall_ms,
            c.detail.replace('"', "'")
        );
    }
    s
}

pub fn cmd_verify(run: &RunConfig, suite: Suite, seed: Option<u64>) -> Result<u8, CommandError> {
    let mut options = VerifyOptions {
        oracle_depth: run.depth,
        ..VerifyOptions::default()
    };
    if let Some(seed) = seed.or(run.seed) {
        options.seed = seed;
    }
    let mut report = run_suite(suite, &options);
    let unknown = report.override_tolerances(run.tolerances.iter().map(|(k, v)| (k.as_str(), *v)));
    if !unknown.is_empty() {
        return Err(CommandError::invalid(format!(
            "tolerance overrides name unknown checks: {}",
            unknown.join(", ")
        )));
    }
    let text = match run.format {
        Format::Csv => report_csv(&report),
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&report).expect("report serializes");
            t.push('\n');
            t
        }
    };
    emit(run, &text)?;
    for c in report.failures() {
        eprintln!("failed: {c}");
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILED })
}

/// Semi-axes of `x^2 + |l|^2 y^2 - 2 Re(l) x y = 4 Im(l)^2`, scaled by `norm2`.
fn ellipse_axes(case: &EllipseCase) -> (f64, f64) {
    let l = case.alpha_dep;
    // eigenvalues of [[1, -Re l], [-Re l, |l|^2]]
    let tr = 1.0 + l.norm_sqr();
    let det = l.im * l.im;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let (big, small) = (0.5 * (tr + disc), 0.5 * (tr - disc));
    let r = 2.0 * l.im.abs() * case.norm2;
    (r / small.sqrt(), r / big.sqrt())
}

pub fn cmd_spectrum(run: &RunConfig) -> Result<u8, CommandError> {
    let mut out = String::new();
    let model = &run.model;
    let _ = writeln!(
        out,
        "config: norm1 = {}, norm2 = {}, alpha = {} {:+}i",
        model.norm1, model.norm2, model.alpha.re, model.alpha.im
    );
    if !model.is_independent() {
        let case = EllipseCase::from_config(model).map_err(|e| CommandError::invalid(e.to_string()))?;
        let (a, b) = ellipse_axes(&case);
        let residual = ellipse_curve_check(&case, 360).map_err(|e| CommandError::invalid(e.to_string()))?;
        let center = ellipse_principal(&case, Complex64::new(0.0, 0.0))
            .map_err(|e| CommandError::invalid(e.to_string()))?;
        let _ = writeln!(out, "mode: ellipse (v1 = lambda v2, lambda = {} {:+}i)", case.alpha_dep.re, case.alpha_dep.im);
        if (a - b).abs() <= 1e-12 * a {
            let _ = writeln!(out, "essential spectrum: circle of radius {a}");
        } else {
            let _ = writeln!(out, "essential spectrum: ellipse with semi-axes {a}, {b}");
        }
        let _ = writeln!(out, "principal function inside: {center}");
        let _ = writeln!(out, "curve residual: {residual:e}");
        emit(run, &out)?;
        return Ok(if residual <= 1e-12 { EXIT_OK } else { EXIT_FAILED });
    }

    let rect = Rectangle::of(model);
    let _ = writeln!(
        out,
        "rectangle: [{}, {}] + i[{}, {}]",
        -rect.gamma_max, rect.gamma_max, -rect.delta_max, rect.delta_max
    );
    let eigenvalues = build_model(*model, run.depth)
        .and_then(|m| m.t_eigenvalues())
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    let (worst, at) = eigenvalues
        .iter()
        .map(|z| (rect.violation(*z), *z))
        .fold((0.0f64, Complex64::new(0.0, 0.0)), |acc, x| if x.0 > acc.0 { x } else { acc });
    let _ = writeln!(out, "depth: {}", run.depth);
    let _ = writeln!(out, "eigenvalues: {}", eigenvalues.len());
    let extent = |f: fn(&Complex64) -> f64| eigenvalues.iter().map(f).fold(0.0f64, f64::max);
    let _ = writeln!(
        out,
        "extent: |Re| <= {}, |Im| <= {}",
        extent(|z| z.re.abs()),
        extent(|z| z.im.abs())
    );
    let _ = writeln!(out, "max violation: {worst:e} at {} {:+}i", at.re, at.im);
    let ok = worst <= SPECTRUM_MARGIN;
    let _ = writeln!(out, "containment: {}", if ok { "pass" } else { "fail" });
    emit(run, &out)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_axes() {
        let case = EllipseCase::new(Complex64::new(0.0, 1.0), 1.0).unwrap();
        let (a, b) = ellipse_axes(&case);
        assert!((a - 2.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_axes_match_curve() {
        let case = EllipseCase::new(Complex64::new(0.7, -0.4), 1.5).unwrap();
        let (a, b) = ellipse_axes(&case);
        let radii: Vec<f64> = (0..3600)
            .map(|k| (case.curve_point(Complex64::from_polar(1.0, k as f64 * 1e-3 * std::f64::consts::TAU / 3.6)) * 1.5).norm())
            .collect();
        let max = radii.iter().cloned().fold(0.0, f64::max);
        let min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((max - a).abs() < 1e-5 && (min - b).abs() < 1e-5);
    }
}
