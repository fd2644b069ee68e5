//! Named numerical checks, grouped into the ten acceptance criteria.
//!
//! Every check records the measured residual next to its tolerance and the
//! time it took. A criterion may produce several checks; it passes when all of
//! them pass and their combined wall time stays under [`criterion_budget_ms`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::analytic::{on_cut, q, q_boundary_limit, zeta, StieltjesSchedule};
use crate::error::{Error, Result};
use crate::fock::{
    build_model, krylov_pure_part, normal_generators, pure_part_basis, reducing_subspace_check,
    subspace_sine, ModelConfig, TruncatedFock, Variable,
};
use crate::principal::{
    det_e_closed, ellipse_curve_check, ellipse_principal, green_closed, h_extreme, h_function,
    principal_by_double_inversion, principal_function, principal_grid, EllipseCase, Rectangle,
};

pub const DEFAULT_SEED: u64 = 0x5eed_b1f4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub criterion: u8,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub wall_ms: f64,
    pub detail: String,
    /// Non-numeric conditions attached with `require`.
    pub conditions_met: bool,
}

impl Check {
    fn new(name: &str, criterion: u8, residual: f64, tolerance: f64, started: Instant) -> Self {
        Self {
            name: name.to_string(),
            criterion,
            passed: residual <= tolerance,
            residual,
            tolerance,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
            detail: String::new(),
            conditions_met: true,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Forces failure regardless of the residual (for conditions that are
    /// not naturally a single number).
    fn require(mut self, condition: bool) -> Self {
        self.conditions_met &= condition;
        self.passed &= condition;
        self
    }

    /// Re-judges the residual against a different tolerance.
    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.passed = self.conditions_met && self.residual <= tolerance;
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<24} residual {:.3e} (tol {:.1e}) {:>9.1} ms",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance,
            self.wall_ms
        )?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Analytic,
    Oracle,
    Lemma,
    Fock,
    Ellipse,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["analytic", "oracle", "lemma", "fock", "ellipse", "all"];

    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Analytic => &[1, 4, 6],
            Suite::Oracle => &[2, 3],
            Suite::Lemma => &[5],
            Suite::Fock => &[7, 8, 10],
            Suite::Ellipse => &[9],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(Suite::Analytic),
            "oracle" => Ok(Suite::Oracle),
            "lemma" => Ok(Suite::Lemma),
            "fock" => Ok(Suite::Fock),
            "ellipse" => Ok(Suite::Ellipse),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidConfig(format!(
                "unknown suite '{other}', expected one of {}",
                Suite::NAMES.join(", ")
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::Analytic => 0,
            Suite::Oracle => 1,
            Suite::Lemma => 2,
            Suite::Fock => 3,
            Suite::Ellipse => 4,
            Suite::All => 5,
        };
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Truncation depth of the Fock oracle for the accuracy checks.
    pub oracle_depth: usize,
    pub schedule: StieltjesSchedule,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            oracle_depth: 16,
            schedule: StieltjesSchedule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Applies tolerance overrides by check name; returns names that matched
    /// no check.
    pub fn override_tolerances<'a>(
        &mut self,
        overrides: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Vec<&'a str> {
        let mut unknown = Vec::new();
        for (name, tol) in overrides {
            match self.checks.iter_mut().find(|c| c.name == name) {
                Some(check) => check.set_tolerance(tol),
                None => unknown.push(name),
            }
        }
        unknown
    }
}

/// Wall-time budget of a criterion in milliseconds.
pub fn criterion_budget_ms(criterion: u8) -> f64 {
    match criterion {
        1 | 9 => 1_000.0,
        2 | 3 => 30_000.0,
        4 => 60_000.0,
        5 | 8 => 5_000.0,
        6 | 7 => 10_000.0,
        10 => 20_000.0,
        _ => f64::INFINITY,
    }
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> VerifyReport {
    let checks = suite
        .criteria()
        .iter()
        .flat_map(|&c| run_criterion(c, options))
        .collect();
    VerifyReport { suite, checks }
}

/// Runs one acceptance criterion. Errors raised along the way become failed
/// checks rather than aborting the run.
pub fn run_criterion(criterion: u8, options: &VerifyOptions) -> Vec<Check> {
    let started = Instant::now();
    let result = match criterion {
        1 => branch_checks(options),
        2 => green_checks(options),
        3 => det_e_checks(options),
        4 => stieltjes_chain_checks(options),
        5 => lemma_checks(),
        6 => figure_checks(),
        7 => pure_part_checks(),
        8 => moment_checks(options),
        9 => ellipse_checks(options),
        10 => spectrum_checks(options),
        _ => Err(Error::OutOfRange(format!("no criterion {criterion}"))),
    };
    result.unwrap_or_else(|e| {
        vec![Check::new(&format!("criterion_{criterion}"), criterion, f64::INFINITY, 0.0, started)
            .require(false)
            .with_detail(format!("error: {e}"))]
    })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(norm1, norm2, alpha)` with norms in `[0.5, 2]`, correlation in
/// `[0.1, 0.9]` and the phase of `alpha` at least 0.2 away from the real axis.
pub fn random_config(rng: &mut StdRng, unit_norm1: bool) -> ModelConfig {
    let norm1 = if unit_norm1 { 1.0 } else { rng.gen_range(0.5..2.0) };
    let norm2 = rng.gen_range(0.5..2.0);
    let r = rng.gen_range(0.1..0.9);
    let mut phi = rng.gen_range(0.2..PI - 0.2);
    if rng.gen_bool(0.5) {
        phi += PI;
    }
    ModelConfig::new(norm1, norm2, Complex64::from_polar(r * norm1 * norm2, phi))
        .expect("random config is valid by construction")
}

fn oracle_configs() -> [ModelConfig; 2] {
    [
        ModelConfig::new(1.0, 1.0, c(0.0, 0.5)).unwrap(),
        ModelConfig::new(2f64.sqrt(), 1.0, c(1.0, -1.0) / 2f64.sqrt()).unwrap(),
    ]
}

/// 25 points `(t1, t2)` on `|t1| = 3 norm1`, `|t2| = 3 norm2`, mostly close
/// to the real axis where `|q|` is largest and the truncation error decays
/// slowest.
fn oracle_points(config: &ModelConfig) -> Vec<(Complex64, Complex64)> {
    let a = [0.0, 0.12, 0.25, PI - 0.08, PI - 0.2];
    let b = [0.05, PI, 0.2, PI - 0.15, 0.0];
    (0..25)
        .map(|k| {
            (
                Complex64::from_polar(3.0 * config.norm1, a[k % 5]),
                Complex64::from_polar(3.0 * config.norm2, b[k / 5]),
            )
        })
        .collect()
}

fn branch_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = StdRng::seed_from_u64(options.seed);
    let started = Instant::now();
    let mut identity = 0.0f64;
    let mut symmetry = 0.0f64;
    let mut max_modulus = 0.0f64;
    for k in 0..10_000 {
        let re = rng.gen_range(-6.0..6.0);
        // half the samples hug the cut
        let im = if k % 2 == 0 {
            rng.gen_range(-6.0..6.0)
        } else {
            10f64.powf(rng.gen_range(-10.0..-1.0)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
        };
        let t = c(re, im);
        if on_cut(t, 2.0) {
            continue;
        }
        let qt = q(t)?;
        max_modulus = max_modulus.max(qt.norm());
        identity = identity.max((qt + 1.0 / qt - t).norm());
        symmetry = symmetry.max((q(t.conj())? - qt.conj()).norm());
    }
    let joukowski = Check::new("q_joukowski", 1, identity, 1e-12, started)
        .require(max_modulus < 1.0)
        .with_detail(format!("max |q| = {max_modulus:.15}"));
    let started = Instant::now();
    let conj = Check::new("q_conjugation", 1, symmetry, 1e-13, started);

    let started = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..101 {
        let t0 = -2.0 + 4.0 * i as f64 / 100.0;
        let est = q_boundary_limit(t0, &options.schedule)?;
        let err = (est.value - zeta(t0)?).norm();
        if err > worst.0 {
            worst = (err, t0);
        }
    }
    let boundary = Check::new("zeta_boundary_limit", 1, worst.0, 1e-8, started)
        .with_detail(format!("worst at t = {:.2}", worst.1));
    Ok(vec![joukowski, conj, boundary])
}

/// Least-squares slope of `ln e` against depth, exponentiated: the
/// per-unit-depth contraction factor.
fn contraction(depths: &[usize], errors: &[f64]) -> f64 {
    let n = depths.len() as f64;
    let xs: Vec<f64> = depths.iter().map(|&d| d as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (num / den).exp()
}

fn models(config: &ModelConfig, depths: &[usize]) -> Result<Vec<TruncatedFock>> {
    depths.iter().map(|&d| build_model(*config, d)).collect()
}

fn green_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    const RATE_DEPTHS: [usize; 4] = [8, 10, 12, 14];
    let started = Instant::now();
    let mut accuracy = 0.0f64;
    // (|ratio / rho - 1|, |ratio / rho^2 - 1|, ratio, rho) per point
    let mut rates: Vec<(f64, f64, f64, f64)> = Vec::new();
    for config in oracle_configs() {
        let oracle = build_model(config, options.oracle_depth)?;
        let truncations = models(&config, &RATE_DEPTHS)?;
        for (t1, t2) in oracle_points(&config) {
            let exact = green_closed(&config, t1, t2)?;
            accuracy = accuracy.max((oracle.green_numeric(t1, t2)? - exact).norm());
            let errors = truncations
                .iter()
                .map(|m| Ok((m.green_numeric(t1, t2)? - exact).norm()))
                .collect::<Result<Vec<f64>>>()?;
            let ratio = contraction(&RATE_DEPTHS, &errors);
            let rho = q(t1 / config.norm1)?.norm().max(q(t2 / config.norm2)?.norm());
            rates.push(((ratio / rho - 1.0).abs(), (ratio / (rho * rho) - 1.0).abs(), ratio, rho));
        }
    }
    let acc = Check::new("green_oracle", 2, accuracy, 1e-5, started)
        .with_detail(format!("N = {}, 50 points", options.oracle_depth));
    let worst = |pick: fn(&(f64, f64, f64, f64)) -> f64| {
        rates
            .iter()
            .copied()
            .max_by(|a, b| pick(a).total_cmp(&pick(b)))
            .expect("non-empty")
    };
    let w = worst(|r| r.0);
    let literal = Check::new("green_rate", 2, w.0, 0.25, Instant::now()).with_detail(format!(
        "per-depth ratio {:.4} vs rho {:.4}",
        w.2, w.3
    ));
    // where |q(t1)| and |q(t2)| nearly coincide the two geometric terms
    // interfere and single-point fits wander, so this reports the median
    let mut relative: Vec<f64> = rates.iter().map(|r| r.2 / (r.3 * r.3)).collect();
    relative.sort_by(f64::total_cmp);
    let median = 0.5 * (relative[relative.len() / 2] + relative[(relative.len() - 1) / 2]);
    let squared = Check::new("green_rate_squared", 2, (median - 1.0).abs(), 0.25, Instant::now())
        .with_detail(format!(
            "median per-depth ratio / rho^2 = {median:.4} (range {:.3}..{:.3})",
            relative[0],
            relative[relative.len() - 1]
        ));
    Ok(vec![acc, literal, squared])
}

fn det_e_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    let started = Instant::now();
    let mut accuracy = 0.0f64;
    for config in oracle_configs() {
        let oracle = build_model(config, options.oracle_depth)?;
        for (s, l) in oracle_points(&config) {
            let diff = oracle.det_e_numeric(l, s)? - det_e_closed(&config, l, s)?;
            accuracy = accuracy.max(diff.norm());
        }
    }
    let acc = Check::new("det_e_oracle", 3, accuracy, 1e-5, started)
        .with_detail(format!("N = {}, 50 points", options.oracle_depth));

    let started = Instant::now();
    let mut real = 0.0f64;
    for config in [
        ModelConfig::new(1.0, 1.0, c(0.5, 0.0))?,
        ModelConfig::new(1.3, 0.7, c(-0.4, 0.0))?,
    ] {
        let model = build_model(config, 8)?;
        for (s, l) in oracle_points(&config) {
            real = real.max((det_e_closed(&config, l, s)? - 1.0).norm());
            real = real.max((model.det_e_numeric(l, s)? - 1.0).norm());
        }
    }
    let real = Check::new("det_e_real_alpha", 3, real, 1e-14, started);
    Ok(vec![acc, real])
}

fn stieltjes_chain_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    let started = Instant::now();
    let config = ModelConfig::new(1.0, 1.0, c(0.0, 0.5))?;
    let mut worst = (0.0f64, 0.0, 0.0);
    for i in 0..21 {
        let gamma = 1.8 * config.norm1 * (2.0 * i as f64 - 20.0) / 20.0;
        for j in 0..21 {
            let delta = 1.8 * config.norm2 * (2.0 * j as f64 - 20.0) / 20.0;
            let est = principal_by_double_inversion(
                &config,
                delta,
                gamma,
                &options.schedule,
                &options.schedule,
            )?;
            let err = (est.value - principal_function(&config, delta, gamma)?).abs();
            if err > worst.0 {
                worst = (err, delta, gamma);
            }
        }
    }
    Ok(vec![Check::new("stieltjes_chain", 4, worst.0, 1e-3, started).with_detail(format!(
        "worst at (delta, gamma) = ({:.2}, {:.2})",
        worst.1, worst.2
    ))])
}

fn lemma_checks() -> Result<Vec<Check>> {
    const N: usize = 200;
    let started = Instant::now();
    let cell = PI / (N - 1) as f64;
    let theta = |i: usize| -PI * i as f64 / (N - 1) as f64;
    let mut sign = 0.0f64;
    let mut bound = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut edge = 0.0f64;
    let mut interior_min = f64::INFINITY;
    let mut argmax_offset = 0.0f64;
    for &r in &[0.3, 0.7] {
        for &phi in &[PI / 3.0, 1.5 * PI] {
            let extreme = h_extreme(r, phi)?.abs();
            let s = phi.sin().signum();
            let mut best = (0.0f64, 0usize, 0usize);
            for i in 0..N {
                for j in 0..N {
                    let h = h_function(r, phi, theta(i), theta(j))?;
                    // the sign of h must be -sign(sin phi) (or h = 0)
                    sign = sign.max(h * s);
                    let excess = h.abs() - extreme;
                    if excess > bound.0 {
                        bound = (excess, theta(i), theta(j));
                    }
                    if i == 0 || j == 0 || i == N - 1 || j == N - 1 {
                        edge = edge.max(h.abs());
                    } else {
                        interior_min = interior_min.min(h.abs());
                    }
                    if h.abs() > best.0 {
                        best = (h.abs(), i, j);
                    }
                }
            }
            let off = (theta(best.1) + FRAC_PI_2).abs().max((theta(best.2) + FRAC_PI_2).abs());
            argmax_offset = argmax_offset.max(off / cell);
        }
    }
    let wall = started;
    Ok(vec![
        Check::new("lemma_sign", 5, sign.max(0.0), 1e-12, wall),
        Check::new("lemma_bound", 5, bound.0.max(0.0), 1e-12, wall).with_detail(format!(
            "max |h| - |extreme| = {:.3e} at (theta1, theta2) = ({:.4}, {:.4})",
            bound.0, bound.1, bound.2
        )),
        Check::new("lemma_boundary_zero", 5, edge, 1e-12, wall)
            .require(interior_min > 1e-12)
            .with_detail(format!("smallest interior |h| = {interior_min:.3e}")),
        Check::new("lemma_argmax", 5, argmax_offset, 1.0, wall)
            .with_detail("distance of argmax |h| from (-pi/2, -pi/2) in cells"),
    ])
}

fn figure_checks() -> Result<Vec<Check>> {
    let config = oracle_configs()[1];
    let started = Instant::now();
    let grid = principal_grid(&config, 101, 101)?;
    let expected = 2.0 / PI * 2f64.atan();
    let max = Check::new("figure_max", 6, (grid.max - expected).abs(), 1e-6, started)
        .require(grid.argmax == (0.0, 0.0))
        .with_detail(format!(
            "max {:.10} at (delta, gamma) = ({}, {})",
            grid.max, grid.argmax.0, grid.argmax.1
        ));
    let below = grid.values.iter().flatten().fold(0.0f64, |m, &v| m.max(-v));
    let range = Check::new("figure_range", 6, below, 0.0, started)
        .require(grid.max < 1.0)
        .with_detail(format!("min {:.3e}, max {:.6}", grid.min, grid.max));
    let boundary = Check::new("figure_boundary", 6, grid.boundary_max(), 1e-12, started);

    let started = Instant::now();
    let model = build_model(config, 8)?;
    let coefficient = 4.0 * config.inner21().im;
    let commutator = Check::new(
        "figure_commutator",
        6,
        model.self_commutator_defect(coefficient),
        1e-13,
        started,
    )
    .with_detail(format!("[T, T*] = {coefficient:.6} P at N = 8"));
    Ok(vec![max, range, boundary, commutator])
}

fn pure_part_checks() -> Result<Vec<Check>> {
    let started = Instant::now();
    let mut spans = 0.0f64;
    let mut orthogonal = 0.0f64;
    let mut reducing = 0.0f64;
    for config in [
        ModelConfig::new(1.0, 1.2, c(0.3, -0.5))?,
        ModelConfig::new(1.0, 0.8, c(-0.2, 0.6))?,
    ] {
        let model = build_model(config, 6)?;
        let krylov = krylov_pure_part(&model, 4)?;
        for n in 1..=4 {
            let level = krylov.level_component(n);
            let (b, b_prime) = pure_part_basis(&model, n)?;
            spans = spans
                .max(subspace_sine(&level, &b.vectors))
                .max(subspace_sine(&level, &b_prime.vectors));
        }
        for (_, _, g) in normal_generators(&model, 4)? {
            orthogonal = orthogonal.max(krylov.projection_ratio(&g));
        }
        for (m, n) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            reducing = reducing.max(reducing_subspace_check(&model, m, n)?.max_residual());
        }
    }
    Ok(vec![
        Check::new("pure_part_spans", 7, spans, 1e-10, started)
            .with_detail("largest principal-angle sine, levels 1..4"),
        Check::new("normal_orthogonality", 7, orthogonal, 1e-10, started),
        Check::new("reducing_subspace", 7, reducing, 1e-10, started),
    ])
}

fn moment_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    use Variable::{X1, X2};
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(options.seed ^ 8);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let config = random_config(&mut rng, false);
        let model = build_model(config, 6)?;
        let n1 = config.norm1 * config.norm1;
        let n2 = config.norm2 * config.norm2;
        let expected = [
            (vec![X1, X1], c(n1, 0.0)),
            (vec![X2, X2], c(n2, 0.0)),
            (vec![X1, X2], config.inner21()),
            (vec![X1, X1, X1, X1], c(2.0 * n1 * n1, 0.0)),
            (vec![X1], c(0.0, 0.0)),
            (vec![X2], c(0.0, 0.0)),
            (vec![X1, X2, X1], c(0.0, 0.0)),
            (vec![X2, X2, X2], c(0.0, 0.0)),
            (vec![X1, X1, X2], c(0.0, 0.0)),
            (vec![X1, X2, X1, X2, X2], c(0.0, 0.0)),
        ];
        for (word, value) in expected {
            worst = worst.max((model.vacuum_expectation(&word)? - value).norm());
        }
    }
    Ok(vec![Check::new("moments", 8, worst, 1e-12, started).with_detail("N = 6, 5 random configs")])
}

fn ellipse_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(options.seed ^ 9);
    let mut residual = 0.0f64;
    let mut indicator_ok = true;
    for _ in 0..10 {
        let im = rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let case = EllipseCase::new(c(rng.gen_range(-2.0..2.0), im), 1.0)?;
        residual = residual.max(ellipse_curve_check(&case, 360)?);
        let expected = if im > 0.0 { -1 } else { 1 };
        indicator_ok &= ellipse_principal(&case, c(0.0, 0.0))? == expected;
    }
    let curve = Check::new("ellipse_curve", 9, residual, 1e-12, started);

    let started = Instant::now();
    let circle = EllipseCase::new(c(0.0, 1.0), 1.0)?;
    indicator_ok &= ellipse_principal(&circle, c(0.0, 0.0))? == -1;
    indicator_ok &= ellipse_principal(&circle, c(3.0, 0.0))? == 0;
    indicator_ok &= ellipse_principal(&EllipseCase::new(c(0.0, -1.0), 1.0)?, c(0.0, 0.0))? == 1;
    let indicator = Check::new("ellipse_indicator", 9, 0.0, 0.0, started).require(indicator_ok);

    let started = Instant::now();
    let radius = (0..360)
        .map(|k| {
            let p = circle.curve_point(Complex64::from_polar(1.0, k as f64 * PI / 180.0));
            (p.norm_sqr() - 4.0).abs()
        })
        .fold(0.0, f64::max);
    let circle = Check::new("ellipse_circle", 9, radius, 1e-12, started)
        .with_detail("alpha = i traces x^2 + y^2 = 4");
    Ok(vec![curve, indicator, circle])
}

fn spectrum_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(options.seed ^ 10);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let config = random_config(&mut rng, false);
        let rect = Rectangle::of(&config);
        for z in build_model(config, 8)?.t_eigenvalues()? {
            worst = worst.max(rect.violation(z));
        }
    }
    Ok(vec![Check::new("spectrum_containment", 10, worst, 1e-10, started)
        .with_detail("N = 8, 5 random configs")])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn contraction_of_exact_geometric_sequence() {
        let errors: Vec<f64> = [8, 10, 12, 14].iter().map(|&n| 3.0 * 0.4f64.powi(n)).collect();
        assert!((contraction(&[8, 10, 12, 14], &errors) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn random_configs_stay_in_range() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..100 {
            let k = random_config(&mut rng, true);
            assert_eq!(k.norm1, 1.0);
            let r = k.correlation();
            assert!((0.1..=0.9).contains(&(r + 1e-12)) && k.is_nonnormal());
        }
    }

    #[test]
    fn tolerance_override_keeps_conditions() {
        let started = Instant::now();
        let mut report = VerifyReport {
            suite: Suite::All,
            checks: vec![
                Check::new("a", 1, 0.5, 0.1, started),
                Check::new("b", 1, 0.0, 0.1, started).require(false),
            ],
        };
        let unknown = report.override_tolerances([("a", 1.0), ("b", 1.0), ("zzz", 1.0)]);
        assert_eq!(unknown, vec!["zzz"]);
        assert!(report.checks[0].passed);
        assert!(!report.checks[1].passed);
    }

    #[test]
    fn unknown_criterion_is_a_failed_check() {
        let checks = run_criterion(11, &VerifyOptions::default());
        assert_eq!(checks.len(), 1);
        assert!(!checks[0].passed);
    }
}
