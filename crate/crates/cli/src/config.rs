use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use bifree_core::fock::ModelConfig;
use bifree_core::principal::Rectangle;
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const MIN_DEPTH: usize = 2;
pub const MAX_DEPTH: usize = 16;
pub const MIN_GRID: usize = 3;
pub const MAX_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// The flat configuration file. Every key is optional; command-line flags
/// take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub norm1: Option<f64>,
    pub norm2: Option<f64>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub depth: Option<usize>,
    pub n_gamma: Option<usize>,
    pub n_delta: Option<usize>,
    pub format: Option<Format>,
    pub gamma_max: Option<f64>,
    pub delta_max: Option<f64>,
    pub seed: Option<u64>,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat TOML file with keys norm1, norm2, alpha_re, alpha_im, depth,
    /// n_gamma, n_delta, format
    #[arg(long, value_name = "PATH", global = true)]
    pub config: Option<PathBuf>,
    /// Fock-space truncation depth N (2..=16)
    #[arg(long, value_name = "N", global = true)]
    pub depth: Option<usize>,
    /// Output file (standard output if omitted)
    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub norm1: Option<f64>,
    #[arg(long, global = true)]
    pub norm2: Option<f64>,
    #[arg(long, allow_hyphen_values = true, global = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, global = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, global = true)]
    pub n_gamma: Option<usize>,
    #[arg(long, global = true)]
    pub n_delta: Option<usize>,
    /// Half-width of the gamma axis; must equal 2 * norm1
    #[arg(long, global = true)]
    pub gamma_max: Option<f64>,
    /// Half-width of the delta axis; must equal 2 * norm2
    #[arg(long, global = true)]
    pub delta_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub depth: usize,
    pub n_gamma: usize,
    pub n_delta: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug)]
pub enum ConfigError {
    Io(PathBuf, std::io::Error),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            ConfigError::Invalid(msg) => f.write_str(msg),
        }
    }
}

pub fn read_file_config(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
    toml::from_str(&text).map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))
}

/// Figure configuration `(sqrt 2, 1, (1 - i)/sqrt 2)`, used for missing keys.
fn default_model() -> (f64, f64, f64, f64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (2f64.sqrt(), 1.0, s, -s)
}

impl RunConfig {
    /// Merges file and flags; `default_depth` applies when neither sets one.
    pub fn resolve(args: &RunArgs, default_depth: usize) -> Result<Self, ConfigError> {
        let file = match &args.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let (n1, n2, re, im) = default_model();
        let pick = |flag: Option<f64>, key: Option<f64>, default: f64| flag.or(key).unwrap_or(default);
        let norm1 = pick(args.norm1, file.norm1, n1);
        let norm2 = pick(args.norm2, file.norm2, n2);
        let alpha = Complex64::new(pick(args.alpha_re, file.alpha_re, re), pick(args.alpha_im, file.alpha_im, im));
        let model = ModelConfig::new(norm1, norm2, alpha).map_err(|e| ConfigError::Invalid(e.to_string()))?;

        let depth = args.depth.or(file.depth).unwrap_or(default_depth);
        if !(MIN_DEPTH..=MAX_DEPTH).contains(&depth) {
            return Err(ConfigError::Invalid(format!(
                "depth must lie in {MIN_DEPTH}..={MAX_DEPTH}, got {depth}"
            )));
        }
        let n_gamma = args.n_gamma.or(file.n_gamma).unwrap_or(101);
        let n_delta = args.n_delta.or(file.n_delta).unwrap_or(101);
        for (name, n) in [("n_gamma", n_gamma), ("n_delta", n_delta)] {
            if !(MIN_GRID..=MAX_GRID).contains(&n) {
                return Err(ConfigError::Invalid(format!(
                    "{name} must lie in {MIN_GRID}..={MAX_GRID}, got {n}"
                )));
            }
        }

        let rect = Rectangle::of(&model);
        for (name, requested, actual) in [
            ("gamma_max", args.gamma_max.or(file.gamma_max), rect.gamma_max),
            ("delta_max", args.delta_max.or(file.delta_max), rect.delta_max),
        ] {
            if let Some(v) = requested {
                if !((v - actual).abs() <= 1e-12 * actual) {
                    return Err(ConfigError::Invalid(format!(
                        "{name} = {v} does not match the spectral rectangle ({actual}); \
                         the grid always covers the closed rectangle"
                    )));
                }
            }
        }
        for (name, tol) in &file.tolerances {
            if !(tol.is_finite() && *tol >= 0.0) {
                return Err(ConfigError::Invalid(format!("tolerance for {name} must be non-negative")));
            }
        }

        Ok(Self {
            model,
            depth,
            n_gamma,
            n_delta,
            output_path: args.out.clone(),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            seed: file.seed,
            tolerances: file.tolerances,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_figure_configuration() {
        let run = RunConfig::resolve(&RunArgs::default(), 8).unwrap();
        assert_eq!(run.model.norm1, 2f64.sqrt());
        assert_eq!(run.depth, 8);
        assert_eq!((run.n_gamma, run.n_delta), (101, 101));
        assert_eq!(run.format, Format::Csv);
    }

    #[test]
    fn flags_override_and_validate() {
        let args = RunArgs {
            depth: Some(17),
            ..RunArgs::default()
        };
        assert!(RunConfig::resolve(&args, 8).is_err());
        let args = RunArgs {
            n_gamma: Some(2),
            ..RunArgs::default()
        };
        assert!(RunConfig::resolve(&args, 8).is_err());
        let args = RunArgs {
            norm1: Some(1.0),
            norm2: Some(1.0),
            alpha_re: Some(0.0),
            alpha_im: Some(2.0),
            ..RunArgs::default()
        };
        assert!(RunConfig::resolve(&args, 8).is_err());
        let args = RunArgs {
            gamma_max: Some(5.0),
            ..RunArgs::default()
        };
        assert!(RunConfig::resolve(&args, 8).is_err());
        let args = RunArgs {
            gamma_max: Some(2.0 * 2f64.sqrt()),
            ..RunArgs::default()
        };
        assert!(RunConfig::resolve(&args, 8).is_ok());
    }

    #[test]
    fn parses_flat_file() {
        let cfg: FileConfig = toml::from_str(
            "norm1 = 1.0\nnorm2 = 1.0\nalpha_re = 0.0\nalpha_im = 0.5\ndepth = 6\nformat = \"json\"\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha_im, Some(0.5));
        assert_eq!(cfg.format, Some(Format::Json));
        assert!(toml::from_str::<FileConfig>("colour = 3").is_err());
    }
}
