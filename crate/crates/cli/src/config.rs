//! Run configuration shared by the JSON config file and the command line.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Amplitudes on a uniform k grid (CSV).
    #[default]
    Scan,
    /// Dirichlet levels with residuals (CSV).
    Spectrum,
    /// Unfolded spacings, histogram and KS distances (JSON).
    Spacings,
    /// Oscillation frequencies of the closed-form sums (CSV).
    Freqs,
    /// Autocorrelation of |T|^2 over a scan (CSV).
    Autocorr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    #[value(name = "fig2_n3")]
    Fig2N3,
    #[value(name = "fig2_n5")]
    Fig2N5,
    #[value(name = "fig2_n7")]
    Fig2N7,
    Fig3a,
    Fig3b,
    Fig3c,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Recursion,
    #[serde(alias = "closed_form")]
    Closedform,
    #[default]
    Transfer,
    /// Evaluate all three and report their largest disagreement.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BoxRuleChoice {
    /// 2L = sum of the first N+1 sequence primes.
    #[default]
    Primes,
    /// 2L = sum of their square roots, chain shifted to start one unit from the wall.
    #[serde(alias = "sqrt-primes")]
    SqrtPrimes,
}

impl From<BoxRuleChoice> for ftchain_core::BoxRule {
    fn from(rule: BoxRuleChoice) -> Self {
        match rule {
            BoxRuleChoice::Primes => ftchain_core::BoxRule::Primes,
            BoxRuleChoice::SqrtPrimes => ftchain_core::BoxRule::SqrtPrimes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqrtPrimeChain {
    pub sqrt_primes: usize,
}

/// Either explicit positions or the square-root-prime generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PositionsSpec {
    Explicit(Vec<f64>),
    Generated(SqrtPrimeChain),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthRule {
    Fig3Rule,
}

/// Box half-length: a number, or `"fig3_rule"` to derive it from N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HalfLength {
    Value(f64),
    Rule(LengthRule),
}

impl std::str::FromStr for HalfLength {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig3" | "fig3_rule" | "fig3-rule" => Ok(HalfLength::Rule(LengthRule::Fig3Rule)),
            _ => s
                .parse::<f64>()
                .map(HalfLength::Value)
                .map_err(|_| format!("expected a number or `fig3_rule`, got `{s}`")),
        }
    }
}

/// Every field is optional so that a config file and the flags can be
/// layered; see [`RunConfig::overlay`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<PositionsSpec>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub half_length: Option<HalfLength>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_rule: Option<BoxRuleChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discard_low: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        overlay_fields!(
            self,
            top,
            mode,
            preset,
            alpha,
            phi,
            positions,
            half_length,
            box_rule,
            method,
            k_min,
            k_max,
            k_points,
            levels,
            discard_low,
            bin_width,
            histogram_max,
            max_lag,
            output_path,
            seed
        )
    }
}
