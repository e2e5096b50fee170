//! Preset geometries.

use ftchain_core::spectrum::SpectralProblem;
use ftchain_core::{
    fig3_box_halflength_with, sqrt_prime_positions, BoxRule, Coupling, DefectArray, Result,
};

use crate::config::Preset;

/// Common strength of the transmission-scan presets.
pub const FIG2_ALPHA: f64 = 1.5;

/// Strengths offered by the level-statistics panels, weakest link first.
pub const FIG3_ALPHAS: [f64; 3] = [27.0, 5.0, 2.0];

pub const FIG3_DEFAULT_ALPHA: f64 = 2.0;

impl Preset {
    /// Name as written on the command line and in config files.
    pub fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value()
            .map_or_else(String::new, |v| v.get_name().to_string())
    }

    pub fn defect_count(self) -> usize {
        match self {
            Preset::Fig2N3 | Preset::Fig3a => 3,
            Preset::Fig2N5 | Preset::Fig3b => 5,
            Preset::Fig2N7 | Preset::Fig3c => 7,
        }
    }

    pub fn is_level_statistics(self) -> bool {
        matches!(self, Preset::Fig3a | Preset::Fig3b | Preset::Fig3c)
    }
}

/// Square-root-prime chain of the transmission scans.
pub fn fig2_defects(n: usize) -> Result<DefectArray> {
    sqrt_prime_positions(n)
}

/// Defects and half-length of the level-statistics box.
///
/// Under [`BoxRule::Primes`] the chain keeps its generator coordinates; under
/// [`BoxRule::SqrtPrimes`] it is shifted so the left wall sits at the
/// generator origin.
pub fn fig3_geometry(n: usize, rule: BoxRule) -> Result<(DefectArray, f64)> {
    let half_length = fig3_box_halflength_with(n, rule)?;
    let chain = sqrt_prime_positions(n)?;
    let defects = match rule {
        BoxRule::Primes => chain,
        BoxRule::SqrtPrimes => chain.shifted(-half_length)?,
    };
    Ok((defects, half_length))
}

pub fn fig3_problem(n: usize, alpha: f64, rule: BoxRule) -> Result<SpectralProblem> {
    let (defects, half_length) = fig3_geometry(n, rule)?;
    SpectralProblem::new(Coupling::new(alpha, 0.0)?, defects, half_length)
}
