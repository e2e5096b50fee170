use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::CompensatedSum;
use crate::spectrum::Spectrum;

pub const DEFAULT_DISCARD_LOW: usize = 50;

/// Levels that must remain after discarding the low edge.
pub const MIN_UNFOLDED_LEVELS: usize = 100;

/// Nearest-neighbour spacings rescaled to unit mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
    pub n_levels_used: usize,
    pub n_discarded_low: usize,
}

impl SpacingSample {
    pub fn mean(&self) -> f64 {
        self.spacings
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
            / self.spacings.len() as f64
    }
}

/// Unfolds sorted levels with a single global mean spacing.
///
/// The smooth level density of the boxed chain is constant in `k`, so a
/// global rescaling is the whole unfolding.
pub fn unfold_levels(levels: &[f64], discard_low: usize) -> Result<SpacingSample> {
    if levels.len() < discard_low + MIN_UNFOLDED_LEVELS {
        return Err(Error::invalid(format!(
            "unfolding needs at least {} levels ({} discarded + {}), got {}",
            discard_low + MIN_UNFOLDED_LEVELS,
            discard_low,
            MIN_UNFOLDED_LEVELS,
            levels.len()
        )));
    }
    let used = &levels[discard_low..];
    let raw: Vec<f64> = used.windows(2).map(|w| w[1] - w[0]).collect();
    if let Some(bad) = raw.iter().find(|d| !(**d >= 0.0)) {
        return Err(Error::invalid(format!(
            "levels must be sorted, found spacing {bad}"
        )));
    }
    let mean = raw.iter().copied().collect::<CompensatedSum>().value() / raw.len() as f64;
    if mean <= 0.0 {
        return Err(Error::invalid("all levels coincide"));
    }
    Ok(SpacingSample {
        spacings: raw.iter().map(|d| d / mean).collect(),
        n_levels_used: used.len(),
        n_discarded_low: discard_low,
    })
}

pub fn unfold(spectrum: &Spectrum, discard_low: usize) -> Result<SpacingSample> {
    unfold_levels(&spectrum.roots, discard_low)
}
