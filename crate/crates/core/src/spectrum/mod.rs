//! Dirichlet eigenmomenta of the defect chain enclosed in the box `[-L, L]`.
//!
//! [`find_spectrum`] locates the zeros of the real spectral function
//! [`spectral_function`]; [`oracle_spectrum`] gets the same levels from the
//! determinant of the dense matching system and is meant for small chains.
//! [`quantization_residual`] evaluates the complex quantization condition written
//! with scattering amplitudes, which ties both back to the scattering module.

mod function;
mod oracle;
mod search;

pub use function::{
    quantization_residual, spectral_function, SpectralFunction, MAX_SPECTRAL_DEFECTS,
};
pub use oracle::{matching_determinant, oracle_spectrum, MAX_ORACLE_DEFECTS};
pub use search::{
    find_spectrum, level_count, weyl_violations, DEFAULT_GRID_PER_SPACING, MAX_REFINEMENT_ROUNDS,
};

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{Coupling, DefectArray};

/// A defect chain inside `[-L, L]` with Dirichlet walls. The phase of the
/// coupling must be zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProblem {
    coupling: Coupling,
    defects: DefectArray,
    half_length: f64,
}

impl SpectralProblem {
    pub fn new(coupling: Coupling, defects: DefectArray, half_length: f64) -> Result<Self> {
        if coupling.phi() != 0.0 {
            return Err(Error::invalid(format!(
                "bound states are only supported for phi = 0, got phi = {}",
                coupling.phi()
            )));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::invalid(format!(
                "box half-length must be positive and finite, got {half_length}"
            )));
        }
        if let (Some(&first), Some(&last)) =
            (defects.positions().first(), defects.positions().last())
        {
            if first <= -half_length || last >= half_length {
                return Err(Error::invalid(format!(
                    "defects must lie strictly inside (-{half_length}, {half_length}), got [{first}, {last}]"
                )));
            }
        }
        Ok(Self {
            coupling,
            defects,
            half_length,
        })
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn defects(&self) -> &DefectArray {
        &self.defects
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Mean level spacing `pi / (2L)` in `k`.
    pub fn mean_spacing(&self) -> f64 {
        PI / (2.0 * self.half_length)
    }

    /// Leading Weyl count `2 L k / pi`.
    pub fn weyl_count(&self, k: f64) -> f64 {
        2.0 * self.half_length * k / PI
    }

    /// Allowed deviation of the level count from [`Self::weyl_count`].
    pub fn weyl_tolerance(&self) -> f64 {
        (self.defects.len() + 2) as f64
    }

    /// The same problem with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.coupling,
            self.defects.scaled(factor)?,
            self.half_length * factor,
        )
    }
}

/// Sorted eigenmomenta in `(0, k_max]` with the magnitude of the defining
/// function at each root.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub roots: Vec<f64>,
    pub k_max: f64,
    pub residuals: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

pub(crate) fn check_k_max(k_max: f64) -> Result<()> {
    if k_max > 0.0 && k_max.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "k_max must be positive and finite, got {k_max}"
        )))
    }
}
