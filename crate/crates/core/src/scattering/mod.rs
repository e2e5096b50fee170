//! Scattering amplitudes of a chain of identical scale-invariant defects.
//!
//! Three independent routes are provided and cross-checked in the tests:
//!
//! - [`recursive_amplitudes`] peels the leftmost defect off the chain,
//! - [`closed_form_amplitudes`] sums the `2^{N-1}` oscillatory terms of the
//!   numerator and denominator explicitly,
//! - [`transfer_matrix_amplitudes`] multiplies one 2x2 matrix per defect.
//!
//! [`enumerate_frequencies`] exposes the term tables of the closed form.

mod closed_form;
mod frequencies;
mod recursive;
mod single;
mod transfer;

pub use closed_form::{closed_form_amplitudes, MAX_CLOSED_FORM_DEFECTS};
pub(crate) use frequencies::for_each_chain;
pub use frequencies::{
    enumerate_frequencies, ClosedFormTerms, FrequencyTerm, FREQUENCY_MERGE_TOLERANCE,
    MAX_FREQUENCY_DEFECTS,
};
pub use recursive::recursive_amplitudes;
pub use single::single_defect_amplitudes;
pub use transfer::{transfer_matrix_amplitudes, TransferMatrix};

use alloc::format;

use crate::error::{Error, Result};

/// Smallest denominator magnitude accepted before reporting a degeneracy.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// Which algorithm evaluates the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Recursion,
    ClosedForm,
    TransferMatrix,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::Recursion,
        Method::ClosedForm,
        Method::TransferMatrix,
    ];

    pub fn amplitudes(
        self,
        coupling: &crate::Coupling,
        defects: &crate::DefectArray,
        k: f64,
    ) -> Result<crate::ScatteringAmplitudes> {
        match self {
            Method::Recursion => recursive_amplitudes(coupling, defects, k),
            Method::ClosedForm => closed_form_amplitudes(coupling, defects, k),
            Method::TransferMatrix => transfer_matrix_amplitudes(coupling, defects, k),
        }
    }
}

pub(crate) fn check_momentum(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "momentum k must be positive and finite, got {k}"
        )))
    }
}
