use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::spectrum::Spectrum;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    InvalidArgument(String),
    /// The requested size exceeds what the exponential enumeration supports.
    Capacity { requested: usize, max: usize },
    /// A denominator vanished to working precision.
    NumericalDegeneracy { k: f64, magnitude: f64 },
    /// The root search could not reconcile its count with the Weyl law.
    /// `partial` carries everything that was found.
    IncompleteSpectrum {
        partial: Spectrum,
        suspect_windows: Vec<(f64, f64)>,
    },
    /// A signal with zero variance was passed to a correlation estimator.
    DegenerateSignal,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Capacity { requested, max } => {
                write!(
                    f,
                    "capacity exceeded: {requested} defects requested, at most {max} supported"
                )
            }
            Error::NumericalDegeneracy { k, magnitude } => {
                write!(
                    f,
                    "numerical degeneracy at k = {k}: denominator magnitude {magnitude:e}"
                )
            }
            Error::IncompleteSpectrum {
                partial,
                suspect_windows,
            } => write!(
                f,
                "incomplete spectrum: {} roots found, Weyl count mismatch in {} window(s)",
                partial.roots.len(),
                suspect_windows.len()
            ),
            Error::DegenerateSignal => f.write_str("degenerate signal: zero variance"),
        }
    }
}

impl core::error::Error for Error {}
