use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{self, CompensatedSum};
use crate::scattering::transfer_matrix_amplitudes;

use super::SpectralProblem;
use crate::scattering::for_each_chain;

pub const MAX_SPECTRAL_DEFECTS: usize = 20;

/// Precomputed `(coefficient, frequency)` table of the spectral function
///
/// `F(k) = sin 2kL + beta sum sin 2k s_i + beta^2 sum_{i>j} sin 2k(L - s_i + s_j)
///        + beta^3 sum_{i>j>m} sin 2k(s_i - s_j + s_m) + ...`
///
/// Odd chains enter with their alternating position sum, even chains with
/// `L` minus it. `2^N` terms in chain enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    terms: Vec<(f64, f64)>,
}

impl SpectralFunction {
    pub fn new(problem: &SpectralProblem) -> Result<Self> {
        let n = problem.defects().len();
        if n > MAX_SPECTRAL_DEFECTS {
            return Err(Error::Capacity {
                requested: n,
                max: MAX_SPECTRAL_DEFECTS,
            });
        }
        let beta = problem.coupling().beta();
        let half_length = problem.half_length();
        let mut terms = Vec::with_capacity(1 << n);
        for_each_chain(problem.defects().positions(), |len, sum| {
            let coefficient = libm::pow(beta, len as f64);
            let frequency = if len % 2 == 0 {
                2.0 * (half_length - sum)
            } else {
                2.0 * sum
            };
            terms.push((coefficient, frequency));
        });
        Ok(Self { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, k: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for &(c, w) in &self.terms {
            acc.add(c * math::sin(w * k));
        }
        acc.value()
    }

    /// `F'(0)`.
    pub fn slope_at_origin(&self) -> f64 {
        self.terms.iter().map(|&(c, w)| c * w).sum()
    }

    /// `sum |c_i|`, the scale of `F` used for residual bounds.
    pub fn magnitude_scale(&self) -> f64 {
        self.terms.iter().map(|&(c, _)| c.abs()).sum()
    }
}

/// Value of the real spectral function at `k >= 0`; its positive zeros are the
/// Dirichlet eigenmomenta.
pub fn spectral_function(problem: &SpectralProblem, k: f64) -> Result<f64> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::invalid(alloc::format!(
            "k must be non-negative, got {k}"
        )));
    }
    Ok(SpectralFunction::new(problem)?.eval(k))
}

/// `(R - e^{-2ikL})(R' - e^{-2ikL}) - T T'` from transfer-matrix amplitudes.
///
/// With `R = B/D`, `R' = -B^*/D` and `|D|^2 - |B|^2 = (1 - beta^2)^N` this
/// equals `-2i e^{-2ikL} F(k) / D(k)`, which is the normalization used when
/// comparing it with [`spectral_function`].
pub fn quantization_residual(problem: &SpectralProblem, k: f64) -> Result<Complex64> {
    let a = transfer_matrix_amplitudes(problem.coupling(), problem.defects(), k)?;
    let wall = math::cis(-2.0 * k * problem.half_length());
    Ok((a.r - wall) * (a.r_prime - wall) - a.t * a.t_prime)
}
