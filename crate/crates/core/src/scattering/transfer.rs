//! Transfer matrices built from the connection condition.
//!
//! Writing `psi = A e^{ikx} + B e^{-ikx}` on each side of a defect at `s`,
//! the two conditions `psi(s+) = c psi(s-) / alpha` and
//! `psi'(s+) = c alpha psi'(s-)` with `c = e^{i phi}` give
//!
//! ```text
//! (A+, B+) = c/2 [[alpha + 1/alpha,             (1/alpha - alpha) e^{-2iks}],
//!                 [(1/alpha - alpha) e^{2iks},   alpha + 1/alpha          ]] (A-, B-)
//!          = (1/gamma^*) [[1, beta e^{-2iks}], [beta e^{2iks}, 1]] (A-, B-)
//! ```
//!
//! Each factor has determinant `c^2`. The product is accumulated without the
//! `1/gamma^*` prefactor so that large `|alpha|` does not overflow, and
//! `T = det(M) / M_22` uses the exact determinant instead of the cancelling
//! difference `M_11 - M_12 M_21 / M_22`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::model::{Coupling, DefectArray, ScatteringAmplitudes};

use super::check_momentum;

/// Product of the normalized per-defect matrices, rightmost defect first:
/// `P = P_N ... P_1`, mapping the left plane-wave coefficients to the right
/// ones up to the factor `(1/gamma^*)^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl TransferMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    /// Normalized matrix of one defect at `position`.
    pub fn defect(beta: f64, position: f64, k: f64) -> Self {
        let phase = math::cis(2.0 * k * position);
        let one = Complex64::new(1.0, 0.0);
        Self {
            m: [[one, phase.conj() * beta], [phase * beta, one]],
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Self {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    pub fn chain(beta: f64, positions: &[f64], k: f64) -> Self {
        positions.iter().fold(Self::identity(), |acc, &s| {
            Self::defect(beta, s, k).mul(&acc)
        })
    }
}

/// Amplitudes from the product of per-defect transfer matrices. `O(N)`.
pub fn transfer_matrix_amplitudes(
    coupling: &Coupling,
    defects: &DefectArray,
    k: f64,
) -> Result<ScatteringAmplitudes> {
    check_momentum(k)?;
    let n = defects.len();
    let p = TransferMatrix::chain(coupling.beta(), defects.positions(), k).m;
    // |P_22| >= |gamma|^N > 0, so small values near the wall limit are
    // genuine; only an underflow to zero is unusable.
    let magnitude = math::abs(p[1][1]);
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::NumericalDegeneracy { k, magnitude });
    }
    // M = P / gamma*^N and det M = e^{2 i N phi}.
    let scale = math::powi(coupling.gamma().conj(), n);
    let det = math::cis(2.0 * n as f64 * coupling.phi());
    // left incidence: (1, -R) -> (T, 0)
    let r = p[1][0] / p[1][1];
    let t = det * scale / p[1][1];
    // right incidence: (0, T') -> (-R', 1)
    let t_prime = scale / p[1][1];
    let r_prime = -p[0][1] / p[1][1];
    Ok(ScatteringAmplitudes {
        k,
        t,
        r,
        t_prime,
        r_prime,
    })
}
