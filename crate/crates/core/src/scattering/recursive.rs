use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::model::{Coupling, DefectArray, ScatteringAmplitudes};

use super::{check_momentum, DEGENERACY_THRESHOLD};

/// Left-incident `(T, R)` for the positions in the given order, peeling the
/// first entry off the rest:
///
/// `T_N = T_1(s_1) T_{N-1}(s_2..) / (1 + R_1(s_1)^* R_{N-1}(s_2..))`,
/// `R_N = (R_1(s_1) + R_{N-1}(s_2..)) / (1 + R_1(s_1)^* R_{N-1}(s_2..))`.
///
/// The order is not required to be increasing; the right-incident amplitudes
/// are obtained by feeding the reversed sequence.
fn peel(coupling: &Coupling, positions: &[f64], k: f64) -> Result<(Complex64, Complex64)> {
    let gamma = coupling.gamma();
    let beta = coupling.beta();
    let mut t = Complex64::new(1.0, 0.0);
    let mut r = Complex64::new(0.0, 0.0);
    // innermost chain first: (s_N), (s_{N-1}, s_N), ...
    for &s in positions.iter().rev() {
        let r1 = math::cis(2.0 * k * s) * beta;
        let denom = Complex64::new(1.0, 0.0) + r1.conj() * r;
        let magnitude = math::abs(denom);
        if magnitude < DEGENERACY_THRESHOLD {
            return Err(Error::NumericalDegeneracy { k, magnitude });
        }
        t = gamma * t / denom;
        r = (r1 + r) / denom;
    }
    Ok((t, r))
}

/// Amplitudes from the leftmost-peeling recursion; the right-incident pair
/// comes from `T'(s_1..s_N) = T(s_N..s_1)^*` and `R'(s_1..s_N) = -R(s_N..s_1)^*`.
pub fn recursive_amplitudes(
    coupling: &Coupling,
    defects: &DefectArray,
    k: f64,
) -> Result<ScatteringAmplitudes> {
    check_momentum(k)?;
    let forward = defects.positions();
    let (t, r) = peel(coupling, forward, k)?;
    let reversed: alloc::vec::Vec<f64> = forward.iter().rev().copied().collect();
    let (t_rev, r_rev) = peel(coupling, &reversed, k)?;
    Ok(ScatteringAmplitudes {
        k,
        t,
        r,
        t_prime: t_rev.conj(),
        r_prime: -r_rev.conj(),
    })
}
