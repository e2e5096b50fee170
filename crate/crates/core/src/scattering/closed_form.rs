use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{self, ComplexDD, DoubleDouble};
use crate::model::{Coupling, DefectArray, ScatteringAmplitudes};

use super::frequencies::fold_chains;
use super::{check_momentum, DEGENERACY_THRESHOLD};

pub const MAX_CLOSED_FORM_DEFECTS: usize = 24;

/// `(D_N(k), B_N(k))` for positions taken in the given order.
///
/// Each term `beta^l e^{2ik(s_i - s_j + ...)}` is built as a product of the
/// per-defect phasors `e^{+-2iks}`, so every term sees the same rounded
/// phases. Products and sums are carried in double-double: near a small
/// `|D_N|` the terms cancel to a few parts in `10^3` and plain rounding of
/// the terms would show up in `|T|^2 + |R|^2`.
fn chain_sums(beta: f64, positions: &[f64], k: f64) -> (Complex64, Complex64) {
    let beta = DoubleDouble::from_f64(beta);
    let powers: Vec<DoubleDouble> = (0..=positions.len())
        .scan(DoubleDouble::ONE, |p, _| {
            let current = *p;
            *p = *p * beta;
            Some(current)
        })
        .collect();
    let phasors: Vec<ComplexDD> = positions
        .iter()
        .map(|&s| ComplexDD::from_complex(math::cis(2.0 * k * s)))
        .collect();
    let mut d = ComplexDD::ZERO;
    let mut b = ComplexDD::ZERO;
    fold_chains(
        positions.len(),
        ComplexDD::ONE,
        |z, i, positive| {
            if positive {
                z * phasors[i]
            } else {
                z * phasors[i].conj()
            }
        },
        |len, z| {
            let term = z.scale(powers[len]);
            if len.is_multiple_of(2) {
                d = d + term;
            } else {
                b = b + term;
            }
        },
    );
    (d.to_complex(), b.to_complex())
}

fn left_incident(coupling: &Coupling, positions: &[f64], k: f64) -> Result<(Complex64, Complex64)> {
    let (d, b) = chain_sums(coupling.beta(), positions, k);
    let magnitude = math::abs(d);
    if magnitude < DEGENERACY_THRESHOLD {
        return Err(Error::NumericalDegeneracy { k, magnitude });
    }
    let t = math::powi(coupling.gamma(), positions.len()) / d;
    Ok((t, b / d))
}

/// Amplitudes from the explicit multi-periodic sums `T = gamma^N / D_N`,
/// `R = B_N / D_N`. Costs `2^N` complex exponentials per call.
pub fn closed_form_amplitudes(
    coupling: &Coupling,
    defects: &DefectArray,
    k: f64,
) -> Result<ScatteringAmplitudes> {
    check_momentum(k)?;
    if defects.len() > MAX_CLOSED_FORM_DEFECTS {
        return Err(Error::Capacity {
            requested: defects.len(),
            max: MAX_CLOSED_FORM_DEFECTS,
        });
    }
    let forward = defects.positions();
    let (t, r) = left_incident(coupling, forward, k)?;
    let reversed: Vec<f64> = forward.iter().rev().copied().collect();
    let (t_rev, r_rev) = left_incident(coupling, &reversed, k)?;
    Ok(ScatteringAmplitudes {
        k,
        t,
        r,
        t_prime: t_rev.conj(),
        r_prime: -r_rev.conj(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::single_defect_amplitudes;

    #[test]
    fn one_defect_sums() {
        let (d, b) = chain_sums(-0.3, &[0.8], 2.0);
        assert_eq!(d, Complex64::new(1.0, 0.0));
        assert!((b - math::cis(3.2) * -0.3).norm() < 1e-16);
        let c = Coupling::new(2.5, 0.3).unwrap();
        let d = DefectArray::new(alloc::vec![0.8]).unwrap();
        let a = closed_form_amplitudes(&c, &d, 2.0).unwrap();
        let b = single_defect_amplitudes(&c, 0.8, 2.0).unwrap();
        assert!(a.max_difference(&b) < 1e-15);
    }

    #[test]
    fn two_defect_denominator() {
        let beta = 0.4;
        let (s1, s2, k) = (0.5, 1.7, 3.0);
        let (d, _) = chain_sums(beta, &[s1, s2], k);
        let expect = Complex64::new(1.0, 0.0) + math::cis(2.0 * k * (s2 - s1)) * beta * beta;
        assert!((d - expect).norm() < 1e-15);
    }

    #[test]
    fn capacity_limit() {
        let c = Coupling::new(2.0, 0.0).unwrap();
        let d = DefectArray::new((0..25).map(|i| i as f64).collect()).unwrap();
        assert!(matches!(
            closed_form_amplitudes(&c, &d, 1.0),
            Err(Error::Capacity { requested: 25, .. })
        ));
    }
}
