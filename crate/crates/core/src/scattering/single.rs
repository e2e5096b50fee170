use crate::error::Result;
use crate::math;
use crate::model::{Coupling, ScatteringAmplitudes};

use super::check_momentum;

/// Amplitudes of one defect at `position`.
///
/// `|T|` does not depend on `k` or on the position: the interaction has no
/// intrinsic length, so only the phase of `R` moves with `k`.
pub fn single_defect_amplitudes(
    coupling: &Coupling,
    position: f64,
    k: f64,
) -> Result<ScatteringAmplitudes> {
    check_momentum(k)?;
    let t = coupling.gamma();
    let r = math::cis(2.0 * k * position) * coupling.beta();
    Ok(ScatteringAmplitudes {
        k,
        t,
        r,
        t_prime: t.conj(),
        r_prime: -r.conj(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn three_halves_at_unit_position() {
        let c = Coupling::new(1.5, 0.0).unwrap();
        for k in [0.1, 1.0, 7.3] {
            let a = single_defect_amplitudes(&c, 1.0, k).unwrap();
            assert!((a.t - Complex64::new(12.0 / 13.0, 0.0)).norm() < 1e-15);
            let r = -math::cis(2.0 * k) * (5.0 / 13.0);
            assert!((a.r - r).norm() < 1e-15);
            assert!(a.unitarity_defect() < 1e-15);
        }
    }

    #[test]
    fn unit_strength_is_transparent() {
        let c = Coupling::new(1.0, 0.9).unwrap();
        let a = single_defect_amplitudes(&c, -3.0, 2.5).unwrap();
        assert!((a.t - math::cis(0.9)).norm() < 1e-15);
        assert_eq!(a.r.norm(), 0.0);
    }

    #[test]
    fn wall_limit() {
        let c = Coupling::new(1e6, 0.0).unwrap();
        let a = single_defect_amplitudes(&c, 0.4, 3.0).unwrap();
        assert!(a.t.norm_sqr() < 5e-12);
        assert!(a.r.norm_sqr() > 1.0 - 5e-12);
    }

    #[test]
    fn energy_independent_transmission() {
        let c = Coupling::new(0.37, 1.1).unwrap();
        let a = single_defect_amplitudes(&c, 2.0, 0.01).unwrap();
        let b = single_defect_amplitudes(&c, 2.0, 4321.0).unwrap();
        assert_eq!(a.t.norm(), b.t.norm());
    }

    #[test]
    fn rejects_non_positive_momentum() {
        let c = Coupling::new(2.0, 0.0).unwrap();
        assert!(single_defect_amplitudes(&c, 0.0, 0.0).is_err());
        assert!(single_defect_amplitudes(&c, 0.0, -1.0).is_err());
    }
}
