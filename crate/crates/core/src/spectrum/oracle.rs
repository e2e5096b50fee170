//! Brute-force spectrum from the determinant of the full matching system.
//!
//! On interval `j` (bounded on the left by `c_j`, the wall `-L` or defect
//! `s_j`) the wavefunction is `a_j cos k(x - c_j) + b_j sin k(x - c_j)`. For
//! `phi = 0` every row is real, so the determinant is a real function of `k`
//! whose sign changes mark the levels. Derivative rows are divided by `k`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::math;

use super::search::{scan_roots, weyl_violations};
use super::{check_k_max, SpectralProblem, Spectrum};

pub const MAX_ORACLE_DEFECTS: usize = 8;

const ORACLE_GRID_PER_SPACING: f64 = 64.0;

/// Determinant of the `(2N + 2) x (2N + 2)` matching matrix at `k`.
pub fn matching_determinant(problem: &SpectralProblem, k: f64) -> f64 {
    let positions = problem.defects().positions();
    let n = positions.len();
    let half_length = problem.half_length();
    let alpha = problem.coupling().alpha();
    let size = 2 * n + 2;
    let mut m = DMatrix::<f64>::zeros(size, size);
    let left_end = |j: usize| {
        if j == 0 {
            -half_length
        } else {
            positions[j - 1]
        }
    };

    // psi(-L) = 0
    m[(0, 0)] = 1.0;
    for (i, &s) in positions.iter().enumerate() {
        let (left, right) = (2 * i, 2 * i + 2);
        let row = 2 * i + 1;
        let width = s - left_end(i);
        let (sn, cs) = (math::sin(k * width), math::cos(k * width));
        // psi(s+) = psi(s-) / alpha
        m[(row, right)] = 1.0;
        m[(row, left)] = -cs / alpha;
        m[(row, left + 1)] = -sn / alpha;
        // psi'(s+) / k = alpha psi'(s-) / k
        m[(row + 1, right + 1)] = 1.0;
        m[(row + 1, left)] = alpha * sn;
        m[(row + 1, left + 1)] = -alpha * cs;
    }
    // psi(L) = 0
    let width = half_length - left_end(n);
    m[(size - 1, 2 * n)] = math::cos(k * width);
    m[(size - 1, 2 * n + 1)] = math::sin(k * width);
    m.determinant()
}

/// Levels in `(0, k_max]` from sign changes of [`matching_determinant`] on a
/// grid of 64 points per mean spacing, with close pairs recovered from
/// local extrema. Residuals are `|det|` at the roots.
pub fn oracle_spectrum(problem: &SpectralProblem, k_max: f64) -> Result<Spectrum> {
    check_k_max(k_max)?;
    let n = problem.defects().len();
    if n > MAX_ORACLE_DEFECTS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_ORACLE_DEFECTS,
        });
    }
    let f = |k: f64| matching_determinant(problem, k);
    let step = problem.mean_spacing() / ORACLE_GRID_PER_SPACING;
    let roots = scan_roots(&f, step * 1e-6, k_max, step);
    let residuals = roots.iter().map(|&k| f(k).abs()).collect();
    let suspects = weyl_violations(problem, &roots, k_max);
    let spectrum = Spectrum {
        roots,
        k_max,
        residuals,
    };
    if suspects.is_empty() {
        Ok(spectrum)
    } else {
        Err(Error::IncompleteSpectrum {
            partial: spectrum,
            suspect_windows: suspects,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coupling, DefectArray};
    use core::f64::consts::PI;

    #[test]
    fn free_box_determinant() {
        let p = SpectralProblem::new(Coupling::new(2.0, 0.0).unwrap(), DefectArray::empty(), 1.0)
            .unwrap();
        // det = sin(2k)
        for k in [0.3, 1.0, 2.5] {
            assert!((matching_determinant(&p, k) - math::sin(2.0 * k)).abs() < 1e-15);
        }
        let s = oracle_spectrum(&p, 5.0).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.roots[0] - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn too_many_defects() {
        let p = SpectralProblem::new(
            Coupling::new(2.0, 0.0).unwrap(),
            DefectArray::new((0..9).map(|i| i as f64).collect()).unwrap(),
            10.0,
        )
        .unwrap();
        assert!(matches!(
            oracle_spectrum(&p, 1.0),
            Err(Error::Capacity { .. })
        ));
    }
}
