//! Physical parameters shared by every computation: the coupling of the
//! identical defects, the defect positions, and the amplitude record.
//!
//! Amplitudes follow the sign convention `psi = e^{ikx} - R e^{-ikx}` to the
//! left of the chain and `psi = T e^{ikx}` to its right; the right-incident
//! pair `(T', R')` mirrors it.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Largest chain produced by the position generators.
pub const MAX_GENERATED_DEFECTS: usize = 24;

/// Strength `alpha` and phase `phi` of a scale-invariant point interaction.
///
/// The connection condition at a defect `s` reads
/// `psi(s+) = e^{i phi} psi(s-) / alpha` and `psi'(s+) = e^{i phi} alpha psi'(s-)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    alpha: f64,
    phi: f64,
}

impl Coupling {
    /// `alpha` must be finite and non-zero. `phi` is wrapped into `[0, 2 pi)`.
    pub fn new(alpha: f64, phi: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha == 0.0 {
            return Err(Error::invalid(format!(
                "coupling strength alpha must be finite and non-zero, got {alpha}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::invalid(format!(
                "phase phi must be finite, got {phi}"
            )));
        }
        let mut phi = math::rem_euclid(phi, 2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Ok(Self { alpha, phi })
    }

    /// Builds the coupling from the mixing angle `theta` of the unitary
    /// boundary matrix, using `alpha = -cot(theta / 2)`.
    pub fn from_theta(theta: f64, phi: f64) -> Result<Self> {
        let half = 0.5 * theta;
        let s = math::sin(half);
        if s == 0.0 {
            return Err(Error::invalid(
                "theta = 0 (mod 2 pi) gives an infinite alpha",
            ));
        }
        Self::new(-math::cos(half) / s, phi)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Mixing angle in `(0, 2 pi)` with `alpha = -cot(theta / 2)`.
    pub fn theta(&self) -> f64 {
        math::rem_euclid(2.0 * libm::atan2(-1.0, self.alpha), 2.0 * PI)
    }

    /// Single-defect reflection coefficient `(1 - alpha^2) / (1 + alpha^2)`.
    pub fn beta(&self) -> f64 {
        let a2 = self.alpha * self.alpha;
        (1.0 - a2) / (1.0 + a2)
    }

    /// Real prefactor `2 alpha / (1 + alpha^2)` of [`Coupling::gamma`].
    pub fn gamma_modulus_signed(&self) -> f64 {
        2.0 * self.alpha / (1.0 + self.alpha * self.alpha)
    }

    /// Single-defect transmission amplitude `2 alpha / (1 + alpha^2) e^{i phi}`.
    pub fn gamma(&self) -> Complex64 {
        math::cis(self.phi) * self.gamma_modulus_signed()
    }
}

/// Strictly increasing, finite defect positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DefectArray {
    positions: Vec<f64>,
}

impl DefectArray {
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if let Some(bad) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::invalid(format!(
                "defect position {bad} is not finite"
            )));
        }
        if let Some(i) = positions.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "defect positions must be strictly increasing: s[{i}] = {} >= s[{}] = {}",
                positions[i],
                i + 1,
                positions[i + 1]
            )));
        }
        Ok(Self { positions })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Positions multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::invalid(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Self::new(self.positions.iter().map(|s| s * factor).collect())
    }

    /// Positions moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(self.positions.iter().map(|s| s + offset).collect())
    }
}

/// Left- and right-incident amplitudes at momentum `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub k: f64,
    pub t: Complex64,
    pub r: Complex64,
    pub t_prime: Complex64,
    pub r_prime: Complex64,
}

impl ScatteringAmplitudes {
    #[cfg(test)]
    pub(crate) fn free(k: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            k,
            t: one,
            r: zero,
            t_prime: one,
            r_prime: zero,
        }
    }

    /// `|T|^2`.
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// Largest deviation from `|T|^2 + |R|^2 = 1` over both incidences.
    pub fn unitarity_defect(&self) -> f64 {
        let left = (self.t.norm_sqr() + self.r.norm_sqr() - 1.0).abs();
        let right = (self.t_prime.norm_sqr() + self.r_prime.norm_sqr() - 1.0).abs();
        left.max(right)
    }

    /// Largest componentwise distance to `other` over all four amplitudes.
    pub fn max_difference(&self, other: &Self) -> f64 {
        [
            self.t - other.t,
            self.r - other.r,
            self.t_prime - other.t_prime,
            self.r_prime - other.r_prime,
        ]
        .iter()
        .map(|d| math::abs(*d))
        .fold(0.0, f64::max)
    }
}

/// `[1, 2, 3, 5, 7, 11, ...]`: the primes preceded by 1, first `count` entries.
pub fn prime_sequence(count: usize) -> Vec<u64> {
    let mut seq = Vec::with_capacity(count);
    if count == 0 {
        return seq;
    }
    seq.push(1);
    let mut candidate = 2u64;
    while seq.len() < count {
        if seq[1..]
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            seq.push(candidate);
        }
        candidate += 1;
    }
    seq
}

fn check_generated_len(n: usize) -> Result<()> {
    if n > MAX_GENERATED_DEFECTS {
        return Err(Error::invalid(format!(
            "number of defects must be at most {MAX_GENERATED_DEFECTS}, got {n}"
        )));
    }
    Ok(())
}

/// `s_i = sum_{j <= i} sqrt(p_j)` with `p = [1, 2, 3, 5, 7, ...]`.
///
/// Square roots of distinct square-free integers are rationally independent,
/// so all gaps and alternating sums of these positions are incommensurate.
pub fn sqrt_prime_positions(n: usize) -> Result<DefectArray> {
    check_generated_len(n)?;
    let mut acc = 0.0;
    let positions = prime_sequence(n)
        .into_iter()
        .map(|p| {
            acc += math::sqrt(p as f64);
            acc
        })
        .collect();
    DefectArray::new(positions)
}

/// How the level-statistics box half-length is derived from the defect count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxRule {
    /// `2L = sum_{i=1}^{N+1} p_i` with `s_1 = 1`; defects keep their
    /// positions inside `[-L, L]`.
    #[default]
    Primes,
    /// `2L = sum_{i=1}^{N+1} sqrt(p_i)`, i.e. the walls sit one further
    /// square-root gap beyond each end of the chain; the chain is shifted by
    /// `-L` so that the left wall coincides with the origin of the generator.
    SqrtPrimes,
}

/// Half-length `L` of the box for `n` defects under [`BoxRule::Primes`].
pub fn fig3_box_halflength(n: usize) -> Result<f64> {
    fig3_box_halflength_with(n, BoxRule::Primes)
}

pub fn fig3_box_halflength_with(n: usize, rule: BoxRule) -> Result<f64> {
    check_generated_len(n)?;
    if n == 0 {
        return Err(Error::invalid("the box rule needs at least one defect"));
    }
    let primes = prime_sequence(n + 1);
    let total: f64 = match rule {
        BoxRule::Primes => primes.iter().map(|&p| p as f64).sum(),
        BoxRule::SqrtPrimes => primes.iter().map(|&p| math::sqrt(p as f64)).sum(),
    };
    Ok(0.5 * total)
}
