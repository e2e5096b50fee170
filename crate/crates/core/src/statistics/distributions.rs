use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

use super::SpacingSample;

pub const DEFAULT_BIN_WIDTH: f64 = 0.2;
pub const DEFAULT_HISTOGRAM_MAX: f64 = 4.0;

fn check_spacing(s: f64) -> Result<()> {
    if s >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "spacing must be non-negative, got {s}"
        )))
    }
}

/// `P(s) = (pi/2) s exp(-pi s^2 / 4)`.
pub fn wigner_pdf(s: f64) -> Result<f64> {
    check_spacing(s)?;
    Ok(0.5 * PI * s * math::exp(-0.25 * PI * s * s))
}

/// `P(s) = exp(-s)`.
pub fn poisson_pdf(s: f64) -> Result<f64> {
    check_spacing(s)?;
    Ok(math::exp(-s))
}

pub fn wigner_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        -libm::expm1(-0.25 * PI * s * s)
    }
}

pub fn poisson_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        -libm::expm1(-s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    Wigner,
    Poisson,
}

impl Reference {
    pub fn cdf(self, s: f64) -> f64 {
        match self {
            Reference::Wigner => wigner_cdf(s),
            Reference::Poisson => poisson_cdf(s),
        }
    }
}

/// Kolmogorov-Smirnov distance `sup |F_n(s) - F(s)|` between the empirical
/// spacing distribution and a reference law.
pub fn ks_distance(sample: &SpacingSample, reference: Reference) -> Result<f64> {
    ks_statistic(&sample.spacings, |s| reference.cdf(s))
}

pub(crate) fn ks_statistic<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("empty sample"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        // ties: the empirical CDF jumps once past the last equal value
        let j = i + sorted[i..].partition_point(|&y| y <= x);
        let f = cdf(x);
        d = d
            .max((j as f64 / n - f).abs())
            .max((f - i as f64 / n).abs());
        i = j;
    }
    Ok(d)
}

/// Density-normalized histogram with uniform bins starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn integral(&self) -> f64 {
        self.bin_edges
            .windows(2)
            .zip(&self.densities)
            .map(|(e, d)| (e[1] - e[0]) * d)
            .sum()
    }
}

/// Histogram over `[0, max(s_max, largest spacing)]` in bins of `bin_width`;
/// the range grows by whole bins so every spacing is counted.
pub fn histogram(sample: &SpacingSample, bin_width: f64, s_max: f64) -> Result<Histogram> {
    if !(bin_width > 0.0 && s_max > 0.0) {
        return Err(Error::invalid("bin width and range must be positive"));
    }
    if sample.spacings.is_empty() {
        return Err(Error::invalid("empty sample"));
    }
    let largest = sample.spacings.iter().copied().fold(0.0, f64::max);
    let top = s_max.max(largest);
    let bins = (libm::ceil(top / bin_width - 1e-12) as usize).max(1);
    let mut counts = alloc::vec![0usize; bins];
    for &s in &sample.spacings {
        let idx = ((s / bin_width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = sample.spacings.len() as f64;
    Ok(Histogram {
        bin_edges: (0..=bins).map(|i| i as f64 * bin_width).collect(),
        densities: counts.iter().map(|&c| c as f64 / (n * bin_width)).collect(),
    })
}

/// Histogram of a spacing sample with its KS distances to both references.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionComparison {
    pub histogram: Histogram,
    pub ks_wigner: f64,
    pub ks_poisson: f64,
}

pub fn compare(
    sample: &SpacingSample,
    bin_width: f64,
    s_max: f64,
) -> Result<DistributionComparison> {
    Ok(DistributionComparison {
        histogram: histogram(sample, bin_width, s_max)?,
        ks_wigner: ks_distance(sample, Reference::Wigner)?,
        ks_poisson: ks_distance(sample, Reference::Poisson)?,
    })
}
