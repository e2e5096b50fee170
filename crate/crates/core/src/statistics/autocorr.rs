use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::CompensatedSum;

/// Minimum number of scan points accepted by [`transmission_autocorrelation`].
pub const MIN_SCAN_POINTS: usize = 512;

/// Normalized autocorrelation `C(dk)` of a transmission scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelation {
    /// `(dk, C(dk))` for `dk = 0, h, 2h, ...` up to the requested lag.
    pub lags: Vec<(f64, f64)>,
    /// First `dk` where `C` drops to one half, linearly interpolated;
    /// `None` if it stays above within the computed lags.
    pub correlation_width: Option<f64>,
}

fn uniform_step(scan: &[(f64, f64)]) -> Result<f64> {
    let n = scan.len();
    let step = (scan[n - 1].0 - scan[0].0) / (n - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::invalid("scan must be increasing in k"));
    }
    for (i, w) in scan.windows(2).enumerate() {
        let h = w[1].0 - w[0].0;
        if (h - step).abs() > 1e-6 * step {
            return Err(Error::invalid(format!(
                "non-uniform k grid: step {h} at index {i}, expected {step}"
            )));
        }
    }
    Ok(step)
}

/// `C(dk) = <d(k) d(k + dk)> / <d(k)^2>` with `d = |T|^2 - <|T|^2>`, the
/// numerator averaged over the `n - lag` available pairs.
///
/// The scan must be a uniform grid of at least 512 `(k, |T|^2)` points.
pub fn transmission_autocorrelation(scan: &[(f64, f64)], max_lag: f64) -> Result<Autocorrelation> {
    if scan.len() < MIN_SCAN_POINTS {
        return Err(Error::invalid(format!(
            "autocorrelation needs at least {MIN_SCAN_POINTS} scan points, got {}",
            scan.len()
        )));
    }
    if !(max_lag >= 0.0) {
        return Err(Error::invalid(format!(
            "max_lag must be non-negative, got {max_lag}"
        )));
    }
    let step = uniform_step(scan)?;
    let n = scan.len();
    let mean = scan.iter().map(|p| p.1).collect::<CompensatedSum>().value() / n as f64;
    let dev: Vec<f64> = scan.iter().map(|p| p.1 - mean).collect();
    let variance = dev
        .iter()
        .map(|d| d * d)
        .collect::<CompensatedSum>()
        .value()
        / n as f64;
    if !(variance > 1e-300) || variance <= 1e-24 * mean * mean {
        return Err(Error::DegenerateSignal);
    }
    let max_index = ((max_lag / step + 1e-9) as usize).min(n - 1);
    let mut lags = Vec::with_capacity(max_index + 1);
    for lag in 0..=max_index {
        let c = if lag == 0 {
            1.0
        } else {
            let pairs = n - lag;
            let cov = (0..pairs)
                .map(|i| dev[i] * dev[i + lag])
                .collect::<CompensatedSum>()
                .value()
                / pairs as f64;
            cov / variance
        };
        lags.push((lag as f64 * step, c));
    }
    let correlation_width = lags.windows(2).find(|w| w[1].1 <= 0.5).map(|w| {
        let ((x0, c0), (x1, c1)) = (w[0], w[1]);
        if c0 == c1 {
            x1
        } else {
            x0 + (c0 - 0.5) / (c0 - c1) * (x1 - x0)
        }
    });
    Ok(Autocorrelation {
        lags,
        correlation_width,
    })
}

/// Local maxima and minima of the sampled signal per unit of `k`.
pub fn local_extrema_density(scan: &[(f64, f64)]) -> Result<f64> {
    if scan.len() < 3 {
        return Err(Error::invalid("need at least three scan points"));
    }
    let span = scan[scan.len() - 1].0 - scan[0].0;
    if !(span > 0.0) {
        return Err(Error::invalid("scan must be increasing in k"));
    }
    let count = scan
        .windows(3)
        .filter(|w| {
            let (a, b, c) = (w[0].1, w[1].1, w[2].1);
            (b > a && b >= c) || (b < a && b <= c)
        })
        .count();
    Ok(count as f64 / span)
}
