//! Level-spacing statistics and transmission fluctuation diagnostics.

mod autocorr;
mod distributions;
mod unfold;

pub use autocorr::{local_extrema_density, transmission_autocorrelation, Autocorrelation};
pub use distributions::{
    compare, histogram, ks_distance, poisson_cdf, poisson_pdf, wigner_cdf, wigner_pdf,
    DistributionComparison, Histogram, Reference, DEFAULT_BIN_WIDTH, DEFAULT_HISTOGRAM_MAX,
};
pub use unfold::{unfold, unfold_levels, SpacingSample, DEFAULT_DISCARD_LOW, MIN_UNFOLDED_LEVELS};
