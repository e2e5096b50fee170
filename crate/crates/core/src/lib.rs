//! Quantum particle on a line with identical scale-invariant point interactions.
//!
//! The crate is `no_std` (it needs `alloc`) and covers three things:
//!
//! - [`scattering`]: transmission and reflection amplitudes of a defect chain,
//!   computed by the leftmost-peeling recursion, by the closed-form
//!   multi-periodic sums and by a 2x2 transfer-matrix product.
//! - [`spectrum`]: eigenmomenta of the chain enclosed in a Dirichlet box
//!   `[-L, L]`, from the real spectral function and from a dense matching
//!   determinant used as an oracle.
//! - [`statistics`]: unfolding, nearest-neighbour spacing histograms,
//!   Kolmogorov-Smirnov distances to the Wigner and Poisson laws, and the
//!   autocorrelation of transmission scans.
//!
//! Shared parameter types live in [`model`].

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards reject NaN along with the range they name.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod math;
pub mod model;
pub mod scattering;
pub mod spectrum;
pub mod statistics;

pub use error::{Error, Result};
pub use model::{
    fig3_box_halflength, fig3_box_halflength_with, prime_sequence, sqrt_prime_positions, BoxRule,
    Coupling, DefectArray, ScatteringAmplitudes, MAX_GENERATED_DEFECTS,
};
pub use num_complex::Complex64;
