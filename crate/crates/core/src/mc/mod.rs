//! Monte-Carlo oracle: samples quadrature fluctuations from a covariance and
//! re-measures detector noise powers empirically.
//!
//! Sample `i` is drawn from stream `i` of a ChaCha8 generator keyed by the
//! seed. Samples are reduced in fixed blocks of [`BLOCK`] whose partial sums
//! are combined in index order, so results are bit-identical for any batch
//! size or thread count.

mod sampler;
mod suite;

pub use sampler::{
    empirical_covariance, mc_noise_power, sample_quadratures, McConfig, McEstimate,
    QuadratureSampler, BLOCK, MIN_SAMPLES, PSD_SLACK,
};
pub use suite::{validation_suite, SuiteCheck};
