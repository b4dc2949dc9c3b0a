use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beam::{NoiseCovariance, QuadratureProjection};
use crate::error::{Error, Result};

/// Minimum sample count.
pub const MIN_SAMPLES: usize = 1000;
/// Samples per reduction block.
pub const BLOCK: usize = 1024;
/// Eigenvalues in `[-PSD_SLACK, 0)` are clamped to zero.
pub const PSD_SLACK: f64 = 1e-9;

/// Sampling configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    samples: usize,
    seed: u64,
    batch: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::usage(format!(
                "Monte-Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
            )));
        }
        Ok(McConfig {
            samples,
            seed,
            batch: 16 * BLOCK,
        })
    }

    /// Samples per parallel work item. Affects scheduling only.
    pub fn with_batch(mut self, batch: usize) -> Result<Self> {
        if batch == 0 {
            return Err(Error::usage("batch size must be positive"));
        }
        self.batch = batch;
        Ok(self)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batch(&self) -> usize {
        self.batch
    }

    /// Relative statistical tolerance on a variance estimate, `3 sqrt(2/M)`.
    pub fn tolerance(&self) -> f64 {
        3.0 * (2.0 / self.samples as f64).sqrt()
    }

    fn blocks_per_task(&self) -> usize {
        self.batch.div_ceil(BLOCK).max(1)
    }
}

/// Draws zero-mean Gaussian quadrature vectors with a given covariance.
#[derive(Debug, Clone)]
pub struct QuadratureSampler {
    factor: DMatrix<f64>,
    seed: u64,
}

impl QuadratureSampler {
    /// Factorizes `cov = S S` with the symmetric square root `S`.
    pub fn new(cov: &NoiseCovariance, seed: u64) -> Result<Self> {
        Ok(QuadratureSampler {
            factor: symmetric_sqrt(cov.matrix())?,
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// Sample number `index`.
    pub fn sample(&self, index: u64) -> DVector<f64> {
        let z = normals(self.seed, index, self.dim());
        &self.factor * z
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normals(seed: u64, index: u64, n: usize) -> DVector<f64> {
    let mut rng = rng_for(seed, index);
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

fn symmetric_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    let mut roots = eig.eigenvalues.clone();
    for (k, l) in roots.iter_mut().enumerate() {
        if *l < -PSD_SLACK {
            return Err(Error::Numeric(format!(
                "covariance is not positive semidefinite: eigenvalue {k} = {l:e}"
            )));
        }
        *l = l.max(0.0).sqrt();
    }
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&roots) * v.transpose())
}

/// Deterministic stream of samples from `cov`.
pub fn sample_quadratures(
    cov: &NoiseCovariance,
    cfg: &McConfig,
) -> Result<impl Iterator<Item = DVector<f64>>> {
    let sampler = QuadratureSampler::new(cov, cfg.seed)?;
    Ok((0..cfg.samples as u64).map(move |i| sampler.sample(i)))
}

/// Runs `block` over every reduction block in parallel and folds the
/// results in block order.
fn reduce_blocks<T, F, G>(cfg: &McConfig, block: F, merge: G) -> T
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
    G: Fn(T, T) -> T,
{
    let total = cfg.samples;
    let parts: Vec<T> = (0..total.div_ceil(BLOCK))
        .into_par_iter()
        .with_min_len(cfg.blocks_per_task())
        .map(|b| {
            let start = b * BLOCK;
            block(start as u64, (start + BLOCK).min(total) as u64)
        })
        .collect();
    parts.into_iter().reduce(merge).expect("at least one block")
}

/// Empirical covariance `(1/M) sum x x^T` of zero-mean samples.
pub fn empirical_covariance(cov: &NoiseCovariance, cfg: &McConfig) -> Result<DMatrix<f64>> {
    let sampler = QuadratureSampler::new(cov, cfg.seed)?;
    let dim = sampler.dim();
    let sum = reduce_blocks(
        cfg,
        |start, end| {
            let mut acc = DMatrix::zeros(dim, dim);
            for i in start..end {
                let x = sampler.sample(i);
                acc.ger(1.0, &x, &x, 1.0);
            }
            acc
        },
        |a, b| a + b,
    );
    Ok(sum / cfg.samples as f64)
}

/// Empirical noise power of a quadrature projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    /// Sample variance of `v . x` about its known zero mean.
    pub variance: f64,
    /// Sample mean of `v . x`.
    pub mean: f64,
    pub samples: usize,
    /// Relative tolerance `3 sqrt(2/M)`.
    pub tolerance: f64,
}

impl McEstimate {
    /// True when `|variance - analytic| / analytic` is within tolerance.
    pub fn agrees_with(&self, analytic: f64) -> bool {
        ((self.variance - analytic) / analytic).abs() < self.tolerance
    }
}

/// Samples `v . x + sqrt(vacuum_weight) z` where `x` has covariance `cov`
/// and `z` is an independent standard normal for the unrepresented vacuum.
///
/// Only the components of `x` on the support of `v` are drawn.
pub fn mc_noise_power(
    cov: &NoiseCovariance,
    projection: &QuadratureProjection,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if projection.vector.len() != cov.dim() {
        return Err(Error::usage(format!(
            "projection has length {}, covariance dimension is {}",
            projection.vector.len(),
            cov.dim()
        )));
    }
    if !(projection.vacuum_weight >= 0.0) {
        return Err(Error::usage("vacuum weight must be >= 0"));
    }
    // v . x only involves the coordinates where v is nonzero, and their
    // marginal is the corresponding submatrix.
    symmetric_sqrt(cov.matrix())?;
    let support: Vec<usize> = (0..cov.dim())
        .filter(|&k| projection.vector[k] != 0.0)
        .collect();
    let sub = cov.matrix().select_rows(&support).select_columns(&support);
    let v = projection.vector.select_rows(&support);
    let w = if support.is_empty() {
        DVector::zeros(0)
    } else {
        symmetric_sqrt(&sub)? * v
    };
    let vac = projection.vacuum_weight.sqrt();
    let (sum, sum_sq) = reduce_blocks(
        cfg,
        |start, end| {
            let (mut s, mut s2) = (0.0, 0.0);
            for i in start..end {
                let mut rng = rng_for(cfg.seed, i);
                let mut y = 0.0;
                for wk in w.iter() {
                    let z: f64 = rng.sample(StandardNormal);
                    y += wk * z;
                }
                let z: f64 = rng.sample(StandardNormal);
                y += vac * z;
                s += y;
                s2 += y * y;
            }
            (s, s2)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    let m = cfg.samples as f64;
    Ok(McEstimate {
        variance: sum_sq / m,
        mean: sum / m,
        samples: cfg.samples,
        tolerance: cfg.tolerance(),
    })
}
