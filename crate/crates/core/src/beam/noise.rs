use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{check_n_max, flipped_mode_coeffs, OverlapVector};

/// Tolerance on the norm of a user-supplied mode shape.
pub const SHAPE_NORM_TOL: f64 = 1e-6;

/// Amplitude (`X+`) or phase (`X-`) quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrature {
    Amplitude,
    Phase,
}

/// Shape of a transverse mode to squeeze or to project onto.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeShape {
    Tem10,
    /// The flipped mode, represented exactly: Hermite-Gauss orders up to
    /// `n_max` plus the normalized remainder slot.
    Flipped,
    /// A normalized real superposition of Hermite-Gauss modes.
    Custom(OverlapVector),
}

impl ModeShape {
    /// Coefficients over the `n_max + 2` mode slots (Hermite-Gauss orders
    /// followed by the flipped remainder).
    pub fn slot_vector(&self, n_max: usize) -> Result<DVector<f64>> {
        let mut v = DVector::zeros(n_max + 2);
        match self {
            ModeShape::Tem10 => {
                if n_max < 1 {
                    return Err(Error::Truncation { n: 1, n_max });
                }
                v[1] = 1.0;
            }
            ModeShape::Flipped => {
                let c = flipped_mode_coeffs(n_max);
                for (n, cn) in c.iter().enumerate() {
                    v[n] = *cn;
                }
                v[n_max + 1] = (1.0 - c.norm_sq()).max(0.0).sqrt();
            }
            ModeShape::Custom(shape) => {
                if shape.len() > n_max + 1 {
                    if let Some(n) = (n_max + 1..shape.len()).find(|&n| shape.get(n) != 0.0) {
                        return Err(Error::Truncation { n, n_max });
                    }
                }
                let norm = shape.norm_sq().sqrt();
                if (norm - 1.0).abs() > SHAPE_NORM_TOL {
                    return Err(Error::usage(format!(
                        "mode shape must be normalized, |shape| = {norm}"
                    )));
                }
                for (n, cn) in shape.iter().enumerate().take(n_max + 1) {
                    v[n] = *cn;
                }
            }
        }
        Ok(v)
    }
}

/// A linear combination of quadratures, `v . X`, plus a weight carried by
/// vacuum modes outside the represented slots (each contributing variance 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureProjection {
    pub vector: DVector<f64>,
    pub vacuum_weight: f64,
}

impl QuadratureProjection {
    /// Quadrature at `angle` of the mode with slot coefficients `mode`:
    /// `sum_s m_s (cos(angle) X+_s + sin(angle) X-_s)`.
    pub fn of_mode(mode: &DVector<f64>, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut v = DVector::zeros(2 * mode.len());
        for (k, m) in mode.iter().enumerate() {
            v[2 * k] = m * c;
            v[2 * k + 1] = m * s;
        }
        QuadratureProjection {
            vector: v,
            vacuum_weight: 0.0,
        }
    }

    /// Variance of this projection for a coherent state.
    pub fn norm_sq(&self) -> f64 {
        self.vector.norm_squared() + self.vacuum_weight
    }
}

/// Shot-noise-normalized quadrature covariance.
///
/// Ordering is `(X+_0, X-_0, X+_1, X-_1, ..., X+_nmax, X-_nmax, X+_r, X-_r)`
/// where `r` is the *flipped remainder*: the normalized part of the flipped
/// mode orthogonal to orders `<= n_max`. Every mode not represented is in
/// vacuum. The identity matrix is the coherent state.
///
/// Quadratures follow `X+ = a + a^dag`, `X- = -i(a - a^dag)`, so that
/// `X^phi = cos(phi) X+ + sin(phi) X-`.
///
/// The remainder mode is not shape-invariant under propagation;
/// `remainder_phase` records the Gouy phase it has accumulated since it was
/// defined, and detectors resolve it through the closed-form flipped spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCovariance {
    n_max: usize,
    matrix: DMatrix<f64>,
    remainder_phase: f64,
}

impl NoiseCovariance {
    /// Coherent state (or vacuum) on all modes.
    pub fn vacuum(n_max: usize) -> Result<Self> {
        check_n_max(n_max)?;
        let dim = 2 * (n_max + 2);
        Ok(NoiseCovariance {
            n_max,
            matrix: DMatrix::identity(dim, dim),
            remainder_phase: 0.0,
        })
    }

    /// Wraps an explicit matrix after checking shape, finiteness and symmetry.
    pub fn from_matrix(n_max: usize, matrix: DMatrix<f64>, remainder_phase: f64) -> Result<Self> {
        check_n_max(n_max)?;
        let dim = 2 * (n_max + 2);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::usage(format!(
                "covariance must be {dim}x{dim} for n_max = {n_max}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) || !remainder_phase.is_finite() {
            return Err(Error::Numeric(
                "covariance contains non-finite entries".into(),
            ));
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-12 * matrix.amax().max(1.0) {
            return Err(Error::Numeric(format!(
                "covariance is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        Ok(NoiseCovariance {
            n_max,
            matrix,
            remainder_phase,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of mode slots, `n_max + 2`.
    pub fn slots(&self) -> usize {
        self.n_max + 2
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Slot index of the flipped remainder.
    pub fn remainder_slot(&self) -> usize {
        self.n_max + 1
    }

    pub fn remainder_phase(&self) -> f64 {
        self.remainder_phase
    }

    pub fn index(slot: usize, q: Quadrature) -> usize {
        2 * slot
            + match q {
                Quadrature::Amplitude => 0,
                Quadrature::Phase => 1,
            }
    }

    /// 2x2 covariance block of one mode slot.
    pub fn block(&self, slot: usize) -> Matrix2<f64> {
        self.matrix
            .fixed_view::<2, 2>(2 * slot, 2 * slot)
            .into_owned()
    }

    pub fn block_det(&self, slot: usize) -> f64 {
        self.block(slot).determinant()
    }

    /// Variance of TEM_n0's quadrature at `angle`.
    pub fn mode_variance(&self, n: usize, angle: f64) -> Result<f64> {
        if n > self.n_max {
            return Err(Error::Truncation {
                n,
                n_max: self.n_max,
            });
        }
        let b = self.block(n);
        let (s, c) = angle.sin_cos();
        Ok(c * c * b[(0, 0)] + 2.0 * s * c * b[(0, 1)] + s * s * b[(1, 1)])
    }

    /// Variance of the quadrature at `angle` of a normalized mode shape.
    pub fn shape_variance(&self, shape: &ModeShape, angle: f64) -> Result<f64> {
        let m = shape.slot_vector(self.n_max)?;
        Ok(self.variance(&QuadratureProjection::of_mode(&m, angle)))
    }

    /// `v^T C v + vacuum_weight`.
    pub fn variance(&self, p: &QuadratureProjection) -> f64 {
        debug_assert_eq!(p.vector.len(), self.dim());
        (p.vector.transpose() * &self.matrix * &p.vector)[(0, 0)] + p.vacuum_weight
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigenvalues().min()
    }

    /// True when the slot is in vacuum and uncorrelated with everything else.
    pub fn slot_is_vacuum(&self, slot: usize) -> bool {
        let tol = 1e-14;
        (0..self.dim()).all(|j| {
            (2 * slot..2 * slot + 2).all(|i| {
                let expect = if i == j { 1.0 } else { 0.0 };
                (self.matrix[(i, j)] - expect).abs() <= tol
            })
        })
    }

    /// Slots with odd transverse parity (odd Hermite-Gauss orders and the
    /// flipped remainder).
    pub fn odd_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots()).filter(move |&s| s == self.n_max + 1 || s % 2 == 1)
    }

    /// Copies the rows/columns of the given slots from `other`, and zeroes
    /// their correlations with all remaining slots.
    pub(crate) fn with_slots_from(
        &self,
        other: &NoiseCovariance,
        slots: &[usize],
    ) -> NoiseCovariance {
        let mut taken = vec![false; self.dim()];
        for &s in slots {
            taken[2 * s] = true;
            taken[2 * s + 1] = true;
        }
        let mut m = self.matrix.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(i, j)] = match (taken[i], taken[j]) {
                    (true, true) => other.matrix[(i, j)],
                    (false, false) => self.matrix[(i, j)],
                    _ => 0.0,
                };
            }
        }
        let remainder_phase = if slots.contains(&(self.n_max + 1)) {
            other.remainder_phase
        } else {
            self.remainder_phase
        };
        NoiseCovariance {
            n_max: self.n_max,
            matrix: m,
            remainder_phase,
        }
    }

    /// Loss channel with transmission `eta` on the given slots:
    /// `C -> L C L + (1 - eta) P` with `L = sqrt(eta)` on the lossy
    /// quadratures and `P` their projector.
    pub fn with_loss(&self, slots: &[usize], eta: f64) -> Result<NoiseCovariance> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::usage(format!(
                "transmission must be in (0, 1], got {eta}"
            )));
        }
        let mut l = DVector::from_element(self.dim(), 1.0);
        for &s in slots {
            if s >= self.slots() {
                return Err(Error::Truncation {
                    n: s,
                    n_max: self.n_max + 1,
                });
            }
            l[2 * s] = eta.sqrt();
            l[2 * s + 1] = eta.sqrt();
        }
        let mut m = self.matrix.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(i, j)] *= l[i] * l[j];
            }
            if l[i] != 1.0 {
                m[(i, i)] += 1.0 - eta;
            }
        }
        Ok(NoiseCovariance {
            n_max: self.n_max,
            matrix: m,
            remainder_phase: self.remainder_phase,
        })
    }

    /// Rotates every Hermite-Gauss slot `n` by `n * dphi` (the state seen
    /// after a Gouy phase advance of `dphi`) and advances the remainder phase.
    pub(crate) fn gouy_rotated(&self, dphi: f64) -> NoiseCovariance {
        if dphi == 0.0 {
            return self.clone();
        }
        let dim = self.dim();
        let mut r = DMatrix::<f64>::identity(dim, dim);
        for n in 1..=self.n_max {
            let (s, c) = (n as f64 * dphi).sin_cos();
            let k = 2 * n;
            r[(k, k)] = c;
            r[(k, k + 1)] = s;
            r[(k + 1, k)] = -s;
            r[(k + 1, k + 1)] = c;
        }
        let m = &r * &self.matrix * r.transpose();
        NoiseCovariance {
            n_max: self.n_max,
            matrix: (&m + m.transpose()) * 0.5,
            remainder_phase: self.remainder_phase + dphi,
        }
    }
}

/// Fills a mode with squeezed light.
///
/// The normalized mode `shape` gets variance `10^(-squeeze_db/10)` along the
/// quadrature at `squeeze_angle` and `10^(antisqueeze_db/10)` along the
/// orthogonal one, through the rank-two update
/// `C + (V_s - 1) s s^T + (V_a - 1) a a^T`. Orthogonal modes are untouched.
pub fn inject_squeezed_mode(
    cov: &NoiseCovariance,
    shape: &ModeShape,
    squeeze_db: f64,
    antisqueeze_db: f64,
    squeeze_angle: f64,
) -> Result<NoiseCovariance> {
    if !(squeeze_db.is_finite() && antisqueeze_db.is_finite() && squeeze_angle.is_finite()) {
        return Err(Error::usage("squeezing parameters must be finite"));
    }
    if squeeze_db < 0.0 {
        return Err(Error::usage(format!(
            "squeeze_dB must be >= 0, got {squeeze_db}"
        )));
    }
    if antisqueeze_db < squeeze_db {
        return Err(Error::usage(format!(
            "antisqueeze_dB ({antisqueeze_db}) must be >= squeeze_dB ({squeeze_db})"
        )));
    }
    let m = shape.slot_vector(cov.n_max)?;
    let rem = cov.remainder_slot();
    let mut remainder_phase = cov.remainder_phase;
    if m[rem] != 0.0 && remainder_phase != 0.0 {
        if cov.slot_is_vacuum(rem) {
            remainder_phase = 0.0;
        } else {
            return Err(Error::Unsupported(
                "flipped-mode squeezing after the existing flipped remainder has propagated".into(),
            ));
        }
    }

    let v_s = super::variance_from_squeeze_db(squeeze_db);
    let v_a = super::variance_from_db(antisqueeze_db);
    let s = QuadratureProjection::of_mode(&m, squeeze_angle).vector;
    let a = QuadratureProjection::of_mode(&m, squeeze_angle + std::f64::consts::FRAC_PI_2).vector;
    let mut matrix = cov.matrix.clone();
    matrix += (v_s - 1.0) * &s * s.transpose();
    matrix += (v_a - 1.0) * &a * a.transpose();
    let matrix = (&matrix + matrix.transpose()) * 0.5;
    Ok(NoiseCovariance {
        n_max: cov.n_max,
        matrix,
        remainder_phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn vacuum_is_identity() {
        let c = NoiseCovariance::vacuum(3).unwrap();
        assert_eq!(c.dim(), 10);
        assert_eq!(c.trace(), 10.0);
        assert!(c.slot_is_vacuum(4));
    }

    #[test]
    fn zero_db_injection_is_identity() {
        let c = NoiseCovariance::vacuum(5).unwrap();
        let d = inject_squeezed_mode(&c, &ModeShape::Flipped, 0.0, 0.0, 0.3).unwrap();
        assert!((d.matrix() - c.matrix()).amax() < 1e-15);
    }

    #[test]
    fn tem10_two_eight() {
        let c = NoiseCovariance::vacuum(41).unwrap();
        let d = inject_squeezed_mode(&c, &ModeShape::Tem10, 2.0, 8.0, 0.0).unwrap();
        assert!((d.mode_variance(1, 0.0).unwrap() - 10f64.powf(-0.2)).abs() < 1e-15);
        assert!((d.mode_variance(1, FRAC_PI_2).unwrap() - 10f64.powf(0.8)).abs() < 1e-13);
        assert!((d.mode_variance(3, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((10f64.powf(-0.2) - 0.631).abs() < 5e-4);
    }

    #[test]
    fn flipped_injection_reads_back() {
        let c = NoiseCovariance::vacuum(41).unwrap();
        let d = inject_squeezed_mode(&c, &ModeShape::Flipped, 3.6, 3.6, 0.0).unwrap();
        let v = d.shape_variance(&ModeShape::Flipped, 0.0).unwrap();
        assert!((v - 10f64.powf(-0.36)).abs() < 1e-12);
        let va = d.shape_variance(&ModeShape::Flipped, FRAC_PI_2).unwrap();
        assert!((va - 10f64.powf(0.36)).abs() < 1e-12);
        // an orthogonal mode stays at shot noise
        assert!((d.mode_variance(2, 0.3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_shapes_and_levels() {
        let c = NoiseCovariance::vacuum(5).unwrap();
        let bad = ModeShape::Custom(OverlapVector::new(vec![0.0, 0.9, 0.0]));
        assert!(matches!(
            inject_squeezed_mode(&c, &bad, 1.0, 1.0, 0.0),
            Err(Error::Usage(_))
        ));
        assert!(inject_squeezed_mode(&c, &ModeShape::Tem10, -1.0, 1.0, 0.0).is_err());
        assert!(inject_squeezed_mode(&c, &ModeShape::Tem10, 3.0, 1.0, 0.0).is_err());
        let long = ModeShape::Custom(OverlapVector::new(
            vec![0.0; 6].into_iter().chain([1.0]).collect(),
        ));
        assert!(matches!(
            inject_squeezed_mode(&c, &long, 1.0, 1.0, 0.0),
            Err(Error::Truncation { n: 6, .. })
        ));
    }

    #[test]
    fn loss_channel() {
        let c = NoiseCovariance::vacuum(3).unwrap();
        let d = inject_squeezed_mode(&c, &ModeShape::Tem10, 3.6, 3.6, 0.0).unwrap();
        let l = d.with_loss(&[1], 0.97).unwrap();
        let v = 10f64.powf(-0.36);
        assert!((l.mode_variance(1, 0.0).unwrap() - (0.97 * v + 0.03)).abs() < 1e-15);
        assert!(d.with_loss(&[1], 0.0).is_err());
        assert!(d.with_loss(&[1], 1.5).is_err());
    }

    #[test]
    fn from_matrix_validates() {
        let m = DMatrix::<f64>::identity(6, 6);
        assert!(NoiseCovariance::from_matrix(1, m.clone(), 0.0).is_ok());
        assert!(NoiseCovariance::from_matrix(2, m.clone(), 0.0).is_err());
        let mut a = m;
        a[(0, 1)] = 0.5;
        assert!(NoiseCovariance::from_matrix(1, a, 0.0).is_err());
    }
}
