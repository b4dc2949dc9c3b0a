use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Beam, ModalField, NoiseCovariance};
use crate::error::{Error, Result};
use crate::modes::BeamGeometry;

pub const BEAM_STATE_FORMAT: &str = "tem10-beam-state";
pub const BEAM_STATE_VERSION: u32 = 1;
/// Covariance ordering recorded in every serialized state.
pub const BEAM_STATE_ORDERING: &str =
    "X+_0,X-_0,X+_1,X-_1,...,X+_nmax,X-_nmax,X+_flipped_remainder,X-_flipped_remainder";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamStateFile {
    format: String,
    version: u32,
    ordering: String,
    geometry: BeamGeometry,
    photons: f64,
    integration_time_s: f64,
    plane_z_m: f64,
    n_max: usize,
    /// `[re, im]` per Hermite-Gauss order.
    coeffs: Vec<[f64; 2]>,
    remainder_phase_rad: f64,
    covariance: Vec<Vec<f64>>,
}

pub(super) fn to_json(beam: &Beam) -> Result<String> {
    let m = beam.noise.matrix();
    let file = BeamStateFile {
        format: BEAM_STATE_FORMAT.into(),
        version: BEAM_STATE_VERSION,
        ordering: BEAM_STATE_ORDERING.into(),
        geometry: *beam.geometry(),
        photons: beam.field.photons(),
        integration_time_s: beam.field.integration_time(),
        plane_z_m: beam.field.plane_z(),
        n_max: beam.n_max(),
        coeffs: beam.field.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        remainder_phase_rad: beam.noise.remainder_phase(),
        covariance: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub(super) fn from_json(text: &str) -> Result<Beam> {
    let file: BeamStateFile = serde_json::from_str(text)?;
    if file.format != BEAM_STATE_FORMAT || file.version != BEAM_STATE_VERSION {
        return Err(Error::Serde(format!(
            "unsupported beam state {} v{} (expected {BEAM_STATE_FORMAT} v{BEAM_STATE_VERSION})",
            file.format, file.version
        )));
    }
    if file.ordering != BEAM_STATE_ORDERING {
        return Err(Error::Serde(format!(
            "unknown covariance ordering `{}`",
            file.ordering
        )));
    }
    if file.coeffs.len() != file.n_max + 1 {
        return Err(Error::Serde(format!(
            "expected {} coefficients for n_max = {}, got {}",
            file.n_max + 1,
            file.n_max,
            file.coeffs.len()
        )));
    }
    let dim = 2 * (file.n_max + 2);
    if file.covariance.len() != dim || file.covariance.iter().any(|r| r.len() != dim) {
        return Err(Error::Serde(format!("covariance must be {dim}x{dim}")));
    }
    let matrix = DMatrix::from_fn(dim, dim, |i, j| file.covariance[i][j]);
    let noise = NoiseCovariance::from_matrix(file.n_max, matrix, file.remainder_phase_rad)?;
    let coeffs = file
        .coeffs
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let field = ModalField::from_parts(
        file.geometry,
        coeffs,
        file.photons,
        file.integration_time_s,
        file.plane_z_m,
    )?;
    Beam::new(field, noise)
}
