use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classical envelope of a TEM00 beam: waist, wavelength and the derived
/// Rayleigh range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryRepr", into = "GeometryRepr")]
pub struct BeamGeometry {
    waist: f64,
    wavelength: f64,
    rayleigh: f64,
}

#[derive(Serialize, Deserialize)]
struct GeometryRepr {
    waist_m: f64,
    wavelength_m: f64,
}

impl TryFrom<GeometryRepr> for BeamGeometry {
    type Error = Error;

    fn try_from(r: GeometryRepr) -> Result<Self> {
        BeamGeometry::new(r.waist_m, r.wavelength_m)
    }
}

impl From<BeamGeometry> for GeometryRepr {
    fn from(g: BeamGeometry) -> Self {
        GeometryRepr {
            waist_m: g.waist,
            wavelength_m: g.wavelength,
        }
    }
}

impl BeamGeometry {
    /// Builds a geometry from the waist radius and wavelength, both in metres.
    pub fn new(waist: f64, wavelength: f64) -> Result<Self> {
        if !(waist.is_finite() && waist > 0.0) {
            return Err(Error::geometry(format!("waist must be > 0, got {waist}")));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::geometry(format!(
                "wavelength must be > 0, got {wavelength}"
            )));
        }
        Ok(BeamGeometry {
            waist,
            wavelength,
            rayleigh: std::f64::consts::PI * waist * waist / wavelength,
        })
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn rayleigh_range(&self) -> f64 {
        self.rayleigh
    }

    /// Beam radius w(z) at distance `z` from the waist.
    pub fn spot_size(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return f64::INFINITY;
        }
        self.waist * (1.0 + (z / self.rayleigh).powi(2)).sqrt()
    }

    pub fn gouy_phase(&self, z: f64) -> f64 {
        gouy_phase(z, self)
    }

    /// Same wavelength, different waist.
    pub fn with_waist(&self, waist: f64) -> Result<Self> {
        BeamGeometry::new(waist, self.wavelength)
    }
}

/// Gouy phase `arctan(z / z_R)`, in (-pi/2, pi/2); `z = +inf` gives pi/2.
pub fn gouy_phase(z: f64, geom: &BeamGeometry) -> f64 {
    (z / geom.rayleigh).atan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn geom() -> BeamGeometry {
        BeamGeometry::new(100e-6, 1e-6).unwrap()
    }

    #[test]
    fn rayleigh_recomputes() {
        let g = geom();
        let z_r = PI * g.waist() * g.waist() / g.wavelength();
        assert!(((g.rayleigh_range() - z_r) / z_r).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(BeamGeometry::new(0.0, 1e-6).is_err());
        assert!(BeamGeometry::new(1e-4, -1.0).is_err());
        assert!(BeamGeometry::new(f64::NAN, 1e-6).is_err());
    }

    #[test]
    fn gouy_reference_points() {
        let g = geom();
        assert_eq!(gouy_phase(0.0, &g), 0.0);
        assert!((gouy_phase(g.rayleigh_range(), &g) - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(gouy_phase(f64::INFINITY, &g), FRAC_PI_2);
    }

    #[test]
    fn gouy_is_odd_and_increasing() {
        let g = geom();
        let mut prev = f64::NEG_INFINITY;
        for i in -50..=50 {
            let z = i as f64 * 0.013;
            let phi = gouy_phase(z, &g);
            assert_eq!(phi, -gouy_phase(-z, &g));
            assert!(phi > prev);
            prev = phi;
        }
    }

    #[test]
    fn serde_round_trip_revalidates() {
        let g = geom();
        let s = serde_json::to_string(&g).unwrap();
        let back: BeamGeometry = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert!(serde_json::from_str::<BeamGeometry>(r#"{"waist_m":0,"wavelength_m":1}"#).is_err());
    }
}
