//! Physical constants and the unit convention.
//!
//! User-facing frequencies are ordinary frequencies in MHz (cycles per
//! microsecond); everything stored here is angular, in rad/us and
//! rad/(us G). Time is in microseconds and fields in Gauss.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts an ordinary frequency (MHz) into an angular one (rad/us).
#[inline]
pub fn to_angular(freq_mhz: f64) -> f64 {
    TAU * freq_mhz
}

/// Inverse of [`to_angular`].
#[inline]
pub fn from_angular(omega: f64) -> f64 {
    omega / TAU
}

/// Gauss to Tesla.
pub const TESLA_PER_GAUSS: f64 = 1e-4;
/// Microseconds to seconds.
pub const SECONDS_PER_MICROSECOND: f64 = 1e-6;

/// Zero-field splitting and gyromagnetic ratios, stored as angular values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysConstants {
    /// Zero-field splitting D (rad/us).
    pub zero_field_splitting: f64,
    /// Electron gyromagnetic ratio (rad/(us G)).
    pub gamma_e: f64,
    /// Nuclear gyromagnetic ratio of the meter (rad/(us G)).
    pub gamma_c: f64,
}

impl PhysConstants {
    /// Builds the constants from ordinary-frequency inputs: D in MHz,
    /// gyromagnetic ratios in MHz/G.
    pub fn from_ordinary(
        d_mhz: f64,
        gamma_e_mhz_per_g: f64,
        gamma_c_mhz_per_g: f64,
    ) -> Result<Self> {
        let c = Self {
            zero_field_splitting: to_angular(d_mhz),
            gamma_e: to_angular(gamma_e_mhz_per_g),
            gamma_c: to_angular(gamma_c_mhz_per_g),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.zero_field_splitting > 0.0
            && self.gamma_e > self.gamma_c
            && self.gamma_c > 0.0
            && self.gamma_e.is_finite()
            && self.zero_field_splitting.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "constants must satisfy D > 0 and gamma_e > gamma_c > 0, got {self:?}"
            )))
        }
    }
}

impl Default for PhysConstants {
    /// NV centre with a 13C meter: D = 2.87 GHz, gamma_e = 2.8 MHz/G,
    /// gamma_c = 1.07 kHz/G.
    fn default() -> Self {
        Self {
            zero_field_splitting: to_angular(2870.0),
            gamma_e: to_angular(2.8),
            gamma_c: to_angular(1.07e-3),
        }
    }
}
