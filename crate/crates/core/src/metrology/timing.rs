//! Time spent per measurement outside the interrogation window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named timing budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingPreset {
    C13Cryo,
    N15Cryo,
    RoomTemp,
    Ramsey,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingBudget {
    /// Initialisation time t_i (us).
    pub t_init: f64,
    /// Electron readout / post-selection time t_p (us).
    pub t_post: f64,
    /// Nuclear readout time t_r (us).
    pub t_nuclear: f64,
    /// Readout efficiency C in (0, 1].
    pub efficiency: f64,
}

impl TimingBudget {
    pub fn preset(preset: TimingPreset) -> Self {
        match preset {
            TimingPreset::C13Cryo => Self {
                t_init: 6.0,
                t_post: 3.7,
                t_nuclear: 5.7,
                efficiency: 1.0,
            },
            TimingPreset::N15Cryo => Self {
                t_init: 1.0,
                t_post: 3.7,
                t_nuclear: 4.2,
                efficiency: 1.0,
            },
            TimingPreset::RoomTemp => Self {
                t_init: 1.0,
                t_post: 5000.0,
                t_nuclear: 8000.0,
                efficiency: 0.707,
            },
            TimingPreset::Ramsey => Self {
                t_init: 1.0,
                t_post: 3.7,
                t_nuclear: 0.0,
                efficiency: 1.0,
            },
        }
    }

    pub fn with_efficiency(mut self, efficiency: f64) -> Self {
        self.efficiency = efficiency;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let times = [self.t_init, self.t_post, self.t_nuclear];
        if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "timing entries must be finite and >= 0, got {times:?}"
            )));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "efficiency must lie in (0, 1], got {}",
                self.efficiency
            )));
        }
        Ok(())
    }

    /// t_m = N (t_i + tau + t_p) + t_r with N = 1 / P_s.
    pub fn post_selection_time(&self, tau: f64, success_probability: f64) -> f64 {
        (self.t_init + tau + self.t_post) / success_probability + self.t_nuclear
    }

    /// t_m = t_i + tau + t_p.
    pub fn ramsey_time(&self, tau: f64) -> f64 {
        self.t_init + tau + self.t_post
    }
}
