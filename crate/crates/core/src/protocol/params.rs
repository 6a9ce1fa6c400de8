//! Parameters of the pre-selection / free evolution / post-selection
//! sequence.

use std::f64::consts::FRAC_PI_2;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{to_angular, PhysConstants, SpinSystem};

/// Above this value of gamma_c B tau the weak-field forms are
/// visibly off; under `PhaseModel::WeakField` a warning is logged once.
pub const WEAK_FIELD_WARN: f64 = 1e-2;

static WEAK_FIELD_WARNED: AtomicBool = AtomicBool::new(false);

/// Nuclear spin used as the meter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    C13,
    N15,
    /// Arbitrary hyperfine coupling given in MHz.
    Custom {
        a_zz_mhz: f64,
    },
}

impl Species {
    /// Secular hyperfine coupling in rad/us.
    pub fn a_zz(&self) -> f64 {
        match *self {
            Species::C13 => to_angular(0.5),
            Species::N15 => to_angular(3.03),
            Species::Custom { a_zz_mhz } => to_angular(a_zz_mhz),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Species::C13 => "c13",
            Species::N15 => "n15",
            Species::Custom { .. } => "custom",
        }
    }
}

/// How the nuclear Zeeman phase enters the free evolution and the closed
/// forms built on it.
///
/// `Exact` keeps gamma_c B on both electron branches. Since that term is
/// the same on |0> and |1>, the relative phases that reach P_s and <I_z>
/// come out free of gamma_c. `WeakField` is the weak-field bookkeeping where
/// the |0> branch phase is dropped while gamma_c B / 2 stays inside the
/// detunings, which is off by O(gamma_c B tau).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseModel {
    #[default]
    Exact,
    WeakField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    /// Nuclear pre-selection angle (rad).
    pub alpha: f64,
    /// Electron pre-selection angle (rad).
    pub theta_i: f64,
    /// Electron post-selection angle (rad).
    pub theta_f: f64,
    /// Interrogation time (us).
    pub tau: f64,
    /// Field to sense (G).
    pub b_field: f64,
    /// Bias field along the NV axis (G). Drops out in the rotating frame.
    pub bias_field: f64,
    pub species: Species,
    /// Electron dephasing time (us); `f64::INFINITY` means lossless.
    pub t2_star: f64,
    pub phase_model: PhaseModel,
    pub consts: PhysConstants,
}

impl ProtocolParams {
    /// alpha = theta_i = theta_f = pi/2, lossless, exact phases.
    pub fn symmetric(species: Species, b_field: f64, tau: f64) -> Self {
        Self {
            alpha: FRAC_PI_2,
            theta_i: FRAC_PI_2,
            theta_f: FRAC_PI_2,
            tau,
            b_field,
            bias_field: 0.0,
            species,
            t2_star: f64::INFINITY,
            phase_model: PhaseModel::Exact,
            consts: PhysConstants::default(),
        }
    }

    pub fn with_angles(mut self, alpha: f64, theta_i: f64, theta_f: f64) -> Self {
        self.alpha = alpha;
        self.theta_i = theta_i;
        self.theta_f = theta_f;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_field(mut self, b_field: f64) -> Self {
        self.b_field = b_field;
        self
    }

    pub fn with_t2_star(mut self, t2_star: f64) -> Self {
        self.t2_star = t2_star;
        self
    }

    pub fn with_phase_model(mut self, model: PhaseModel) -> Self {
        self.phase_model = model;
        self
    }

    pub fn with_species(mut self, species: Species) -> Self {
        self.species = species;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let angles = [self.alpha, self.theta_i, self.theta_f];
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "angles must be finite, got {angles:?}"
            )));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be finite and >= 0, got {}",
                self.tau
            )));
        }
        if !(self.t2_star > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T2* must be > 0, got {}",
                self.t2_star
            )));
        }
        if !(self.b_field.is_finite() && self.bias_field.is_finite()) {
            return Err(Error::InvalidParameter("fields must be finite".into()));
        }
        if let Species::Custom { a_zz_mhz } = self.species {
            if !a_zz_mhz.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "A_zz must be finite, got {a_zz_mhz}"
                )));
            }
        }
        self.consts.validate()?;
        let weak = self.weak_field_parameter();
        // once per process: sweeps validate millions of points
        if self.phase_model == PhaseModel::WeakField
            && weak > WEAK_FIELD_WARN
            && !WEAK_FIELD_WARNED.swap(true, Ordering::Relaxed)
        {
            log::warn!(
                "gamma_c B tau = {weak:.3e} is not small; weak-field forms are inaccurate here"
            );
        }
        Ok(())
    }

    pub fn a_zz(&self) -> f64 {
        self.species.a_zz()
    }

    /// |gamma_c B tau|.
    pub fn weak_field_parameter(&self) -> f64 {
        (self.consts.gamma_c * self.b_field * self.tau).abs()
    }

    pub fn spin_system(&self) -> SpinSystem {
        SpinSystem {
            consts: self.consts,
            a_zz: self.a_zz(),
            b_field: self.b_field,
            bias_field: self.bias_field,
        }
    }

    /// exp(-tau / T2*), the factor on electron coherences after the free
    /// evolution.
    pub fn coherence_decay(&self) -> f64 {
        if self.t2_star.is_infinite() {
            1.0
        } else {
            (-self.tau / self.t2_star).exp()
        }
    }

    /// Diagonal free-evolution energies on (|0 up>, |0 down>, |1 up>, |1 down>)
    /// in rad/us.
    pub fn branch_energies(&self) -> [f64; 4] {
        let (up, down) = crate::spin::detunings(&self.spin_system());
        let half_gc = self.consts.gamma_c * self.b_field / 2.0;
        match self.phase_model {
            PhaseModel::Exact => [half_gc, -half_gc, up, down],
            PhaseModel::WeakField => [0.0, 0.0, up, down],
        }
    }

    /// d/dB of [`Self::branch_energies`]; the energies are linear in B.
    pub fn branch_energy_slopes(&self) -> [f64; 4] {
        let (ge, gc) = (self.consts.gamma_e, self.consts.gamma_c);
        let one = [-ge + gc / 2.0, -ge - gc / 2.0];
        match self.phase_model {
            PhaseModel::Exact => [gc / 2.0, -gc / 2.0, one[0], one[1]],
            PhaseModel::WeakField => [0.0, 0.0, one[0], one[1]],
        }
    }

    /// d/dB of [`Self::branch_phases`].
    pub fn branch_phase_slopes(&self) -> (f64, f64) {
        let e = self.branch_energy_slopes();
        ((e[2] - e[0]) * self.tau, (e[3] - e[1]) * self.tau)
    }

    /// Relative phases (phi_up, phi_down) = (E_1m - E_0m) tau picked up
    /// between the two electron branches.
    pub fn branch_phases(&self) -> (f64, f64) {
        let e = self.branch_energies();
        ((e[2] - e[0]) * self.tau, (e[3] - e[1]) * self.tau)
    }

    /// Effective hyperfine splitting that appears in the symmetric signal:
    /// phi_down - phi_up = A_eff tau.
    pub fn effective_splitting(&self) -> f64 {
        match self.phase_model {
            PhaseModel::Exact => self.a_zz(),
            PhaseModel::WeakField => self.a_zz() - self.consts.gamma_c * self.b_field,
        }
    }

    /// d/dB of [`Self::effective_splitting`].
    pub fn effective_splitting_slope(&self) -> f64 {
        match self.phase_model {
            PhaseModel::Exact => 0.0,
            PhaseModel::WeakField => -self.consts.gamma_c,
        }
    }
}
