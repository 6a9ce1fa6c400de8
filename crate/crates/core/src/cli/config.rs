//! Experiment configuration files.
//!
//! TOML with sections `[physics]`, `[protocol]`, `[timing]`, `[noise]`,
//! `[sweep]` and `[output]`. Unknown keys are errors. Every key has a
//! default; [`ExperimentConfig::resolve`] fills the command-dependent ones
//! so that the echoed configuration reproduces a run on its own.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{OuParams, MIN_TRAJECTORIES};
use crate::metrology::{TimingBudget, TimingPreset};
use crate::protocol::{PhaseModel, ProtocolParams, Species};
use crate::spin::PhysConstants;
use crate::sweeps::{Axis, NoiseComparison, TauSearch};

/// Problems with the configuration itself, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesName {
    C13,
    N15,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    #[default]
    Markovian,
    Ou,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensitivityMode {
    /// Optimised eta against T2*.
    #[default]
    T2,
    /// One working point; tau is optimised unless given.
    Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsSection {
    pub species: SpeciesName,
    /// Hyperfine coupling override (MHz); required for `custom`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_zz_mhz: Option<f64>,
    pub b_gauss: f64,
    pub bias_gauss: f64,
    /// `inf` for no dephasing.
    pub t2_star_us: f64,
    pub phase_model: PhaseModel,
    pub d_mhz: f64,
    pub gamma_e_mhz_per_g: f64,
    pub gamma_c_mhz_per_g: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        Self {
            species: SpeciesName::C13,
            a_zz_mhz: None,
            b_gauss: 0.01,
            bias_gauss: 0.0,
            t2_star_us: f64::INFINITY,
            phase_model: PhaseModel::Exact,
            d_mhz: 2870.0,
            gamma_e_mhz_per_g: 2.8,
            gamma_c_mhz_per_g: 1.07e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolSection {
    /// Angles in radians.
    pub alpha: f64,
    pub theta_i: f64,
    pub theta_f: f64,
    /// Fixed interrogation time for single-point runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_us: Option<f64>,
    pub tau_min_us: f64,
    pub tau_max_us: f64,
    pub tau_points: usize,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self {
            alpha: FRAC_PI_2,
            theta_i: FRAC_PI_2,
            theta_f: FRAC_PI_2,
            tau_us: None,
            tau_min_us: 0.01,
            tau_max_us: 5.0,
            tau_points: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimingSection {
    /// Defaults to the cryogenic budget of the meter species.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<TimingPreset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_init_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_post_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_nuclear_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub model: NoiseKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_c_us: Option<f64>,
    /// OU step; tau_c / 20 when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_us: Option<f64>,
    pub n_traj: usize,
    pub seed: u64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            model: NoiseKind::Markovian,
            tau_c_us: None,
            dt_us: None,
            n_traj: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub mode: SensitivityMode,
    pub t2_min_us: f64,
    pub t2_max_us: f64,
    pub t2_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_min_gauss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_max_gauss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_points: Option<usize>,
    pub fixed_taus_us: Vec<f64>,
    /// Fisher runs without dephasing.
    pub lossless: bool,
    pub search_points: usize,
    pub search_spacing_us: f64,
    pub refinements: usize,
    pub ps_floor: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        let s = TauSearch::default();
        Self {
            mode: SensitivityMode::T2,
            t2_min_us: 0.5,
            t2_max_us: 20.0,
            t2_points: 40,
            b_min_gauss: None,
            b_max_gauss: None,
            b_points: None,
            fixed_taus_us: vec![3.0, 3.2],
            lossless: false,
            search_points: s.min_points,
            search_spacing_us: s.max_spacing,
            refinements: s.refinements,
            ps_floor: s.ps_floor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
    /// Significant digits of every number written.
    pub precision: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
            precision: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub physics: PhysicsSection,
    pub protocol: ProtocolSection,
    pub timing: TimingSection,
    pub noise: NoiseSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

/// Experiment presets selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    C13Cryo,
    N15Cryo,
    RoomTemp,
}

/// Field-axis defaults differ between commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldAxisDefaults {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| bad(one_line(&e.to_string())))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| bad(format!("{}: {}", path.display(), e.0)))
    }

    /// Replaces species and timing with a named experiment preset.
    pub fn apply_preset(&mut self, preset: Preset) {
        let (species, timing) = match preset {
            Preset::C13Cryo => (SpeciesName::C13, TimingPreset::C13Cryo),
            Preset::N15Cryo => (SpeciesName::N15, TimingPreset::N15Cryo),
            Preset::RoomTemp => (SpeciesName::N15, TimingPreset::RoomTemp),
        };
        self.physics.species = species;
        self.physics.a_zz_mhz = None;
        self.timing = TimingSection {
            preset: Some(timing),
            ..TimingSection::default()
        };
    }

    /// Fills every defaulted timing entry and the field axis.
    pub fn resolve(&mut self, b_axis: Option<FieldAxisDefaults>) -> Result<(), ConfigError> {
        let preset = self.timing.preset.unwrap_or(match self.physics.species {
            SpeciesName::N15 => TimingPreset::N15Cryo,
            _ => TimingPreset::C13Cryo,
        });
        let base = TimingBudget::preset(preset);
        let t = &mut self.timing;
        t.preset = Some(preset);
        t.t_init_us.get_or_insert(base.t_init);
        t.t_post_us.get_or_insert(base.t_post);
        t.t_nuclear_us.get_or_insert(base.t_nuclear);
        t.efficiency.get_or_insert(base.efficiency);
        if let Some(d) = b_axis {
            self.sweep.b_min_gauss.get_or_insert(d.lo);
            self.sweep.b_max_gauss.get_or_insert(d.hi);
            self.sweep.b_points.get_or_insert(d.n);
        }
        self.timing_budget()?;
        self.protocol_params()?;
        Ok(())
    }

    pub fn species(&self) -> Result<Species, ConfigError> {
        match (self.physics.species, self.physics.a_zz_mhz) {
            (_, Some(a)) => Ok(Species::Custom { a_zz_mhz: a }),
            (SpeciesName::C13, None) => Ok(Species::C13),
            (SpeciesName::N15, None) => Ok(Species::N15),
            (SpeciesName::Custom, None) => {
                Err(bad("[physics] species = \"custom\" needs a_zz_mhz"))
            }
        }
    }

    pub fn constants(&self) -> Result<PhysConstants, ConfigError> {
        let p = &self.physics;
        PhysConstants::from_ordinary(p.d_mhz, p.gamma_e_mhz_per_g, p.gamma_c_mhz_per_g)
            .map_err(|e| bad(format!("[physics] {e}")))
    }

    pub fn protocol_params(&self) -> Result<ProtocolParams, ConfigError> {
        let pr = &self.protocol;
        let ph = &self.physics;
        let p = ProtocolParams {
            alpha: pr.alpha,
            theta_i: pr.theta_i,
            theta_f: pr.theta_f,
            tau: pr.tau_us.unwrap_or(pr.tau_min_us.max(0.0)),
            b_field: ph.b_gauss,
            bias_field: ph.bias_gauss,
            species: self.species()?,
            t2_star: ph.t2_star_us,
            phase_model: ph.phase_model,
            consts: self.constants()?,
        };
        p.validate()
            .map_err(|e| bad(format!("[physics]/[protocol] {e}")))?;
        Ok(p)
    }

    pub fn timing_budget(&self) -> Result<TimingBudget, ConfigError> {
        let t = &self.timing;
        let base = TimingBudget::preset(t.preset.unwrap_or(TimingPreset::C13Cryo));
        let b = TimingBudget {
            t_init: t.t_init_us.unwrap_or(base.t_init),
            t_post: t.t_post_us.unwrap_or(base.t_post),
            t_nuclear: t.t_nuclear_us.unwrap_or(base.t_nuclear),
            efficiency: t.efficiency.unwrap_or(base.efficiency),
        };
        b.validate().map_err(|e| bad(format!("[timing] {e}")))?;
        Ok(b)
    }

    /// Ramsey budget: electron initialisation only (1 us), the configured
    /// electron readout and efficiency, no nuclear readout.
    pub fn ramsey_budget(&self) -> Result<TimingBudget, ConfigError> {
        let t = self.timing_budget()?;
        Ok(TimingBudget {
            t_init: TimingBudget::preset(TimingPreset::Ramsey).t_init,
            t_post: t.t_post,
            t_nuclear: 0.0,
            efficiency: t.efficiency,
        })
    }

    pub fn tau_axis(&self) -> Result<Vec<f64>, ConfigError> {
        let p = &self.protocol;
        if p.tau_min_us < 0.0 {
            return Err(bad(format!(
                "[protocol] tau_min_us must be >= 0, got {}",
                p.tau_min_us
            )));
        }
        Axis::linear(p.tau_min_us, p.tau_max_us, p.tau_points)
            .values()
            .map_err(|e| bad(format!("[protocol] tau range: {e}")))
    }

    pub fn t2_axis(&self) -> Axis {
        Axis::log(
            self.sweep.t2_min_us,
            self.sweep.t2_max_us,
            self.sweep.t2_points,
        )
    }

    pub fn b_axis(&self) -> Result<Axis, ConfigError> {
        let s = &self.sweep;
        match (s.b_min_gauss, s.b_max_gauss, s.b_points) {
            (Some(lo), Some(hi), Some(n)) => {
                let a = Axis::log(lo, hi, n);
                a.validate()
                    .map_err(|e| bad(format!("[sweep] field axis: {e}")))?;
                Ok(a)
            }
            _ => Err(bad("[sweep] field axis is not resolved")),
        }
    }

    pub fn tau_search(&self) -> TauSearch {
        let s = &self.sweep;
        TauSearch {
            min_points: s.search_points,
            max_spacing: s.search_spacing_us,
            refinements: s.refinements,
            ps_floor: s.ps_floor,
            ..TauSearch::default()
        }
    }

    pub fn noise_comparison(&self) -> Result<NoiseComparison, ConfigError> {
        if self.noise.model != NoiseKind::Ou {
            return Err(bad("noise-compare needs [noise] model = \"ou\""));
        }
        let tau_c = self
            .noise
            .tau_c_us
            .ok_or_else(|| bad("[noise] model = \"ou\" needs tau_c_us"))?;
        let t2_star = self.physics.t2_star_us;
        if !t2_star.is_finite() {
            return Err(bad("[noise] OU noise needs a finite [physics] t2_star_us"));
        }
        if self.noise.n_traj < MIN_TRAJECTORIES {
            return Err(bad(format!(
                "[noise] n_traj must be >= {MIN_TRAJECTORIES}, got {}",
                self.noise.n_traj
            )));
        }
        let ge = self.constants()?.gamma_e;
        let spec = NoiseComparison {
            t2_star,
            tau_c,
            dt: self.noise.dt_us,
            n_traj: self.noise.n_traj,
            seed: self.noise.seed,
        };
        OuParams::from_t2star(t2_star, tau_c, ge, spec.dt, spec.seed)
            .map_err(|e| bad(format!("[noise] {e}")))?;
        Ok(spec)
    }

    /// The configuration as written into output headers: resolved values,
    /// no output path.
    pub fn echo(&self) -> String {
        let mut c = self.clone();
        c.output.path = None;
        toml::to_string(&c).expect("configuration serialises")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.echo().as_bytes()))
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let c = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert_eq!(c.protocol_params().unwrap().species, Species::C13);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = ExperimentConfig::from_toml_str("[physics]\nspecies = \"c13\"\nbogus = 1\n")
            .unwrap_err();
        assert!(e.0.contains("bogus"), "{}", e.0);
        assert!(!e.0.contains('\n'));
        assert!(ExperimentConfig::from_toml_str("[nonsense]\n").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let mut c = ExperimentConfig::from_toml_str(
            "[physics]\nspecies = \"n15\"\nt2_star_us = 2.0\n[timing]\nefficiency = 0.707\n",
        )
        .unwrap();
        c.resolve(Some(FieldAxisDefaults {
            lo: 1e-3,
            hi: 0.1,
            n: 40,
        }))
        .unwrap();
        let back = ExperimentConfig::from_toml_str(&c.echo()).unwrap();
        assert_eq!(back.echo(), c.echo());
        assert_eq!(back.timing.preset, Some(TimingPreset::N15Cryo));
        assert_eq!(back.timing.efficiency, Some(0.707));
        let lossless = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml_str(&lossless.echo()).unwrap();
        assert!(back.physics.t2_star_us.is_infinite());
    }

    #[test]
    fn custom_species_needs_coupling() {
        let c = ExperimentConfig::from_toml_str("[physics]\nspecies = \"custom\"\n").unwrap();
        assert!(c.protocol_params().is_err());
        let c =
            ExperimentConfig::from_toml_str("[physics]\nspecies = \"custom\"\na_zz_mhz = 1.0\n")
                .unwrap();
        assert_eq!(
            c.protocol_params().unwrap().species,
            Species::Custom { a_zz_mhz: 1.0 }
        );
    }

    #[test]
    fn presets_override_species_and_timing() {
        let mut c = ExperimentConfig::default();
        c.apply_preset(Preset::RoomTemp);
        c.resolve(None).unwrap();
        assert_eq!(c.species().unwrap(), Species::N15);
        assert_eq!(
            c.timing_budget().unwrap(),
            TimingBudget::preset(TimingPreset::RoomTemp)
        );
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let c = ExperimentConfig::from_toml_str("[physics]\nt2_star_us = -1.0\n").unwrap();
        assert!(c.protocol_params().is_err());
        let c = ExperimentConfig::from_toml_str("[timing]\nefficiency = 2.0\n").unwrap();
        assert!(c.timing_budget().is_err());
        let c = ExperimentConfig::from_toml_str("[noise]\nmodel = \"ou\"\n").unwrap();
        assert!(c.noise_comparison().is_err());
        let c =
            ExperimentConfig::from_toml_str("[noise]\nmodel = \"ou\"\ntau_c_us = 0.2\n").unwrap();
        assert!(c.noise_comparison().is_err(), "lossless physics");
    }
}
