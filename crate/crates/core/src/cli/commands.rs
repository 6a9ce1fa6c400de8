//! One function per subcommand, each turning a resolved configuration into
//! a table.

use super::config::{ExperimentConfig, FieldAxisDefaults, SensitivityMode, SpeciesName};
use super::CliError;
use crate::metrology::{sensitivity, Derivative, Scheme, TimingBudget, TimingPreset};
use crate::sweeps::{
    fisher_vs_time, noise_compare, optimize_tau, ratio_map, search_for, signal_vs_time,
    sweep_b_fixed_tau, sweep_t2star, SensitivitySweep, SweepResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Post-selected <I_z>, success probability and Ramsey signal against tau.
    Signal,
    /// Optimised sensitivity against T2*, or one working point.
    Sensitivity,
    /// Ornstein-Uhlenbeck ensemble against its Markov limits.
    NoiseCompare,
    /// Classical and quantum Fisher information against tau.
    Fisher {
        /// Drop dephasing regardless of the configured T2*.
        #[arg(long)]
        lossless: bool,
    },
    /// Post-selection / Ramsey sensitivity ratio over (T2*, B).
    RatioMap,
    /// eta against B at fixed interrogation times.
    SweepB,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Signal => "signal",
            Command::Sensitivity => "sensitivity",
            Command::NoiseCompare => "noise-compare",
            Command::Fisher { .. } => "fisher",
            Command::RatioMap => "ratio-map",
            Command::SweepB => "sweep-b",
        }
    }

    fn field_axis(&self) -> Option<FieldAxisDefaults> {
        match self {
            Command::RatioMap => Some(FieldAxisDefaults {
                lo: 1e-3,
                hi: 0.1,
                n: 40,
            }),
            Command::SweepB => Some(FieldAxisDefaults {
                lo: 1e-2,
                hi: 1.0,
                n: 100,
            }),
            _ => None,
        }
    }

    /// Folds command flags into the configuration and fills defaults.
    pub fn prepare(&self, cfg: &mut ExperimentConfig) -> Result<(), CliError> {
        if let Command::Fisher { lossless: true } = self {
            cfg.sweep.lossless = true;
        }
        if matches!(self, Command::Fisher { .. }) && cfg.sweep.lossless {
            cfg.physics.t2_star_us = f64::INFINITY;
        }
        cfg.resolve(self.field_axis())?;
        Ok(())
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> Result<SweepResult, CliError> {
        let params = cfg.protocol_params()?;
        let table = match self {
            Command::Signal => signal_vs_time(&params, &cfg.tau_axis()?)?,
            Command::Sensitivity => match cfg.sweep.mode {
                SensitivityMode::T2 => sweep_t2star(&sweep_spec(cfg)?, &cfg.t2_axis())?,
                SensitivityMode::Point => working_point(cfg)?,
            },
            Command::NoiseCompare => {
                noise_compare(&params, &cfg.noise_comparison()?, &cfg.tau_axis()?)?
            }
            Command::Fisher { .. } => fisher_vs_time(&params, &cfg.tau_axis()?)?,
            Command::RatioMap => ratio_map(&sweep_spec(cfg)?, &cfg.t2_axis(), &cfg.b_axis()?)?,
            Command::SweepB => sweep_b_fixed_tau(
                &params,
                &cfg.timing_budget()?,
                &cfg.sweep.fixed_taus_us,
                &cfg.b_axis()?,
            )?,
        };
        Ok(table)
    }
}

/// The configured budget serves the configured species; the other meter
/// keeps its cryogenic preset.
fn sweep_spec(cfg: &ExperimentConfig) -> Result<SensitivitySweep, CliError> {
    let mut spec = SensitivitySweep::new(cfg.protocol_params()?);
    let timing = cfg.timing_budget()?;
    match cfg.physics.species {
        SpeciesName::N15 => spec.n15_timing = timing,
        _ => spec.c13_timing = timing,
    }
    spec.ramsey_timing = cfg.ramsey_budget()?;
    spec.search = cfg.tau_search();
    Ok(spec)
}

const POINT_COLUMNS: [&str; 10] = [
    "tau_us",
    "eta_nt",
    "eta_c_nt",
    "delta_b_gauss",
    "t_m_us",
    "n_trials",
    "success_probability",
    "tau_ramsey_us",
    "eta_ramsey_nt",
    "eta_c_ramsey_nt",
];

/// Post-selection and Ramsey at one working point. Without a fixed tau
/// each scheme gets its own optimum.
fn working_point(cfg: &ExperimentConfig) -> Result<SweepResult, CliError> {
    let params = cfg.protocol_params()?;
    let timing = cfg.timing_budget()?;
    let ramsey = cfg.ramsey_budget()?;
    let solve = |scheme: Scheme, budget: &TimingBudget| match cfg.protocol.tau_us {
        Some(tau) => sensitivity(&params.with_tau(tau), budget, scheme, Derivative::Analytic),
        None => optimize_tau(
            &params,
            budget,
            scheme,
            &search_for(&cfg.tau_search(), params.t2_star),
        )
        .map(|o| o.result),
    };
    let post = solve(Scheme::PostSelection, &timing)?;
    let ram = solve(Scheme::Ramsey, &ramsey)?;
    let mut table = SweepResult::new(&POINT_COLUMNS)
        .with_meta("ramsey_t_init_us", ramsey.t_init)
        .with_meta(
            "timing_preset",
            format!("{:?}", cfg.timing.preset.unwrap_or(TimingPreset::C13Cryo)),
        );
    table.push_row(vec![
        post.tau,
        post.eta_nt(),
        post.eta_c_nt(),
        post.delta_b_gauss,
        post.t_m,
        post.n_trials,
        post.success_probability,
        ram.tau,
        ram.eta_nt(),
        ram.eta_c_nt(),
    ])?;
    Ok(table)
}
