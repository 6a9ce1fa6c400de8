//! The parameter sweeps. Grid cells run in parallel; rows come back in grid
//! order.

use rayon::prelude::*;

use super::optimize::{optimize_tau, TauSearch};
use super::table::{Axis, SweepResult};
use crate::dynamics::{monte_carlo_ensemble, Dephasing, OuParams};
use crate::error::Result;
use crate::metrology::{
    fisher_report, sensitivity, Derivative, Scheme, TimingBudget, TimingPreset,
};
use crate::protocol::{
    post_select, probe_state, ramsey_signal, signal_iz, signal_iz_symmetric,
    success_and_signal_with_decay, PhaseModel, ProtocolParams, Species,
};

const NANO: f64 = 1e9;

fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

fn collect_rows(mut table: SweepResult, rows: Vec<Vec<f64>>) -> Result<SweepResult> {
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}

/// Search range for one T2* cell: the template with its upper end at
/// 5 T2* (5 us when lossless).
pub fn search_for(template: &TauSearch, t2_star: f64) -> TauSearch {
    TauSearch {
        hi: TauSearch::for_t2_star(t2_star).hi,
        ..*template
    }
}

/// Signal traces against interrogation time.
pub fn signal_vs_time(params: &ProtocolParams, taus: &[f64]) -> Result<SweepResult> {
    params.validate()?;
    let table = SweepResult::new(&[
        "tau_us",
        "iz_postselected",
        "success_probability",
        "iz_closed_form",
        "iz_symmetric_closed_form",
        "ramsey_signal",
    ]);
    let rows = taus
        .par_iter()
        .map(|&tau| {
            let q = params.with_tau(tau);
            let projected = probe_state(&q).and_then(|psi| post_select(&psi, q.theta_f));
            let (iz_proj, ps) = match projected {
                Ok(o) => (o.iz(), o.success_probability),
                Err(_) => (f64::NAN, 0.0),
            };
            vec![
                tau,
                iz_proj,
                ps,
                or_nan(signal_iz(&q)),
                or_nan(signal_iz_symmetric(tau, q.b_field, &q)),
                ramsey_signal(tau, q.b_field, q.t2_star, &q.consts),
            ]
        })
        .collect();
    collect_rows(table, rows)
}

/// Settings shared by the optimised-sensitivity sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivitySweep {
    /// Angles, field, constants and phase model; T2* and species are set per cell.
    pub params: ProtocolParams,
    pub c13_timing: TimingBudget,
    pub n15_timing: TimingBudget,
    pub ramsey_timing: TimingBudget,
    pub search: TauSearch,
}

impl SensitivitySweep {
    pub fn new(params: ProtocolParams) -> Self {
        Self {
            params,
            c13_timing: TimingBudget::preset(TimingPreset::C13Cryo),
            n15_timing: TimingBudget::preset(TimingPreset::N15Cryo),
            ramsey_timing: TimingBudget::preset(TimingPreset::Ramsey),
            search: TauSearch::default(),
        }
    }

    fn timing_for(&self, species: Species) -> TimingBudget {
        match species {
            Species::N15 => self.n15_timing,
            _ => self.c13_timing,
        }
    }

    /// (tau*, eta*) in (us, T/sqrt(Hz)); NaN when no tau is admissible.
    pub fn optimum(
        &self,
        species: Species,
        scheme: Scheme,
        t2_star: f64,
        b_field: f64,
    ) -> (f64, f64) {
        let p = self
            .params
            .with_species(species)
            .with_t2_star(t2_star)
            .with_field(b_field);
        let timing = match scheme {
            Scheme::Ramsey => self.ramsey_timing,
            Scheme::PostSelection => self.timing_for(species),
        };
        match optimize_tau(&p, &timing, scheme, &search_for(&self.search, t2_star)) {
            Ok(o) => (o.tau, o.eta),
            Err(_) => (f64::NAN, f64::NAN),
        }
    }
}

/// Optimised sensitivity of Ramsey and of post-selection with either
/// meter, against T2*.
pub fn sweep_t2star(spec: &SensitivitySweep, t2_axis: &Axis) -> Result<SweepResult> {
    let t2s = t2_axis.values()?;
    let b = spec.params.b_field;
    let table = SweepResult::new(&[
        "t2_star_us",
        "eta_ramsey_nt",
        "tau_ramsey_us",
        "eta_c13_nt",
        "tau_c13_us",
        "eta_n15_nt",
        "tau_n15_us",
    ]);
    let rows = t2s
        .par_iter()
        .map(|&t2| {
            let (tr, er) = spec.optimum(Species::C13, Scheme::Ramsey, t2, b);
            let (tc, ec) = spec.optimum(Species::C13, Scheme::PostSelection, t2, b);
            let (tn, en) = spec.optimum(Species::N15, Scheme::PostSelection, t2, b);
            vec![t2, er * NANO, tr, ec * NANO, tc, en * NANO, tn]
        })
        .collect();
    collect_rows(table, rows)
}

/// eta_post / eta_Ramsey over a (T2*, B) grid for the meter in
/// `spec.params.species`, each cell with its own optimal tau.
pub fn ratio_map(spec: &SensitivitySweep, t2_axis: &Axis, b_axis: &Axis) -> Result<SweepResult> {
    let t2s = t2_axis.values()?;
    let bs = b_axis.values()?;
    let cells: Vec<(f64, f64)> = t2s
        .iter()
        .flat_map(|&t| bs.iter().map(move |&b| (t, b)))
        .collect();
    let species = spec.params.species;
    let table = SweepResult::new(&[
        "t2_star_us",
        "b_gauss",
        "ratio",
        "tau_post_us",
        "tau_ramsey_us",
        "eta_post_nt",
        "eta_ramsey_nt",
    ]);
    let rows = cells
        .par_iter()
        .map(|&(t2, b)| {
            let (tp, ep) = spec.optimum(species, Scheme::PostSelection, t2, b);
            let (tr, er) = spec.optimum(species, Scheme::Ramsey, t2, b);
            vec![t2, b, ep / er, tp, tr, ep * NANO, er * NANO]
        })
        .collect();
    collect_rows(table, rows)
}

/// eta against B at fixed interrogation times, with exact and weak-field
/// phase bookkeeping side by side.
pub fn sweep_b_fixed_tau(
    params: &ProtocolParams,
    timing: &TimingBudget,
    taus: &[f64],
    b_axis: &Axis,
) -> Result<SweepResult> {
    let bs = b_axis.values()?;
    let cells: Vec<(f64, f64)> = taus
        .iter()
        .flat_map(|&t| bs.iter().map(move |&b| (t, b)))
        .collect();
    let table = SweepResult::new(&[
        "tau_us",
        "b_gauss",
        "eta_nt",
        "eta_weak_field_nt",
        "delta_b_gauss",
        "success_probability",
        "iz",
    ]);
    let rows = cells
        .par_iter()
        .map(|&(tau, b)| {
            let q = params.with_tau(tau).with_field(b);
            let exact = sensitivity(&q, timing, Scheme::PostSelection, Derivative::Analytic);
            let weak = sensitivity(
                &q.with_phase_model(PhaseModel::WeakField),
                timing,
                Scheme::PostSelection,
                Derivative::Analytic,
            );
            let (eta, db, ps) = match exact {
                Ok(r) => (r.eta * NANO, r.delta_b_gauss, r.success_probability),
                Err(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            vec![
                tau,
                b,
                eta,
                weak.map_or(f64::NAN, |r| r.eta * NANO),
                db,
                ps,
                or_nan(signal_iz(&q)),
            ]
        })
        .collect();
    collect_rows(table, rows)
}

/// Fisher information entries against interrogation time.
pub fn fisher_vs_time(params: &ProtocolParams, taus: &[f64]) -> Result<SweepResult> {
    params.validate()?;
    let table = SweepResult::new(&[
        "tau_us",
        "f_ramsey",
        "f_q_probe",
        "f_ps",
        "f_q_post",
        "f_classical",
    ]);
    let rows = taus
        .par_iter()
        .map(|&tau| match fisher_report(&params.with_tau(tau)) {
            Ok(r) => vec![
                tau,
                r.f_ramsey,
                r.f_q_probe,
                r.f_ps,
                r.f_q_post,
                r.f_classical,
            ],
            Err(_) => vec![tau, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN],
        })
        .collect();
    collect_rows(table, rows)
}

/// Ornstein-Uhlenbeck ensemble against its Markov limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseComparison {
    pub t2_star: f64,
    pub tau_c: f64,
    /// OU step; tau_c / 20 when `None`.
    pub dt: Option<f64>,
    pub n_traj: usize,
    pub seed: u64,
}

/// Post-selected <I_z> and electron coherence against time for the OU
/// ensemble, the exact Gaussian average, and both Lindblad conventions
/// (coherence rates 2 tau_c / T2*^2 and 1 / T2*).
pub fn noise_compare(
    params: &ProtocolParams,
    spec: &NoiseComparison,
    times: &[f64],
) -> Result<SweepResult> {
    let ge = params.consts.gamma_e;
    let ou = OuParams::from_t2star(spec.t2_star, spec.tau_c, ge, spec.dt, spec.seed)?;
    let markov = ou.markov_limit(ge);
    let plain = Dephasing::from_t2_star(spec.t2_star);
    let mc = monte_carlo_ensemble(params, &ou, spec.n_traj, times)?;
    let lossless = params.with_t2_star(f64::INFINITY);
    let iz_with = |t: f64, d: f64| {
        success_and_signal_with_decay(&lossless.with_tau(t), d).map_or(f64::NAN, |(_, iz)| iz)
    };
    let mut table = SweepResult::new(&[
        "t_us",
        "iz_markov",
        "iz_markov_t2",
        "iz_gaussian",
        "iz_ou_mean",
        "iz_ou_stderr",
        "coherence_markov",
        "coherence_markov_t2",
        "coherence_gaussian",
        "coherence_ou_mean",
        "coherence_ou_stderr",
    ]);
    for (k, &t) in times.iter().enumerate() {
        let cm = (-markov.coherence_rate() * t).exp();
        let ct = (-plain.coherence_rate() * t).exp();
        let cg = ou.gaussian_coherence(ge, t);
        table.push_row(vec![
            t,
            iz_with(t, cm),
            iz_with(t, ct),
            iz_with(t, cg),
            mc.iz.mean[k],
            mc.iz.std_err[k],
            cm,
            ct,
            cg,
            mc.coherence.mean[k],
            mc.coherence.std_err[k],
        ])?;
    }
    Ok(table
        .with_meta("seed", spec.seed)
        .with_meta("n_traj", spec.n_traj)
        .with_meta("tau_c_us", spec.tau_c)
        .with_meta("ou_dt_us", ou.dt))
}
