//! Ensemble averages over Ornstein-Uhlenbeck trajectories.
//!
//! Each trajectory draws from its own random stream (the trajectory index)
//! of the master seed, and partial sums are combined in index order, so the
//! result does not depend on the number of threads.

use rayon::prelude::*;

use super::ou::{ou_sample_stream, OuParams};
use crate::error::{Error, Result};
use crate::protocol::{electron_target, pre_selected_state, ProtocolParams};

pub const MIN_TRAJECTORIES: usize = 100;
/// Trajectories per partial sum.
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// Post-selected <I_z>, as a ratio of ensemble means.
    PostSelectedIz,
    SuccessProbability,
    /// Re <exp(i gamma_e Phi)>, the noise-induced decay of the electron
    /// coherence.
    ElectronCoherence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSeries {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub n_traj: usize,
    pub seed: u64,
}

/// Running sums per time point: success probability x, P_s <I_z> y and
/// coherence z, with the second moments the error bars need.
#[derive(Clone)]
struct Moments {
    s: Vec<[f64; 8]>,
}

impl Moments {
    fn new(n: usize) -> Self {
        Self {
            s: vec![[0.0; 8]; n],
        }
    }

    fn push(&mut self, k: usize, x: f64, y: f64, z: f64) {
        let m = &mut self.s[k];
        m[0] += x;
        m[1] += y;
        m[2] += x * x;
        m[3] += y * y;
        m[4] += x * y;
        m[5] += z;
        m[6] += z * z;
    }

    fn merge(mut self, other: &Moments) -> Self {
        for (a, b) in self.s.iter_mut().zip(&other.s) {
            for i in 0..8 {
                a[i] += b[i];
            }
        }
        self
    }
}

/// All three observables from one set of trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct McEnsemble {
    pub iz: McSeries,
    pub success_probability: McSeries,
    pub coherence: McSeries,
}

impl McEnsemble {
    pub fn get(&self, observable: Observable) -> &McSeries {
        match observable {
            Observable::PostSelectedIz => &self.iz,
            Observable::SuccessProbability => &self.success_probability,
            Observable::ElectronCoherence => &self.coherence,
        }
    }
}

/// Monte Carlo estimate of `observable` at each of `times` (us). The
/// deterministic part uses `params` with T2* ignored; dephasing comes from
/// the noise alone.
pub fn monte_carlo_signal(
    params: &ProtocolParams,
    ou: &OuParams,
    n_traj: usize,
    observable: Observable,
    times: &[f64],
) -> Result<McSeries> {
    let all = monte_carlo_ensemble(params, ou, n_traj, times)?;
    Ok(match observable {
        Observable::PostSelectedIz => all.iz,
        Observable::SuccessProbability => all.success_probability,
        Observable::ElectronCoherence => all.coherence,
    })
}

/// Post-selected <I_z>, success probability and electron coherence at
/// each of `times`.
pub fn monte_carlo_ensemble(
    params: &ProtocolParams,
    ou: &OuParams,
    n_traj: usize,
    times: &[f64],
) -> Result<McEnsemble> {
    if n_traj < MIN_TRAJECTORIES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_TRAJECTORIES} trajectories, got {n_traj}"
        )));
    }
    params.validate()?;
    ou.validate()?;
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter(
            "sample times must be finite and >= 0".into(),
        ));
    }
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let n_steps = ((t_max / ou.dt).ceil() as usize).max(1);
    let gamma_e = params.consts.gamma_e;
    let base = params.with_t2_star(f64::INFINITY);
    let psi0 = pre_selected_state(base.alpha, base.theta_i);
    let (t0, t1) = electron_target(base.theta_f);
    let energies = base.branch_energies();

    let blocks: Vec<Moments> = (0..n_traj.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| -> Result<Moments> {
            let mut m = Moments::new(times.len());
            for traj in b * BLOCK..((b + 1) * BLOCK).min(n_traj) {
                let path = ou_sample_stream(ou, n_steps, traj as u64)?;
                let phases = path.phase_integrals(times)?;
                for (k, (&t, &phase)) in times.iter().zip(&phases).enumerate() {
                    let phi = gamma_e * phase;
                    let (ps, num) = project(psi0.amplitudes(), &energies, t, phi, t0, t1);
                    m.push(k, ps, num, phi.cos());
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = blocks
        .iter()
        .fold(Moments::new(times.len()), |acc, m| acc.merge(m));

    let n = n_traj as f64;
    let unbiased = n / (n - 1.0);
    let series = || McSeries {
        times: times.to_vec(),
        mean: Vec::with_capacity(times.len()),
        std_err: Vec::with_capacity(times.len()),
        n_traj,
        seed: ou.seed,
    };
    let (mut iz, mut ps, mut coh) = (series(), series(), series());
    for s in &total.s {
        let mx = s[0] / n;
        let my = s[1] / n;
        let mz = s[5] / n;
        let var_x = ((s[2] / n - mx * mx) * unbiased).max(0.0);
        let var_y = ((s[3] / n - my * my) * unbiased).max(0.0);
        let var_z = ((s[6] / n - mz * mz) * unbiased).max(0.0);
        let cov = (s[4] / n - mx * my) * unbiased;
        ps.mean.push(mx);
        ps.std_err.push((var_x / n).sqrt());
        coh.mean.push(mz);
        coh.std_err.push((var_z / n).sqrt());
        // ratio of means with a delta-method error
        if mx < 1e-15 {
            iz.mean.push(f64::NAN);
            iz.std_err.push(f64::NAN);
        } else {
            let r = my / mx;
            let var_r = ((var_y - 2.0 * r * cov + r * r * var_x) / (mx * mx)).max(0.0);
            iz.mean.push(r);
            iz.std_err.push((var_r / n).sqrt());
        }
    }
    Ok(McEnsemble {
        iz,
        success_probability: ps,
        coherence: coh,
    })
}

/// Success probability and P_s <I_z> of the pre-selected state after free
/// evolution for `t` and an extra phase `phi` on the |1> branch.
fn project(
    psi0: &crate::spin::ComplexVector,
    energies: &[f64; 4],
    t: f64,
    phi: f64,
    t0: f64,
    t1: f64,
) -> (f64, f64) {
    use num_complex::Complex64;
    let a = |k: usize, extra: f64| psi0[k] * Complex64::from_polar(1.0, -energies[k] * t + extra);
    let up = a(0, 0.0) * t0 + a(2, phi) * t1;
    let down = a(1, 0.0) * t0 + a(3, phi) * t1;
    let (pu, pd) = (up.norm_sqr(), down.norm_sqr());
    (pu + pd, 0.5 * (pu - pd))
}
