//! Ornstein-Uhlenbeck field noise: sampled paths and the noisy free
//! evolution they generate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::lindblad::Dephasing;
use crate::error::{Error, Result};
use crate::protocol::{evolve_free, Basis, ProtocolParams, QuantumState};

/// Diffusion constant c = 4 / (T2*^2 tau_c) in rad^2/us^3. Multiplying the
/// field by gamma_e this gives gamma_e^2 B_s^2 tau_c = c tau_c^2 / 2 = 2 / T2*^2.
pub fn ou_c_from_t2star(t2_star: f64, tau_c: f64) -> Result<f64> {
    if !(t2_star > 0.0 && tau_c > 0.0 && t2_star.is_finite() && tau_c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "T2* and tau_c must be finite and > 0, got {t2_star}, {tau_c}"
        )));
    }
    Ok(4.0 / (t2_star * t2_star * tau_c))
}

/// Ornstein-Uhlenbeck process for the field in Gauss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuParams {
    /// Correlation time (us).
    pub tau_c: f64,
    /// Diffusion constant in field units (G^2/us), c / gamma_e^2.
    pub diffusion: f64,
    /// Sampling step (us).
    pub dt: f64,
    pub seed: u64,
}

impl OuParams {
    /// Noise that produces dephasing time `t2_star` on an electron with
    /// gyromagnetic ratio `gamma_e`. The step defaults to tau_c / 20 when
    /// `dt` is `None`.
    pub fn from_t2star(
        t2_star: f64,
        tau_c: f64,
        gamma_e: f64,
        dt: Option<f64>,
        seed: u64,
    ) -> Result<Self> {
        let c = ou_c_from_t2star(t2_star, tau_c)?;
        let p = Self {
            tau_c,
            diffusion: c / (gamma_e * gamma_e),
            dt: dt.unwrap_or(tau_c / 20.0),
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_c > 0.0 && self.tau_c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau_c must be > 0, got {}",
                self.tau_c
            )));
        }
        if !(self.diffusion >= 0.0 && self.diffusion.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "diffusion must be >= 0, got {}",
                self.diffusion
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if self.dt > self.tau_c / 10.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "dt = {} does not resolve tau_c = {} (need dt <= tau_c / 10)",
                self.dt, self.tau_c
            )));
        }
        Ok(())
    }

    /// Stationary variance B_s^2 = c tau_c / 2 (G^2).
    pub fn stationary_variance(&self) -> f64 {
        self.diffusion * self.tau_c / 2.0
    }

    /// Lindblad dephasing this noise reduces to when tau_c is short.
    pub fn markov_limit(&self, gamma_e: f64) -> Dephasing {
        let rate = 2.0 * gamma_e * gamma_e * self.stationary_variance() * self.tau_c;
        Dephasing {
            rate,
            form: super::lindblad::DephasingForm::Anticommutator,
        }
    }

    /// Ensemble coherence <exp(i gamma_e Phi(t))> of Gaussian noise:
    /// exp(-gamma_e^2 B_s^2 [tau_c t - tau_c^2 (1 - exp(-t / tau_c))]).
    pub fn gaussian_coherence(&self, gamma_e: f64, t: f64) -> f64 {
        let tc = self.tau_c;
        let bracket = tc * t + tc * tc * (-t / tc).exp_m1();
        (-gamma_e * gamma_e * self.stationary_variance() * bracket).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Markovian(Dephasing),
    OrnsteinUhlenbeck(OuParams),
}

/// Field samples on a uniform grid starting at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
    /// Random stream within the seed.
    pub stream: u64,
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn duration(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// A path with the same value everywhere.
    pub fn constant(value: f64, dt: f64, n_steps: usize) -> Self {
        Self {
            times: (0..=n_steps).map(|k| k as f64 * dt).collect(),
            values: vec![value; n_steps + 1],
            seed: 0,
            stream: 0,
        }
    }

    /// Trapezoidal integral of B over [0, t], linear inside the last cell.
    pub fn phase_integral(&self, t: f64) -> Result<f64> {
        Ok(self.phase_integrals(&[t])?[0])
    }

    /// Phase integrals at several times from one cumulative pass.
    pub fn phase_integrals(&self, times: &[f64]) -> Result<Vec<f64>> {
        let covered = self.duration();
        let cum = self.cumulative_phase();
        let dt = self.dt();
        times
            .iter()
            .map(|&t| {
                if t > covered * (1.0 + 1e-12) + 1e-15 || !(t >= 0.0) {
                    return Err(Error::PathTooShort {
                        covered,
                        required: t,
                    });
                }
                if t == 0.0 || dt == 0.0 {
                    return Ok(0.0);
                }
                let full = ((t / dt).floor() as usize).min(self.values.len() - 1);
                let rest = t - full as f64 * dt;
                let mut acc = cum[full];
                if rest > 0.0 && full + 1 < self.values.len() {
                    let b0 = self.values[full];
                    let b1 = b0 + (self.values[full + 1] - b0) * rest / dt;
                    acc += 0.5 * (b0 + b1) * rest;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Phase integrals at every grid time, accumulated in one pass.
    pub fn cumulative_phase(&self) -> Vec<f64> {
        let dt = self.dt();
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        out.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * dt;
            out.push(acc);
        }
        out
    }
}

/// Random stream for a given (seed, stream) pair.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exact discretisation B(t + dt) = B(t) e^{-dt/tau_c} + sqrt((c tau_c / 2)(1 - e^{-2 dt / tau_c})) n,
/// started from a stationary draw. `n_steps + 1` samples.
pub fn ou_sample_path(ou: &OuParams, n_steps: usize) -> Result<Trajectory> {
    ou_sample_stream(ou, n_steps, 0)
}

/// As [`ou_sample_path`] on random stream `stream` of `ou.seed`; ensembles
/// use the trajectory index as the stream.
pub fn ou_sample_stream(ou: &OuParams, n_steps: usize, stream: u64) -> Result<Trajectory> {
    ou.validate()?;
    if n_steps == 0 {
        return Err(Error::InvalidParameter("n_steps must be >= 1".into()));
    }
    let mut rng = stream_rng(ou.seed, stream);
    let var = ou.stationary_variance();
    let decay = (-ou.dt / ou.tau_c).exp();
    let kick = (var * -(-2.0 * ou.dt / ou.tau_c).exp_m1()).sqrt();
    let mut values = Vec::with_capacity(n_steps + 1);
    let first: f64 = rng.sample(StandardNormal);
    let mut b = var.sqrt() * first;
    values.push(b);
    for _ in 0..n_steps {
        let n: f64 = rng.sample(StandardNormal);
        b = b * decay + kick * n;
        values.push(b);
    }
    Ok(Trajectory {
        times: (0..=n_steps).map(|k| k as f64 * ou.dt).collect(),
        values,
        seed: ou.seed,
        stream,
    })
}

/// Multiplies the |1> branch by exp(i gamma_e phi), i.e. applies
/// exp(-i gamma_e phi S_z) with S_z = diag(0, 0, -1, -1).
pub fn apply_noise_phase(state: &QuantumState, gamma_e: f64, phi: f64) -> Result<QuantumState> {
    if state.basis() != Basis::TwoSpin {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: state.dim(),
        });
    }
    let rot = Complex64::from_polar(1.0, gamma_e * phi);
    let mut v = state.amplitudes().clone();
    v[2] *= rot;
    v[3] *= rot;
    QuantumState::new(v, Basis::TwoSpin)
}

/// Free evolution over `params.tau` followed by the noise unitary of the
/// path. The two commute.
pub fn stochastic_evolve(
    state0: &QuantumState,
    params: &ProtocolParams,
    path: &Trajectory,
) -> Result<QuantumState> {
    let phi = path.phase_integral(params.tau)?;
    let s = evolve_free(state0, params.tau, params)?;
    apply_noise_phase(&s, params.consts.gamma_e, phi)
}
