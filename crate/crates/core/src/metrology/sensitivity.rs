//! Field uncertainty and sensitivity.

use super::timing::TimingBudget;
use crate::error::{Error, Result};
use crate::protocol::{
    ramsey_signal, ramsey_slope, signal_iz, signal_slopes, success_probability, ProtocolParams,
};
use crate::spin::constants::{SECONDS_PER_MICROSECOND, TESLA_PER_GAUSS};

/// Slopes below this are treated as a blind working point.
pub const SLOPE_GUARD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Derivative {
    #[default]
    Analytic,
    FiniteDifference,
}

/// Which readout the uncertainty refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Post-selected meter <I_z>.
    PostSelection,
    /// Electron-only Ramsey sequence.
    Ramsey,
}

/// sqrt(1/4 - mean^2), the spread of a spin-1/2 projection.
pub fn delta_iz(mean: f64) -> Result<f64> {
    if mean.abs() > 0.5 + 1e-12 || mean.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "|<I_z>| must not exceed 1/2, got {mean}"
        )));
    }
    Ok((0.25 - mean * mean).max(0.0).sqrt())
}

/// Field step whose phase gamma_e h tau is about 1e-6 rad.
pub fn phase_scaled_step(gamma_e: f64, tau: f64) -> f64 {
    1e-6 / (gamma_e * tau.max(1e-3))
}

/// Five-point central difference.
pub fn five_point<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (m2, m1, p1, p2) = (f(x - 2.0 * h)?, f(x - h)?, f(x + h)?, f(x + 2.0 * h)?);
    Ok((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h))
}

/// Signal and its B-derivative at the working point.
pub fn signal_and_slope(
    params: &ProtocolParams,
    scheme: Scheme,
    method: Derivative,
) -> Result<(f64, f64)> {
    params.validate()?;
    let (tau, b, t2, c) = (params.tau, params.b_field, params.t2_star, &params.consts);
    let h = phase_scaled_step(c.gamma_e, tau);
    match (scheme, method) {
        (Scheme::PostSelection, Derivative::Analytic) => {
            let s = signal_slopes(params)?;
            Ok((s.iz, s.d_iz))
        }
        (Scheme::PostSelection, Derivative::FiniteDifference) => {
            let slope = five_point(|x| signal_iz(&params.with_field(x)), b, h)?;
            Ok((signal_iz(params)?, slope))
        }
        (Scheme::Ramsey, Derivative::Analytic) => {
            Ok((ramsey_signal(tau, b, t2, c), ramsey_slope(tau, b, t2, c)))
        }
        (Scheme::Ramsey, Derivative::FiniteDifference) => {
            let slope = five_point(|x| Ok(ramsey_signal(tau, x, t2, c)), b, h)?;
            Ok((ramsey_signal(tau, b, t2, c), slope))
        }
    }
}

/// Standard deviation of the field estimate from one measurement (G).
pub fn delta_b(params: &ProtocolParams, scheme: Scheme, method: Derivative) -> Result<f64> {
    let (signal, slope) = signal_and_slope(params, scheme, method)?;
    let spread = match scheme {
        Scheme::PostSelection => delta_iz(signal)?,
        Scheme::Ramsey => (signal * (1.0 - signal)).max(0.0).sqrt(),
    };
    if !(slope.abs() > SLOPE_GUARD) {
        return Err(Error::InsensitiveWorkingPoint(slope.abs()));
    }
    Ok(spread / slope.abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityResult {
    pub delta_b_gauss: f64,
    pub delta_b_tesla: f64,
    /// T / sqrt(Hz).
    pub eta: f64,
    /// eta / C.
    pub eta_c: f64,
    /// Total measurement time (us).
    pub t_m: f64,
    /// Mean number of trials per success.
    pub n_trials: f64,
    pub success_probability: f64,
    pub tau: f64,
}

impl SensitivityResult {
    pub fn eta_nt(&self) -> f64 {
        self.eta * 1e9
    }

    pub fn eta_c_nt(&self) -> f64 {
        self.eta_c * 1e9
    }
}

/// eta = Delta B sqrt(t_m) in T/sqrt(Hz).
pub fn sensitivity(
    params: &ProtocolParams,
    timing: &TimingBudget,
    scheme: Scheme,
    method: Derivative,
) -> Result<SensitivityResult> {
    timing.validate()?;
    let db = delta_b(params, scheme, method)?;
    let (ps, t_m) = match scheme {
        Scheme::PostSelection => {
            let ps = success_probability(params)?;
            if !(ps > 0.0) {
                return Err(Error::PostSelectionImpossible(ps));
            }
            (ps, timing.post_selection_time(params.tau, ps))
        }
        Scheme::Ramsey => (1.0, timing.ramsey_time(params.tau)),
    };
    let delta_b_tesla = db * TESLA_PER_GAUSS;
    let eta = delta_b_tesla * (t_m * SECONDS_PER_MICROSECOND).sqrt();
    Ok(SensitivityResult {
        delta_b_gauss: db,
        delta_b_tesla,
        eta,
        eta_c: eta / timing.efficiency,
        t_m,
        n_trials: 1.0 / ps,
        success_probability: ps,
        tau: params.tau,
    })
}
