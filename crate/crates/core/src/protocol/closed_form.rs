//! Closed-form success probability and meter signals.
//!
//! Electron coherence terms (the ones carrying sin(theta_f) sin(theta_i))
//! are damped by exp(-tau/T2*). Phases come from
//! [`ProtocolParams::branch_phases`], so the closed forms agree with the
//! explicit projection for either phase model.

use super::params::ProtocolParams;
use super::state::POSTSELECTION_GUARD;
use crate::error::{Error, Result};

/// Denominators of the symmetric signal below this are treated as singular.
pub const SINGULAR_GUARD: f64 = 1e-15;

struct Terms {
    /// (1 + cos theta_f cos theta_i) / 2
    aligned: f64,
    /// sin theta_f sin theta_i exp(-tau/T2*) / 2
    interference: f64,
    up_weight: f64,
    down_weight: f64,
    cos_up: f64,
    cos_down: f64,
}

fn terms(p: &ProtocolParams) -> Result<Terms> {
    terms_with_decay(p, p.coherence_decay())
}

fn terms_with_decay(p: &ProtocolParams, decay: f64) -> Result<Terms> {
    p.validate()?;
    if !(0.0..=1.0).contains(&decay) {
        return Err(Error::InvalidParameter(format!(
            "coherence factor must lie in [0, 1], got {decay}"
        )));
    }
    let (phi_up, phi_down) = p.branch_phases();
    Ok(Terms {
        aligned: 0.5 * (1.0 + p.theta_f.cos() * p.theta_i.cos()),
        interference: 0.5 * p.theta_f.sin() * p.theta_i.sin() * decay,
        up_weight: (p.alpha / 2.0).cos().powi(2),
        down_weight: (p.alpha / 2.0).sin().powi(2),
        cos_up: phi_up.cos(),
        cos_down: phi_down.cos(),
    })
}

/// P_s = [1 + cf ci]/2 + sf si d [cos^2(alpha/2) cos phi_up + sin^2(alpha/2) cos phi_down] / 2.
pub fn success_probability(p: &ProtocolParams) -> Result<f64> {
    let t = terms(p)?;
    let ps = t.aligned + t.interference * (t.up_weight * t.cos_up + t.down_weight * t.cos_down);
    Ok(ps.clamp(0.0, 1.0))
}

/// Post-selected <I_z> of the meter.
pub fn signal_iz(p: &ProtocolParams) -> Result<f64> {
    let t = terms(p)?;
    let ps = t.aligned + t.interference * (t.up_weight * t.cos_up + t.down_weight * t.cos_down);
    if ps < POSTSELECTION_GUARD {
        return Err(Error::PostSelectionImpossible(ps));
    }
    let num = 0.5 * t.aligned * p.alpha.cos()
        + 0.5 * t.interference * (t.up_weight * t.cos_up - t.down_weight * t.cos_down);
    Ok((num / ps).clamp(-0.5, 0.5))
}

/// Success probability and post-selected <I_z> in one pass.
pub fn success_and_signal(p: &ProtocolParams) -> Result<(f64, f64)> {
    success_and_signal_with_decay(p, p.coherence_decay())
}

/// As [`success_and_signal`] with an arbitrary factor on the electron
/// coherence in place of exp(-tau/T2*), e.g. the ensemble coherence of a
/// noise model.
pub fn success_and_signal_with_decay(p: &ProtocolParams, decay: f64) -> Result<(f64, f64)> {
    let t = terms_with_decay(p, decay)?;
    let ps = t.aligned + t.interference * (t.up_weight * t.cos_up + t.down_weight * t.cos_down);
    if ps < POSTSELECTION_GUARD {
        return Err(Error::PostSelectionImpossible(ps));
    }
    let num = 0.5 * t.aligned * p.alpha.cos()
        + 0.5 * t.interference * (t.up_weight * t.cos_up - t.down_weight * t.cos_down);
    Ok((ps.clamp(0.0, 1.0), (num / ps).clamp(-0.5, 0.5)))
}

/// P_s, <I_z> and their analytic B-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSlopes {
    pub success_probability: f64,
    pub iz: f64,
    pub d_success_probability: f64,
    pub d_iz: f64,
}

pub fn signal_slopes(p: &ProtocolParams) -> Result<SignalSlopes> {
    let t = terms(p)?;
    let (phi_up, phi_down) = p.branch_phases();
    let (s_up, s_down) = p.branch_phase_slopes();
    let dcu = -phi_up.sin() * s_up;
    let dcd = -phi_down.sin() * s_down;
    let ps = t.aligned + t.interference * (t.up_weight * t.cos_up + t.down_weight * t.cos_down);
    if ps < POSTSELECTION_GUARD {
        return Err(Error::PostSelectionImpossible(ps));
    }
    let dps = t.interference * (t.up_weight * dcu + t.down_weight * dcd);
    let num = 0.5 * t.aligned * p.alpha.cos()
        + 0.5 * t.interference * (t.up_weight * t.cos_up - t.down_weight * t.cos_down);
    let dnum = 0.5 * t.interference * (t.up_weight * dcu - t.down_weight * dcd);
    Ok(SignalSlopes {
        success_probability: ps,
        iz: num / ps,
        d_success_probability: dps,
        d_iz: (dnum * ps - num * dps) / (ps * ps),
    })
}

struct Symmetric {
    decay: f64,
    sa: f64,
    ca: f64,
    su: f64,
    cu: f64,
}

fn symmetric_terms(tau: f64, b_field: f64, p: &ProtocolParams) -> Result<Symmetric> {
    let q = p.with_tau(tau).with_field(b_field);
    q.validate()?;
    let half_split = q.effective_splitting() * tau / 2.0;
    let u = q.consts.gamma_e * b_field * tau;
    Ok(Symmetric {
        decay: q.coherence_decay(),
        sa: half_split.sin(),
        ca: half_split.cos(),
        su: u.sin(),
        cu: u.cos(),
    })
}

/// <I_z> at alpha = theta_i = theta_f = pi/2:
/// -d sin(A tau/2) sin(gamma_e B tau) / [2 (d cos(A tau/2) cos(gamma_e B tau) + 1)].
/// The angles stored in `p` are ignored; species, T2*, constants and the
/// phase model are used.
pub fn signal_iz_symmetric(tau: f64, b_field: f64, p: &ProtocolParams) -> Result<f64> {
    let s = symmetric_terms(tau, b_field, p)?;
    let den = s.decay * s.ca * s.cu + 1.0;
    if den.abs() < SINGULAR_GUARD {
        return Err(Error::SignalSingular(den));
    }
    Ok(-s.decay * s.sa * s.su / (2.0 * den))
}

/// d<I_z>/dB of [`signal_iz_symmetric`], analytic.
pub fn signal_iz_symmetric_slope(tau: f64, b_field: f64, p: &ProtocolParams) -> Result<f64> {
    let s = symmetric_terms(tau, b_field, p)?;
    let d = s.decay;
    let den = d * s.ca * s.cu + 1.0;
    if den.abs() < SINGULAR_GUARD {
        return Err(Error::SignalSingular(den));
    }
    let du = p.consts.gamma_e * tau;
    let da = p.effective_splitting_slope() * tau / 2.0;
    let num = -d * s.sa * s.su;
    let dnum = -d * (s.ca * da * s.su + s.sa * s.cu * du);
    let dden = d * (-s.sa * da * s.cu - s.ca * s.su * du);
    Ok((dnum * den - num * dden) / (2.0 * den * den))
}

/// Meter expectations without post-selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnpostselectedSignals {
    /// Pauli-normalised transverse expectation <sigma_x> = 2 <I_x> for the
    /// phase model in use.
    pub sigma_x: f64,
    /// <I_z> = cos(alpha)/2, independent of the field.
    pub iz: f64,
}

/// sin(alpha) [cos^2(theta_i/2) cos((E_1up - E_1down) tau) + sin^2(theta_i/2) cos((E_0up - E_0down) tau)].
///
/// With the weak-field phase model the second cosine is 1 and this is
/// sin(alpha)[cos^2(theta_i/2) cos((A - gamma_c B) tau) + sin^2(theta_i/2)].
pub fn signal_ix_no_postselection(p: &ProtocolParams) -> Result<UnpostselectedSignals> {
    p.validate()?;
    let e = p.branch_energies();
    let c2 = (p.theta_i / 2.0).cos().powi(2);
    let s2 = (p.theta_i / 2.0).sin().powi(2);
    let sigma_x =
        p.alpha.sin() * (c2 * ((e[2] - e[3]) * p.tau).cos() + s2 * ((e[0] - e[1]) * p.tau).cos());
    Ok(UnpostselectedSignals {
        sigma_x,
        iz: p.alpha.cos() / 2.0,
    })
}
