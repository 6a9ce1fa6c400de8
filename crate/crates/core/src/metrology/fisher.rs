//! Classical and quantum Fisher information about B.

use num_complex::Complex64;

use super::sensitivity::phase_scaled_step;
use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::protocol::{
    dephased_probe_density, post_select, post_select_density, probe_state, ramsey_signal,
    ramsey_slope, signal_slopes, ProtocolParams, QuantumState,
};
use crate::spin::matrix::{hermitian_eigen, ComplexMatrix, ComplexVector};

/// Outcomes less likely than this are left out of the classical sum.
pub const OUTCOME_FLOOR: f64 = 1e-12;
/// Eigenvalue pairs with p_i + p_j below this do not enter the SLD.
pub const SLD_FLOOR: f64 = 1e-12;
/// Distributions must sum to one within this.
pub const NORMALIZATION_TOL: f64 = 1e-10;

fn check_distribution(p: &[f64]) -> Result<()> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL || p.iter().any(|x| *x < -NORMALIZATION_TOL) {
        return Err(Error::NotNormalizedDistribution(sum));
    }
    Ok(())
}

/// sum_i (dP_i/dB)^2 / P_i with five-point central differences of step `h`.
pub fn classical_fisher<F>(prob_fn: F, b: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let points = [b - 2.0 * h, b - h, b, b + h, b + 2.0 * h];
    let dists = points
        .iter()
        .map(|&x| prob_fn(x))
        .collect::<Result<Vec<_>>>()?;
    for d in &dists {
        check_distribution(d)?;
        if d.len() != dists[2].len() {
            return Err(Error::DimensionMismatch {
                expected: dists[2].len(),
                got: d.len(),
            });
        }
    }
    let mut f = 0.0;
    for (i, &p) in dists[2].iter().enumerate() {
        if p < OUTCOME_FLOOR {
            continue;
        }
        let dp = (8.0 * (dists[3][i] - dists[1][i]) - (dists[4][i] - dists[0][i])) / (12.0 * h);
        f += dp * dp / p;
    }
    Ok(f)
}

/// Binary {success, failure} information of the post-selection itself:
/// (dP_s/dB)^2 / (P_s (1 - P_s)). Zero in the P_s -> 1 limit where the
/// slope vanishes too.
pub fn fisher_postselection_statistics(params: &ProtocolParams) -> Result<f64> {
    let s = signal_slopes(params)?;
    let (ps, dps) = (s.success_probability, s.d_success_probability);
    let var = ps * (1.0 - ps);
    if var <= 0.0 {
        if ps >= 1.0 && dps.abs() < 1e-12 {
            return Ok(0.0);
        }
        return Err(Error::DegenerateStatistics(ps));
    }
    Ok(dps * dps / var)
}

/// 4 <d psi|d psi> - 4 |<d psi|psi>|^2 with a five-point derivative of the
/// amplitudes.
pub fn qfi_pure<F>(state_fn: F, b: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<QuantumState>,
{
    let points = [b - 2.0 * h, b - h, b, b + h, b + 2.0 * h];
    let states = points
        .iter()
        .map(|&x| state_fn(x))
        .collect::<Result<Vec<_>>>()?;
    for s in &states {
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(s.norm()));
        }
    }
    let a = |k: usize| states[k].amplitudes();
    let d: ComplexVector =
        ((a(3) - a(1)) * Complex64::new(8.0, 0.0) - (a(4) - a(0))).unscale(12.0 * h);
    let overlap = d.dotc(a(2));
    Ok((4.0 * (d.norm_squared() - overlap.norm_sqr())).max(0.0))
}

/// Tr(rho L^2) with the symmetric logarithmic derivative built in the
/// eigenbasis of rho(B).
pub fn qfi_mixed_sld<F>(rho_fn: F, b: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    let points = [b - 2.0 * h, b - h, b, b + h, b + 2.0 * h];
    let rhos = points
        .iter()
        .map(|&x| rho_fn(x))
        .collect::<Result<Vec<_>>>()?;
    let m = |k: usize| rhos[k].matrix();
    let drho: ComplexMatrix =
        ((m(3) - m(1)) * Complex64::new(8.0, 0.0) - (m(4) - m(0))).unscale(12.0 * h);
    sld_fisher(m(2), &drho)
}

/// Fisher information from rho and its derivative.
pub fn sld_fisher(rho: &ComplexMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let (p, v) = hermitian_eigen(rho)?;
    let d = v.adjoint() * drho * &v;
    let n = p.len();
    let mut l = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = p[i] + p[j];
            if s > SLD_FLOOR {
                l[(i, j)] = d[(i, j)] * (2.0 / s);
            }
        }
    }
    let rho_eig = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        n,
        p.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    Ok((rho_eig * &l * &l).trace().re.max(0.0))
}

/// P_s times the quantum Fisher information of the post-selected meter.
/// With finite T2* the meter is taken from the dephased probe state.
pub fn postselection_weighted_fisher(params: &ProtocolParams) -> Result<f64> {
    let h = phase_scaled_step(params.consts.gamma_e, params.tau);
    let rho_fn = |x: f64| -> Result<DensityMatrix> {
        let q = params.with_field(x);
        Ok(post_select_density(&dephased_probe_density(&q)?, q.theta_f)?.0)
    };
    let ps = signal_slopes(params)?.success_probability;
    Ok(ps * qfi_mixed_sld(rho_fn, params.b_field, h)?)
}

/// Quantum Fisher information of the probe state before post-selection.
pub fn probe_fisher(params: &ProtocolParams) -> Result<f64> {
    let h = phase_scaled_step(params.consts.gamma_e, params.tau);
    if params.t2_star.is_infinite() {
        qfi_pure(|x| probe_state(&params.with_field(x)), params.b_field, h)
    } else {
        qfi_mixed_sld(
            |x| dephased_probe_density(&params.with_field(x)),
            params.b_field,
            h,
        )
    }
}

/// Fisher information of the two-outcome Ramsey readout,
/// (dp/dB)^2 / (p (1 - p)).
pub fn ramsey_fisher(params: &ProtocolParams) -> Result<f64> {
    let (tau, b, t2, c) = (params.tau, params.b_field, params.t2_star, &params.consts);
    let p = ramsey_signal(tau, b, t2, c);
    let dp = ramsey_slope(tau, b, t2, c);
    let var = p * (1.0 - p);
    if var > 0.0 {
        Ok(dp * dp / var)
    } else if t2.is_infinite() {
        // fringe extremum of a lossless fringe: the limit of the ratio
        Ok((c.gamma_e * tau).powi(2))
    } else if tau == 0.0 {
        Ok(0.0)
    } else {
        Err(Error::DegenerateStatistics(p))
    }
}

/// P_s times the information of an I_z readout of the post-selected meter
/// (outcomes 1/2 +- <I_z>).
pub fn postselected_iz_fisher(params: &ProtocolParams) -> Result<f64> {
    let s = signal_slopes(params)?;
    let var = 0.25 - s.iz * s.iz;
    if var <= 0.0 {
        return Ok(0.0);
    }
    Ok(s.success_probability * s.d_iz * s.d_iz / var)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherReport {
    pub tau: f64,
    pub f_classical: f64,
    pub f_ps: f64,
    pub f_q_probe: f64,
    pub f_q_post: f64,
    pub f_ramsey: f64,
}

impl FisherReport {
    /// Classical information of the I_z readout does not exceed the quantum
    /// bound of the same post-selected state.
    pub fn cramer_rao_holds(&self) -> bool {
        cramer_rao_ok(self.f_classical, self.f_q_post)
    }
}

/// F_c <= F_Q + 1e-8 max(1, F_Q).
pub fn cramer_rao_ok(classical: f64, quantum: f64) -> bool {
    classical <= quantum + 1e-8 * quantum.max(1.0)
}

pub fn fisher_report(params: &ProtocolParams) -> Result<FisherReport> {
    Ok(FisherReport {
        tau: params.tau,
        f_classical: postselected_iz_fisher(params)?,
        f_ps: fisher_postselection_statistics(params)?,
        f_q_probe: probe_fisher(params)?,
        f_q_post: postselection_weighted_fisher(params)?,
        f_ramsey: ramsey_fisher(params)?,
    })
}

/// Pure post-selected meter state as a function of B, for checks against
/// [`qfi_pure`].
pub fn postselected_state(params: &ProtocolParams, b: f64) -> Result<QuantumState> {
    let q = params.with_field(b);
    Ok(post_select(&probe_state(&q)?, q.theta_f)?.nuclear_state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{Basis, Species};

    fn electron_state(gamma_e: f64, tau: f64, b: f64) -> QuantumState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexVector::from_vec(vec![
            Complex64::new(r, 0.0),
            Complex64::from_polar(r, gamma_e * b * tau),
        ]);
        QuantumState::new(v, Basis::Electron).unwrap()
    }

    #[test]
    fn ramsey_identities() {
        let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
        let ge = p.consts.gamma_e;
        for tau in [0.3, 1.0, 2.5, 7.0] {
            let q = p.with_tau(tau);
            let want = (ge * tau).powi(2);
            assert!((ramsey_fisher(&q).unwrap() / want - 1.0).abs() < 1e-12);
            let h = phase_scaled_step(ge, tau);
            let fq = qfi_pure(|b| Ok(electron_state(ge, tau, b)), 0.01, h).unwrap();
            assert!((fq / want - 1.0).abs() < 1e-6);
            let fc = classical_fisher(
                |b| {
                    let s = ramsey_signal(tau, b, f64::INFINITY, &q.consts);
                    Ok(vec![s, 1.0 - s])
                },
                0.01,
                h,
            )
            .unwrap();
            assert!((fc / want - 1.0).abs() < 1e-6, "{fc} {want}");
        }
    }

    #[test]
    fn b_independent_inputs_carry_no_information() {
        assert_eq!(
            classical_fisher(|_| Ok(vec![0.3, 0.7]), 0.1, 1e-4).unwrap(),
            0.0
        );
        let s = electron_state(1.0, 1.0, 0.2);
        assert_eq!(qfi_pure(|_| Ok(s.clone()), 0.1, 1e-4).unwrap(), 0.0);
        let rho = DensityMatrix::maximally_mixed(4);
        assert_eq!(qfi_mixed_sld(|_| Ok(rho.clone()), 0.1, 1e-4).unwrap(), 0.0);
    }

    #[test]
    fn unnormalized_distribution_is_rejected() {
        let r = classical_fisher(|_| Ok(vec![0.3, 0.6]), 0.1, 1e-4);
        assert!(matches!(r, Err(Error::NotNormalizedDistribution(_))));
    }

    #[test]
    fn iz_distribution_matches_analytic_derivative() {
        let p = ProtocolParams::symmetric(Species::C13, 0.01, 2.2);
        let h = phase_scaled_step(p.consts.gamma_e, p.tau);
        let fc = classical_fisher(
            |b| {
                let s = signal_slopes(&p.with_field(b))?;
                Ok(vec![0.5 + s.iz, 0.5 - s.iz])
            },
            p.b_field,
            h,
        )
        .unwrap();
        let analytic =
            postselected_iz_fisher(&p).unwrap() / signal_slopes(&p).unwrap().success_probability;
        assert!((fc / analytic - 1.0).abs() < 1e-6);
    }

    #[test]
    fn mixed_matches_pure_in_pure_limit() {
        let p = ProtocolParams::symmetric(Species::N15, 0.01, 1.1).with_angles(0.8, 1.2, 2.0);
        let h = phase_scaled_step(p.consts.gamma_e, p.tau);
        let pure = qfi_pure(|b| probe_state(&p.with_field(b)), p.b_field, h).unwrap();
        let mixed = qfi_mixed_sld(
            |b| Ok(probe_state(&p.with_field(b))?.density()),
            p.b_field,
            h,
        )
        .unwrap();
        assert!((pure / mixed - 1.0).abs() < 1e-6);
        let post_pure = qfi_pure(|b| postselected_state(&p, b), p.b_field, h).unwrap();
        let ps = signal_slopes(&p).unwrap().success_probability;
        let weighted = postselection_weighted_fisher(&p).unwrap();
        assert!((ps * post_pure / weighted - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fidelity_susceptibility_oracle() {
        let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.7);
        let h = phase_scaled_step(p.consts.gamma_e, p.tau);
        let fq = qfi_pure(|b| probe_state(&p.with_field(b)), p.b_field, h).unwrap();
        let psi = probe_state(&p).unwrap();
        let dh = 1e-4 / (p.consts.gamma_e * p.tau);
        let shifted = probe_state(&p.with_field(p.b_field + dh)).unwrap();
        let fid = psi.amplitudes().dotc(shifted.amplitudes()).norm();
        let oracle = 8.0 * (1.0 - fid) / (dh * dh);
        assert!((fq / oracle - 1.0).abs() < 1e-4, "{fq} {oracle}");
        // electron-coherence weight: (gamma_e^2 + gamma_c^2) tau^2 at these angles
        let want = (p.consts.gamma_e.powi(2) + p.consts.gamma_c.powi(2)) * p.tau * p.tau;
        assert!((fq / want - 1.0).abs() < 1e-8);
    }

    #[test]
    fn dephasing_contracts_probe_information() {
        let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.5);
        let lossless = probe_fisher(&p).unwrap();
        let damped = probe_fisher(&p.with_t2_star(2.0)).unwrap();
        assert!(damped.is_finite() && damped > 0.0 && damped < lossless);
    }

    #[test]
    fn trivial_limits() {
        let p = ProtocolParams::symmetric(Species::C13, 0.01, 0.0);
        assert_eq!(fisher_postselection_statistics(&p).unwrap(), 0.0);
        assert!(postselection_weighted_fisher(&p).unwrap() < 1e-12);
    }

    #[test]
    fn cramer_rao_ordering_on_grid() {
        for species in [Species::C13, Species::N15] {
            for t2 in [f64::INFINITY, 2.0] {
                for k in 1..40 {
                    let p =
                        ProtocolParams::symmetric(species, 0.01, 0.1 * k as f64).with_t2_star(t2);
                    let r = fisher_report(&p).unwrap();
                    assert!(r.cramer_rao_holds(), "{r:?}");
                    assert!(cramer_rao_ok(
                        r.f_ramsey,
                        probe_fisher(&p.with_t2_star(t2)).unwrap().max(r.f_ramsey)
                    ));
                }
            }
        }
    }
}
