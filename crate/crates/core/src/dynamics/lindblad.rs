//! Pure electron dephasing through a Lindblad master equation, integrated
//! with fixed-step RK4.

use num_complex::Complex64;

use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::protocol::{pre_selected_state, ProtocolParams};
use crate::spin::matrix::{
    ensure_hermitian, hermitian_eigen, hermitian_part, real_diagonal, ComplexMatrix, HERMITIAN_TOL,
};

/// Worst negative eigenvalue tolerated at the output.
pub const POSITIVITY_TOL: f64 = 1e-6;
/// Largest admissible dt * max(||H||, rate).
pub const MAX_STEP_PRODUCT: f64 = 0.1;

/// Normalisation of the dephasing dissipator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingForm {
    /// rate (2 S rho S - S^2 rho - rho S^2); coherences between levels one
    /// unit of S_z apart decay at `rate`.
    Doubled,
    /// rate (S rho S - {S^2, rho} / 2); coherences decay at `rate / 2`.
    Anticommutator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dephasing {
    pub rate: f64,
    pub form: DephasingForm,
}

impl Dephasing {
    pub fn none() -> Self {
        Self {
            rate: 0.0,
            form: DephasingForm::Doubled,
        }
    }

    /// Rate 1/T2* in the doubled form, so coherences decay as exp(-t/T2*).
    pub fn from_t2_star(t2_star: f64) -> Self {
        let rate = if t2_star.is_infinite() {
            0.0
        } else {
            1.0 / t2_star
        };
        Self {
            rate,
            form: DephasingForm::Doubled,
        }
    }

    /// Markov limit of Ornstein-Uhlenbeck noise: rate 4 tau_c / T2*^2 in the
    /// anticommutator form.
    pub fn ou_markov_limit(t2_star: f64, tau_c: f64) -> Self {
        Self {
            rate: 4.0 * tau_c / (t2_star * t2_star),
            form: DephasingForm::Anticommutator,
        }
    }

    /// Decay rate of a coherence between levels one unit of S_z apart.
    pub fn coherence_rate(&self) -> f64 {
        match self.form {
            DephasingForm::Doubled => self.rate,
            DephasingForm::Anticommutator => self.rate / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rate >= 0.0 && self.rate.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "dephasing rate must be finite and >= 0, got {}",
                self.rate
            )))
        }
    }
}

/// Truncated electron S_z on the given dimension: diag(0, -1) for the bare
/// electron, diag(0, 0, -1, -1) for electron and meter.
pub fn dephasing_operator(dim: usize) -> Result<ComplexMatrix> {
    match dim {
        2 => Ok(real_diagonal(&[0.0, -1.0])),
        4 => Ok(real_diagonal(&[0.0, 0.0, -1.0, -1.0])),
        _ => Err(Error::DimensionMismatch {
            expected: 4,
            got: dim,
        }),
    }
}

/// -i [H, rho] + dissipator.
pub fn lindblad_rhs(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    dephasing: &Dephasing,
) -> Result<ComplexMatrix> {
    if rho.nrows() != h.nrows() || rho.ncols() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: rho.nrows(),
        });
    }
    let s = dephasing_operator(rho.nrows())?;
    Ok(rhs_with(rho, h, &s, dephasing))
}

fn rhs_with(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    s: &ComplexMatrix,
    dephasing: &Dephasing,
) -> ComplexMatrix {
    let minus_i = Complex64::new(0.0, -1.0);
    let unitary = (h * rho - rho * h) * minus_i;
    if dephasing.rate == 0.0 {
        return unitary;
    }
    let s2 = s * s;
    let sandwich = s * rho * s;
    let anti = &s2 * rho + rho * &s2;
    let diss = match dephasing.form {
        DephasingForm::Doubled => sandwich * Complex64::new(2.0, 0.0) - anti,
        DephasingForm::Anticommutator => sandwich - anti * Complex64::new(0.5, 0.0),
    };
    unitary + diss * Complex64::new(dephasing.rate, 0.0)
}

/// Spectral norm of a Hermitian matrix.
fn operator_norm(h: &ComplexMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(h)?;
    Ok(vals.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
}

/// dt = 0.01 / max(||H||, rate), further capped by tau_c / 20 when a
/// correlation time is given.
pub fn default_step(h: &ComplexMatrix, dephasing: &Dephasing, tau_c: Option<f64>) -> Result<f64> {
    let scale = operator_norm(h)?.max(dephasing.rate);
    let mut dt = if scale > 0.0 {
        0.01 / scale
    } else {
        f64::INFINITY
    };
    if let Some(tc) = tau_c {
        dt = dt.min(tc / 20.0);
    }
    Ok(dt)
}

fn check_inputs(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    dephasing: &Dephasing,
    dt: f64,
) -> Result<ComplexMatrix> {
    ensure_hermitian(h, HERMITIAN_TOL)?;
    dephasing.validate()?;
    if rho0.dim() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: rho0.dim(),
        });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    let product = dt * operator_norm(h)?.max(dephasing.rate);
    if product > MAX_STEP_PRODUCT {
        return Err(Error::InvalidParameter(format!(
            "dt * max(||H||, rate) = {product:.3} exceeds {MAX_STEP_PRODUCT}"
        )));
    }
    dephasing_operator(h.nrows())
}

fn rk4_step(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    s: &ComplexMatrix,
    d: &Dephasing,
    dt: f64,
) -> ComplexMatrix {
    let half = Complex64::new(dt / 2.0, 0.0);
    let full = Complex64::new(dt, 0.0);
    let k1 = rhs_with(rho, h, s, d);
    let k2 = rhs_with(&(rho + &k1 * half), h, s, d);
    let k3 = rhs_with(&(rho + &k2 * half), h, s, d);
    let k4 = rhs_with(&(rho + &k3 * full), h, s, d);
    let incr = (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(dt / 6.0, 0.0);
    hermitian_part(&(rho + incr))
}

fn finish(m: ComplexMatrix) -> Result<DensityMatrix> {
    let rho = DensityMatrix::from_raw(m);
    let min = rho.min_eigenvalue()?;
    if min < -POSITIVITY_TOL {
        return Err(Error::IntegrationUnstable(min));
    }
    let drift = (rho.trace().re - 1.0).abs();
    if drift > 1e-8 {
        return Err(Error::IntegrationUnstable(-drift));
    }
    Ok(rho)
}

/// rho(t_end) with a step no larger than `dt`; the step is shrunk so that
/// an integer number of steps lands on `t_end`.
pub fn integrate_master_equation(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    dephasing: &Dephasing,
    t_end: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    Ok(integrate_sampled(rho0, h, dephasing, &[t_end], dt)?
        .pop()
        .expect("one sample"))
}

/// rho at each of the increasing `times`, from a single integration.
pub fn integrate_sampled(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    dephasing: &Dephasing,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DensityMatrix>> {
    let s = check_inputs(rho0, h, dephasing, dt)?;
    let mut out = Vec::with_capacity(times.len());
    let mut rho = rho0.matrix().clone();
    let mut now = 0.0;
    for &t in times {
        if !(t >= now && t.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample times must be finite and increasing, got {t}"
            )));
        }
        let span = t - now;
        let n = (span / dt).ceil() as usize;
        if n > 0 {
            let step = span / n as f64;
            for _ in 0..n {
                rho = rk4_step(&rho, h, &s, dephasing, step);
            }
        }
        now = t;
        out.push(finish(rho.clone())?);
    }
    Ok(out)
}

/// Diagonal free-evolution Hamiltonian of the protocol on the two-spin
/// basis.
pub fn free_hamiltonian(params: &ProtocolParams) -> ComplexMatrix {
    real_diagonal(&params.branch_energies())
}

/// Pre-selected state evolved for `params.tau` under the free
/// Hamiltonian and the given dephasing.
pub fn evolve_protocol(
    params: &ProtocolParams,
    dephasing: &Dephasing,
    dt: Option<f64>,
) -> Result<DensityMatrix> {
    params.validate()?;
    let h = free_hamiltonian(params);
    let dt = match dt {
        Some(dt) => dt,
        None => default_step(&h, dephasing, None)?.min(params.tau.max(1e-300)),
    };
    let rho0 = pre_selected_state(params.alpha, params.theta_i).density();
    integrate_master_equation(&rho0, &h, dephasing, params.tau, dt)
}
