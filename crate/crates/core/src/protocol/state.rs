//! State vectors and the three steps of the sequence: pre-selection, free
//! evolution and post-selection of the electron.
//!
//! Two-spin basis: (|0 up>, |0 down>, |1 up>, |1 down>), |1> = m_s = -1.

use num_complex::Complex64;

use super::params::ProtocolParams;
use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::spin::matrix::{trace, ComplexMatrix, ComplexVector};

/// Norm tolerance for [`QuantumState`].
pub const NORM_TOL: f64 = 1e-12;
/// Below this success probability the post-selected state is undefined.
pub const POSTSELECTION_GUARD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// (up, down) of the nuclear meter.
    Nuclear,
    /// (|0>, |1>) of the truncated electron.
    Electron,
    /// Electron tensored with nuclear.
    TwoSpin,
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Nuclear | Basis::Electron => 2,
            Basis::TwoSpin => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: ComplexVector,
    basis: Basis,
}

impl QuantumState {
    /// Checks the dimension against the basis and the norm to [`NORM_TOL`].
    pub fn new(amplitudes: ComplexVector, basis: Basis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: amplitudes.len(),
            });
        }
        let n = amplitudes.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes, basis })
    }

    /// Normalises before wrapping.
    pub fn normalized(amplitudes: ComplexVector, basis: Basis) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized(n));
        }
        Self::new(amplitudes.unscale(n), basis)
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// <psi|O|psi>, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.nrows(),
            });
        }
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)).re)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_raw(&self.amplitudes * self.amplitudes.adjoint())
    }

    pub(crate) fn from_raw(amplitudes: ComplexVector, basis: Basis) -> Self {
        Self { amplitudes, basis }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionOutcome {
    /// Normalised nuclear state after a successful post-selection.
    pub nuclear_state: QuantumState,
    pub success_probability: f64,
}

impl PostSelectionOutcome {
    /// <I_z> of the post-selected meter.
    pub fn iz(&self) -> f64 {
        let a = self.nuclear_state.amplitudes();
        0.5 * (a[0].norm_sqr() - a[1].norm_sqr())
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Product state with electron amplitudes sin(theta_i/2) on |0> and
/// cos(theta_i/2) on |1>, and nuclear amplitudes cos(alpha/2) on up and
/// sin(alpha/2) on down.
pub fn pre_selected_state(alpha: f64, theta_i: f64) -> QuantumState {
    let (e0, e1) = ((theta_i / 2.0).sin(), (theta_i / 2.0).cos());
    let (nu, nd) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let v = ComplexVector::from_vec(vec![re(e0 * nu), re(e0 * nd), re(e1 * nu), re(e1 * nd)]);
    QuantumState::from_raw(v, Basis::TwoSpin)
}

/// Diagonal free evolution for `tau` with the energies of
/// [`ProtocolParams::branch_energies`].
pub fn evolve_free(
    state: &QuantumState,
    tau: f64,
    params: &ProtocolParams,
) -> Result<QuantumState> {
    if state.basis() != Basis::TwoSpin {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: state.dim(),
        });
    }
    let e = params.branch_energies();
    let v = ComplexVector::from_iterator(
        4,
        state
            .amplitudes()
            .iter()
            .zip(e)
            .map(|(a, en)| a * Complex64::from_polar(1.0, -en * tau)),
    );
    Ok(QuantumState::from_raw(v, Basis::TwoSpin))
}

/// |Psi_1>: pre-selection followed by free evolution over `params.tau`.
pub fn probe_state(params: &ProtocolParams) -> Result<QuantumState> {
    params.validate()?;
    evolve_free(
        &pre_selected_state(params.alpha, params.theta_i),
        params.tau,
        params,
    )
}

/// Electron target amplitudes (on |0>, on |1>) for post-selection angle
/// theta_f.
pub fn electron_target(theta_f: f64) -> (f64, f64) {
    ((theta_f / 2.0).sin(), (theta_f / 2.0).cos())
}

/// Projects the electron onto the target state and returns the
/// renormalised meter state together with the success probability.
pub fn post_select(state: &QuantumState, theta_f: f64) -> Result<PostSelectionOutcome> {
    if state.basis() != Basis::TwoSpin {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: state.dim(),
        });
    }
    let (t0, t1) = electron_target(theta_f);
    let a = state.amplitudes();
    let bar = ComplexVector::from_vec(vec![a[0] * t0 + a[2] * t1, a[1] * t0 + a[3] * t1]);
    let ps = bar.norm_squared();
    if ps < POSTSELECTION_GUARD {
        return Err(Error::PostSelectionImpossible(ps));
    }
    Ok(PostSelectionOutcome {
        nuclear_state: QuantumState::from_raw(bar.unscale(ps.sqrt()), Basis::Nuclear),
        success_probability: ps.min(1.0),
    })
}

/// <psi_f| rho |psi_f> on the electron factor. Returns the normalised
/// 2x2 meter state and the success probability.
pub fn post_select_density(rho: &DensityMatrix, theta_f: f64) -> Result<(DensityMatrix, f64)> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let (t0, t1) = electron_target(theta_f);
    let m = rho.matrix();
    let block = |i: usize, j: usize| m.view((2 * i, 2 * j), (2, 2)).into_owned();
    let post = block(0, 0) * re(t0 * t0)
        + (block(0, 1) + block(1, 0)) * re(t0 * t1)
        + block(1, 1) * re(t1 * t1);
    let ps = trace(&post).re;
    if ps < POSTSELECTION_GUARD {
        return Err(Error::PostSelectionImpossible(ps));
    }
    Ok((DensityMatrix::from_raw(post.unscale(ps)), ps.min(1.0)))
}

/// Tr over the electron of a two-spin operator.
pub fn trace_out_electron(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: m.nrows(),
        });
    }
    Ok(m.view((0, 0), (2, 2)).into_owned() + m.view((2, 2), (2, 2)).into_owned())
}

/// |Psi_1><Psi_1| with the electron coherence blocks multiplied by
/// exp(-tau/T2*), i.e. the state left by pure electron dephasing.
pub fn dephased_probe_density(params: &ProtocolParams) -> Result<DensityMatrix> {
    let psi = probe_state(params)?;
    let d = params.coherence_decay();
    let mut m = psi.density().into_matrix();
    for i in 0..2 {
        for j in 2..4 {
            m[(i, j)] *= d;
            m[(j, i)] *= d;
        }
    }
    Ok(DensityMatrix::from_raw(m))
}
