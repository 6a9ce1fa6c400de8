//! Lab-frame and rotating-frame Hamiltonians of the NV electron spin
//! coupled to one nuclear spin through the secular hyperfine term.
//!
//! Six-level basis ordering is electron (m_s = +1, 0, -1) tensored with
//! nuclear (up, down). The truncated four-level basis is
//! (|0 up>, |0 down>, |1 up>, |1 down>) with |1> = m_s = -1.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::constants::PhysConstants;
use super::matrix::{kron, ComplexMatrix};
use super::operators::SpinOperators;
use crate::error::{Error, Result};

/// Static part of the two-spin problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSystem {
    pub consts: PhysConstants,
    /// Secular hyperfine coupling A_zz (rad/us).
    pub a_zz: f64,
    /// Field to sense (G).
    pub b_field: f64,
    /// Bias field along the NV axis (G).
    pub bias_field: f64,
}

/// Microwave and radio-frequency drive settings, all angular (rad/us).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Electron Rabi frequency.
    pub omega_e: f64,
    /// Nuclear Rabi frequency.
    pub omega_c0: f64,
    /// Microwave carrier frequency.
    pub freq_e: f64,
    /// Radio-frequency carrier frequency.
    pub freq_c: f64,
}

impl DriveParams {
    /// Drive tuned to the frame used throughout: freq_e = -D + gamma_e B_z and
    /// freq_c = gamma_c B_z.
    pub fn in_standard_frame(system: &SpinSystem, omega_e: f64, omega_c0: f64) -> Result<Self> {
        let drive = Self {
            omega_e,
            omega_c0,
            freq_e: -system.consts.zero_field_splitting + system.consts.gamma_e * system.bias_field,
            freq_c: system.consts.gamma_c * system.bias_field,
        };
        drive.validate(system)?;
        Ok(drive)
    }

    pub fn off() -> Self {
        Self {
            omega_e: 0.0,
            omega_c0: 0.0,
            freq_e: 0.0,
            freq_c: 0.0,
        }
    }

    /// A_zz bounds the nuclear Rabi frequency through power broadening.
    pub fn power_broadening_ok(&self, system: &SpinSystem) -> bool {
        self.omega_c0 < system.a_zz.abs()
    }

    pub fn validate(&self, system: &SpinSystem) -> Result<()> {
        if !(self.omega_e >= 0.0 && self.omega_c0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Rabi frequencies must be non-negative, got omega_e = {}, omega_c0 = {}",
                self.omega_e, self.omega_c0
            )));
        }
        if self.omega_c0 > 0.0 && !self.power_broadening_ok(system) {
            log::warn!(
                "nuclear Rabi frequency {} rad/us is not below A_zz = {} rad/us (power broadening)",
                self.omega_c0,
                system.a_zz
            );
        }
        Ok(())
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ensure_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

/// Drive-free part `D S_z^2 + gamma_e S_z (B_z + B) + gamma_c I_z (B_z + B) + A_zz S_z I_z`.
fn static_lab_hamiltonian(system: &SpinSystem, ops: &SpinOperators) -> ComplexMatrix {
    let id3 = ComplexMatrix::identity(3, 3);
    let id2 = ComplexMatrix::identity(2, 2);
    let total = system.bias_field + system.b_field;
    let c = &system.consts;
    let sz2 = &ops.sz * &ops.sz;
    kron(&sz2, &id2) * re(c.zero_field_splitting)
        + kron(&ops.sz, &id2) * re(c.gamma_e * total)
        + kron(&id3, &ops.iz) * re(c.gamma_c * total)
        + kron(&ops.sz, &ops.iz) * re(system.a_zz)
}

/// Time-dependent 6x6 lab-frame Hamiltonian including both cosine drives.
pub fn build_lab_hamiltonian(
    system: &SpinSystem,
    drive: &DriveParams,
    t: f64,
) -> Result<ComplexMatrix> {
    ensure_time(t)?;
    drive.validate(system)?;
    let ops = SpinOperators::new();
    let id3 = ComplexMatrix::identity(3, 3);
    let id2 = ComplexMatrix::identity(2, 2);
    let h = static_lab_hamiltonian(system, &ops)
        + kron(&ops.sx, &id2) * re(SQRT_2 * drive.omega_e * (drive.freq_e * t).cos())
        + kron(&id3, &ops.ix) * re(2.0 * drive.omega_c0 * (drive.freq_c * t).cos());
    if h.nrows() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            got: h.nrows(),
        });
    }
    Ok(h)
}

/// Static 6x6 Hamiltonian in the frame rotating at the drive frequencies,
/// after the rotating-wave approximation. Only the m_s = 0 <-> -1 microwave
/// transition and the m_s = 0 nuclear transition keep their couplings.
pub fn build_rotating_frame_hamiltonian(
    system: &SpinSystem,
    drive: &DriveParams,
) -> Result<ComplexMatrix> {
    drive.validate(system)?;
    let c = &system.consts;
    let expected_e = -c.zero_field_splitting + c.gamma_e * system.bias_field;
    let expected_c = c.gamma_c * system.bias_field;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    if !(close(drive.freq_e, expected_e) && close(drive.freq_c, expected_c)) {
        return Err(Error::UnsupportedFrame(format!(
            "expected freq_e = {expected_e}, freq_c = {expected_c} rad/us, got {}, {}",
            drive.freq_e, drive.freq_c
        )));
    }

    let ops = SpinOperators::new();
    let id3 = ComplexMatrix::identity(3, 3);
    let id2 = ComplexMatrix::identity(2, 2);
    let sz2 = &ops.sz * &ops.sz;
    let mut h = kron(&(&sz2 + &ops.sz), &id2) * re(c.zero_field_splitting)
        + kron(&ops.sz, &id2) * re(c.gamma_e * system.b_field)
        + kron(&id3, &ops.iz) * re(c.gamma_c * system.b_field)
        + kron(&ops.sz, &ops.iz) * re(system.a_zz);

    let half_e = re(drive.omega_e / 2.0);
    let half_c = re(drive.omega_c0 / 2.0);
    // (0 up, 0 down) nuclear coupling
    h[(2, 3)] = half_c;
    h[(3, 2)] = half_c;
    // (0 m, -1 m) electron coupling
    h[(2, 4)] = half_e;
    h[(4, 2)] = half_e;
    h[(3, 5)] = half_e;
    h[(5, 3)] = half_e;
    Ok(h)
}

/// Projects a six-level operator onto the (m_s = 0, -1) manifold,
/// returning the block over (|0 up>, |0 down>, |1 up>, |1 down>).
pub fn truncate_to_submanifold(h6: &ComplexMatrix) -> Result<ComplexMatrix> {
    if h6.nrows() != 6 || h6.ncols() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            got: h6.nrows(),
        });
    }
    Ok(h6.view((2, 2), (4, 4)).into_owned())
}

/// Detunings of the |1 up> and |1 down> levels in the rotating frame
/// (rad/us).
pub fn detunings(system: &SpinSystem) -> (f64, f64) {
    let ge_b = system.consts.gamma_e * system.b_field;
    let gc_b = system.consts.gamma_c * system.b_field;
    let a = system.a_zz;
    (-ge_b - a / 2.0 + gc_b / 2.0, -ge_b + a / 2.0 - gc_b / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::constants::to_angular;
    use crate::spin::matrix::{hermitian_eigen, hermiticity_defect, max_abs};

    fn system(b: f64, bz: f64) -> SpinSystem {
        SpinSystem {
            consts: PhysConstants::default(),
            a_zz: to_angular(0.5),
            b_field: b,
            bias_field: bz,
        }
    }

    #[test]
    fn zero_field_spectrum() {
        let s = system(0.0, 0.0);
        let h = build_lab_hamiltonian(&s, &DriveParams::off(), 0.7).unwrap();
        let (vals, _) = hermitian_eigen(&h).unwrap();
        // A_zz S_z I_z also vanishes on m_s = 0 and splits m_s = +-1 by A/2
        let d = s.consts.zero_field_splitting;
        let a = s.a_zz / 2.0;
        let mut want = vec![0.0, 0.0, d - a, d - a, d + a, d + a];
        want.sort_by(f64::total_cmp);
        for (v, w) in vals.iter().zip(&want) {
            assert!((v - w).abs() < 1e-9 * d);
        }
    }

    #[test]
    fn zero_field_no_hyperfine_is_d_sz_squared() {
        let mut s = system(0.0, 0.0);
        s.a_zz = 0.0;
        let h = build_lab_hamiltonian(&s, &DriveParams::off(), 0.0).unwrap();
        let d = s.consts.zero_field_splitting;
        let want = [d, d, 0.0, 0.0, d, d];
        for k in 0..6 {
            assert!((h[(k, k)].re - want[k]).abs() < 1e-12 * d);
        }
    }

    #[test]
    fn unsupported_frame_is_rejected() {
        let s = system(0.01, 500.0);
        let mut drive = DriveParams::in_standard_frame(&s, 1.0, 0.5).unwrap();
        drive.freq_e += 1.0;
        assert!(matches!(
            build_rotating_frame_hamiltonian(&s, &drive),
            Err(Error::UnsupportedFrame(_))
        ));
    }

    #[test]
    fn rotating_frame_is_hermitian_and_static() {
        let s = system(0.3, 500.0);
        let drive = DriveParams::in_standard_frame(&s, 2.0, 0.7).unwrap();
        let h = build_rotating_frame_hamiltonian(&s, &drive).unwrap();
        assert!(hermiticity_defect(&h) < 1e-12);
    }

    #[test]
    fn truncation_needs_six_levels() {
        assert!(truncate_to_submanifold(&ComplexMatrix::zeros(4, 4)).is_err());
    }

    #[test]
    fn zero_field_truncation() {
        let s = system(0.0, 0.0);
        let drive = DriveParams::in_standard_frame(&s, 0.0, 0.0).unwrap();
        let h4 = truncate_to_submanifold(&build_rotating_frame_hamiltonian(&s, &drive).unwrap())
            .unwrap();
        let (up, down) = detunings(&s);
        assert_eq!((up, down), (-s.a_zz / 2.0, s.a_zz / 2.0));
        let want = [0.0, 0.0, up, down];
        for k in 0..4 {
            assert!((h4[(k, k)].re - want[k]).abs() < 1e-12);
        }
        assert!(max_abs(&(h4.clone() - ComplexMatrix::from_diagonal(&h4.diagonal()))) == 0.0);
    }

    #[test]
    fn detuning_arithmetic() {
        let s = system(0.01, 0.0);
        let (up, _) = detunings(&s);
        let want = -to_angular(0.028 + 0.25) + s.consts.gamma_c * 0.01 / 2.0;
        assert!((up - want).abs() < 1e-12);
    }
}
