//! Spin operators.
//!
//! Spin-1 matrices use the basis (m_s = +1, 0, -1); spin-1/2 matrices use
//! (up, down). The truncated electron operator lives on the two-level
//! manifold (|0>, |1>) where |1> is m_s = -1.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::matrix::{kron, real_diagonal, ComplexMatrix};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> ComplexMatrix {
    ComplexMatrix::from_fn(N, N, |i, j| rows[i][j])
}

#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub sz: ComplexMatrix,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub splus: ComplexMatrix,
    pub iz: ComplexMatrix,
    pub ix: ComplexMatrix,
    pub iy: ComplexMatrix,
    pub iplus: ComplexMatrix,
    /// Electron S_z restricted to (|0>, |1>): diag(0, -1).
    pub sz2: ComplexMatrix,
}

impl SpinOperators {
    pub fn new() -> Self {
        let z = c(0.0, 0.0);
        let r = c(FRAC_1_SQRT_2, 0.0);
        let i = c(0.0, FRAC_1_SQRT_2);
        let sx = from_rows([[z, r, z], [r, z, r], [z, r, z]]);
        let sy = from_rows([[z, -i, z], [i, z, -i], [z, i, z]]);
        let sz = real_diagonal(&[1.0, 0.0, -1.0]);
        let splus = &sx + &sy * c(0.0, 1.0);

        let h = c(0.5, 0.0);
        let hi = c(0.0, 0.5);
        let ix = from_rows([[z, h], [h, z]]);
        let iy = from_rows([[z, -hi], [hi, z]]);
        let iz = real_diagonal(&[0.5, -0.5]);
        let iplus = &ix + &iy * c(0.0, 1.0);

        Self {
            sz,
            sx,
            sy,
            splus,
            iz,
            ix,
            iy,
            iplus,
            sz2: real_diagonal(&[0.0, -1.0]),
        }
    }
}

impl Default for SpinOperators {
    fn default() -> Self {
        Self::new()
    }
}

/// Truncated electron S_z tensored with the nuclear identity, on the
/// two-spin basis (|0 up>, |0 down>, |1 up>, |1 down>).
pub fn sz_two_spin() -> ComplexMatrix {
    real_diagonal(&[0.0, 0.0, -1.0, -1.0])
}

/// Electron identity tensored with a nuclear operator, same basis.
pub fn nuclear_on_two_spin(op: &ComplexMatrix) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(2, 2), op)
}

pub fn pauli_x() -> ComplexMatrix {
    from_rows([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn pauli_y() -> ComplexMatrix {
    from_rows([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> ComplexMatrix {
    real_diagonal(&[1.0, -1.0])
}
