//! Density matrices with validated invariants.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::matrix::{
    hermitian_eigen, hermitian_part, hermiticity_defect, trace, ComplexMatrix, ComplexVector,
};

/// Tolerance on Hermiticity, trace and negative eigenvalues when a matrix
/// is accepted as a state.
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity to [`DENSITY_TOL`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DENSITY_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let h = hermiticity_defect(&m);
        if h > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {h:e})"
            )));
        }
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let m = hermitian_part(&m);
        let (vals, _) = hermitian_eigen(&m)?;
        if vals[0] < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:e}",
                vals[0]
            )));
        }
        Ok(Self { m })
    }

    /// |psi><psi| after normalising psi.
    pub fn from_pure(psi: &ComplexVector) -> Result<Self> {
        let n = psi.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized(n));
        }
        let v = psi.unscale(n);
        Ok(Self {
            m: &v * v.adjoint(),
        })
    }

    /// Identity over the dimension.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: ComplexMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    /// Wraps a matrix without checks. Callers own the invariants.
    pub(crate) fn from_raw(m: ComplexMatrix) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.m)
    }

    /// Tr(rho O).
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.nrows(),
            });
        }
        Ok(trace(&(&self.m * op)).re)
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        trace(&(&self.m * &self.m)).re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.m)?.0[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::matrix::real_diagonal;

    #[test]
    fn accepts_valid_states() {
        DensityMatrix::new(real_diagonal(&[0.25, 0.75])).unwrap();
        let psi = ComplexVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_states() {
        assert!(DensityMatrix::new(real_diagonal(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(real_diagonal(&[1.5, -0.5])).is_err());
        let mut m = real_diagonal(&[0.5, 0.5]);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn mixed_state_purity() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }
}
