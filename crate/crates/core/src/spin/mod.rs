//! Spin operators, constants and the two-spin Hamiltonians.

pub mod constants;
pub mod hamiltonian;
pub mod matrix;
pub mod operators;

pub use constants::{from_angular, to_angular, PhysConstants};
pub use hamiltonian::{
    build_lab_hamiltonian, build_rotating_frame_hamiltonian, detunings, truncate_to_submanifold,
    DriveParams, SpinSystem,
};
pub use matrix::{propagator, ComplexMatrix, ComplexVector};
pub use operators::SpinOperators;
