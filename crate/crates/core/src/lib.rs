//! Post-selection DC magnetometry with an NV electron spin and a nearby
//! nuclear spin used as a meter.
//!
//! The crate is organised bottom-up:
//!
//! - [`spin`]: constants, spin operators, lab and rotating-frame Hamiltonians,
//!   Hermitian propagators.
//! - [`protocol`]: pre-selection, free evolution and post-selection, the
//!   closed-form signals and the Ramsey reference.
//! - [`dynamics`]: Lindblad pure dephasing and Ornstein-Uhlenbeck field noise.
//! - [`metrology`]: field uncertainty, sensitivity with timing budgets and
//!   (quantum) Fisher information.
//! - [`sweeps`]: interrogation-time optimisation and the parameter sweeps.
//! - [`cli`]: configuration files, dataset writers and the commands behind the
//!   `nvmag` binary.
//!
//! Units: time in microseconds, fields in Gauss, frequencies stored as
//! angular values in rad/us. Sensitivities are reported in T/sqrt(Hz)
//! (or nT/sqrt(Hz) in datasets).

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod metrology;
pub mod protocol;
pub mod spin;
pub mod sweeps;

pub use error::{Error, Result};
