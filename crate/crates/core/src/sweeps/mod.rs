//! Interrogation-time optimisation and the parameter sweeps behind the
//! datasets.

pub mod optimize;
pub mod runs;
pub mod table;

pub use optimize::{optimize_tau, TauOptimum, TauSearch};
pub use runs::{
    fisher_vs_time, noise_compare, ratio_map, search_for, signal_vs_time, sweep_b_fixed_tau,
    sweep_t2star, NoiseComparison, SensitivitySweep,
};
pub use table::{Axis, SweepResult};
