//! Field uncertainty, sensitivity with timing budgets, and Fisher
//! information.

pub mod fisher;
pub mod sensitivity;
pub mod timing;

pub use fisher::{
    classical_fisher, cramer_rao_ok, fisher_postselection_statistics, fisher_report,
    postselected_iz_fisher, postselected_state, postselection_weighted_fisher, probe_fisher,
    qfi_mixed_sld, qfi_pure, ramsey_fisher, sld_fisher, FisherReport,
};
pub use sensitivity::{
    delta_b, delta_iz, five_point, phase_scaled_step, sensitivity, signal_and_slope, Derivative,
    Scheme, SensitivityResult,
};
pub use timing::{TimingBudget, TimingPreset};
