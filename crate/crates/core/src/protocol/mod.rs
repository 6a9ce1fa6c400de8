//! The pre-selection, free evolution and post-selection sequence, its
//! closed-form signals and the Ramsey reference.

pub mod closed_form;
pub mod params;
pub mod ramsey;
pub mod state;

pub use closed_form::{
    signal_ix_no_postselection, signal_iz, signal_iz_symmetric, signal_iz_symmetric_slope,
    signal_slopes, success_and_signal, success_and_signal_with_decay, success_probability,
    SignalSlopes, UnpostselectedSignals,
};
pub use params::{PhaseModel, ProtocolParams, Species};
pub use ramsey::{ramsey_signal, ramsey_slope};
pub use state::{
    dephased_probe_density, electron_target, evolve_free, post_select, post_select_density,
    pre_selected_state, probe_state, trace_out_electron, Basis, PostSelectionOutcome, QuantumState,
};
