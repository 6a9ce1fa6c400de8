//! Open-system evolution: Lindblad pure dephasing of the electron and
//! Ornstein-Uhlenbeck field noise.

pub mod density;
pub mod lindblad;
pub mod monte_carlo;
pub mod ou;

pub use density::DensityMatrix;
pub use lindblad::{
    default_step, dephasing_operator, evolve_protocol, free_hamiltonian, integrate_master_equation,
    integrate_sampled, lindblad_rhs, Dephasing, DephasingForm,
};
pub use monte_carlo::{
    monte_carlo_ensemble, monte_carlo_signal, McEnsemble, McSeries, Observable, MIN_TRAJECTORIES,
};
pub use ou::{
    apply_noise_phase, ou_c_from_t2star, ou_sample_path, ou_sample_stream, stochastic_evolve,
    NoiseModel, OuParams, Trajectory,
};
