//! Conventional Ramsey reference on the bare electron with
//! theta_i = theta_f = pi/2.

use crate::spin::PhysConstants;

fn decay(tau: f64, t2_star: f64) -> f64 {
    if t2_star.is_infinite() {
        1.0
    } else {
        (-tau / t2_star).exp()
    }
}

/// <S_z>_R = 1/2 - exp(-tau/T2*) cos(gamma_e B tau) / 2.
///
/// Evaluated as [1 - d + 2 d sin^2(x/2)] / 2 so the value stays accurate
/// near the fringe bottom.
pub fn ramsey_signal(tau: f64, b_field: f64, t2_star: f64, consts: &PhysConstants) -> f64 {
    let x = consts.gamma_e * b_field * tau;
    let one_minus_d = if t2_star.is_infinite() {
        0.0
    } else {
        -(-tau / t2_star).exp_m1()
    };
    let d = decay(tau, t2_star);
    ((one_minus_d + 2.0 * d * (x / 2.0).sin().powi(2)) / 2.0).clamp(0.0, 1.0)
}

/// d<S_z>_R/dB.
pub fn ramsey_slope(tau: f64, b_field: f64, t2_star: f64, consts: &PhysConstants) -> f64 {
    let x = consts.gamma_e * b_field * tau;
    decay(tau, t2_star) * consts.gamma_e * tau * x.sin() / 2.0
}
