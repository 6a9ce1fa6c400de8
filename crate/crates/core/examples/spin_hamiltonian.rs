// The electron-nuclear Hamiltonian: lab frame, rotating frame, the
// (m_s = 0, -1) block used by the protocol, and a driven electron pi pulse.
//
//     cargo run --release --example spin_hamiltonian

use std::f64::consts::PI;

use nvmag::protocol::{ProtocolParams, Species};
use nvmag::spin::matrix::{hermiticity_defect, unitarity_defect};
use nvmag::spin::{
    build_lab_hamiltonian, build_rotating_frame_hamiltonian, detunings, from_angular, propagator,
    truncate_to_submanifold, ComplexVector, DriveParams,
};

pub fn run_example() -> nvmag::Result<()> {
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let system = p.spin_system();
    let idle = DriveParams::in_standard_frame(&system, 0.0, 0.0)?;

    let lab = build_lab_hamiltonian(&system, &idle, 0.3)?;
    println!(
        "lab frame: 6x6, Hermiticity defect {:.1e}",
        hermiticity_defect(&lab)
    );
    let diag: Vec<f64> = (0..6).map(|k| from_angular(lab[(k, k)].re)).collect();
    println!("  diagonal (MHz): {diag:.4?}");

    let rot = build_rotating_frame_hamiltonian(&system, &idle)?;
    let block = truncate_to_submanifold(&rot)?;
    let (d_up, d_down) = detunings(&system);
    println!("\nrotating frame, (m_s = 0, -1) block on |0 up>, |0 down>, |1 up>, |1 down>:");
    for k in 0..4 {
        println!("  {:+.6} rad/us", block[(k, k)].re);
    }
    println!("detunings of |1 up>, |1 down>: {d_up:+.6}, {d_down:+.6} rad/us");
    println!(
        "protocol branch energies:      {:+.6?}",
        p.branch_energies()
    );

    // electron pi pulse, nuclear drive off
    let omega_e = 2.0 * PI * 20.0;
    let drive = DriveParams::in_standard_frame(&system, omega_e, 0.0)?;
    let h = build_rotating_frame_hamiltonian(&system, &drive)?;
    let u = propagator(&h, PI / omega_e)?;
    let mut psi = ComplexVector::zeros(6);
    psi[2] = 1.0.into();
    let out = &u * &psi;
    println!(
        "\npi pulse at Omega_e = 20 MHz: unitarity defect {:.1e}, population moved to m_s = -1: {:.6}",
        unitarity_defect(&u),
        out[4].norm_sqr() + out[5].norm_sqr()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
