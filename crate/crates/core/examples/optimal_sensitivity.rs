// Sensitivity of one working point, the optimal interrogation time, and
// what the timing budget does to it.
//
//     cargo run --release --example optimal_sensitivity

use nvmag::metrology::{sensitivity, Derivative, Scheme, TimingBudget, TimingPreset};
use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{optimize_tau, TauSearch};

pub fn run_example() -> nvmag::Result<()> {
    let t2 = 2.0;
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.3).with_t2_star(t2);
    let c13 = TimingBudget::preset(TimingPreset::C13Cryo);
    let ramsey = TimingBudget::preset(TimingPreset::Ramsey);

    let r = sensitivity(&p, &c13, Scheme::PostSelection, Derivative::Analytic)?;
    println!("C13 meter, T2* = {t2} us, tau = 1.3 us");
    println!("  Delta B  = {:.4e} G per shot", r.delta_b_gauss);
    println!(
        "  P_s      = {:.4}  ({:.1} trials per success)",
        r.success_probability, r.n_trials
    );
    println!("  t_m      = {:.1} us", r.t_m);
    println!("  eta      = {:.2} nT/rtHz", r.eta_nt());

    let fd = sensitivity(
        &p,
        &c13,
        Scheme::PostSelection,
        Derivative::FiniteDifference,
    )?;
    println!(
        "  finite-difference slope agrees to {:.1e}",
        (fd.eta / r.eta - 1.0).abs()
    );

    let search = TauSearch::for_t2_star(t2);
    let post = optimize_tau(&p, &c13, Scheme::PostSelection, &search)?;
    let ram = optimize_tau(&p, &ramsey, Scheme::Ramsey, &search)?;
    println!("\noptimised over (0, {}] us", search.hi);
    println!(
        "  post-selection: tau* = {:.3} us, eta = {:.2} nT/rtHz",
        post.tau,
        post.result.eta_nt()
    );
    println!(
        "  Ramsey:         tau* = {:.3} us, eta = {:.2} nT/rtHz",
        ram.tau,
        ram.result.eta_nt()
    );

    // a lossy photon readout scales eta_C = eta / C
    let lossy = c13.with_efficiency(0.707);
    let r = sensitivity(
        &p.with_tau(post.tau),
        &lossy,
        Scheme::PostSelection,
        Derivative::Analytic,
    )?;
    println!("  with C = 0.707: eta_C = {:.2} nT/rtHz", r.eta_c_nt());

    // room temperature: slow repetitive nuclear readout dominates the budget
    let rt = TimingBudget::preset(TimingPreset::RoomTemp);
    let q = p.with_species(Species::N15);
    let o = optimize_tau(&q, &rt, Scheme::PostSelection, &search)?;
    println!(
        "\nroom temperature, N15 meter: tau* = {:.3} us, eta_C = {:.2} uT/rtHz",
        o.tau,
        o.result.eta_c_nt() / 1e3
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
