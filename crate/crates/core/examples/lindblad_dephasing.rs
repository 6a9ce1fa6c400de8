// Pure electron dephasing with the master equation, checked against the
// closed-form signal with the coherence damped by exp(-tau / T2*).
//
//     cargo run --release --example lindblad_dephasing

use nvmag::dynamics::{evolve_protocol, Dephasing};
use nvmag::protocol::{post_select_density, success_and_signal, ProtocolParams, Species};
use nvmag::spin::SpinOperators;

pub fn run_example() -> nvmag::Result<()> {
    let t2 = 2.0;
    let dephasing = Dephasing::from_t2_star(t2);
    let iz = SpinOperators::new().iz;
    println!("T2* = {t2} us, C13 meter, B = 0.01 G");
    println!("  tau(us)   purity   <I_z> master eq.   closed form     P_s");
    let mut worst = 0.0f64;
    for tau in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let p = ProtocolParams::symmetric(Species::C13, 0.01, tau).with_t2_star(t2);
        let rho = evolve_protocol(&p, &dephasing, Some(1e-3))?;
        let (meter, ps) = post_select_density(&rho, p.theta_f)?;
        let (ps_cf, iz_cf) = success_and_signal(&p)?;
        println!(
            "  {tau:7.2} {:8.5} {:18.10} {:13.10} {:7.4}",
            rho.purity(),
            meter.expectation(&iz)?,
            iz_cf,
            ps
        );
        worst = worst
            .max((ps - ps_cf).abs())
            .max((meter.expectation(&iz)? - iz_cf).abs());
    }
    println!("largest deviation from the closed form: {worst:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
