// Classical and quantum Fisher information of the post-selected meter
// against the Ramsey sequence.
//
//     cargo run --release --example fisher_information

use nvmag::metrology::fisher_report;
use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{fisher_vs_time, Axis};

pub fn run_example() -> nvmag::Result<()> {
    let lossless = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let ge = lossless.consts.gamma_e;
    println!("lossless: Ramsey information is (gamma_e tau)^2");
    for tau in [0.5, 1.0, 2.0, 4.0] {
        let r = fisher_report(&lossless.with_tau(tau))?;
        println!(
            "  tau = {tau:3}  F_ramsey = {:10.4}  (gamma_e tau)^2 = {:10.4}",
            r.f_ramsey,
            (ge * tau).powi(2)
        );
    }

    let p = lossless.with_t2_star(2.0);
    let taus = Axis::linear(0.0, 5.0, 201).values()?;
    let table = fisher_vs_time(&p, &taus)?;
    let peak = |col: &str| {
        let v = table.column(col).unwrap_or_default();
        let k = (0..v.len())
            .max_by(|&a, &b| v[a].total_cmp(&v[b]))
            .unwrap_or(0);
        (taus[k], v[k])
    };
    println!("\nT2* = 2 us, maxima over tau in [0, 5] us");
    for col in ["f_ramsey", "f_q_probe", "f_ps", "f_q_post", "f_classical"] {
        let (t, f) = peak(col);
        println!("  {col:<12} {f:9.3} at tau = {t:.3} us");
    }

    let violations = taus
        .iter()
        .filter_map(|&t| fisher_report(&p.with_tau(t)).ok())
        .filter(|r| !r.cramer_rao_holds())
        .count();
    println!("Cramer-Rao violations on the grid: {violations}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
