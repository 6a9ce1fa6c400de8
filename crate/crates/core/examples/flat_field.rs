// At A_zz tau / 2 = pi/2 the field uncertainty stops depending on B; a
// slightly different tau brings the B dependence back.
//
//     cargo run --release --example flat_field

use nvmag::metrology::{TimingBudget, TimingPreset};
use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{sweep_b_fixed_tau, Axis};

pub fn run_example() -> nvmag::Result<()> {
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 3.0);
    let timing = TimingBudget::preset(TimingPreset::C13Cryo);
    let taus = [3.0, 3.2];
    let table = sweep_b_fixed_tau(&p, &timing, &taus, &Axis::log(0.01, 1.0, 100))?;

    for tau in taus {
        let rows: Vec<&Vec<f64>> = table.rows.iter().filter(|r| r[0] == tau).collect();
        let eta: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        let lo = eta.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eta.iter().copied().fold(0.0, f64::max);
        let weak: Vec<f64> = rows.iter().map(|r| r[3]).collect();
        let plo = weak.iter().copied().fold(f64::INFINITY, f64::min);
        let phi = weak.iter().copied().fold(0.0, f64::max);
        println!("tau = {tau} us, B in [0.01, 1] G");
        println!(
            "  eta           {lo:.4} .. {hi:.4} nT/rtHz  (spread {:.1e})",
            (hi - lo) / lo
        );
        println!(
            "  weak-field    {plo:.4} .. {phi:.4} nT/rtHz  (spread {:.1e})",
            (phi - plo) / plo
        );
    }

    println!("\n   B(G)   eta(3.0)  eta(3.2)");
    let n = table.rows.len() / 2;
    for k in (0..n).step_by(11) {
        let (a, b) = (&table.rows[k], &table.rows[n + k]);
        println!("{:7.4} {:9.3} {:9.3}", a[1], a[2], b[2]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
