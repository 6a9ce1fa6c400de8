// Optimised sensitivity against T2* for Ramsey and both meters, and where
// Ramsey takes over.
//
//     cargo run --release --example t2_crossover

use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{sweep_t2star, Axis, SensitivitySweep};

pub fn run_example() -> nvmag::Result<()> {
    let spec = SensitivitySweep::new(ProtocolParams::symmetric(Species::C13, 0.01, 1.0));
    let table = sweep_t2star(&spec, &Axis::log(0.5, 20.0, 16))?;

    println!("T2*(us)  Ramsey   tau     C13     tau     N15     tau   [nT/rtHz, us]");
    for r in &table.rows {
        println!(
            "{:6.2} {:8.2} {:6.2} {:8.2} {:6.2} {:8.2} {:6.2}",
            r[0], r[1], r[2], r[3], r[4], r[5], r[6]
        );
    }

    let t2 = table.column("t2_star_us").unwrap_or_default();
    let ramsey = table.column("eta_ramsey_nt").unwrap_or_default();
    for (name, col) in [("C13", "eta_c13_nt"), ("N15", "eta_n15_nt")] {
        let eta = table.column(col).unwrap_or_default();
        let cross = (1..t2.len()).find(|&k| eta[k - 1] < ramsey[k - 1] && eta[k] >= ramsey[k]);
        match cross {
            Some(k) => println!(
                "{name}: Ramsey wins beyond T2* ~ {:.2}..{:.2} us",
                t2[k - 1],
                t2[k]
            ),
            None => println!("{name}: no crossover on this grid"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
