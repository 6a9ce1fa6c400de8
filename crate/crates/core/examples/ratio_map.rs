// eta_post / eta_Ramsey over a (T2*, B) grid for the N15 meter; every cell
// optimises its own interrogation time.
//
//     cargo run --release --example ratio_map

use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{ratio_map, Axis, SensitivitySweep};

pub fn run_example() -> nvmag::Result<()> {
    let spec = SensitivitySweep::new(ProtocolParams::symmetric(Species::N15, 0.01, 1.0));
    let t2_axis = Axis::log(1.0, 20.0, 7);
    let b_axis = Axis::log(1e-3, 0.1, 5);
    let table = ratio_map(&spec, &t2_axis, &b_axis)?;
    let ratio = table.column("ratio").unwrap_or_default();
    let bs = b_axis.values()?;

    print!("T2*(us) \\ B(G)");
    for b in &bs {
        print!("{b:>9.0e}");
    }
    println!();
    for (i, t2) in t2_axis.values()?.iter().enumerate() {
        print!("{t2:>14.2}");
        for j in 0..bs.len() {
            let r = ratio[i * bs.len() + j];
            let mark = if r < 1.0 { '*' } else { ' ' };
            print!("{r:>8.3}{mark}");
        }
        println!();
    }
    println!("* post-selection beats Ramsey");
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
