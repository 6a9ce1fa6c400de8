// Post-selected meter signal against interrogation time for both meters,
// next to the electron Ramsey fringe.
//
//     cargo run --release --example signal_traces

use nvmag::protocol::{signal_iz, success_probability, PhaseModel, ProtocolParams, Species};
use nvmag::sweeps::{signal_vs_time, Axis};

pub fn run_example() -> nvmag::Result<()> {
    let taus = Axis::linear(0.01, 5.0, 500).values()?;
    for species in [Species::C13, Species::N15] {
        let p = ProtocolParams::symmetric(species, 0.01, 1.0);
        let table = signal_vs_time(&p, &taus)?;
        let iz = table.column("iz_postselected").unwrap_or_default();
        let ps = table.column("success_probability").unwrap_or_default();

        let (k, peak) = iz.iter().enumerate().filter(|(_, v)| v.is_finite()).fold(
            (0, 0.0f64),
            |(bk, bv), (k, v)| {
                if v.abs() > bv.abs() {
                    (k, *v)
                } else {
                    (bk, bv)
                }
            },
        );
        println!(
            "{:>4}: |<I_z>| peaks at {:.4} (tau = {:.3} us, P_s = {:.2e})",
            species.name(),
            peak,
            taus[k],
            ps[k]
        );
    }

    println!("\n  tau_us   <I_z>_post      P_s   Ramsey <S_z>");
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let coarse = signal_vs_time(&p, &Axis::linear(0.25, 5.0, 20).values()?)?;
    for row in &coarse.rows {
        println!(
            "{:8.3} {:11.5} {:8.4} {:10.5}",
            row[0], row[1], row[2], row[5]
        );
    }

    // the weak-field phases drop the nuclear Zeeman term
    let q = p.with_tau(2.0);
    let exact = signal_iz(&q)?;
    let weak = signal_iz(&q.with_phase_model(PhaseModel::WeakField))?;
    println!(
        "\nat tau = 2 us: exact {exact:.9}, weak-field {weak:.9}, P_s = {:.4}",
        success_probability(&q)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
