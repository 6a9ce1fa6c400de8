// Field noise as an Ornstein-Uhlenbeck process: Monte Carlo ensembles
// against the Gaussian average and the Markov (Lindblad) limit.
//
//     cargo run --release --example ou_noise

use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{noise_compare, NoiseComparison, SweepResult};

fn worst_z(t: &SweepResult, model: &str, prefix: &str) -> f64 {
    let m = t.column(model).unwrap_or_default();
    let o = t.column(&format!("{prefix}_ou_mean")).unwrap_or_default();
    let s = t.column(&format!("{prefix}_ou_stderr")).unwrap_or_default();
    (0..m.len())
        .filter(|&k| (m[k] - o[k]).abs() > 1e-12)
        .map(|k| (m[k] - o[k]).abs() / s[k])
        .fold(0.0, f64::max)
}

pub fn run_example() -> nvmag::Result<()> {
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let t2 = 2.0;
    let times: Vec<f64> = (0..24).map(|k| 0.25 + 0.25 * k as f64).collect();

    println!("T2* = {t2} us, 4000 trajectories; worst |model - MC| in standard errors");
    println!("  tau_c(us)  Iz:Gauss  Iz:Markov  coh:Gauss  coh:Markov");
    for tau_c in [0.02, 0.2, 2.0] {
        let spec = NoiseComparison {
            t2_star: t2,
            tau_c,
            dt: None,
            n_traj: 4000,
            seed: 7,
        };
        let t = noise_compare(&p, &spec, &times)?;
        println!(
            "  {tau_c:9.2} {:9.2} {:10.2} {:10.2} {:11.2}",
            worst_z(&t, "iz_gaussian", "iz"),
            worst_z(&t, "iz_markov", "iz"),
            worst_z(&t, "coherence_gaussian", "coherence"),
            worst_z(&t, "coherence_markov", "coherence"),
        );
    }

    let spec = NoiseComparison {
        t2_star: t2,
        tau_c: 0.2,
        dt: None,
        n_traj: 4000,
        seed: 7,
    };
    let t = noise_compare(&p, &spec, &times)?;
    println!("\ntau_c = 0.2 us: electron coherence");
    println!("   t(us)   Markov  1/T2*-rate  Gaussian      OU +- se");
    for r in t.rows.iter().step_by(4) {
        println!(
            "{:7.2} {:8.4} {:10.4} {:9.4} {:9.4} {:.4}",
            r[0], r[6], r[7], r[8], r[9], r[10]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nvmag::Result<()> {
    run_example()
}
