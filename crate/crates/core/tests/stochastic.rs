//! Ornstein-Uhlenbeck ensembles against the Gaussian average and the
//! Markov (Lindblad) limit.

use nvmag::dynamics::{monte_carlo_ensemble, OuParams, MIN_TRAJECTORIES};
use nvmag::protocol::{ProtocolParams, Species};
use nvmag::sweeps::{noise_compare, NoiseComparison, SweepResult};

const N_SIGMA: f64 = 3.0;

fn compare(t2_star: f64, tau_c: f64, n_traj: usize, times: &[f64]) -> SweepResult {
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let spec = NoiseComparison {
        t2_star,
        tau_c,
        dt: None,
        n_traj,
        seed: 2024,
    };
    noise_compare(&p, &spec, times).unwrap()
}

/// |model - mc| / stderr, with rounding-level differences counted as zero.
fn z_scores(t: &SweepResult, model: &str, mean: &str, err: &str) -> Vec<f64> {
    let (m, o, s) = (
        t.column(model).unwrap(),
        t.column(mean).unwrap(),
        t.column(err).unwrap(),
    );
    m.iter()
        .zip(&o)
        .zip(&s)
        .map(|((a, b), s)| {
            if (a - b).abs() <= 1e-12 {
                0.0
            } else {
                (a - b).abs() / s
            }
        })
        .collect()
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn times(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn ou_matches_the_gaussian_average() {
    let t = compare(2.0, 0.2, 10_000, &times(0.1, 6.0, 25));
    for (model, mean, err) in [
        ("iz_gaussian", "iz_ou_mean", "iz_ou_stderr"),
        (
            "coherence_gaussian",
            "coherence_ou_mean",
            "coherence_ou_stderr",
        ),
    ] {
        let z = max(&z_scores(&t, model, mean, err));
        assert!(z < N_SIGMA, "{model}: {z}");
    }
}

#[test]
fn markov_gap_at_moderate_correlation_time_is_the_analytic_one() {
    // tau_c = T2*/10: the Markov curve is off by the tau_c^2 correction and
    // nothing else
    let t = compare(2.0, 0.2, 10_000, &times(0.1, 6.0, 25));
    let m = t.column("iz_markov").unwrap();
    let g = t.column("iz_gaussian").unwrap();
    let o = t.column("iz_ou_mean").unwrap();
    let s = t.column("iz_ou_stderr").unwrap();
    for k in 0..m.len() {
        let bound = N_SIGMA * s[k] + (m[k] - g[k]).abs() + 1e-12;
        assert!(
            (m[k] - o[k]).abs() <= bound,
            "t = {}: {} vs {}",
            t.rows[k][0],
            m[k],
            o[k]
        );
    }
}

#[test]
fn short_correlation_time_reaches_the_markov_limit() {
    let t = compare(1.0, 0.01, 10_000, &times(1.0, 4.0, 16));
    for (model, mean, err) in [
        ("iz_markov", "iz_ou_mean", "iz_ou_stderr"),
        (
            "coherence_markov",
            "coherence_ou_mean",
            "coherence_ou_stderr",
        ),
    ] {
        let z = max(&z_scores(&t, model, mean, err));
        assert!(z < N_SIGMA, "{model}: {z}");
    }
}

#[test]
fn long_correlation_time_departs_from_markov() {
    let t = compare(20.0, 16.0, 2_000, &times(0.5, 59.5, 60));
    let z = max(&z_scores(&t, "iz_markov", "iz_ou_mean", "iz_ou_stderr"));
    assert!(z > 5.0, "{z}");
    let zc = max(&z_scores(
        &t,
        "coherence_markov",
        "coherence_ou_mean",
        "coherence_ou_stderr",
    ));
    assert!(zc > 5.0, "{zc}");
}

#[test]
fn ensembles_are_reproducible() {
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let ge = p.consts.gamma_e;
    let ts = times(0.5, 3.0, 6);
    let ou = OuParams::from_t2star(2.0, 0.2, ge, None, 77).unwrap();
    let a = monte_carlo_ensemble(&p, &ou, 1_000, &ts).unwrap();
    let b = monte_carlo_ensemble(&p, &ou, 1_000, &ts).unwrap();
    assert_eq!(a.iz.mean, b.iz.mean);
    assert_eq!(a.coherence.std_err, b.coherence.std_err);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let c = pool.install(|| monte_carlo_ensemble(&p, &ou, 1_000, &ts).unwrap());
    assert_eq!(a.iz.mean, c.iz.mean);

    let other = OuParams { seed: 78, ..ou };
    let d = monte_carlo_ensemble(&p, &other, 1_000, &ts).unwrap();
    assert_ne!(a.iz.mean, d.iz.mean);
}

#[test]
fn too_few_trajectories_is_rejected() {
    let p = ProtocolParams::symmetric(Species::C13, 0.01, 1.0);
    let ou = OuParams::from_t2star(2.0, 0.2, p.consts.gamma_e, None, 0).unwrap();
    assert!(monte_carlo_ensemble(&p, &ou, MIN_TRAJECTORIES - 1, &[1.0]).is_err());
}
