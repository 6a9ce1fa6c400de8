//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, even under `cargo test`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nvmag::dynamics::{
    evolve_protocol, integrate_sampled, monte_carlo_ensemble, ou_sample_stream, DensityMatrix,
    Dephasing, OuParams,
};
use nvmag::metrology::{
    probe_fisher, qfi_pure, ramsey_fisher, sensitivity, Derivative, Scheme, TimingBudget,
    TimingPreset,
};
use nvmag::protocol::{
    post_select, post_select_density, pre_selected_state, probe_state, signal_iz,
    signal_iz_symmetric, success_and_signal, success_and_signal_with_decay, success_probability,
    Basis, PhaseModel, ProtocolParams, QuantumState, Species,
};
use nvmag::spin::matrix::{hermiticity_defect, real_diagonal};
use nvmag::spin::ComplexVector;
use nvmag::sweeps::{sweep_b_fixed_tau, Axis, SensitivitySweep};

// Tolerances, pinned.
const PS_TARGET: f64 = 0.060;
const PS_TOL: f64 = 0.005;
const ETA_TARGET_NT: f64 = 43.5;
const ETA_C_TARGET_NT: f64 = 61.5;
const ETA_REL_TOL: f64 = 0.10;
const EFFICIENCY: f64 = 0.707;
const EFFICIENCY_RATIO_TOL: f64 = 1e-12;
const FLAT_MAX_VARIATION: f64 = 0.01;
const FLAT_TARGET_NT: f64 = 9.7;
const FLAT_REL_TOL: f64 = 0.20;
const OSCILLATION_MIN: f64 = 0.05;
const FISHER_REL_TOL: f64 = 1e-6;
const RATIO_TARGET: f64 = 0.72;
const RATIO_TOL: f64 = 0.08;
const PROJECTION_TOL: f64 = 1e-10;
const SYMMETRIC_TOL: f64 = 1e-12;
const LINDBLAD_TOL: f64 = 1e-8;
const RATE_REL_TOL: f64 = 1e-6;
const DRIFT_TOL: f64 = 1e-8;
const N_SIGMA: f64 = 3.0;
const OU_PATHS: usize = 100_000;
const MC_TRAJ: usize = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn symmetric(species: Species, b: f64, tau: f64) -> ProtocolParams {
    ProtocolParams::symmetric(species, b, tau)
}

fn success_probability_point() -> Outcome {
    let ps = success_probability(&symmetric(Species::C13, 1e-2, 2.2)).map_err(|e| e.to_string())?;
    check((ps - PS_TARGET).abs() <= PS_TOL, format!("P_s = {ps:.5}"))
}

fn sensitivity_point() -> Outcome {
    let p = symmetric(Species::C13, 1e-2, 1.3).with_t2_star(2.0);
    let timing = TimingBudget::preset(TimingPreset::C13Cryo);
    let r = sensitivity(&p, &timing, Scheme::PostSelection, Derivative::Analytic)
        .map_err(|e| e.to_string())?;
    let rc = sensitivity(
        &p,
        &timing.with_efficiency(EFFICIENCY),
        Scheme::PostSelection,
        Derivative::Analytic,
    )
    .map_err(|e| e.to_string())?;
    let eta = r.eta_nt();
    let eta_c = rc.eta_c_nt();
    let ratio_err = (rc.eta_c / rc.eta * EFFICIENCY - 1.0).abs();
    check(
        rel(eta, ETA_TARGET_NT) <= ETA_REL_TOL
            && rel(eta_c, ETA_C_TARGET_NT) <= ETA_REL_TOL
            && ratio_err <= EFFICIENCY_RATIO_TOL,
        format!("eta = {eta:.2} nT/rtHz, eta_C = {eta_c:.2} nT/rtHz, |C eta_C/eta - 1| = {ratio_err:.1e}"),
    )
}

fn flat_field_sweep() -> Outcome {
    let p = symmetric(Species::C13, 1e-2, 3.0);
    let timing = TimingBudget::preset(TimingPreset::C13Cryo);
    let axis = Axis::log(1e-2, 1.0, 200);
    let t = sweep_b_fixed_tau(&p, &timing, &[3.0, 3.2], &axis).map_err(|e| e.to_string())?;
    let (taus, etas) = (t.column("tau_us").unwrap(), t.column("eta_nt").unwrap());
    let spread = |tau: f64| {
        let v: Vec<f64> = taus
            .iter()
            .zip(&etas)
            .filter(|(t, _)| **t == tau)
            .map(|(_, e)| *e)
            .collect();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        (lo, hi, mean, v.iter().all(|x| x.is_finite()))
    };
    let (lo, hi, mean, finite) = spread(3.0);
    let variation = (hi - lo) / mean;
    let (lo2, hi2, _, _) = spread(3.2);
    let swing = (hi2 - lo2) / lo2;
    check(
        finite
            && variation < FLAT_MAX_VARIATION
            && rel(mean, FLAT_TARGET_NT) <= FLAT_REL_TOL
            && swing > OSCILLATION_MIN,
        format!(
            "tau = 3.0: eta = {mean:.3} nT/rtHz, variation {variation:.1e}; tau = 3.2: peak-to-trough {:.1}%",
            100.0 * swing
        ),
    )
}

fn ramsey_state(b: f64, tau: f64, gamma_e: f64) -> nvmag::Result<QuantumState> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = ComplexVector::from_vec(vec![
        Complex64::new(s, 0.0),
        Complex64::from_polar(s, gamma_e * b * tau),
    ]);
    QuantumState::new(v, Basis::Electron)
}

fn fisher_identities() -> Outcome {
    let base = symmetric(Species::C13, 1e-2, 1.0);
    let ge = base.consts.gamma_e;
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for k in 1..=100 {
        let tau = 5.0 * k as f64 / 100.0;
        let p = base.with_tau(tau);
        let want = (ge * tau).powi(2);
        let f_r = ramsey_fisher(&p).map_err(|e| e.to_string())?;
        let h = 1e-6 / (ge * tau);
        let f_q =
            qfi_pure(|b| ramsey_state(b, tau, ge), p.b_field, h).map_err(|e| e.to_string())?;
        let f_probe = probe_fisher(&p).map_err(|e| e.to_string())?;
        worst.0 = worst.0.max(rel(f_r, want));
        worst.1 = worst.1.max(rel(f_q, want));
        worst.2 = worst.2.max(rel(f_probe, f_r));
    }
    check(
        worst.0 <= FISHER_REL_TOL && worst.1 <= FISHER_REL_TOL && worst.2 <= FISHER_REL_TOL,
        format!(
            "max rel. error: F_Ramsey {:.1e}, F_Q(Ramsey) {:.1e}, F_Q(probe) vs F_Ramsey {:.1e}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn crossover() -> Outcome {
    let spec = SensitivitySweep::new(symmetric(Species::N15, 1e-2, 1.0));
    let ratio = |t2: f64| {
        let (_, post) = spec.optimum(Species::N15, Scheme::PostSelection, t2, 1e-2);
        let (_, ram) = spec.optimum(Species::N15, Scheme::Ramsey, t2, 1e-2);
        post / ram
    };
    let (r2, r10) = (ratio(2.0), ratio(10.0));
    check(
        (r2 - RATIO_TARGET).abs() <= RATIO_TOL && r10 > 1.0,
        format!("eta_post/eta_Ramsey = {r2:.3} at T2* = 2 us, {r10:.3} at T2* = 10 us"),
    )
}

fn random_tuple(rng: &mut ChaCha8Rng, b_max: f64) -> ProtocolParams {
    let species = if rng.random_bool(0.5) {
        Species::C13
    } else {
        Species::N15
    };
    symmetric(
        species,
        rng.random_range(-b_max..=b_max),
        rng.random_range(0.0..=5.0),
    )
    .with_angles(
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..=PI),
    )
}

/// Largest (P_s, <I_z>) disagreement between closed forms evaluated with
/// `model` and the explicit projection with exact phases, over `n` tuples
/// whose P_s clears 1e-3.
fn projection_gap(
    model: PhaseModel,
    b_max: f64,
    tau_max: f64,
    n: usize,
    seed: u64,
) -> nvmag::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut done, mut worst) = (0, 0.0f64);
    while done < n {
        let p = random_tuple(&mut rng, b_max);
        let p = p.with_tau(p.tau * tau_max / 5.0);
        let proj = post_select(&probe_state(&p)?, p.theta_f)?;
        if proj.success_probability < 1e-3 {
            continue;
        }
        let q = p.with_phase_model(model);
        let ps = success_probability(&q)?;
        let iz = signal_iz(&q)?;
        worst = worst
            .max((ps - proj.success_probability).abs())
            .max((iz - proj.iz()).abs());
        done += 1;
    }
    Ok(worst)
}

fn equivalence_suite() -> Outcome {
    let e = |x: nvmag::Error| x.to_string();
    let exact = projection_gap(PhaseModel::Exact, 1.0, 5.0, 1000, 11).map_err(e)?;
    // gamma_c B tau <= 1e-11: the only regime where the weak-field forms are within 1e-10
    let weak = projection_gap(PhaseModel::WeakField, 1e-9, 1.0, 1000, 12).map_err(e)?;

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut sym = 0.0f64;
    let mut n = 0;
    while n < 1000 {
        let species = if rng.random_bool(0.5) {
            Species::C13
        } else {
            Species::N15
        };
        let p = symmetric(
            species,
            rng.random_range(-1.0..=1.0),
            rng.random_range(0.0..=5.0),
        );
        let Ok((ps, iz8)) = success_and_signal(&p) else {
            continue;
        };
        if ps < 1e-3 {
            continue;
        }
        let iz10 = signal_iz_symmetric(p.tau, p.b_field, &p).map_err(e)?;
        sym = sym.max((iz10 - iz8).abs());
        n += 1;
    }

    let mut lind = 0.0f64;
    for &(tau, b) in &[
        (0.5, 1e-2),
        (1.3, 1e-2),
        (2.2, 1e-2),
        (3.0, 0.3),
        (4.0, -0.05),
    ] {
        let p = symmetric(Species::C13, b, tau).with_t2_star(2.0);
        let rho = evolve_protocol(&p, &Dephasing::from_t2_star(2.0), Some(1e-3)).map_err(e)?;
        let (meter, ps) = post_select_density(&rho, p.theta_f).map_err(e)?;
        let iz = meter.expectation(&real_diagonal(&[0.5, -0.5])).map_err(e)?;
        let (ps_cf, iz_cf) = success_and_signal(&p).map_err(e)?;
        lind = lind.max((ps - ps_cf).abs()).max((iz - iz_cf).abs());
    }
    check(
        exact <= PROJECTION_TOL
            && weak <= PROJECTION_TOL
            && sym <= SYMMETRIC_TOL
            && lind <= LINDBLAD_TOL,
        format!(
            "projection gap {exact:.1e} (exact phases), {weak:.1e} (weak-field phases); \
             symmetric vs general {sym:.1e}; Lindblad vs damped closed form {lind:.1e}"
        ),
    )
}

fn density_drift(rho: &DensityMatrix) -> nvmag::Result<f64> {
    let trace = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    let herm = hermiticity_defect(rho.matrix());
    let neg = (-rho.min_eigenvalue()?).max(0.0);
    Ok(trace.max(herm).max(neg))
}

fn open_system() -> Outcome {
    let e = |x: nvmag::Error| x.to_string();
    let t2 = 2.0;
    let d = Dephasing::from_t2_star(t2);
    let times: Vec<f64> = (1..=60).map(|k| 0.1 * k as f64).collect();

    // two-level electron under a detuning
    let plus = nalgebra::DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
    let rho0 = DensityMatrix::new(plus).map_err(e)?;
    let h = real_diagonal(&[0.0, -0.7]);
    let states = integrate_sampled(&rho0, &h, &d, &times, 1e-3).map_err(e)?;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    let mut drift = 0.0f64;
    for (t, rho) in times.iter().zip(&states) {
        let y = (2.0 * rho.matrix()[(0, 1)].norm()).ln();
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        drift = drift.max(density_drift(rho).map_err(e)?);
    }
    let n = times.len() as f64;
    let rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    let rate_err = rel(rate, 1.0 / t2);

    // the full protocol state under the same channel
    let p = symmetric(Species::C13, 1e-2, 1.0);
    let rho0 = pre_selected_state(p.alpha, p.theta_i).density();
    let h4 = nvmag::dynamics::free_hamiltonian(&p);
    for rho in integrate_sampled(&rho0, &h4, &d, &times, 1e-3).map_err(e)? {
        drift = drift.max(density_drift(&rho).map_err(e)?);
    }
    check(
        rate_err <= RATE_REL_TOL && drift < DRIFT_TOL,
        format!("fitted coherence rate {rate:.9} vs 1/T2* = {:.9} (rel. {rate_err:.1e}); max drift {drift:.1e}", 1.0 / t2),
    )
}

/// Largest |a - b| / se over a series. Points where both sides agree to
/// rounding count as zero; the signal vanishes identically at
/// A_zz t / 2 = k pi, where the standard error is rounding noise too.
fn worst_sigma(a: &[f64], b: &[f64], se: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(se)
        .map(|((x, y), s)| {
            if (x - y).abs() <= 1e-12 {
                0.0
            } else {
                (x - y).abs() / s
            }
        })
        .fold(0.0, f64::max)
}

fn stochastic_suite() -> Outcome {
    let e = |x: nvmag::Error| x.to_string();
    let p = symmetric(Species::C13, 1e-2, 1.0);
    let ge = p.consts.gamma_e;

    // stationary statistics from independent paths
    let ou = OuParams::from_t2star(2.0, 0.5, ge, None, 7).map_err(e)?;
    let lags = [0usize, 5, 10, 20, 40];
    let n_steps = *lags.last().unwrap();
    let var = ou.stationary_variance();
    let mut sums = vec![(0.0, 0.0); lags.len()];
    for s in 0..OU_PATHS as u64 {
        let path = ou_sample_stream(&ou, n_steps, s).map_err(e)?;
        let x0 = path.values[0];
        for (acc, &l) in sums.iter_mut().zip(&lags) {
            let v = x0 * path.values[l];
            acc.0 += v;
            acc.1 += v * v;
        }
    }
    let np = OU_PATHS as f64;
    let mut ou_sigma = 0.0f64;
    for (&(m1, m2), &l) in sums.iter().zip(&lags) {
        let mean = m1 / np;
        let se = ((m2 / np - mean * mean) / (np - 1.0)).sqrt();
        let want = var * (-(l as f64) * ou.dt / ou.tau_c).exp();
        ou_sigma = ou_sigma.max((mean - want).abs() / se);
    }

    // ensemble coherence against the Gaussian formula, both regimes
    let regime = |t2: f64, tau_c: f64, t_max: f64, seed: u64| -> nvmag::Result<f64> {
        let ou = OuParams::from_t2star(t2, tau_c, ge, None, seed)?;
        let times: Vec<f64> = (1..=20).map(|k| t_max * k as f64 / 20.0).collect();
        let mc = monte_carlo_ensemble(&p, &ou, MC_TRAJ, &times)?;
        let g: Vec<f64> = times
            .iter()
            .map(|&t| ou.gaussian_coherence(ge, t))
            .collect();
        Ok(worst_sigma(&mc.coherence.mean, &g, &mc.coherence.std_err))
    };
    let markov_gauss = regime(2.0, 0.2, 20.0, 21).map_err(e)?;
    let slow_gauss = regime(20.0, 16.0, 40.0, 22).map_err(e)?;

    // Markov regime against the C4 Lindblad curve: coherence and post-selected
    // <I_z>. The Gaussian exponent sits 2 (tau_c / T2*)^2 below the Markov one
    // after the first few tau_c, which 1e4 trajectories resolve unless
    // tau_c << t; tau_c = T2*/100 keeps it under one standard error.
    let (t2, tau_c) = (1.0, 0.01);
    let ou = OuParams::from_t2star(t2, tau_c, ge, None, 23).map_err(e)?;
    let lindblad = ou.markov_limit(ge);
    let times: Vec<f64> = (1..=40).map(|k| 1.0 * k as f64).collect();
    let mc = monte_carlo_ensemble(&p, &ou, MC_TRAJ, &times).map_err(e)?;
    let coh: Vec<f64> = times
        .iter()
        .map(|&t| (-lindblad.coherence_rate() * t).exp())
        .collect();
    let mut iz_ref = Vec::new();
    let mut iz_mc = Vec::new();
    let mut iz_se = Vec::new();
    for (k, (&t, &c)) in times.iter().zip(&coh).enumerate() {
        if let Ok((_, iz)) = success_and_signal_with_decay(&p.with_tau(t), c) {
            iz_ref.push(iz);
            iz_mc.push(mc.iz.mean[k]);
            iz_se.push(mc.iz.std_err[k]);
        }
    }
    let c4 = worst_sigma(&mc.coherence.mean, &coh, &mc.coherence.std_err)
        .max(worst_sigma(&iz_mc, &iz_ref, &iz_se));

    check(
        ou_sigma <= N_SIGMA && markov_gauss <= N_SIGMA && slow_gauss <= N_SIGMA && c4 <= N_SIGMA,
        format!(
            "worst deviations in standard errors: OU moments {ou_sigma:.2}, Gaussian (tau_c = T2*/10) {markov_gauss:.2}, \
             Gaussian (tau_c = 0.8 T2*) {slow_gauss:.2}, Lindblad C4 (tau_c = T2*/100) {c4:.2}"
        ),
    )
}

const CLI_CASES: [(&str, &str); 6] = [
    ("signal", "[protocol]\ntau_points = 200\n"),
    ("sensitivity", "[physics]\nspecies = \"n15\"\n[sweep]\nt2_points = 8\n"),
    (
        "noise-compare",
        "[physics]\nt2_star_us = 2.0\n[protocol]\ntau_min_us = 0.0\ntau_max_us = 4.0\ntau_points = 21\n\
         [noise]\nmodel = \"ou\"\ntau_c_us = 0.2\nn_traj = 512\n",
    ),
    ("fisher", "[physics]\nt2_star_us = 2.0\n[protocol]\ntau_points = 100\n"),
    ("ratio-map", "[physics]\nspecies = \"n15\"\n[sweep]\nt2_points = 5\nb_points = 4\n"),
    ("sweep-b", "[sweep]\nb_points = 50\n"),
];

fn run_cli(
    dir: &Path,
    cmd: &str,
    config: &Path,
    threads: &str,
    tag: &str,
) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("{cmd}-{tag}.csv"));
    let args = [
        "nvmag",
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "42",
        "--threads",
        threads,
    ];
    let code = nvmag::cli::run_from(args);
    if code != 0 {
        return Err(format!("{cmd} exited with {code}"));
    }
    std::fs::read(&out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut mismatches = Vec::new();
    for (cmd, cfg) in CLI_CASES {
        let config = dir.path().join(format!("{cmd}.toml"));
        std::fs::write(&config, cfg).map_err(|e| e.to_string())?;
        let a = run_cli(dir.path(), cmd, &config, "1", "a")?;
        let b = run_cli(dir.path(), cmd, &config, "3", "b")?;
        let c = run_cli(dir.path(), cmd, &config, "1", "c")?;
        if a != b || a != c {
            mismatches.push(cmd);
        }
    }
    // the shipped binary against the in-process run
    let config = dir.path().join("noise-compare.toml");
    let out = dir.path().join("bin.csv");
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_nvmag"))
        .args([
            "noise-compare",
            "--seed",
            "42",
            "--threads",
            "2",
            "--config",
        ])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .map_err(|e| e.to_string())?;
    let reference =
        std::fs::read(dir.path().join("noise-compare-a.csv")).map_err(|e| e.to_string())?;
    let bin_same = status.success() && std::fs::read(&out).map_err(|e| e.to_string())? == reference;
    if !bin_same {
        mismatches.push("binary");
    }
    check(
        mismatches.is_empty(),
        format!(
            "{} commands x threads 1/3/1 byte-identical; mismatches: {mismatches:?}",
            CLI_CASES.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "success probability at tau = 2.2 us",
            success_probability_point,
        ),
        ("sensitivity point values", sensitivity_point),
        ("flat-field sweep", flat_field_sweep),
        ("Fisher identities", fisher_identities),
        ("post-selection / Ramsey crossover", crossover),
        ("closed-form / numeric equivalence", equivalence_suite),
        ("open-system checks", open_system),
        ("stochastic suite", stochastic_suite),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("acceptance {} [{tag}] {name}: {detail}", k + 1);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
