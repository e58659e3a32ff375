//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use su2phase::interferometer::{s_function_overlap, PreparedInput};
use su2phase::qpsi::{lms_estimate_frequencies, SweepSpec};
use su2phase::{
    benchmark_sweep, interferometer_amplitude_convolution, interferometer_amplitude_direct, interferometer_probs,
    single_port_closed_form, spin_up_x_state, verify_c_wigner_identity, wigner_d, x_polarized_number_state,
    AngularSector, ExperimentConfig, Flavor, HalfInt, TwoModeState,
};
use su2phase_cli::{angle_dist, interferometer_sweep, ColumnData, FigureDataset, StateSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| -PI + TAU * k as f64 / (points - 1) as f64).collect()
}

fn parity_law() -> Outcome {
    let mut worst_odd = 0.0f64;
    for n in (1..=63).step_by(2) {
        let s = x_polarized_number_state(n).map_err(err)?;
        for phi in [FRAC_PI_2, -FRAC_PI_2] {
            worst_odd = worst_odd.max(s.angle_distribution(phi).map_err(err)?);
        }
    }
    ensure(worst_odd <= 1e-20, || format!("odd N: max P(±π/2) = {worst_odd:e}"))?;
    let mut least_even = f64::INFINITY;
    for n in (2..=64).step_by(2) {
        let s = x_polarized_number_state(n).map_err(err)?;
        for phi in [FRAC_PI_2, -FRAC_PI_2] {
            least_even = least_even.min(s.angle_distribution(phi).map_err(err)?);
        }
    }
    ensure(least_even > 0.0, || "even N: P(±π/2) not positive".into())?;
    let two = x_polarized_number_state(2).map_err(err)?.angle_distribution(FRAC_PI_2).map_err(err)?;
    let want = (1.0 - FRAC_1_SQRT_2).powi(2) / TAU;
    ensure((two - want).abs() <= 1e-12, || format!("N=2: {two:e} vs {want:e}"))?;
    Ok(format!("odd max {worst_odd:.1e}, even min {least_even:.2e}"))
}

fn ladder_identity() -> Outcome {
    let mut worst = 0.0f64;
    for jp in 1..=40 {
        worst = worst.max(verify_c_wigner_identity(jp).map_err(err)?);
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn exponential_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let betas: Vec<f64> = (0..20).map(|_| rng.random_range(-PI..PI)).collect();
    let mut worst = 0.0f64;
    for twice in 0..=20 {
        for &beta in &betas {
            let d = wigner_d(h(twice), beta).map_err(err)?;
            worst = worst.max(oracle::max_dev(d.matrix(), &oracle::expm_rotation(twice, beta)));
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn scaling_relation() -> Outcome {
    let spin = spin_up_x_state(h(2)).map_err(err)?;
    let phot = x_polarized_number_state(2).map_err(err)?;
    let mut worst = 0.0f64;
    for phi in grid(721) {
        let d = spin.angle_distribution(phi).map_err(err)? - phot.angle_distribution(phi / 2.0).map_err(err)?;
        worst = worst.max(d.abs());
    }
    for n in 1..=64u32 {
        let phot = x_polarized_number_state(n).map_err(err)?;
        let spin = spin_up_x_state(h(n as i32)).map_err(err)?;
        for phi in grid(721) {
            let d = phot.angle_distribution(phi).map_err(err)? - spin.angle_distribution(2.0 * phi).map_err(err)?;
            worst = worst.max(d.abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn s_orthogonality() -> Outcome {
    let mut worst = 0.0f64;
    for twice in 0..=16 {
        let j = h(twice);
        for m in j.ladder() {
            for n in j.ladder() {
                let z = s_function_overlap(j, m, n).map_err(err)?;
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((z - target).norm());
            }
        }
    }
    ensure(worst <= 1e-11, || format!("max |ζ-δ| {worst:e}"))?;
    Ok(format!("max |ζ-δ| {worst:.1e}"))
}

fn endpoints() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=16u32 {
        let j = h(n as i32);
        let state = TwoModeState::single_port(n);
        let at0 = interferometer_probs(&state, 0.0).map_err(err)?.prob(j);
        let atpi = interferometer_probs(&state, PI).map_err(err)?.prob(j);
        worst = worst.max((at0 - 1.0).abs()).max(atpi);
    }
    ensure(worst <= 1e-12, || format!("endpoint deviation {worst:e}"))?;
    for twice in (2..=16).step_by(2) {
        let p = spin_up_x_state(h(twice)).map_err(err)?.angle_distribution(PI).map_err(err)?;
        ensure(p > 0.0, || format!("2j={twice}: P(π) = {p:e}"))?;
    }
    Ok(format!("endpoint deviation {worst:.1e}; integer-j P(π) > 0"))
}

fn random_sector(rng: &mut StdRng) -> AngularSector {
    let twice = rng.random_range(0..=16);
    let raw: Vec<Complex64> =
        (0..=twice).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    AngularSector::new(h(twice), raw.iter().map(|a| a / norm).collect(), Flavor::Spin).unwrap()
}

fn route_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let sector = random_sector(&mut rng);
        for _ in 0..50 {
            let phi = rng.random_range(-PI..PI);
            for m in sector.j().ladder() {
                let a = interferometer_amplitude_direct(&sector, m, phi).map_err(err)?;
                let b = interferometer_amplitude_convolution(&sector, m, phi).map_err(err)?;
                worst = worst.max((a - b).norm());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn closed_forms() -> Outcome {
    let phis: Vec<f64> = (0..101).map(|k| PI * k as f64 / 100.0).collect();
    let mut worst = 0.0f64;
    for twice in 1..=16 {
        let j = h(twice);
        let psi = spin_up_x_state(j).map_err(err)?;
        for &phi in &phis {
            let (s, c) = (phi / 2.0).sin_cos();
            let prob = |m: HalfInt| interferometer_amplitude_direct(&psi, m, phi).map(|a| a.norm_sqr()).map_err(err);
            worst = worst.max((prob(j)? - c.powi(2 * twice)).abs());
            let next = f64::from(twice) * c.powi(2 * twice - 2) * s * s;
            worst = worst.max((prob(j - h(2))? - next).abs());
            for m in j.ladder() {
                let k = ((j + m).twice() / 2) as u64;
                let binom = oracle::binomial_term(twice as u64, k, c, 2 * k as i32, s, 2 * (twice - k as i32));
                worst = worst.max((prob(m)? - binom).abs());
                worst = worst.max((single_port_closed_form(j, m, phi).map_err(err)? - binom).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn flags(d: &FigureDataset, name: &str) -> Result<Vec<bool>, String> {
    match d.column(name).map(|c| &c.data) {
        Some(ColumnData::Flag(v)) => Ok(v.clone()),
        _ => Err(format!("missing flag column {name}")),
    }
}

fn real<'a>(d: &'a FigureDataset, name: &str) -> Result<&'a [f64], String> {
    d.real(name).ok_or_else(|| format!("missing column {name}"))
}

fn figures() -> Outcome {
    for (n, curves) in [(4u32, 5usize), (8, 9)] {
        let d = interferometer_sweep(&StateSpec::SinglePort(n), 721, "acceptance").map_err(err)?;
        let count = d.header().iter().filter(|c| c.starts_with("P[")).count();
        ensure(count == curves, || format!("N={n}: {count} curves"))?;
        let worst = real(&d, "sum")?.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        ensure(worst <= 1e-12, || format!("N={n}: Σ deviation {worst:e}"))?;
    }

    // Polar figures: peak at φ=0, more than one 20 dB ring of dynamic range,
    // and exact zeros where the parity law puts them.
    let specs: Vec<StateSpec> = ["xnum:1", "xnum:2", "xnum:3", "spinupx:1", "spinupx:2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let d = angle_dist(&specs, 721, "acceptance").map_err(err)?;
    let phi = real(&d, "phi")?;
    let at = |target: f64| phi.iter().position(|&p| p == target).unwrap();
    for spec in &specs {
        let db = real(&d, &format!("dB[{spec}]"))?;
        let peak = db.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ensure(db[at(0.0)] == peak, || format!("{spec}: peak away from φ=0"))?;
        let low = db.iter().cloned().fold(f64::INFINITY, f64::min);
        ensure(peak - low > 20.0, || format!("{spec}: dynamic range {:.1} dB", peak - low))?;
    }
    for spec in ["xnum:1", "xnum:3"] {
        let zero = flags(&d, &format!("exact_zero[{spec}]"))?;
        ensure(zero[at(FRAC_PI_2)] && zero[at(-FRAC_PI_2)], || format!("{spec}: ±π/2 not flagged"))?;
    }
    let zero = flags(&d, "exact_zero[spinupx:1]")?;
    ensure(zero[at(PI)] && zero[at(-PI)], || "spinupx:1: ±π not flagged".into())?;
    let zero = flags(&d, "exact_zero[spinupx:2]")?;
    ensure(!zero[at(PI)], || "spinupx:2: π flagged".into())?;
    let p0 = real(&d, "P[xnum:2]")?[at(0.0)];
    let want = (FRAC_1_SQRT_2 + 1.0).powi(2) / TAU;
    ensure((p0 - want).abs() <= 1e-12, || format!("xnum:2 at 0: {p0:e}"))?;
    Ok("5 and 9 curves, Σ=1; polar lobes and zeros in place".into())
}

fn sweep_rmse(states: &[u32], phi: f64, shots: &[u64], seeds: u64) -> Result<Vec<f64>, String> {
    let labelled = states.iter().map(|&n| (format!("N={n}"), TwoModeState::single_port(n))).collect();
    let rows = benchmark_sweep(&SweepSpec::new(labelled, vec![phi], shots.to_vec(), seeds)).map_err(err)?;
    rows.iter().map(|r| r.rmse.ok_or_else(|| format!("no RMSE for {}", r.state))).collect()
}

fn qpsi() -> Outcome {
    let state = TwoModeState::single_port(8);
    for phi0 in [0.3, 1.0, 2.5] {
        let dist = interferometer_probs(&state, phi0).map_err(err)?;
        let cfg = ExperimentConfig::new(state.clone(), phi0, 1, 0);
        let report = lms_estimate_frequencies(&dist.probs, 1, &state, &cfg).map_err(err)?;
        ensure((report.phi_hat - phi0).abs() <= 1e-9, || format!("noiseless {phi0}: {}", report.phi_hat))?;
    }

    let rmse = sweep_rmse(&[8], 1.1, &[10_000, 40_000], 200)?;
    let ratio = rmse[0] / rmse[1];
    ensure((1.6..=2.5).contains(&ratio), || format!("shot scaling ratio {ratio:.3}"))?;

    let by_n = sweep_rmse(&[4, 8], 1.0, &[10_000], 200)?;
    ensure(by_n[1] < by_n[0], || format!("RMSE N=8 {:.2e} vs N=4 {:.2e}", by_n[1], by_n[0]))?;

    let prepared = PreparedInput::new(&state).map_err(err)?;
    let step = 1e-5;
    let mut worst = 0.0f64;
    for k in 1..=31 {
        let phi = PI * k as f64 / 32.0;
        let (p, slope) = prepared.probabilities_with_slopes(phi);
        let (up, down) = (prepared.probabilities(phi + step), prepared.probabilities(phi - step));
        let fd: Vec<f64> = up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * step)).collect();
        let fd_fisher: f64 = fd.iter().zip(&p).map(|(d, p)| d * d / p).sum();
        let analytic_fisher: f64 = slope.iter().zip(&p).map(|(d, p)| d * d / p).sum();
        let reported = prepared.fisher_information(phi).map_err(err)?.value;
        worst = worst
            .max((analytic_fisher - fd_fisher).abs() / fd_fisher)
            .max((reported - fd_fisher).abs() / fd_fisher);
    }
    ensure(worst <= 1e-6, || format!("Fisher relative deviation {worst:e}"))?;
    Ok(format!(
        "RMSE ratio {ratio:.3}; N=8 {:.2e} < N=4 {:.2e}; Fisher rel dev {worst:.1e}",
        by_n[1], by_n[0]
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("parity law", parity_law, Duration::from_secs(1)),
        ("ladder/d-matrix identity", ladder_identity, Duration::from_secs(5)),
        ("d-matrix vs exponential oracle", exponential_oracle, Duration::from_secs(10)),
        ("scaling relation", scaling_relation, Duration::MAX),
        ("S-function orthogonality", s_orthogonality, Duration::MAX),
        ("interferometer endpoints", endpoints, Duration::MAX),
        ("route equivalence", route_equivalence, Duration::from_secs(30)),
        ("closed forms", closed_forms, Duration::MAX),
        ("figure datasets", figures, Duration::MAX),
        ("QPSI properties", qpsi, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:.0?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({elapsed:.2?})", k + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
