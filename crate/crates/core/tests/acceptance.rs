//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per check and exits
//! nonzero when any fails. Run with `cargo test -p vqa-lab --release --test acceptance`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::time::Instant;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vqa_lab::ansatz::{self, AnsatzSpec};
use vqa_lab::cli::trace_csv;
use vqa_lab::dense;
use vqa_lab::gradients::{
    dm_gradient, exact_gradient, qndm_gradient, quasi_characteristic, Method, QndmConfig,
    ShotConfig, Shots, QNDM_KAPPA,
};
use vqa_lab::optimizer::{run_optimization, OptimizerConfig};
use vqa_lab::pauli::{
    gen_random_hamiltonian, parse_hamiltonian, Hamiltonian, PauliString, PauliTerm, RandomHamSpec,
};
use vqa_lab::resources::{linear_fit, CostModel, ResourceReport};
use vqa_lab::statevector::{Axis, CouplingSign, StateVector};
use vqa_lab::{H2_GROUND_ENERGY, H2_HAMILTONIAN};

fn report(id: u32, pass: bool, detail: String) {
    println!(
        "criterion {id}: {} | {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Random `(n=3, L=2, J=5)` instances shared by the gradient criteria.
fn instances(count: u64) -> Vec<(Hamiltonian, AnsatzSpec, Vec<f64>)> {
    (0..count)
        .map(|seed| {
            let h =
                gen_random_hamiltonian(&RandomHamSpec::new(3, 5, 0.0, 1.0, 100 + seed)).unwrap();
            let spec = AnsatzSpec::with_y(3, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let theta = (0..spec.param_count())
                .map(|_| rng.random_range(0.0..TAU))
                .collect();
            (h, spec, theta)
        })
        .collect()
}

fn h2() -> Hamiltonian {
    parse_hamiltonian(H2_HAMILTONIAN).unwrap()
}

fn criterion_1_parameter_shift_matches_finite_differences() -> bool {
    let start = Instant::now();
    let step = 1e-5;
    let mut worst = 0.0f64;
    for (h, spec, theta) in instances(20) {
        let g = exact_gradient(&h, &spec, &theta, FRAC_PI_2).unwrap();
        for j in 0..theta.len() {
            let mut p = theta.clone();
            let mut m = theta.clone();
            p[j] += step;
            m[j] -= step;
            let fd = (ansatz::cost(&h, &spec, &p).unwrap() - ansatz::cost(&h, &spec, &m).unwrap())
                / (2.0 * step);
            worst = worst.max((fd - g.values[j]).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst < 1e-6 && secs < 5.0;
    report(
        1,
        pass,
        format!("max |shift - fd| = {worst:.2e} (< 1e-6), {secs:.2} s"),
    );
    pass
}

fn criterion_2_direct_measurement_is_unbiased() -> bool {
    let start = Instant::now();
    let seeds = 200u64;
    let mut worst_exact = 0.0f64;
    let mut worst_z = 0.0f64;
    for (idx, (h, spec, theta)) in instances(20).into_iter().enumerate() {
        let exact = exact_gradient(&h, &spec, &theta, FRAC_PI_2).unwrap();
        let inf = dm_gradient(&h, &spec, &theta, FRAC_PI_2, &ShotConfig::infinite()).unwrap();
        for (a, b) in inf.values.iter().zip(&exact.values) {
            worst_exact = worst_exact.max((a - b).abs());
        }
        let d = theta.len();
        let mut sum = vec![0.0; d];
        let mut sum_sq = vec![0.0; d];
        for seed in 0..seeds {
            let shots = ShotConfig::finite(200, 1_000 * idx as u64 + seed);
            let g = dm_gradient(&h, &spec, &theta, FRAC_PI_2, &shots).unwrap();
            for j in 0..d {
                sum[j] += g.values[j];
                sum_sq[j] += g.values[j].powi(2);
            }
        }
        let r = seeds as f64;
        for j in 0..d {
            let mean = sum[j] / r;
            let var = (sum_sq[j] / r - mean * mean).max(0.0) * r / (r - 1.0);
            let se = (var / r).sqrt();
            if se > 0.0 {
                worst_z = worst_z.max((mean - exact.values[j]).abs() / se);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst_exact < 1e-12 && worst_z < 4.0 && secs < 30.0;
    report(
        2,
        pass,
        format!("infinite-shot error {worst_exact:.2e} (< 1e-12), worst |bias|/SE {worst_z:.2} (< 4), {secs:.2} s"),
    );
    pass
}

fn criterion_3_detector_readout_and_bias_order() -> bool {
    let start = Instant::now();
    let s = FRAC_PI_2;
    let delta = 1e-5;
    let mut worst_slope = 0.0f64;
    let mut ratios = Vec::new();
    for n in 1..=3usize {
        for seed in 0..4u64 {
            let h = gen_random_hamiltonian(&RandomHamSpec::new(n, 3, 0.0, 1.0, 40 + seed)).unwrap();
            let spec = AnsatzSpec::with_y(n, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 7);
            let theta: Vec<f64> = (0..spec.param_count())
                .map(|_| rng.random_range(0.0..TAU))
                .collect();
            let exact = exact_gradient(&h, &spec, &theta, s).unwrap();
            for j in 0..theta.len() {
                let gp = quasi_characteristic(&h, &spec, &theta, j, delta, s).unwrap();
                let gm = quasi_characteristic(&h, &spec, &theta, j, -delta, s).unwrap();
                let slope = -Complex64::i() * (gp - gm) / (2.0 * delta);
                // estimator g = kappa Im G / (lambda 2 sin s) fixes the slope at (2 sin s / kappa) g
                let target = 2.0 * s.sin() / QNDM_KAPPA * exact.values[j];
                worst_slope = worst_slope.max((slope - target).norm());
            }
            let err = |lambda: f64| {
                let est = qndm_gradient(
                    &h,
                    &spec,
                    &theta,
                    &QndmConfig::new(lambda),
                    &ShotConfig::infinite(),
                )
                .unwrap();
                est.values
                    .iter()
                    .zip(&exact.values)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            };
            let e1 = err(0.08);
            if e1 > 1e-9 {
                ratios.push(err(0.04) / e1);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pass = worst_slope < 1e-5 && !ratios.is_empty() && lo >= 0.2 && hi <= 0.3 && secs < 10.0;
    report(
        3,
        pass,
        format!(
            "max slope error {worst_slope:.2e} (< 1e-5), error(0.04)/error(0.08) in [{lo:.4}, {hi:.4}] over {} instances (within [0.2, 0.3]), {secs:.2} s",
            ratios.len()
        ),
    );
    pass
}

fn criterion_4_h2_convergence() -> bool {
    let start = Instant::now();
    let h = h2();
    let spec = AnsatzSpec::with_y(4, 5).unwrap();
    let exact_ground = dense::ground_energy(&h).unwrap();
    let mut finals = Vec::new();
    for method in [Method::Dm, Method::Qndm] {
        let cfg = OptimizerConfig {
            eta: 0.1,
            max_iterations: 1000,
            method,
            shots: ShotConfig::finite(1000, 0),
            qndm: QndmConfig::new(0.1),
            restarts: 10,
            master_seed: 2024,
            shared_restart_seed: false,
        };
        let trace = run_optimization(&h, &spec, &cfg).unwrap();
        finals.push((method, trace.final_mean(), trace.final_std()));
    }
    let secs = start.elapsed().as_secs_f64();
    let (_, m_dm, s_dm) = finals[0];
    let (_, m_q, s_q) = finals[1];
    let near = (m_dm - exact_ground).abs() < 0.05 && (m_q - exact_ground).abs() < 0.05;
    let band = 2.0 * (s_dm.powi(2) + s_q.powi(2)).sqrt();
    let mutual = (m_dm - m_q).abs() <= band;
    let pass = near && mutual && (exact_ground - H2_GROUND_ENERGY).abs() < 1e-10;
    report(
        4,
        pass,
        format!(
            "ground {exact_ground:.6}; DM {m_dm:.6} +- {s_dm:.4}; QNDM {m_q:.6} +- {s_q:.4}; |DM-QNDM| {:.4} vs band {band:.4}; {secs:.1} s",
            (m_dm - m_q).abs()
        ),
    );
    pass
}

fn criterion_5_h2_resource_totals() -> bool {
    let start = Instant::now();
    let h = h2();
    let spec = AnsatzSpec::with_y(4, 5).unwrap();
    let r = ResourceReport::new(&h, &spec, Shots::Finite(1000), &CostModel::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let dm_ok = (r.r_dm as f64 - 2.14e7).abs() <= 0.25 * 2.14e7;
    let q_ok = (r.r_qndm as f64 - 6.2e6).abs() <= 0.25 * 6.2e6;
    let red = r.reduction();
    let pass = dm_ok && q_ok && (0.62..=0.78).contains(&red) && secs < 1.0;
    report(
        5,
        pass,
        format!("R_DM {:.4e} (2.14e7 +- 25%), R_QNDM {:.4e} (6.2e6 +- 25%), reduction {red:.4} in [0.62, 0.78]", r.r_dm as f64, r.r_qndm as f64),
    );
    pass
}

fn criterion_6_lih_scale_reduction() -> bool {
    let start = Instant::now();
    let h = gen_random_hamiltonian(&RandomHamSpec::new(10, 300, 1.0, 0.1, 6)).unwrap();
    let spec = AnsatzSpec::with_y(10, 5).unwrap();
    let r = ResourceReport::new(&h, &spec, Shots::Finite(1000), &CostModel::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let red = r.reduction();
    let pass = (0.69..=0.89).contains(&red) && secs < 1.0;
    report(
        6,
        pass,
        format!("reduction {red:.4} in [0.69, 0.89], regime {}", r.regime),
    );
    pass
}

/// Energy trace is stationary when the mean energy moves by less than 1% of the
/// spectral range over the last 50 iterations.
fn stationarity(mean: &[f64], range: f64) -> f64 {
    let tail = &mean[mean.len() - 50..];
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    (hi - lo) / range
}

fn criterion_7_large_j_ratio_and_convergence() -> bool {
    let start = Instant::now();
    let h = gen_random_hamiltonian(&RandomHamSpec::new(10, 1000, 1.0, 0.1, 7)).unwrap();
    let spec = AnsatzSpec::with_y(10, 5).unwrap();
    let r = ResourceReport::new(&h, &spec, Shots::Finite(1000), &CostModel::default()).unwrap();
    let ratio = r.ratio();

    let h_small = gen_random_hamiltonian(&RandomHamSpec::new(6, 100, 1.0, 0.1, 70)).unwrap();
    let spec_small = AnsatzSpec::with_y(6, 5).unwrap();
    let (lo, hi) = dense::spectral_bounds(&h_small).unwrap();
    let mut moves = Vec::new();
    for method in [Method::Dm, Method::Qndm] {
        let cfg = OptimizerConfig {
            eta: 0.05,
            max_iterations: 200,
            method,
            shots: ShotConfig::finite(500, 0),
            qndm: QndmConfig::new(0.01),
            restarts: 5,
            master_seed: 77,
            shared_restart_seed: false,
        };
        let trace = run_optimization(&h_small, &spec_small, &cfg).unwrap();
        moves.push(stationarity(&trace.mean, hi - lo));
    }
    let secs = start.elapsed().as_secs_f64();
    let stationary = moves.iter().all(|&m| m < 0.01);
    let pass = ratio > 4.0 && stationary && secs < 900.0;
    report(
        7,
        pass,
        format!(
            "J=1000 R_DM/R_QNDM {ratio:.4} (> 4); last-50 drift / range: DM {:.4}, QNDM {:.4} (< 0.01); {secs:.1} s",
            moves[0], moves[1]
        ),
    );
    pass
}

fn criterion_8_ratio_linear_in_j() -> bool {
    let start = Instant::now();
    let spec = AnsatzSpec::with_y(10, 200).unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in (100..=500).step_by(100) {
        let h =
            gen_random_hamiltonian(&RandomHamSpec::new(10, j, 1.0, 0.1, 8_000 + j as u64)).unwrap();
        let r = ResourceReport::new(&h, &spec, Shots::Finite(1000), &CostModel::default()).unwrap();
        xs.push(j as f64);
        ys.push(r.ratio());
    }
    let fit = linear_fit(&xs, &ys).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = fit.r_squared > 0.95 && fit.slope > 0.0 && secs < 1.0;
    let pts: Vec<String> = ys.iter().map(|y| format!("{y:.4}")).collect();
    report(
        8,
        pass,
        format!(
            "ratios [{}], slope {:.3e} (> 0), R^2 {:.4} (> 0.95)",
            pts.join(", "),
            fit.slope,
            fit.r_squared
        ),
    );
    pass
}

fn random_state(n: usize, detector: bool, rng: &mut ChaCha8Rng) -> StateVector {
    let dim = 1usize << (n + usize::from(detector));
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(n, detector, amps).unwrap()
}

fn random_string(len: usize, rng: &mut ChaCha8Rng) -> String {
    (0..len)
        .map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)])
        .collect()
}

fn criterion_9_simulator_properties() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let axes = [Axis::X, Axis::Y, Axis::Z];

    // norm after 1000 random gates
    let n = 5;
    let mut st = StateVector::new(n, true).unwrap();
    for _ in 0..1000 {
        if rng.random_bool(0.5) {
            st.apply_rotation(
                rng.random_range(0..n),
                axes[rng.random_range(0..3)],
                rng.random_range(0.0..TAU),
            )
            .unwrap();
        } else {
            let c = rng.random_range(0..n);
            let t = (c + rng.random_range(1..n)) % n;
            st.apply_cnot(c, t).unwrap();
        }
    }
    let norm_err = (st.norm_sqr() - 1.0).abs();

    // coupling against dense exponentials, detector as the top qubit
    let mut coupling_err = 0.0f64;
    for n in 1..=4usize {
        for _ in 0..10 {
            let letters = random_string(n, &mut rng);
            let coef = rng.random_range(-2.0..2.0);
            let lambda = rng.random_range(-1.0..1.0);
            let sign = if rng.random_bool(0.5) {
                CouplingSign::Plus
            } else {
                CouplingSign::Minus
            };
            let term = PauliTerm::new(coef, letters.parse::<PauliString>().unwrap());
            let joint = parse_hamiltonian(&format!("1.0 {letters}Z")).unwrap();
            let m = dense::hamiltonian_matrix(&joint).unwrap();
            let u = (m * Complex64::new(0.0, sign.value() * lambda * coef)).exp();
            let psi = random_state(n, true, &mut rng);
            let expected = &u * DVector::from_column_slice(psi.amplitudes());
            let mut got = psi.clone();
            got.apply_detector_coupling(lambda, &term, sign).unwrap();
            let diff = (DVector::from_column_slice(got.amplitudes()) - expected).norm();
            coupling_err = coupling_err.max(diff);
        }
    }

    // detector reduced density matrix axioms
    let mut rdm_err = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=4);
        let psi = random_state(n, true, &mut rng);
        let rho = psi.detector_rdm().unwrap();
        let [e0, e1] = rho.eigenvalues();
        rdm_err = rdm_err
            .max((rho.trace() - 1.0).norm())
            .max(rho.hermiticity_error())
            .max((-e0.min(e1)).max(0.0));
    }

    // same master seed, same bytes
    let h = gen_random_hamiltonian(&RandomHamSpec::new(3, 4, 0.0, 1.0, 3)).unwrap();
    let spec = AnsatzSpec::with_y(3, 2).unwrap();
    let cfg = OptimizerConfig {
        eta: 0.1,
        max_iterations: 30,
        method: Method::Qndm,
        shots: ShotConfig::finite(300, 0),
        qndm: QndmConfig::new(0.05),
        restarts: 3,
        master_seed: 11,
        shared_restart_seed: false,
    };
    let a = trace_csv(&run_optimization(&h, &spec, &cfg).unwrap(), true);
    let b = trace_csv(&run_optimization(&h, &spec, &cfg).unwrap(), true);
    let deterministic = a == b;

    let secs = start.elapsed().as_secs_f64();
    let pass =
        norm_err < 1e-9 && coupling_err < 1e-10 && rdm_err < 1e-12 && deterministic && secs < 30.0;
    report(
        9,
        pass,
        format!(
            "norm drift {norm_err:.1e}, coupling vs expm {coupling_err:.1e}, rdm axioms {rdm_err:.1e}, identical CSV {deterministic}, {secs:.2} s"
        ),
    );
    pass
}

fn main() {
    let checks: [fn() -> bool; 9] = [
        criterion_1_parameter_shift_matches_finite_differences,
        criterion_2_direct_measurement_is_unbiased,
        criterion_3_detector_readout_and_bias_order,
        criterion_4_h2_convergence,
        criterion_5_h2_resource_totals,
        criterion_6_lih_scale_reduction,
        criterion_7_large_j_ratio_and_convergence,
        criterion_8_ratio_linear_in_j,
        criterion_9_simulator_properties,
    ];
    let failed = checks.iter().filter(|check| !check()).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
