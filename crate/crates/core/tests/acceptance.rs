//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qchancap_core::capacity::depolarizing_joint_entropy;
use qchancap_core::coding::overlap_report;
use qchancap_core::matrix::eig_hermitian;
use qchancap_core::rng;
use qchancap_core::state::from_ensemble;
use qchancap_core::{
    channel_capacity, coherent_information, depolarizing_threshold, parameterize_density,
    partial_trace, projection_decode, purity_average_experiment, random_code, transmit,
    typical_set, von_neumann_entropy, Complex64, ComplexMatrix, DensityMatrix, Ensemble,
    OptimizerConfig, QuantumChannel,
};

// Tolerances and budgets.
const EXACT_TOL: f64 = 1e-9;
const THRESHOLD_SOLVER_TOL: f64 = 1e-6;
const THRESHOLD_ENTROPY_TOL: f64 = 1e-6;
const CAPACITY_TOL: f64 = 1e-4;
const TYPICAL_MASS_FLOOR: f64 = 0.9;
const OVERLAP_FLOOR_ABOVE_THRESHOLD: f64 = 0.5;
const INVARIANT_TOL: f64 = 1e-9;
const GRAM_TOL: f64 = 1e-10;

const PURITY_TRIALS: usize = 5000;
const PURITY_SEED: u64 = 2024;
const PURITY_SEEDS: u64 = 10;
const OVERLAP_SEEDS: u64 = 50;
const DECODE_SEEDS: u64 = 20;
const DECODE_TRIALS: usize = 2000;
const DECODE_WEIGHT: f64 = 0.99;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

fn depolarizing_joint_closed_form(eta: f64) -> f64 {
    h(1.0 - 0.75 * eta) + 3.0 * h(eta / 4.0)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn half() -> DensityMatrix {
    DensityMatrix::maximally_mixed(2)
}

fn identity_carries_one_qubit() -> Outcome {
    let r = coherent_information(&QuantumChannel::identity(2).unwrap(), &half()).unwrap();
    check((r.i_q - 1.0).abs() < EXACT_TOL, format!("i_q = {:.12}", r.i_q))
}

fn complete_dephasing_carries_nothing() -> Outcome {
    let r = coherent_information(&QuantumChannel::complete_dephasing(2).unwrap(), &half()).unwrap();
    let pass = (r.s_out - 1.0).abs() < EXACT_TOL
        && (r.s_joint - 1.0).abs() < EXACT_TOL
        && r.i_q.abs() < EXACT_TOL;
    check(
        pass,
        format!("s_out = {:.12}, s_joint = {:.12}, i_q = {:.12}", r.s_out, r.s_joint, r.i_q),
    )
}

fn dephasing_family() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for i in 0..=10 {
        let eps = i as f64 / 10.0;
        let r = coherent_information(&QuantumChannel::dephasing(eps).unwrap(), &half()).unwrap();
        worst = worst.max((r.s_joint - (h(1.0 - eps / 2.0) + h(eps / 2.0))).abs());
        values.push(r.i_q);
    }
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let ends = (values[0] - 1.0).abs() < EXACT_TOL && values[10].abs() < EXACT_TOL;
    check(
        worst < EXACT_TOL && monotone && ends,
        format!(
            "max |S - closed form| = {worst:.2e}, i_q from {:.6} to {:.6}, monotone = {monotone}",
            values[0], values[10]
        ),
    )
}

fn depolarizing_joint_formula() -> Outcome {
    let mut worst_eig: f64 = 0.0;
    let mut worst_s: f64 = 0.0;
    for eta in [0.1, 0.25, 0.5] {
        let joint = QuantumChannel::depolarizing(eta).unwrap().joint_state(&half()).unwrap();
        let mut expect = vec![eta / 4.0, eta / 4.0, eta / 4.0, 1.0 - 0.75 * eta];
        expect.sort_by(f64::total_cmp);
        for (a, b) in joint.spectrum().unwrap().iter().zip(&expect) {
            worst_eig = worst_eig.max((a - b).abs());
        }
        let s = von_neumann_entropy(&joint).unwrap();
        worst_s = worst_s.max((s - depolarizing_joint_closed_form(eta)).abs());
    }
    check(
        worst_eig < EXACT_TOL && worst_s < EXACT_TOL,
        format!("eigenvalue error {worst_eig:.2e}, entropy error {worst_s:.2e}"),
    )
}

fn threshold() -> Outcome {
    let eta = depolarizing_threshold(THRESHOLD_SOLVER_TOL).unwrap();
    let gap = (depolarizing_joint_closed_form(eta) - 1.0).abs();
    let library_gap = (depolarizing_joint_entropy(eta).unwrap() - 1.0).abs();
    check(
        gap < THRESHOLD_ENTROPY_TOL && library_gap < THRESHOLD_ENTROPY_TOL && eta > 0.25 && eta < 0.26,
        format!("eta* = {eta:.8}, |S(eta*) - 1| = {gap:.2e}"),
    )
}

fn capacity_on_pool(ch: &QuantumChannel, threads: usize) -> f64 {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| channel_capacity(ch, &OptimizerConfig::default()).unwrap().c_q)
}

fn capacity_optimizer() -> Outcome {
    let cases = [
        (QuantumChannel::identity(2).unwrap(), 1.0),
        (QuantumChannel::complete_dephasing(2).unwrap(), 0.0),
        (QuantumChannel::depolarizing(0.1).unwrap(), 1.0 - depolarizing_joint_closed_form(0.1)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (ch, expect) in &cases {
        let first = capacity_on_pool(ch, 1);
        let repeats = (0..3).all(|_| capacity_on_pool(ch, 1).to_bits() == first.to_bits());
        let threads = [2, 4, 8].iter().all(|&t| capacity_on_pool(ch, t).to_bits() == first.to_bits());
        pass &= (first - expect).abs() < CAPACITY_TOL && repeats && threads;
        parts.push(format!("{first:.6} (want {expect:.6})"));
    }
    check(pass, format!("c_q = {}; bit-identical across repeats and 1/2/4/8 threads", parts.join(", ")))
}

fn typical_convergence() -> Outcome {
    let probs = [0.7, 0.3];
    let mut masses = Vec::new();
    let mut bound_ok = true;
    for n in [8usize, 16, 32, 64] {
        let set = typical_set(&probs, n, 0.1).unwrap();
        let nf = n as f64;
        bound_ok &= set.log2_dimension <= nf * (set.entropy + 0.1) + 2.0 * (nf + 1.0).log2();
        masses.push(set.total_mass);
    }
    let increasing = masses.windows(2).all(|w| w[1] > w[0]);
    let last = masses[3];
    check(
        increasing && last > TYPICAL_MASS_FLOOR && bound_ok,
        format!(
            "masses {:?}, increasing = {increasing}, mass at N=64 = {last:.6} (> {TYPICAL_MASS_FLOOR} required), bound holds = {bound_ok}",
            masses.iter().map(|m| (m * 1e6).round() / 1e6).collect::<Vec<_>>()
        ),
    )
}

fn purity_identity() -> Outcome {
    let ch = QuantumChannel::depolarizing(0.2).unwrap();
    let binding = purity_average_experiment(&ch, &half(), 4, PURITY_TRIALS, PURITY_SEED).unwrap();
    let gap = (binding.mc_mean - binding.rhs).abs();
    let rel = |n: usize| {
        median(
            (0..PURITY_SEEDS)
                .map(|s| purity_average_experiment(&ch, &half(), n, PURITY_TRIALS, s).unwrap().rel_err)
                .collect(),
        )
    };
    let (r2, r4) = (rel(2), rel(4));
    check(
        gap <= binding.tolerance && r4 < r2,
        format!(
            "n=4: |mc - rhs| = {gap:.5} <= {:.5} is {}; median rel_err n=2 {r2:.5}, n=4 {r4:.5}, shrinks = {}",
            binding.tolerance,
            gap <= binding.tolerance,
            r4 < r2
        ),
    )
}

fn median_overlap(eta: f64, n: usize) -> f64 {
    let ch = QuantumChannel::depolarizing(eta).unwrap();
    median(
        (0..OVERLAP_SEEDS)
            .map(|s| {
                let code = random_code(n, 2, 2, s).unwrap();
                let outs = transmit(&code, &ch).unwrap();
                overlap_report(&outs, n, 0.0).normalized_overlaps[0][1]
            })
            .collect(),
    )
}

fn overlap_trend() -> Outcome {
    let below: Vec<f64> = [2, 4, 6].iter().map(|&n| median_overlap(0.1, n)).collect();
    let above: Vec<f64> = [2, 4, 6].iter().map(|&n| median_overlap(0.6, n)).collect();
    let decreasing = below.windows(2).all(|w| w[1] < w[0]);
    let stays = above.iter().all(|&m| m > OVERLAP_FLOOR_ABOVE_THRESHOLD);
    check(
        decreasing && stays,
        format!("eta=0.1 medians {below:.4?}; eta=0.6 medians {above:.4?}"),
    )
}

fn decoder_trend() -> Outcome {
    let ch = QuantumChannel::depolarizing(0.05).unwrap();
    let rate = |n: usize| {
        median(
            (0..DECODE_SEEDS)
                .map(|s| {
                    let code = random_code(n, 2, 2, s).unwrap();
                    projection_decode(&code, &ch, DECODE_TRIALS, DECODE_WEIGHT, s)
                        .unwrap()
                        .misidentification_rate
                })
                .collect(),
        )
    };
    let (r2, r6) = (rate(2), rate(6));
    let id = QuantumChannel::identity(2).unwrap();
    let id_rate = projection_decode(&random_code(3, 4, 2, 1).unwrap(), &id, DECODE_TRIALS, DECODE_WEIGHT, 1)
        .unwrap()
        .misidentification_rate;
    check(
        r6 < r2 && id_rate == 0.0,
        format!("median rate n=2 {r2:.5}, n=6 {r6:.5}; identity rate {id_rate}"),
    )
}

fn random_channel(seed: u64) -> QuantumChannel {
    let mut r = rng::stream(seed, 0);
    let gs: Vec<ComplexMatrix> = (0..3)
        .map(|_| ComplexMatrix::new(2, 2, rng::complex_gaussian(&mut r, 4)).unwrap())
        .collect();
    let mut s = ComplexMatrix::zeros(2, 2);
    for g in &gs {
        s = &s + &(&g.dagger() * g);
    }
    let eig = eig_hermitian(&s).unwrap();
    let mut inv_sqrt = ComplexMatrix::zeros(2, 2);
    for (i, &l) in eig.values.iter().enumerate() {
        let v = eig.vector(i);
        inv_sqrt.add_scaled(&ComplexMatrix::outer(&v, &v), Complex64::new(1.0 / l.sqrt(), 0.0));
    }
    QuantumChannel::new(gs.iter().map(|g| g * &inv_sqrt).collect()).unwrap()
}

fn random_state(seed: u64, d: usize) -> DensityMatrix {
    let mut r = rng::stream(seed, 1);
    let p: Vec<f64> = (0..2 * d * d).map(|_| rng::normal(&mut r)).collect();
    parameterize_density(&p).unwrap()
}

fn invariant_suites() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let ch = random_channel(seed);
        let rho = random_state(seed, 2);
        let sigma = random_state(seed + 10_000, 2);

        let out = ch.apply(rho.matrix()).unwrap();
        if (out.trace().re - 1.0).abs() > INVARIANT_TOL || eig_hermitian(&out).unwrap().values[0] < -INVARIANT_TOL {
            failures.push(format!("trace/psd seed {seed}"));
        }

        let joint = ch.joint_state(&rho).unwrap();
        let m0 = partial_trace(joint.matrix(), &[2, 2], &[0]).unwrap();
        let m1 = partial_trace(joint.matrix(), &[2, 2], &[1]).unwrap();
        if m0.max_abs_diff(&out) > INVARIANT_TOL || m1.max_abs_diff(rho.matrix()) > INVARIANT_TOL {
            failures.push(format!("joint marginals seed {seed}"));
        }

        let u = {
            let code = random_code(1, 2, 2, seed).unwrap();
            let cols: Vec<Vec<Complex64>> = code.codewords.iter().map(|w| w.amplitudes().to_vec()).collect();
            ComplexMatrix::from_columns(&cols).unwrap()
        };
        let rotated = DensityMatrix::new(&(&u * rho.matrix()) * &u.dagger()).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        if (von_neumann_entropy(&rotated).unwrap() - s).abs() > INVARIANT_TOL {
            failures.push(format!("basis invariance seed {seed}"));
        }
        let s_sigma = von_neumann_entropy(&sigma).unwrap();
        if (von_neumann_entropy(&rho.tensor(&sigma)).unwrap() - s - s_sigma).abs() > INVARIANT_TOL {
            failures.push(format!("additivity seed {seed}"));
        }

        let info = coherent_information(&ch, &rho).unwrap();
        if info.i_q > info.s_in + INVARIANT_TOL {
            failures.push(format!("I_Q <= S_in seed {seed}"));
        }

        let n = 1 + (seed % 6) as usize;
        let k = 1 + (seed as usize % (1 << n));
        let code = random_code(n, k, 2, seed).unwrap();
        if code.gram().max_abs_diff(&ComplexMatrix::identity(k)) > GRAM_TOL {
            failures.push(format!("gram seed {seed}"));
        }
    }

    let s = 3f64.sqrt() / 2.0;
    let up = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let down = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let e1 = Ensemble::from_pairs([(up.clone(), 0.5), (down, 0.5)]).unwrap();
    let e2 = Ensemble::from_pairs([
        (up, 1.0 / 3.0),
        (vec![Complex64::new(0.5, 0.0), Complex64::new(s, 0.0)], 1.0 / 3.0),
        (vec![Complex64::new(0.5, 0.0), Complex64::new(-s, 0.0)], 1.0 / 3.0),
    ])
    .unwrap();
    let r1 = from_ensemble(&e1).unwrap();
    let r2 = from_ensemble(&e2).unwrap();
    if r1.matrix().max_abs_diff(r2.matrix()) > EXACT_TOL || !r1.is_maximally_mixed(EXACT_TOL) {
        failures.push("ensemble indistinguishability".to_string());
    }

    check(
        failures.is_empty(),
        if failures.is_empty() {
            "200 seeded cases per suite plus the two-ensemble example".to_string()
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "identity channel", budget: secs(1), run: identity_carries_one_qubit },
        Criterion { id: 2, name: "complete dephasing", budget: secs(1), run: complete_dephasing_carries_nothing },
        Criterion { id: 3, name: "dephasing family", budget: secs(1), run: dephasing_family },
        Criterion { id: 4, name: "depolarizing joint state", budget: secs(1), run: depolarizing_joint_formula },
        Criterion { id: 5, name: "depolarizing threshold", budget: secs(1), run: threshold },
        Criterion { id: 6, name: "capacity optimizer", budget: secs(60), run: capacity_optimizer },
        Criterion { id: 7, name: "typical set convergence", budget: secs(5), run: typical_convergence },
        Criterion { id: 8, name: "output purity identity", budget: secs(120), run: purity_identity },
        Criterion { id: 9, name: "output overlap trend", budget: secs(600), run: overlap_trend },
        Criterion { id: 10, name: "decoder trend", budget: secs(600), run: decoder_trend },
        Criterion { id: 11, name: "invariant suites", budget: secs(60), run: invariant_suites },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = outcome.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {}: {} [{:.3} s of {} s]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            outcome.detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
