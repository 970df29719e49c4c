//! Command implementations. Each JSON-producing command is an
//! [`Invocation`]: its parameters serialize into the run manifest and
//! deserialize back for replay.

use std::fmt::Write as _;

use qchancap_core::coding::{basis_code, overlap_report, random_code};
use qchancap_core::typical::MAX_SYMBOLS;
use qchancap_core::{
    bell_code, channel_capacity, coherent_information, depolarizing_threshold, projection_decode,
    purity_average_experiment, transmit, typical_set, Code, DensityMatrix, OptimizerConfig,
    QuantumChannel,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::spec::{from_matrix, Builtin, ChannelSpec, InputSpec};

/// Probabilities must sum to one within this.
pub const PROBABILITY_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams {
    pub channel: ChannelSpec,
    pub input: InputSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerParams {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl From<&OptimizerParams> for OptimizerConfig {
    fn from(p: &OptimizerParams) -> Self {
        OptimizerConfig {
            restarts: p.restarts,
            max_iters: p.max_iters,
            tol: p.tol,
            seed: p.seed,
        }
    }
}

impl Default for OptimizerParams {
    fn default() -> Self {
        let d = OptimizerConfig::default();
        Self {
            restarts: d.restarts,
            seed: d.seed,
            tol: d.tol,
            max_iters: d.max_iters,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityParams {
    pub channel: ChannelSpec,
    #[serde(flatten)]
    pub optimizer: OptimizerParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalParams {
    pub probs: Vec<f64>,
    pub n: usize,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Random,
    Bell,
    Basis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateParams {
    pub channel: ChannelSpec,
    pub n: usize,
    pub k: Option<usize>,
    pub kind: Kind,
    pub trials: usize,
    pub weight: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityParams {
    pub channel: ChannelSpec,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Invocation {
    Entropy(EntropyParams),
    Capacity(CapacityParams),
    Threshold(ThresholdParams),
    Typical(TypicalParams),
    Simulate(SimulateParams),
    PurityCheck(PurityParams),
}

impl Invocation {
    pub fn name(&self) -> &'static str {
        match self {
            Invocation::Entropy(_) => "entropy",
            Invocation::Capacity(_) => "capacity",
            Invocation::Threshold(_) => "threshold",
            Invocation::Typical(_) => "typical",
            Invocation::Simulate(_) => "simulate",
            Invocation::PurityCheck(_) => "purity-check",
        }
    }

    pub fn run(&self) -> CliResult<Value> {
        match self {
            Invocation::Entropy(p) => entropy(p),
            Invocation::Capacity(p) => capacity(p),
            Invocation::Threshold(p) => threshold(p),
            Invocation::Typical(p) => typical(p),
            Invocation::Simulate(p) => simulate(p),
            Invocation::PurityCheck(p) => purity_check(p),
        }
    }
}

fn entropy(p: &EntropyParams) -> CliResult<Value> {
    let ch = p.channel.to_channel()?;
    let rho = p.input.to_state(ch.dim_in())?;
    let r = coherent_information(&ch, &rho)?;
    Ok(json!({
        "s_in": r.s_in,
        "s_out": r.s_out,
        "s_joint": r.s_joint,
        "i_q": r.i_q,
    }))
}

fn capacity(p: &CapacityParams) -> CliResult<Value> {
    let ch = p.channel.to_channel()?;
    let r = channel_capacity(&ch, &(&p.optimizer).into())?;
    Ok(json!({
        "c_q": r.c_q,
        "rho_star": from_matrix(r.rho_star.matrix()),
        "restarts_agreeing": r.restarts_agreeing,
        "runs": p.optimizer.restarts + 1,
        "objective_trace": r.objective_trace,
    }))
}

fn threshold(p: &ThresholdParams) -> CliResult<Value> {
    Ok(json!({ "eta_star": depolarizing_threshold(p.tol)? }))
}

pub fn check_probs(probs: &[f64]) -> CliResult<()> {
    if probs.len() < 2 || probs.len() > MAX_SYMBOLS {
        return Err(CliError::usage(format!(
            "probs: need between 2 and {MAX_SYMBOLS} probabilities, got {}",
            probs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(CliError::usage(format!("probs: {p} is not in (0, 1]")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(CliError::usage(format!("probs: probabilities sum to {sum}, not 1")));
    }
    Ok(())
}

fn typical(p: &TypicalParams) -> CliResult<Value> {
    check_probs(&p.probs)?;
    let set = typical_set(&p.probs, p.n, p.delta)?;
    Ok(json!({
        "entropy": set.entropy,
        "total_mass": set.total_mass,
        "log2_dimension": set.log2_dimension,
        "dimension": set.dimension.to_string(),
        "dimension_bound": set.dimension_bound(),
        "class_count": set.classes.len(),
    }))
}

fn build_code(ch: &QuantumChannel, kind: Kind, n: usize, k: Option<usize>, seed: u64) -> CliResult<Code> {
    let dim = ch.dim_in();
    match kind {
        Kind::Random => Ok(random_code(n, k.unwrap_or(2), dim, seed)?),
        Kind::Basis => Ok(basis_code(n, k.unwrap_or(2), dim)?),
        Kind::Bell => {
            if dim != 2 {
                return Err(CliError::Validation(format!(
                    "kind: bell codewords are qubit states, channel input dimension is {dim}"
                )));
            }
            let code = bell_code(n)?;
            if let Some(k) = k {
                if k != code.k() {
                    return Err(CliError::usage(format!(
                        "k: a bell code on {n} qubits has {} codewords, got {k}",
                        code.k()
                    )));
                }
            }
            Ok(code)
        }
    }
}

/// Capacity used for the overlap prediction; a fixed default search.
fn prediction_capacity(ch: &QuantumChannel) -> CliResult<f64> {
    Ok(channel_capacity(ch, &OptimizerConfig::default())?.c_q)
}

struct SimulationRun {
    code: Code,
    overlap: qchancap_core::OverlapReport,
    decoding: qchancap_core::DecodingReport,
}

fn simulate_once(ch: &QuantumChannel, p: &SimulateParams, c_q: f64) -> CliResult<SimulationRun> {
    check_weight(p.weight)?;
    let code = build_code(ch, p.kind, p.n, p.k, p.seed)?;
    let outputs = transmit(&code, ch)?;
    let overlap = overlap_report(&outputs, p.n, c_q);
    let decoding = projection_decode(&code, ch, p.trials, p.weight, p.seed)?;
    Ok(SimulationRun {
        code,
        overlap,
        decoding,
    })
}

fn check_weight(weight: f64) -> CliResult<()> {
    if weight > 0.0 && weight < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!("weight: {weight} is not in (0, 1)")))
    }
}

fn simulate(p: &SimulateParams) -> CliResult<Value> {
    let ch = p.channel.to_channel()?;
    let c_q = prediction_capacity(&ch)?;
    let run = simulate_once(&ch, p, c_q)?;
    let codewords: Vec<Vec<[f64; 2]>> = run
        .code
        .codewords
        .iter()
        .map(|w| w.amplitudes().iter().map(|a| [a.re, a.im]).collect())
        .collect();
    let o = &run.overlap;
    let d = &run.decoding;
    Ok(json!({
        "c_q": c_q,
        "code": {
            "kind": run.code.kind.name(),
            "n": run.code.n,
            "k": run.code.k(),
            "dim": run.code.dim,
            "seed": run.code.seed,
            "codewords": codewords,
        },
        "overlap": {
            "n": o.n,
            "purities": o.purities,
            "overlaps": o.overlaps,
            "normalized_overlaps": o.normalized_overlaps,
            "predicted_log2_overlap": o.predicted_log2_overlap,
            "max_off_diagonal": o.max_off_diagonal(),
        },
        "decoding": {
            "trials": d.trials,
            "correct": d.correct,
            "misidentification_rate": d.misidentification_rate,
            "projector_rank_used": d.projector_rank_used,
            "seed": d.seed,
        },
    }))
}

fn purity_check(p: &PurityParams) -> CliResult<Value> {
    let ch = p.channel.to_channel()?;
    let rho = DensityMatrix::maximally_mixed(ch.dim_in());
    let e = purity_average_experiment(&ch, &rho, p.n, p.trials, p.seed)?;
    Ok(json!({
        "n": e.n,
        "trials": e.trials,
        "seed": e.seed,
        "mc_mean": e.mc_mean,
        "standard_error": e.standard_error,
        "rhs": e.rhs,
        "rel_err": e.rel_err,
        "tolerance": e.tolerance,
        "pass": e.pass,
    }))
}

/// `start:stop:points`, evenly spaced and inclusive of both ends.
pub fn parse_range(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::usage(format!("sweep: `{text}` is not start:stop:points"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let points: usize = parts[2].parse().map_err(|_| bad())?;
    if points < 2 || !start.is_finite() || !stop.is_finite() {
        return Err(CliError::usage("sweep: need finite ends and at least 2 points"));
    }
    Ok((0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect())
}

/// CSV of `(parameter, c_q)` across a parametric built-in family.
pub fn capacity_sweep(family: Builtin, values: &[f64], optimizer: &OptimizerParams) -> CliResult<String> {
    if !family.is_parametric() {
        return Err(CliError::usage(format!(
            "sweep: `{}` has no noise parameter to sweep",
            family.name()
        )));
    }
    let column = if family == Builtin::Depolarizing { "eta" } else { "epsilon" };
    let mut csv = format!("{column},c_q\n");
    for &x in values {
        let ch = ChannelSpec::builtin(family, x).to_channel()?;
        let r = channel_capacity(&ch, &optimizer.into())?;
        writeln!(csv, "{x},{}", r.c_q).expect("writing to a String");
    }
    Ok(csv)
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

/// CSV over block lengths of the median (over `seeds` consecutive seeds from
/// `base.seed`) mean off-diagonal normalized overlap and misidentification
/// rate, with the asymptotic log₂ overlap prediction.
pub fn simulate_sweep(base: &SimulateParams, ns: &[usize], seeds: usize) -> CliResult<String> {
    if seeds == 0 {
        return Err(CliError::usage("seeds: need at least one seed"));
    }
    if ns.is_empty() {
        return Err(CliError::usage("n-sweep: need at least one block length"));
    }
    let ch = base.channel.to_channel()?;
    let c_q = prediction_capacity(&ch)?;
    let mut csv = String::from("n,median_normalized_overlap,median_misidentification_rate,predicted_log2_overlap\n");
    for &n in ns {
        let mut overlaps = Vec::with_capacity(seeds);
        let mut rates = Vec::with_capacity(seeds);
        for s in 0..seeds as u64 {
            let p = SimulateParams {
                n,
                seed: base.seed.wrapping_add(s),
                ..base.clone()
            };
            let run = simulate_once(&ch, &p, c_q)?;
            overlaps.push(run.overlap.mean_off_diagonal().unwrap_or(f64::NAN));
            rates.push(run.decoding.misidentification_rate);
        }
        writeln!(
            csv,
            "{n},{},{},{}",
            median(overlaps),
            median(rates),
            -(n as f64) * c_q
        )
        .expect("writing to a String");
    }
    Ok(csv)
}
