//! Single-letter capacity `C_Q = max_ρ I_Q(ρ)` and the depolarizing
//! zero-capacity threshold.
//!
//! Input states are parameterized without constraints as `ρ = AA†/tr(AA†)`
//! for an arbitrary complex `d × d` matrix `A`, and the coherent information
//! is maximized by Nelder–Mead from one fixed start at `I/d` plus a number of
//! seeded random starts. The simplex works on the unclamped difference
//! `S_out − S_joint`, which has the same maximizers whenever the capacity is
//! positive and gives the search a slope in the region where `I_Q` is zero.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::info::{coherent_information, entropy_of_spectrum};
use crate::math::sqrt;
use crate::matrix::ComplexMatrix;
use crate::par;
use crate::rng;
use crate::simplex::NelderMead;
use crate::state::DensityMatrix;

/// Runs whose best value lies within this of the overall best count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Number of seeded random starts (the fixed `I/d` start is extra).
    pub restarts: usize,
    pub max_iters: usize,
    /// Objective-improvement stopping tolerance.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 2000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "restarts",
                value: 0.0,
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::ParameterOutOfRange {
                name: "tol",
                value: self.tol,
            });
        }
        if self.max_iters == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "max_iters",
                value: 0.0,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityResult {
    pub c_q: f64,
    pub rho_star: DensityMatrix,
    /// Runs (fixed start included) that reached the best value within
    /// [`AGREEMENT_TOL`].
    pub restarts_agreeing: usize,
    /// `(iteration, I_Q)` improvements along the winning run.
    pub objective_trace: Vec<(usize, f64)>,
}

/// Maps `2d²` reals (interleaved real/imaginary parts of a row-major `A`) to
/// the density matrix `AA†/tr(AA†)`.
pub fn parameterize_density(params: &[f64]) -> Result<DensityMatrix> {
    let d = dimension_for(params.len())?;
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    if params.iter().all(|&p| p == 0.0) {
        return Err(Error::ZeroParameters);
    }
    let a = ComplexMatrix::from_fn(d, d, |i, j| {
        let k = 2 * (i * d + j);
        Complex64::new(params[k], params[k + 1])
    });
    let aa = &a * &a.dagger();
    let trace = aa.trace().re;
    let mut rho = aa.scale_real(1.0 / trace);
    // Exact Hermitian symmetry for downstream eigensolvers.
    for i in 0..d {
        rho[(i, i)].im = 0.0;
        for j in 0..i {
            rho[(i, j)] = rho[(j, i)].conj();
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}

fn dimension_for(len: usize) -> Result<usize> {
    let d = sqrt(len as f64 / 2.0) as usize;
    for cand in [d.saturating_sub(1), d, d + 1] {
        if cand > 0 && 2 * cand * cand == len {
            return Ok(cand);
        }
    }
    Err(Error::DimensionMismatch {
        expected: 2 * d.max(1) * d.max(1),
        found: len,
    })
}

/// Parameters of `A = I`, i.e. the maximally mixed state.
fn identity_params(d: usize) -> Vec<f64> {
    let mut p = alloc::vec![0.0; 2 * d * d];
    for i in 0..d {
        p[2 * (i * d + i)] = 1.0;
    }
    p
}

/// `S_out − S_joint`, or `None` when the parameters are degenerate.
fn raw_objective(c: &QuantumChannel, params: &[f64]) -> Option<f64> {
    let rho = parameterize_density(params).ok()?;
    let eig = rho.eigensystem().ok()?;
    let out = c.output_state(&rho).ok()?;
    let s_out = entropy_of_spectrum(&out.spectrum().ok()?);
    let joint = c.joint_state_with(&eig);
    let s_joint = entropy_of_spectrum(&joint.spectrum().ok()?);
    Some(s_out - s_joint)
}

struct RunOutcome {
    params: Vec<f64>,
    value: f64,
    trace: Vec<(usize, f64)>,
}

fn run_one(c: &QuantumChannel, cfg: &OptimizerConfig, run: usize) -> RunOutcome {
    let d = c.dim_in();
    let start = if run == 0 {
        identity_params(d)
    } else {
        let mut r = rng::stream(cfg.seed.wrapping_add((run - 1) as u64), 0);
        (0..2 * d * d).map(|_| rng::normal(&mut r)).collect()
    };
    let nm = NelderMead {
        tol: cfg.tol,
        max_iters: cfg.max_iters,
        ..NelderMead::default()
    };
    let min = nm.minimize(
        |x| raw_objective(c, x).map_or(f64::INFINITY, |v| -v),
        &start,
    );
    RunOutcome {
        params: min.x,
        value: -min.value,
        trace: min.trace.into_iter().map(|(i, v)| (i, (-v).max(0.0))).collect(),
    }
}

fn run_all(c: &QuantumChannel, cfg: &OptimizerConfig) -> Vec<RunOutcome> {
    par::map_indexed(cfg.restarts + 1, |run| run_one(c, cfg, run))
}

/// Maximizes coherent information over input states.
///
/// Run 0 starts at `I/d`; run `r ≥ 1` starts from Gaussian parameters drawn
/// with seed `cfg.seed + (r − 1)`. The best run wins, ties going to the lowest
/// run index, so the result does not depend on how runs are scheduled.
pub fn channel_capacity(c: &QuantumChannel, cfg: &OptimizerConfig) -> Result<CapacityResult> {
    cfg.validate()?;
    let runs = run_all(c, cfg);

    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = i;
        }
    }
    let best_value = runs[best].value;
    let restarts_agreeing = runs
        .iter()
        .filter(|r| (best_value - r.value).abs() <= AGREEMENT_TOL)
        .count();

    let winner = &runs[best];
    let rho_star = parameterize_density(&winner.params)?;
    let c_q = coherent_information(c, &rho_star)?.i_q;
    Ok(CapacityResult {
        c_q,
        rho_star,
        restarts_agreeing,
        objective_trace: winner.trace.clone(),
    })
}

/// Bisection bracket for [`depolarizing_threshold`].
pub const THRESHOLD_BRACKET: (f64, f64) = (0.01, 0.99);

/// Joint-state entropy of the depolarizing channel fed with `I/2`, computed
/// through the channel machinery.
pub fn depolarizing_joint_entropy(eta: f64) -> Result<f64> {
    let ch = QuantumChannel::depolarizing(eta)?;
    let joint = ch.joint_state(&DensityMatrix::maximally_mixed(2))?;
    Ok(entropy_of_spectrum(&joint.spectrum()?))
}

/// Noise level `η*` at which the depolarizing channel's joint entropy reaches
/// one bit, so that `I_Q(I/2)` drops to zero.
///
/// Bisects on [`THRESHOLD_BRACKET`] until the bracket is narrower than `tol`,
/// then returns the secant root of the final bracket.
pub fn depolarizing_threshold(tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: tol,
        });
    }
    let g = |eta: f64| depolarizing_joint_entropy(eta).map(|s| s - 1.0);
    let (mut lo, mut hi) = THRESHOLD_BRACKET;
    let (mut g_lo, mut g_hi) = (g(lo)?, g(hi)?);
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::NoBracket);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid < 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    Ok(lo - g_lo * (hi - lo) / (g_hi - g_lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameterize_identity_and_rank_one() {
        let rho = parameterize_density(&identity_params(3)).unwrap();
        assert!(rho.is_maximally_mixed(1e-15));

        let mut p = alloc::vec![0.0; 8];
        p[0] = 1.0;
        let rho = parameterize_density(&p).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn parameterize_errors() {
        assert_eq!(parameterize_density(&[0.0; 8]), Err(Error::ZeroParameters));
        assert!(matches!(
            parameterize_density(&[1.0; 7]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            parameterize_density(&[1.0, f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(Error::NonFinite)
        );
        assert!(parameterize_density(&[]).is_err());
    }

    #[test]
    fn dimension_lookup() {
        assert_eq!(dimension_for(2).unwrap(), 1);
        assert_eq!(dimension_for(8).unwrap(), 2);
        assert_eq!(dimension_for(18).unwrap(), 3);
        assert_eq!(dimension_for(32).unwrap(), 4);
        assert!(dimension_for(10).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            restarts: 0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            tol: 0.0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn threshold_tol_range() {
        assert!(depolarizing_threshold(0.0).is_err());
        assert!(depolarizing_threshold(0.2).is_err());
    }

    #[test]
    fn joint_entropy_endpoints() {
        assert!(depolarizing_joint_entropy(0.0).unwrap().abs() < 1e-9);
        assert!((depolarizing_joint_entropy(1.0).unwrap() - 2.0).abs() < 1e-9);
    }
}
