//! Entropies, purities and coherent information. All entropies are in bits.

use crate::channel::QuantumChannel;
use crate::error::Result;
use crate::math::{entropy_term, powi};
use crate::state::DensityMatrix;

/// Eigenvalues at or below this are treated as exact zeros.
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-12;

/// Entropies of one channel use and the resulting coherent information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfoReport {
    pub s_in: f64,
    pub s_out: f64,
    /// Entropy of the joint (output ⊗ reference) state.
    pub s_joint: f64,
    /// `max(0, s_out − s_joint)`.
    pub i_q: f64,
}

impl InfoReport {
    /// `s_out − s_joint` before clamping.
    pub fn raw_difference(&self) -> f64 {
        self.s_out - self.s_joint
    }
}

pub(crate) fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&p| p > ENTROPY_EIGEN_FLOOR)
        .map(|&p| entropy_term(p))
        .sum::<f64>()
        .max(0.0)
}

/// `−tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.spectrum()?))
}

/// `tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

pub fn coherent_information(c: &QuantumChannel, rho_in: &DensityMatrix) -> Result<InfoReport> {
    let out = c.output_state(rho_in)?;
    let joint = c.joint_state(rho_in)?;
    let s_in = von_neumann_entropy(rho_in)?;
    let s_out = von_neumann_entropy(&out)?;
    let s_joint = von_neumann_entropy(&joint)?;
    Ok(InfoReport {
        s_in,
        s_out,
        s_joint,
        i_q: (s_out - s_joint).max(0.0),
    })
}

/// `tr(ρ_out²)ⁿ + tr(ρ_joint²)ⁿ − tr(ρ_io²)ⁿ`: the predicted mean output
/// purity of `n` uses of `c` fed with random states from the source `rho_in`.
pub fn purity_identity_rhs(c: &QuantumChannel, rho_in: &DensityMatrix, n: u32) -> Result<f64> {
    let eig = rho_in.eigensystem()?;
    let out = c.output_state(rho_in)?;
    let joint = c.joint_state(rho_in)?;
    let io = c.io_state_with(&eig)?;
    Ok(powi(purity(&out), n) + powi(purity(&joint), n) - powi(purity(&io), n))
}
