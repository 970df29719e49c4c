//! Block coding experiments at desk scale.
//!
//! Codewords are orthonormal states on `n` channel uses. They are sent
//! through the memoryless channel, and the outputs are compared by
//! Hilbert–Schmidt overlap and by a projection decoder. A Monte Carlo check
//! compares the mean output purity of random inputs with the closed-form
//! prediction of [`purity_identity_rhs`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channel::{checked_pow, QuantumChannel, PRODUCT_DIM_CAP};
use crate::error::{Error, Result};
use crate::info::purity_identity_rhs;
use crate::math::sqrt;
use crate::matrix::{self, tensor_vec, ComplexMatrix, ONE, ZERO};
use crate::state::{DensityMatrix, PureState};
use crate::{par, rng, typical};

/// Orthonormality tolerance for codewords.
pub const ORTHO_TOL: f64 = 1e-10;

/// Eigenvalues below this are never sampled as decoder outputs.
const SAMPLING_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    /// Haar-random orthonormal codewords.
    Random,
    /// `(|b⟩ ± |b̄⟩)/√2` over bitstrings `b` and their complements.
    Bell,
    /// The first `k` computational basis states.
    Basis,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Random => "random",
            CodeKind::Bell => "bell",
            CodeKind::Basis => "basis",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Code {
    /// Channel uses per block.
    pub n: usize,
    /// Single-use dimension.
    pub dim: usize,
    pub codewords: Vec<PureState>,
    pub seed: u64,
    pub kind: CodeKind,
}

impl Code {
    pub fn k(&self) -> usize {
        self.codewords.len()
    }

    /// `dimⁿ`.
    pub fn block_dim(&self) -> usize {
        self.codewords[0].dim()
    }

    /// `⟨αᵢ|αⱼ⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        let k = self.k();
        ComplexMatrix::from_fn(k, k, |i, j| self.codewords[i].inner(&self.codewords[j]))
    }
}

fn block_dim(dim: usize, n: usize) -> Result<usize> {
    let size = checked_pow(dim, n).unwrap_or(usize::MAX);
    if size > PRODUCT_DIM_CAP {
        return Err(Error::SizeCap {
            what: "code space",
            size,
            cap: PRODUCT_DIM_CAP,
        });
    }
    Ok(size)
}

fn check_k(k: usize, space: usize) -> Result<()> {
    if k == 0 || k > space {
        return Err(Error::TooManyCodewords { k, dim: space });
    }
    Ok(())
}

/// Orthonormalizes Gaussian draws against the accepted columns, with a second
/// Gram–Schmidt pass. Column `j` draws from its own stream `(seed, j)`.
fn gaussian_orthonormal(
    k: usize,
    len: usize,
    seed: u64,
    mut embed: impl FnMut(Vec<Complex64>) -> Vec<Complex64>,
) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut r = rng::stream(seed, j as u64);
        loop {
            let mut v = embed(rng::complex_gaussian(&mut r, len));
            let start = sqrt(matrix::norm_sqr(&v));
            for _ in 0..2 {
                for q in &basis {
                    let proj = matrix::inner(q, &v);
                    for (x, y) in v.iter_mut().zip(q) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = sqrt(matrix::norm_sqr(&v));
            if norm > 1e-8 * start {
                v.iter_mut().for_each(|z| *z /= norm);
                basis.push(v);
                break;
            }
        }
    }
    basis
}

/// `k` random orthonormal codewords on `n` uses of a `dim`-level system.
pub fn random_code(n: usize, k: usize, dim: usize, seed: u64) -> Result<Code> {
    if n == 0 || dim == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let space = block_dim(dim, n)?;
    check_k(k, space)?;
    let codewords = gaussian_orthonormal(k, space, seed, |v| v)
        .into_iter()
        .map(PureState::from_unit_unchecked)
        .collect();
    Ok(Code {
        n,
        dim,
        codewords,
        seed,
        kind: CodeKind::Random,
    })
}

/// Random orthonormal codewords drawn inside the typical subspace of
/// `rho_in^{⊗n}`, spanned by products of its eigenvectors whose eigenvalue
/// sequences are `delta`-typical.
pub fn random_code_in_typical_subspace(
    rho_in: &DensityMatrix,
    n: usize,
    k: usize,
    delta: f64,
    seed: u64,
) -> Result<Code> {
    let dim = rho_in.dim();
    block_dim(dim, n)?;
    let eig = rho_in.eigensystem()?;
    let total: f64 = eig.values.iter().sum();
    let probs: Vec<f64> = eig.values.iter().map(|p| p / total).collect();
    let sequences = typical::typical_sequences(&probs, n, delta)?;
    check_k(k, sequences.len())?;

    let columns: Vec<Vec<Complex64>> = sequences
        .iter()
        .map(|&index| {
            let mut digits = vec![0usize; n];
            let mut rem = index;
            for slot in (0..n).rev() {
                digits[slot] = rem % dim;
                rem /= dim;
            }
            digits
                .iter()
                .fold(vec![ONE], |acc, &d| tensor_vec(&acc, &eig.vector(d)))
        })
        .collect();
    let basis = ComplexMatrix::from_columns(&columns)?;
    let codewords = gaussian_orthonormal(k, columns.len(), seed, |coeffs| basis.mul_vec(&coeffs))
        .into_iter()
        .map(PureState::from_unit_unchecked)
        .collect();
    Ok(Code {
        n,
        dim,
        codewords,
        seed,
        kind: CodeKind::Random,
    })
}

/// `2ⁿ` codewords `(|b⟩ ∓ |b̄⟩)/√2` over `n`-bit strings `b` with leading bit
/// zero, listed from the largest such `b` down, minus sign first. For `n = 2`
/// the list reads `|01⟩−|10⟩, |01⟩+|10⟩, |00⟩−|11⟩, |00⟩+|11⟩`.
pub fn bell_code(n: usize) -> Result<Code> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    let space = block_dim(2, n)?;
    let mask = space - 1;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut codewords = Vec::with_capacity(space);
    for b in (0..space / 2).rev() {
        for sign in [-1.0, 1.0] {
            let mut amps = vec![ZERO; space];
            amps[b] = Complex64::new(s, 0.0);
            amps[!b & mask] = Complex64::new(sign * s, 0.0);
            codewords.push(PureState::from_unit_unchecked(amps));
        }
    }
    Ok(Code {
        n,
        dim: 2,
        codewords,
        seed: 0,
        kind: CodeKind::Bell,
    })
}

/// The first `k` computational basis states of `dimⁿ`.
pub fn basis_code(n: usize, k: usize, dim: usize) -> Result<Code> {
    if n == 0 || dim == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let space = block_dim(dim, n)?;
    check_k(k, space)?;
    Ok(Code {
        n,
        dim,
        codewords: (0..k).map(|i| PureState::basis(space, i)).collect(),
        seed: 0,
        kind: CodeKind::Basis,
    })
}

/// Channel outputs `(𝒮^{⊗n})(|αᵢ⟩⟨αᵢ|)` for every codeword.
pub fn transmit(code: &Code, c: &QuantumChannel) -> Result<Vec<DensityMatrix>> {
    if c.dim_in() != code.dim {
        return Err(Error::DimensionMismatch {
            expected: code.dim,
            found: c.dim_in(),
        });
    }
    par::map_indexed(code.k(), |i| c.apply_product(&code.codewords[i].projector(), code.n))
        .into_iter()
        .collect()
}

/// Pairwise comparison of channel outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapReport {
    pub n: usize,
    /// `tr ρᵢ²`.
    pub purities: Vec<f64>,
    /// `tr ρᵢρⱼ`.
    pub overlaps: Vec<Vec<f64>>,
    /// `tr ρᵢρⱼ / √(tr ρᵢ² tr ρⱼ²)`.
    pub normalized_overlaps: Vec<Vec<f64>>,
    /// `−n C_Q`, the asymptotic log₂ overlap of two output subspaces.
    pub predicted_log2_overlap: f64,
}

impl OverlapReport {
    /// Mean normalized overlap over distinct pairs (`None` for a single
    /// codeword).
    pub fn mean_off_diagonal(&self) -> Option<f64> {
        let k = self.purities.len();
        if k < 2 {
            return None;
        }
        let mut acc = 0.0;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    acc += self.normalized_overlaps[i][j];
                }
            }
        }
        Some(acc / (k * (k - 1)) as f64)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let k = self.purities.len();
        let mut m = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    m = m.max(self.normalized_overlaps[i][j].abs());
                }
            }
        }
        m
    }
}

pub fn overlap_report(outputs: &[DensityMatrix], n: usize, c_q: f64) -> OverlapReport {
    let k = outputs.len();
    let mut overlaps = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            // tr ρᵢρⱼ = Σ ρᵢ[a,b] conj(ρⱼ[a,b]) for Hermitian ρⱼ.
            let v: f64 = outputs[i]
                .matrix()
                .as_slice()
                .iter()
                .zip(outputs[j].matrix().as_slice())
                .map(|(x, y)| (x * y.conj()).re)
                .sum();
            overlaps[i][j] = v;
            overlaps[j][i] = v;
        }
    }
    let purities: Vec<f64> = (0..k).map(|i| overlaps[i][i]).collect();
    let normalized_overlaps = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        1.0
                    } else {
                        overlaps[i][j] / sqrt(purities[i] * purities[j])
                    }
                })
                .collect()
        })
        .collect();
    OverlapReport {
        n,
        purities,
        overlaps,
        normalized_overlaps,
        predicted_log2_overlap: -(n as f64) * c_q,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodingReport {
    pub trials: usize,
    pub correct: usize,
    pub misidentification_rate: f64,
    /// Rank of each codeword's output projector.
    pub projector_rank_used: Vec<usize>,
    pub seed: u64,
}

struct OutputModel {
    /// Eigenvalues (ascending, clamped) and eigenvectors of `ρᵢ`.
    weights: Vec<f64>,
    vectors: ComplexMatrix,
    /// Column indices spanning the decoding projector.
    projector: Vec<usize>,
}

impl OutputModel {
    fn new(rho: &DensityMatrix, weight: f64) -> Result<Self> {
        let eig = rho.eigensystem()?;
        let total: f64 = eig.values.iter().sum();
        let mut projector = Vec::new();
        let mut captured = 0.0;
        for idx in (0..eig.values.len()).rev() {
            projector.push(idx);
            captured += eig.values[idx];
            if captured >= weight * total {
                break;
            }
        }
        let weights = eig
            .values
            .iter()
            .map(|&v| if v > SAMPLING_FLOOR { v } else { 0.0 })
            .collect();
        Ok(Self {
            weights,
            vectors: eig.vectors,
            projector,
        })
    }

    /// `⟨v|P|v⟩`.
    fn score(&self, v: &[Complex64]) -> f64 {
        self.projector
            .iter()
            .map(|&col| {
                (0..v.len())
                    .map(|r| self.vectors[(r, col)].conj() * v[r])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    }
}

/// Sends random codewords through the channel and decodes each output by the
/// dominant-eigenspace projector that scores it highest.
///
/// The projector for codeword `i` spans the fewest leading eigenvectors of
/// `ρᵢ` holding at least `weight` of its trace. An output is drawn from `ρᵢ`
/// by picking one of its eigenvectors with probability equal to the
/// eigenvalue. Trial `t` uses the random stream `(seed, t)`; ties go to the
/// lowest codeword index.
pub fn projection_decode(
    code: &Code,
    c: &QuantumChannel,
    trials: usize,
    weight: f64,
    seed: u64,
) -> Result<DecodingReport> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    if !(weight > 0.0 && weight < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "weight",
            value: weight,
        });
    }
    let outputs = transmit(code, c)?;
    let models = par::map_indexed(outputs.len(), |i| OutputModel::new(&outputs[i], weight))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let hits = par::map_indexed(trials, |t| {
        let mut r = rng::stream(seed, t as u64);
        let sent = rng::index(&mut r, models.len());
        let model = &models[sent];
        let which = rng::weighted_index(&mut r, &model.weights);
        let received = model.vectors.column(which);
        let mut decoded = 0;
        let mut best = f64::NEG_INFINITY;
        for (j, m) in models.iter().enumerate() {
            let s = m.score(&received);
            if s > best {
                best = s;
                decoded = j;
            }
        }
        decoded == sent
    });
    let correct = hits.iter().filter(|&&h| h).count();
    Ok(DecodingReport {
        trials,
        correct,
        misidentification_rate: 1.0 - correct as f64 / trials as f64,
        projector_rank_used: models.iter().map(|m| m.projector.len()).collect(),
        seed,
    })
}

/// Mean output purity of Haar-random block inputs against its closed-form
/// prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct PurityExperiment {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mc_mean: f64,
    pub standard_error: f64,
    pub rhs: f64,
    /// `|mc_mean − rhs| / rhs`.
    pub rel_err: f64,
    /// `3 (standard_error + 2 rhs / dimⁿ)`.
    pub tolerance: f64,
    pub pass: bool,
}

/// Averages `tr ρ_α²` over `trials` Haar-random pure inputs `|α⟩` on `n`
/// uses, with `ρ_α = 𝒮^{⊗n}(|α⟩⟨α|)`, and compares it with
/// [`purity_identity_rhs`].
///
/// Only the maximally mixed source is accepted: its typical subspace is the
/// whole space, so the restricted traces in the prediction are exact. Random
/// unit vectors carry `O(1/dimⁿ)` corrections to the second-moment
/// prediction, which the tolerance allows for.
pub fn purity_average_experiment(
    c: &QuantumChannel,
    rho_in: &DensityMatrix,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<PurityExperiment> {
    if rho_in.dim() != c.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: c.dim_in(),
            found: rho_in.dim(),
        });
    }
    if !rho_in.is_maximally_mixed(1e-10) {
        return Err(Error::NonUniformInput);
    }
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    let space = block_dim(c.dim_in(), n)?;
    let rhs = purity_identity_rhs(c, rho_in, n as u32)?;

    let samples = par::map_indexed(trials, |t| {
        let mut r = rng::stream(seed, t as u64);
        let alpha = rng::haar_state(&mut r, space);
        let input = ComplexMatrix::outer(&alpha, &alpha);
        c.apply_product_matrix(&input, n).map(|out| {
            out.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    let count = samples.len() as f64;
    let mc_mean = samples.iter().sum::<f64>() / count;
    let variance = if samples.len() > 1 {
        samples.iter().map(|s| (s - mc_mean) * (s - mc_mean)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    let standard_error = sqrt(variance / count);
    let rel_err = (mc_mean - rhs).abs() / rhs.abs();
    let tolerance = 3.0 * (standard_error + 2.0 * rhs / space as f64);
    Ok(PurityExperiment {
        n,
        trials,
        seed,
        mc_mean,
        standard_error,
        rhs,
        rel_err,
        tolerance,
        pass: (mc_mean - rhs).abs() <= tolerance,
    })
}
