//! Quantum states: pure states, density matrices, and ensembles of
//! (possibly unnormalized) states with their probabilities.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::matrix::{self, eig_psd, ComplexMatrix, HermitianEigen, HERMITIAN_TOL, ZERO};

/// Tolerance on unit norm and unit trace.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = matrix::norm_sqr(&amplitudes);
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { trace: norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a non-zero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = sqrt(matrix::norm_sqr(&amplitudes));
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Normalization { trace: norm * norm });
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = alloc::vec![ZERO; dim];
        amplitudes[index] = matrix::ONE;
        Self { amplitudes }
    }

    pub(crate) fn from_unit_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        matrix::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { trace });
        }
        eig_psd(&matrix)?;
        Ok(Self { matrix })
    }

    /// For matrices that are density matrices by construction (outputs of
    /// trace-preserving maps, projectors onto unit vectors, ...).
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidProbabilities { sum });
        }
        Ok(Self {
            matrix: ComplexMatrix::from_real_diagonal(probs),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues (ascending, clamped at zero) and eigenvectors.
    pub fn eigensystem(&self) -> Result<HermitianEigen> {
        eig_psd(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(self.eigensystem()?.values)
    }

    /// Whether `self` is `I/d` to within `tol` entrywise.
    pub fn is_maximally_mixed(&self, tol: f64) -> bool {
        self.matrix.max_abs_diff(Self::maximally_mixed(self.dim()).matrix()) <= tol
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: matrix::tensor(&self.matrix, &other.matrix),
        }
    }
}

/// A member of an [`Ensemble`]; the state need not be normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleMember {
    pub state: Vec<Complex64>,
    pub probability: f64,
}

/// A list of states with probabilities, normalized so that
/// `Σ pᵢ ⟨ψᵢ|ψᵢ⟩ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    pub fn new(members: Vec<EnsembleMember>) -> Result<Self> {
        let dim = members.first().map_or(0, |m| m.state.len());
        if dim == 0 {
            return Err(Error::Normalization { trace: 0.0 });
        }
        if let Some(bad) = members.iter().find(|m| m.state.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.state.len(),
            });
        }
        if let Some(bad) = members.iter().find(|m| !(m.probability >= 0.0)) {
            return Err(Error::ParameterOutOfRange {
                name: "probability",
                value: bad.probability,
            });
        }
        let trace: f64 = members
            .iter()
            .map(|m| m.probability * matrix::norm_sqr(&m.state))
            .sum();
        if (trace - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { trace });
        }
        Ok(Self { members })
    }

    /// Convenience constructor from `(state, probability)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Complex64>, f64)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(state, probability)| EnsembleMember { state, probability })
                .collect(),
        )
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].state.len()
    }

    fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.members.iter().map(|m| m.probability)
    }
}

/// `Σᵢ pᵢ |ψᵢ⟩⟨ψᵢ|`.
pub fn from_ensemble(e: &Ensemble) -> Result<DensityMatrix> {
    let dim = e.dim();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for m in e.members() {
        rho.add_scaled(
            &ComplexMatrix::outer(&m.state, &m.state),
            Complex64::new(m.probability, 0.0),
        );
    }
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization { trace });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}

/// Scalar product of two ensembles with matched member indexing:
/// `Σⱼ √(pⱼ qⱼ) ⟨ψⱼ|φⱼ⟩`.
pub fn ensemble_inner(a: &Ensemble, b: &Ensemble) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.members()
        .iter()
        .zip(b.members())
        .map(|(x, y)| matrix::inner(&x.state, &y.state) * sqrt(x.probability * y.probability))
        .sum())
}

/// Superposes corresponding members: member `j` of the result is
/// `(Σᵢ cᵢ |ψⱼ⁽ⁱ⁾⟩, pⱼ)`.
///
/// Only ensembles sharing one probability list are accepted. The result must
/// itself be normalized, otherwise [`Error::Normalization`] is returned.
pub fn superpose_ensembles(coeffs: &[Complex64], ensembles: &[Ensemble]) -> Result<Ensemble> {
    if coeffs.len() != ensembles.len() {
        return Err(Error::LengthMismatch {
            left: coeffs.len(),
            right: ensembles.len(),
        });
    }
    let first = ensembles.first().ok_or(Error::LengthMismatch { left: 0, right: 0 })?;
    for e in &ensembles[1..] {
        if e.len() != first.len() {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: e.len(),
            });
        }
        if e.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: e.dim(),
            });
        }
        if e.probabilities()
            .zip(first.probabilities())
            .any(|(p, q)| (p - q).abs() > 1e-12)
        {
            return Err(Error::ProbabilityMismatch);
        }
    }

    let members = (0..first.len())
        .map(|j| {
            let mut state = alloc::vec![ZERO; first.dim()];
            for (c, e) in coeffs.iter().zip(ensembles) {
                for (s, a) in state.iter_mut().zip(&e.members()[j].state) {
                    *s += c * a;
                }
            }
            EnsembleMember {
                state,
                probability: first.members()[j].probability,
            }
        })
        .collect();
    Ensemble::new(members)
}

/// Purification `Σᵢ √pᵢ |φᵢ⟩|φᵢ⟩` over the eigensystem of `rho`, with the
/// reference system a copy of the input space.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = rho.eigensystem()?;
    Ok(purify_with(&eig))
}

pub(crate) fn purify_with(eig: &HermitianEigen) -> PureState {
    let dim = eig.values.len();
    let mut amplitudes = alloc::vec![ZERO; dim * dim];
    let total: f64 = eig.values.iter().sum();
    for (i, &p) in eig.values.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let phi = eig.vector(i);
        let weight = sqrt(p / total);
        for (a, x) in phi.iter().enumerate() {
            for (b, y) in phi.iter().enumerate() {
                amplitudes[a * dim + b] += x * y * weight;
            }
        }
    }
    PureState::from_unit_unchecked(amplitudes)
}

/// `−Σ pᵢ log₂ pᵢ` of a probability vector.
pub(crate) fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| crate::math::entropy_term(p)).sum::<f64>().max(0.0)
}
