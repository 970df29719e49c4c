//! Quantum channels in Kraus form.
//!
//! A channel maps `m ↦ Σₖ Kₖ m Kₖ†` and is trace preserving when
//! `Σₖ Kₖ†Kₖ = I`. Besides the plain action on operators, this module builds
//! the two bipartite states the entropy calculations need:
//!
//! * the joint state, obtained by sending one half of the purification
//!   `Σᵢ √pᵢ |φᵢ⟩|φᵢ⟩` of the input through the channel;
//! * the input/output state `Σᵢ pᵢ 𝒮(|φᵢ⟩⟨φᵢ|) ⊗ |φᵢ⟩⟨φᵢ|`, i.e. the joint
//!   state with its reference factor dephased in the input eigenbasis.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::matrix::{ComplexMatrix, HermitianEigen, ONE, ZERO};
use crate::state::{purify_with, DensityMatrix};

/// Maximum `‖Σ K†K − I‖_max` accepted for a trace-preserving Kraus set.
pub const TRACE_PRESERVING_TOL: f64 = 1e-9;

/// Largest operator dimension `apply_product` works on.
pub const PRODUCT_DIM_CAP: usize = 256;

/// Largest joint (output ⊗ reference) dimension.
pub const JOINT_DIM_CAP: usize = 4096;

/// Completely positive, trace-preserving map given by Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value })
    }
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
}

fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_fn(2, 2, |r, s| match (r, s) {
        (0, 1) => -i,
        (1, 0) => i,
        _ => ZERO,
    })
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

impl QuantumChannel {
    /// Validates shapes and trace preservation.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKraus)?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::EmptyKraus);
        }
        for k in &kraus {
            if k.cols() != dim_in {
                return Err(Error::DimensionMismatch {
                    expected: dim_in,
                    found: k.cols(),
                });
            }
            if k.rows() != dim_out {
                return Err(Error::DimensionMismatch {
                    expected: dim_out,
                    found: k.rows(),
                });
            }
        }
        let mut completeness = ComplexMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            completeness.add_scaled(&(&k.dagger() * k), ONE);
        }
        let deviation = completeness.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if deviation > TRACE_PRESERVING_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    /// The noiseless channel on `dim` levels.
    pub fn identity(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::ParameterOutOfRange {
                name: "dim",
                value: dim as f64,
            });
        }
        Self::new(vec![ComplexMatrix::identity(dim)])
    }

    /// Destroys every off-diagonal element in the computational basis.
    pub fn complete_dephasing(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::ParameterOutOfRange {
                name: "dim",
                value: dim as f64,
            });
        }
        let kraus = (0..dim)
            .map(|i| {
                let mut k = ComplexMatrix::zeros(dim, dim);
                k[(i, i)] = ONE;
                k
            })
            .collect();
        Self::new(kraus)
    }

    /// Qubit channel keeping populations and scaling coherences by `1 − ε`.
    pub fn dephasing(epsilon: f64) -> Result<Self> {
        check_unit_interval("epsilon", epsilon)?;
        let keep = sqrt(1.0 - epsilon);
        let kick = sqrt(epsilon);
        Self::new(vec![
            ComplexMatrix::identity(2).scale_real(keep),
            ComplexMatrix::from_real_diagonal(&[kick, 0.0]),
            ComplexMatrix::from_real_diagonal(&[0.0, kick]),
        ])
    }

    /// Qubit channel replacing the state by `I/2` with probability `η`:
    /// `ρ ↦ (1 − η)ρ + η I/2`.
    pub fn depolarizing(eta: f64) -> Result<Self> {
        check_unit_interval("eta", eta)?;
        let pauli_weight = sqrt(eta / 4.0);
        Self::new(vec![
            ComplexMatrix::identity(2).scale_real(sqrt(1.0 - 0.75 * eta)),
            pauli_x().scale_real(pauli_weight),
            pauli_y().scale_real(pauli_weight),
            pauli_z().scale_real(pauli_weight),
        ])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    fn check_input(&self, m: &ComplexMatrix) -> Result<()> {
        if m.rows() != self.dim_in || m.cols() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: if m.rows() != self.dim_in { m.rows() } else { m.cols() },
            });
        }
        Ok(())
    }

    /// `Σₖ Kₖ m Kₖ†` for any `dim_in × dim_in` operator.
    pub fn apply(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(m)?;
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            let km = k * m;
            out.add_scaled(&(&km * &k.dagger()), ONE);
        }
        Ok(out)
    }

    /// Channel output of a density matrix.
    pub fn output_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_matrix_unchecked(self.apply(rho.matrix())?))
    }

    /// Choi matrix `Σᵢⱼ 𝒮(|i⟩⟨j|) ⊗ |i⟩⟨j|`; two Kraus sets describe the same
    /// channel exactly when their Choi matrices agree.
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim_in;
        let mut out = ComplexMatrix::zeros(self.dim_out * d, self.dim_out * d);
        for k in &self.kraus {
            // Column (a, i) of the vectorized Kraus operator: K[a, i].
            let v: Vec<Complex64> = (0..self.dim_out)
                .flat_map(|a| (0..d).map(move |i| (a, i)))
                .map(|(a, i)| k[(a, i)])
                .collect();
            out.add_scaled(&ComplexMatrix::outer(&v, &v), ONE);
        }
        out
    }

    fn check_joint_size(&self) -> Result<()> {
        let size = self.dim_out * self.dim_in;
        if size > JOINT_DIM_CAP {
            return Err(Error::SizeCap {
                what: "joint state",
                size,
                cap: JOINT_DIM_CAP,
            });
        }
        Ok(())
    }

    /// `(𝒮 ⊗ id)(|Φ⟩⟨Φ|)` for the purification `|Φ⟩ = Σᵢ √pᵢ |φᵢ⟩|φᵢ⟩` of
    /// `rho_in`. Factor 0 is the channel output, factor 1 the reference.
    pub fn joint_state(&self, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho_in.matrix())?;
        self.check_joint_size()?;
        let eig = rho_in.eigensystem()?;
        Ok(self.joint_state_with(&eig))
    }

    pub(crate) fn joint_state_with(&self, eig: &HermitianEigen) -> DensityMatrix {
        let phi = purify_with(eig);
        let amps = phi.amplitudes();
        let (d_in, d_out) = (self.dim_in, self.dim_out);
        let joint_dim = d_out * d_in;
        let mut out = ComplexMatrix::zeros(joint_dim, joint_dim);
        for k in &self.kraus {
            // (K ⊗ I)|Φ⟩: amplitude (a, r) = Σₓ K[a, x] Φ[x, r].
            let mut v = vec![ZERO; joint_dim];
            for a in 0..d_out {
                for x in 0..d_in {
                    let kax = k[(a, x)];
                    if kax == ZERO {
                        continue;
                    }
                    for r in 0..d_in {
                        v[a * d_in + r] += kax * amps[x * d_in + r];
                    }
                }
            }
            out.add_scaled(&ComplexMatrix::outer(&v, &v), ONE);
        }
        DensityMatrix::from_matrix_unchecked(out)
    }

    /// `Σᵢ pᵢ 𝒮(|φᵢ⟩⟨φᵢ|) ⊗ |φᵢ⟩⟨φᵢ|` over the eigensystem of `rho_in`.
    pub fn io_state(&self, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho_in.matrix())?;
        self.check_joint_size()?;
        let eig = rho_in.eigensystem()?;
        self.io_state_with(&eig)
    }

    pub(crate) fn io_state_with(&self, eig: &HermitianEigen) -> Result<DensityMatrix> {
        let joint_dim = self.dim_out * self.dim_in;
        let mut out = ComplexMatrix::zeros(joint_dim, joint_dim);
        let total: f64 = eig.values.iter().sum();
        for (i, &p) in eig.values.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            let phi = eig.vector(i);
            let proj = ComplexMatrix::outer(&phi, &phi);
            let sent = self.apply(&proj)?;
            out.add_scaled(&crate::matrix::tensor(&sent, &proj), c(p / total));
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// Applies the channel independently to each of the `n` tensor factors of
    /// an operator on `dim_inⁿ` (linear extension; any operator is accepted).
    pub fn apply_product_matrix(&self, m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "n",
                value: 0.0,
            });
        }
        let size = checked_pow(self.dim_in, n).unwrap_or(usize::MAX);
        let out_size = checked_pow(self.dim_out, n).unwrap_or(usize::MAX);
        if size.max(out_size) > PRODUCT_DIM_CAP {
            return Err(Error::SizeCap {
                what: "product operator",
                size: size.max(out_size),
                cap: PRODUCT_DIM_CAP,
            });
        }
        if !m.is_square() || m.rows() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: m.rows(),
            });
        }
        let mut dims = vec![self.dim_in; n];
        let mut current = m.clone();
        for site in 0..n {
            current = self.apply_on_site(&current, &dims, site);
            dims[site] = self.dim_out;
        }
        Ok(current)
    }

    /// `(𝒮 ⊗ … ⊗ 𝒮)(ρ)` for a state on `n` copies of the input space.
    pub fn apply_product(&self, rho: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_matrix_unchecked(
            self.apply_product_matrix(rho.matrix(), n)?,
        ))
    }

    /// `Σₖ (I ⊗ Kₖ ⊗ I) m (I ⊗ Kₖ ⊗ I)†` with `Kₖ` acting on factor `site`.
    fn apply_on_site(&self, m: &ComplexMatrix, dims: &[usize], site: usize) -> ComplexMatrix {
        let left: usize = dims[..site].iter().product();
        let right: usize = dims[site + 1..].iter().product();
        let (d_in, d_out) = (self.dim_in, self.dim_out);
        let rows_in = left * d_in * right;
        let rows_out = left * d_out * right;
        let idx_in = |a: usize, x: usize, b: usize| (a * d_in + x) * right + b;
        let idx_out = |a: usize, y: usize, b: usize| (a * d_out + y) * right + b;

        let mut out = ComplexMatrix::zeros(rows_out, rows_out);
        let mut half = ComplexMatrix::zeros(rows_out, rows_in);
        for k in &self.kraus {
            // half = (I ⊗ K ⊗ I) m
            for a in 0..left {
                for b in 0..right {
                    for y in 0..d_out {
                        let row = idx_out(a, y, b);
                        for col in 0..rows_in {
                            let mut acc = ZERO;
                            for x in 0..d_in {
                                acc += k[(y, x)] * m[(idx_in(a, x, b), col)];
                            }
                            half[(row, col)] = acc;
                        }
                    }
                }
            }
            // out += half (I ⊗ K† ⊗ I)
            for row in 0..rows_out {
                for a in 0..left {
                    for b in 0..right {
                        for y in 0..d_out {
                            let mut acc = ZERO;
                            for x in 0..d_in {
                                acc += half[(row, idx_in(a, x, b))] * k[(y, x)].conj();
                            }
                            out[(row, idx_out(a, y, b))] += acc;
                        }
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{partial_trace, tensor};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_qubit_state() -> DensityMatrix {
        DensityMatrix::new(
            ComplexMatrix::new(2, 2, vec![cx(0.6, 0.0), cx(0.2, -0.1), cx(0.2, 0.1), cx(0.4, 0.0)])
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_channel_is_noop() {
        let rho = sample_qubit_state();
        let out = QuantumChannel::identity(2).unwrap().apply(rho.matrix()).unwrap();
        assert!(out.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn complete_dephasing_kills_coherences() {
        let m = ComplexMatrix::new(2, 2, vec![cx(1.0, 0.0), cx(2.0, 1.0), cx(3.0, 0.0), cx(4.0, 0.0)])
            .unwrap();
        let out = QuantumChannel::complete_dephasing(2).unwrap().apply(&m).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[1.0, 4.0]);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dephasing_scales_off_diagonal_dyad() {
        for eps in [0.0, 0.1, 0.5, 1.0] {
            let ch = QuantumChannel::dephasing(eps).unwrap();
            let dyad = ComplexMatrix::outer(&[ONE, ZERO], &[ZERO, ONE]);
            let out = ch.apply(&dyad).unwrap();
            assert!(out.max_abs_diff(&dyad.scale_real(1.0 - eps)) < 1e-15);
        }
    }

    #[test]
    fn dephasing_zero_equals_identity_on_basis() {
        let ch = QuantumChannel::dephasing(0.0).unwrap();
        let id = QuantumChannel::identity(2).unwrap();
        assert!(ch.choi().max_abs_diff(&id.choi()) < 1e-15);
    }

    #[test]
    fn depolarizing_matches_mixture_formula() {
        let rho = sample_qubit_state();
        for eta in [0.0, 0.1, 0.6, 1.0] {
            let out = QuantumChannel::depolarizing(eta)
                .unwrap()
                .apply(rho.matrix())
                .unwrap();
            let mut expected = rho.matrix().scale_real(1.0 - eta);
            expected.add_scaled(&ComplexMatrix::identity(2), cx(eta / 2.0, 0.0));
            assert!(out.max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn builtin_parameter_ranges() {
        assert!(matches!(
            QuantumChannel::depolarizing(1.5),
            Err(Error::ParameterOutOfRange { name: "eta", .. })
        ));
        assert!(QuantumChannel::dephasing(-0.1).is_err());
        assert!(QuantumChannel::identity(1).is_err());
        assert!(QuantumChannel::complete_dephasing(1).is_err());
        assert!(QuantumChannel::depolarizing(f64::NAN).is_err());
    }

    #[test]
    fn rejects_non_trace_preserving_kraus() {
        let k = ComplexMatrix::identity(2).scale_real(0.9);
        assert!(matches!(
            QuantumChannel::new(vec![k]),
            Err(Error::NotTracePreserving { .. })
        ));
        assert_eq!(QuantumChannel::new(vec![]), Err(Error::EmptyKraus));
    }

    #[test]
    fn rejects_mismatched_kraus_shapes() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::zeros(3, 2);
        assert!(matches!(
            QuantumChannel::new(vec![a, b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_dimension_mismatch() {
        let ch = QuantumChannel::identity(2).unwrap();
        assert!(ch.apply(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn rectangular_channel_trace_out_to_fixed_state() {
        // Qubit → qutrit channel that discards the input and prepares |2⟩.
        let kraus = (0..2)
            .map(|i| {
                let mut k = ComplexMatrix::zeros(3, 2);
                k[(2, i)] = ONE;
                k
            })
            .collect();
        let ch = QuantumChannel::new(kraus).unwrap();
        let out = ch.apply(sample_qubit_state().matrix()).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0])) < 1e-15);
        let prod = ch
            .apply_product_matrix(&tensor(sample_qubit_state().matrix(), sample_qubit_state().matrix()), 2)
            .unwrap();
        assert_eq!(prod.rows(), 9);
        assert!((prod[(8, 8)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn joint_state_identity_on_maximally_mixed_is_bell() {
        let joint = QuantumChannel::identity(2)
            .unwrap()
            .joint_state(&DensityMatrix::maximally_mixed(2))
            .unwrap();
        // A pure maximally entangled state: purity 1 and both marginals I/2.
        let purity = joint.matrix().trace_of_product(joint.matrix()).re;
        assert!((purity - 1.0).abs() < 1e-12);
        for keep in [0, 1] {
            let m = partial_trace(joint.matrix(), &[2, 2], &[keep]).unwrap();
            assert!(m.max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
        }
    }

    #[test]
    fn joint_state_of_depolarizing_matches_closed_form() {
        // Purification basis may differ from |i⟩|i⟩; compare spectra and
        // the basis-independent quantity tr(ρ²).
        for eta in [0.1, 0.25, 0.5] {
            let joint = QuantumChannel::depolarizing(eta)
                .unwrap()
                .joint_state(&DensityMatrix::maximally_mixed(2))
                .unwrap();
            let mut spec = joint.spectrum().unwrap();
            spec.sort_by(f64::total_cmp);
            let mut expected = [eta / 4.0, eta / 4.0, eta / 4.0, 1.0 - 0.75 * eta];
            expected.sort_by(f64::total_cmp);
            for (a, b) in spec.iter().zip(expected) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn io_state_identity_channel() {
        let io = QuantumChannel::identity(2)
            .unwrap()
            .io_state(&DensityMatrix::diagonal(&[0.5, 0.5]).unwrap())
            .unwrap();
        let m = io.matrix();
        assert!((m.trace().re - 1.0).abs() < 1e-12);
        // Rank-two mixture of |ii⟩ projectors in some eigenbasis: purity 1/2.
        assert!((m.trace_of_product(m).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn apply_product_base_and_factorization() {
        let ch = QuantumChannel::depolarizing(0.3).unwrap();
        let rho = sample_qubit_state();
        let single = ch.apply_product(&rho, 1).unwrap();
        assert!(single.matrix().max_abs_diff(&ch.apply(rho.matrix()).unwrap()) < 1e-15);

        let pair = ch.apply_product(&rho.tensor(&rho), 2).unwrap();
        let out = ch.apply(rho.matrix()).unwrap();
        assert!(pair.matrix().max_abs_diff(&tensor(&out, &out)) < 1e-14);
    }

    #[test]
    fn apply_product_caps() {
        let ch = QuantumChannel::identity(2).unwrap();
        let big = DensityMatrix::maximally_mixed(512);
        assert!(matches!(
            ch.apply_product(&big, 9),
            Err(Error::SizeCap { .. })
        ));
        assert!(matches!(
            ch.apply_product(&DensityMatrix::maximally_mixed(4), 3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ch.apply_product(&DensityMatrix::maximally_mixed(2), 0).is_err());
    }
}
