//! Dense complex matrices in row-major storage, with the handful of kernels
//! the rest of the crate needs: products, Kronecker products, partial traces
//! and Hermitian eigendecomposition.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum tolerated `‖m − m†‖_max` before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues in `[-PSD_FLOOR, 0)` are rounded up to zero.
pub const PSD_FLOOR: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self += s · other`, shapes must agree.
    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖m − m†‖_max`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, ONE);
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, -ONE);
        out
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Traces out every factor not listed in `keep`.
///
/// `dims` gives the factor dimensions of `m` (first factor most significant);
/// `keep` lists the retained factors in increasing order. An empty `keep`
/// yields the 1×1 matrix holding the full trace.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: total,
        });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidFactors);
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    // Stride of each factor inside the full index.
    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let expand = |index: usize, factors: &[usize]| -> usize {
        let mut rem = index;
        let mut offset = 0;
        for &f in factors.iter().rev() {
            offset += (rem % dims[f]) * strides[f];
            rem /= dims[f];
        }
        offset
    };

    let kept_dim: usize = keep.iter().map(|&f| dims[f]).product();
    let traced_dim: usize = traced.iter().map(|&f| dims[f]).product();
    let kept_offsets: Vec<usize> = (0..kept_dim).map(|i| expand(i, keep)).collect();
    let traced_offsets: Vec<usize> = (0..traced_dim).map(|i| expand(i, &traced)).collect();

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            out[(r, c)] = traced_offsets.iter().map(|&t| m[(ro + t, co + t)]).sum();
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

/// Hermitian eigendecomposition; eigenvalues ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows;
    let sym = nalgebra::DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigendecomposition of a matrix asserted positive semidefinite: values in
/// `[-PSD_FLOOR, 0)` are set to zero, anything more negative is an error.
pub fn eig_psd(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut eig = eig_hermitian(m)?;
    for v in &mut eig.values {
        if *v < -PSD_FLOOR {
            return Err(Error::NotPositive { eigenvalue: *v });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(eig)
}

/// `⟨a|b⟩`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.rows() == b.rows() && a.cols() == b.cols() && a.max_abs_diff(b) <= tol
    }

    #[test]
    fn identity_tensor_identity() {
        assert_eq!(
            tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn diagonal_tensor_by_index_formula() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let b = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert_eq!(
            tensor(&a, &b),
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0])
        );
    }

    #[test]
    fn tensor_shape_for_rectangular_factors() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c((i * 3 + j) as f64, 0.0));
        let b = ComplexMatrix::from_fn(1, 2, |_, j| c(0.0, j as f64 + 1.0));
        let t = tensor(&a, &b);
        assert_eq!((t.rows(), t.cols()), (2, 6));
        assert_eq!(t[(1, 5)], a[(1, 2)] * b[(0, 1)]);
    }

    #[test]
    fn new_rejects_bad_length_and_nan() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ZERO; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn partial_trace_of_bell_state_is_half_identity() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let phi = [c(s, 0.0), ZERO, ZERO, c(s, 0.0)];
        let rho = ComplexMatrix::outer(&phi, &phi);
        let reduced = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert!(approx_eq(
            &reduced,
            &ComplexMatrix::identity(2).scale_real(0.5),
            1e-15
        ));
    }

    #[test]
    fn partial_trace_single_factor_is_identity_map() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        assert_eq!(partial_trace(&m, &[3], &[0]).unwrap(), m);
    }

    #[test]
    fn partial_trace_over_everything_is_trace() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| c((i + 2 * j) as f64, (i * j) as f64));
        let t = partial_trace(&m, &[2, 3], &[]).unwrap();
        assert_eq!(t.rows(), 1);
        assert!((t[(0, 0)] - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_keeps_middle_factor() {
        let a = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c((i + j) as f64, i as f64 - j as f64));
        let d = ComplexMatrix::from_real_diagonal(&[2.0, 1.0]);
        let m = tensor(&tensor(&a, &b), &d);
        let kept = partial_trace(&m, &[2, 3, 2], &[1]).unwrap();
        assert!(approx_eq(&kept, &b.scale_real(3.0), 1e-12));
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 3], &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(partial_trace(&m, &[2, 2], &[2]), Err(Error::InvalidFactors));
        assert_eq!(partial_trace(&m, &[2, 2], &[1, 0]), Err(Error::InvalidFactors));
        assert!(matches!(
            partial_trace(&ComplexMatrix::zeros(2, 3), &[2], &[0]),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn eig_of_diagonal() {
        let eig = eig_hermitian(&ComplexMatrix::from_real_diagonal(&[0.7, 0.3])).unwrap();
        assert!((eig.values[0] - 0.3).abs() < 1e-15);
        assert!((eig.values[1] - 0.7).abs() < 1e-15);
        assert!((eig.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((eig.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_of_dephased_qubit_block() {
        // (1/2)[[1, 1-e],[1-e, 1]] at e = 0.5 has spectrum (1 ± 0.5)/2.
        let m = ComplexMatrix::new(2, 2, vec![c(0.5, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.5, 0.0)])
            .unwrap();
        let eig = eig_hermitian(&m).unwrap();
        assert!((eig.values[0] - 0.25).abs() < 1e-14);
        assert!((eig.values[1] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![ONE, c(1.0, 0.0), ZERO, ONE]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_psd_floors_tiny_negatives() {
        let m = ComplexMatrix::from_real_diagonal(&[-5e-11, 1.0]);
        assert_eq!(eig_psd(&m).unwrap().values, vec![0.0, 1.0]);
        let m = ComplexMatrix::from_real_diagonal(&[-1e-6, 1.0]);
        assert!(matches!(eig_psd(&m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn matmul_shape_error() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
    }
}
