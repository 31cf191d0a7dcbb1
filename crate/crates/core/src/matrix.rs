//! Dense complex matrices stored row-major.
//!
//! `Complex64` is `repr(C)`, so the backing vector is an interleaved
//! `[re, im, re, im, ...]` buffer. Decompositions (Hermitian eigensolve,
//! SVD, QR) are delegated to `nalgebra` through [`ComplexMatrix::to_dmatrix`].

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QexpError, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
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

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a row-major buffer, rejecting size mismatches and
    /// non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QexpError::ShapeMismatch(format!(
                "matrix must have positive shape, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(QexpError::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QexpError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(QexpError::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// The matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(i, j)] = ONE;
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::from_vec(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// Permutation matrix sending basis vector `e_x` to `e_{perm[x]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let d = perm.len();
        let mut m = Self::zeros(d, d);
        for (x, &y) in perm.iter().enumerate() {
            m[(y, x)] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(C64::conj).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: C64, other: &Self) -> Result<()> {
        self.same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(QexpError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        matmul_into(self, other, &mut out);
        Ok(out)
    }

    /// `self * other^†` without forming the adjoint.
    pub fn matmul_adjoint(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(QexpError::ShapeMismatch(format!(
                "cannot multiply {}x{} by adjoint of {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.rows);
        matmul_adjoint_into(self, other, &mut out);
        Ok(out)
    }

    /// Kronecker product, row-major: `(a ⊗ b)[(i*p + k, j*q + l)] = a[i,j] b[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |r, c| {
            self[(r / p, c / q)] * other[(r % p, c % q)]
        })
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Extracts the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// `‖U^†U − I‖_F`, or infinity for non-square input.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut g = Self::zeros(self.cols, self.cols);
        // (U^†U)_{ij} = Σ_k conj(U_ki) U_kj
        for k in 0..self.rows {
            let row = self.row(k);
            for i in 0..self.cols {
                let a = row[i].conj();
                for j in 0..self.cols {
                    g[(i, j)] += a * row[j];
                }
            }
        }
        for i in 0..self.cols {
            g[(i, i)] -= ONE;
        }
        g.frobenius_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_dmatrix(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QexpError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `out = a * b`; shapes are the caller's responsibility.
pub(crate) fn matmul_into(a: &ComplexMatrix, b: &ComplexMatrix, out: &mut ComplexMatrix) {
    out.data.iter_mut().for_each(|z| *z = ZERO);
    let n = b.cols;
    for i in 0..a.rows {
        let out_row = &mut out.data[i * n..(i + 1) * n];
        for (k, &aik) in a.row(i).iter().enumerate() {
            if aik == ZERO {
                continue;
            }
            for (o, &bkj) in out_row.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
}

/// `out = a * b^†`; shapes are the caller's responsibility.
pub(crate) fn matmul_adjoint_into(a: &ComplexMatrix, b: &ComplexMatrix, out: &mut ComplexMatrix) {
    let n = b.rows;
    for i in 0..a.rows {
        let ar = a.row(i);
        for j in 0..n {
            out.data[i * n + j] = ar.iter().zip(b.row(j)).map(|(x, y)| x * y.conj()).sum();
        }
    }
}

/// `out = a^† * b`; shapes are the caller's responsibility.
pub(crate) fn adjoint_matmul_into(a: &ComplexMatrix, b: &ComplexMatrix, out: &mut ComplexMatrix) {
    out.data.iter_mut().for_each(|z| *z = ZERO);
    let n = b.cols;
    for k in 0..a.rows {
        let br = b.row(k);
        for (i, &aki) in a.row(k).iter().enumerate() {
            let c = aki.conj();
            if c == ZERO {
                continue;
            }
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (o, &bkj) in out_row.iter_mut().zip(br) {
                *o += c * bkj;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_are_unitary_and_anticommute() {
        let (x, y, z) = (
            ComplexMatrix::pauli_x(),
            ComplexMatrix::pauli_y(),
            ComplexMatrix::pauli_z(),
        );
        for p in [&x, &y, &z] {
            assert!(p.unitarity_residual() < 1e-15);
        }
        let xy = x.matmul(&y).unwrap();
        let iz = z.scale(C64::new(0.0, 1.0));
        assert!(xy.sub(&iz).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn matmul_adjoint_matches_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| C64::new(i as f64, j as f64 + 1.0));
        let b = ComplexMatrix::from_fn(4, 2, |i, j| C64::new(j as f64 - i as f64, 0.5));
        let lhs = a.matmul_adjoint(&b).unwrap();
        let rhs = a.matmul(&b.adjoint()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() < 1e-12);

        let mut out = ComplexMatrix::zeros(2, 2);
        adjoint_matmul_into(&a, &a, &mut out);
        let rhs = a.adjoint().matmul(&a).unwrap();
        assert!(out.sub(&rhs).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn kron_layout_is_row_major() {
        let a = ComplexMatrix::pauli_x();
        let b = ComplexMatrix::pauli_z();
        let k = a.kron(&b);
        assert_eq!(k[(0, 2)], ONE);
        assert_eq!(k[(1, 3)], -ONE);
        assert_eq!(k[(0, 0)], ZERO);
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::from_vec(2, 2, vec![ONE; 3]),
            Err(QexpError::ShapeMismatch(_))
        ));
        assert_eq!(
            ComplexMatrix::from_vec(1, 1, vec![C64::new(f64::NAN, 0.0)]),
            Err(QexpError::NonFinite)
        );
    }

    #[test]
    fn permutation_matrix_maps_basis_vectors() {
        let p = ComplexMatrix::permutation(&[2, 0, 1]);
        assert_eq!(p[(2, 0)], ONE);
        assert_eq!(p[(0, 1)], ONE);
        assert!(p.is_unitary(1e-15));
    }
}
