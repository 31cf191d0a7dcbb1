//! Tuples as points of the Hilbert space `M_N^n` with
//! `‖x‖² = (nN)⁻¹ Σ_j tr(x_j^* x_j)`, and the volume bound on separated sets
//! in its unit sphere.

use crate::error::{QexpError, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectral::hs_inner;

#[derive(Debug, Clone, PartialEq)]
pub struct TuplePoint {
    dim: usize,
    matrices: Vec<ComplexMatrix>,
}

impl TuplePoint {
    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_shape(other)?;
        let mut acc = C64::new(0.0, 0.0);
        for (x, y) in self.matrices.iter().zip(&other.matrices) {
            acc += hs_inner(x, y)?;
        }
        Ok(acc / self.scale())
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.matrices.iter().map(|m| m.frobenius_norm().powi(2)).sum();
        (s / self.scale()).sqrt()
    }

    fn scale(&self) -> f64 {
        (self.n() * self.dim) as f64
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.dim != other.dim {
            return Err(QexpError::ShapeMismatch(format!(
                "points have (n, N) = ({}, {}) and ({}, {})",
                self.n(),
                self.dim,
                other.n(),
                other.dim
            )));
        }
        Ok(())
    }
}

/// Embeds the generator images `x_j = π(s_j)` as a point; unitary inputs land
/// on the unit sphere.
pub fn tuple_point(matrices: &[ComplexMatrix], unitarity_tol: f64) -> Result<TuplePoint> {
    let dim = matrices
        .first()
        .ok_or_else(|| QexpError::InvalidParameter("empty tuple".into()))?
        .rows();
    for (index, m) in matrices.iter().enumerate() {
        if !m.is_square() || m.rows() != dim {
            return Err(QexpError::ShapeMismatch(format!(
                "member {index} is {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
        let residual = m.unitarity_residual();
        if residual.is_nan() || residual > unitarity_tol {
            return Err(QexpError::NotUnitary { index, residual });
        }
    }
    Ok(TuplePoint {
        dim,
        matrices: matrices.to_vec(),
    })
}

/// `‖x − y‖` in the normalised Hilbert–Schmidt geometry.
pub fn separation_distance(x: &TuplePoint, y: &TuplePoint) -> Result<f64> {
    x.same_shape(y)?;
    let mut s = 0.0;
    for (a, b) in x.matrices.iter().zip(&y.matrices) {
        s += a.sub(b)?.frobenius_norm().powi(2);
    }
    Ok((s / x.scale()).sqrt())
}

/// Natural log of the volume bound `(1 + 2/δ)^{2nN²}` with `δ = √(2ε)` on the
/// size of a δ-separated subset of the unit sphere of `C^{nN²}`.
pub fn packing_bound_log(n: usize, dim: usize, eps: f64) -> Result<f64> {
    if n == 0 || dim == 0 {
        return Err(QexpError::InvalidParameter("n and dim must be positive".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(QexpError::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let real_dim = 2.0 * (n * dim * dim) as f64;
    let delta = (2.0 * eps).sqrt();
    Ok(real_dim * (2.0 / delta).ln_1p())
}
