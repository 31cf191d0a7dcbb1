//! Superoperators `x ↦ Σ_j u_j x v_j^†` on Hilbert–Schmidt space and the gap,
//! norm, and intertwiner computations built on them.
//!
//! Row-major vectorisation identifies `x ↦ u x v^†` with `u ⊗ conj(v)`, so the
//! dense routes materialise `Σ_j u_j ⊗ conj(v_j)` while the iterative routes
//! only ever touch `N x N` matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::matrix::{adjoint_matmul_into, matmul_adjoint_into, matmul_into, ComplexMatrix, C64, ONE, ZERO};
use crate::solver::{
    columns_to_dmatrix, dense_top, dense_top_on, householder_complement, kernel_split, nullity, power_iteration,
    Estimate, Method, SolverOptions, SpectralReport,
};
use crate::tuple::UnitaryTuple;

/// `tr(y^† x)`.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
    if !x.is_square() || x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(QexpError::ShapeMismatch(format!(
            "hs_inner needs equal square shapes, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| b.conj() * a).sum())
}

/// `Σ_j u_j x v_j^†`, never forming the `N² x N²` matrix.
pub fn apply_superop(u: &UnitaryTuple, v: &UnitaryTuple, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_pair(u, v)?;
    if !x.is_square() || x.rows() != u.dim() {
        return Err(QexpError::ShapeMismatch(format!(
            "operand is {}x{}, tuple dimension is {}",
            x.rows(),
            x.cols(),
            u.dim()
        )));
    }
    let d = u.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    let mut scratch = Scratch::new(d);
    superop_accumulate(u.matrices(), v.matrices(), x, &mut out, &mut scratch);
    Ok(out)
}

/// Dense `Σ_j u_j ⊗ conj(v_j)`, the matrix of `x ↦ Σ u_j x v_j^†` in the
/// row-major vectorisation.
pub fn superop_matrix(u: &UnitaryTuple, v: &UnitaryTuple) -> Result<DMatrix<C64>> {
    check_pair(u, v)?;
    let d2 = u.dim() * u.dim();
    let mut m = DMatrix::zeros(d2, d2);
    for (a, b) in u.matrices().iter().zip(v.matrices()) {
        m += a.kron(&b.conj()).to_dmatrix();
    }
    Ok(m)
}

/// `λ(u)`: the top of the Hermitian part of `n⁻¹ Σ u_j · u_j^†` on the
/// trace-zero matrices, and `ε(u) = 1 − λ(u)`.
pub fn lambda_gap(u: &UnitaryTuple, opts: &SolverOptions) -> Result<SpectralReport> {
    opts.validate()?;
    let d = u.dim();
    if d < 2 {
        return Err(QexpError::DegenerateDimension);
    }
    let n = u.n() as f64;
    match opts.method_for(d * d) {
        Method::Dense => {
            let m = superop_matrix(u, u)?;
            let mut vec_identity = vec![0.0; d * d];
            for i in 0..d {
                vec_identity[i * d + i] = 1.0 / (d as f64).sqrt();
            }
            let basis = columns_to_dmatrix(d * d, &householder_complement(&vec_identity));
            let est = dense_top_on(&m, &basis);
            Ok(SpectralReport::new(est.value / n, Method::Dense, 0, est.residual / n))
        }
        Method::Iterative => {
            let ms = u.matrices();
            let mut scratch = Scratch::new(d);
            let mut x = ComplexMatrix::zeros(d, d);
            let mut y = ComplexMatrix::zeros(d, d);
            let apply = |src: &[C64], dst: &mut [C64]| {
                x.as_mut_slice().copy_from_slice(src);
                y.as_mut_slice().iter_mut().for_each(|z| *z = ZERO);
                superop_accumulate(ms, ms, &x, &mut y, &mut scratch);
                adjoint_superop_accumulate(ms, ms, &x, &mut y, &mut scratch);
                let s = 0.5 / n;
                for ((o, &a), &b) in dst.iter_mut().zip(y.as_slice()).zip(src) {
                    *o = a * s + b;
                }
            };
            let project = |z: &mut [C64]| {
                let tr: C64 = (0..d).map(|i| z[i * d + i]).sum();
                let shift = tr / d as f64;
                for i in 0..d {
                    z[i * d + i] -= shift;
                }
            };
            let est = power_iteration(d * d, apply, project, opts)?;
            Ok(shifted_report(est))
        }
    }
}

/// `λ(π, S)`: the top of the Hermitian part of `n⁻¹ Σ_s π(s)` on the
/// orthogonal complement of the jointly fixed vectors. When every vector is
/// fixed the supremum is empty and `lambda` is clamped to −1.
pub fn rep_gap(matrices: &[ComplexMatrix], opts: &SolverOptions) -> Result<SpectralReport> {
    opts.validate()?;
    let d = check_rep(matrices, opts.unitarity_tol)?;
    let n = matrices.len() as f64;
    let method = opts.method_for(d);

    let ident = DMatrix::<C64>::identity(d, d);
    let mut stacked = DMatrix::zeros(matrices.len() * d, d);
    let mut sum = DMatrix::zeros(d, d);
    for (k, m) in matrices.iter().enumerate() {
        let dm = m.to_dmatrix();
        stacked.view_mut((k * d, 0), (d, d)).copy_from(&(&dm - &ident));
        sum += dm;
    }
    let (fixed, moving) = kernel_split(&stacked, opts.fixed_tol);
    if moving.ncols() == 0 {
        return Ok(SpectralReport::clamped(method));
    }
    match method {
        Method::Dense => {
            let est = dense_top_on(&sum, &moving);
            Ok(SpectralReport::new(est.value / n, Method::Dense, 0, est.residual / n))
        }
        Method::Iterative => {
            let herm = (&sum + sum.adjoint()) * C64::new(0.5 / n, 0.0);
            let apply = |src: &[C64], dst: &mut [C64]| {
                for (i, o) in dst.iter_mut().enumerate() {
                    let row: C64 = herm.row(i).iter().zip(src).map(|(a, b)| a * b).sum();
                    *o = row + src[i];
                }
            };
            let project = |z: &mut [C64]| project_out(&fixed, z);
            let est = power_iteration(d, apply, project, opts)?;
            Ok(shifted_report(est))
        }
    }
}

/// Operator norm of `x ↦ Σ u_j x v_j^†` with solver diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
}

/// `‖Σ_j u_j ⊗ conj(v_j)‖`, the operator norm on Hilbert–Schmidt space.
pub fn pair_norm(u: &UnitaryTuple, v: &UnitaryTuple, opts: &SolverOptions) -> Result<f64> {
    pair_norm_report(u, v, opts).map(|r| r.value)
}

pub fn pair_norm_report(u: &UnitaryTuple, v: &UnitaryTuple, opts: &SolverOptions) -> Result<NormReport> {
    opts.validate()?;
    check_pair(u, v)?;
    let d = u.dim();
    let n = u.n() as f64;
    match opts.method_for(d * d) {
        Method::Dense => {
            let m = superop_matrix(u, v)?;
            let value = m.singular_values().iter().copied().fold(0.0, f64::max);
            Ok(NormReport {
                value,
                method: Method::Dense,
                iterations: 0,
                residual: 0.0,
            })
        }
        Method::Iterative => {
            let (us, vs) = (u.matrices(), v.matrices());
            let mut scratch = Scratch::new(d);
            let mut x = ComplexMatrix::zeros(d, d);
            let mut y = ComplexMatrix::zeros(d, d);
            let mut z = ComplexMatrix::zeros(d, d);
            let scale = 1.0 / (n * n);
            // Φ^†Φ / n², spectrum in [0, 1]
            let apply = |src: &[C64], dst: &mut [C64]| {
                x.as_mut_slice().copy_from_slice(src);
                y.as_mut_slice().iter_mut().for_each(|c| *c = ZERO);
                z.as_mut_slice().iter_mut().for_each(|c| *c = ZERO);
                superop_accumulate(us, vs, &x, &mut y, &mut scratch);
                adjoint_superop_accumulate(us, vs, &y, &mut z, &mut scratch);
                for (o, &a) in dst.iter_mut().zip(z.as_slice()) {
                    *o = a * scale;
                }
            };
            let est = power_iteration(d * d, apply, |_| {}, opts)?;
            Ok(NormReport {
                value: n * est.value.max(0.0).sqrt(),
                method: Method::Iterative,
                iterations: est.iterations,
                residual: est.residual,
            })
        }
    }
}

/// Dimension of `{x : u_j x = x v_j for all j}`.
pub fn intertwiner_dim(u: &UnitaryTuple, v: &UnitaryTuple, fixed_tol: f64) -> Result<usize> {
    intertwiner_dim_of(u.matrices(), v.matrices(), fixed_tol)
}

/// `intertwiner_dim(u, u)`; equals 1 exactly when the tuple acts irreducibly.
pub fn commutant_dim(u: &UnitaryTuple, fixed_tol: f64) -> Result<usize> {
    intertwiner_dim(u, u, fixed_tol)
}

/// Intertwiner dimension for arbitrary square matrix lists of possibly
/// different sizes; the unknown `x` is `dim(u) x dim(v)`.
pub fn intertwiner_dim_of(u: &[ComplexMatrix], v: &[ComplexMatrix], fixed_tol: f64) -> Result<usize> {
    if u.len() != v.len() || u.is_empty() {
        return Err(QexpError::ShapeMismatch(format!(
            "tuple lengths {} and {} differ or are zero",
            u.len(),
            v.len()
        )));
    }
    let (p, q) = (u[0].rows(), v[0].rows());
    if u.iter().any(|m| !m.is_square() || m.rows() != p) || v.iter().any(|m| !m.is_square() || m.rows() != q) {
        return Err(QexpError::ShapeMismatch("mixed member dimensions".into()));
    }
    let unknowns = p * q;
    let ip = ComplexMatrix::identity(p);
    let iq = ComplexMatrix::identity(q);
    let mut stacked = DMatrix::zeros(u.len() * unknowns, unknowns);
    for (k, (a, b)) in u.iter().zip(v).enumerate() {
        // vec(a x − x b) = (a ⊗ I − I ⊗ bᵀ) vec(x)
        let block = a.kron(&iq).sub(&ip.kron(&b.transpose()))?.to_dmatrix();
        stacked
            .view_mut((k * unknowns, 0), (unknowns, unknowns))
            .copy_from(&block);
    }
    Ok(nullity(&stacked, fixed_tol))
}

/// Largest eigenvalue of the Hermitian part of a dense matrix, for callers
/// that assemble their own operators.
pub fn dense_hermitian_top(h: &DMatrix<C64>) -> f64 {
    dense_top(h).value
}

fn shifted_report(est: Estimate) -> SpectralReport {
    SpectralReport::new(est.value - 1.0, Method::Iterative, est.iterations, est.residual)
}

fn project_out(basis: &DMatrix<C64>, z: &mut [C64]) {
    for col in basis.column_iter() {
        let c: C64 = col.iter().zip(z.iter()).map(|(a, b)| a.conj() * b).sum();
        for (zi, a) in z.iter_mut().zip(col.iter()) {
            *zi -= c * a;
        }
    }
}

fn check_pair(u: &UnitaryTuple, v: &UnitaryTuple) -> Result<()> {
    if u.n() != v.n() || u.dim() != v.dim() {
        return Err(QexpError::ShapeMismatch(format!(
            "tuples have (n, dim) = ({}, {}) and ({}, {})",
            u.n(),
            u.dim(),
            v.n(),
            v.dim()
        )));
    }
    Ok(())
}

pub(crate) fn check_rep(matrices: &[ComplexMatrix], tol: f64) -> Result<usize> {
    let d = matrices
        .first()
        .ok_or_else(|| QexpError::InvalidParameter("representation needs at least one generator".into()))?
        .rows();
    for (index, m) in matrices.iter().enumerate() {
        if !m.is_square() || m.rows() != d {
            return Err(QexpError::ShapeMismatch(format!("generator image {index} is not {d}x{d}")));
        }
        let residual = m.unitarity_residual();
        if residual.is_nan() || residual > tol {
            return Err(QexpError::NotUnitary { index, residual });
        }
    }
    Ok(d)
}

struct Scratch {
    t1: ComplexMatrix,
    t2: ComplexMatrix,
}

impl Scratch {
    fn new(d: usize) -> Self {
        Self {
            t1: ComplexMatrix::zeros(d, d),
            t2: ComplexMatrix::zeros(d, d),
        }
    }
}

/// `out += Σ_j u_j x v_j^†`
fn superop_accumulate(
    us: &[ComplexMatrix],
    vs: &[ComplexMatrix],
    x: &ComplexMatrix,
    out: &mut ComplexMatrix,
    s: &mut Scratch,
) {
    for (u, v) in us.iter().zip(vs) {
        matmul_into(u, x, &mut s.t1);
        matmul_adjoint_into(&s.t1, v, &mut s.t2);
        out.axpy(ONE, &s.t2).expect("scratch shapes agree");
    }
}

/// `out += Σ_j u_j^† x v_j`, the Hilbert–Schmidt adjoint of the above.
fn adjoint_superop_accumulate(
    us: &[ComplexMatrix],
    vs: &[ComplexMatrix],
    x: &ComplexMatrix,
    out: &mut ComplexMatrix,
    s: &mut Scratch,
) {
    for (u, v) in us.iter().zip(vs) {
        adjoint_matmul_into(u, x, &mut s.t1);
        matmul_into(&s.t1, v, &mut s.t2);
        out.axpy(ONE, &s.t2).expect("scratch shapes agree");
    }
}
