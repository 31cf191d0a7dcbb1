//! Solver configuration, spectral reports, and the two eigen-routes used by
//! every gap computation: matrix-free power iteration and a dense Hermitian
//! eigendecomposition used as ground truth at small sizes.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::matrix::{C64, ZERO};
use crate::tuple::DEFAULT_UNITARITY_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

/// Which eigen-route to take. `Auto` goes dense when the operator dimension
/// is at most `dense_threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    #[default]
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub convergence_tol: f64,
    pub max_iterations: usize,
    /// Largest operator dimension handled by the dense route under `Auto`.
    pub dense_threshold: usize,
    pub seed: u64,
    pub method: MethodChoice,
    pub unitarity_tol: f64,
    /// Singular values at or below this are treated as zero in rank decisions.
    pub fixed_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            convergence_tol: 1e-9,
            max_iterations: 100_000,
            dense_threshold: 256,
            seed: 0,
            method: MethodChoice::Auto,
            unitarity_tol: DEFAULT_UNITARITY_TOL,
            fixed_tol: 1e-8,
        }
    }
}

impl SolverOptions {
    pub fn dense() -> Self {
        Self {
            method: MethodChoice::Dense,
            ..Self::default()
        }
    }

    pub fn iterative() -> Self {
        Self {
            method: MethodChoice::Iterative,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("convergence_tol", self.convergence_tol),
            ("unitarity_tol", self.unitarity_tol),
            ("fixed_tol", self.fixed_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(QexpError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(QexpError::InvalidParameter("max_iterations must be positive".into()));
        }
        Ok(())
    }

    pub fn method_for(&self, operator_dim: usize) -> Method {
        match self.method {
            MethodChoice::Dense => Method::Dense,
            MethodChoice::Iterative => Method::Iterative,
            MethodChoice::Auto if operator_dim <= self.dense_threshold => Method::Dense,
            MethodChoice::Auto => Method::Iterative,
        }
    }
}

/// Outcome of a gap computation. `epsilon` is always `1 - lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
    /// Set when the deflated subspace was empty and `lambda` was clamped to -1.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub clamped: bool,
}

impl SpectralReport {
    pub(crate) fn new(lambda: f64, method: Method, iterations: usize, residual: f64) -> Self {
        Self {
            lambda,
            epsilon: 1.0 - lambda,
            method,
            iterations,
            residual,
            clamped: false,
        }
    }

    pub(crate) fn clamped(method: Method) -> Self {
        Self {
            clamped: true,
            ..Self::new(-1.0, method, 0, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
}

const STAGNATION_WINDOW: usize = 5_000;

/// Power iteration for the top eigenvalue of a Hermitian positive
/// semi-definite operator, with `project` re-applied every step to keep the
/// iterate inside the target subspace.
pub(crate) fn power_iteration<A, P>(
    len: usize,
    mut apply: A,
    project: P,
    opts: &SolverOptions,
) -> Result<Estimate>
where
    A: FnMut(&[C64], &mut [C64]),
    P: Fn(&mut [C64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = vec![ZERO; len];
    let mut y = vec![ZERO; len];
    restart(&mut rng, &mut x, &project);

    let mut best = f64::INFINITY;
    let mut last_improvement = 0;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        apply(&x, &mut y);
        project(&mut y);
        let theta: f64 = x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum();
        residual = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - a * theta).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual < opts.convergence_tol {
            return Ok(Estimate {
                value: theta,
                iterations: it,
                residual,
            });
        }
        if residual < best * (1.0 - 1e-3) {
            best = residual;
            last_improvement = it;
        } else if it - last_improvement > STAGNATION_WINDOW {
            restart(&mut rng, &mut x, &project);
            best = f64::INFINITY;
            last_improvement = it;
            continue;
        }
        let norm = l2_norm(&y);
        if norm == 0.0 {
            restart(&mut rng, &mut x, &project);
            continue;
        }
        for (a, b) in x.iter_mut().zip(&y) {
            *a = b / norm;
        }
    }
    Err(QexpError::NoConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

fn restart<P: Fn(&mut [C64])>(rng: &mut ChaCha8Rng, x: &mut [C64], project: &P) {
    for _ in 0..8 {
        for z in x.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *z = C64::new(re, im);
        }
        project(x);
        let norm = l2_norm(x);
        if norm > 1e-12 {
            x.iter_mut().for_each(|z| *z /= norm);
            return;
        }
    }
}

pub(crate) fn l2_norm(x: &[C64]) -> f64 {
    x.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

/// Largest eigenvalue of the Hermitian matrix `h` (only its Hermitian part is
/// used) with the eigen-residual of the returned pair.
pub(crate) fn dense_top(h: &DMatrix<C64>) -> Estimate {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym.clone());
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    let v = eig.eigenvectors.column(idx);
    let residual = (&sym * v - v * C64::new(value, 0.0)).norm();
    Estimate {
        value,
        iterations: 0,
        residual,
    }
}

/// Largest eigenvalue of `h` compressed to the span of the orthonormal
/// columns of `basis`.
pub(crate) fn dense_top_on(h: &DMatrix<C64>, basis: &DMatrix<C64>) -> Estimate {
    dense_top(&(basis.adjoint() * h * basis))
}

/// Orthonormal basis (as columns) of the orthogonal complement of the real
/// unit vector `v`, taken from the Householder reflection that maps `e_1` to
/// `±v`.
pub fn householder_complement(v: &[f64]) -> Vec<Vec<f64>> {
    let d = v.len();
    let s = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = v.to_vec();
    w[0] += s;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    (1..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    delta - 2.0 * w[i] * w[j] / ww
                })
                .collect()
        })
        .collect()
}

pub(crate) fn columns_to_dmatrix(rows: usize, cols: &[Vec<f64>]) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols.len(), |i, j| C64::new(cols[j][i], 0.0))
}

/// Splits `C^cols` into the numerical kernel of `a` and its orthogonal
/// complement (row space), deciding rank by `fixed_tol` on singular values.
pub(crate) fn kernel_split(a: &DMatrix<C64>, fixed_tol: f64) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.ncols();
    let padded;
    let a = if a.nrows() < n {
        padded = a.clone().resize_vertically(n, ZERO);
        &padded
    } else {
        a
    };
    let svd = a.clone().svd(false, true);
    let v = svd.v_t.expect("requested V^T").adjoint();
    let (mut kernel, mut range) = (Vec::new(), Vec::new());
    for (j, &s) in svd.singular_values.iter().enumerate() {
        if s <= fixed_tol {
            kernel.push(v.column(j).into_owned());
        } else {
            range.push(v.column(j).into_owned());
        }
    }
    let to_mat = |cols: Vec<nalgebra::DVector<C64>>| {
        if cols.is_empty() {
            DMatrix::zeros(n, 0)
        } else {
            DMatrix::from_columns(&cols)
        }
    };
    (to_mat(kernel), to_mat(range))
}

/// Number of singular values of `a` at or below `fixed_tol`, counting the
/// columns beyond the row count as null directions.
pub(crate) fn nullity(a: &DMatrix<C64>, fixed_tol: f64) -> usize {
    let n = a.ncols();
    if a.nrows() == 0 {
        return n;
    }
    let svd = a.clone().svd(false, false);
    let small = svd.singular_values.iter().filter(|&&s| s <= fixed_tol).count();
    small + n.saturating_sub(a.nrows())
}
