use nalgebra::DMatrix;

use crate::error::{QexpError, Result};
use crate::groups::{FiniteGroupTable, GroupElement};
use crate::matrix::C64;
use crate::solver::{
    columns_to_dmatrix, dense_top_on, householder_complement, power_iteration, Method, SolverOptions, SpectralReport,
};

/// Spectral gap `ε(λ_G, S)` of the left regular representation, i.e. the
/// Cayley-graph gap of `(G, S)`.
pub fn cayley_gap<E: GroupElement>(g: &FiniteGroupTable<E>, opts: &SolverOptions) -> Result<SpectralReport> {
    cayley_gap_from_tables(g.order(), g.left_mult(), opts)
}

/// Same as [`cayley_gap`] but from raw tables: `left[s][g]` is the index of
/// `s·g`. The constants (invariant vectors of `λ_G` when `S` generates) are
/// deflated; `λ(s)` acts as an index shuffle.
pub fn cayley_gap_from_tables(order: usize, left: &[Vec<usize>], opts: &SolverOptions) -> Result<SpectralReport> {
    opts.validate()?;
    if order < 2 {
        return Err(QexpError::InvalidParameter("Cayley gap needs |G| ≥ 2".into()));
    }
    if left.is_empty() || left.iter().any(|t| t.len() != order) {
        return Err(QexpError::ShapeMismatch("left multiplication tables do not match the order".into()));
    }
    let n = left.len() as f64;
    match opts.method_for(order) {
        Method::Dense => {
            let mut a = DMatrix::<C64>::zeros(order, order);
            for table in left {
                for (g, &sg) in table.iter().enumerate() {
                    a[(sg, g)] += C64::new(1.0, 0.0);
                }
            }
            let ones = vec![1.0 / (order as f64).sqrt(); order];
            let basis = columns_to_dmatrix(order, &householder_complement(&ones));
            let est = dense_top_on(&a, &basis);
            Ok(SpectralReport::new(est.value / n, Method::Dense, 0, est.residual / n))
        }
        Method::Iterative => {
            let half = 0.5 / n;
            let apply = |src: &[C64], dst: &mut [C64]| {
                dst.copy_from_slice(src);
                for table in left {
                    for (g, &sg) in table.iter().enumerate() {
                        // λ(s) f at s·g is f(g); its transpose reads f(s·g) into g.
                        dst[sg] += src[g] * half;
                        dst[g] += src[sg] * half;
                    }
                }
            };
            let project = |z: &mut [C64]| {
                let mean = z.iter().sum::<C64>() / z.len() as f64;
                z.iter_mut().for_each(|x| *x -= mean);
            };
            let est = power_iteration(order, apply, project, opts)?;
            Ok(SpectralReport::new(
                est.value - 1.0,
                Method::Iterative,
                est.iterations,
                est.residual,
            ))
        }
    }
}
