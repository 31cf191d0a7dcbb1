//! Brute-force oracles shared by the integration tests. They build operators
//! entry by entry from their action on matrix units and never call the
//! library's own dense routes.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use qexp_core::{ComplexMatrix, UnitaryTuple, C64};

/// Matrix of `x ↦ Σ_j u_j x v_j^†` built column by column from `E_ab`.
pub fn superop_by_columns(u: &UnitaryTuple, v: &UnitaryTuple) -> DMatrix<C64> {
    let d = u.dim();
    let mut m = DMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let e = ComplexMatrix::unit(d, a, b);
            let mut img = ComplexMatrix::zeros(d, d);
            for (uj, vj) in u.matrices().iter().zip(v.matrices()) {
                let t = uj.matmul(&e).unwrap().matmul(&vj.adjoint()).unwrap();
                img = img.add(&t).unwrap();
            }
            for r in 0..d {
                for c in 0..d {
                    m[(r * d + c, a * d + b)] = img[(r, c)];
                }
            }
        }
    }
    m
}

/// `λ(u)` by eigendecomposing the Hermitian part with the identity direction
/// pushed far below the spectrum.
pub fn lambda_oracle(u: &UnitaryTuple) -> f64 {
    let d = u.dim();
    let n = u.n() as f64;
    let m = superop_by_columns(u, u);
    let mut h = (&m + m.adjoint()) * C64::new(0.5 / n, 0.0);
    let w = 1.0 / d as f64;
    for i in 0..d {
        for j in 0..d {
            h[(i * d + i, j * d + j)] -= C64::new(10.0 * w, 0.0);
        }
    }
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::MIN, f64::max)
}

/// `‖Σ u_j ⊗ conj(v_j)‖` as the square root of the top eigenvalue of `M^†M`.
pub fn pair_norm_oracle(u: &UnitaryTuple, v: &UnitaryTuple) -> f64 {
    let m = superop_by_columns(u, v);
    let g = m.adjoint() * &m;
    SymmetricEigen::new(g)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::MIN, f64::max)
        .max(0.0)
        .sqrt()
}

/// Top eigenvalue of the Hermitian part of `n⁻¹ Σ π(s)` on the complement of
/// the common fixed space, with the fixed space obtained from the kernel of
/// `Σ (π(s) − I)^†(π(s) − I)`.
pub fn rep_lambda_oracle(ms: &[ComplexMatrix]) -> f64 {
    let d = ms[0].rows();
    let n = ms.len() as f64;
    let id = DMatrix::<C64>::identity(d, d);
    let mut gram = DMatrix::<C64>::zeros(d, d);
    let mut sum = DMatrix::<C64>::zeros(d, d);
    for m in ms {
        let dm = DMatrix::from_fn(d, d, |i, j| m[(i, j)]);
        let diff = &dm - &id;
        gram += diff.adjoint() * &diff;
        sum += dm;
    }
    let eig = SymmetricEigen::new(gram);
    let mut h = (&sum + sum.adjoint()) * C64::new(0.5 / n, 0.0);
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev < 1e-12 {
            let v = eig.eigenvectors.column(k);
            h -= (v * v.adjoint()) * C64::new(10.0, 0.0);
        }
    }
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::MIN, f64::max)
}
