//! Seeded Haar sampling on `U(N)`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QexpError, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::tuple::UnitaryTuple;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-task seed: `seed ⊕ splitmix64(index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` pushed back into `Q`.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re * s, im * s)
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(&q)
}

/// `n` independent Haar unitaries, member `j` drawn from
/// `splitmix64(seed + (j + 1)·γ)`. The symmetric variant draws `n/2` and
/// appends their adjoints in the same order.
pub fn random_tuple(n: usize, dim: usize, seed: u64, symmetric: bool) -> Result<UnitaryTuple> {
    if n == 0 || dim == 0 {
        return Err(QexpError::InvalidParameter("n and dim must be positive".into()));
    }
    if symmetric && n % 2 == 1 {
        return Err(QexpError::InvalidParameter(format!(
            "a symmetric tuple needs even n, got {n}"
        )));
    }
    let draws = if symmetric { n / 2 } else { n };
    let mut ms: Vec<ComplexMatrix> = (0..draws)
        .map(|j| haar_unitary(dim, member_seed(seed, j)))
        .collect();
    if symmetric {
        let adj: Vec<_> = ms.iter().map(ComplexMatrix::adjoint).collect();
        ms.extend(adj);
    }
    // QR output is unitary to ~1e-15, far inside the default tolerance.
    UnitaryTuple::with_symmetry(ms, symmetric, crate::tuple::DEFAULT_UNITARITY_TOL)
}

fn member_seed(seed: u64, j: usize) -> u64 {
    splitmix64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(j as u64 + 1)))
}
