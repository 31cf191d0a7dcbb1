//! Tuples of unitaries `u = (u_1, ..., u_n) ∈ U(N)^n` and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::matrix::{ComplexMatrix, C64};

pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryTuple {
    dim: usize,
    matrices: Vec<ComplexMatrix>,
    symmetric: bool,
}

impl UnitaryTuple {
    /// Validates unitarity and detects whether the multiset is closed under
    /// adjoints.
    pub fn new(matrices: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let dim = check_members(&matrices, tol)?;
        let symmetric = adjoint_partners(&matrices, tol).is_ok();
        Ok(Self {
            dim,
            matrices,
            symmetric,
        })
    }

    /// Like [`UnitaryTuple::new`] but with an explicit symmetric flag; a `true`
    /// flag is verified.
    pub fn with_symmetry(matrices: Vec<ComplexMatrix>, symmetric: bool, tol: f64) -> Result<Self> {
        let dim = check_members(&matrices, tol)?;
        if symmetric {
            adjoint_partners(&matrices, tol)?;
        }
        Ok(Self {
            dim,
            matrices,
            symmetric,
        })
    }

    pub fn identity(n: usize, dim: usize) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(QexpError::InvalidParameter("n and dim must be positive".into()));
        }
        Self::new(vec![ComplexMatrix::identity(dim); n], DEFAULT_UNITARITY_TOL)
    }

    /// The four-element tuple `(I, σx, σy, σz)` on `C^2`.
    pub fn pauli2() -> Self {
        Self::new(
            vec![
                ComplexMatrix::identity(2),
                ComplexMatrix::pauli_x(),
                ComplexMatrix::pauli_y(),
                ComplexMatrix::pauli_z(),
            ],
            DEFAULT_UNITARITY_TOL,
        )
        .expect("Pauli matrices are unitary")
    }

    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<ComplexMatrix> {
        self.matrices
    }

    /// Block-diagonal tuple `(u_j ⊕ v_j)_j`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(QexpError::ShapeMismatch(format!(
                "tuple lengths {} and {} differ",
                self.n(),
                other.n()
            )));
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| ComplexMatrix::block_diag(&[a, b]))
            .collect();
        Ok(Self {
            dim: self.dim + other.dim,
            matrices,
            symmetric: self.symmetric && other.symmetric,
        })
    }

    /// `(w u_j w^†)_j`.
    pub fn conjugate_by(&self, w: &ComplexMatrix) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .map(|u| w.matmul(u)?.matmul_adjoint(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: self.dim,
            matrices,
            symmetric: self.symmetric,
        })
    }

    /// `(θ_j u_j)_j`; drops the symmetric flag unless the phases are real.
    pub fn with_phases(&self, phases: &[C64]) -> Result<Self> {
        if phases.len() != self.n() {
            return Err(QexpError::ShapeMismatch("one phase per member required".into()));
        }
        let matrices: Vec<_> = self
            .matrices
            .iter()
            .zip(phases)
            .map(|(u, &p)| u.scale(p))
            .collect();
        let symmetric = adjoint_partners(&matrices, DEFAULT_UNITARITY_TOL).is_ok();
        Ok(Self {
            dim: self.dim,
            matrices,
            symmetric,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TupleWire::from(self)).expect("tuple serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: TupleWire = serde_json::from_str(s)
            .map_err(|e| QexpError::InvalidParameter(format!("malformed tuple JSON: {e}")))?;
        wire.into_tuple(DEFAULT_UNITARITY_TOL)
    }
}

fn check_members(matrices: &[ComplexMatrix], tol: f64) -> Result<usize> {
    let first = matrices
        .first()
        .ok_or_else(|| QexpError::InvalidParameter("tuple must have at least one member".into()))?;
    let dim = first.rows();
    for (index, m) in matrices.iter().enumerate() {
        if !m.is_square() || m.rows() != dim {
            return Err(QexpError::ShapeMismatch(format!(
                "member {index} is {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
        let residual = m.unitarity_residual();
        if residual.is_nan() || residual > tol {
            return Err(QexpError::NotUnitary { index, residual });
        }
    }
    Ok(dim)
}

/// For each member, the index of a member equal to its adjoint.
fn adjoint_partners(matrices: &[ComplexMatrix], tol: f64) -> Result<Vec<usize>> {
    matrices
        .iter()
        .enumerate()
        .map(|(index, u)| {
            let ua = u.adjoint();
            matrices
                .iter()
                .position(|v| ua.sub(v).is_ok_and(|d| d.frobenius_norm() <= tol))
                .ok_or(QexpError::NotSymmetric { index })
        })
        .collect()
}

/// Serialized layout: matrices in tuple order, rows outer, entries `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleWire {
    pub n: usize,
    pub dim: usize,
    pub symmetric: bool,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&UnitaryTuple> for TupleWire {
    fn from(t: &UnitaryTuple) -> Self {
        let matrices = t
            .matrices
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            n: t.n(),
            dim: t.dim,
            symmetric: t.symmetric,
            matrices,
        }
    }
}

impl TupleWire {
    pub fn into_tuple(self, tol: f64) -> Result<UnitaryTuple> {
        if self.matrices.len() != self.n {
            return Err(QexpError::InvalidParameter(format!(
                "field \"n\" is {} but \"matrices\" has {} entries",
                self.n,
                self.matrices.len()
            )));
        }
        let mut ms = Vec::with_capacity(self.n);
        for (idx, rows) in self.matrices.into_iter().enumerate() {
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(QexpError::InvalidParameter(format!(
                    "field \"matrices\"[{idx}] is not {0}x{0} as declared by \"dim\"",
                    self.dim
                )));
            }
            let data = rows.into_iter().flatten().map(|[re, im]| C64::new(re, im)).collect();
            ms.push(ComplexMatrix::from_vec(self.dim, self.dim, data)?);
        }
        UnitaryTuple::with_symmetry(ms, self.symmetric, tol)
    }
}
