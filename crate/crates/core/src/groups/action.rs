//! Finite permutation actions, their orbit structure on points and pairs,
//! and the associated permutation and Koopman representations.

use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::groups::{sl_standard_generators, GF2Matrix, Permutation};
use crate::matrix::{ComplexMatrix, C64};
use crate::solver::householder_complement;
use crate::spectral::intertwiner_dim_of;

pub const DEFAULT_MAX_SET_SIZE: usize = 4096;

/// Generators of a group acting on `X = {0, .., set_size-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ActionWire", into = "ActionWire")]
pub struct GroupAction {
    set_size: usize,
    generator_perms: Vec<Permutation>,
}

#[derive(Serialize, Deserialize)]
struct ActionWire {
    set_size: usize,
    generator_perms: Vec<Vec<usize>>,
}

impl TryFrom<ActionWire> for GroupAction {
    type Error = QexpError;

    fn try_from(w: ActionWire) -> Result<Self> {
        let perms = w
            .generator_perms
            .into_iter()
            .map(Permutation::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(w.set_size, perms)
    }
}

impl From<GroupAction> for ActionWire {
    fn from(a: GroupAction) -> Self {
        Self {
            set_size: a.set_size,
            generator_perms: a.generator_perms.into_iter().map(Vec::from).collect(),
        }
    }
}

impl GroupAction {
    pub fn new(set_size: usize, generator_perms: Vec<Permutation>) -> Result<Self> {
        if set_size == 0 {
            return Err(QexpError::InvalidParameter("action needs a nonempty set".into()));
        }
        if let Some(i) = generator_perms.iter().position(|p| p.len() != set_size) {
            return Err(QexpError::InvalidParameter(format!(
                "generator {i} does not act on {set_size} points"
            )));
        }
        Ok(Self {
            set_size,
            generator_perms,
        })
    }

    /// Action of invertible `m x m` matrices on the nonzero vectors of
    /// `F_2^m`; point `x` is the vector with bitmask `x + 1`.
    pub fn on_nonzero_vectors(m: usize, matrices: &[GF2Matrix], max_set_size: usize) -> Result<Self> {
        if m == 0 || m >= 63 {
            return Err(QexpError::InvalidParameter(format!("vector space dimension {m} unsupported")));
        }
        let size = (1usize << m) - 1;
        if size > max_set_size {
            return Err(QexpError::SetSizeExceeded {
                size,
                max: max_set_size,
            });
        }
        let mut perms = Vec::with_capacity(matrices.len());
        for (index, g) in matrices.iter().enumerate() {
            if g.k() != m || !g.is_invertible() {
                return Err(QexpError::NonInvertibleGenerator { index });
            }
            let images = (1..=size as u64).map(|v| g.apply(v) as usize - 1).collect();
            perms.push(Permutation::new(images)?);
        }
        Self::new(size, perms)
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn generator_perms(&self) -> &[Permutation] {
        &self.generator_perms
    }

    /// Number of orbits on `X`.
    pub fn orbit_count(&self) -> usize {
        let mut uf = UnionFind::new(self.set_size);
        for p in &self.generator_perms {
            for x in 0..self.set_size {
                uf.union(x, p.apply(x));
            }
        }
        uf.components()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_count() == 1
    }

    /// Orbits of the generated group on ordered pairs `X x X`, found by
    /// union–find over the generator moves; the group itself is never listed.
    pub fn orbit_count_on_pairs(&self) -> usize {
        let n = self.set_size;
        let mut uf = UnionFind::new(n * n);
        for p in &self.generator_perms {
            for x in 0..n {
                let px = p.apply(x);
                for y in 0..n {
                    uf.union(x * n + y, px * n + p.apply(y));
                }
            }
        }
        uf.components()
    }

    /// Exactly two orbits on `X x X`: the diagonal and everything else.
    pub fn is_doubly_transitive(&self) -> bool {
        self.set_size >= 2 && self.orbit_count_on_pairs() == 2
    }

    pub fn permutation_matrices(&self) -> Vec<ComplexMatrix> {
        self.generator_perms
            .iter()
            .map(|p| ComplexMatrix::permutation(p.images()))
            .collect()
    }
}

/// Projective space of `F_2^{3k}` (over `F_2` its points are the nonzero
/// vectors) acted on by the standard generators of `SL_{3k}(F_2)`.
pub fn projective_space_action(k: usize, max_set_size: usize) -> Result<GroupAction> {
    if k == 0 {
        return Err(QexpError::InvalidParameter("k must be at least 1".into()));
    }
    let m = 3 * k;
    if m >= 63 {
        return Err(QexpError::SetSizeExceeded {
            size: usize::MAX,
            max: max_set_size,
        });
    }
    GroupAction::on_nonzero_vectors(m, &sl_standard_generators(m), max_set_size)
}

/// The permutation representation on `ℓ²(X)` compressed to the mean-zero
/// functions, in the orthonormal basis obtained by Householder completion of
/// the normalised all-ones vector.
pub fn koopman_rep(a: &GroupAction) -> Result<Vec<ComplexMatrix>> {
    let d = a.set_size();
    let orbits = a.orbit_count();
    if d < 2 || orbits != 1 {
        return Err(QexpError::NotTransitive { orbits, set_size: d });
    }
    let ones = vec![1.0 / (d as f64).sqrt(); d];
    let basis = householder_complement(&ones);
    let dk = d - 1;
    let out = a
        .generator_perms()
        .iter()
        .map(|p| {
            // (Qᵀ P Q)_{ab} = Σ_x Q_{p(x), a} Q_{x, b}
            ComplexMatrix::from_fn(dk, dk, |i, j| {
                let qa = &basis[i];
                let qb = &basis[j];
                let s: f64 = (0..d).map(|x| qa[p.apply(x)] * qb[x]).sum();
                C64::new(s, 0.0)
            })
        })
        .collect();
    Ok(out)
}

/// Numerical commutant dimension of the permutation representation; by
/// Burnside's counting it must equal [`GroupAction::orbit_count_on_pairs`].
pub fn perm_rep_commutant_dim(a: &GroupAction, fixed_tol: f64) -> Result<usize> {
    let ms = a.permutation_matrices();
    if ms.is_empty() {
        return Ok(a.set_size() * a.set_size());
    }
    intertwiner_dim_of(&ms, &ms, fixed_tol)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
