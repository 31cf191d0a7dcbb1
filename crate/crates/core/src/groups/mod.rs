//! Finite groups, their actions, and the representations built from them.

mod action;
mod cayley;
mod gf2;
mod perm;
mod ring;
mod table;

pub use action::{
    koopman_rep, perm_rep_commutant_dim, projective_space_action, GroupAction, DEFAULT_MAX_SET_SIZE,
};
pub use cayley::{cayley_gap, cayley_gap_from_tables};
pub use gf2::{sl_standard_generators, GF2Matrix};
pub use perm::Permutation;
pub use ring::{ring_closure, standard_ring_generators};
pub use table::{enumerate_group, FiniteGroupTable, GroupElement, DEFAULT_MAX_ORDER};

use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::matrix::ComplexMatrix;
use crate::solver::{SolverOptions, SpectralReport};
use crate::tuple::UnitaryTuple;

/// Packages generator images `σ(s_1), .., σ(s_n)` as a unitary tuple.
pub fn rep_to_tuple(rep: Vec<ComplexMatrix>, unitarity_tol: f64) -> Result<UnitaryTuple> {
    UnitaryTuple::new(rep, unitarity_tol)
}

/// Left regular representation: one permutation matrix per generator.
pub fn regular_representation<E: GroupElement>(g: &FiniteGroupTable<E>) -> Vec<ComplexMatrix> {
    g.left_mult().iter().map(|t| ComplexMatrix::permutation(t)).collect()
}

/// Multiplies each generator image by the given ±1 character values.
pub fn twist(rep: &[ComplexMatrix], character: &[i32]) -> Result<Vec<ComplexMatrix>> {
    if rep.len() != character.len() {
        return Err(QexpError::ShapeMismatch("one character value per generator".into()));
    }
    Ok(rep
        .iter()
        .zip(character)
        .map(|(m, &c)| m.scale(crate::matrix::C64::new(c as f64, 0.0)))
        .collect())
}

/// Named group constructions accepted on the command line and in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// `SL_{3k}(F_2)` with its standard symmetric generators.
    #[serde(rename = "sl3k_f2")]
    Sl3kF2 { k: usize },
    /// `Z_m` acting on itself, `S = {+1, −1}`.
    Cyclic { m: usize },
    /// `S_m` on `m` points, `S = {(0 1), c, c⁻¹}` with `c` the `m`-cycle.
    SymmetricGroup { m: usize },
    /// Arbitrary permutations; inverses are added to make `S` symmetric.
    CustomPerm { generators: Vec<Permutation> },
}

pub enum BuiltGroup {
    Perm(FiniteGroupTable<Permutation>),
    Gf2(FiniteGroupTable<GF2Matrix>),
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Sl3kF2 { k } if *k == 0 => Err(QexpError::InvalidParameter("k must be at least 1".into())),
            Self::Cyclic { m } if *m < 2 => Err(QexpError::InvalidParameter("cyclic group needs m ≥ 2".into())),
            Self::SymmetricGroup { m } if *m < 2 => {
                Err(QexpError::InvalidParameter("symmetric group needs m ≥ 2".into()))
            }
            Self::CustomPerm { generators } => {
                let len = generators
                    .first()
                    .ok_or_else(|| QexpError::InvalidParameter("custom_perm needs generators".into()))?
                    .len();
                if generators.iter().any(|g| g.len() != len) {
                    return Err(QexpError::InvalidParameter("custom generators act on different sets".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The generating set as permutations of a point set, when the group is
    /// a permutation group.
    pub fn permutation_generators(&self) -> Option<Vec<Permutation>> {
        match self {
            Self::Sl3kF2 { .. } => None,
            Self::Cyclic { m } => Some(vec![Permutation::rotation(*m, 1)]),
            Self::SymmetricGroup { m } => {
                let t = Permutation::from_cycles(*m, &[&[0, 1]]).expect("valid cycle");
                let c = Permutation::rotation(*m, 1);
                Some(vec![t, c])
            }
            Self::CustomPerm { generators } => Some(generators.clone()),
        }
    }

    pub fn build(&self, max_order: usize) -> Result<BuiltGroup> {
        self.validate()?;
        match self {
            Self::Sl3kF2 { k } => Ok(BuiltGroup::Gf2(enumerate_group(
                &sl_standard_generators(3 * k),
                max_order,
                true,
            )?)),
            _ => {
                let gens = self.permutation_generators().expect("permutation group");
                Ok(BuiltGroup::Perm(enumerate_group(&gens, max_order, true)?))
            }
        }
    }
}

impl BuiltGroup {
    pub fn order(&self) -> usize {
        match self {
            Self::Perm(g) => g.order(),
            Self::Gf2(g) => g.order(),
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            Self::Perm(g) => g.generators().len(),
            Self::Gf2(g) => g.generators().len(),
        }
    }

    pub fn cayley_gap(&self, opts: &SolverOptions) -> Result<SpectralReport> {
        match self {
            Self::Perm(g) => cayley_gap(g, opts),
            Self::Gf2(g) => cayley_gap(g, opts),
        }
    }

    pub fn regular_representation(&self) -> Vec<ComplexMatrix> {
        match self {
            Self::Perm(g) => regular_representation(g),
            Self::Gf2(g) => regular_representation(g),
        }
    }
}
