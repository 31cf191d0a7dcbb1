use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::groups::GroupElement;

/// A permutation of `{0, .., len-1}` in image notation: `x ↦ images[x]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &y in &images {
            if y >= images.len() || seen[y] {
                return Err(QexpError::InvalidParameter(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[y] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(len: usize) -> Self {
        Self {
            images: (0..len).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(len: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..len).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= len {
                    return Err(QexpError::InvalidParameter(format!("point {x} out of range")));
                }
                images[x] = c[(i + 1) % c.len()];
            }
        }
        Self::new(images)
    }

    /// Translation `x ↦ x + shift (mod m)`.
    pub fn rotation(m: usize, shift: usize) -> Self {
        Self {
            images: (0..m).map(|x| (x + shift) % m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    /// `+1` for even permutations, `−1` for odd ones.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.len()];
        let mut transpositions = 0;
        for start in 0..self.len() {
            let mut x = start;
            let mut cycle_len = 0;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                cycle_len += 1;
            }
            if cycle_len > 0 {
                transpositions += cycle_len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = QexpError;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl GroupElement for Permutation {
    fn compose(&self, other: &Self) -> Self {
        Permutation::compose(self, other)
    }

    fn try_inverse(&self) -> Option<Self> {
        Some(self.inverse())
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.len())
    }
}
