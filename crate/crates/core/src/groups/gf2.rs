use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::groups::GroupElement;

/// A `k x k` matrix over the field with two elements, one `u64` bitmask per
/// row (bit `j` of row `i` is the entry `(i, j)`), so `k ≤ 64`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct GF2Matrix {
    k: usize,
    rows: Vec<u64>,
}

impl GF2Matrix {
    pub const MAX_K: usize = 64;

    pub fn zero(k: usize) -> Self {
        assert!((1..=Self::MAX_K).contains(&k), "k must lie in 1..=64");
        Self { k, rows: vec![0; k] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..k {
            m.rows[i] = 1 << i;
        }
        m
    }

    /// The matrix unit `e_{ij}` (zero-based).
    pub fn unit(k: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(k);
        m.rows[i] = 1 << j;
        m
    }

    /// `e_{12} + e_{23} + ... + e_{k-1,k} + e_{k1}`; as a group element it is
    /// the cyclic-shift permutation matrix.
    pub fn shift(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..k {
            m.rows[i] = 1 << ((i + 1) % k);
        }
        m
    }

    pub fn from_bits(k: usize, bits: &[&[u8]]) -> Result<Self> {
        let rows: Vec<Vec<u8>> = bits.iter().map(|r| r.to_vec()).collect();
        let m = Self::try_from(rows)?;
        if m.k != k {
            return Err(QexpError::InvalidParameter(format!("expected {k} rows, got {}", m.k)));
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn row_mask(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        Self {
            k: self.k,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0;
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= other.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Self { k: self.k, rows }
    }

    /// Matrix–vector product with the column vector whose bit `j` is
    /// coordinate `j`.
    pub fn apply(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() as u64 & 1) << i))
    }

    /// Gauss–Jordan inverse; `None` for singular matrices.
    pub fn inverse(&self) -> Option<Self> {
        let k = self.k;
        let mut a = self.rows.clone();
        let mut inv = Self::identity(k).rows;
        for col in 0..k {
            let pivot = (col..k).find(|&r| a[r] >> col & 1 == 1)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..k {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(Self { k, rows: inv })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    /// Row-major bit encoding, valid for `k ≤ 8`.
    pub fn encode(&self) -> u64 {
        debug_assert!(self.k * self.k <= 64);
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (r << (i * self.k)))
    }

    pub fn decode(k: usize, code: u64) -> Self {
        let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Self {
            k,
            rows: (0..k).map(|i| (code >> (i * k)) & mask).collect(),
        }
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u8>> = self.clone().into();
        write!(f, "GF2{rows:?}")
    }
}

impl TryFrom<Vec<Vec<u8>>> for GF2Matrix {
    type Error = QexpError;

    fn try_from(bits: Vec<Vec<u8>>) -> Result<Self> {
        let k = bits.len();
        if k == 0 || k > Self::MAX_K {
            return Err(QexpError::InvalidParameter(format!("GF(2) matrix size {k} outside 1..=64")));
        }
        let mut rows = Vec::with_capacity(k);
        for row in &bits {
            if row.len() != k {
                return Err(QexpError::InvalidParameter("GF(2) matrix must be square".into()));
            }
            let mut mask = 0u64;
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => mask |= 1 << j,
                    _ => return Err(QexpError::InvalidParameter(format!("entry {b} is not 0 or 1"))),
                }
            }
            rows.push(mask);
        }
        Ok(Self { k, rows })
    }
}

impl From<GF2Matrix> for Vec<Vec<u8>> {
    fn from(m: GF2Matrix) -> Self {
        (0..m.k)
            .map(|i| (0..m.k).map(|j| m.get(i, j) as u8).collect())
            .collect()
    }
}

impl GroupElement for GF2Matrix {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.k)
    }
}

/// Symmetric generating set `{I + e_12, shift, shift⁻¹}` of `SL_m(F_2)`;
/// `I + e_12` is an involution, so it is its own inverse.
pub fn sl_standard_generators(m: usize) -> Vec<GF2Matrix> {
    assert!(m >= 2, "SL_m needs m ≥ 2");
    let transvection = GF2Matrix::identity(m).add(&GF2Matrix::unit(m, 0, 1));
    let shift = GF2Matrix::shift(m);
    let shift_inv = shift.inverse().expect("permutation matrices are invertible");
    vec![transvection, shift, shift_inv]
}
