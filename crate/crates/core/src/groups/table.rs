use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{QexpError, Result};

pub const DEFAULT_MAX_ORDER: usize = 1_000_000;

/// Elements that can be multiplied and inverted. `compose(a, b)` is the
/// product `a·b` (for permutations: apply `b`, then `a`).
pub trait GroupElement: Clone + Eq + Hash {
    fn compose(&self, other: &Self) -> Self;
    fn try_inverse(&self) -> Option<Self>;
    fn identity_like(&self) -> Self;
}

/// A finite group enumerated from a generating set `S`.
///
/// Elements are stored in breadth-first order from the identity. Products of
/// arbitrary elements are computed on the fly; left multiplication by each
/// generator is tabulated, which is all the Cayley graph needs.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable<E> {
    elements: Vec<E>,
    index: HashMap<E, usize>,
    identity_index: usize,
    generators: Vec<E>,
    generator_indices: Vec<usize>,
    left_mult: Vec<Vec<usize>>,
    symmetric: bool,
}

/// Breadth-first closure of `generators`. Duplicate generators are dropped;
/// with `symmetric_closure` missing inverses are appended after the given
/// generators.
pub fn enumerate_group<E: GroupElement>(
    generators: &[E],
    max_order: usize,
    symmetric_closure: bool,
) -> Result<FiniteGroupTable<E>> {
    let first = generators
        .first()
        .ok_or_else(|| QexpError::InvalidParameter("at least one generator is required".into()))?;
    let mut gens: Vec<E> = Vec::new();
    for (index, g) in generators.iter().enumerate() {
        if g.try_inverse().is_none() {
            return Err(QexpError::NonInvertibleGenerator { index });
        }
        if !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    if symmetric_closure {
        let inverses: Vec<E> = gens.iter().filter_map(E::try_inverse).collect();
        for inv in inverses {
            if !gens.contains(&inv) {
                gens.push(inv);
            }
        }
    }
    let symmetric = gens
        .iter()
        .all(|g| g.try_inverse().is_some_and(|inv| gens.contains(&inv)));

    let identity = first.identity_like();
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut left_mult: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        for (si, s) in gens.iter().enumerate() {
            let h = s.compose(&elements[g]);
            let next = match index.get(&h) {
                Some(&i) => i,
                None => {
                    if elements.len() >= max_order {
                        return Err(QexpError::OrderExceeded { max_order });
                    }
                    let i = elements.len();
                    index.insert(h.clone(), i);
                    elements.push(h);
                    queue.push_back(i);
                    i
                }
            };
            // BFS visits g in index order, so this push lands at position g.
            left_mult[si].push(next);
        }
    }
    let generator_indices = gens.iter().map(|g| index[g]).collect();
    Ok(FiniteGroupTable {
        elements,
        index,
        identity_index: 0,
        generators: gens,
        generator_indices,
        left_mult,
        symmetric,
    })
}

impl<E: GroupElement> FiniteGroupTable<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `left_mult()[s][g]` is the index of `s·g`.
    pub fn left_mult(&self) -> &[Vec<usize>] {
        &self.left_mult
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].compose(&self.elements[b]);
        self.index[&p]
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        let inv = self.elements[a].try_inverse().expect("group elements are invertible");
        self.index[&inv]
    }
}
