use crate::error::{QexpError, Result};
use crate::groups::GF2Matrix;

/// Size of the subring of `M_k(F_2)` generated by `gens` under addition and
/// multiplication (no unit is adjoined, so `{0}` generates the zero ring).
/// Only `k ≤ 3` is enumerable.
pub fn ring_closure(k: usize, gens: &[GF2Matrix]) -> Result<usize> {
    if !(1..=3).contains(&k) {
        return Err(QexpError::RingOutOfRange(k));
    }
    if gens.is_empty() {
        return Err(QexpError::InvalidParameter("ring closure needs at least one generator".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.k() != k) {
        return Err(QexpError::InvalidParameter(format!(
            "generator of size {} in M_{k}(F_2)",
            g.k()
        )));
    }
    let mut present = vec![false; 1 << (k * k)];
    let mut members: Vec<GF2Matrix> = Vec::new();
    let mut push = |m: GF2Matrix, members: &mut Vec<GF2Matrix>| {
        let code = m.encode() as usize;
        if !present[code] {
            present[code] = true;
            members.push(m);
        }
    };
    push(GF2Matrix::zero(k), &mut members);
    for g in gens {
        push(g.clone(), &mut members);
    }
    // Every new element is combined with everything found before it, so the
    // final set is closed once the worklist is drained.
    let mut next = 0;
    while next < members.len() {
        let x = members[next].clone();
        for i in 0..=next {
            let y = members[i].clone();
            push(x.add(&y), &mut members);
            push(x.mul(&y), &mut members);
            push(y.mul(&x), &mut members);
        }
        next += 1;
    }
    Ok(members.len())
}

/// `{e_12, shift}`, the pair shown to generate `M_k(F_2)` as a ring.
pub fn standard_ring_generators(k: usize) -> Vec<GF2Matrix> {
    let e12 = if k >= 2 { GF2Matrix::unit(k, 0, 1) } else { GF2Matrix::zero(k) };
    vec![e12, GF2Matrix::shift(k)]
}
