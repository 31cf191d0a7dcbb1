mod common;

use common::rep_lambda_oracle;
use nalgebra::{DMatrix, SymmetricEigen};
use qexp_core::groups::{
    enumerate_group, koopman_rep, perm_rep_commutant_dim, projective_space_action, regular_representation,
    rep_to_tuple, ring_closure, sl_standard_generators, twist, BuiltGroup, GF2Matrix, GroupAction, GroupSpec,
    Permutation, DEFAULT_MAX_ORDER, DEFAULT_MAX_SET_SIZE,
};
use qexp_core::groups::{cayley_gap, cayley_gap_from_tables};
use qexp_core::{commutant_dim, lambda_gap, rep_gap, ComplexMatrix, SolverOptions, UnitaryTuple, C64};

/// Cayley gap by eigendecomposing the symmetrised adjacency matrix with the
/// constants pushed down.
fn cayley_oracle(order: usize, left: &[Vec<usize>]) -> f64 {
    let n = left.len() as f64;
    let mut a = DMatrix::<f64>::zeros(order, order);
    for t in left {
        for (g, &sg) in t.iter().enumerate() {
            a[(sg, g)] += 0.5 / n;
            a[(g, sg)] += 0.5 / n;
        }
    }
    a.add_scalar_mut(-10.0 / order as f64);
    1.0 - SymmetricEigen::new(a).eigenvalues.max()
}

fn sl3_order_by_counting() -> usize {
    (0u64..512)
        .filter(|&c| GF2Matrix::decode(3, c).is_invertible())
        .count()
}

#[test]
fn sl3_order_matches_count_of_invertible_matrices() {
    // Over F₂, GL₃ = SL₃.
    let g = enumerate_group(&sl_standard_generators(3), DEFAULT_MAX_ORDER, true).unwrap();
    assert_eq!(g.order(), sl3_order_by_counting());
    assert_eq!(g.order(), 168);
}

#[test]
fn enumeration_is_independent_of_generator_order() {
    let mut gens = sl_standard_generators(3);
    let a = enumerate_group(&gens, DEFAULT_MAX_ORDER, true).unwrap();
    gens.reverse();
    let b = enumerate_group(&gens, DEFAULT_MAX_ORDER, true).unwrap();
    assert_eq!(a.order(), b.order());
    let mut ea: Vec<u64> = a.elements().iter().map(GF2Matrix::encode).collect();
    let mut eb: Vec<u64> = b.elements().iter().map(GF2Matrix::encode).collect();
    ea.sort_unstable();
    eb.sort_unstable();
    assert_eq!(ea, eb);
}

#[test]
fn cayley_gaps_match_dense_oracle() {
    for spec in [
        GroupSpec::Cyclic { m: 6 },
        GroupSpec::SymmetricGroup { m: 4 },
        GroupSpec::Sl3kF2 { k: 1 },
    ] {
        let built = spec.build(DEFAULT_MAX_ORDER).unwrap();
        let (order, left) = match &built {
            BuiltGroup::Perm(g) => (g.order(), g.left_mult().to_vec()),
            BuiltGroup::Gf2(g) => (g.order(), g.left_mult().to_vec()),
        };
        let want = cayley_oracle(order, &left);
        for opts in [SolverOptions::dense(), SolverOptions::iterative()] {
            let got = built.cayley_gap(&opts).unwrap();
            assert!((got.epsilon - want).abs() < 1e-7, "{spec:?}: {got:?} vs {want}");
        }
    }
}

#[test]
fn cayley_gap_is_relabeling_invariant() {
    let g = enumerate_group(&sl_standard_generators(3), DEFAULT_MAX_ORDER, true).unwrap();
    let order = g.order();
    // σ(i) = (37 i + 5) mod 168 is a bijection since gcd(37, 168) = 1.
    let sigma: Vec<usize> = (0..order).map(|i| (37 * i + 5) % order).collect();
    let left: Vec<Vec<usize>> = g
        .left_mult()
        .iter()
        .map(|t| {
            let mut r = vec![0; order];
            for (i, &si) in t.iter().enumerate() {
                r[sigma[i]] = sigma[si];
            }
            r
        })
        .collect();
    let opts = SolverOptions::dense();
    let a = cayley_gap(&g, &opts).unwrap();
    let b = cayley_gap_from_tables(order, &left, &opts).unwrap();
    assert!((a.epsilon - b.epsilon).abs() < 1e-9);
}

fn sample_actions() -> Vec<GroupAction> {
    let s5 = GroupSpec::SymmetricGroup { m: 5 }.permutation_generators().unwrap();
    vec![
        projective_space_action(1, DEFAULT_MAX_SET_SIZE).unwrap(),
        GroupAction::new(6, vec![Permutation::rotation(6, 1), Permutation::rotation(6, 5)]).unwrap(),
        GroupAction::new(5, s5).unwrap(),
        GroupAction::new(3, vec![Permutation::identity(3)]).unwrap(),
        GroupAction::new(6, vec![Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap()]).unwrap(),
    ]
}

#[test]
fn burnside_count_equals_numeric_commutant() {
    for a in sample_actions() {
        assert_eq!(perm_rep_commutant_dim(&a, 1e-8).unwrap(), a.orbit_count_on_pairs());
    }
}

#[test]
fn koopman_matrices_respect_composition() {
    let p = Permutation::from_cycles(7, &[&[0, 3, 5], &[1, 2]]).unwrap();
    let q = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
    let a = GroupAction::new(7, vec![p.clone(), q.clone(), p.compose(&q)]).unwrap();
    let k = koopman_rep(&a).unwrap();
    for m in &k {
        assert!(m.unitarity_residual() <= 1e-10);
    }
    let prod = k[0].matmul(&k[1]).unwrap();
    assert!(prod.sub(&k[2]).unwrap().frobenius_norm() < 1e-10);
}

#[test]
fn doubly_transitive_koopman_is_irreducible() {
    for a in [
        projective_space_action(1, DEFAULT_MAX_SET_SIZE).unwrap(),
        GroupAction::new(5, GroupSpec::SymmetricGroup { m: 5 }.permutation_generators().unwrap()).unwrap(),
    ] {
        assert!(a.is_doubly_transitive());
        let t = rep_to_tuple(koopman_rep(&a).unwrap(), 1e-10).unwrap();
        assert_eq!(commutant_dim(&t, 1e-8).unwrap(), 1);
    }
}

#[test]
fn rep_gap_matches_fixed_space_oracle() {
    let s4 = GroupSpec::SymmetricGroup { m: 4 }.build(DEFAULT_MAX_ORDER).unwrap();
    let reg = s4.regular_representation();
    let perms = GroupAction::new(4, GroupSpec::SymmetricGroup { m: 4 }.permutation_generators().unwrap())
        .unwrap()
        .permutation_matrices();
    for ms in [reg, perms] {
        let want = rep_lambda_oracle(&ms);
        for opts in [SolverOptions::dense(), SolverOptions::iterative()] {
            let got = rep_gap(&ms, &opts).unwrap();
            assert!((got.lambda - want).abs() < 1e-7, "{got:?} vs {want}");
        }
    }
}

/// Representations of `S_4` (generators `(0 1), c, c⁻¹`) built here.
fn s4_reps() -> Vec<Vec<ComplexMatrix>> {
    let gens = GroupSpec::SymmetricGroup { m: 4 }.permutation_generators().unwrap();
    let table = enumerate_group(&gens, DEFAULT_MAX_ORDER, true).unwrap();
    let s: Vec<Permutation> = table.generators().to_vec();
    let signs: Vec<i32> = s.iter().map(Permutation::sign).collect();
    let natural = GroupAction::new(4, s).unwrap();
    let std = koopman_rep(&natural).unwrap();
    vec![
        std.clone(),
        twist(&std, &signs).unwrap(),
        natural.permutation_matrices(),
        regular_representation(&table),
        signs.iter().map(|&x| ComplexMatrix::identity(1).scale(C64::new(x as f64, 0.0))).collect(),
    ]
}

fn block_sum(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    a.iter().zip(b).map(|(x, y)| ComplexMatrix::block_diag(&[x, y])).collect()
}

#[test]
fn rep_gap_of_direct_sum_is_the_minimum() {
    let reps = s4_reps();
    let opts = SolverOptions::dense();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i..] {
            let ea = rep_gap(a, &opts).unwrap().epsilon;
            let eb = rep_gap(b, &opts).unwrap().epsilon;
            let es = rep_gap(&block_sum(a, b), &opts).unwrap().epsilon;
            assert!((es - ea.min(eb)).abs() < 1e-8, "{es} vs {ea}, {eb}");
        }
    }
}

#[test]
fn constructed_reps_are_weakly_contained_in_regular() {
    let cay = GroupSpec::SymmetricGroup { m: 4 }
        .build(DEFAULT_MAX_ORDER)
        .unwrap()
        .cayley_gap(&SolverOptions::dense())
        .unwrap()
        .epsilon;
    for r in s4_reps() {
        assert!(rep_gap(&r, &SolverOptions::dense()).unwrap().epsilon >= cay - 1e-8);
    }
}

#[test]
fn z6_regular_tuple_gap_matches_cayley_gap() {
    let g = GroupSpec::Cyclic { m: 6 }.build(DEFAULT_MAX_ORDER).unwrap();
    let opts = SolverOptions::dense();
    let cay = g.cayley_gap(&opts).unwrap().epsilon;
    let reg = g.regular_representation();
    let rg = rep_gap(&reg, &opts).unwrap().epsilon;
    assert!((rg - cay).abs() < 1e-8);
    assert!((cay - 0.5).abs() < 1e-8);
    // As a tuple, the regular representation decomposes and has no gap.
    let t: UnitaryTuple = rep_to_tuple(reg, 1e-10).unwrap();
    assert!(lambda_gap(&t, &opts).unwrap().epsilon <= 1e-8);
}

#[test]
fn koopman_tuple_gap_dominates_cayley_gap() {
    let g = enumerate_group(&sl_standard_generators(3), DEFAULT_MAX_ORDER, true).unwrap();
    let cay = cayley_gap(&g, &SolverOptions::dense()).unwrap().epsilon;
    let k = koopman_rep(&projective_space_action(1, DEFAULT_MAX_SET_SIZE).unwrap()).unwrap();
    let t = rep_to_tuple(k, 1e-10).unwrap();
    let eps = lambda_gap(&t, &SolverOptions::dense()).unwrap().epsilon;
    assert!(eps >= cay - 1e-8, "{eps} < {cay}");
}

#[test]
fn ring_closure_by_independent_count() {
    // Subring generated by the diagonal idempotent E₁₁ alone is {0, E₁₁}.
    assert_eq!(ring_closure(2, &[GF2Matrix::unit(2, 0, 0)]).unwrap(), 2);
    // Scalars {0, I}.
    assert_eq!(ring_closure(3, &[GF2Matrix::identity(3)]).unwrap(), 2);
    // Upper triangular 2x2 matrices: 8 elements.
    assert_eq!(
        ring_closure(2, &[GF2Matrix::unit(2, 0, 1), GF2Matrix::unit(2, 0, 0), GF2Matrix::unit(2, 1, 1)]).unwrap(),
        8
    );
}
