//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Tolerances and runtime limits are pinned below.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use qexp_core::groups::{
    enumerate_group, koopman_rep, projective_space_action, ring_closure, rep_to_tuple, sl_standard_generators,
    standard_ring_generators, twist, cayley_gap, GF2Matrix, GroupAction, GroupSpec, Permutation,
    DEFAULT_MAX_ORDER, DEFAULT_MAX_SET_SIZE,
};
use qexp_core::{
    haar_unitary, intertwiner_dim_of, lambda_gap, packing_bound_log, pair_norm, random_tuple, rep_gap,
    separation_distance, tuple_point, ComplexMatrix, SolverOptions, C64,
};
use serde_json::Value;

const PAULI_TOL: f64 = 1e-8;
const CYCLIC_TOL: f64 = 1e-8;
const INEQUALITY_SLACK: f64 = 1e-8;
const SEPARATION_SLACK: f64 = 1e-8;
const DIRECT_SUM_MAX_EPS: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-6;
const INVARIANCE_TOL: f64 = 1e-9;
/// Kept count of the (n=5, dim=2, eps=0.05, 200 candidates, seed=42) packing,
/// fixed by an oracle-certified reference run.
const PACKING_FIXTURE: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn qexp(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qexp"))
        .args(args)
        .env_remove("QEXP_THREADS")
        .output()
        .map_err(err)?;
    if !out.status.success() {
        return Err(format!("qexp {args:?} failed: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    Ok(out.stdout)
}

fn qexp_json(args: &[&str]) -> Result<Value, String> {
    serde_json::from_slice(&qexp(args)?).map_err(err)
}

fn num(v: &Value, path: &[&str]) -> Result<f64, String> {
    path.iter()
        .fold(v, |node, k| &node[*k])
        .as_f64()
        .ok_or_else(|| format!("missing number at {}", path.join(".")))
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qexp-acceptance-{}-{name}", std::process::id()))
}

fn criterion_1() -> Outcome {
    let v = qexp_json(&["gap", "--pauli2"])?;
    let eps = num(&v, &["epsilon"])?;
    let oracle = 1.0 - common::lambda_oracle(&qexp_core::UnitaryTuple::pauli2());
    ensure((eps - 1.0).abs() <= PAULI_TOL, || format!("epsilon {eps}"))?;
    ensure((eps - oracle).abs() <= PAULI_TOL, || format!("epsilon {eps} vs oracle {oracle}"))?;
    Ok(format!("epsilon = {eps}, dense oracle {oracle}"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 3..=64usize {
        let v = qexp_json(&["cayley", "--group", "cyclic", "--m", &m.to_string()])?;
        let want = 1.0 - (2.0 * std::f64::consts::PI / m as f64).cos();
        let got = num(&v, &["epsilon"])?;
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= CYCLIC_TOL, || format!("m = {m}: {got} vs {want}"))?;
    }
    let z2 = num(&qexp_json(&["cayley", "--group", "cyclic", "--m", "2"])?, &["epsilon"])?;
    ensure(z2 == 2.0, || format!("Z2 epsilon {z2}"))?;
    Ok(format!("m = 3..64 max error {worst:.2e}; Z2 epsilon = {z2}"))
}

fn criterion_3() -> Outcome {
    let k1 = qexp_json(&["koopman", "--k", "1", "--skip-tuple-gap"])?;
    ensure(k1["dim"] == 6, || format!("k=1 dim {}", k1["dim"]))?;
    ensure(k1["doubly_transitive"] == true, || "k=1 not doubly transitive".into())?;
    ensure(k1["perm_commutant_dim"] == 2 && k1["orbits_on_pairs"] == 2, || {
        format!("perm commutant {} vs pair orbits {}", k1["perm_commutant_dim"], k1["orbits_on_pairs"])
    })?;
    ensure(k1["commutant_dim"] == 1 && k1["commutant_source"] == "numeric", || {
        format!("Koopman commutant {}", k1["commutant_dim"])
    })?;
    let k2 = qexp_json(&["koopman", "--k", "2", "--skip-tuple-gap"])?;
    ensure(k2["dim"] == 62, || format!("k=2 dim {}", k2["dim"]))?;
    ensure(k2["doubly_transitive"] == true, || "k=2 not doubly transitive".into())?;
    ensure(k2["group_order"].is_null(), || "k=2 group was enumerated".into())?;
    Ok("k=1: dim 6, doubly transitive, commutants 2 (numeric = pair orbits) and 1; k=2: dim 62, doubly transitive".into())
}

fn criterion_4() -> Outcome {
    let opts = SolverOptions::dense();
    let g = enumerate_group(&sl_standard_generators(3), DEFAULT_MAX_ORDER, true).map_err(err)?;
    let cay = cayley_gap(&g, &opts).map_err(err)?.epsilon;
    let action = projective_space_action(1, DEFAULT_MAX_SET_SIZE).map_err(err)?;
    // The action is built from exactly the Cayley generators, in order.
    ensure(g.generators() == sl_standard_generators(3).as_slice(), || "generator sets differ".into())?;
    ensure(action.generator_perms().len() == g.generators().len(), || "generator counts differ".into())?;
    let t = rep_to_tuple(koopman_rep(&action).map_err(err)?, opts.unitarity_tol).map_err(err)?;
    let eps = lambda_gap(&t, &opts).map_err(err)?.epsilon;
    ensure(eps >= cay - INEQUALITY_SLACK, || format!("Koopman {eps} < Cayley {cay}"))?;
    Ok(format!("Koopman tuple epsilon {eps} >= Cayley epsilon {cay}"))
}

fn criterion_5() -> Outcome {
    let opts = SolverOptions::dense();
    let gens = GroupSpec::SymmetricGroup { m: 5 }.permutation_generators().expect("permutation group");
    let s5 = enumerate_group(&gens, DEFAULT_MAX_ORDER, true).map_err(err)?;
    ensure(s5.order() == 120, || format!("|S5| = {}", s5.order()))?;
    let s: Vec<Permutation> = s5.generators().to_vec();
    let signs: Vec<i32> = s.iter().map(Permutation::sign).collect();
    let pi_t = koopman_rep(&GroupAction::new(5, s).map_err(err)?).map_err(err)?;
    let pi_r = twist(&pi_t, &signs).map_err(err)?;
    let pi: Vec<ComplexMatrix> = pi_t
        .iter()
        .zip(&pi_r)
        .map(|(a, b)| ComplexMatrix::block_diag(&[a, b]))
        .collect();
    let pp: Vec<ComplexMatrix> = pi.iter().map(|m| m.kron(&m.conj())).collect();
    ensure(pp[0].rows() == 64, || "π⊗π̄ is not 64-dimensional".into())?;
    let eps_star = rep_gap(&pp, &opts).map_err(err)?.epsilon;
    let xt = tuple_point(&pi_t, opts.unitarity_tol).map_err(err)?;
    let xr = tuple_point(&pi_r, opts.unitarity_tol).map_err(err)?;
    let re = xt.inner(&xr).map_err(err)?.re;
    let d = separation_distance(&xt, &xr).map_err(err)?;
    let inter = intertwiner_dim_of(&pi_t, &pi_r, opts.fixed_tol).map_err(err)?;
    ensure(re <= 1.0 - eps_star, || format!("Re<x,y> = {re} > 1 - ε* = {}", 1.0 - eps_star))?;
    ensure(d >= (2.0 * eps_star).sqrt() - SEPARATION_SLACK, || {
        format!("distance {d} < sqrt(2ε*) = {}", (2.0 * eps_star).sqrt())
    })?;
    ensure(inter == 0, || format!("intertwiner dim {inter}"))?;
    Ok(format!("ε* = {eps_star}, Re<x(t),x(r)> = {re}, distance {d}, intertwiner dim 0"))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..50u64 {
        let dim = 2 + (i % 2) as usize;
        let u = random_tuple(4, dim, 6000 + 2 * i, false).map_err(err)?;
        let v = random_tuple(4, dim, 6001 + 2 * i, false).map_err(err)?;
        let eps = lambda_gap(&u.direct_sum(&v).map_err(err)?, &SolverOptions::default()).map_err(err)?.epsilon;
        worst = worst.max(eps);
        ensure(eps <= DIRECT_SUM_MAX_EPS, || format!("pair {i}: epsilon {eps}"))?;
    }
    Ok(format!("50 pairs, max epsilon {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let iter = SolverOptions::iterative();
    let dense = SolverOptions::dense();
    let (mut worst_gap, mut worst_norm): (f64, f64) = (0.0, 0.0);
    for i in 0..100u64 {
        let n = 1 + (i % 6) as usize;
        let dim = 2 + ((i / 6) % 5) as usize;
        let u = random_tuple(n, dim, 7000 + i, false).map_err(err)?;
        let v = random_tuple(n, dim, 8000 + i, false).map_err(err)?;
        let oracle = common::lambda_oracle(&u);
        let li = lambda_gap(&u, &iter).map_err(err)?.lambda;
        let ld = lambda_gap(&u, &dense).map_err(err)?.lambda;
        let po = common::pair_norm_oracle(&u, &v);
        let pi = pair_norm(&u, &v, &iter).map_err(err)?;
        let pd = pair_norm(&u, &v, &dense).map_err(err)?;
        worst_gap = worst_gap.max((li - oracle).abs()).max((ld - oracle).abs());
        worst_norm = worst_norm.max((pi - po).abs()).max((pd - po).abs());
        ensure((li - oracle).abs() <= ORACLE_TOL && (ld - oracle).abs() <= ORACLE_TOL, || {
            format!("tuple {i} (n={n}, N={dim}): lambda iterative {li}, dense {ld}, oracle {oracle}")
        })?;
        ensure((pi - po).abs() <= ORACLE_TOL && (pd - po).abs() <= ORACLE_TOL, || {
            format!("tuple {i}: pair norm iterative {pi}, dense {pd}, oracle {po}")
        })?;
    }
    Ok(format!("100 tuples, max lambda error {worst_gap:.2e}, max pair-norm error {worst_norm:.2e}"))
}

const PACK_ARGS: [&str; 11] = [
    "pack", "--n", "5", "--dim", "2", "--eps", "0.05", "--candidates", "200", "--seed", "42",
];

fn criterion_8() -> Outcome {
    let path = temp("pack.json");
    let p = path.to_str().expect("utf-8 temp path");
    qexp(&[&PACK_ARGS[..], &["-o", p]].concat())?;
    let packing: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(err)?).map_err(err)?;
    let cert = qexp_json(&["certify", p]);
    std::fs::remove_file(&path).ok();
    let cert = cert?;
    let kept = packing["kept_indices"].as_array().map_or(0, Vec::len);
    ensure(cert["clean"] == true, || format!("violations: {}", cert["violations"]))?;
    ensure(kept == PACKING_FIXTURE, || format!("kept {kept}, fixture {PACKING_FIXTURE}"))?;
    let bound = packing_bound_log(5, 2, 0.05).map_err(err)?;
    let log_count = num(&packing, &["log_count"])?;
    ensure(log_count <= bound, || format!("log count {log_count} > bound {bound}"))?;
    Ok(format!("kept {kept}, zero violations, ln(count) = {log_count:.4} <= {bound:.4}"))
}

fn criterion_9() -> Outcome {
    let k2 = ring_closure(2, &standard_ring_generators(2)).map_err(err)?;
    let k3 = ring_closure(3, &standard_ring_generators(3)).map_err(err)?;
    let zero = ring_closure(2, &[GF2Matrix::zero(2)]).map_err(err)?;
    let cli = qexp_json(&["ring", "--k", "3"])?;
    ensure(k2 == 16 && k3 == 512 && zero == 1, || format!("sizes {k2}, {k3}, {zero}"))?;
    ensure(cli["size"] == 512, || format!("CLI size {}", cli["size"]))?;
    Ok(format!("k=2: {k2}, k=3: {k3}, {{0}}: {zero}"))
}

fn criterion_10() -> Outcome {
    let opts = SolverOptions::default();
    for i in 0..20u64 {
        let n = 1 + (i % 5) as usize;
        let dim = 2 + (i % 4) as usize;
        let u = random_tuple(n, dim, 9000 + i, false).map_err(err)?;
        let base = lambda_gap(&u, &opts).map_err(err)?.lambda;

        let phases: Vec<C64> = (0..n).map(|j| C64::from_polar(1.0, 0.9 * (i + 1) as f64 + 1.7 * j as f64)).collect();
        let ph = lambda_gap(&u.with_phases(&phases).map_err(err)?, &opts).map_err(err)?.lambda;
        ensure((ph - base).abs() <= INVARIANCE_TOL, || format!("phase case {i}: {ph} vs {base}"))?;

        let w = haar_unitary(dim, 9500 + i);
        let cj = lambda_gap(&u.conjugate_by(&w).map_err(err)?, &opts).map_err(err)?.lambda;
        ensure((cj - base).abs() <= INVARIANCE_TOL, || format!("conjugation case {i}: {cj} vs {base}"))?;

        let self_norm = pair_norm(&u, &u, &opts).map_err(err)?;
        ensure((self_norm - n as f64).abs() <= INVARIANCE_TOL, || format!("pair_norm(u,u) = {self_norm}, n = {n}"))?;
    }
    let first = qexp(&[&PACK_ARGS[..], &["--threads", "1"]].concat())?;
    let second = qexp(&PACK_ARGS)?;
    ensure(first == second, || "packing JSON differs between runs".into())?;
    Ok(format!("20 phase, 20 conjugation, 20 self-norm cases; packing JSON identical ({} bytes)", first.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Pauli expander gap", Duration::from_secs(1), criterion_1),
        ("cyclic Cayley gaps", Duration::from_secs(5), criterion_2),
        ("Koopman construction", Duration::from_secs(30), criterion_3),
        ("expander to quantum expander inequality", Duration::from_secs(60), criterion_4),
        ("separation geometry of π ⊕ twisted π", Duration::from_secs(60), criterion_5),
        ("direct sums have no gap", Duration::from_secs(30), criterion_6),
        ("iterative routes match dense oracle", Duration::from_secs(120), criterion_7),
        ("packing, certification and bound", Duration::from_secs(120), criterion_8),
        ("ring generation", Duration::from_secs(5), criterion_9),
        ("invariance and determinism", Duration::from_secs(120), criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= *limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
