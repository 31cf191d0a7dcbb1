//! One function per subcommand. Each validates its inputs, runs the
//! computation and returns the rendered document.

use std::path::Path;

use qexp_core::groups::{
    enumerate_group, koopman_rep, perm_rep_commutant_dim, projective_space_action, ring_closure,
    sl_standard_generators, standard_ring_generators, cayley_gap, GF2Matrix, GroupSpec, Permutation,
};
use qexp_core::tuple::TupleWire;
use qexp_core::{
    assemble_direct_sum, certify_family, commutant_dim, greedy_pack, intertwiner_dim_of, lambda_gap,
    packing_bound_log, pair_norm_report, random_tuple, rep_gap, CertificationReport, Method, PackParams, QexpError,
    Result, SolverOptions, SpectralReport, UnitaryTuple,
};
use serde::Serialize;

use crate::input::{family_from_file, read_file, tuple_from_arg};
use crate::output::{render, to_json, Format};
use crate::{BoundArgs, CayleyArgs, CertifyArgs, FamilyArgs, GapArgs, GroupKind, KoopmanArgs, PackArgs, PairArgs, RingArgs};

/// Above this many points the commutant dimensions of the Koopman report
/// come from the pair-orbit count instead of a numerical nullspace.
const NUMERIC_COMMUTANT_MAX_POINTS: usize = 16;

fn checked(opts: SolverOptions) -> Result<SolverOptions> {
    opts.validate()?;
    Ok(opts)
}

#[derive(Serialize)]
struct GapReport {
    n: usize,
    dim: usize,
    #[serde(flatten)]
    report: SpectralReport,
    options: SolverOptions,
}

pub fn gap(a: &GapArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    let sources = [a.input.is_some(), a.pauli2, a.identity, a.random.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(QexpError::InvalidParameter(
            "give exactly one of INPUT, --pauli2, --identity or --random".into(),
        ));
    }
    if !a.identity && (a.n.is_some() || a.dim.is_some()) {
        return Err(QexpError::InvalidParameter("--n and --dim only apply to --identity".into()));
    }
    let tuple = if let Some(arg) = &a.input {
        tuple_from_arg(arg, opts.unitarity_tol)?
    } else if a.pauli2 {
        UnitaryTuple::pauli2()
    } else if a.identity {
        let (Some(n), Some(dim)) = (a.n, a.dim) else {
            return Err(QexpError::InvalidParameter("--identity needs --n and --dim".into()));
        };
        UnitaryTuple::identity(n, dim)?
    } else {
        let r = a.random.as_deref().expect("one source is present");
        random_tuple(r[0] as usize, r[1] as usize, r[2], false)?
    };
    let report = if a.rep {
        rep_gap(tuple.matrices(), &opts)?
    } else {
        lambda_gap(&tuple, &opts)?
    };
    Ok(render(
        &GapReport {
            n: tuple.n(),
            dim: tuple.dim(),
            report,
            options: opts,
        },
        format,
    ))
}

#[derive(Serialize)]
struct PairReport {
    pair_norm: f64,
    n: usize,
    separated_at: f64,
    method: Method,
    iterations: usize,
    residual: f64,
    options: SolverOptions,
}

fn two_tuples(a: &PairArgs, opts: &SolverOptions) -> Result<(UnitaryTuple, UnitaryTuple)> {
    let u = tuple_from_arg(&a.a, opts.unitarity_tol)?;
    let v = tuple_from_arg(&a.b, opts.unitarity_tol)?;
    if u.n() != v.n() {
        return Err(QexpError::ShapeMismatch(format!("tuple lengths {} and {} differ", u.n(), v.n())));
    }
    Ok((u, v))
}

pub fn pair_norm(a: &PairArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    let (u, v) = two_tuples(a, &opts)?;
    if u.dim() != v.dim() {
        return Err(QexpError::ShapeMismatch(format!("dimensions {} and {} differ", u.dim(), v.dim())));
    }
    let r = pair_norm_report(&u, &v, &opts)?;
    let n = u.n();
    Ok(render(
        &PairReport {
            pair_norm: r.value,
            n,
            separated_at: 1.0 - r.value / n as f64,
            method: r.method,
            iterations: r.iterations,
            residual: r.residual,
            options: opts,
        },
        format,
    ))
}

#[derive(Serialize)]
struct IntertwinerReport {
    intertwiner_dim: usize,
    n: usize,
    dim_a: usize,
    dim_b: usize,
    fixed_tol: f64,
}

pub fn intertwiner(a: &PairArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    let (u, v) = two_tuples(a, &opts)?;
    let d = intertwiner_dim_of(u.matrices(), v.matrices(), opts.fixed_tol)?;
    Ok(render(
        &IntertwinerReport {
            intertwiner_dim: d,
            n: u.n(),
            dim_a: u.dim(),
            dim_b: v.dim(),
            fixed_tol: opts.fixed_tol,
        },
        format,
    ))
}

#[derive(Serialize)]
struct CayleyReport {
    group: GroupSpec,
    order: usize,
    generator_count: usize,
    #[serde(flatten)]
    report: SpectralReport,
    options: SolverOptions,
}

fn group_spec(a: &CayleyArgs) -> Result<GroupSpec> {
    if let Some(path) = &a.spec {
        return serde_json::from_str(&read_file(path)?)
            .map_err(|e| QexpError::InvalidParameter(format!("malformed group spec: {e}")));
    }
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| QexpError::InvalidParameter(format!("this group needs {flag}")))
    };
    let spec = match a.group.expect("clap requires --group or --spec") {
        GroupKind::Sl3kF2 => GroupSpec::Sl3kF2 { k: need(a.k, "--k")? },
        GroupKind::Cyclic => GroupSpec::Cyclic { m: need(a.m, "--m")? },
        GroupKind::SymmetricGroup => GroupSpec::SymmetricGroup { m: need(a.m, "--m")? },
        GroupKind::CustomPerm => {
            let path = a
                .generators
                .as_ref()
                .ok_or_else(|| QexpError::InvalidParameter("custom_perm needs --generators".into()))?;
            let generators: Vec<Permutation> = serde_json::from_str(&read_file(path)?)
                .map_err(|e| QexpError::InvalidParameter(format!("malformed generators: {e}")))?;
            GroupSpec::CustomPerm { generators }
        }
    };
    spec.validate()?;
    Ok(spec)
}

pub fn cayley(a: &CayleyArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    let spec = group_spec(a)?;
    let g = spec.build(a.max_order)?;
    if g.order() < 2 {
        return Err(QexpError::InvalidParameter("the generated group is trivial".into()));
    }
    let report = g.cayley_gap(&opts)?;
    Ok(render(
        &CayleyReport {
            order: g.order(),
            generator_count: g.generator_count(),
            group: spec,
            report,
            options: opts,
        },
        format,
    ))
}

/// `|SL_m(F_2)| = Π_{i<m} (2^m − 2^i)`, or `None` past `u128`.
fn sl_order(m: usize) -> Option<u128> {
    let full = 1u128.checked_shl(m as u32)?;
    (0..m).try_fold(1u128, |acc, i| acc.checked_mul(full - (1u128 << i)))
}

#[derive(Serialize)]
struct KoopmanReport {
    k: usize,
    set_size: usize,
    dim: usize,
    generator_count: usize,
    transitive: bool,
    orbits_on_pairs: usize,
    doubly_transitive: bool,
    /// Numerical commutant of the permutation representation, when computed.
    perm_commutant_dim: Option<usize>,
    commutant_dim: usize,
    /// `numeric` or `pair_orbits`.
    commutant_source: &'static str,
    rep_gap: SpectralReport,
    tuple_gap: Option<SpectralReport>,
    group_order: Option<usize>,
    cayley_gap: Option<SpectralReport>,
    options: SolverOptions,
}

pub fn koopman(a: &KoopmanArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    if a.k == 0 {
        return Err(QexpError::InvalidParameter("k must be at least 1".into()));
    }
    let action = projective_space_action(a.k, a.max_set_size)?;
    let rep = koopman_rep(&action)?;
    let tuple = UnitaryTuple::new(rep, opts.unitarity_tol)?;
    let set_size = action.set_size();
    let orbits_on_pairs = action.orbit_count_on_pairs();
    let numeric = set_size <= NUMERIC_COMMUTANT_MAX_POINTS;
    let (perm_commutant_dim, commutant, commutant_source) = if numeric {
        (
            Some(perm_rep_commutant_dim(&action, opts.fixed_tol)?),
            commutant_dim(&tuple, opts.fixed_tol)?,
            "numeric",
        )
    } else {
        // ℓ²(X) = constants ⊕ Koopman for a transitive action, so the
        // commutants differ by exactly the scalars on the constants.
        (None, orbits_on_pairs - 1, "pair_orbits")
    };
    let rep_report = rep_gap(tuple.matrices(), &opts)?;
    let tuple_gap = if a.skip_tuple_gap {
        None
    } else {
        Some(lambda_gap(&tuple, &opts)?)
    };
    let m = 3 * a.k;
    let (group_order, cayley) = match sl_order(m) {
        Some(order) if order <= a.max_order as u128 => {
            let g = enumerate_group(&sl_standard_generators(m), a.max_order, true)?;
            (Some(g.order()), Some(cayley_gap(&g, &opts)?))
        }
        _ => (None, None),
    };
    if let Some(path) = &a.rep_out {
        std::fs::write(path, to_json(&TupleWire::from(&tuple)))
            .map_err(|e| QexpError::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(render(
        &KoopmanReport {
            k: a.k,
            set_size,
            dim: tuple.dim(),
            generator_count: tuple.n(),
            transitive: action.is_transitive(),
            orbits_on_pairs,
            doubly_transitive: action.is_doubly_transitive(),
            perm_commutant_dim,
            commutant_dim: commutant,
            commutant_source,
            rep_gap: rep_report,
            tuple_gap,
            group_order,
            cayley_gap: cayley,
            options: opts,
        },
        format,
    ))
}

pub fn pack(a: &PackArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    let params = PackParams {
        symmetric: a.symmetric,
        ..PackParams::new(a.n, a.dim, a.eps, a.candidates, opts.seed)
    };
    params.validate()?;
    let mut r = greedy_pack(&params, &opts)?;
    if a.save_tuples {
        r.save_tuples();
    }
    Ok(render(&r, format))
}

fn load_family(path: &Path) -> Result<(Vec<UnitaryTuple>, Option<f64>)> {
    let (family, eps) = family_from_file(path, SolverOptions::default().unitarity_tol)?;
    if family.is_empty() {
        return Err(QexpError::InvalidParameter("family is empty".into()));
    }
    Ok((family, eps))
}

pub fn assemble(a: &FamilyArgs, format: Format) -> Result<Vec<u8>> {
    let (family, _) = load_family(&a.family)?;
    let s = assemble_direct_sum(&family)?;
    Ok(render(&TupleWire::from(&s), format))
}

#[derive(Serialize)]
struct CertifyReport {
    clean: bool,
    #[serde(flatten)]
    report: CertificationReport,
    options: SolverOptions,
}

pub fn certify(a: &CertifyArgs, format: Format) -> Result<Vec<u8>> {
    let opts = checked(a.solver.options())?;
    let (family, stored_eps) = load_family(&a.family)?;
    let eps = a
        .eps
        .or(stored_eps)
        .ok_or_else(|| QexpError::InvalidParameter("--eps is required for a plain tuple list".into()))?;
    let report = certify_family(&family, eps, &opts)?;
    Ok(render(
        &CertifyReport {
            clean: report.is_clean(),
            report,
            options: opts,
        },
        format,
    ))
}

#[derive(Serialize)]
struct BoundReport {
    n: usize,
    dim: usize,
    eps: f64,
    /// Real dimension `2nN²` of the sphere carrying the tuples.
    real_dimension: usize,
    /// Separation `√(2ε)` between points of a separated family.
    delta: f64,
    log_bound: f64,
}

pub fn bound(a: &BoundArgs, format: Format) -> Result<Vec<u8>> {
    let log_bound = packing_bound_log(a.n, a.dim, a.eps)?;
    Ok(render(
        &BoundReport {
            n: a.n,
            dim: a.dim,
            eps: a.eps,
            real_dimension: 2 * a.n * a.dim * a.dim,
            delta: (2.0 * a.eps).sqrt(),
            log_bound,
        },
        format,
    ))
}

#[derive(Serialize)]
struct RingReport {
    k: usize,
    generator_count: usize,
    size: usize,
    full_ring_size: usize,
    generates_full_ring: bool,
}

pub fn ring(a: &RingArgs, format: Format) -> Result<Vec<u8>> {
    let gens = match &a.gens {
        Some(path) => {
            let gens: Vec<GF2Matrix> = serde_json::from_str(&read_file(path)?)
                .map_err(|e| QexpError::InvalidParameter(format!("malformed generators: {e}")))?;
            if let Some(i) = gens.iter().position(|g| g.k() != a.k) {
                return Err(QexpError::InvalidParameter(format!("generator {i} is not {0}x{0}", a.k)));
            }
            gens
        }
        None if (1..=3).contains(&a.k) => standard_ring_generators(a.k),
        None => return Err(QexpError::RingOutOfRange(a.k)),
    };
    let size = ring_closure(a.k, &gens)?;
    let full_ring_size = 1usize << (a.k * a.k);
    Ok(render(
        &RingReport {
            k: a.k,
            generator_count: gens.len(),
            size,
            full_ring_size,
            generates_full_ring: size == full_ring_size,
        },
        format,
    ))
}
