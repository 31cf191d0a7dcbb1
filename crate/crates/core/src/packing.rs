//! Greedy construction of ε-separated families of ε-quantum expanders, their
//! block-diagonal assembly, and independent certification.
//!
//! A family `T ⊂ U(N)^n` is kept only if every member has `ε(u) ≥ eps` and
//! every pair satisfies `‖Σ u_j ⊗ conj(v_j)‖ ≤ n(1 − eps)`. Assembling the
//! family block-diagonally gives a representation whose blocks are
//! irreducible and pairwise inequivalent.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QexpError, Result};
use crate::geometry::packing_bound_log;
use crate::matrix::ComplexMatrix;
use crate::sampler::{derive_seed, random_tuple};
use crate::solver::{SolverOptions, SpectralReport};
use crate::spectral::{commutant_dim, intertwiner_dim, lambda_gap, pair_norm};
use crate::tuple::{TupleWire, UnitaryTuple};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackParams {
    pub n: usize,
    pub dim: usize,
    pub eps: f64,
    pub num_candidates: usize,
    pub seed: u64,
    /// Draw `n/2` Haar unitaries and close under adjoints.
    #[serde(default)]
    pub symmetric: bool,
}

impl PackParams {
    pub fn new(n: usize, dim: usize, eps: f64, num_candidates: usize, seed: u64) -> Self {
        Self {
            n,
            dim,
            eps,
            num_candidates,
            seed,
            symmetric: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(QexpError::InvalidParameter("n must be positive".into()));
        }
        if self.dim < 2 {
            return Err(QexpError::InvalidParameter(format!("dim must be at least 2, got {}", self.dim)));
        }
        check_eps(self.eps)?;
        if self.symmetric && self.n % 2 == 1 {
            return Err(QexpError::InvalidParameter("symmetric candidates need even n".into()));
        }
        Ok(())
    }

    /// Seed of candidate `index`: `seed ⊕ splitmix64(index)`.
    pub fn candidate_seed(&self, index: usize) -> u64 {
        derive_seed(self.seed, index as u64)
    }

    pub fn candidate(&self, index: usize) -> Result<UnitaryTuple> {
        random_tuple(self.n, self.dim, self.candidate_seed(index), self.symmetric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub n: usize,
    pub dim: usize,
    pub eps: f64,
    /// Present when candidates were drawn from seeds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<PackParams>,
    pub candidates_examined: usize,
    pub kept_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept_seeds: Option<Vec<u64>>,
    /// Symmetric matrix of pair norms; the diagonal holds `n`.
    pub pair_certificates: Vec<Vec<f64>>,
    pub gap_certificates: Vec<f64>,
    /// Candidates whose decision came within `convergence_tol` of a threshold.
    pub marginal: Vec<usize>,
    /// `ln |kept|`, absent for an empty family.
    pub log_count: Option<f64>,
    pub log_volume_bound: f64,
    pub options: SolverOptions,
    #[serde(default, rename = "tuples", skip_serializing_if = "Option::is_none")]
    pub saved_tuples: Option<Vec<TupleWire>>,
    #[serde(skip)]
    kept: Vec<UnitaryTuple>,
}

impl PackingResult {
    pub fn kept(&self) -> &[UnitaryTuple] {
        &self.kept
    }

    pub fn kept_count(&self) -> usize {
        self.kept_indices.len()
    }

    /// Embeds the full matrices of the kept tuples in the serialized form.
    pub fn save_tuples(&mut self) {
        self.saved_tuples = Some(self.kept.iter().map(TupleWire::from).collect());
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("packing result serializes")
    }

    /// Parses a stored result and rebuilds the kept tuples, from embedded
    /// matrices when present and from the candidate seeds otherwise.
    pub fn from_json(s: &str) -> Result<Self> {
        let mut r: Self = serde_json::from_str(s)
            .map_err(|e| QexpError::InvalidParameter(format!("malformed packing JSON: {e}")))?;
        r.kept = match (&r.saved_tuples, &r.params) {
            (Some(ts), _) => ts
                .iter()
                .cloned()
                .map(|t| t.into_tuple(r.options.unitarity_tol))
                .collect::<Result<_>>()?,
            (None, Some(p)) => r
                .kept_indices
                .iter()
                .map(|&i| p.candidate(i))
                .collect::<Result<_>>()?,
            (None, None) => {
                return Err(QexpError::InvalidParameter(
                    "packing has neither embedded tuples nor candidate seeds".into(),
                ))
            }
        };
        Ok(r)
    }

    /// Re-checks the type invariants against the stored certificates.
    pub fn invariant_violations(&self) -> Vec<String> {
        let tol = self.options.convergence_tol;
        let mut out = Vec::new();
        for (i, &g) in self.gap_certificates.iter().enumerate() {
            if g < self.eps - tol {
                out.push(format!("member {i} gap {g} below {}", self.eps));
            }
        }
        let limit = self.n as f64 * (1.0 - self.eps) + tol;
        for (i, row) in self.pair_certificates.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if i != j && p > limit {
                    out.push(format!("pair ({i}, {j}) norm {p} above {limit}"));
                }
            }
        }
        if let Some(lc) = self.log_count {
            if lc > self.log_volume_bound {
                out.push(format!("log count {lc} exceeds volume bound {}", self.log_volume_bound));
            }
        }
        out
    }
}

/// Greedy packing over Haar-random candidates drawn from per-index seeds.
/// Candidate gaps are computed in parallel; admission is a serial fold in
/// candidate order, so the result does not depend on the thread count.
pub fn greedy_pack(params: &PackParams, opts: &SolverOptions) -> Result<PackingResult> {
    params.validate()?;
    opts.validate()?;
    let candidates = (0..params.num_candidates)
        .into_par_iter()
        .map(|i| params.candidate(i))
        .collect::<Result<Vec<_>>>()?;
    let mut result = pack(params.n, params.dim, params.eps, candidates, opts)?;
    result.kept_seeds = Some(result.kept_indices.iter().map(|&i| params.candidate_seed(i)).collect());
    result.params = Some(params.clone());
    Ok(result)
}

/// Greedy packing over an explicit candidate list.
pub fn greedy_pack_candidates(candidates: Vec<UnitaryTuple>, eps: f64, opts: &SolverOptions) -> Result<PackingResult> {
    check_eps(eps)?;
    opts.validate()?;
    let (n, dim) = match candidates.first() {
        Some(c) => (c.n(), c.dim()),
        None => return Err(QexpError::InvalidParameter("empty candidate list has no shape".into())),
    };
    if candidates.iter().any(|c| c.n() != n || c.dim() != dim) {
        return Err(QexpError::HeterogeneousFamily("candidates differ in (n, dim)".into()));
    }
    if dim < 2 {
        return Err(QexpError::DegenerateDimension);
    }
    let mut r = pack(n, dim, eps, candidates, opts)?;
    r.saved_tuples = None;
    Ok(r)
}

fn task_opts(opts: &SolverOptions, index: usize) -> SolverOptions {
    SolverOptions {
        seed: derive_seed(opts.seed, index as u64),
        ..opts.clone()
    }
}

fn pack(n: usize, dim: usize, eps: f64, candidates: Vec<UnitaryTuple>, opts: &SolverOptions) -> Result<PackingResult> {
    let tol = opts.convergence_tol;
    let gaps: Vec<SpectralReport> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, c)| lambda_gap(c, &task_opts(opts, i)))
        .collect::<Result<_>>()?;

    let limit = n as f64 * (1.0 - eps);
    let mut kept_indices: Vec<usize> = Vec::new();
    let mut pairs: Vec<Vec<f64>> = Vec::new();
    let mut marginal = Vec::new();
    for (i, (cand, gap)) in candidates.iter().zip(&gaps).enumerate() {
        let mut near = (gap.epsilon - eps).abs() <= tol;
        if gap.epsilon < eps {
            if near {
                marginal.push(i);
            }
            continue;
        }
        let copts = task_opts(opts, i);
        let norms = kept_indices
            .par_iter()
            .map(|&k| pair_norm(cand, &candidates[k], &copts))
            .collect::<Result<Vec<f64>>>()?;
        near |= norms.iter().any(|&p| (p - limit).abs() <= tol);
        if near {
            marginal.push(i);
        }
        if norms.iter().all(|&p| p <= limit) {
            for (row, &p) in pairs.iter_mut().zip(&norms) {
                row.push(p);
            }
            let mut row = norms;
            row.push(n as f64);
            pairs.push(row);
            kept_indices.push(i);
        }
    }

    let gap_certificates = kept_indices.iter().map(|&i| gaps[i].epsilon).collect();
    let kept: Vec<UnitaryTuple> = kept_indices.iter().map(|&i| candidates[i].clone()).collect();
    let log_count = (!kept.is_empty()).then(|| (kept.len() as f64).ln());
    Ok(PackingResult {
        n,
        dim,
        eps,
        params: None,
        candidates_examined: candidates.len(),
        kept_indices,
        kept_seeds: None,
        pair_certificates: pairs,
        gap_certificates,
        marginal,
        log_count,
        log_volume_bound: packing_bound_log(n, dim, eps)?,
        options: opts.clone(),
        saved_tuples: None,
        kept,
    })
}

/// `s_j = ⊕_t t_j`: the block-diagonal tuple of dimension `|family|·dim`.
pub fn assemble_direct_sum(family: &[UnitaryTuple]) -> Result<UnitaryTuple> {
    let first = family
        .first()
        .ok_or_else(|| QexpError::HeterogeneousFamily("family is empty".into()))?;
    if let Some(i) = family.iter().position(|t| t.n() != first.n() || t.dim() != first.dim()) {
        return Err(QexpError::HeterogeneousFamily(format!(
            "member {i} has (n, dim) = ({}, {}), expected ({}, {})",
            family[i].n(),
            family[i].dim(),
            first.n(),
            first.dim()
        )));
    }
    let matrices = (0..first.n())
        .map(|j| {
            let blocks: Vec<&ComplexMatrix> = family.iter().map(|t| &t.matrices()[j]).collect();
            ComplexMatrix::block_diag(&blocks)
        })
        .collect();
    let symmetric = family.iter().all(UnitaryTuple::is_symmetric);
    UnitaryTuple::with_symmetry(matrices, symmetric, crate::tuple::DEFAULT_UNITARITY_TOL * family.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A block whose commutant is larger than the scalars.
    Reducible { member: usize, commutant_dim: usize },
    /// A pair whose norm exceeds `n(1 − eps)`.
    NotSeparated { a: usize, b: usize, pair_norm: f64 },
    /// A pair of blocks with a nonzero intertwiner.
    Equivalent { a: usize, b: usize, intertwiner_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub members: usize,
    pub eps: f64,
    pub commutant_dims: Vec<usize>,
    pub pair_norms: Vec<Vec<f64>>,
    pub intertwiner_dims: Vec<Vec<usize>>,
    pub violations: Vec<Violation>,
}

impl CertificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that each member acts irreducibly and that members are pairwise
/// separated and inequivalent. Violations are reported, never raised.
pub fn certify_family(family: &[UnitaryTuple], eps: f64, opts: &SolverOptions) -> Result<CertificationReport> {
    check_eps(eps)?;
    opts.validate()?;
    if let Some(first) = family.first() {
        if family.iter().any(|t| t.n() != first.n() || t.dim() != first.dim()) {
            return Err(QexpError::HeterogeneousFamily("members differ in (n, dim)".into()));
        }
    }
    let m = family.len();
    let commutant_dims = family
        .par_iter()
        .map(|t| commutant_dim(t, opts.fixed_tol))
        .collect::<Result<Vec<_>>>()?;

    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let pair_data = pairs
        .par_iter()
        .map(|&(a, b)| {
            let p = pair_norm(&family[a], &family[b], opts)?;
            let d = intertwiner_dim(&family[a], &family[b], opts.fixed_tol)?;
            Ok((p, d))
        })
        .collect::<Result<Vec<(f64, usize)>>>()?;

    let mut pair_norms = vec![vec![0.0; m]; m];
    let mut intertwiner_dims = vec![vec![0; m]; m];
    let mut violations = Vec::new();
    for (i, &c) in commutant_dims.iter().enumerate() {
        pair_norms[i][i] = family[i].n() as f64;
        intertwiner_dims[i][i] = c;
        if c != 1 {
            violations.push(Violation::Reducible {
                member: i,
                commutant_dim: c,
            });
        }
    }
    for (&(a, b), &(p, d)) in pairs.iter().zip(&pair_data) {
        pair_norms[a][b] = p;
        pair_norms[b][a] = p;
        intertwiner_dims[a][b] = d;
        intertwiner_dims[b][a] = d;
        let limit = family[a].n() as f64 * (1.0 - eps) + opts.convergence_tol;
        if p > limit {
            violations.push(Violation::NotSeparated { a, b, pair_norm: p });
        }
        if d != 0 {
            violations.push(Violation::Equivalent {
                a,
                b,
                intertwiner_dim: d,
            });
        }
    }
    Ok(CertificationReport {
        members: m,
        eps,
        commutant_dims,
        pair_norms,
        intertwiner_dims,
        violations,
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(QexpError::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")))
    }
}
