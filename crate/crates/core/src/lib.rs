//! Construction, measurement and certification of quantum expanders.
//!
//! * [`spectral`] computes `λ(u)`, `ε(u)`, representation gaps, pair norms
//!   `‖Σ u_j ⊗ conj(v_j)‖` and intertwiner dimensions.
//! * [`geometry`] embeds tuples in the normalised Hilbert–Schmidt sphere and
//!   evaluates the volume bound on separated families.
//! * [`groups`] enumerates finite groups, builds permutation and Koopman
//!   representations and Cayley-graph gaps.
//! * [`sampler`] and [`packing`] draw Haar-random tuples and greedily build
//!   certified separated families of quantum expanders.

pub mod error;
pub mod geometry;
pub mod groups;
pub mod matrix;
pub mod packing;
pub mod sampler;
pub mod solver;
pub mod spectral;
pub mod tuple;

pub use error::{QexpError, Result};
pub use geometry::{packing_bound_log, separation_distance, tuple_point, TuplePoint};
pub use matrix::{ComplexMatrix, C64};
pub use packing::{
    assemble_direct_sum, certify_family, greedy_pack, greedy_pack_candidates, CertificationReport, PackParams,
    PackingResult, Violation,
};
pub use sampler::{derive_seed, haar_unitary, random_tuple};
pub use solver::{Method, MethodChoice, SolverOptions, SpectralReport};
pub use spectral::{
    apply_superop, commutant_dim, hs_inner, intertwiner_dim, intertwiner_dim_of, lambda_gap, pair_norm,
    pair_norm_report, rep_gap, NormReport,
};
pub use tuple::UnitaryTuple;
