//! `qexp`: spectral gaps, separation and certification of quantum expanders.
//!
//! Exit codes: 0 success, 1 solver non-convergence, 2 input or parameter
//! error, 3 degenerate dimension (`N = 1`).

mod commands;
mod input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qexp_core::{MethodChoice, QexpError, SolverOptions};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "qexp", version, about = "Quantum expander gaps, separation and certification")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "QEXP_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral gap of a tuple on trace-zero matrices, or of a representation.
    Gap(GapArgs),
    /// ‖Σ u_j ⊗ conj(v_j)‖ for two tuples.
    PairNorm(PairArgs),
    /// Cayley-graph gap of a finite group.
    Cayley(CayleyArgs),
    /// Koopman representation of SL_{3k}(F_2) on projective space.
    Koopman(KoopmanArgs),
    /// Greedy packing of separated quantum expanders.
    Pack(PackArgs),
    /// Block-diagonal sum of a family.
    Assemble(FamilyArgs),
    /// Irreducibility, separation and inequivalence checks of a family.
    Certify(CertifyArgs),
    /// Logarithm of the volume bound on separated families.
    Bound(BoundArgs),
    /// Size of the subring of M_k(F_2) generated by a set.
    Ring(RingArgs),
    /// Dimension of the intertwiner space of two tuples.
    Intertwiner(PairArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Dense,
    Iterative,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Residual at which the power iteration stops.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Largest operator dimension solved densely under `--method auto`.
    #[arg(long)]
    dense_threshold: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            convergence_tol: self.tol.unwrap_or(d.convergence_tol),
            max_iterations: self.max_iter.unwrap_or(d.max_iterations),
            dense_threshold: self.dense_threshold.unwrap_or(d.dense_threshold),
            seed: self.seed,
            method: match self.method {
                MethodArg::Auto => MethodChoice::Auto,
                MethodArg::Dense => MethodChoice::Dense,
                MethodArg::Iterative => MethodChoice::Iterative,
            },
            ..d
        }
    }
}

#[derive(Args, Debug)]
struct GapArgs {
    /// Tuple JSON file or fixture (`@pauli2`, `@identity:N:DIM`, `@random:N:DIM:SEED`).
    input: Option<String>,
    /// The Pauli tuple (I, σx, σy, σz).
    #[arg(long)]
    pauli2: bool,
    /// `n` copies of the identity; needs `--n` and `--dim`.
    #[arg(long)]
    identity: bool,
    /// Haar-random tuple.
    #[arg(long, num_args = 3, value_names = ["N", "DIM", "SEED"])]
    random: Option<Vec<u64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    /// Treat the matrices as a representation and deflate its fixed vectors.
    #[arg(long)]
    rep: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Tuple JSON file or fixture.
    a: String,
    /// Tuple JSON file or fixture.
    b: String,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupKind {
    #[value(name = "sl3k_f2")]
    Sl3kF2,
    Cyclic,
    #[value(name = "symmetric_group")]
    SymmetricGroup,
    #[value(name = "custom_perm")]
    CustomPerm,
}

#[derive(Args, Debug)]
struct CayleyArgs {
    #[arg(long, value_enum, required_unless_present = "spec")]
    group: Option<GroupKind>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// JSON file with a list of permutations, for `custom_perm`.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Group spec JSON file (`{"kind": ..}`), instead of `--group`.
    #[arg(long, conflicts_with = "group")]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = qexp_core::groups::DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct KoopmanArgs {
    #[arg(long)]
    k: usize,
    /// Also write the Koopman tuple as JSON to this file.
    #[arg(long)]
    rep_out: Option<PathBuf>,
    #[arg(long, default_value_t = qexp_core::groups::DEFAULT_MAX_SET_SIZE)]
    max_set_size: usize,
    #[arg(long, default_value_t = qexp_core::groups::DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Skip the tuple gap on the trace-zero matrices.
    #[arg(long)]
    skip_tuple_gap: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct PackArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    candidates: usize,
    /// Candidates are n/2 Haar unitaries closed under adjoints.
    #[arg(long)]
    symmetric: bool,
    /// Embed the kept matrices, not only their seeds.
    #[arg(long)]
    save_tuples: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Packing result or JSON array of tuples.
    family: PathBuf,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Packing result or JSON array of tuples.
    family: PathBuf,
    /// Separation level; defaults to the packing's own.
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    eps: f64,
}

#[derive(Args, Debug)]
struct RingArgs {
    #[arg(long)]
    k: usize,
    /// JSON list of 0/1 matrices; defaults to {e12, shift}.
    #[arg(long)]
    gens: Option<PathBuf>,
}

fn exit_code(e: &QexpError) -> u8 {
    match e {
        QexpError::NoConvergence { .. } => 1,
        QexpError::DegenerateDimension => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> qexp_core::Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(QexpError::InvalidParameter("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| QexpError::InvalidParameter(format!("thread pool: {e}")))?;
    }
    let bytes = match &cli.command {
        Command::Gap(a) => commands::gap(a, cli.format)?,
        Command::PairNorm(a) => commands::pair_norm(a, cli.format)?,
        Command::Cayley(a) => commands::cayley(a, cli.format)?,
        Command::Koopman(a) => commands::koopman(a, cli.format)?,
        Command::Pack(a) => commands::pack(a, cli.format)?,
        Command::Assemble(a) => commands::assemble(a, cli.format)?,
        Command::Certify(a) => commands::certify(a, cli.format)?,
        Command::Bound(a) => commands::bound(a, cli.format)?,
        Command::Ring(a) => commands::ring(a, cli.format)?,
        Command::Intertwiner(a) => commands::intertwiner(a, cli.format)?,
    };
    write_output(cli.output.as_deref(), &bytes)
}

fn write_output(path: Option<&std::path::Path>, bytes: &[u8]) -> qexp_core::Result<()> {
    let io_err = |e: std::io::Error| QexpError::InvalidParameter(format!("cannot write output: {e}"));
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(io_err),
        None => std::io::stdout().lock().write_all(bytes).map_err(io_err),
    }
}
