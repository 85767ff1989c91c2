//! `mmalg`: generate, check, transform and run bilinear matrix-multiplication algorithms.
//!
//! Exit codes: 0 success, 1 mathematically invalid input or output (failed verification,
//! singular matrix), 2 usage or format errors.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmalg::format::{parse_algorithm, parse_transform, write_algorithm, write_transform};
use mmalg::{
    classical, dual, exponent, known_bounds, mat_classical_multiply, pan_aggregation, predicted_cost,
    random_equivalence, recursive_invert, recursive_multiply, squareify, strassen_222, tensor_product, verify_brent,
    verify_trilinear_random, BilinearAlgorithm, BoundPattern, DimensionTriple, DualityPermutation, Error, Gf61, Matrix,
    Rational, RecursionConfig, MERSENNE_61,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "mmalg",
    version,
    about = "Bilinear matrix-multiplication algorithm workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in algorithm
    Gen(GenArgs),
    /// Check an algorithm file exactly (Brent equations) or by random evaluation
    Verify(VerifyArgs),
    /// Rank, exponent, coefficient counts and known bounds of an algorithm file
    Info { path: PathBuf },
    /// Known rank bounds, for one shape or the whole table
    Bounds {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// One of the six dual algorithms
    Dual {
        path: PathBuf,
        /// Output shape as a permutation of `mkn`
        #[arg(long, default_value = "knm")]
        perm: DualityPermutation,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tensor (Kronecker) product of two algorithms
    Product {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Square algorithm from the product with both rotations
    Square {
        path: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Apply an equivalence transform, random or read from a file
    Equiv(EquivArgs),
    /// Multiply two matrix files recursively
    Multiply {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invert a matrix file by recursive block elimination
    Invert {
        path: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Measured and predicted operation counts as CSV
    Bench {
        #[command(flatten)]
        run: RunArgs,
        /// Sizes as `a..b` (inclusive) or a comma-separated list
        #[arg(long, default_value = "2,4,8,16,32,64")]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Classical,
    Strassen,
    Pan,
}

#[derive(Args)]
struct GenArgs {
    kind: Kind,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Brent,
    Random,
}

#[derive(Args)]
struct VerifyArgs {
    /// Algorithm file, or `-` for standard input
    path: PathBuf,
    #[arg(long, value_enum, default_value = "brent")]
    mode: Mode,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = MERSENNE_61)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EquivArgs {
    path: PathBuf,
    #[arg(long, conflicts_with = "transform", required_unless_present = "transform")]
    seed: Option<u64>,
    /// An `mmequiv-v1` transform file
    #[arg(long)]
    transform: Option<PathBuf>,
    /// Also save the transform that was applied
    #[arg(long)]
    save_transform: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Square base algorithm: `strassen` or an algorithm file
    #[arg(long, default_value = "strassen")]
    alg: String,
    #[arg(long, default_value_t = 1)]
    threshold: usize,
}

enum Failure {
    Invalid(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlgorithm(_) | Error::SingularMatrix | Error::PivotFailure { .. } => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load_algorithm(path: &Path) -> Result<BilinearAlgorithm, Failure> {
    let text = read_input(path)?;
    parse_algorithm(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_verified(path: &Path) -> Result<BilinearAlgorithm, Failure> {
    let alg = load_algorithm(path)?;
    let report = verify_brent(&alg);
    if !report.valid {
        return Err(Failure::Invalid(format!(
            "{}: not a valid algorithm ({} Brent violations)",
            path.display(),
            report.violations.len()
        )));
    }
    Ok(alg)
}

fn load_matrix(path: &Path) -> Result<Matrix<Rational>, Failure> {
    let text = read_input(path)?;
    Matrix::parse_text(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn shape(d: DimensionTriple) -> String {
    format!("{}x{}x{}", d.m(), d.k(), d.n())
}

fn summary(alg: &BilinearAlgorithm) -> String {
    let exp = exponent(alg).map_or_else(|_| "undefined".to_string(), |e| format!("{e:.4}"));
    format!("dims {}, rank {}, exponent {exp}", shape(alg.dims()), alg.rank())
}

/// Writes `body` to `--out`, or to stdout. The report goes to stdout when a file was
/// written and to stderr otherwise, so piped output stays parseable.
fn emit(out: &OutArgs, body: &str, report: &str) -> CmdResult {
    match &out.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            println!("{report}");
            println!("wrote {}", path.display());
        }
        None => {
            print!("{body}");
            eprintln!("{report}");
        }
    }
    Ok(())
}

/// The Brent gate in front of every transform output.
fn emit_algorithm(out: &OutArgs, alg: &BilinearAlgorithm) -> CmdResult {
    let report = verify_brent(alg);
    if !report.valid {
        return Err(Failure::Invalid(format!(
            "refusing to write: result fails verification ({} Brent violations)",
            report.violations.len()
        )));
    }
    emit(out, &write_algorithm(alg), &summary(alg))
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let alg = match args.kind {
        Kind::Strassen => strassen_222(),
        Kind::Pan => {
            let n = args
                .n
                .ok_or_else(|| Failure::Usage("pan needs --n (an even number >= 2)".into()))?;
            if n < 2 || n % 2 != 0 {
                return Err(Failure::Usage(format!("pan requires an even n >= 2, got {n}")));
            }
            pan_aggregation(n)?
        }
        Kind::Classical => {
            let n = args.n.or(args.m).or(args.k);
            let n = n.ok_or_else(|| Failure::Usage("classical needs --m, --k and --n".into()))?;
            let d = DimensionTriple::new(args.m.unwrap_or(n), args.k.unwrap_or(n), n)?;
            classical(d)
        }
    };
    emit(&args.out, &write_algorithm(&alg), &summary(&alg))
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let alg = load_algorithm(&args.path)?;
    match args.mode {
        Mode::Brent => {
            let report = verify_brent(&alg);
            if report.valid {
                println!("VALID");
                return Ok(());
            }
            println!("INVALID: {} violated Brent equations", report.violations.len());
            for v in report.violations.iter().take(10) {
                println!("  {v}");
            }
            Err(Failure::Invalid("verification failed".into()))
        }
        Mode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            if verify_trilinear_random(&alg, args.trials, args.prime, &mut rng)? {
                println!("VALID ({} random trials mod {})", args.trials, args.prime);
                Ok(())
            } else {
                println!("INVALID: trilinear identity fails at a random point mod {}", args.prime);
                Err(Failure::Invalid("verification failed".into()))
            }
        }
    }
}

fn cmd_info(path: &Path) -> CmdResult {
    let alg = load_algorithm(path)?;
    let d = alg.dims();
    let row = known_bounds().lookup(d);
    let exp = exponent(&alg).map_or_else(|_| "undefined".to_string(), |e| format!("{e:.4}"));
    println!("dims {}", shape(d));
    println!("rank {}, exponent {exp}, bounds {row}", alg.rank());
    let (nu, nv, nw) = alg.nnz();
    println!("nonzeros U {nu}, V {nv}, W {nw}, total {}", nu + nv + nw);
    let valid = verify_brent(&alg).valid;
    println!("brent {}", if valid { "valid" } else { "INVALID" });
    for note in &row.notes {
        println!("known: {note}");
    }
    let rank = alg.rank() as u64;
    if let Some(hi) = row.upper {
        if rank > hi {
            println!("flag: rank {rank} exceeds the known upper bound {hi}");
        }
    }
    if let Some(lo) = row.lower {
        if rank < lo {
            println!("flag: rank {rank} is below the lower bound {lo}");
        }
    }
    Ok(())
}

fn cmd_bounds(m: Option<usize>, k: Option<usize>, n: Option<usize>) -> CmdResult {
    let table = known_bounds();
    match (m, k, n) {
        (None, None, None) => {
            for e in &table.entries {
                match e.pattern {
                    BoundPattern::Exact(d) => {
                        let row = table.lookup(d);
                        println!("{:<8} {:<9} {}", shape(d), row.to_string(), e.note);
                    }
                    BoundPattern::TwoByTwoByN { .. } => println!("{:<8} {:<9} {}", "2x2xn", "[3n+2,-]", e.note),
                }
            }
            println!("any      [(m+n-1)k,-] generic lower bound, over all orderings");
        }
        (Some(m), Some(k), Some(n)) => {
            let d = DimensionTriple::new(m, k, n)?;
            let row = table.lookup(d);
            println!("{} {row}", shape(d));
            for note in &row.notes {
                println!("known: {note}");
            }
        }
        _ => return Err(Failure::Usage("give all of --m, --k and --n, or none".into())),
    }
    Ok(())
}

fn cmd_equiv(args: &EquivArgs) -> CmdResult {
    let alg = load_verified(&args.path)?;
    let t = match (&args.transform, args.seed) {
        (Some(path), _) => {
            parse_transform(&read_input(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(seed)) => random_equivalence(alg.dims(), alg.rank(), seed),
        (None, None) => return Err(Failure::Usage("give --seed or --transform".into())),
    };
    let image = mmalg::apply_equivalence(&alg, &t)?;
    if let Some(path) = &args.save_transform {
        fs::write(path, write_transform(&t)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    emit_algorithm(&args.out, &image)
}

fn run_config(run: &RunArgs) -> Result<RecursionConfig, Failure> {
    let base = if run.alg == "strassen" {
        strassen_222()
    } else {
        load_verified(Path::new(&run.alg))?
    };
    Ok(RecursionConfig::new(base, run.threshold)?)
}

fn cmd_multiply(a: &Path, b: &Path, run: &RunArgs, out: &OutArgs) -> CmdResult {
    let cfg = run_config(run)?;
    let (a, b) = (load_matrix(a)?, load_matrix(b)?);
    if a.cols() != b.rows() {
        return Err(Failure::Usage(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    // rectangular operands are embedded in a common square
    let side = a.rows().max(a.cols()).max(b.cols());
    let (c, cost) = recursive_multiply(&cfg, &a.zero_padded(side, side), &b.zero_padded(side, side))?;
    let c = c.block(0, 0, a.rows(), b.cols());
    emit(out, &c.to_text(), &cost.to_string())
}

fn cmd_invert(path: &Path, run: &RunArgs, out: &OutArgs) -> CmdResult {
    let cfg = run_config(run)?;
    let a = load_matrix(path)?;
    let (x, cost) = recursive_invert(&cfg, &a)?;
    emit(out, &x.to_text(), &cost.to_string())
}

fn parse_sizes(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "bad --sizes `{spec}`: use `a..b` or `a,b,c` with positive sizes"
        ))
    };
    let sizes: Vec<usize> = if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad());
    }
    Ok(sizes)
}

fn cmd_bench(run: &RunArgs, sizes: &str, seed: u64) -> CmdResult {
    let cfg = run_config(run)?;
    let sizes = parse_sizes(sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut crossover = None;
    println!("K,measured_mults,measured_adds,predicted_mults");
    for k in sizes {
        let a = Matrix::from_fn(k, k, |_, _| Gf61::random(&mut rng));
        let b = Matrix::from_fn(k, k, |_, _| Gf61::random(&mut rng));
        let (c, cost) = recursive_multiply(&cfg, &a, &b)?;
        if c != mat_classical_multiply(&a, &b)? {
            return Err(Failure::Invalid(format!(
                "K={k}: recursive product differs from the classical one"
            )));
        }
        let predicted = predicted_cost(&cfg, k)?;
        println!(
            "{k},{},{},{}",
            cost.bilinear_mults, cost.additions, predicted.bilinear_mults
        );
        let k3 = (k * k * k) as u64;
        let classical_ops = k3 + k3 - (k * k) as u64;
        if crossover.is_none() && cost.total_operations() < classical_ops {
            crossover = Some(k);
        }
    }
    match crossover {
        Some(k) => println!("# crossover: fewer total operations than classical from K={k}"),
        None => println!("# crossover: none among the requested sizes"),
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Info { path } => cmd_info(&path),
        Command::Bounds { m, k, n } => cmd_bounds(m, k, n),
        Command::Dual { path, perm, out } => {
            let alg = load_verified(&path)?;
            emit_algorithm(&out, &dual(&alg, perm)?)
        }
        Command::Product { left, right, out } => {
            let (l, r) = (load_verified(&left)?, load_verified(&right)?);
            emit_algorithm(&out, &tensor_product(&l, &r)?)
        }
        Command::Square { path, out } => emit_algorithm(&out, &squareify(&load_verified(&path)?)?),
        Command::Equiv(args) => cmd_equiv(&args),
        Command::Multiply { a, b, run, out } => cmd_multiply(&a, &b, &run, &out),
        Command::Invert { path, run, out } => cmd_invert(&path, &run, &out),
        Command::Bench { run, sizes, seed } => cmd_bench(&run, &sizes, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
