use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kdesigns::constructions::{
    build, build_k5_special, imbalance_witness, kc_parameters, kp_parameters, verify_streaming,
    ConstructionError, Family, DEFAULT_MAX_BLOCKS,
};
use kdesigns::design::{verify_bibd, verify_t_design, Design, DesignParams};
use kdesigns::exploded::{explode_design, exploded_parameters, ExplodeError};
use kdesigns::io::{read_design, write_design};
use kdesigns::selftest;

#[derive(Parser)]
#[command(name = "kdesigns", version, about = "Block designs from paths and cycles of complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a design and write it as a design file.
    Gen {
        #[command(subcommand)]
        which: GenTarget,
    },
    /// Print exact parameters.
    Params {
        #[command(subcommand)]
        which: ParamsTarget,
    },
    /// Verify a design file, or a KP/KC design generated on the fly.
    Verify(VerifyArgs),
    /// Replace every block of a design by all of its j-subsets.
    Explode {
        path: PathBuf,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shared-block counts for adjacent and nonadjacent edge pairs of K_n.
    Witness {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        khat: u64,
    },
    /// Run every bundled fixture and construction check.
    Selftest,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    khat: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_BLOCKS)]
    max_blocks: u64,
}

#[derive(Subcommand)]
enum GenTarget {
    Kp(BuildArgs),
    Kc(BuildArgs),
    K5 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ParamsTarget {
    Kp {
        #[arg(long)]
        khat: u64,
    },
    Kc {
        #[arg(long)]
        khat: u64,
    },
    Explode {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        j: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StreamFamily {
    Kp,
    Kc,
}

#[derive(Args)]
struct VerifyArgs {
    /// Design file to verify.
    #[arg(required_unless_present = "stream", conflicts_with = "stream")]
    path: Option<PathBuf>,
    /// Also check every t-subset lies in the same number of blocks.
    #[arg(long, conflicts_with = "stream")]
    t: Option<u32>,
    /// Generate and verify a KP or KC design without storing it.
    #[arg(long, value_enum, requires = "khat")]
    stream: Option<StreamFamily>,
    #[arg(long)]
    khat: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_BLOCKS)]
    max_blocks: u64,
    /// Worker threads for streaming verification (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

/// Outcome classes with fixed exit codes.
enum Failure {
    /// 1: the design is not what was claimed, or could not be read.
    Verification(String),
    /// 2: arguments outside an operation's domain.
    Usage(String),
    /// 3: the block-count ceiling would be exceeded.
    Capacity(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Capacity(m) => m,
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Capacity { .. } => Failure::Capacity(e.to_string()),
            ConstructionError::Domain(_)
            | ConstructionError::Subgraph(_)
            | ConstructionError::Graph(_) => Failure::Usage(e.to_string()),
            ConstructionError::Design(_) => Failure::Verification(e.to_string()),
        }
    }
}

impl From<ExplodeError> for Failure {
    fn from(e: ExplodeError) -> Self {
        match e {
            ExplodeError::Construction(c) => c.into(),
            ExplodeError::BadJ { .. } | ExplodeError::Inadmissible(_) => Failure::Usage(e.to_string()),
            ExplodeError::Design(_) => Failure::Verification(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Verification(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Design, Failure> {
    let file = File::open(path).map_err(|e| io_failure(path, e))?;
    read_design(BufReader::new(file)).map_err(|e| io_failure(path, e))
}

fn emit(design: &Design, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_failure(path, e))?;
            let mut w = BufWriter::new(file);
            write_design(design, &mut w).map_err(|e| io_failure(path, e))?;
            w.flush().map_err(|e| io_failure(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_design(design, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::Verification(e.to_string()))
        }
    }
}

fn print_params(p: &DesignParams) {
    println!("{p}");
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    if let Some(family) = args.stream {
        let family = match family {
            StreamFamily::Kp => Family::Kp,
            StreamFamily::Kc => Family::Kc,
        };
        let khat = args.khat.expect("clap requires --khat with --stream");
        let run = || verify_streaming(family, khat, args.max_blocks);
        let report = match args.threads {
            Some(threads) => rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?
                .install(run),
            None => run(),
        }?;
        println!("{report}");
        return if report.is_balanced() {
            Ok(())
        } else {
            Err(Failure::Verification(format!("{family} khat={khat} is not balanced")))
        };
    }

    let path = args.path.expect("clap requires a path without --stream");
    let design = load(&path)?;
    let report = verify_bibd(&design).map_err(|e| io_failure(&path, e))?;
    println!("{report}");
    let mut ok = report.is_balanced();
    if let Some(t) = args.t {
        let rep = verify_t_design(&design, t).map_err(|e| Failure::Verification(e.to_string()))?;
        println!("{rep}");
        ok &= rep.is_balanced();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} failed verification", path.display())))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { which } => {
            let (design, out) = match which {
                GenTarget::Kp(a) => (build(Family::Kp, a.khat, a.max_blocks)?, a.out),
                GenTarget::Kc(a) => (build(Family::Kc, a.khat, a.max_blocks)?, a.out),
                GenTarget::K5 { out } => (build_k5_special(), out),
            };
            emit(&design, out.as_deref())
        }
        Command::Params { which } => {
            let params = match which {
                ParamsTarget::Kp { khat } => kp_parameters(khat)?,
                ParamsTarget::Kc { khat } => kc_parameters(khat)?,
                ParamsTarget::Explode { v, b, r, k, lambda, j } => {
                    exploded_parameters(&DesignParams::new(v, b, r, k, lambda), j)?
                }
            };
            print_params(&params);
            Ok(())
        }
        Command::Verify(args) => verify(args),
        Command::Explode { path, j, out } => {
            let design = load(&path)?;
            let exploded = explode_design(&design, j)?;
            emit(&exploded, out.as_deref())
        }
        Command::Witness { n, khat } => {
            println!("{}", imbalance_witness(n, khat)?);
            Ok(())
        }
        Command::Selftest => {
            let results = selftest::run();
            let mut failed = 0;
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                println!("{mark} {}: {}", r.name, r.detail);
                failed += usize::from(!r.passed);
            }
            if failed == 0 {
                println!("all {} checks passed", results.len());
                Ok(())
            } else {
                Err(Failure::Verification(format!("{failed} of {} checks failed", results.len())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
