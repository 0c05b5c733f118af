//! trialab: construct symmetric and cyclic compositions over finite fields,
//! build order-3 outer automorphisms of their endomorphism algebras, descend
//! them back to symmetric compositions, and classify them up to conjugacy.

mod commands;
mod schema;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "trialab", version, about = "Exact composition-algebra and triality toolkit")]
struct Cli {
    /// Seed for sampled validation checks; TRIALAB_SEED overrides the
    /// built-in default, this flag overrides both.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the machine-readable report (canonical JSON) to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Include wall-clock timing in the report. Off by default so reports
    /// are bit-deterministic.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and induce composition structures.
    Compose {
        #[command(subcommand)]
        cmd: ComposeCmd,
    },
    /// Trialitarian automorphisms: build, descend, classify.
    Triality {
        #[command(subcommand)]
        cmd: TrialityCmd,
    },
    /// Reproduction drivers for the finite-field examples.
    Demo {
        #[command(subcommand)]
        cmd: DemoCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    /// Split para-Cayley composition on Zorn vector matrices.
    ParaCayley,
    /// Okubo composition on trace-zero 3x3 matrices (needs q = 1 mod 3).
    Okubo,
}

#[derive(Subcommand)]
enum ComposeCmd {
    /// Construct a symmetric composition over GF(q) and validate it.
    Build {
        #[arg(long, value_enum)]
        kind: BuildKind,
        /// Field size as q or p^k, e.g. 7, 4, 7^2.
        #[arg(long)]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induce a cyclic composition over the cubic extension of the input's
    /// base field.
    Induce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TrialityCmd {
    /// Build the order-3 generator of an induced composition and verify the
    /// trialitarian invariants.
    Tau {
        /// Symmetric composition file.
        #[arg(long)]
        sigma: PathBuf,
        /// Write the generator as an isotopy file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descend an order-3 semilinear isotopy to a symmetric composition,
    /// printing the scalar audit chain.
    Descend {
        #[arg(long)]
        gamma: PathBuf,
        /// Either the literal "rhohat" or a path to an isotopy file.
        #[arg(long)]
        t: String,
        /// Write the descended symmetric composition.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify two order-3 generators up to conjugacy via descent
    /// invariants.
    Classify {
        #[arg(long)]
        gamma1: PathBuf,
        #[arg(long)]
        t1: String,
        /// Defaults to gamma1.
        #[arg(long)]
        gamma2: Option<PathBuf>,
        #[arg(long)]
        t2: String,
        /// Optional isotopy file conjugating the first presentation onto the
        /// second; enables an explicit witness.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Two-conjugacy-class demonstration over GF(q), q = 1 mod 3.
    Fq {
        #[arg(long)]
        q: u64,
    },
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("TRIALAB_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(trialab_core::DEFAULT_SEED)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = resolve_seed(cli.seed);
    let started = std::time::Instant::now();

    let outcome = match cli.cmd {
        Cmd::Compose {
            cmd: ComposeCmd::Build { kind, field, out },
        } => commands::build(kind.into(), &field, out.as_deref(), seed),
        Cmd::Compose {
            cmd: ComposeCmd::Induce { input, out },
        } => commands::induce(&input, &out, seed),
        Cmd::Triality {
            cmd: TrialityCmd::Tau { sigma, out },
        } => commands::tau(&sigma, out.as_deref(), seed),
        Cmd::Triality {
            cmd: TrialityCmd::Descend { gamma, t, out },
        } => commands::descend(&gamma, &t, out.as_deref(), seed),
        Cmd::Triality {
            cmd:
                TrialityCmd::Classify {
                    gamma1,
                    t1,
                    gamma2,
                    t2,
                    witness,
                },
        } => commands::classify(
            &gamma1,
            &t1,
            gamma2.as_deref().unwrap_or(&gamma1),
            &t2,
            witness.as_deref(),
            seed,
        ),
        Cmd::Demo {
            cmd: DemoCmd::Fq { q },
        } => commands::demo_fq(q, seed),
    };

    match outcome {
        Ok(mut report) => {
            if cli.timing {
                report.timing_ms = Some(started.elapsed().as_millis() as u64);
            }
            if let Some(path) = &cli.report {
                if let Err(e) = schema::write_canonical(path, &report) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if report.checks.iter().all(|c| c.status == "pass") {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<BuildKind> for commands::Kind {
    fn from(k: BuildKind) -> commands::Kind {
        match k {
            BuildKind::ParaCayley => commands::Kind::ParaCayley,
            BuildKind::Okubo => commands::Kind::Okubo,
        }
    }
}
