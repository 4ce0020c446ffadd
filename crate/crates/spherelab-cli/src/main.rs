//! Command-line front end for the sphere-complex toolkit.
//!
//! Every subcommand produces a [`report::Report`]: command metadata, input
//! digests, counts, named pass/fail checks, and any certificates found.
//! Exit codes: 0 when all checks pass, 1 when a check fails (the failing
//! check is named on stderr), 2 for usage errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{usage, CliError, Report};

#[derive(Parser)]
#[command(name = "spherelab", version, about = "Sphere systems, pants decompositions, and rigidity certificates")]
struct Cli {
    /// Emit the report as JSON to PATH, or to stdout if no path is given.
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,

    /// Seed for randomized batteries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Node budget for backtracking searches; overrides SPHERELAB_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the split complex of the s-holed tree model.
    GenPunctured {
        /// Number of boundary spheres (at least 4).
        #[arg(long)]
        s: u8,
        /// Write the 1-skeleton in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Automorphism group of a finite graph.
    Aut(AutArgs),
    /// Pants decompositions of the glued model.
    Glued {
        #[command(subcommand)]
        command: GluedCommand,
    },
    /// Rigid candidate sets and their certificates.
    Rigid {
        #[command(subcommand)]
        command: RigidCommand,
    },
    /// The rank-two ball and its non-rigidity witnesses.
    Rank2 {
        #[command(subcommand)]
        command: Rank2Command,
    },
    /// Bundled re-checks of the statements the library rests on.
    VerifyLemma {
        #[command(subcommand)]
        bundle: LemmaBundle,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct AutArgs {
    /// Graph JSON file ({"n": .., "edges": [[u,v], ..], "colors": [..]?}).
    graph: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<AutCommand>,
}

#[derive(Subcommand)]
enum AutCommand {
    /// The crossing graph on size-2 splits of the s-holed tree model.
    Kneser {
        #[arg(long)]
        s: u8,
        /// Fail unless the group has exactly this order.
        #[arg(long)]
        expect: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GluedCommand {
    /// Check that a sphere list is a pants decomposition.
    PantsCheck {
        /// Pants JSON ({"manifold": .., "spheres": [..]}).
        pants: PathBuf,
    },
    /// Enumerate split spheres for one sphere or for all of them.
    SplitSpheres {
        pants: PathBuf,
        /// Restrict to this sphere (inline JSON).
        #[arg(long)]
        sphere: Option<String>,
    },
    /// Exchange a sphere for one of its split spheres and check reversibility.
    Exchange {
        pants: PathBuf,
        /// The sphere to remove (inline JSON).
        #[arg(long)]
        at: String,
        /// The split sphere to insert (inline JSON).
        #[arg(long)]
        with: String,
        /// Write the exchanged decomposition to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RigidCommand {
    /// Build the candidate set for n handles.
    Build {
        #[arg(long)]
        n: u8,
        /// Write the set to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a detectability certificate for a crossing pair in a set.
    Detect {
        /// Rigid set JSON file.
        #[arg(long)]
        x: PathBuf,
        /// First sphere (inline JSON).
        #[arg(long)]
        alpha: String,
        /// Second sphere (inline JSON).
        #[arg(long)]
        beta: String,
    },
    /// Expand a set to fully split a pants decomposition.
    Expand {
        /// Rigid set JSON file.
        #[arg(long)]
        x: PathBuf,
        /// Pants JSON file.
        #[arg(long)]
        pants: PathBuf,
        /// Write the expansion report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate expansion over every decomposition reached within a depth.
    Exhaust {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        depth: usize,
        /// Write the exhaustion report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Rank2Command {
    /// Build the ball of the Farey-with-fins complex.
    Build {
        #[arg(long)]
        depth: usize,
        /// Write the ball in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Construct a non-rigidity witness for a finite subgraph.
    Witness {
        /// Subgraph JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Write the witness to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ball depth to search in (grown automatically if too small).
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Re-verify a stored witness from scratch.
    Verify {
        /// Witness JSON file.
        #[arg(long)]
        witness: PathBuf,
        /// Ball depth to verify against (grown to contain the domain).
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum LemmaBundle {
    /// Size-2 links pin down every vertex of size at least 3.
    PartitionDetermines {
        #[arg(long)]
        s: Option<u8>,
    },
    /// Automorphisms of the size-2 crossing graph are label permutations.
    Kneser {
        #[arg(long)]
        s: Option<u8>,
        /// Fail unless each group has exactly this order.
        #[arg(long)]
        expect: Option<u64>,
    },
    /// Frozen twin construction in the six-boundary model.
    EvilTwins,
    /// Frozen split-pair construction in the five-boundary model.
    SplitPairs,
    /// Good pairs, goodness checks, and detectability certificates.
    GoodPairs {
        #[arg(long, default_value_t = 3)]
        n: u8,
    },
    /// The base decomposition of the candidate set is fully split.
    FullySplit {
        #[arg(long, default_value_t = 3)]
        n: u8,
    },
    /// Seeded witness battery on the rank-two ball.
    Rank2Battery {
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::GenPunctured { s, dot } => commands::punctured::run(*s, dot.as_deref()),
        Command::Aut(args) => match (&args.command, &args.graph) {
            (Some(AutCommand::Kneser { s, expect }), _) => commands::aut::run_kneser(*s, *expect),
            (None, Some(path)) => commands::aut::run_file(path),
            (None, None) => Err(usage("aut needs a graph file or the kneser subcommand")),
        },
        Command::Glued { command } => match command {
            GluedCommand::PantsCheck { pants } => commands::glued::run_pants_check(pants),
            GluedCommand::SplitSpheres { pants, sphere } => {
                commands::glued::run_split_spheres(pants, sphere.as_deref())
            }
            GluedCommand::Exchange {
                pants,
                at,
                with,
                out,
            } => commands::glued::run_exchange(pants, at, with, out.as_deref()),
        },
        Command::Rigid { command } => match command {
            RigidCommand::Build { n, out } => commands::rigid::run_build(*n, out.as_deref()),
            RigidCommand::Detect { x, alpha, beta } => {
                commands::rigid::run_detect(x, alpha, beta, cli.budget)
            }
            RigidCommand::Expand { x, pants, out } => {
                commands::rigid::run_expand(x, pants, out.as_deref())
            }
            RigidCommand::Exhaust { n, depth, report } => {
                commands::rigid::run_exhaust(*n, *depth, report.as_deref())
            }
        },
        Command::Rank2 { command } => match command {
            Rank2Command::Build { depth, dot } => commands::rank2::run_build(*depth, dot.as_deref()),
            Rank2Command::Witness { input, out, depth } => {
                commands::rank2::run_witness(input, out.as_deref(), *depth)
            }
            Rank2Command::Verify { witness, depth } => commands::rank2::run_verify(witness, *depth),
        },
        Command::VerifyLemma { bundle } => match bundle {
            LemmaBundle::PartitionDetermines { s } => commands::lemmas::run_partition_determines(*s),
            LemmaBundle::Kneser { s, expect } => commands::lemmas::run_kneser(*s, *expect),
            LemmaBundle::EvilTwins => commands::lemmas::run_evil_twins(),
            LemmaBundle::SplitPairs => commands::lemmas::run_split_pairs(),
            LemmaBundle::GoodPairs { n } => commands::lemmas::run_good_pairs(*n, cli.budget),
            LemmaBundle::FullySplit { n } => commands::lemmas::run_fully_split(*n),
            LemmaBundle::Rank2Battery { depth } => {
                commands::lemmas::run_rank2_battery(*depth, cli.seed)
            }
        },
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    match cli.json.as_deref() {
        Some("-") => print!("{}", report.to_json()),
        Some(path) => std::fs::write(path, report.to_json())
            .map_err(|e| usage(format!("cannot write {path}: {e}")))?,
        None => print!("{}", report.render_text()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {}", e.message());
                return ExitCode::from(e.exit_code());
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", report.failing().join("; "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
