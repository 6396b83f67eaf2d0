//! `hillcap`: build the GF(4096) cyclotomic scheme, verify it, and replay the
//! nonexistence argument for a 352-coclique.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hillcap_core::search::Strategy;

use commands::{Artifact, Ctx, SearchArgs, Verification};
use config::{FileConfig, Overrides, RunConfig};
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "hillcap", version, about, propagate_version = true)]
struct Cli {
    /// Primitive polynomial of GF(4096) as a hex word, e.g. 0x10eb.
    #[arg(long, global = true, env = "HILLCAP_FIELD_POLY", value_name = "HEX")]
    field_poly: Option<String>,

    /// Directory for cached scheme files; caching is off without it.
    #[arg(long, global = true, env = "HILLCAP_CACHE_DIR", value_name = "PATH")]
    cache_dir: Option<PathBuf>,

    /// Ignore any configured cache directory.
    #[arg(long, global = true, env = "HILLCAP_NO_CACHE")]
    no_cache: bool,

    #[arg(long, global = true, env = "HILLCAP_FORMAT", value_enum, default_value_t)]
    format: Format,

    /// Seed for every randomized step.
    #[arg(long, global = true, env = "HILLCAP_SEED")]
    seed: Option<u64>,

    /// Wall-clock budget in seconds.
    #[arg(long, global = true, env = "HILLCAP_BUDGET", value_name = "SECS")]
    budget: Option<f64>,

    /// Canonical class ordering: standard or tau-swapped.
    #[arg(long, global = true, env = "HILLCAP_ORDERING")]
    ordering: Option<String>,

    /// Which of the orderings that reproduce the reference eigenmatrix to start from
    #[arg(long, global = true, env = "HILLCAP_ORDERING_VARIANT")]
    ordering_variant: Option<usize>,

    /// TOML configuration file; flags and environment take precedence.
    #[arg(long, global = true, env = "HILLCAP_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the log/exp tables and report basic field data.
    BuildField,
    /// Check the connection set (or an imported cap) and its hyperplane profile.
    VerifyCap {
        /// Newline-delimited hex vectors to check instead of the connection set.
        #[arg(long, value_name = "PATH")]
        cap_file: Option<PathBuf>,
        /// Also write the profile as size,count CSV.
        #[arg(long, value_name = "PATH")]
        profile_csv: Option<PathBuf>,
    },
    /// Construct the scheme, using the cache when configured.
    BuildScheme,
    /// Check the eigenmatrix against the reference and print it.
    VerifyScheme,
    /// Inner distribution and MacWilliams transform of a vertex set.
    Distributions {
        set_file: PathBuf,
        /// Write the outer distribution (4096 rows) as CSV.
        #[arg(long, value_name = "PATH")]
        outer_csv: Option<PathBuf>,
    },
    /// Run every step of the nonexistence argument and emit the certificate.
    Certify {
        /// Replace the connection set in the graph check.
        #[arg(long, value_name = "PATH")]
        connection_file: Option<PathBuf>,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Look for large cocliques.
    Search {
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        max_iterations: Option<u64>,
        /// Exact search: branch-node limit.
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Only search cocliques containing this element.
        #[arg(long, value_name = "HEX")]
        fix_root: Option<String>,
        /// Write the best coclique as hex words.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Write one artifact to stdout or a file.
    Export {
        #[arg(value_enum)]
        artifact: Artifact,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<commands::Outcome> {
    let file = cli.config.as_deref().map(FileConfig::load).transpose()?;
    let overrides = Overrides {
        field_poly: cli.field_poly,
        cache_dir: cli.cache_dir,
        no_cache: cli.no_cache,
        seed: cli.seed,
        budget: cli.budget,
        ordering: cli.ordering,
        ordering_variant: cli.ordering_variant,
    };
    let ctx = Ctx {
        run: RunConfig::resolve(file, &overrides)?,
        format: cli.format,
    };
    match cli.command {
        Command::BuildField => commands::build_field(&ctx),
        Command::VerifyCap {
            cap_file,
            profile_csv,
        } => commands::verify_cap(&ctx, cap_file.as_deref(), profile_csv.as_ref()),
        Command::BuildScheme => commands::build_scheme(&ctx),
        Command::VerifyScheme => commands::verify_scheme(&ctx),
        Command::Distributions {
            set_file,
            outer_csv,
        } => commands::distributions(&ctx, &set_file, outer_csv.as_ref()),
        Command::Certify {
            connection_file,
            output,
        } => commands::certify(&ctx, connection_file.as_deref(), output.as_ref()),
        Command::Search {
            strategy,
            target,
            max_iterations,
            max_nodes,
            fix_root,
            output,
        } => commands::search(
            &ctx,
            &SearchArgs {
                strategy,
                target,
                max_iterations,
                max_nodes,
                fix_root,
                output,
            },
        ),
        Command::Export { artifact, output } => commands::export(&ctx, artifact, output.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(v) => {
                    eprintln!("hillcap: {v}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("hillcap: {e:#}");
            if e.is::<Verification>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
