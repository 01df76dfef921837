//! `fellb`: checks and computations for Fell bundles over finite groups.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
//! errors (unreadable files, malformed JSON, invalid parameters, size caps).

mod commands;

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fellb", version, about = "Fell bundles over finite groups")]
struct Cli {
    /// Seed for every randomized routine.
    #[arg(long, global = true, env = "FELLB_SEED", default_value_t = fellb_core::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

/// Where a command finds its bundle.
#[derive(Args, Clone)]
pub struct BundleArg {
    /// Bundle descriptor file.
    #[arg(long, conflicts_with = "family")]
    pub bundle: Option<PathBuf>,
    /// A shipped bundle family (see `fellb families`).
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the bundle axioms and saturation of a descriptor.
    Verify { path: PathBuf },
    /// Run the verification suite over the shipped families.
    Suite {
        /// Only families whose name starts with this prefix.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = fellb_core::suite::DESK_CAP)]
        max_order: usize,
        #[arg(long, default_value_t = fellb_core::suite::DESK_CAP)]
        max_ambient: usize,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also write a CSV table (name, anchor, status, residual, ms).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Report zero timings so that reports are byte-stable.
        #[arg(long)]
        no_timings: bool,
    },
    /// l1, l2 and universal norms of a section.
    Norm {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        section: PathBuf,
    },
    /// Dual norm of a functional.
    Bnorm {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        functional: PathBuf,
    },
    /// Positive-definiteness test of a functional.
    Posdef {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        functional: PathBuf,
        #[arg(long, default_value_t = fellb_core::functional::POSITIVITY_TOL)]
        tol: f64,
    },
    /// GNS construction of a positive functional.
    Gns {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        functional: PathBuf,
    },
    /// Elements of the Fourier space of a dynamical bundle.
    Fourier {
        #[command(subcommand)]
        command: FourierCommand,
    },
    /// Block data of the double crossed product against A ⊗ M_|G|.
    Takai {
        /// One of the shipped instances; all of them by default.
        #[arg(long)]
        system: Option<String>,
    },
    /// Exploratory probes.
    Probe {
        #[command(subcommand)]
        command: ProbeCommand,
    },
    /// List the shipped bundle families.
    Families,
    /// Print the descriptor of a shipped family.
    Export { family: String },
}

/// `λ_{ξ,η}` from two section files, or random sections from the seed.
#[derive(Args, Clone)]
pub struct CoefficientArg {
    #[arg(long, requires = "eta")]
    pub xi: Option<PathBuf>,
    #[arg(long, requires = "xi")]
    pub eta: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FourierCommand {
    /// Values of `λ_{ξ,η}` on the fiber bases.
    Eval {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        coefficient: CoefficientArg,
    },
    /// Certified interval for the norm of `λ_{ξ,η}`.
    Norm {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        coefficient: CoefficientArg,
        #[arg(long, default_value_t = 2)]
        budget: usize,
    },
    /// The element that is `(e, a†)` on `K` and zero elsewhere.
    Eymard {
        #[arg(long)]
        family: String,
        /// Comma-separated element indices.
        #[arg(long = "K", value_delimiter = ',', required = true)]
        k: Vec<usize>,
    },
    /// Følner approximate identity and its defect on a random element.
    Folner {
        #[arg(long)]
        family: String,
        #[arg(long = "K", value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum ProbeCommand {
    /// Search for a bounded approximate identity over a list of ε.
    LeptinConverse {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed;
    let result = match cli.command {
        Command::Verify { path } => commands::verify(&path),
        Command::Suite { family, max_order, max_ambient, json, csv, no_timings } => {
            let cfg = fellb_core::suite::SuiteConfig { seed, family_prefix: family, max_order, max_ambient };
            commands::suite(&cfg, json.as_deref(), csv.as_deref(), no_timings)
        }
        Command::Norm { bundle, section } => commands::norm(&bundle, &section),
        Command::Bnorm { bundle, functional } => commands::bnorm(&bundle, &functional),
        Command::Posdef { bundle, functional, tol } => commands::posdef(&bundle, &functional, tol),
        Command::Gns { bundle, functional } => commands::gns(&bundle, &functional),
        Command::Fourier { command } => match command {
            FourierCommand::Eval { family, coefficient } => commands::fourier_eval(&family, &coefficient, seed),
            FourierCommand::Norm { family, coefficient, budget } => {
                commands::fourier_norm(&family, &coefficient, budget, seed)
            }
            FourierCommand::Eymard { family, k } => commands::fourier_eymard(&family, &k),
            FourierCommand::Folner { family, k, eps, budget } => {
                commands::fourier_folner(&family, &k, eps, budget, seed)
            }
        },
        Command::Takai { system } => commands::takai(system.as_deref(), seed),
        Command::Probe { command } => match command {
            ProbeCommand::LeptinConverse { family, eps, samples } => commands::leptin(&family, &eps, samples, seed),
        },
        Command::Families => commands::families(),
        Command::Export { family } => commands::export(&family),
    };
    match result {
        Ok(outcome) => {
            if let Some(text) = outcome.stdout {
                // a closed pipe (e.g. `| head`) is not an error
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                if let Some(msg) = outcome.failure {
                    eprintln!("check failed: {msg}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
