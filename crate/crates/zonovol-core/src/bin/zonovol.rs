//! Command-line front door: mixed volumes, intrinsic volumes, inequality
//! checks, stability certificates and hull brackets for bodies given in a
//! JSON file.
//!
//! Exit codes: 0 success (including not-applicable results), 1 parse
//! error, 2 applicability error, 3 enumeration budget exceeded, 4 a
//! checked inequality or certificate was violated.

use clap::{Args, Parser, Subcommand};

use zonovol_core::cli::{
    cmd_bracket, cmd_check, cmd_intrinsics, cmd_mixedvol, cmd_stability_certificate,
    cmd_stability_flatness, cmd_stability_lemma52, cmd_stability_projstab, BracketArgs,
    CheckArgs, CmdResult, FlatnessArgs, IntrinsicsArgs, Lemma52Args, MixedVolArgs, OutputFormat,
    ProjStabArgs, StabilityCertArgs,
};
use zonovol_core::error::Result;

#[derive(Parser)]
#[command(
    name = "zonovol",
    about = "Mixed volumes and intrinsic volumes of zonotopes and polytopes, \
             with reverse mixed-volume inequality checks and stability certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// JSON body definition file
    #[arg(long)]
    bodies: String,
    /// Multiplicities, comma separated, aligned with the body list
    #[arg(long)]
    mult: Option<String>,
    /// Monte Carlo sample count
    #[arg(long, default_value_t = 10_000)]
    mc_samples: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: text or json
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Mixed volume of the bodies with their multiplicities
    Mixedvol {
        #[command(flatten)]
        common: CommonOpts,
        /// Cross-check against the polarization oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Intrinsic volumes V_0..V_n of every body
    Intrinsics {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check one inequality (AF_LOWER, CONJ_1_1, THM_1_3, THM_1_4, ZONOLATE)
    Check {
        #[command(flatten)]
        common: CommonOpts,
        /// Inequality identifier
        #[arg(long)]
        inequality: String,
        /// Multiplicity of the designated body (THM_1_3)
        #[arg(long)]
        gamma: Option<usize>,
        /// Designated multiplicity plus ball copies (THM_1_3)
        #[arg(long)]
        beta: Option<usize>,
        /// Check this many random zonotope configurations instead
        #[arg(long)]
        fuzz: Option<usize>,
    },
    /// Hull dimensions and subspace brackets of the configuration
    Bracket {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Stability certificates and related bounds
    Stability {
        #[command(subcommand)]
        check: StabilityCommand,
    },
}

#[derive(Subcommand)]
enum StabilityCommand {
    /// Full stability certificate (THM_1_5, THM_5_1, PROP_4_5, LEMMA_4_6)
    Certificate {
        #[command(flatten)]
        common: CommonOpts,
        /// Theorem identifier
        #[arg(long)]
        theorem: String,
    },
    /// Projection-maximum bound on each body
    Projstab {
        #[command(flatten)]
        common: CommonOpts,
        /// Projection dimension
        #[arg(long)]
        beta: usize,
        /// Restrict to one named body
        #[arg(long)]
        body: Option<String>,
    },
    /// Ball intrinsic-volume ratios V_j(B^n)/kappa_j against 2^(n/2)
    Lemma52 {
        /// Ambient dimension
        #[arg(long)]
        n: usize,
        /// Output format: text or json
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Flatness bound V_a(M) <= (1 + n 2^(n+1) eta) V_a(M|A)
    Flatness {
        #[command(flatten)]
        common: CommonOpts,
        /// Dimension of the coordinate flat A
        #[arg(long)]
        alpha: usize,
        /// Flatness parameter
        #[arg(long)]
        eta: f64,
        /// 1-based coordinate axes spanning A (default: the first alpha)
        #[arg(long)]
        axes: Option<String>,
        /// Restrict to one named body (default: the first)
        #[arg(long)]
        body: Option<String>,
    },
}

fn dispatch(cli: Cli) -> Result<CmdResult> {
    match cli.command {
        Command::Mixedvol { common, oracle } => {
            let format: OutputFormat = common.format.parse()?;
            cmd_mixedvol(&MixedVolArgs {
                bodies_path: &common.bodies,
                mult: common.mult.as_deref(),
                mc_samples: common.mc_samples,
                seed: common.seed,
                format,
                oracle,
            })
        }
        Command::Intrinsics { common } => {
            let format: OutputFormat = common.format.parse()?;
            cmd_intrinsics(&IntrinsicsArgs {
                bodies_path: &common.bodies,
                mc_samples: common.mc_samples,
                seed: common.seed,
                format,
            })
        }
        Command::Check {
            common,
            inequality,
            gamma,
            beta,
            fuzz,
        } => {
            let format: OutputFormat = common.format.parse()?;
            cmd_check(&CheckArgs {
                bodies_path: &common.bodies,
                inequality: &inequality,
                mult: common.mult.as_deref(),
                gamma,
                beta,
                mc_samples: common.mc_samples,
                seed: common.seed,
                fuzz,
                format,
            })
        }
        Command::Bracket { common } => {
            let format: OutputFormat = common.format.parse()?;
            cmd_bracket(&BracketArgs {
                bodies_path: &common.bodies,
                mult: common.mult.as_deref(),
                format,
            })
        }
        Command::Stability { check } => match check {
            StabilityCommand::Certificate { common, theorem } => {
                let format: OutputFormat = common.format.parse()?;
                cmd_stability_certificate(&StabilityCertArgs {
                    theorem: &theorem,
                    bodies_path: &common.bodies,
                    mult: common.mult.as_deref(),
                    mc_samples: common.mc_samples,
                    seed: common.seed,
                    format,
                })
            }
            StabilityCommand::Projstab { common, beta, body } => {
                let format: OutputFormat = common.format.parse()?;
                cmd_stability_projstab(&ProjStabArgs {
                    bodies_path: &common.bodies,
                    body: body.as_deref(),
                    beta,
                    mc_samples: common.mc_samples,
                    seed: common.seed,
                    format,
                })
            }
            StabilityCommand::Lemma52 { n, format } => {
                let format: OutputFormat = format.parse()?;
                cmd_stability_lemma52(&Lemma52Args { n, format })
            }
            StabilityCommand::Flatness {
                common,
                alpha,
                eta,
                axes,
                body,
            } => {
                let format: OutputFormat = common.format.parse()?;
                cmd_stability_flatness(&FlatnessArgs {
                    bodies_path: &common.bodies,
                    body: body.as_deref(),
                    alpha,
                    eta,
                    axes: axes.as_deref(),
                    mc_samples: common.mc_samples,
                    seed: common.seed,
                    format,
                })
            }
        },
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(result) => {
            print!("{}", result.stdout);
            std::process::exit(result.exit_code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
