//! `smooth-renyi`: entropy, guessing, coding and block-length experiments
//! from JSON source descriptions.

mod commands;
mod failure;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smooth_renyi_core::dist::{mixture_block, JointDistribution, MixtureSource};
use smooth_renyi_core::DEFAULT_MAX_CELLS;

use failure::Failure;
use output::{Format, Unit};

#[derive(Debug, Parser)]
#[command(name = "smooth-renyi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct Common {
    /// Joint distribution JSON: {"x_size", "y_size", "pxy": [[p(x,y) for y] for x]}.
    #[arg(long, conflicts_with = "mixture")]
    dist: Option<PathBuf>,
    /// Mixture JSON: {"weights": [...], "components": [joint, ...]}.
    #[arg(long)]
    mixture: Option<PathBuf>,
    /// Block length for single-shot commands run on a mixture.
    #[arg(long)]
    block: Option<u32>,
    /// Output file (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every randomized step; required by simulation and encoding.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads. Results never depend on this value.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Report information quantities in bits instead of nats.
    #[arg(long)]
    bits: bool,
    /// Cap on dense block cells `(|X||Y|)^n`.
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: usize,
}

impl Common {
    fn unit(&self) -> Unit {
        Unit { bits: self.bits }
    }

    fn check(&self) -> Result<(), Failure> {
        if self.threads == 0 {
            return Err(Failure::validation("invalid_parameter", "--threads must be at least 1"));
        }
        Ok(())
    }

    /// The single-shot source: `--dist`, or the `--block`-fold extension of `--mixture`.
    fn joint(&self) -> Result<JointDistribution, Failure> {
        match (&self.dist, &self.mixture) {
            (Some(d), None) => {
                if self.block.is_some() {
                    return Err(Failure::validation("usage", "--block applies to --mixture only"));
                }
                input::joint(d)
            }
            (None, Some(m)) => {
                let n = self
                    .block
                    .ok_or_else(|| Failure::validation("usage", "--mixture needs --block for this command"))?;
                Ok(mixture_block(&input::mixture(m)?, n, self.max_cells)?)
            }
            _ => Err(Failure::validation(
                "usage",
                "exactly one of --dist or --mixture is required",
            )),
        }
    }

    /// The source for block-length sweeps; a `--dist` is taken as i.i.d.
    fn mixture(&self) -> Result<MixtureSource, Failure> {
        match (&self.dist, &self.mixture) {
            (Some(d), None) => Ok(MixtureSource::iid(input::joint(d)?)),
            (None, Some(m)) => Ok(input::mixture(m)?),
            _ => Err(Failure::validation(
                "usage",
                "exactly one of --dist or --mixture is required",
            )),
        }
    }

    fn seed(&self, why: &str) -> Result<u64, Failure> {
        self.seed
            .ok_or_else(|| Failure::validation("usage", format!("--seed is required {why}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Smooth,
    Arimoto,
    RennerWolf,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyKind {
    Optimal,
    Direct,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conditional smooth Rényi entropy and its variants.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Variant::Smooth)]
        variant: Variant,
        /// Grid step of the exhaustive search (oracle variant).
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Guessing with a give-up option.
    Guess {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Cost per give-up; picks the error budget that minimizes cost + penalty · p_e.
        #[arg(long)]
        penalty: Option<f64>,
        /// Grid step for the penalty search.
        #[arg(long, default_value_t = 1e-3)]
        eps_step: f64,
        #[arg(long, value_enum, default_value_t = StrategyKind::Optimal)]
        strategy: StrategyKind,
        /// Play this many rounds and report empirical estimates.
        #[arg(long)]
        simulate: Option<u64>,
        /// Sweep block lengths 1..=n-max and report exponents.
        #[arg(long, requires = "n_max")]
        exponent: bool,
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Error-tolerant prefix codes with side information.
    Code {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Write the codebook JSON here.
        #[arg(long)]
        emit_codebook: Option<PathBuf>,
        /// Encode `x y` records; writes `y nbits hex` lines.
        #[arg(long, conflicts_with = "decode_file")]
        encode_file: Option<PathBuf>,
        /// Decode `y nbits hex` lines; writes `x y` (or `escape y`) lines.
        #[arg(long)]
        decode_file: Option<PathBuf>,
        #[arg(long, requires = "n_max", conflicts_with_all = ["encode_file", "decode_file"])]
        exponent: bool,
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Finite block-length rates against their single-letter limits.
    Asymptotics {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "rho")]
        alpha: Option<f64>,
        /// Sets alpha = 1/(1+rho).
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        n_max: u32,
        /// Compare smoothed and zero-error exponents of a single i.i.d. component.
        #[arg(long)]
        contrast: bool,
    },
    /// Exhaustive allocation search next to the fast solver.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, report) = match &cli.command {
        Command::Entropy {
            common,
            alpha,
            epsilon,
            variant,
            step,
        } => {
            common.check()?;
            (common, commands::entropy(common, *alpha, *epsilon, *variant, *step)?)
        }
        Command::Oracle {
            common,
            alpha,
            epsilon,
            step,
        } => {
            common.check()?;
            (common, commands::oracle(common, *alpha, *epsilon, *step)?)
        }
        Command::Guess {
            common,
            rho,
            epsilon,
            penalty,
            eps_step,
            strategy,
            simulate,
            exponent,
            n_max,
        } => {
            common.check()?;
            let report = if *exponent {
                commands::guess_exponent(common, *rho, *epsilon, n_max.expect("required by clap"))?
            } else {
                commands::guess(common, *rho, *epsilon, *penalty, *eps_step, *strategy, *simulate)?
            };
            (common, report)
        }
        Command::Code {
            common,
            rho,
            epsilon,
            emit_codebook,
            encode_file,
            decode_file,
            exponent,
            n_max,
        } => {
            common.check()?;
            if *exponent {
                (
                    common,
                    commands::code_exponent(common, *rho, *epsilon, n_max.expect("required by clap"))?,
                )
            } else {
                let joint = common.joint()?;
                let spec = smooth_renyi_core::coding::build_code(&joint, *rho, *epsilon)?;
                if let Some(path) = emit_codebook {
                    output::emit(&commands::codebook(&spec, *rho, *epsilon), Some(path))?;
                }
                if let Some(path) = encode_file {
                    let seed = common.seed("for --encode-file")?;
                    return output::emit(&commands::encode(&spec, path, seed)?, common.out.as_deref());
                }
                if let Some(path) = decode_file {
                    return output::emit(&commands::decode(&spec, path)?, common.out.as_deref());
                }
                (common, commands::code(common, &joint, &spec, *rho, *epsilon)?)
            }
        }
        Command::Asymptotics {
            common,
            alpha,
            rho,
            epsilon,
            n_max,
            contrast,
        } => {
            common.check()?;
            let report = if *contrast {
                let rho = rho.ok_or_else(|| Failure::validation("usage", "--contrast needs --rho"))?;
                commands::contrast(common, rho, *epsilon, *n_max)?
            } else {
                let alpha = match (alpha, rho) {
                    (Some(a), None) => *a,
                    (None, Some(r)) if *r > 0.0 && r.is_finite() => 1.0 / (1.0 + r),
                    (None, Some(r)) => {
                        return Err(Failure::validation(
                            "invalid_parameter",
                            format!("--rho {r} must be positive"),
                        ))
                    }
                    _ => return Err(Failure::validation("usage", "one of --alpha or --rho is required")),
                };
                commands::convergence(common, alpha, *epsilon, *n_max)?
            };
            (common, report)
        }
    };
    output::emit(&report.render(common.format), common.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::validation("usage", e.to_string().trim_end().to_owned());
            eprintln!("{}", f.to_json());
            return f.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            f.exit_code()
        }
    }
}
