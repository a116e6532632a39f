//! Verification campaigns for Plancherel transforms, admissibility
//! criteria and the admissible-vector construction, from the command
//! line. Every run writes a canonical JSON report (sorted keys, fixed
//! float formatting) and exits 0 only if all invoked checks pass.

mod commands;
mod config;
mod gridio;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "wavegroup",
    about = "Plancherel-side admissibility checks and admissible-vector construction on group grids",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Plain-text `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report output path (canonical JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot-data CSV output path, for subcommands that produce curves.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Battery seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Battery size.
    #[arg(long)]
    battery: Option<usize>,
}

impl CommonOpts {
    fn build(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(csv) = &self.csv_out {
            cfg.csv_out = Some(csv.clone());
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(battery) = self.battery {
            cfg.battery = battery;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verification campaigns.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Admissible-vector construction for the regular representation.
    #[command(subcommand)]
    Admissible(AdmissibleCommand),
    /// Admissibility checks for subspaces and vectors.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Growth of the required admissible-vector norm on unimodular models.
    NoGo {
        #[command(flatten)]
        common: CommonOpts,
        /// Group model: realline (the obstruction) or cyclic (the
        /// discrete contrast).
        #[arg(long)]
        model: String,
        /// Dual extents (realline) or group orders (cyclic), comma separated.
        #[arg(long, value_delimiter = ',')]
        extents: Vec<f64>,
    },
    /// Wavelet analysis of a pair of grid functions.
    Transform {
        #[command(flatten)]
        common: CommonOpts,
        /// Representation: `regular` or `quasiregular`.
        #[arg(long)]
        rep: String,
        /// Analyzing vector (CSV grid function).
        #[arg(long)]
        eta: PathBuf,
        /// Analyzed vector (CSV grid function).
        #[arg(long)]
        phi: PathBuf,
        /// Where to write the coefficient field (CSV on the group grid).
        #[arg(long)]
        coeffs: Option<PathBuf>,
    },
    /// Summarize a previously written report and exit by its verdict.
    Report {
        /// Report JSON to read.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Unitarity and inversion battery for one model's Plancherel transform.
    Plancherel {
        #[command(flatten)]
        common: CommonOpts,
        /// Group model: cyclic, realline or affine.
        #[arg(long)]
        model: String,
        /// Cyclic group order (overrides the config).
        #[arg(long)]
        n: Option<u64>,
    },
    /// Certificates of the dyadic-slice construction.
    Construction {
        #[command(flatten)]
        common: CommonOpts,
        /// Slicing constant (>= 2 certified; > 1 accepted with a warning).
        #[arg(long)]
        c: Option<f64>,
        /// Extra shift applied on top of the minimal one.
        #[arg(long)]
        shift: Option<usize>,
    },
}

#[derive(Subcommand)]
enum AdmissibleCommand {
    /// End-to-end admissible vector for the affine regular representation.
    Affine {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        shift: Option<usize>,
        /// Also run one translation-refinement step and require the
        /// quadrature defect to decrease.
        #[arg(long, default_value_t = false)]
        refine: bool,
        /// Dump the assembled operator field as JSON (the documented
        /// field schema), e.g. for caching or golden comparisons.
        #[arg(long)]
        field_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Finite-measure criterion for a band-limited subspace.
    Subspace {
        #[command(flatten)]
        common: CommonOpts,
        /// Group model: cyclic (full representation) or realline.
        #[arg(long)]
        model: String,
        /// Frequency window(s) `lo:hi[,lo:hi...]` for the realline model.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Multiplier criterion for a vector given as a CSV grid function.
    Vector {
        #[command(flatten)]
        common: CommonOpts,
        /// The candidate vector.
        #[arg(long)]
        eta: PathBuf,
    },
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(VerifyCommand::Plancherel { common, model, n }) => {
            run(&common, |cfg| commands::verify_plancherel(cfg, &model, n))
        }
        Command::Verify(VerifyCommand::Construction { common, c, shift }) => {
            run(&common, |mut cfg| {
                if let Some(c) = c {
                    cfg.c = c;
                }
                if let Some(k) = shift {
                    cfg.shift = k;
                }
                cfg.validate()?;
                commands::verify_construction(cfg)
            })
        }
        Command::Admissible(AdmissibleCommand::Affine {
            common,
            c,
            shift,
            refine,
            field_out,
        }) => run(&common, |mut cfg| {
            if let Some(c) = c {
                cfg.c = c;
            }
            if let Some(k) = shift {
                cfg.shift = k;
            }
            cfg.validate()?;
            commands::admissible_affine(cfg, refine, field_out.as_deref())
        }),
        Command::Check(CheckCommand::Subspace {
            common,
            model,
            window,
        }) => run(&common, |cfg| {
            commands::check_subspace(cfg, &model, window.as_deref())
        }),
        Command::Check(CheckCommand::Vector { common, eta }) => {
            run(&common, |cfg| commands::check_vector(cfg, &eta))
        }
        Command::NoGo {
            common,
            model,
            extents,
        } => run(&common, |cfg| commands::no_go(cfg, &model, &extents)),
        Command::Transform {
            common,
            rep,
            eta,
            phi,
            coeffs,
        } => run(&common, |cfg| {
            commands::transform(cfg, &rep, &eta, &phi, coeffs.as_deref())
        }),
        Command::Report { input } => commands::summarize_report(&input),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(
    common: &CommonOpts,
    body: impl FnOnce(RunConfig) -> anyhow::Result<bool>,
) -> anyhow::Result<bool> {
    let cfg = common.build()?;
    cfg.validate()?;
    body(cfg)
}

/// WAVEGROUP_THREADS limits the rayon pool used by battery loops.
fn init_threads() {
    if let Ok(value) = std::env::var("WAVEGROUP_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}
