//! Command-line front end: build fixtures, run single computations, run
//! experiments, emit tables and plot data.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::{ConfigError, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "graphmass",
    about = "Geometry, mass, and metric-space comparison of asymptotically flat graphical hypersurfaces",
    version
)]
struct Cli {
    /// Key-value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override a config key (repeatable): --set key=value
    #[arg(long = "set", global = true)]
    set: Vec<String>,

    /// Table output format
    #[arg(long, global = true, default_value = "csv", value_parser = ["csv", "records"])]
    format: String,

    /// Worker threads (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Exact rational arithmetic for metric-space suites
    #[arg(long, global = true)]
    exact: bool,

    /// Validate the configuration and print it without computing
    #[arg(long, global = true)]
    dry_run: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Evaluate the Schwarzschild height profile
    Profile,
    /// Scalar curvature field statistics on a fixture
    Curvature,
    /// Boundary-integral mass per radius with extrapolation
    Mass,
    /// The mass identity: bulk + boundary terms and residual
    Lam,
    /// Normalization height h0
    H0,
    /// Depth of the region below its boundary band
    Depth,
    /// Boundary pullback metric export and ratio diagnostics
    Pullback,
    /// Build the glued space over two metrics
    Glue,
    /// Closed-form Gromov-Hausdorff / intrinsic-flat bound calculator
    Bounds,
    /// Stability experiment over a family schedule
    Experiment,
    /// Pointed intrinsic-ball experiment
    Pointed,
    /// Emit the non-completeness fixture
    Fixtures,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // best effort: the pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let schema = commands::schema_for(cli.command);
    let cfg = match RunConfig::load(&schema, cli.config.as_deref(), &cli.set) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(1);
        }
    };
    if cli.dry_run {
        print!("{}", cfg.render(&schema));
        return ExitCode::SUCCESS;
    }
    let ctx = commands::Context {
        out_dir: cli.out.clone(),
        format: cli.format.clone(),
        exact: cli.exact,
    };
    match commands::run(cli.command, &cfg, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &commands::CmdError) -> u8 {
    use graphmass::Error as E;
    match e {
        commands::CmdError::Config(_) => 1,
        commands::CmdError::Io(_) => 3,
        commands::CmdError::Lib(err) => match err {
            E::InvalidParameter(_)
            | E::Parse(_)
            | E::UnsupportedDimension(_)
            | E::ClassValidation { .. }
            | E::MetricAxiom(_)
            | E::LabelMismatch(_)
            | E::BelowHorizon { .. } => 1,
            E::Numerical(_)
            | E::InsufficientStencil(..)
            | E::Disconnected(..)
            | E::NodeOutsideDomain(_)
            | E::EmptySet(_) => 2,
            E::Io(_) => 3,
        },
    }
}

impl From<ConfigError> for commands::CmdError {
    fn from(e: ConfigError) -> Self {
        commands::CmdError::Config(e)
    }
}
