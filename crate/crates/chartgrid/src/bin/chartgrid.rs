//! Thin CLI over the chartgrid pipeline.
//!
//! Exit codes: 0 success, 1 usage (bad arguments or invalid config),
//! 2 fatal backend or runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chartgrid::config::load_config;
use chartgrid::error::Error;
use chartgrid::overlay::GridConfig;
use chartgrid::raster::RasterImage;
use chartgrid::{apply_grid, runner, ExperimentConfig};

#[derive(Parser)]
#[command(name = "chartgrid", version, about = "Chart data extraction benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    /// Experiment configuration file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the dataset seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic dataset: gold standard plus chart PNGs.
    Generate(ExperimentArgs),
    /// Apply the grid overlay. With --config, per configured arm; with
    /// --in/--out, a single file transform.
    Overlay {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Input PNG (single-file mode).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Output PNG in single-file mode, output directory in config mode.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        cells: u32,
        #[arg(long, default_value_t = 0.2)]
        opacity: f64,
        /// Line color as 6-digit hex, e.g. 000000.
        #[arg(long, default_value = "000000")]
        color: String,
        #[arg(long, default_value_t = 1)]
        thickness: u32,
    },
    /// Run extraction for every (arm, chart) pair through the cache.
    Extract(ExperimentArgs),
    /// Score extraction records against gold into scores.jsonl.
    Evaluate(ExperimentArgs),
    /// Build report.md / report.json / scores.csv / boxplot.csv / qualitative/.
    Report(ExperimentArgs),
    /// The full pipeline: generate, overlay, extract, evaluate, report.
    Run(ExperimentArgs),
    /// One full run per grid density, each in its own report directory.
    Sweep {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// Grid densities to compare.
        #[arg(long, value_delimiter = ',', default_values_t = [25u32, 50, 100])]
        densities: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidData(_) | Error::ParseFile { .. } => 1,
        _ => 2,
    }
}

fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig, Error> {
    let mut config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.dataset.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Generate(args) => {
            runner::cmd_generate(&experiment_config(&args)?)?;
        }
        Command::Overlay { config, seed, input, out, cells, opacity, color, thickness } => {
            match (input, config) {
                (Some(input), None) => {
                    let out = out.ok_or_else(|| {
                        Error::Config("--out: required in single-file overlay mode".into())
                    })?;
                    let grid = GridConfig {
                        cells_per_axis: cells,
                        opacity,
                        color: parse_hex_color(&color)?,
                        thickness_px: thickness,
                    };
                    let image = RasterImage::load_png(&input)?;
                    apply_grid(&image, &grid)?.save_png(&out)?;
                    println!("overlaid {} -> {}", input.display(), out.display());
                }
                (None, Some(config)) => {
                    let args = ExperimentArgs { config, seed, out };
                    runner::cmd_overlay(&experiment_config(&args)?)?;
                }
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "overlay: pass either --config or --in/--out, not both".into(),
                    ));
                }
                (None, None) => {
                    return Err(Error::Config(
                        "overlay: pass --config for an experiment or --in/--out for one file"
                            .into(),
                    ));
                }
            }
        }
        Command::Extract(args) => {
            runner::cmd_extract(&experiment_config(&args)?)?;
        }
        Command::Evaluate(args) => {
            runner::cmd_evaluate(&experiment_config(&args)?)?;
        }
        Command::Report(args) => {
            runner::cmd_report(&experiment_config(&args)?)?;
        }
        Command::Run(args) => {
            runner::cmd_run(&experiment_config(&args)?)?;
        }
        Command::Sweep { experiment, densities } => {
            runner::cmd_sweep(&experiment_config(&experiment)?, &densities)?;
        }
    }
    Ok(())
}

fn parse_hex_color(hex: &str) -> Result<[u8; 3], Error> {
    let hex = hex.trim_start_matches('#');
    if hex.len() != 6 {
        return Err(Error::Config(format!("--color: expected 6 hex digits, got {hex:?}")));
    }
    let byte = |range: std::ops::Range<usize>| {
        u8::from_str_radix(&hex[range], 16)
            .map_err(|_| Error::Config(format!("--color: invalid hex {hex:?}")))
    };
    Ok([byte(0..2)?, byte(2..4)?, byte(4..6)?])
}
