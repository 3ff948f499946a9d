use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use slpin::commands::{self, parse_axis, parse_nodes, CliError, PlotRequest};
use slpin::{load_config, resolve, Overrides, RawConfig};
use slpin_core::Model;

/// Stuart-Landau networks under additive and parametric pinning.
#[derive(Parser)]
#[command(name = "slpin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Full,
    Phase,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Snapshot,
    Timeseries,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config model.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one experiment and write trajectory.csv and meta.cfg.
    Simulate(RunArgs),
    /// Compare additive pinning with matched parametric pinning.
    Compare(RunArgs),
    /// Extract snapshot or time-series columns from a trajectory file.
    Plotdata {
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
        /// Snapshot time.
        #[arg(long)]
        time: Option<f64>,
        /// Nodes for a time series, e.g. `0-4` or `0,2,5`.
        #[arg(long, default_value = "0-4")]
        nodes: String,
        /// Variable for a time series: x, y or theta.
        #[arg(long)]
        var: Option<String>,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run `compare` over a parameter grid.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Grid axis `key=v1,v2,...`; repeat for more axes.
        #[arg(long = "param", required = true)]
        params: Vec<String>,
    },
}

fn prepare(args: &RunArgs) -> Result<(RawConfig, Overrides, PathBuf), CliError> {
    let raw = load_config(&args.config)?;
    let overrides = Overrides {
        seed: args.seed,
        model: args.model.map(|m| match m {
            ModelArg::Full => Model::Full,
            ModelArg::Phase => Model::Phase,
        }),
    };
    let out = match (&args.out, raw.get("output.dir").and_then(|v| v.as_str())) {
        (Some(o), _) => o.clone(),
        (None, Some(d)) => raw.base_dir().join(d),
        (None, None) => {
            return Err(CliError::Usage(
                "no output directory: pass --out or set output.dir".into(),
            ))
        }
    };
    Ok((raw, overrides, out))
}

fn report(out: &Path, lines: &[String]) {
    for l in lines {
        println!("{l}");
    }
    println!("wrote {}", out.display());
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let (raw, overrides, out) = prepare(&args)?;
            let traj = commands::simulate(&resolve(&raw, overrides)?, &out)?;
            report(&out, &[format!("run_id = {}", traj.metadata.run_id)]);
        }
        Command::Compare(args) => {
            let (raw, overrides, out) = prepare(&args)?;
            let cmp = commands::compare(&resolve(&raw, overrides)?, &out)?;
            let r = &cmp.report;
            report(
                &out,
                &[
                    format!("phase_divergence_mean = {:e}", r.phase_summary.mean),
                    format!("phase_divergence_max = {:e}", r.phase_summary.max),
                    format!(
                        "amplitude_deviation = {:e} (additive), {:e} (parametric)",
                        r.amplitude_deviation[0], r.amplitude_deviation[1]
                    ),
                ],
            );
        }
        Command::Plotdata {
            trajectory,
            kind,
            time,
            nodes,
            var,
            out,
        } => {
            let request = match kind {
                PlotKind::Snapshot => PlotRequest::Snapshot {
                    time: time.ok_or_else(|| CliError::Usage("snapshot needs --time".into()))?,
                },
                PlotKind::Timeseries => PlotRequest::Timeseries {
                    nodes: parse_nodes(&nodes)?,
                    var,
                },
            };
            commands::plotdata(&trajectory, &request, &out)?;
            report(&out, &[]);
        }
        Command::Sweep { run, params } => {
            let (raw, overrides, out) = prepare(&run)?;
            let axes = params.iter().map(|p| parse_axis(p)).collect::<Result<Vec<_>, _>>()?;
            let rows = commands::sweep(&raw, overrides, &axes, &out)?;
            report(&out, &[format!("{} grid points", rows.len())]);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
