//! Command-line front end: build networks, run scenarios, sweep the
//! scenario grid, and report group-level hardship metrics.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use gridshock::engine::{
    run_monte_carlo, run_replication, write_outputs, Aggregate, Reps, Scenario, StoppingRule,
};
use gridshock::grid::build_synthetic_grid;
use gridshock::report::{export_table, group_hardship_probability, run_sweep, ExportFormat, SweepSpec};
use gridshock::seed::{replication_seed, stream_rng, Stream};

#[derive(Parser)]
#[command(name = "gridshock", version, about = "Hurricane power-outage hardship simulator")]
struct Cli {
    /// Worker threads; 0 uses every available core.
    #[arg(long, global = true, env = "GRIDSHOCK_WORKERS", default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the synthetic power network for a scenario and export it as JSON.
    GenerateNetwork {
        /// Scenario JSON; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a scenario's Monte Carlo batch and write run artifacts.
    Run {
        /// Scenario JSON; built-in defaults when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// "auto" for the stopping rule, or a fixed replication count.
        #[arg(long, default_value = "auto")]
        reps: Reps,
        /// Output root; artifacts land in <out>/<scenario name>/.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
    /// Run every cell of a scenario grid and tabulate deltas vs the first cell.
    Sweep {
        /// Sweep spec JSON (base scenario plus per-axis value lists).
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
    /// Summarize hardship probability for one attribute split of a finished run.
    Report {
        /// Run directory containing aggregate.json.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "racial_minority")]
        group: String,
    },
}

fn effective_workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

fn load_scenario(path: &Option<PathBuf>) -> gridshock::Result<Scenario> {
    match path {
        Some(p) => Scenario::load_json(p),
        None => Ok(Scenario::default()),
    }
}

fn real_main() -> gridshock::Result<()> {
    let cli = Cli::parse();
    let workers = effective_workers(cli.workers);
    match cli.command {
        Command::GenerateNetwork { config, out } => {
            let scenario = load_scenario(&config)?;
            scenario.validate()?;
            let inputs = scenario.load_inputs()?;
            let mut rng = stream_rng(replication_seed(scenario.seed, 0), Stream::Grid);
            let grid = build_synthetic_grid(&inputs.tracts, &scenario.grid, &mut rng)?;
            fs::write(&out, serde_json::to_string_pretty(&grid)? + "\n")?;
            println!(
                "wrote {} ({} substations, {} transmission elements, {} poles)",
                out.display(),
                grid.substations.len(),
                grid.transmission.len(),
                grid.poles.len()
            );
        }
        Command::Run {
            scenario,
            seed,
            reps,
            out,
        } => {
            let mut scenario = load_scenario(&scenario)?;
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            let inputs = scenario.load_inputs()?;
            let rule = StoppingRule::default();
            let agg = run_monte_carlo(&scenario, &inputs, &rule, reps, workers)?;
            let first = run_replication(&scenario, &inputs, scenario.seed, 0)?;
            let dir = out.join(&scenario.name);
            write_outputs(&dir, &agg, &first)?;
            println!(
                "{}: {} replications, peak hardship {:.3} +/- {:.3}, full restoration day {:.1}",
                agg.scenario_name,
                agg.n_replications,
                agg.peak_hardship_mean,
                agg.peak_hardship_ci_half,
                agg.full_restoration_day_mean
            );
            if let Some(warning) = &agg.warning {
                // not converging is a reported condition, not a failure
                eprintln!("warning: {warning}");
            }
            println!("artifacts in {}", dir.display());
        }
        Command::Sweep { grid, out } => {
            let spec = SweepSpec::load_json(&grid)?;
            let (aggregates, table) = run_sweep(&spec, workers)?;
            fs::create_dir_all(&out)?;
            for agg in &aggregates {
                let dir = out.join(&agg.scenario_name);
                fs::create_dir_all(&dir)?;
                agg.write_json(&dir.join("aggregate.json"))?;
            }
            export_table(&table, ExportFormat::Csv, &out.join("sweep.csv"))?;
            export_table(&table, ExportFormat::Json, &out.join("sweep.json"))?;
            println!("{} scenario cells -> {}", table.rows.len(), out.display());
        }
        Command::Report { input, group } => {
            let agg = Aggregate::load_json(&input.join("aggregate.json"))?;
            let stats = group_hardship_probability(&agg, &group)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
    }
    Ok(())
}

fn main() {
    if let Err(err) = real_main() {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
