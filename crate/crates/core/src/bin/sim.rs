use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use polariton_sim::experiments::output::{
    bloch_csv, gate_table_csv, map_csv, summary_line, sweep_csv, to_json, write_output, RunMetadata,
};
use polariton_sim::experiments::{
    run_concurrence_map, run_cphase_sweep, run_gate_table, run_hadamard_bloch,
    run_single_qubit_sweep, Channel, ExperimentError, InitialState, OutputFormat, ScenarioConfig,
    ScenarioKind,
};
use polariton_sim::lindblad::LoweringConvention;

/// Polariton qubit gate and decoherence simulator.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[arg(value_name = "SCENARIO")]
    scenario_arg: Option<ScenarioKind>,
    /// Same as the positional argument.
    #[arg(long = "scenario", conflicts_with = "scenario_arg")]
    scenario_flag: Option<ScenarioKind>,
    /// JSON config overlaid on the scenario defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma_d: Option<f64>,
    #[arg(long)]
    gamma_r: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    sample_every: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// `conventional` or `paper`.
    #[arg(long)]
    lowering_convention: Option<LoweringConvention>,
    /// Label such as `0`, `1`, `cw`, `acw` or `cw,acw`.
    #[arg(long)]
    initial_state: Option<String>,
    #[arg(long)]
    sweep_channel: Option<Channel>,
}

fn build_config(cli: &Cli) -> Result<ScenarioConfig, ExperimentError> {
    let scenario = cli.scenario_arg.or(cli.scenario_flag);
    let mut cfg = match (&cli.config, scenario) {
        (Some(path), _) => {
            let doc = std::fs::read_to_string(path)
                .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.display())))?;
            ScenarioConfig::from_json(&doc, scenario)?
        }
        (None, Some(kind)) => ScenarioConfig::default_for(kind),
        (None, None) => return Err(ExperimentError::Config("no scenario given".into())),
    };
    if let Some(g) = cli.gamma_d {
        cfg.rates.gamma_d = g;
    }
    if let Some(g) = cli.gamma_r {
        cfg.rates.gamma_r = g;
    }
    if cli.dt.is_some() {
        cfg.integrator.dt = cli.dt;
    }
    if let Some(n) = cli.sample_every {
        cfg.integrator.sample_every = n;
    }
    if let Some(c) = cli.lowering_convention {
        cfg.lowering_convention = c;
    }
    if let Some(s) = &cli.initial_state {
        cfg.initial_state = InitialState::Label(s.clone());
    }
    if let Some(c) = cli.sweep_channel {
        cfg.sweep_channel = c;
    }
    if let Some(p) = &cli.output {
        cfg.output.path = Some(p.clone());
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn render<T: serde::Serialize>(
    format: OutputFormat,
    value: &T,
    csv: impl FnOnce(&T) -> String,
) -> String {
    match format {
        OutputFormat::Csv => csv(value),
        OutputFormat::Json => to_json(value),
    }
}

fn run(cli: &Cli) -> Result<(), ExperimentError> {
    let cfg = build_config(cli)?;
    let start = Instant::now();
    let format = cfg.output.format;
    let (body, rows) = match cfg.scenario {
        ScenarioKind::HadamardBloch => {
            let run = run_hadamard_bloch(&cfg)?;
            (
                render(format, &run.samples, |_| bloch_csv(&run)),
                run.samples.len(),
            )
        }
        ScenarioKind::SingleQubitSweep => {
            let res = run_single_qubit_sweep(&cfg)?;
            (render(format, &res, sweep_csv), res.rows.len())
        }
        ScenarioKind::CphaseSweep => {
            let res = run_cphase_sweep(&cfg)?;
            (render(format, &res, sweep_csv), res.rows.len())
        }
        ScenarioKind::ConcurrenceMap => {
            let map = run_concurrence_map(&cfg)?;
            (render(format, &map, map_csv), map.cells.len())
        }
        ScenarioKind::GateTable => {
            let table = run_gate_table()?;
            (render(format, &table, gate_table_csv), table.gates.len())
        }
    };
    let seconds = start.elapsed().as_secs_f64();
    write_output(
        cfg.output.path.as_deref(),
        &body,
        &RunMetadata::new(&cfg, seconds),
    )?;
    eprintln!("{}", summary_line(&cfg, rows, seconds));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
