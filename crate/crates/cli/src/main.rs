mod cli;
mod commands;
mod config;
mod io;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use cli::{Cli, Command, CommonArgs, SweepArgs};
use commands::Failure;
use config::RunConfig;

const THREADS_VAR: &str = "INTERACTION_MINIMISER_THREADS";

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Validation(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Computation(e.to_string()))
}

fn load(args: &CommonArgs) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::load(args.config.as_deref()).map_err(Failure::Validation)?;
    cfg.apply(args).map_err(Failure::Validation)?;
    Ok(cfg)
}

fn load_sweep(args: &SweepArgs) -> Result<RunConfig, Failure> {
    let mut cfg = load(&args.common)?;
    let s = &mut cfg.sweep;
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut s.c_ratio.min, args.ratio_min);
    set(&mut s.c_ratio.max, args.ratio_max);
    set(&mut s.length_ratio.min, args.length_min);
    set(&mut s.length_ratio.max, args.length_max);
    if let Some(v) = args.ratio_steps {
        s.c_ratio.steps = v;
    }
    if let Some(v) = args.length_steps {
        s.length_ratio.steps = v;
    }
    if let Some(v) = &args.dims {
        s.dimensions = v.clone();
    }
    if let Some(d) = args.common.dim {
        if args.dims.is_none() {
            s.dimensions = vec![d];
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> commands::Outcome {
    configure_threads()?;
    match &cli.command {
        Command::Classify(a) => commands::classify_cmd(&load(a)?),
        Command::Minimise(a) => commands::minimise_cmd(&load(a)?),
        Command::Flow(a) => commands::flow_cmd(&load(a)?),
        Command::Certify(a) => commands::certify_cmd(&load(a)?),
        Command::Bounds(a) => commands::bounds_cmd(&load(a)?),
        Command::Sweep(a) => commands::sweep_cmd(&load_sweep(a)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({"level": "error", "kind": f.kind(), "message": f.message()}));
            if let Failure::Certification(summary) = &f {
                println!("{summary}");
            }
            ExitCode::from(f.exit_code())
        }
    }
}
