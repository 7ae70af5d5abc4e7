use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracq_cli::commands::{run_box_scan, run_fox_eval, run_ml, run_veff_scan};
use fracq_cli::config::{Command, RawConfig};
use fracq_cli::output::Table;
use fracq_cli::verify::run_verify;
use fracq_cli::CliError;

#[derive(Parser)]
#[command(name = "fracq", version, about = "Time-fractional quantum mechanics toolkit")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Mittag-Leffler function E_{alpha,beta}(lambda i^alpha t^alpha) over a time grid
    Ml(SweepArgs),
    /// Infinite-well time factor, probability and energy over a time grid
    Box(SweepArgs),
    /// Complex effective potential over a time grid
    Veff(SweepArgs),
    /// Fox H-function at one or more arguments
    Foxh(FoxArgs),
    /// Run the acceptance criteria
    Verify(VerifyArgs),
}

#[derive(Args, Default)]
struct SweepArgs {
    /// key = value configuration file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fractional order, or a comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Eigenvalue, or a comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Well width
    #[arg(long)]
    a: Option<String>,
    /// Quantum number, or a comma-separated list
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "d-alpha")]
    d_alpha: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    #[arg(long)]
    mass: Option<String>,
    /// START:STOP:COUNT[:log]
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// CSV destination; standard output when absent
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct FoxArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameters such as "H[1,1,1,2] upper=(0,1) lower=(0,1);(0,0.5)"
    #[arg(long)]
    params: Option<String>,
    /// Argument as RE,IM; repeatable
    #[arg(long, allow_hyphen_values = true)]
    z: Vec<String>,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace every upper-bound tolerance
    #[arg(long)]
    tol: Option<String>,
    /// Comma-separated criterion numbers to run
    #[arg(long)]
    only: Option<String>,
}

fn base(config: &Option<PathBuf>) -> Result<RawConfig, CliError> {
    config.as_deref().map_or_else(|| Ok(RawConfig::default()), RawConfig::load)
}

fn apply(raw: &mut RawConfig, pairs: &[(&str, &Option<String>)]) -> Result<(), CliError> {
    for (k, v) in pairs {
        if let Some(v) = v {
            raw.set(k, v)?;
        }
    }
    Ok(())
}

fn sweep_config(args: &SweepArgs, command: Command) -> Result<fracq_cli::config::SweepConfig, CliError> {
    let mut raw = base(&args.config)?;
    apply(
        &mut raw,
        &[
            ("alpha", &args.alpha),
            ("beta", &args.beta),
            ("lambda", &args.lambda),
            ("a", &args.a),
            ("n", &args.n),
            ("d-alpha", &args.d_alpha),
            ("hbar", &args.hbar),
            ("mass", &args.mass),
            ("t-grid", &args.t_grid),
            ("output", &args.output),
        ],
    )?;
    raw.resolve(command)
}

fn emit(table: &Table, output: &Option<PathBuf>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write output: {e}"));
    match output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io)?;
            let mut w = std::io::BufWriter::new(file);
            table.write_to(&mut w).map_err(io)?;
            w.flush().map_err(io)
        }
        None => table.write_to(std::io::stdout().lock()).map_err(io),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (table, output) = match cli.command {
        Sub::Ml(args) => {
            let cfg = sweep_config(&args, Command::MlEval)?;
            (run_ml(&cfg)?, cfg.output)
        }
        Sub::Box(args) => {
            let cfg = sweep_config(&args, Command::BoxScan)?;
            (run_box_scan(&cfg)?, cfg.output)
        }
        Sub::Veff(args) => {
            let cfg = sweep_config(&args, Command::VeffScan)?;
            (run_veff_scan(&cfg)?, cfg.output)
        }
        Sub::Foxh(args) => {
            let mut raw = base(&args.config)?;
            apply(&mut raw, &[("params", &args.params), ("output", &args.output)])?;
            if !args.z.is_empty() {
                raw.set("z", &args.z.join(";"))?;
            }
            let cfg = raw.resolve(Command::FoxEval)?;
            (run_fox_eval(&cfg)?, cfg.output)
        }
        Sub::Verify(args) => {
            let mut raw = base(&args.config)?;
            apply(&mut raw, &[("tol", &args.tol), ("only", &args.only)])?;
            let cfg = raw.resolve(Command::Verify)?;
            let reports = run_verify(&cfg.only, cfg.tol);
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!("{} of {} criteria passed", reports.len() - failed, reports.len());
            return Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    emit(&table, &output)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fracq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
