use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cch::diagnostics::DiagnosticsRecord;
use cch::io::{self, RunConfig};
use cch::model::ModelParams;
use cch::spectral::{GridSpec, SpectralField};
use cch::stepper::{self, TimeGrid};
use cch::verification::{self, ConvergenceReport};
use cch::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_THRESHOLD: u8 = 3;

const TIME_ORDER_RANGE: (f64, f64) = (0.85, 1.15);
const SPACE_ORDER_MIN: f64 = 1.7;
const ORACLE_TOL: f64 = 1e-10;
const SKEW_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "cch",
    version,
    about = "Sine-Galerkin convective Cahn-Hilliard solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration, writing snapshots and diagnostics.csv.
    Run { config: PathBuf },
    /// Temporal convergence study against the manufactured solution.
    ConvergeTime { config: PathBuf },
    /// Spatial convergence study from the configured initial condition.
    ConvergeSpace { config: PathBuf },
    /// Compare the fast step operator with the dense quadrature oracle.
    VerifyOracle {
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 2)]
        modes: usize,
        #[arg(long, default_value_t = 32)]
        points: usize,
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
    },
    /// Print the configuration with every default filled in.
    PrintConfig { config: PathBuf },
}

enum Failure {
    Usage(String),
    Numerical(String),
    Threshold(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CliResult = Result<(), Failure>;

fn load(path: &Path) -> Result<RunConfig, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut cfg =
        io::parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(dir) = std::env::var_os("CCH_OUTPUT_DIR") {
        cfg.output_dir = PathBuf::from(dir);
    }
    Ok(cfg)
}

fn prepare_output(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_run(cfg: &RunConfig) -> CliResult {
    let grid = cfg.grid()?;
    let u0 = io::initial_field(cfg, &grid)?;
    let time = TimeGrid::from_horizon(cfg.dt, cfg.t_end)?;
    prepare_output(&cfg.output_dir)?;

    let every = cfg.snapshot_every;
    let steps = time.steps;
    let dir = cfg.output_dir.clone();
    let mut observer = |r: &DiagnosticsRecord, u: &SpectralField| -> cch::Result<()> {
        if r.step % every == 0 || r.step == steps {
            let path = dir.join(format!("snapshot_{:06}.txt", r.step));
            io::write_snapshot(u, r.time, &path)?;
        }
        Ok(())
    };
    let traj = stepper::run(&u0, &cfg.params, &time, &cfg.solver, &mut observer, None)?;
    write(
        &cfg.output_dir.join("diagnostics.csv"),
        &io::diagnostics_csv(&traj.records),
    )?;

    let last = traj.records.last().expect("at least the initial record");
    println!(
        "steps = {steps}, t = {}, l2 = {:.6e}, mass = {:.6e}",
        last.time, last.norms.l2, last.mass
    );
    if !cfg.diagnostics {
        return Ok(());
    }
    if let Some(r) = traj.records.iter().find(|r| r.l2_bound_ok == Some(false)) {
        return Err(Failure::Threshold(format!(
            "discrete L2 bound violated at step {}",
            r.step
        )));
    }
    let worst = traj
        .records
        .iter()
        .map(|r| r.skew_residual)
        .fold(0.0, f64::max);
    if worst > SKEW_TOL {
        return Err(Failure::Threshold(format!(
            "skew identity residual {worst:.3e} exceeds {SKEW_TOL:e}"
        )));
    }
    Ok(())
}

fn report(cfg: &RunConfig, name: &str, r: &ConvergenceReport) -> Result<f64, Failure> {
    prepare_output(&cfg.output_dir)?;
    write(&cfg.output_dir.join(name), &io::convergence_csv(r))?;
    for l in &r.levels {
        println!("{:>12.6e}  {:.6e}", l.resolution, l.error);
    }
    if let Some(note) = &r.note {
        println!("note: {note}");
    }
    match r.fitted_order {
        Some(p) => {
            println!("fitted order: {p:.4}");
            Ok(p)
        }
        None => Err(Failure::Threshold("no order could be fitted".into())),
    }
}

fn cmd_converge_time(cfg: &RunConfig) -> CliResult {
    let grid = cfg.grid()?;
    let r = verification::convergence_study_time(
        &cfg.manufactured,
        &cfg.params,
        &grid,
        &cfg.dts,
        cfg.t_end,
        &cfg.solver,
    )?;
    let p = report(cfg, "converge_time.csv", &r)?;
    if !(TIME_ORDER_RANGE.0..=TIME_ORDER_RANGE.1).contains(&p) {
        return Err(Failure::Threshold(format!(
            "temporal order {p:.4} outside [{}, {}]",
            TIME_ORDER_RANGE.0, TIME_ORDER_RANGE.1
        )));
    }
    Ok(())
}

fn cmd_converge_space(cfg: &RunConfig) -> CliResult {
    let grid = cfg.grid()?.with_modes(cfg.n_ref)?;
    let u0 = io::initial_field(cfg, &grid)?;
    let r = verification::convergence_study_space(
        &u0,
        &cfg.params,
        &cfg.ns,
        cfg.n_ref,
        cfg.dt,
        cfg.t_end,
        &cfg.solver,
    )?;
    let p = report(cfg, "converge_space.csv", &r)?;
    if p < SPACE_ORDER_MIN {
        return Err(Failure::Threshold(format!(
            "spatial order {p:.4} below {SPACE_ORDER_MIN}"
        )));
    }
    Ok(())
}

fn cmd_verify_oracle(pairs: usize, modes: usize, points: usize, seed: u64) -> CliResult {
    let grid = GridSpec::unit_pi(modes)?;
    let params = ModelParams::new(1.0, 0.7, 1.3, [1.0, -0.5])?;
    let dev = verification::max_operator_deviation(&grid, &params, 0.01, pairs, points, seed)?;
    println!("max relative deviation over {pairs} pairs: {dev:.3e}");
    if dev > ORACLE_TOL {
        return Err(Failure::Threshold(format!(
            "deviation {dev:.3e} exceeds {ORACLE_TOL:e}"
        )));
    }
    Ok(())
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Run { config } => cmd_run(&load(&config)?),
        Command::ConvergeTime { config } => cmd_converge_time(&load(&config)?),
        Command::ConvergeSpace { config } => cmd_converge_space(&load(&config)?),
        Command::VerifyOracle {
            pairs,
            modes,
            points,
            seed,
        } => cmd_verify_oracle(pairs, modes, points, seed),
        Command::PrintConfig { config } => {
            print!("{}", load(&config)?.to_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Threshold(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_THRESHOLD)
        }
    }
}
