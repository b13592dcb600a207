//! Command-line entry point.
//!
//! Exit codes: 0 success, 2 config error, 3 numeric failure, 4 comparison
//! mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use rindler_cavity_cli::{
    compare, galilean_report, parse_log_range, run, ScenarioConfig, ScenarioError,
};

#[derive(Parser, Debug)]
#[command(
    name = "rindler-cavity",
    about = "Bogoliubov particle production in a uniformly accelerated cavity",
    version
)]
struct Args {
    /// Scenario config (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Override the h sweep with a log-spaced range LO:HI:N.
    #[arg(long, value_name = "LO:HI:N")]
    sweep: Option<String>,

    /// Override the mode cutoff.
    #[arg(long, value_name = "N")]
    cutoff: Option<usize>,

    /// Override the quadrature tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,

    /// Override the artifact directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Compare against a second scenario instead of a plain run.
    #[arg(long, value_name = "PATH2", conflicts_with = "galilean")]
    compare: Option<PathBuf>,

    /// Produce a low-acceleration limit report over epsilon in LO:HI:N.
    #[arg(long, value_name = "LO:HI:N")]
    galilean: Option<String>,
}

fn load_config(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn apply_overrides(config: &mut ScenarioConfig, args: &Args) -> Result<(), ScenarioError> {
    if let Some(arg) = &args.sweep {
        config.sweep = Some(parse_log_range(arg, "--sweep")?);
    }
    if let Some(cutoff) = args.cutoff {
        config.cutoff = cutoff;
    }
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    Ok(())
}

fn execute(args: &Args) -> Result<ExitCode, ScenarioError> {
    let mut config = load_config(&args.config)?;
    apply_overrides(&mut config, args)?;

    if let Some(second_path) = &args.compare {
        let mut second = load_config(second_path)?;
        // Overrides apply to both sides so the grids stay comparable; each
        // side keeps its own artifact directory.
        if let Some(arg) = &args.sweep {
            second.sweep = Some(parse_log_range(arg, "--sweep")?);
        }
        if let Some(cutoff) = args.cutoff {
            second.cutoff = cutoff;
        }
        if let Some(tol) = args.tol {
            second.tol = tol;
        }
        let report = compare(&config, &second)?;
        println!("h grids matched:        {}", report.h_matched);
        println!("max |alpha_a - alpha_b|: {:e}", report.max_alpha_diff);
        println!("max |beta_a - beta_b|:   {:e}", report.max_beta_diff);
        println!(
            "max |N_a - N_b|:         {:e}",
            report.max_total_particle_diff
        );
        return Ok(if report.within_tolerance {
            println!("comparison: MATCH (all differences < 1e-10)");
            ExitCode::SUCCESS
        } else {
            println!("comparison: MISMATCH");
            ExitCode::from(4)
        });
    }

    if let Some(arg) = &args.galilean {
        let epsilons = parse_log_range(arg, "--galilean")?;
        let report = galilean_report(&config, &epsilons)?;
        println!("epsilon  |dt|  |dx|");
        for (e, dt, dx) in &report.residual_rows {
            println!("{e}  {dt:e}  {dx:e}");
        }
        println!(
            "fitted residual orders: dt ~ eps^{:.3}, dx ~ eps^{:.3}",
            report.slope_dt.unwrap_or(f64::NAN),
            report.slope_dx.unwrap_or(f64::NAN)
        );
        println!("small-h particle totals:");
        for (h, n) in &report.beta_rows {
            println!("  h = {h}: total_N = {n:e}");
        }
        println!(
            "galilean limit (identity transformation): total_N = {}",
            report.galilean_total
        );
        return Ok(ExitCode::SUCCESS);
    }

    let result = run(&config)?;
    print!("{}", rindler_cavity_cli::csv_body(&result.rows));
    if let Some(slope) = result.slope {
        println!("fitted total_N ~ h^{slope:.4}");
    }
    if let Some(dir) = &config.out {
        println!("artifacts written to {}", dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
