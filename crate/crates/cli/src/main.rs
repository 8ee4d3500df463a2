use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use weyl_lab::commands::{exit_code, parse_bc, parse_complex};
use weyl_lab::{emit, parse_spec, run, Command, Format, KernelChoice, Params};
use weyl_lab_core::vdt::BoundaryCondition;
use weyl_lab_core::Complex64;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Inner functions, de Branges spaces and moment problems from the command line.
#[derive(Parser, Debug)]
#[command(name = "weyl-lab", version)]
struct Cli {
    command: Command,
    /// Operator spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Boundary condition or Nevanlinna parameter: `x`, `re,im` or `inf`.
    #[arg(long, value_parser = parse_bc, allow_hyphen_values = true)]
    bc: Option<BoundaryCondition>,
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    window: Option<Vec<f64>>,
    /// Evaluation point `x` or `re,im`; repeatable.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    at: Vec<Complex64>,
    /// Number of grid points across the window.
    #[arg(long)]
    points: Option<usize>,
    /// Imaginary part of the window grid.
    #[arg(long, allow_hyphen_values = true)]
    im: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelChoice>,
    /// Sector half-angle for the summability check.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("WEYL_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| format!("WEYL_LAB_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("weyl-lab: {e}");
        return ExitCode::from(2);
    }
    let file = match parse_spec(&cli.spec) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("weyl-lab: {}: {e}", cli.spec.display());
            return ExitCode::from(2);
        }
    };
    let params = Params {
        bc: cli.bc,
        rmax: cli.rmax,
        window: cli.window.map(|w| (w[0], w[1])),
        at: cli.at,
        points: cli.points,
        im: cli.im,
        kernel: cli.kernel,
        delta: cli.delta,
    };
    let result = run(cli.command, &file, &params);
    let code = exit_code(&result);
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("weyl-lab: {e}");
            return ExitCode::from(code);
        }
    };
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    if let Err(e) = emit(&outcome.report, format, cli.out.as_deref()) {
        eprintln!("weyl-lab: cannot write report: {e}");
        return ExitCode::from(1);
    }
    if outcome.failures > 0 {
        eprintln!("weyl-lab: {} verification check(s) failed", outcome.failures);
    }
    ExitCode::from(code)
}
