use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use opstar::linalg::DEFAULT_TOL;
use opstar::random::DEFAULT_SEED;

mod commands;
mod report;

use commands::{Ctx, Demo, PositivityMode};
use report::{fmt_real, fmt_value, RunReport};

#[derive(Parser)]
#[command(name = "opstar", version, about = "Checks for finite-dimensional *-algebras and their operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Record wall time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra axioms.
    Validate { algebra: String },
    /// Spectrum and spectral radii of an element.
    Spectrum {
        algebra: String,
        /// Label, coefficient list, label map, or `@matrix-file`.
        element: Option<String>,
        /// Largest power used in the radius limit.
        #[arg(long, default_value_t = 512)]
        limit: u64,
    },
    /// Square root, polar decomposition or positive and negative parts.
    Positivity {
        algebra: String,
        element: Option<String>,
        #[arg(long, value_enum, default_value_t = PositivityMode::Sqrt)]
        mode: PositivityMode,
    },
    /// Characters and the Gelfand transform of a commutative algebra.
    Gelfand {
        algebra: String,
        /// State whose representing measure to compute.
        #[arg(long)]
        bochner: Option<String>,
    },
    /// Fourier coefficients of 1/f.
    Wiener {
        coefficients: String,
        #[arg(long, default_value_t = 64)]
        n_out: usize,
    },
    /// GNS construction of a positive functional.
    Gns { algebra: String, functional: String },
    /// Spectral resolution, functional calculus, commutants and intertwiners.
    Spectral {
        matrix: String,
        /// resolution, calculus:<f>, commutant, bicommutant or fuglede.
        mode: String,
    },
    /// Cayley transform and the unitary group generated by a Hermitian matrix.
    Evolve {
        matrix: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true,
              default_values_t = opstar::evolution::DEFAULT_TIMES.to_vec())]
        times: Vec<f64>,
        #[arg(long)]
        check_generator: bool,
    },
    /// Built-in worked examples.
    Demo {
        #[arg(value_enum)]
        name: Demo,
        /// Rows of the counterexample table.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
}

fn run(cli: &Cli) -> opstar::Result<RunReport> {
    let mut ctx = Ctx::new(cli.tol, cli.seed);
    match &cli.command {
        Command::Validate { algebra } => commands::validate(&mut ctx, algebra),
        Command::Spectrum { algebra, element, limit } => commands::spectrum_cmd(&mut ctx, algebra, element.as_deref(), *limit),
        Command::Positivity { algebra, element, mode } => commands::positivity(&mut ctx, algebra, element.as_deref(), *mode),
        Command::Gelfand { algebra, bochner } => commands::gelfand(&mut ctx, algebra, bochner.as_deref()),
        Command::Wiener { coefficients, n_out } => commands::wiener(&mut ctx, coefficients, *n_out),
        Command::Gns { algebra, functional } => commands::gns_cmd(&mut ctx, algebra, functional),
        Command::Spectral { matrix, mode } => commands::spectral(&mut ctx, matrix, mode),
        Command::Evolve { matrix, times, check_generator } => commands::evolve(&mut ctx, matrix, times, *check_generator),
        Command::Demo { name, n_max } => commands::demo(&mut ctx, *name, *n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.timing {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    print!("{}", report.render());
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, report.to_json()) {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(2);
        }
    }
    if report.passed {
        return ExitCode::SUCCESS;
    }
    for e in report.failures() {
        let bound = e.bound.map(fmt_real).unwrap_or_default();
        eprintln!("FAIL {}: {} violates {} {}", e.name, fmt_value(&e.value), e.relation.unwrap_or(""), bound);
    }
    ExitCode::from(1)
}
