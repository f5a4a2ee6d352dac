use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};

mod commands;
mod problem_file;
mod summary;

/// Boundary value problems driven by a Φ-Laplacian on [0, 1].
#[derive(Parser)]
#[command(name = "phibvp", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a problem file; write the solution CSV and a run summary.
    Solve {
        /// JSON problem file.
        problem: PathBuf,
        /// Override the grid size (subdivisions of [0, 1]).
        #[arg(long)]
        n: Option<usize>,
        /// Override the fixed-point residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Override the damping factor, in (0, 1].
        #[arg(long)]
        theta: Option<f64>,
        /// Solution CSV path.
        #[arg(long, default_value = "solution.csv")]
        out: PathBuf,
        /// Summary JSON path.
        #[arg(long, default_value = "summary.json")]
        summary: PathBuf,
        /// Cross-check the solution against a shooting integrator.
        #[arg(long)]
        check: bool,
    },
    /// Print the derivative-bound certificate for a problem file.
    Bounds {
        /// JSON problem file.
        problem: PathBuf,
    },
    /// Convergence study against problems with known exact solutions.
    Verify {
        /// Exact solution profile: linear, quadratic, quartic, sin, sin2, or sinh.
        #[arg(long, default_value = "sin")]
        profile: String,
        /// Exponent of the single-term potential driving the study.
        #[arg(long, default_value_t = 2.0)]
        p_exponent: f64,
        /// Comma-separated grid sizes.
        #[arg(long, default_value = "50,100,200")]
        n_list: String,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // --help and --version are not failures; usage errors are.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            process::exit(code);
        }
    };
    let code = match cli.cmd {
        Cmd::Solve {
            problem,
            n,
            tol,
            theta,
            out,
            summary,
            check,
        } => commands::cmd_solve(&commands::SolveOptions {
            problem,
            n,
            tol,
            theta,
            out,
            summary,
            check,
        }),
        Cmd::Bounds { problem } => commands::cmd_bounds(&problem),
        Cmd::Verify {
            profile,
            p_exponent,
            n_list,
        } => commands::cmd_verify(&profile, p_exponent, &n_list),
    };
    process::exit(code);
}
