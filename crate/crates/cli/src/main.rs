use clap::{Parser, Subcommand};
use kahler_cli::commands;
use std::path::PathBuf;

/// Decide whether a finite integer matrix group (the characteristic action
/// of a virtually abelian group) is the fundamental group of a compact
/// Kähler manifold, and emit machine-checkable certificates.
#[derive(Parser)]
#[command(name = "kahler", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the Kähler/projective property and write a certificate.
    /// Exit codes: 0 kahler, 1 not kahler, 2 input/limit error.
    Decide {
        /// Group input document (JSON)
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Abort group closure beyond this many elements
        #[arg(long)]
        max_order: Option<usize>,
        /// Certificate output path (stdout if omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate against a group input and print the residual
    /// table. Exit codes: 0 all checks pass, 1 failures, 2 schema error.
    Verify {
        /// Certificate document (JSON)
        cert: PathBuf,
        /// Group input document (JSON)
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Deform the certified structure to a polarisable endpoint and write
    /// the sampled path. Exit codes: 0 ok, 1 not kahler, 2 input error,
    /// 3 no convergence.
    Deform {
        /// Group input document (JSON)
        input: PathBuf,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Path CSV output (t, step_distance, compat_residual, min_gram_eigenvalue)
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Endpoint certificate output path (stdout if omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Closed-form structure for the cyclic group acting by the cyclotomic
    /// companion matrix, cross-checked against the decision pipeline.
    /// Exit codes: 0 ok, 2 invalid order.
    Cm {
        /// Cyclic group order m >= 3
        #[arg(long)]
        order: u32,
        /// Output path (stdout if omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Decide {
            input,
            seed,
            tol,
            max_order,
            output,
        } => commands::cmd_decide(&input, seed, tol, max_order, output.as_deref()),
        Command::Verify { cert, input, tol } => commands::cmd_verify(&cert, &input, tol),
        Command::Deform {
            input,
            steps,
            seed,
            tol,
            csv,
            output,
        } => commands::cmd_deform(&input, steps, seed, tol, csv.as_deref(), output.as_deref()),
        Command::Cm { order, output } => commands::cmd_cm(order, output.as_deref()),
    };
    std::process::exit(code);
}
