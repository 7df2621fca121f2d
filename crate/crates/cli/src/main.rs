use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use condcompat_cli::commands::EXIT_ERROR;
use condcompat_cli::{check, dmatrix, lp, Format, InputOptions, Space};

/// Checks whether P(X|Y) (A, columns sum to 1) and P(Y|X) (B, rows sum to 1)
/// come from a common joint distribution.
#[derive(Parser)]
#[command(name = "condcompat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// File holding A = P(X|Y).
    a: PathBuf,
    /// File holding B = P(Y|X).
    b: PathBuf,
    /// Read comma-separated rows instead of JSON.
    #[arg(long)]
    csv: bool,
    /// Rescale each column of A and row of B to sum to 1.
    #[arg(long)]
    renormalize: bool,
}

impl Inputs {
    fn options(&self) -> InputOptions {
        InputOptions {
            csv: self.csv,
            renormalize: self.renormalize,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide compatibility; exit 0 if compatible, 1 if not, 2 on error.
    Check {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the D matrix (and C with --cmatrix).
    Dmatrix {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        cmatrix: bool,
    },
    /// Solve the joint-space or marginal-space linear program.
    Lp {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = Space::Joint)]
        space: Space,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { inputs, format } => check(&inputs.a, &inputs.b, inputs.options(), *format),
        Command::Dmatrix { inputs, cmatrix } => dmatrix(&inputs.a, &inputs.b, inputs.options(), *cmatrix),
        Command::Lp { inputs, space } => lp(&inputs.a, &inputs.b, inputs.options(), *space),
    };
    match result {
        Ok(outcome) => {
            let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
