use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tpc_cli::{run_check, run_compat, run_flatten, run_graph, Color, GraphFormat, Output, Status};

/// Check, flatten and inspect libraries of theory presentations.
#[derive(Parser)]
#[command(name = "tpc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and evaluate every definition in the given files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the flat presentation of a theory.
    Flatten {
        file: PathBuf,
        name: String,
        /// Print the theory it extends instead.
        #[arg(long)]
        base: bool,
    },
    /// Export the theory graph.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Compare the context and arrow semantics of every definition.
    Compat { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    let color = match Color::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::Usage as u8);
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let mut o = Output::new(&mut out, &mut err, color);
    let result = match &cli.command {
        Command::Check { files } => run_check(files, &mut o),
        Command::Flatten { file, name, base } => run_flatten(file, name, *base, &mut o),
        Command::Graph { file, format } => run_graph(file, *format, &mut o),
        Command::Compat { file } => run_compat(file, &mut o),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Usage as u8)
        }
    }
}
