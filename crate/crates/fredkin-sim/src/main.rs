use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fredkin_sim::report::{
    self, parse_input, parse_n_range, ReportDocument, ReportError, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(
    name = "fredkin-sim",
    version,
    about = "Verify auxiliary-level Fredkin syntheses and simulate their linear-optical realization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the n-controlled syntheses against the truth-table oracle
    Verify {
        /// Control count or inclusive range, e.g. 3 or 1..6
        #[arg(long, default_value = "1..6")]
        n: String,
    },
    /// Simulate coincidence outcomes of a built-in optical gate
    Optics {
        /// Gate name: pswap or fredkin3
        gate: String,
        /// Logical ket digits (most significant slot first) or random:N
        #[arg(long, default_value = "random:10")]
        input: String,
        /// Apply feedforward corrections (default)
        #[arg(long, overrides_with = "no_feedforward")]
        feedforward: bool,
        /// Keep only correction-free coincidence patterns
        #[arg(long, overrides_with = "feedforward")]
        no_feedforward: bool,
        /// Seed for random inputs
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Emit the coincidence expectation table of the partial swap
    Table1,
    /// Closed-form resource counts for the optical n-controlled gate
    Resources {
        #[arg(long, default_value = "1..10")]
        n: String,
    },
    /// Cross-check accepted amplitudes against the bosonic permanent oracle
    Certify,
    /// Emit an interferometer netlist as JSON
    EmitNetlist {
        /// Gate name: pswap or fredkin3
        gate: String,
    },
}

fn emit(output: &OutputArgs, text: &str) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn emit_doc(output: &OutputArgs, doc: &ReportDocument) -> Result<(), ReportError> {
    if output.format == Format::Csv {
        return Err(ReportError::InvalidArgument(
            "csv output is available for table1 and resources".into(),
        ));
    }
    emit(output, &doc.to_json()?).map_err(|e| ReportError::InvalidArgument(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, ReportError> {
    let output = &cli.output;
    match cli.command {
        Command::Verify { n } => {
            let (lo, hi) = parse_n_range(&n)?;
            let (doc, ok) = report::run_verify(lo, hi)?;
            emit_doc(output, &doc)?;
            Ok(ok)
        }
        Command::Optics {
            gate,
            input,
            feedforward,
            no_feedforward,
            seed,
        } => {
            let ff = feedforward || !no_feedforward;
            let input = parse_input(&input)?;
            let (doc, ok) = report::run_optics(&gate, &input, ff, seed)?;
            emit_doc(output, &doc)?;
            Ok(ok)
        }
        Command::Table1 => {
            let (doc, csv) = report::run_table()?;
            match output.format {
                Format::Json => emit_doc(output, &doc)?,
                Format::Csv => {
                    emit(output, &csv).map_err(|e| ReportError::InvalidArgument(e.to_string()))?
                }
            }
            Ok(true)
        }
        Command::Resources { n } => {
            let (lo, hi) = parse_n_range(&n)?;
            let doc = report::run_resources(lo, hi)?;
            match output.format {
                Format::Json => emit_doc(output, &doc)?,
                Format::Csv => emit(output, &report::resources_csv(&doc))
                    .map_err(|e| ReportError::InvalidArgument(e.to_string()))?,
            }
            Ok(true)
        }
        Command::Certify => {
            let (doc, ok) = report::run_certify()?;
            emit_doc(output, &doc)?;
            Ok(ok)
        }
        Command::EmitNetlist { gate } => {
            if output.format == Format::Csv {
                return Err(ReportError::InvalidArgument(
                    "netlists are JSON documents".into(),
                ));
            }
            let json = report::run_emit_netlist(&gate)?;
            emit(output, &json).map_err(|e| ReportError::InvalidArgument(e.to_string()))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(ReportError::InvalidArgument(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
