use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use precision_wall::report::config::{
    AuditArgs, BoundArgs, ConfigFile, DataArgs, FigureArgs, LabelArgs, RecalArgs, SimulateArgs, TablesArgs,
};
use precision_wall::report::{
    cmd_audit, cmd_bound, cmd_figure_data, cmd_label, cmd_recal_check, cmd_simulate, cmd_tables, OutputFormat,
    ReportDocument,
};
use precision_wall::Error;

/// Precision limits of rare-event classifiers: bounds, audits and scenarios.
#[derive(Debug, Parser)]
#[command(name = "precision-wall", version)]
struct Cli {
    /// TOML file with one table per subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (default: csv for figure-data, plain otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Required LR for a target PPV, or PPV for a given LR.
    Bound(BoundArgs),
    /// Regenerate the reference tables.
    Tables(TablesArgs),
    /// Operating point, LR and projections from a labeled dataset.
    Audit {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        args: AuditArgs,
    },
    /// Correlated-marker ceiling scenarios and FPR-ratio growth.
    Simulate(SimulateArgs),
    /// Fit a recalibration map and check threshold invariance.
    RecalCheck {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        args: RecalArgs,
    },
    /// Plain-language uncertainty label for a flag.
    Label(LabelArgs),
    /// Curve points for the required-LR figure.
    FigureData(FigureArgs),
}

fn run(cli: Cli) -> Result<(), Error> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let (doc, default_format): (ReportDocument, OutputFormat) = match cli.command {
        Command::Bound(a) => (cmd_bound(&a.or(file.bound))?, OutputFormat::Plain),
        Command::Tables(a) => (cmd_tables(&a.or(file.tables))?, OutputFormat::Plain),
        Command::Audit { data, args } => {
            (cmd_audit(&data.or(file.data).resolve()?, &args.or(file.audit))?, OutputFormat::Plain)
        }
        Command::Simulate(a) => (cmd_simulate(&a.or(file.simulate))?, OutputFormat::Plain),
        Command::RecalCheck { data, args } => {
            (cmd_recal_check(&data.or(file.data).resolve()?, &args.or(file.recal_check))?, OutputFormat::Plain)
        }
        Command::Label(a) => (cmd_label(&a.or(file.label))?, OutputFormat::Plain),
        Command::FigureData(a) => (cmd_figure_data(&a.or(file.figure_data))?, OutputFormat::Csv),
    };
    let text = doc.render(cli.format.unwrap_or(default_format))?;
    match cli.out {
        Some(path) => fs::write(&path, text).map_err(|source| Error::Io { path, source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
