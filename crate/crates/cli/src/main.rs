//! `ecmctl`: validate content models, render content, trace machine
//! programs and compile schemas.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(name = "ecmctl", version, about = "Typed content binding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a content model and print a summary
    Validate {
        /// Content model (.ecm)
        model: PathBuf,
    },
    /// Bind and render every .ecd document in a directory
    Render {
        /// Content model (.ecm)
        #[arg(long)]
        model: PathBuf,
        /// Directory of content documents
        #[arg(long)]
        content: PathBuf,
        /// Directory for rendered pages
        #[arg(long)]
        out: PathBuf,
        /// Personalization context applied to every document
        #[arg(long)]
        context: Option<PathBuf>,
    },
    /// Run a machine program and print its trace
    Trace {
        /// Machine program (.amc)
        #[arg(long)]
        program: PathBuf,
        /// Input values, one literal per line
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Emit relational DDL for a content model
    Schema {
        /// Content model (.ecm)
        #[arg(long)]
        model: PathBuf,
        /// File to write the DDL to
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Validate { model } => commands::validate(&model),
        Command::Render {
            model,
            content,
            out,
            context,
        } => commands::render(&model, &content, &out, context.as_deref()),
        Command::Trace { program, input } => commands::trace(&program, input.as_deref()),
        Command::Schema { model, out } => commands::schema(&model, &out),
    };
    ExitCode::from(status as u8)
}
