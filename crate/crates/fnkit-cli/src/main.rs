use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fnkit_cli::commands::{self, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "fnkit",
    about = "Function integration toolkit: validate function models, bind them to a platform, \
             generate function adapters, and execute them on the built-in middleware simulator",
    version
)]
struct Cli {
    /// Output format for reports and summaries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Clock {
    Virtual,
    Wall,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate function model files, optionally against a signal catalog.
    Validate {
        /// Function model JSON files.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Signal catalog for conformance checking.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Emit the JSON Schema for a model kind.
    Schema {
        /// Model kind: function or integration.
        kind: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform function models plus platform and topology into an integration model.
    Transform {
        /// Function model JSON files.
        #[arg(required = true)]
        functions: Vec<PathBuf>,
        #[arg(long)]
        platform: PathBuf,
        #[arg(long)]
        topology: PathBuf,
        /// Output path for the canonical integration JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate the function adapter for one component.
    Generate {
        /// Integration model JSON file.
        integration: PathBuf,
        #[arg(long)]
        component: String,
        /// Template directory (falls back to FNKIT_TEMPLATES, then the bundled set).
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Output directory for the artifact.
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute adapter manifests with the bundled demo functions.
    Run {
        /// Adapter manifest JSON files.
        #[arg(long, required = true, num_args = 1..)]
        manifests: Vec<PathBuf>,
        /// Signal trace replayed onto the bus (JSON lines).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Run duration in milliseconds.
        #[arg(long)]
        duration: u64,
        #[arg(long, value_enum, default_value_t = Clock::Virtual)]
        clock: Clock,
        /// Output path for the run trace (JSON lines).
        #[arg(long)]
        out: PathBuf,
    },
    /// Derive KPIs from a run trace, optionally comparing against a baseline.
    Kpi {
        /// Run trace to analyze.
        #[arg(long)]
        run: PathBuf,
        /// Baseline trace for behavior-equivalence comparison.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Comma-separated event paths to compare (default: all baseline events).
        #[arg(long)]
        events: Option<String>,
    },
    /// Run the bundled EcoControl workflow end to end and print a summary.
    Demo {
        /// Output directory.
        #[arg(long, default_value = "fnkit-demo-out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.into();
    let code = match &cli.command {
        Command::Validate { files, catalog } => {
            commands::cmd_validate(files, catalog.as_deref(), format)
        }
        Command::Schema { kind, out } => commands::cmd_schema(kind, out.as_deref()),
        Command::Transform { functions, platform, topology, out } => {
            commands::cmd_transform(functions, platform, topology, out, format)
        }
        Command::Generate { integration, component, templates, out } => {
            commands::cmd_generate(integration, component, templates.as_deref(), out, format)
        }
        Command::Run { manifests, trace, duration, clock, out } => commands::cmd_run(
            &RunConfig {
                manifest_paths: manifests,
                trace_path: trace.as_deref(),
                duration_ms: *duration,
                wall_clock: *clock == Clock::Wall,
                out,
            },
            format,
        ),
        Command::Kpi { run, baseline, events } => {
            commands::cmd_kpi(run, baseline.as_deref(), events.as_deref(), format)
        }
        Command::Demo { out } => commands::cmd_demo(out, format),
    };
    ExitCode::from(code as u8)
}
