//! `respkit` — command-line front door for responsibility modelling:
//! validate a model, analyze control boundaries, enumerate hazard clauses
//! into a risk register, diff as-is/to-be models, export CSV, render DOT.
//!
//! Reports go to standard output; diagnostics go to standard error in
//! `file:line:col: severity: rule: message` form. Exit codes: 0 success,
//! 1 domain error (bad model, unknown agent, malformed register),
//! 2 usage or I/O error.

use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use respkit_core::fsutil::atomic_write;
use respkit_core::{
    boundary_report_md, control_boundary, diff, diff_report, enumerate_clauses, export_csv,
    from_rmreg, init_register, inter_org_relationships, merge, parse, to_dot, to_dot_highlighted,
    to_rmreg, ApplicabilityMatrix, AssocTraversal, ClosureConfig, Model, ParseDiagnostic, Register,
    Scope, Severity,
};

#[derive(Parser)]
#[command(
    name = "respkit",
    version,
    about = "Responsibility modelling toolkit for coalitions of systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model file and report notation diagnostics
    Validate {
        /// Model file (.rm)
        path: PathBuf,
    },
    /// Enumerate hazard risk-clause skeletons and merge them into a register
    Enumerate {
        /// Model file (.rm)
        path: PathBuf,
        /// Which targets to enumerate
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        /// Applicability matrix (TOML); defaults to all keywords everywhere
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Register file (.rmreg) to create or merge into
        #[arg(long)]
        register: PathBuf,
    },
    /// Compare two models and report the changes
    Diff {
        /// The as-is model file
        before: PathBuf,
        /// The to-be model file
        after: PathBuf,
        /// Report format: Markdown tables or DOT with additions highlighted
        #[arg(long, value_enum, default_value_t = FormatArg::Md)]
        format: FormatArg,
    },
    /// Report an agent's dependency closure split by control boundary
    Analyze {
        /// Model file (.rm)
        path: PathBuf,
        /// Agent (human or organization) whose boundary to compute
        #[arg(long)]
        agent: String,
        /// How association edges are traversed
        #[arg(long, value_enum, default_value_t = AssocArg::Both)]
        assoc: AssocArg,
    },
    /// Export a risk register as CSV
    Export {
        /// Register file (.rmreg)
        register: PathBuf,
        /// Write CSV here instead of standard output
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Render a model as Graphviz DOT
    Render {
        /// Model file (.rm)
        path: PathBuf,
        /// Write DOT here instead of standard output
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    InterOrg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Md,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssocArg {
    Both,
    Forward,
    None,
}

/// A failed command: exit code plus an optional final message (empty when
/// the relevant diagnostics were already printed).
struct Failure {
    code: u8,
    message: String,
}

fn domain(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn io_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("{}: {}", styled("error", "31"), failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Enumerate {
            path,
            scope,
            matrix,
            register,
        } => cmd_enumerate(&path, scope, matrix.as_deref(), &register),
        Command::Diff {
            before,
            after,
            format,
        } => cmd_diff(&before, &after, format),
        Command::Analyze { path, agent, assoc } => cmd_analyze(&path, &agent, assoc),
        Command::Export { register, csv } => cmd_export(&register, csv.as_deref()),
        Command::Render { path, dot } => cmd_render(&path, dot.as_deref()),
    }
}

fn styled(text: &str, sgr: &str) -> String {
    let colored = std::io::stderr().is_terminal() && std::env::var_os("RESPKIT_NO_COLOR").is_none();
    if colored {
        format!("\x1b[{sgr}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn print_diagnostic(path: &Path, d: &ParseDiagnostic) {
    let severity = match d.severity {
        Severity::Error => styled("error", "31"),
        Severity::Warning => styled("warning", "33"),
    };
    eprintln!(
        "{}:{}:{}: {}: {}: {}",
        path.display(),
        d.span.line,
        d.span.column,
        severity,
        d.rule,
        d.message
    );
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    atomic_write(path, contents.as_bytes())
        .map_err(|e| io_failure(format!("{}: {e}", path.display())))
}

/// Loads and parses a model, printing every diagnostic. Warnings alone do
/// not fail the load.
fn load_model(path: &Path) -> Result<Model, Failure> {
    let source = read_file(path)?;
    match parse(&source) {
        Ok(parsed) => {
            for warning in &parsed.warnings {
                print_diagnostic(path, warning);
            }
            Ok(parsed.model)
        }
        Err(diagnostics) => {
            for d in &diagnostics {
                print_diagnostic(path, d);
            }
            Err(Failure {
                code: 1,
                message: String::new(),
            })
        }
    }
}

fn load_register(path: &Path) -> Result<Register, Failure> {
    let text = read_file(path)?;
    from_rmreg(&text).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let model = load_model(path)?;
    println!(
        "ok: {} ({} entities, {} relationships, {} inter-organizational)",
        model.name,
        model.entities.len(),
        model.relationships.len(),
        inter_org_relationships(&model).len()
    );
    Ok(())
}

fn cmd_enumerate(
    path: &Path,
    scope: ScopeArg,
    matrix_path: Option<&Path>,
    register_path: &Path,
) -> Result<(), Failure> {
    let model = load_model(path)?;
    let matrix = match matrix_path {
        Some(p) => ApplicabilityMatrix::from_toml_str(&read_file(p)?)
            .map_err(|e| domain(format!("{}: {e}", p.display())))?,
        None => ApplicabilityMatrix::default(),
    };
    let scope = match scope {
        ScopeArg::All => Scope::All,
        ScopeArg::InterOrg => Scope::InterOrg,
    };
    let skeletons = enumerate_clauses(&model, scope, &matrix).map_err(|e| domain(e.to_string()))?;

    let (mut register, summary) = if register_path.exists() {
        let existing = load_register(register_path)?;
        if existing.model_name != model.name {
            eprintln!(
                "{}: register {} was built from model `{}`; merging clauses from `{}`",
                styled("warning", "33"),
                register_path.display(),
                existing.model_name,
                model.name
            );
        }
        merge(&existing, &skeletons)
    } else {
        let fresh =
            init_register(model.name.clone(), &skeletons).map_err(|e| domain(e.to_string()))?;
        let added = fresh.clauses.len();
        (
            fresh,
            respkit_core::MergeSummary {
                kept: 0,
                added,
                orphaned: 0,
            },
        )
    };
    register.model_name = model.name.clone();

    write_output(register_path, &to_rmreg(&register))?;
    println!("{}: {}", register_path.display(), summary);
    Ok(())
}

fn cmd_diff(before_path: &Path, after_path: &Path, format: FormatArg) -> Result<(), Failure> {
    let before = load_model(before_path)?;
    let after = load_model(after_path)?;
    let changes = diff(&before, &after);
    match format {
        FormatArg::Md => print!("{}", diff_report(&changes)),
        FormatArg::Dot => {
            let dot = to_dot_highlighted(&after, &changes).map_err(|e| domain(e.to_string()))?;
            print!("{dot}");
        }
    }
    Ok(())
}

fn cmd_analyze(path: &Path, agent: &str, assoc: AssocArg) -> Result<(), Failure> {
    let model = load_model(path)?;
    let cfg = ClosureConfig {
        follow_assoc: match assoc {
            AssocArg::Both => AssocTraversal::Both,
            AssocArg::Forward => AssocTraversal::Forward,
            AssocArg::None => AssocTraversal::None,
        },
        ..ClosureConfig::default()
    };
    let report = control_boundary(&model, agent, &cfg).map_err(|e| domain(e.to_string()))?;
    print!("{}", boundary_report_md(&report));
    Ok(())
}

fn cmd_export(register_path: &Path, csv_path: Option<&Path>) -> Result<(), Failure> {
    let register = load_register(register_path)?;
    let csv = export_csv(&register);
    match csv_path {
        Some(p) => write_output(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_render(path: &Path, dot_path: Option<&Path>) -> Result<(), Failure> {
    let model = load_model(path)?;
    let dot = to_dot(&model).map_err(|e| domain(e.to_string()))?;
    match dot_path {
        Some(p) => write_output(p, &dot)?,
        None => print!("{dot}"),
    }
    Ok(())
}
