//! `fspcheck`: compile FSP specifications to labelled transition systems and
//! check them for property violations, deadlocks and progress violations.

mod error;
mod input;
mod report;
mod simulate;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fspcheck_boiler::{emit_with, BoilerParams, EmitOptions, Mode, Mutation, ProgressVariant};
use fspcheck_core::analysis::{
    check_deadlock, check_progress, check_safety, progress_sets, ProgressSet, Stats,
};
use fspcheck_core::lts::{build_target, CompileOptions, DEFAULT_MAX_STATES};
use fspcheck_core::{Lts, SpecAst};
use serde_json::json;

use error::CliError;
use report::CheckOutcome;

#[derive(Debug, Parser)]
#[command(name = "fspcheck", version, about)]
struct Cli {
    /// Output format for check, stats and emit.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Abort exploration once this many states have been generated.
    #[arg(long, global = true, env = "FSPCHECK_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compose a target and run safety, deadlock and progress checks.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Check for reachable ERROR states.
        #[arg(long)]
        safety: bool,
        /// Check for reachable states without outgoing transitions.
        #[arg(long)]
        deadlock: bool,
        /// Check every declared progress set.
        #[arg(long)]
        progress: bool,
        /// Run every check (the default when no check is named).
        #[arg(long)]
        all: bool,
    },
    /// Print the size of a target's state space.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Step through a target interactively on stdin.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Write the steam boiler model as FSP.
    Emit {
        /// Parameter file; the reference constants when omitted.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Directory the .fsp files are written to.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Controller defect to inject.
        #[arg(long, value_enum, default_value_t = MutationArg::None)]
        mutation: MutationArg,
        /// Progress declarations to emit.
        #[arg(long, value_enum, default_value_t = ProgressArg::Faithful)]
        progress: ProgressArg,
    },
    /// Parse the input files and report syntax errors only.
    Parse {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// FSP source files, read as one specification.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Process or composite to analyse; defaults to the last composite.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Explicit,
    Implicit,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MutationArg {
    None,
    NoOff,
    AlwaysKeep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProgressArg {
    Faithful,
    Literal,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut io::stdout().lock()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every requested check holds.
fn run(cli: &Cli, out: &mut impl Write) -> Result<bool, CliError> {
    let opts = CompileOptions {
        max_states: cli.max_states,
    };
    match &cli.command {
        Command::Check {
            input,
            safety,
            deadlock,
            progress,
            all,
        } => {
            let everything = *all || !(*safety || *deadlock || *progress);
            let (spec, target, lts, stats) = build(input, opts)?;
            let mut reports = Vec::new();
            if everything || *safety {
                reports.push(check_safety(&lts));
            }
            if everything || *deadlock {
                reports.push(check_deadlock(&lts));
            }
            let mut inapplicable = Vec::new();
            if everything || *progress {
                let (sets, skipped) = applicable_sets(&spec, &lts)?;
                inapplicable = skipped;
                reports.extend(check_progress(&lts, &sets)?);
            }
            let outcome = CheckOutcome {
                target,
                stats,
                reports,
                inapplicable,
            };
            match cli.format {
                Format::Human => outcome.write_human(out)?,
                Format::Json => outcome.write_json(out)?,
            }
            Ok(outcome.all_hold())
        }
        Command::Stats { input } => {
            let (_, target, lts, stats) = build(input, opts)?;
            match cli.format {
                Format::Human => {
                    writeln!(out, "Composition: {target}")?;
                    writeln!(out, "States: {}", stats.states)?;
                    writeln!(out, "Transitions: {}", stats.transitions)?;
                    writeln!(out, "Alphabet: {}", lts.alphabet().len())?;
                    writeln!(out, "Time: {:.0} ms", stats.elapsed_ms)?;
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "target": target,
                        "states": stats.states,
                        "transitions": stats.transitions,
                        "alphabet": lts.alphabet().len(),
                        "elapsed_ms": stats.elapsed_ms,
                    })
                )?,
            }
            Ok(true)
        }
        Command::Simulate { input } => {
            let (_, _, lts, _) = build(input, opts)?;
            simulate::run(&lts, io::stdin().lock(), out)?;
            Ok(true)
        }
        Command::Emit {
            params,
            mode,
            out: dir,
            mutation,
            progress,
        } => {
            emit(cli.format, params.as_ref(), *mode, dir, *mutation, *progress, out)?;
            Ok(true)
        }
        Command::Parse { files } => {
            input::load(files)?;
            writeln!(out, "OK")?;
            Ok(true)
        }
    }
}

fn build(input: &InputArgs, opts: CompileOptions) -> Result<(SpecAst, String, Lts, Stats), CliError> {
    let spec = input::load(&input.files)?;
    let target = input::target(&spec, input.target.as_deref())?;
    let start = Instant::now();
    let lts = build_target(&spec, &target, opts)?;
    let stats = Stats::of(&lts, start.elapsed());
    Ok((spec, target, lts, stats))
}

/// Splits the declared progress sets into those that can be checked against
/// `lts` and the names of those that mention none of its labels.
fn applicable_sets(spec: &SpecAst, lts: &Lts) -> Result<(Vec<ProgressSet>, Vec<String>), CliError> {
    let (sets, skipped): (Vec<_>, Vec<_>) = progress_sets(spec)?
        .into_iter()
        .partition(|set| set.labels.iter().any(|l| lts.label_id(l).is_some()));
    Ok((sets, skipped.into_iter().map(|s| s.name).collect()))
}

fn emit(
    format: Format,
    params: Option<&PathBuf>,
    mode: ModeArg,
    dir: &PathBuf,
    mutation: MutationArg,
    progress: ProgressArg,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let params = match params {
        None => BoilerParams::reference(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            text.parse().map_err(|source| CliError::Params {
                path: path.clone(),
                source,
            })?
        }
    };
    let modes: &[Mode] = match mode {
        ModeArg::Explicit => &[Mode::Explicit],
        ModeArg::Implicit => &[Mode::Implicit],
        ModeArg::Both => &Mode::ALL,
    };
    let mutation = match mutation {
        MutationArg::None => Mutation::None,
        MutationArg::NoOff => Mutation::NoOff,
        MutationArg::AlwaysKeep => Mutation::AlwaysKeep,
    };
    let progress = match progress {
        ProgressArg::Faithful => ProgressVariant::Faithful,
        ProgressArg::Literal => ProgressVariant::Literal,
    };
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    for &m in modes {
        let text = emit_with(&params, &EmitOptions::new(m).mutation(mutation).progress(progress))?;
        let path = dir.join(file_name(m, mutation));
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    match format {
        Format::Human => {
            writeln!(out, "Constants:")?;
            for (k, v) in params.entries() {
                writeln!(out, "  {k:<8} {v}")?;
            }
            for path in &written {
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        Format::Json => {
            let constants: serde_json::Map<String, serde_json::Value> =
                params.entries().map(|(k, v)| (k.to_string(), v.into())).collect();
            let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            writeln!(out, "{}", json!({ "constants": constants, "files": files }))?;
        }
    }
    Ok(())
}

fn file_name(mode: Mode, mutation: Mutation) -> String {
    let base = mode.file_name();
    let suffix = match mutation {
        Mutation::None => return base.to_string(),
        Mutation::NoOff => "nooff",
        Mutation::AlwaysKeep => "alwayskeep",
    };
    format!("{}_{suffix}.fsp", base.trim_end_matches(".fsp"))
}
