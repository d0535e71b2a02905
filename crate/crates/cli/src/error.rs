use std::io;
use std::path::PathBuf;

use fspcheck_boiler::{EmitError, ParamsError};
use fspcheck_core::analysis::AnalysisError;
use fspcheck_core::lts::LtsError;
use fspcheck_core::syntax::{ExpandError, SyntaxError};
use thiserror::Error;

/// Everything that ends a run with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Syntax { path: PathBuf, source: SyntaxError },
    #[error(transparent)]
    Resolve(SyntaxError),
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error("{}: {source}", path.display())]
    Params { path: PathBuf, source: ParamsError },
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Output(#[from] io::Error),
}
