use std::path::{Path, PathBuf};

use fspcheck_core::{parse, SpecAst};

use crate::error::CliError;

/// Reads and parses the input files as one unit, so declarations may refer
/// across files. Syntax errors are reported against the file they occur in.
pub fn load(paths: &[PathBuf]) -> Result<SpecAst, CliError> {
    if paths.is_empty() {
        return Err(CliError::Config("no input files".into()));
    }
    let mut text = String::new();
    let mut starts: Vec<(usize, &Path)> = Vec::new();
    for path in paths {
        let body = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        starts.push((text.lines().count() + 1, path));
        text.push_str(&body);
        if !body.ends_with('\n') {
            text.push('\n');
        }
    }
    parse(&text).map_err(|err| match err.line() {
        Some(line) => {
            let &(first, path) = starts
                .iter()
                .rev()
                .find(|(first, _)| *first <= line)
                .expect("line 1 belongs to the first file");
            CliError::Syntax {
                path: path.to_path_buf(),
                source: err.with_line(line - first + 1),
            }
        }
        None => CliError::Resolve(err),
    })
}

/// The named target, or else the last composite declared, or else the last
/// primitive process.
pub fn target(spec: &SpecAst, requested: Option<&str>) -> Result<String, CliError> {
    if let Some(name) = requested {
        if spec.composites.contains_key(name) || spec.process(name).is_some() {
            return Ok(name.to_string());
        }
        return Err(CliError::Config(format!(
            "`{name}` is not a declared process or composite"
        )));
    }
    spec.composites
        .keys()
        .last()
        .or_else(|| {
            spec.processes
                .iter()
                .rev()
                .find(|p| !p.is_property)
                .map(|p| &p.name)
        })
        .cloned()
        .ok_or_else(|| CliError::Config("the input declares no process".into()))
}
