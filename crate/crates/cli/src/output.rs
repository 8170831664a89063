use std::io::Write;
use std::path::Path;

use analogy::io::{load_dataset, LoadOptions, MissingPolicy, SchemaFile};
use analogy::Dataset;
use serde::Serialize;

use crate::args::{DataArgs, Missing};
use crate::error::CliError;

/// Pretty JSON with a trailing newline; field order follows the structs.
pub fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(analogy::Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub fn load_sidecar(path: Option<&Path>) -> Result<Option<SchemaFile>, CliError> {
    path.map(|p| {
        SchemaFile::load(p).map_err(|source| CliError::Load {
            path: p.display().to_string(),
            source,
        })
    })
    .transpose()
}

pub fn load_options(args: &DataArgs) -> Result<LoadOptions, CliError> {
    Ok(LoadOptions {
        delimiter: args.delimiter.byte(),
        class_column: args.class_column.clone(),
        missing: match args.missing {
            Missing::Reject => MissingPolicy::Reject,
            Missing::Drop => MissingPolicy::DropRow,
        },
        schema: load_sidecar(args.schema.as_deref())?,
        ..LoadOptions::default()
    })
}

pub fn load(path: &Path, options: &LoadOptions) -> Result<Dataset, CliError> {
    load_dataset(path, options).map_err(|source| CliError::Load {
        path: path.display().to_string(),
        source,
    })
}

pub fn percent(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}
