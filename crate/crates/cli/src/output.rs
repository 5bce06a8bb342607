use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::{Common, Format};
use crate::error::CliError;

pub fn format(common: &Common, default: Format) -> Format {
    common.format.unwrap_or_else(|| match common.out.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext == "json" => Format::Json,
        Some(ext) if ext == "csv" => Format::Csv,
        _ => default,
    })
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer.into_inner().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn json_bytes<T: Serialize + ?Sized>(doc: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit(common: &Common, bytes: &[u8]) -> Result<(), CliError> {
    match &common.out {
        Some(path) => write_file(path, bytes),
        None => match std::io::stdout().write_all(bytes) {
            // A closed pipe (`| head`) is not a failure of the command.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
        },
    }
}

/// Writes a table as CSV or as a JSON array.
pub fn table<T: Serialize>(common: &Common, rows: &[T]) -> Result<(), CliError> {
    let bytes = match format(common, Format::Csv) {
        Format::Csv => csv_bytes(rows)?,
        Format::Json => json_bytes(rows)?,
    };
    emit(common, &bytes)
}

/// Writes a JSON document; CSV is not available for nested reports.
pub fn document<T: Serialize>(common: &Common, name: &str, doc: &T) -> Result<(), CliError> {
    if format(common, Format::Json) == Format::Csv {
        return Err(CliError::Usage(format!("{name} writes a JSON document; use --format json")));
    }
    emit(common, &json_bytes(doc)?)
}
