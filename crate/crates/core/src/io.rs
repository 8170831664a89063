//! Delimited-text tables and their optional JSON schema sidecar.
//!
//! A table has a header row. By default the last column is the class, domains
//! are inferred from the observed values, and missing cells (empty or `?`)
//! are rejected. A sidecar fixes the domains instead; values outside them are
//! then errors.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Attribute, Domain, Item, Schema};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MissingPolicy {
    #[default]
    Reject,
    DropRow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadOptions {
    pub delimiter: u8,
    /// Class column by name; `None` means the last column.
    pub class_column: Option<String>,
    pub missing_token: String,
    pub missing: MissingPolicy,
    pub schema: Option<SchemaFile>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            class_column: None,
            missing_token: "?".to_string(),
            missing: MissingPolicy::Reject,
            schema: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDecl {
    pub name: String,
    pub domain: Vec<String>,
}

/// Declared domains for every column, keyed by column name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaFile {
    pub attributes: Vec<AttributeDecl>,
}

impl SchemaFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(File::open(path)?)?)
    }

    pub fn of_dataset(data: &Dataset) -> Self {
        let decl = |a: &Attribute| AttributeDecl {
            name: a.name.clone(),
            domain: a.domain.symbols().to_vec(),
        };
        let mut attributes: Vec<AttributeDecl> = data.schema().attributes().iter().map(decl).collect();
        attributes.push(decl(data.class()));
        Self { attributes }
    }

    pub fn of_schema(schema: &Schema) -> Self {
        Self {
            attributes: schema
                .attributes()
                .iter()
                .map(|a| AttributeDecl {
                    name: a.name.clone(),
                    domain: a.domain.symbols().to_vec(),
                })
                .collect(),
        }
    }

    fn domain_of(&self, column: &str) -> Option<&AttributeDecl> {
        self.attributes.iter().find(|a| a.name == column)
    }
}

/// Header and rows of a delimited file, with missing-value handling applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub dropped_rows: usize,
}

pub fn read_raw<R: Read>(reader: R, options: &LoadOptions) -> Result<RawTable> {
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::EmptyFile);
    }
    let mut rows = Vec::new();
    let mut dropped_rows = 0;
    for record in csv.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        let missing = record
            .iter()
            .position(|cell| cell.is_empty() || cell == options.missing_token);
        match (missing, options.missing) {
            (Some(col), MissingPolicy::Reject) => {
                return Err(Error::MissingValue {
                    line,
                    column: header[col].clone(),
                })
            }
            (Some(_), MissingPolicy::DropRow) => dropped_rows += 1,
            (None, _) => rows.push(record.iter().map(str::to_string).collect()),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(RawTable {
        header,
        rows,
        dropped_rows,
    })
}

fn column_domain(table: &RawTable, column: usize, schema: Option<&SchemaFile>) -> Result<Domain> {
    let name = &table.header[column];
    match schema.and_then(|s| s.domain_of(name)) {
        Some(decl) => Domain::new(name, decl.domain.iter().cloned()),
        None => {
            let observed: BTreeSet<&str> = table.rows.iter().map(|r| r[column].as_str()).collect();
            Domain::new(name, observed)
        }
    }
}

fn build_schema(table: &RawTable, columns: &[usize], schema: Option<&SchemaFile>) -> Result<Schema> {
    let attributes = columns
        .iter()
        .map(|&c| {
            Ok(Attribute::new(
                table.header[c].clone(),
                column_domain(table, c, schema)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Schema::new(attributes)
}

pub fn read_dataset<R: Read>(reader: R, options: &LoadOptions) -> Result<Dataset> {
    let table = read_raw(reader, options)?;
    let class_index = match &options.class_column {
        Some(name) => table
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingClassColumn(name.clone()))?,
        None => table.header.len() - 1,
    };
    if table.header.len() < 2 {
        return Err(Error::MissingClassColumn("<last>".into()));
    }
    let feature_columns: Vec<usize> = (0..table.header.len()).filter(|&c| c != class_index).collect();
    let schema = build_schema(&table, &feature_columns, options.schema.as_ref())?;
    let class = Attribute::new(
        table.header[class_index].clone(),
        column_domain(&table, class_index, options.schema.as_ref())?,
    );
    let mut items = Vec::with_capacity(table.rows.len());
    let mut labels = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let symbols: Vec<&str> = feature_columns.iter().map(|&c| row[c].as_str()).collect();
        items.push(schema.item(&symbols)?);
        labels.push(
            class
                .domain
                .code(&row[class_index])
                .ok_or_else(|| Error::UnknownSymbol {
                    attribute: class.name.clone(),
                    symbol: row[class_index].clone(),
                })?,
        );
    }
    Dataset::new(schema, class, items, labels)
}

pub fn load_dataset(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    read_dataset(File::open(path)?, options)
}

/// All columns as attributes, no class column.
pub fn read_table<R: Read>(reader: R, options: &LoadOptions) -> Result<(Schema, Vec<Item>)> {
    let table = read_raw(reader, options)?;
    let columns: Vec<usize> = (0..table.header.len()).collect();
    let schema = build_schema(&table, &columns, options.schema.as_ref())?;
    let items = table
        .rows
        .iter()
        .map(|row| schema.item(row))
        .collect::<Result<Vec<_>>>()?;
    Ok((schema, items))
}

pub fn load_table(path: impl AsRef<Path>, options: &LoadOptions) -> Result<(Schema, Vec<Item>)> {
    read_table(File::open(path)?, options)
}

/// Writes features then the class column, with a header.
pub fn write_dataset<W: Write>(writer: W, data: &Dataset, delimiter: u8) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    let mut header: Vec<&str> = data.schema().names().collect();
    header.push(&data.class().name);
    csv.write_record(&header)?;
    for (item, label) in data.rows() {
        let mut record = data.schema().symbols(item);
        record.push(data.label_symbol(label));
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_table<W: Write>(writer: W, schema: &Schema, items: &[Item], delimiter: u8) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    csv.write_record(schema.names())?;
    for item in items {
        csv.write_record(schema.symbols(item))?;
    }
    csv.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_row_file_round_trips() {
        let text = "a,b,class\nx,1,yes\ny,0,no\n";
        let data = read_dataset(text.as_bytes(), &LoadOptions::default()).unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data.schema().symbols(data.item(0)), ["x", "1"]);
        assert_eq!(data.label_symbol(data.label(1)), "no");
        let mut out = Vec::new();
        write_dataset(&mut out, &data, b',').unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn ragged_row_reports_line() {
        let text = "a,b,c\n0,1,0\n0,1\n";
        let err = read_dataset(text.as_bytes(), &LoadOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::RaggedRow {
                line: 3,
                expected: 3,
                found: 2
            }
        ));
    }

    #[test]
    fn empty_file_rejected() {
        assert!(matches!(
            read_dataset("a,b\n".as_bytes(), &LoadOptions::default()),
            Err(Error::EmptyFile)
        ));
        assert!(matches!(
            read_dataset("".as_bytes(), &LoadOptions::default()),
            Err(Error::EmptyFile)
        ));
    }

    #[test]
    fn named_class_column() {
        let text = "c,a\n1,x\n0,y\n";
        let opts = LoadOptions {
            class_column: Some("c".into()),
            ..Default::default()
        };
        let data = read_dataset(text.as_bytes(), &opts).unwrap();
        assert_eq!(data.class().name, "c");
        assert_eq!(data.schema().names().collect::<Vec<_>>(), ["a"]);
        let opts = LoadOptions {
            class_column: Some("zzz".into()),
            ..Default::default()
        };
        assert!(matches!(
            read_dataset(text.as_bytes(), &opts),
            Err(Error::MissingClassColumn(_))
        ));
    }

    #[test]
    fn missing_values_rejected_or_dropped() {
        let text = "a,b,c\n0,?,1\n1,0,0\n0,1,1\n1,1,0\n";
        assert!(matches!(
            read_dataset(text.as_bytes(), &LoadOptions::default()),
            Err(Error::MissingValue { line: 2, .. })
        ));
        let opts = LoadOptions {
            missing: MissingPolicy::DropRow,
            ..Default::default()
        };
        assert_eq!(read_dataset(text.as_bytes(), &opts).unwrap().len(), 3);
    }

    #[test]
    fn sidecar_closes_domains() {
        let schema = SchemaFile {
            attributes: vec![
                AttributeDecl {
                    name: "a".into(),
                    domain: vec!["x".into(), "y".into()],
                },
                AttributeDecl {
                    name: "c".into(),
                    domain: vec!["0".into(), "1".into()],
                },
            ],
        };
        let opts = LoadOptions {
            schema: Some(schema),
            ..Default::default()
        };
        // single observed value is fine once declared
        let data = read_dataset("a,c\nx,0\n".as_bytes(), &opts).unwrap();
        assert_eq!(data.schema().attribute(0).domain.len(), 2);
        assert!(matches!(
            read_dataset("a,c\nz,0\n".as_bytes(), &opts),
            Err(Error::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn tab_delimiter() {
        let opts = LoadOptions {
            delimiter: b'\t',
            ..Default::default()
        };
        let data = read_dataset("a\tc\n0\t1\n1\t0\n".as_bytes(), &opts).unwrap();
        assert_eq!(data.len(), 2);
    }
}
