use std::io::{self, Write};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use weil_core::ClassificationRecord;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

/// One CSV line. Absent fields serialize as empty cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub q: i64,
    pub a: i64,
    pub b: i64,
    pub admissible: bool,
    pub p_rank: Option<u8>,
    pub simple: Option<bool>,
    pub s: Option<i64>,
    pub t: Option<i64>,
    pub order: i64,
    pub c: Option<i64>,
    pub jacobian: Option<bool>,
}

impl From<&ClassificationRecord> for CsvRow {
    fn from(r: &ClassificationRecord) -> Self {
        Self {
            q: r.q.q(),
            a: r.a,
            b: r.b,
            admissible: r.admissible,
            p_rank: r.p_rank,
            simple: r.simple,
            s: r.split.map(|f| f.s),
            t: r.split.map(|f| f.t),
            order: r.order,
            c: r.c,
            jacobian: r.jacobian,
        }
    }
}

const COLUMNS: [&str; 12] = [
    "q",
    "a",
    "b",
    "admissible",
    "p_rank",
    "simple",
    "s",
    "t",
    "order",
    "c",
    "jacobian",
    "conditions",
];

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn table_row(r: &ClassificationRecord) -> [String; 12] {
    let conditions: Vec<String> = r.conditions.iter().map(|c| c.label()).collect();
    [
        r.q.to_string(),
        r.a.to_string(),
        r.b.to_string(),
        r.admissible.to_string(),
        cell(r.p_rank),
        cell(r.simple),
        cell(r.split.map(|f| f.s)),
        cell(r.split.map(|f| f.t)),
        r.order.to_string(),
        cell(r.c),
        cell(r.jacobian),
        if conditions.is_empty() {
            "-".to_string()
        } else {
            conditions.join(",")
        },
    ]
}

pub fn write_records(
    out: &mut impl Write,
    records: &[ClassificationRecord],
    format: OutputFormat,
) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            if records.is_empty() {
                writer.write_record(&COLUMNS[..11])?;
            }
            for r in records {
                writer.serialize(CsvRow::from(r))?;
            }
            writer.flush()?;
        }
        OutputFormat::Table => {
            let rows: Vec<[String; 12]> = records.iter().map(table_row).collect();
            let mut widths = COLUMNS.map(str::len);
            for row in &rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(widths)
                    .enumerate()
                    .map(|(i, (c, w))| {
                        if i + 1 == COLUMNS.len() {
                            c.to_string()
                        } else {
                            format!("{c:>w$}")
                        }
                    })
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(COLUMNS.to_vec()))?;
            for row in &rows {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(())
}
