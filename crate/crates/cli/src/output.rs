//! Record emission: JSON lines (default) or TSV with a header row.

use clap::ValueEnum;
use classprod::report::CheckRecord;
use serde_json::Value;
use std::io::Write;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Tsv,
}

pub fn emit_records(format: Format, records: &[Value]) -> anyhow::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Jsonl => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Tsv => {
            // serde_json maps iterate in sorted key order, so the header is
            // deterministic; columns come from the first record.
            let Some(first) = records.first() else { return Ok(()) };
            let keys: Vec<String> = first
                .as_object()
                .map(|m| m.keys().cloned().collect())
                .unwrap_or_default();
            writeln!(out, "{}", keys.join("\t"))?;
            for r in records {
                let row: Vec<String> = keys
                    .iter()
                    .map(|k| match r.get(k) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    })
                    .collect();
                writeln!(out, "{}", row.join("\t"))?;
            }
        }
    }
    Ok(())
}

pub fn emit_checks(format: Format, records: &[CheckRecord]) -> anyhow::Result<()> {
    let values: Vec<Value> = records
        .iter()
        .map(|r| serde_json::to_value(r).expect("check record serializes"))
        .collect();
    emit_records(format, &values)
}
