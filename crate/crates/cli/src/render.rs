//! Rendering of command results as JSON, CSV or aligned text.

use serde_json::{Map, Value};

use crate::census::Census;
use crate::{CliError, SCHEMA_VERSION};

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

/// Nested objects become `outer.inner` keys.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

pub fn record_json(record: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(record)? + "\n")
}

/// One header line and one data line.
pub fn record_csv(record: &Value) -> Result<String, CliError> {
    let mut fields = Vec::new();
    flatten("", record, &mut fields);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields.iter().map(|(k, _)| k.as_str()))?;
    w.write_record(fields.iter().map(|(_, v)| scalar(v)))?;
    finish_csv(w)
}

/// `key: value` lines, keys padded to a common width.
pub fn record_table(record: &Value) -> String {
    let mut fields = Vec::new();
    flatten("", record, &mut fields);
    let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in fields {
        let shown = match v {
            Value::Null => "-".to_string(),
            Value::Array(items) if items.is_empty() => "-".to_string(),
            Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
            other => scalar(&other),
        };
        out.push_str(&format!("{k:<width$}  {shown}\n"));
    }
    out
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn census_csv(census: &Census) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if census.rows.is_empty() {
        w.write_record([
            "schema_version",
            "p",
            "r",
            "s",
            "t",
            "nonsingular",
            "superspecial",
            "verdict",
            "auto_group",
            "mu1_square",
            "oracle_count",
        ])?;
    }
    for row in &census.rows {
        w.serialize(row)?;
    }
    finish_csv(w)
}

pub fn census_json(census: &Census) -> Result<String, CliError> {
    let mut obj = Map::new();
    obj.insert("schema_version".into(), SCHEMA_VERSION.into());
    obj.insert("command".into(), "enumerate".into());
    obj.insert("p".into(), census.p.into());
    obj.insert("summary".into(), serde_json::to_value(&census.summary)?);
    obj.insert("rows".into(), serde_json::to_value(&census.rows)?);
    obj.insert("violations".into(), serde_json::to_value(&census.violations)?);
    record_json(&Value::Object(obj))
}

pub fn census_table(census: &Census) -> String {
    let headers = ["r", "s", "t", "verdict", "group", "mu1_square", "oracle_count"];
    let cells: Vec<[String; 7]> = census
        .rows
        .iter()
        .map(|row| {
            [
                row.r.clone(),
                row.s.clone(),
                row.t.clone(),
                row.verdict.clone().unwrap_or_else(|| "-".into()),
                row.auto_group.clone(),
                row.mu1_square.map_or("-".into(), |b| b.to_string()),
                row.oracle_count.map_or("-".into(), |n| n.to_string()),
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for line in &cells {
        for (w, cell) in widths.iter_mut().zip(line) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_line = |items: &[String]| {
        let parts: Vec<String> = items
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    push_line(&headers.map(String::from));
    for line in &cells {
        push_line(line);
    }
    out.push_str(&format!("p = {}: {}\n", census.p, census.summary));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening_and_csv() {
        let v = json!({"a": 1, "b": {"c": "x", "d": null}, "e": [1, 2]});
        let csv = record_csv(&v).unwrap();
        assert_eq!(csv, "a,b.c,b.d,e\n1,x,,1;2\n");
        let table = record_table(&v);
        assert_eq!(table, "a    1\nb.c  x\nb.d  -\ne    1, 2\n");
    }
}
