use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{CliError, Format, GlobalOpts};

pub const TOOL: &str = "symlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub global: GlobalOpts,
    pub digest: String,
    pub result: Value,
    /// Set when the command ran to completion but reports a failure
    /// (e.g. a failed experiment step); the report is still written.
    pub failure: Option<CliError>,
}

fn flags_json(g: &GlobalOpts) -> Value {
    let lp_mode = if g.exact {
        "exact"
    } else if g.float {
        "float"
    } else {
        "auto"
    };
    json!({
        "seed": g.seed,
        "format": match g.format { Format::Json => "json", Format::Csv => "csv" },
        "lp_mode": lp_mode,
        "cap": g.cap,
    })
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "args": self.args,
            "flags": flags_json(&self.global),
            "seed": self.global.seed,
            "input_digest": self.digest,
            "result": self.result,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"),
            Format::Csv => self.render_csv(),
        }
    }

    /// The result's `table` if it has one, else its top-level fields as
    /// key/value rows. A leading `#` line carries version, seed and digest.
    fn render_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
        if let Some(table) = self.result.get("table") {
            let columns: Vec<String> = table["columns"]
                .as_array()
                .map(|c| c.iter().map(cell).collect())
                .unwrap_or_default();
            w.write_record(&columns).map_err(csv_err)?;
            for row in table["rows"].as_array().into_iter().flatten() {
                let cells: Vec<String> = row.as_array().into_iter().flatten().map(cell).collect();
                w.write_record(&cells).map_err(csv_err)?;
            }
        } else {
            w.write_record(["key", "value"]).map_err(csv_err)?;
            if let Some(obj) = self.result.as_object() {
                for (k, v) in obj {
                    w.write_record([k.clone(), cell(v)]).map_err(csv_err)?;
                }
            }
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
            .expect("csv writes UTF-8");
        Ok(format!(
            "# {TOOL} {VERSION} {} seed={} digest={}\n{body}",
            self.command, self.global.seed, self.digest
        ))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// SHA-256 over the arguments (minus `--out` and `--format`, which do not
/// change the result) and the bytes of every file read while parsing.
pub fn input_digest(args: &[String], files: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--format" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--format=") {
            continue;
        }
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    for (path, bytes) in files {
        h.update([1u8]);
        h.update(path.as_bytes());
        h.update([0u8]);
        h.update(Sha256::digest(bytes));
    }
    hex::encode(h.finalize())
}
