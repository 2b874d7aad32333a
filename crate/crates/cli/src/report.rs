//! The report every command produces, rendered as JSON or as text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub equal: Option<bool>,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub inputs: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, field: &str) -> Self {
        Report {
            command: command.to_string(),
            field: field.to_string(),
            inputs: BTreeMap::new(),
            rows: Vec::new(),
            pass: true,
            result: None,
            notes: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} over {}", self.command, self.field);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        if let Some(result) = &self.result {
            render_value(&mut out, "", result);
        }
        if !self.rows.is_empty() {
            let cell = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
            let flag = |e: Option<bool>| match e {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            let rows: Vec<[String; 5]> = self
                .rows
                .iter()
                .map(|r| [r.n.to_string(), cell(&r.lhs), cell(&r.rhs), flag(r.equal).into(), r.method.clone()])
                .collect();
            out.push_str(&table(&["n", "lhs", "rhs", "equal", "method"], &rows));
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn render_value(out: &mut String, indent: &str, v: &serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        let _ = writeln!(out, "{indent}{k}:");
                        render_value(out, &format!("{indent}  "), v);
                    }
                    _ => {
                        let _ = writeln!(out, "{indent}{k}: {}", scalar(v));
                    }
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                match item {
                    serde_json::Value::Object(map) => {
                        let line: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                        let _ = writeln!(out, "{indent}- {}", line.join(", "));
                    }
                    _ => {
                        let _ = writeln!(out, "{indent}- {}", scalar(item));
                    }
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{indent}{}", scalar(v));
        }
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&mut out, header.to_vec());
    for r in rows {
        line(&mut out, r.iter().map(String::as_str).collect());
    }
    out
}
