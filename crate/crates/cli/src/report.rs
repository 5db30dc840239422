//! The serialized result of one command.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// How a command ended; maps one-to-one onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    BudgetExceeded,
    InvalidInput,
    CrossCheckFailed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::BudgetExceeded => 2,
            Status::InvalidInput => 3,
            Status::CrossCheckFailed => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::BudgetExceeded => "budget-exceeded",
            Status::InvalidInput => "invalid-input",
            Status::CrossCheckFailed => "cross-check-failed",
        }
    }

    pub fn of(err: &fibnorm::Error) -> Status {
        use fibnorm::Error::*;
        match err {
            BudgetExceeded { .. } | Interrupted { .. } => Status::BudgetExceeded,
            CrossCheck(_) | FactorizationFailed(_) => Status::CrossCheckFailed,
            _ => Status::InvalidInput,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Every value is a string so large integers and exact fractions survive JSON
/// untouched; `rows[i][j]` is labeled by `columns[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub meta: BTreeMap<String, String>,
    pub status: Status,
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: BTreeMap::new(),
            status: Status::Ok,
            errors: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Records a failure; the most severe status wins.
    pub fn fail(&mut self, status: Status, message: impl ToString) {
        self.errors.push(message.to_string());
        if status.exit_code() > self.status.exit_code() {
            self.status = status;
        }
    }

    pub fn error(&mut self, err: &fibnorm::Error) {
        self.fail(Status::of(err), err);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.command);
        for (k, v) in &self.params {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        if !self.columns.is_empty() {
            let _ = writeln!(out, "{}", line(&self.columns));
        }
        for row in &self.rows {
            let _ = writeln!(out, "{}", line(row));
        }
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for e in &self.errors {
            let _ = writeln!(out, "# error: {e}");
        }
        if self.status != Status::Ok {
            let _ = writeln!(out, "# status: {}", self.status.label());
        }
        out
    }
}
