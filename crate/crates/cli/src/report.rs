//! Run reports: JSON for machines, aligned tables for people.

use std::fmt::Write as _;

use opstar::linalg::{CMatrix, C64};
use opstar::report::{Check, CheckReport};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Int(i64),
    Complex(C64),
    Reals(Vec<f64>),
    Vector(Vec<C64>),
    Matrix(CMatrix),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<C64> for Value {
    fn from(z: C64) -> Self {
        Value::Complex(z)
    }
}

impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::Reals(v)
    }
}

impl From<Vec<C64>> for Value {
    fn from(v: Vec<C64>) -> Self {
        Value::Vector(v)
    }
}

impl From<CMatrix> for Value {
    fn from(m: CMatrix) -> Self {
        Value::Matrix(m)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: Value,
    /// Bound the value is held to; absent for plain data.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<&'static str>,
    pub status: Status,
}

impl Entry {
    fn from_check(check: &Check, prefix: &str) -> Self {
        let name = if prefix.is_empty() { check.name.clone() } else { format!("{prefix}: {}", check.name) };
        Entry {
            name,
            value: Value::Real(check.value),
            bound: Some(check.bound),
            relation: Some(check.relation.symbol()),
            status: if check.passed { Status::Pass } else { Status::Fail },
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Table { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let cols = self.headers.len();
        let mut width: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::from(" ");
            for (i, c) in cells.iter().enumerate().take(cols) {
                let pad = width[i] - c.chars().count();
                s.push(' ');
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
                s.push_str(if i + 1 < cols { "  " } else { "" });
            }
            s.trim_end().to_string()
        };
        let mut out = format!("{}\n", self.title);
        out.push_str(&line(&self.headers));
        out.push('\n');
        let rule: usize = width.iter().sum::<usize>() + 3 * cols.saturating_sub(1);
        let _ = writeln!(out, "  {}", "-".repeat(rule));
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub tol: f64,
    pub passed: bool,
    pub results: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl RunReport {
    pub fn new(command: &str, inputs: &Inputs, seed: u64, tol: f64) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest: inputs.digest(),
            seed,
            tol,
            passed: true,
            results: Vec::new(),
            wall_time: None,
            tables: Vec::new(),
        }
    }

    pub fn info(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.results.push(Entry { name: name.into(), value: value.into(), bound: None, relation: None, status: Status::Info });
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.results.push(Entry::from_check(&check, ""));
    }

    pub fn checks(&mut self, report: &CheckReport) {
        for c in &report.checks {
            self.passed &= c.passed;
            self.results.push(Entry::from_check(c, &report.title));
        }
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.results.iter().filter(|e| e.status == Status::Fail)
    }

    /// Pretty at the top level, one compact line per result.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"command\": {},", j(&self.command));
        let _ = writeln!(out, "  \"inputs_digest\": {},", j(&self.inputs_digest));
        let _ = writeln!(out, "  \"seed\": {},", j(&self.seed));
        let _ = writeln!(out, "  \"tol\": {},", j(&self.tol));
        let _ = writeln!(out, "  \"passed\": {},", j(&self.passed));
        out.push_str("  \"results\": [");
        for (i, e) in self.results.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            out.push_str(&j(e));
        }
        out.push_str(if self.results.is_empty() { "]" } else { "\n  ]" });
        if let Some(t) = self.wall_time {
            let _ = write!(out, ",\n  \"wall_time\": {}", j(&t));
        }
        out.push_str("\n}\n");
        out
    }

    /// Tables followed by the result entries, one per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            out.push_str(&t.render());
            out.push('\n');
        }
        let mut t = Table::new(format!("opstar {}", self.command), &["status", "name", "value", "bound"]);
        for e in &self.results {
            let status = match e.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "",
            };
            let bound = match (e.relation, e.bound) {
                (Some(r), Some(b)) => format!("{r} {}", fmt_real(b)),
                _ => String::new(),
            };
            t.row(vec![status.into(), e.name.clone(), fmt_value(&e.value), bound]);
        }
        out.push_str(&t.render());
        let verdict = if self.passed { "all checks passed" } else { "some checks FAILED" };
        let _ = writeln!(out, "\n{verdict} (seed {}, tol {:e})", self.seed, self.tol);
        out
    }
}

pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || x.fract() == 0.0 && x.abs() < 1e9 {
        format!("{x}")
    } else if (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.9}").trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.3e}")
    }
}

/// Parts below `1e-12` of the modulus are shown as zero.
pub fn fmt_complex(z: C64) -> String {
    let dust = 1e-12 * z.norm();
    let z = C64::new(if z.re.abs() <= dust { 0.0 } else { z.re }, if z.im.abs() <= dust { 0.0 } else { z.im });
    if z.im == 0.0 {
        fmt_real(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_real(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt_real(z.re), fmt_real(z.im.abs()))
    }
}

const SHOWN: usize = 6;

fn fmt_list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    if items.len() > SHOWN {
        return format!("{} values", items.len());
    }
    format!("[{}]", items.iter().map(f).collect::<Vec<_>>().join(", "))
}

pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Real(x) => fmt_real(*x),
        Value::Int(n) => n.to_string(),
        Value::Complex(z) => fmt_complex(*z),
        Value::Reals(xs) => fmt_list(xs, |x| fmt_real(*x)),
        Value::Vector(zs) => fmt_list(zs, |z| fmt_complex(*z)),
        Value::Matrix(m) => format!("{}x{} matrix", m.rows(), m.cols()),
        Value::Text(s) => s.clone(),
    }
}

fn j<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

/// Everything a command read, hashed into the report's digest.
#[derive(Debug, Default)]
pub struct Inputs {
    parts: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn add(&mut self, label: &str, bytes: impl AsRef<[u8]>) {
        self.parts.push((label.to_string(), bytes.as_ref().to_vec()));
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (label, bytes) in &self.parts {
            h.update(label.as_bytes());
            h.update([0u8]);
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        hex::encode(h.finalize())
    }
}
