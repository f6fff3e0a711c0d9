//! Report assembly and rendering. Every number that is not a count or an
//! address coordinate is written as a rational string.

use std::fmt::Write as _;

use poisson_workbench::checks::Check;
use poisson_workbench::homology::Address;
use poisson_workbench::rational;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub window: i64,
    pub arity: usize,
    pub structure: StructureSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<ModularSection>,
    pub tables: Vec<Table>,
    pub checks: Vec<CheckEntry>,
    pub signs: Vec<SignEntry>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureSection {
    pub n: usize,
    pub variables: Vec<String>,
    pub parity: String,
    pub bivector: String,
    pub quadratic: bool,
    pub jacobi: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularSection {
    pub nu: String,
    pub verdict: String,
    pub eigenvalues: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    /// The bivector in eigen-coordinates when `nu` is semisimple but not diagonal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonalized: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub degree: i64,
    pub weight: i64,
    pub lambda: String,
    /// The matching address on the other side of a duality, when the values span both.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paired: Option<Slot>,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Slot {
    pub degree: i64,
    pub weight: i64,
    pub lambda: String,
}

impl From<&Address> for Slot {
    fn from(a: &Address) -> Self {
        Slot {
            degree: a.degree,
            weight: a.weight,
            lambda: rational::format(&a.lambda),
        }
    }
}

impl Row {
    pub fn at(a: &Address, values: Vec<usize>) -> Self {
        Row {
            degree: a.degree,
            weight: a.weight,
            lambda: rational::format(&a.lambda),
            paired: None,
            values,
        }
    }

    pub fn paired(a: &Address, b: &Address, values: Vec<usize>) -> Self {
        Row {
            paired: Some(b.into()),
            ..Row::at(a, values)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub checked: usize,
    /// Instances left out because an intermediate address leaves the window.
    pub out_of_window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckEntry {
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            status: Status::Skipped,
            checked: 0,
            out_of_window: 0,
            witness: None,
            reason: Some(reason.into()),
        }
    }

    pub fn failed(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            status: Status::Fail,
            checked: 0,
            out_of_window: 0,
            witness: Some(witness.into()),
            reason: None,
        }
    }
}

impl From<Check> for CheckEntry {
    fn from(c: Check) -> Self {
        CheckEntry {
            name: c.name,
            status: if c.passed { Status::Pass } else { Status::Fail },
            checked: c.checked,
            out_of_window: c.skipped,
            witness: c.witness,
            reason: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SignEntry {
    pub name: String,
    pub signs: Vec<SignCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignCell {
    pub key: String,
    pub sign: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub failed: usize,
    pub skipped: usize,
}

impl Verdict {
    pub fn of(checks: &[CheckEntry]) -> Self {
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        let skipped = checks.iter().filter(|c| c.status == Status::Skipped).count();
        Verdict {
            status: if failed > 0 { Status::Fail } else { Status::Pass },
            first_failure: checks.iter().find(|c| c.status == Status::Fail).map(|c| c.name.clone()),
            failed,
            skipped,
        }
    }
}

impl Report {
    /// 0 pass, 1 check failure, 3 skipped preconditions under `strict`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.verdict.failed > 0 {
            1
        } else if strict && self.verdict.skipped > 0 {
            3
        } else {
            0
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let s = &self.structure;
        let _ = writeln!(out, "command {} (window {}, arity {})", self.command, self.window, self.arity);
        let _ = writeln!(out, "structure on {} ({}): pi = {}", s.variables.join(", "), s.parity, s.bivector);
        let _ = writeln!(out, "  quadratic: {}, Jacobi: {}", s.quadratic, s.jacobi.label());
        if let Some(m) = &self.modular {
            let _ = writeln!(out, "modular vector: {}", m.nu);
            let _ = writeln!(out, "  {} with eigenvalues [{}]", m.verdict, m.eigenvalues.join(", "));
            if let Some(d) = &m.diagonalized {
                let _ = writeln!(out, "  in eigen-coordinates pi = {d}");
            }
        }
        for t in &self.tables {
            let _ = writeln!(out, "table {}: degree weight lambda | {}", t.name, t.columns.join(" "));
            for r in &t.rows {
                let values: Vec<String> = r.values.iter().map(usize::to_string).collect();
                let _ = write!(out, "  {} {} {}", r.degree, r.weight, r.lambda);
                if let Some(p) = &r.paired {
                    let _ = write!(out, " ~ {} {} {}", p.degree, p.weight, p.lambda);
                }
                let _ = writeln!(out, " | {}", values.join(" "));
            }
        }
        for e in &self.signs {
            let cells: Vec<String> = e.signs.iter().map(|c| format!("{}:{}", c.key, c.sign)).collect();
            let _ = writeln!(out, "signs {}: {}", e.name, cells.join(" "));
        }
        for c in &self.checks {
            let _ = write!(out, "{} {} ({} checked", c.status.label(), c.name, c.checked);
            if c.out_of_window > 0 {
                let _ = write!(out, ", {} out of window", c.out_of_window);
            }
            out.push(')');
            if let Some(r) = &c.reason {
                let _ = write!(out, ": {r}");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, ": {w}");
            }
            out.push('\n');
        }
        let v = &self.verdict;
        match &v.first_failure {
            Some(name) => {
                let _ = writeln!(out, "verdict: FAIL ({} failed, first: {name})", v.failed);
            }
            None => {
                let _ = writeln!(out, "verdict: pass ({} skipped)", v.skipped);
            }
        }
        out
    }
}
