//! Structured run reports shared by the command-line verbs.
//!
//! Every command produces one `RunReport`: a list of checks, each with a
//! stable identifier, the text of the identity being verified, an anchor
//! tag (rule tag, series label, or functional name), and, for numeric
//! checks, the residual against its tolerance.  Reports render as a
//! human-readable table or as JSON with a stable schema.

use serde::Serialize;

use crate::catalog::CheckRecord;

#[derive(Debug, Clone, Serialize)]
pub struct ReportLine {
    pub id: String,
    pub description: String,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub checks: Vec<ReportLine>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            seed: None,
            notes: Vec::new(),
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, line: ReportLine) {
        self.passed &= line.pass;
        self.checks.push(line);
    }

    /// Exact identity outcome; failures carry their residual text.
    pub fn exact(&mut self, rec: &CheckRecord) {
        let description = if rec.detail.is_empty() {
            rec.name.clone()
        } else {
            format!("{}; {}", rec.name, rec.detail)
        };
        self.push(ReportLine {
            id: format!("{}/{}", rec.suite, rec.name),
            description,
            anchor: rec.suite.to_string(),
            residual: None,
            tolerance: None,
            pass: rec.passed,
        });
    }

    /// Numeric check: passes when the residual stays within tolerance.
    pub fn numeric(
        &mut self,
        id: impl Into<String>,
        anchor: impl Into<String>,
        description: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) {
        let id = id.into();
        self.push(ReportLine {
            id,
            description: description.into(),
            anchor: anchor.into(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            pass: residual.is_finite() && residual <= tolerance,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            match (c.residual, c.tolerance) {
                (Some(r), Some(t)) => out.push_str(&format!(
                    "{verdict}  [{}] {}  residual {r:.3e} (tol {t:.1e})\n",
                    c.anchor, c.description
                )),
                _ => out.push_str(&format!("{verdict}  [{}] {}\n", c.anchor, c.description)),
            }
        }
        let (ok, total) = (
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
        );
        out.push_str(&format!(
            "{}: {ok}/{total} checks passed\n",
            if self.passed { "ok" } else { "FAILED" }
        ));
        out
    }
}
