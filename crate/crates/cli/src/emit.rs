use dfoperad::report::{Bounds, Report};
use serde::Serialize;
use serde_json::Value;

use crate::Format;

pub const REPORT_SCHEMA: &str = "dfoperad-report/1";

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<&'a str>,
    bounds: &'a Bounds,
    verdict: &'static str,
    reports: &'a [Report],
    #[serde(skip_serializing_if = "Option::is_none")]
    artifact: Option<&'a Value>,
}

pub struct Rendered<'a> {
    pub command: &'a str,
    pub input: Option<&'a str>,
    pub bounds: &'a Bounds,
    pub reports: &'a [Report],
    pub artifact: Option<&'a Value>,
    /// Where the artifact went instead of the report.
    pub written_to: Option<&'a str>,
}

impl Rendered<'_> {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Text => self.text(),
        }
    }

    fn verdict(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    fn json(&self) -> String {
        let env = Envelope {
            schema_version: REPORT_SCHEMA,
            command: self.command,
            input: self.input,
            bounds: self.bounds,
            verdict: self.verdict(),
            reports: self.reports,
            artifact: if self.written_to.is_some() { None } else { self.artifact },
        };
        let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
        s.push('\n');
        s
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("dfoperad {}\n", self.command));
        if let Some(input) = self.input {
            out.push_str(&format!("input: {input}\n"));
        }
        out.push_str(&format!(
            "bounds: site_bound={} arity_bound={} (verdicts hold up to these bounds only)\n",
            self.bounds.site_bound, self.bounds.arity_bound
        ));
        for r in self.reports {
            out.push_str(&format!("== {} ==\n", r.subject));
            for c in &r.checks {
                if c.passed() {
                    out.push_str(&format!("PASS {} ({} instances)\n", c.check, c.instances));
                } else {
                    out.push_str(&format!("FAIL {} ({} of {} instances)\n", c.check, c.failures, c.instances));
                    for w in &c.witnesses {
                        out.push_str(&format!("  witness: {w}\n"));
                    }
                }
            }
            for n in &r.notes {
                out.push_str(&format!("note: {n}\n"));
            }
        }
        if let Some(path) = self.written_to {
            out.push_str(&format!("artifact written to {path}\n"));
        } else if let Some(a) = self.artifact {
            out.push_str("artifact:\n");
            out.push_str(&serde_json::to_string_pretty(a).expect("artifact serializes"));
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict()));
        out
    }
}
