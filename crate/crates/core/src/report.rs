//! Axiom-validation results and the report document emitted by every
//! pipeline, in text or structured (JSON) form.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::scalar::ApproxComplex;
use crate::Tolerances;

/// Outcome of one axiom or identity check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest observed deviation, when the check is quantitative.
    pub max_deviation: Option<f64>,
    /// First violating index tuple.
    pub witness: Option<Vec<usize>>,
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            max_deviation: None,
            witness: None,
            detail: None,
        }
    }

    /// A quantitative check that passes when `deviation <= tol`.
    pub fn within(name: impl Into<String>, deviation: f64, tol: f64) -> Self {
        let mut c = Check::new(name, deviation <= tol);
        c.max_deviation = Some(deviation);
        c
    }

    pub fn with_witness(mut self, w: Option<Vec<usize>>) -> Self {
        self.witness = w;
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// Tracks the maximum deviation of a family of scalar identities together
/// with the first index tuple that exceeded the tolerance.
#[derive(Debug, Clone)]
pub(crate) struct Deviation {
    tol: f64,
    pub max: f64,
    pub witness: Option<Vec<usize>>,
}

impl Deviation {
    pub fn new(tol: f64) -> Self {
        Deviation {
            tol,
            max: 0.0,
            witness: None,
        }
    }

    pub fn record(&mut self, dev: f64, at: &[usize]) {
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        if dev > self.max {
            self.max = dev;
        }
        if dev > self.tol && self.witness.is_none() {
            self.witness = Some(at.to_vec());
        }
    }

    pub fn into_check(self, name: &str) -> Check {
        Check {
            name: name.to_string(),
            passed: self.witness.is_none(),
            max_deviation: Some(self.max),
            witness: self.witness,
            detail: None,
        }
    }
}

/// Per-axiom validation result.
#[derive(Debug, Clone, Serialize, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().filter_map(|c| c.max_deviation).fold(0.0, f64::max)
    }
}

/// Significant digits kept in reports. Rounding noise of a few ulps stays
/// well below the last printed digit, so reports do not depend on the seed.
pub const DIGITS: i32 = 12;

/// Moduli below this print as zero: they lie an order of magnitude under the
/// default comparison tolerance and are rounding noise in every pipeline.
pub const ZERO_FLOOR: f64 = 1e-10;

/// Formats a real number to [`DIGITS`] significant digits, printing noise
/// below [`ZERO_FLOOR`] as zero.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < ZERO_FLOOR {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (DIGITS - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit, e.g. 9.99.. -> 10.0..
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded.abs().log10().floor() as i32 > magnitude && decimals > 0 {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}

pub fn fmt_complex(z: ApproxComplex) -> String {
    if z.im.abs() < ZERO_FLOOR {
        return fmt_real(z.re);
    }
    let re = fmt_real(z.re);
    let im = fmt_real(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

/// A titled report made of sections (named tables of formatted values) and
/// checks, with a pass/fail summary.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub tolerances: Tolerances,
    sections: Vec<(String, Value)>,
    pub checks: Vec<Check>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: &str, tolerances: Tolerances) -> Self {
        Report {
            command: command.to_string(),
            input: input.to_string(),
            tolerances,
            sections: Vec::new(),
            checks: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn section(&mut self, name: &str, value: Value) {
        self.sections.push((name.to_string(), value));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn checks_from(&mut self, prefix: &str, v: &ValidationReport) {
        for c in &v.checks {
            let mut c = c.clone();
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    /// Appends the sections, checks and errors of `other` under `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for (name, value) in other.sections {
            self.sections.push((format!("{prefix}{name}"), value));
        }
        self.checks_from(prefix, &ValidationReport { checks: other.checks });
        self.errors
            .extend(other.errors.into_iter().map(|e| format!("{prefix}{e}")));
    }

    pub fn error(&mut self, message: impl Into<String>) {
        self.errors.push(message.into());
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let sections: serde_json::Map<String, Value> =
            self.sections.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "max_deviation": c.max_deviation.map(fmt_deviation),
                    "witness": c.witness,
                    "detail": c.detail,
                })
            })
            .collect();
        json!({
            "command": self.command,
            "input": self.input,
            "tolerances": {
                "eq": format!("{:e}", self.tolerances.eq),
                "int": format!("{:e}", self.tolerances.int),
            },
            "sections": sections,
            "checks": checks,
            "errors": self.errors,
            "summary": {
                "passed": self.passed(),
                "checks_total": self.checks.len(),
                "checks_failed": self.checks.iter().filter(|c| !c.passed).count(),
            }
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} :: {}", self.command, self.input);
        let _ = writeln!(
            out,
            "tolerances: eq={:e} int={:e}",
            self.tolerances.eq, self.tolerances.int
        );
        for (name, value) in &self.sections {
            let _ = writeln!(out, "\n[{name}]");
            write_value(&mut out, value, 1);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\n[checks]");
            for c in &self.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = write!(out, "  {status} {}", c.name);
                if let Some(d) = c.max_deviation {
                    let _ = write!(out, "  max_dev={}", fmt_deviation(d));
                }
                if let Some(w) = &c.witness {
                    let _ = write!(out, "  witness={w:?}");
                }
                if let Some(d) = &c.detail {
                    let _ = write!(out, "  ({d})");
                }
                let _ = writeln!(out);
            }
        }
        for e in &self.errors {
            let _ = writeln!(out, "  ERROR {e}");
        }
        let _ = writeln!(
            out,
            "\nsummary: {} ({} checks, {} failed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.checks.iter().filter(|c| !c.passed).count()
        );
        out
    }
}

/// Deviations are noise-level numbers, reported as a decade bound so that
/// the output does not depend on rounding noise between runs.
/// Deviations below [`ZERO_FLOOR`] are rounding noise and share one bucket.
fn fmt_deviation(d: f64) -> String {
    if d < ZERO_FLOOR {
        "<1e-10".to_string()
    } else if d < 1.0 {
        let k = (-d.log10()).floor() as i32;
        format!("<1e-{k}")
    } else {
        format!("{d:.3e}")
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_value(out, v, indent + 1);
                    }
                    Value::Array(rows) if rows.iter().all(|r| r.is_array()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for r in rows {
                            let _ = writeln!(out, "{pad}  {}", inline(r));
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", inline(v));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other));
        }
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

/// Formats a vector of reals.
pub fn real_row(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::String(fmt_real(x))).collect())
}

pub fn complex_row(v: &[ApproxComplex]) -> Value {
    Value::Array(v.iter().map(|&z| Value::String(fmt_complex(z))).collect())
}

pub fn complex_matrix(rows: &[Vec<ApproxComplex>]) -> Value {
    Value::Array(rows.iter().map(|r| complex_row(r)).collect())
}

pub fn real_matrix(rows: &[Vec<f64>]) -> Value {
    Value::Array(rows.iter().map(|r| real_row(r)).collect())
}
