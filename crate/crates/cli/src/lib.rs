//! Front end for the `fusion-classes` binary.
//!
//! Every subcommand is a function from a [`RunConfig`] and its paths to a
//! [`Report`]; errors are folded into the report so that the text and
//! structured outputs always have the same shape. Exit statuses follow
//! [`ErrorClass`].

pub mod commands;
pub mod corpus;

use std::path::{Path, PathBuf};

use fusion_classes::report::Report;
use fusion_classes::scalar::{eval_str, Lattice};
use fusion_classes::{Error, ErrorClass, Result, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub seed: u64,
    /// Comma-separated scalar expressions spanning the lattice used for
    /// integrality verdicts.
    pub lattice: Option<String>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: Tolerances::default(),
            seed: 0,
            lattice: None,
            format: Format::Text,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn lattice(&self) -> Result<Option<Lattice>> {
        let Some(text) = &self.lattice else {
            return Ok(None);
        };
        let basis = split_top_level(text)
            .iter()
            .map(|part| eval_str(part))
            .collect::<Result<Vec<_>>>()?;
        Lattice::new(basis, self.tolerances.int).map(Some)
    }
}

/// Splits on commas that are not inside parentheses, so that
/// `1,zeta(5,1)` has two parts.
fn split_top_level(text: &str) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(String::new());
                continue;
            }
            _ => {}
        }
        parts.last_mut().expect("non-empty").push(ch);
    }
    parts.into_iter().map(|p| p.trim().to_string()).collect()
}

/// A finished report and its exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

impl Outcome {
    pub fn from_result(command: &str, input: &str, cfg: &RunConfig, result: Result<Report>) -> Self {
        match result {
            Ok(report) => {
                let code = if report.passed() { EXIT_OK } else { EXIT_VERIFICATION };
                Outcome { report, code }
            }
            Err(e) => {
                let mut report = Report::new(command, input, cfg.tolerances);
                report.error(e.to_string());
                Outcome {
                    report,
                    code: exit_code(&e),
                }
            }
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.report.to_text(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.report.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Input => EXIT_INPUT,
        ErrorClass::Verification => EXIT_VERIFICATION,
        ErrorClass::Internal => EXIT_INTERNAL,
    }
}

pub fn display(path: &Path) -> String {
    path.display().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_parts_respect_parentheses() {
        assert_eq!(split_top_level("1, (1+sqrt(5))/2"), vec!["1", "(1+sqrt(5))/2"]);
        assert_eq!(split_top_level("1,zeta(5,1)"), vec!["1", "zeta(5,1)"]);
    }

    #[test]
    fn golden_lattice_from_flag() {
        let cfg = RunConfig {
            lattice: Some("1,(1+sqrt(5))/2".into()),
            ..RunConfig::default()
        };
        let l = cfg.lattice().unwrap().unwrap();
        assert_eq!(l.basis().len(), 2);
    }
}
