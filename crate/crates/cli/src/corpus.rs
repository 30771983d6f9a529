//! Batch verification of every input file in a directory.
//!
//! Each file runs the full pipeline for its kind on a worker thread; the
//! aggregate report is a pass/fail matrix of file against stage.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use fusion_classes::io::{self, Input};
use fusion_classes::report::{Check, Report};
use fusion_classes::{Error, Result};

use crate::commands::{self, hypergroup_of};
use crate::{display, exit_code, Outcome, RunConfig, EXIT_OK, EXIT_VERIFICATION};

/// Stage outcome inside one file's pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stage {
    Pass,
    Fail,
    Error(i32),
    Skipped,
}

impl Stage {
    fn label(&self) -> &'static str {
        match self {
            Stage::Pass => "PASS",
            Stage::Fail => "FAIL",
            Stage::Error(_) => "ERROR",
            Stage::Skipped => "-",
        }
    }
}

/// Everything learned about one file.
#[derive(Debug, Clone)]
pub struct FileResult {
    pub name: String,
    pub kind: String,
    pub stages: Vec<(&'static str, Stage)>,
    pub outcome: Outcome,
}

struct Pipeline<'a> {
    cfg: &'a RunConfig,
    report: Report,
    code: i32,
    stages: Vec<(&'static str, Stage)>,
}

impl Pipeline<'_> {
    fn stage(&mut self, name: &'static str, result: Result<Report>) -> bool {
        let stage = match result {
            Ok(rep) => {
                let ok = rep.passed();
                self.report.absorb(&format!("{name}: "), rep);
                if ok {
                    Stage::Pass
                } else {
                    self.code = self.code.max(EXIT_VERIFICATION);
                    Stage::Fail
                }
            }
            Err(e) => self.fail(name, &e),
        };
        let ok = stage == Stage::Pass;
        self.stages.push((name, stage));
        ok
    }

    fn fail(&mut self, name: &str, e: &Error) -> Stage {
        let code = exit_code(e);
        self.report.error(format!("{name}: {e}"));
        self.code = self.code.max(code);
        Stage::Error(code)
    }

    fn skip(&mut self, name: &'static str) {
        self.stages.push((name, Stage::Skipped));
    }
}

/// Runs every stage that applies to the file's kind. A stage is skipped
/// when an earlier one it depends on did not pass.
pub fn run_file(cfg: &RunConfig, path: &Path) -> FileResult {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut pipe = Pipeline {
        cfg,
        report: Report::new("corpus-file", &name, cfg.tolerances),
        code: EXIT_OK,
        stages: Vec::new(),
    };
    let input = match io::load(path, &cfg.tolerances) {
        Ok(input) => input,
        Err(e) => {
            let stage = pipe.fail("load", &e);
            pipe.stages.push(("load", stage));
            return finish(name, "unknown".into(), pipe);
        }
    };
    let kind = input.kind().to_string();
    let valid = pipe.stage("validate", commands::validate_of(cfg, &name, input.clone()));
    match input {
        Input::Fusion(ring) => {
            let commutative = ring.is_commutative();
            if valid && commutative {
                let pg = hypergroup_of(pipe.cfg, Input::Fusion(ring.clone()));
                pipe.stage("characters", pg.and_then(|pg| commands::characters_of(cfg, &name, &pg)));
            } else {
                pipe.skip("characters");
            }
            if valid && commutative && ring.is_based() {
                pipe.stage("burnside", commands::burnside_of(cfg, &name, &ring));
            } else {
                pipe.skip("burnside");
            }
        }
        input @ (Input::ProbGroup { .. } | Input::Group(_)) => {
            if valid {
                let pg = hypergroup_of(pipe.cfg, input);
                pipe.stage("characters", pg.and_then(|pg| commands::characters_of(cfg, &name, &pg)));
            } else {
                pipe.skip("characters");
            }
        }
        Input::Modular { data, ring: Some(ring) } => {
            pipe.stage("selfdual", commands::selfdual_of(cfg, &name, &ring, &data));
        }
        Input::Modular { ring: None, .. } => {}
        Input::CenterPair(cp) => {
            pipe.stage("center", commands::center_of(cfg, &name, &cp));
        }
    }
    finish(name, kind, pipe)
}

fn finish(name: String, kind: String, pipe: Pipeline<'_>) -> FileResult {
    FileResult {
        name,
        kind,
        stages: pipe.stages,
        outcome: Outcome {
            report: pipe.report,
            code: pipe.code,
        },
    }
}

/// The `.json` files directly inside `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: display(dir),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs every file on `workers` threads (0 lets the pool decide).
pub fn run_corpus(cfg: &RunConfig, dir: &Path, workers: usize) -> Result<(Vec<FileResult>, Outcome)> {
    let files = corpus_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Consistency(format!("worker pool: {e}")))?;
    let results: Vec<FileResult> = pool.install(|| {
        files
            .par_iter()
            .map(|p| {
                log::info!("checking {}", p.display());
                run_file(cfg, p)
            })
            .collect()
    });

    let mut report = Report::new("corpus", &display(dir), cfg.tolerances);
    let mut matrix = Map::new();
    let mut code = EXIT_OK;
    for r in &results {
        let mut row = Map::new();
        row.insert("kind".into(), json!(r.kind));
        for (stage, status) in &r.stages {
            row.insert((*stage).into(), json!(status.label()));
        }
        matrix.insert(r.name.clone(), Value::Object(row));
        let mut check = Check::new(r.name.clone(), r.outcome.code == EXIT_OK);
        if let Some(first) = r.outcome.report.checks.iter().find(|c| !c.passed) {
            check = check.with_detail(first.name.clone());
        } else if let Some(e) = r.outcome.report.errors.first() {
            check = check.with_detail(e.clone());
        }
        report.check(check);
        code = code.max(r.outcome.code);
    }
    report.section("matrix", Value::Object(matrix));
    Ok((results, Outcome { report, code }))
}
