//! Bundled regression cases.
//!
//! Each case is a directory holding SMV models, a `prop.hq` formula and an
//! `expect.toml` file:
//!
//! ```toml
//! models = ["k_exp.smv", "k_exp.smv"]
//! formula = "prop.hq"
//! k = 3
//! semantics = "pes"
//! mode = "bughunt"
//! expected = "violated"
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checker::{check, interpret, query_formula, Answer, CheckOptions, Mode};
use crate::hyperltl::{parse_formula, HyperFormula};
use crate::model::SymbolicKripke;
use crate::oracle::check_brute;
use crate::smv::parse_model;
use crate::solver::Status;
use crate::unroll::Semantics;

pub const EXPECT_FILE: &str = "expect.toml";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Invalid { path: PathBuf, msg: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectFile {
    models: Vec<String>,
    formula: String,
    k: usize,
    semantics: String,
    mode: String,
    expected: String,
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub dir: PathBuf,
    pub model_files: Vec<PathBuf>,
    pub formula_file: PathBuf,
    pub k: usize,
    pub semantics: Semantics,
    pub mode: Mode,
    pub expected: Answer,
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

impl CorpusCase {
    pub fn load(dir: &Path) -> Result<Self, CorpusError> {
        let path = dir.join(EXPECT_FILE);
        let invalid = |msg: String| CorpusError::Invalid { path: path.clone(), msg };
        let raw: ExpectFile = toml::from_str(&read(&path)?).map_err(|e| invalid(e.to_string()))?;
        Ok(CorpusCase {
            name: dir.file_name().map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into_owned()),
            dir: dir.to_path_buf(),
            model_files: raw.models.iter().map(|m| dir.join(m)).collect(),
            formula_file: dir.join(&raw.formula),
            k: raw.k,
            semantics: raw.semantics.parse().map_err(invalid)?,
            mode: raw.mode.parse().map_err(invalid)?,
            expected: raw.expected.parse().map_err(invalid)?,
        })
    }

    /// Parses the case's models and formula.
    pub fn inputs(&self) -> Result<(Vec<SymbolicKripke>, HyperFormula), CorpusError> {
        let mut models = Vec::new();
        for p in &self.model_files {
            let m = parse_model(&read(p)?, &p.to_string_lossy())
                .map_err(|e| CorpusError::Invalid { path: p.clone(), msg: e.to_string() })?;
            models.push(m);
        }
        let f = parse_formula(&read(&self.formula_file)?)
            .map_err(|e| CorpusError::Invalid { path: self.formula_file.clone(), msg: e.to_string() })?;
        Ok((models, f))
    }

    fn options(&self) -> CheckOptions {
        CheckOptions::new(self.k, self.semantics, self.mode)
    }

    /// The answer the explicit-trace oracle gives for this case.
    pub fn oracle_answer(&self) -> Result<Answer, CorpusError> {
        let (models, f) = self.inputs()?;
        let refs: Vec<&SymbolicKripke> = models.iter().collect();
        let q = query_formula(&f, self.mode);
        let sat = check_brute(&refs, &q, self.k, self.semantics)
            .map_err(|e| CorpusError::Invalid { path: self.dir.clone(), msg: e.to_string() })?;
        Ok(interpret(self.mode, self.semantics, Status::from_bool(sat)))
    }
}

/// All cases under `root`, sorted by name.
pub fn load_corpus(root: &Path) -> Result<Vec<CorpusCase>, CorpusError> {
    let entries = fs::read_dir(root).map_err(|source| CorpusError::Io { path: root.to_path_buf(), source })?;
    let mut dirs = Vec::new();
    for e in entries {
        let e = e.map_err(|source| CorpusError::Io { path: root.to_path_buf(), source })?;
        if e.path().join(EXPECT_FILE).is_file() {
            dirs.push(e.path());
        }
    }
    dirs.sort();
    dirs.iter().map(|d| CorpusCase::load(d)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub expected: Answer,
    /// `Err` holds the message of a case that failed to run.
    pub actual: Result<Answer, String>,
    pub elapsed: Duration,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.actual.as_ref().is_ok_and(|a| *a == self.expected)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub results: Vec<CaseResult>,
    pub elapsed: Duration,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CaseResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if r.passed() { "ok  " } else { "FAIL" };
            let actual = match &r.actual {
                Ok(a) => a.to_string(),
                Err(e) => format!("error: {e}"),
            };
            writeln!(
                f,
                "{status} {:<22} expected {:<12} got {:<12} {:>8.1} ms",
                r.name,
                r.expected.to_string(),
                actual,
                r.elapsed.as_secs_f64() * 1e3
            )?;
        }
        write!(
            f,
            "{} cases, {} failed, {:.2} s",
            self.results.len(),
            self.failures().count(),
            self.elapsed.as_secs_f64()
        )
    }
}

fn run_case(case: &CorpusCase) -> Result<Answer, String> {
    let (models, f) = case.inputs().map_err(|e| e.to_string())?;
    let refs: Vec<&SymbolicKripke> = models.iter().collect();
    check(&refs, &f, &case.options()).map(|v| v.answer).map_err(|e| e.to_string())
}

/// Runs the cases whose names appear in `select`, or every case when
/// `select` is `None`.
pub fn run_corpus(cases: &[CorpusCase], select: Option<&[&str]>) -> Report {
    let start = Instant::now();
    let results = cases
        .iter()
        .filter(|c| select.is_none_or(|names| names.contains(&c.name.as_str())))
        .map(|c| {
            let t = Instant::now();
            let actual = run_case(c);
            CaseResult { name: c.name.clone(), expected: c.expected, actual, elapsed: t.elapsed() }
        })
        .collect();
    Report { results, elapsed: start.elapsed() }
}

/// The bundled corpus directory of this source tree.
pub fn bundled_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}
