//! Running a third-party QBF solver on an emitted file.
//!
//! The query goes to a temporary directory together with its `.map` sidecar
//! and the command is run with the query path appended. The answer is taken
//! from the exit code (10 / 20) or from `s cnf 1|0` / `r SAT|UNSAT` lines.
//! `V`/`v` lines carry certificate literals.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;
use wait_timeout::ChildExt;

use super::{SolveResult, SolveStats, Status};
use crate::qbf::{Format, Qbf, Quant};

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("solver command is empty or has unbalanced quotes: `{0}`")]
    BadCommand(String),
    #[error("could not start solver `{cmd}`: {source}")]
    Spawn { cmd: String, source: std::io::Error },
    #[error("solver did not finish within {0:?}")]
    Timeout(Duration),
    #[error("could not write the query file: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver output has no verdict (exit code {code:?}); last lines:\n{tail}")]
    NoVerdict { code: Option<i32>, tail: String },
    #[error("solver output is contradictory: {0}")]
    Contradiction(String),
    #[error("bad certificate token `{0}`")]
    BadCertificate(String),
    #[error("bad map sidecar: {0}")]
    Map(String),
}

/// Verdict and certificate literals found in solver output.
fn classify(code: Option<i32>, out: &str) -> Result<(Status, Vec<i64>), ExternalError> {
    let mut from_text: Option<Status> = None;
    let mut lits = Vec::new();
    for line in out.lines() {
        let t: Vec<&str> = line.split_whitespace().collect();
        let found = match t.as_slice() {
            ["s", "cnf", "1", ..] | ["r", "SAT"] => Some(Status::Sat),
            ["s", "cnf", "0", ..] | ["r", "UNSAT"] => Some(Status::Unsat),
            ["V" | "v", rest @ ..] => {
                for tok in rest {
                    let l: i64 = tok.parse().map_err(|_| ExternalError::BadCertificate(tok.to_string()))?;
                    if l != 0 {
                        lits.push(l);
                    }
                }
                None
            }
            _ => None,
        };
        if let Some(s) = found {
            if from_text.is_some_and(|p| p != s) {
                return Err(ExternalError::Contradiction("both SAT and UNSAT lines".into()));
            }
            from_text = Some(s);
        }
    }
    let from_code = match code {
        Some(10) => Some(Status::Sat),
        Some(20) => Some(Status::Unsat),
        _ => None,
    };
    let status = match (from_code, from_text) {
        (Some(a), Some(b)) if a != b => {
            return Err(ExternalError::Contradiction(format!("exit code says {a}, output says {b}")))
        }
        (Some(s), _) | (None, Some(s)) => s,
        (None, None) => {
            let lines: Vec<&str> = out.lines().collect();
            let tail = lines[lines.len().saturating_sub(5)..].join("\n");
            return Err(ExternalError::NoVerdict { code, tail });
        }
    };
    Ok((status, lits))
}

/// Runs `command <file>` on `q` written in `format`. `map` is the sidecar
/// text; when present, certificate literals are kept only for mapped atoms.
pub fn solve_external(
    q: &Qbf,
    map: Option<&str>,
    command: &str,
    format: Format,
    timeout: Duration,
) -> Result<SolveResult, ExternalError> {
    let argv =
        shlex::split(command).filter(|a| !a.is_empty()).ok_or_else(|| ExternalError::BadCommand(command.into()))?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join(format!("query.{}", format.extension()));
    fs::write(&path, format.emit(q))?;
    let mapped: Option<HashSet<u32>> = match map {
        Some(text) => {
            fs::write(dir.path().join("query.map"), text)?;
            let back = fs::read_to_string(dir.path().join("query.map"))?;
            let atoms = crate::encode::parse_map(&back).map_err(|e| ExternalError::Map(e.to_string()))?;
            Some(atoms.into_keys().collect())
        }
        None => None,
    };
    let out_path = dir.path().join("stdout");
    let start = Instant::now();
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .arg(&path)
        .stdin(Stdio::null())
        .stdout(fs::File::create(&out_path)?)
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| ExternalError::Spawn { cmd: argv[0].clone(), source })?;
    let code = match child.wait_timeout(timeout)? {
        Some(status) => status.code(),
        None => {
            let _ = child.kill();
            let _ = child.wait();
            return Err(ExternalError::Timeout(timeout));
        }
    };
    let out = fs::read_to_string(&out_path)?;
    let (status, lits) = classify(code, &out)?;

    let lead = q.leading_run();
    let wanted =
        matches!((&lead, status), (Some((Quant::Exists, _)), Status::Sat) | (Some((Quant::Forall, _)), Status::Unsat));
    let certificate = if wanted && !lits.is_empty() {
        let values: HashMap<u32, bool> = lits.iter().map(|&l| (l.unsigned_abs() as u32, l > 0)).collect();
        let (_, vars) = lead.unwrap();
        Some(
            vars.into_iter()
                .filter(|v| mapped.as_ref().is_none_or(|m| m.contains(v)))
                .map(|v| (v, values.get(&v).copied().unwrap_or(false)))
                .collect(),
        )
    } else {
        None
    };
    Ok(SolveResult {
        status,
        certificate,
        stats: SolveStats { time_ms: start.elapsed().as_secs_f64() * 1e3, ..Default::default() },
    })
}
