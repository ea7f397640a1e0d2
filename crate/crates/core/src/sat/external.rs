//! Runs a third-party DIMACS solver as a subprocess.

use std::path::Path;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};

use super::cnf::{CnfInstance, Model, SatResult};
use super::dimacs::export_dimacs;
use crate::error::{Error, Result};

static COUNTER: AtomicU64 = AtomicU64::new(0);

pub(crate) fn solve_external(path: &Path, cnf: &CnfInstance) -> Result<SatResult> {
    let fail = |message: String| Error::ExternalSolver {
        path: path.to_owned(),
        message,
    };
    let file = std::env::temp_dir().join(format!(
        "iolog-{}-{}.cnf",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::write(&file, export_dimacs(cnf))?;
    let output = Command::new(path).arg(&file).output();
    let _ = std::fs::remove_file(&file);
    let output = output.map_err(|e| fail(e.to_string()))?;
    let stdout = String::from_utf8_lossy(&output.stdout);

    let mut status = None;
    let mut values: Vec<i64> = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_owned());
        } else if let Some(v) = line.strip_prefix("v ") {
            for word in v.split_whitespace() {
                values.push(
                    word.parse()
                        .map_err(|_| fail(format!("bad model literal {word:?}")))?,
                );
            }
        }
    }
    match status.as_deref() {
        Some("UNSATISFIABLE") => Ok(SatResult::Unsat),
        Some("SATISFIABLE") => {
            let n = cnf.num_vars() as usize;
            let mut assignment = vec![false; n];
            for lit in values.into_iter().filter(|&l| l != 0) {
                let v = lit.unsigned_abs() as usize;
                if v > n {
                    return Err(fail(format!("model literal {lit} out of range")));
                }
                assignment[v - 1] = lit > 0;
            }
            if !cnf.satisfied_by(&assignment) {
                return Err(fail("reported model does not satisfy the instance".into()));
            }
            Ok(SatResult::Sat(Model::new(cnf, assignment)))
        }
        other => Err(fail(format!(
            "no solution line in output (status {:?}, exit {})",
            other,
            output.status
        ))),
    }
}
