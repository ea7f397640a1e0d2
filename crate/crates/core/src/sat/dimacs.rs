use std::collections::BTreeMap;
use std::fmt::Write;

use super::cnf::CnfInstance;
use crate::error::{Error, Result};
use crate::formula::Atom;

/// Renders `cnf` as DIMACS. Atom names go into `c map <name> <index>` comment
/// lines ahead of the header, so plain DIMACS readers skip them.
pub fn export_dimacs(cnf: &CnfInstance) -> String {
    let mut out = String::new();
    for (atom, var) in cnf.atom_map() {
        let _ = writeln!(out, "c map {atom} {var}");
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len());
    for clause in cnf.clauses() {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

fn dimacs_err(line: usize, message: impl Into<String>) -> Error {
    Error::Dimacs {
        line,
        message: message.into(),
    }
}

/// Parses DIMACS CNF. Clauses may span lines; a `%` line ends the input, as
/// in the SATLIB benchmark files.
pub fn import_dimacs(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(u32, usize)> = None;
    let mut atom_map = BTreeMap::new();
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(comment) = line.strip_prefix('c') {
            if !(comment.is_empty() || comment.starts_with(char::is_whitespace)) {
                return Err(dimacs_err(line_no, format!("unexpected token {line:?}")));
            }
            let words: Vec<&str> = comment.split_whitespace().collect();
            if let ["map", name, index] = words[..] {
                let var: u32 = index
                    .parse()
                    .map_err(|_| dimacs_err(line_no, format!("bad map index {index:?}")))?;
                let atom = Atom::from_raw(name)?;
                if atom_map.insert(atom, var).is_some() {
                    return Err(dimacs_err(line_no, format!("atom {name} mapped twice")));
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(dimacs_err(line_no, "duplicate header"));
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match words[..] {
                ["cnf", v, c] => v.parse::<u32>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            let Some(h) = parsed else {
                return Err(dimacs_err(line_no, format!("malformed header {line:?}")));
            };
            header = Some(h);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(dimacs_err(line_no, "clause before \"p cnf\" header"));
        };
        for word in line.split_whitespace() {
            let lit: i64 = word
                .parse()
                .map_err(|_| dimacs_err(line_no, format!("bad literal {word:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() > u64::from(num_vars) {
                return Err(Error::LiteralOutOfRange {
                    literal: lit,
                    num_vars,
                });
            }
            current.push(lit as i32);
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(dimacs_err(0, "missing \"p cnf\" header"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(dimacs_err(
            0,
            format!(
                "header declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    CnfInstance::new(num_vars, clauses, atom_map)
}
