//! Cross-checks the three decision procedures against each other and checks
//! every certificate they emit.

use std::fmt;

use rayon::prelude::*;

use crate::calculus::check_sequent;
use crate::engine::{self, Certificate, Decision, Mode};
use crate::error::Result;
use crate::oracle::{self, Mutation};
use crate::sat::{LkSequent, SatEngine};
use crate::semantics::{check_countermodel, countermodel_from_refutation};
use crate::theory::{check_native, IOSequent};

/// Verdicts of the procedures that ran; `None` when a procedure was skipped
/// because of its size cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdicts {
    pub oracle: Option<bool>,
    pub sat: Option<bool>,
    pub proof: Option<bool>,
}

impl Verdicts {
    pub fn agree(&self) -> bool {
        let mut seen = [self.oracle, self.sat, self.proof].into_iter().flatten();
        match seen.next() {
            Some(first) => seen.all(|v| v == first),
            None => true,
        }
    }
}

impl fmt::Display for Verdicts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<bool>| match v {
            Some(true) => "derivable",
            Some(false) => "not derivable",
            None => "skipped",
        };
        write!(
            f,
            "oracle: {}, sat: {}, proof: {}",
            show(self.oracle),
            show(self.sat),
            show(self.proof)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Disagreement(Verdicts),
    Certificate { mode: Mode, reason: String },
    Engine { mode: Mode, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub sequent: IOSequent,
    pub problem: Problem,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.sequent)?;
        match &self.problem {
            Problem::Disagreement(v) => write!(f, "verdicts differ ({v})"),
            Problem::Certificate { mode, reason } => write!(f, "bad {mode} certificate: {reason}"),
            Problem::Engine { mode, message } => write!(f, "{mode} failed: {message}"),
        }
    }
}

/// Checks a decision's certificate against `s`.
pub fn check_certificate(sat: &SatEngine, s: &IOSequent, d: &Decision) -> Result<Option<String>> {
    match &d.certificate {
        Certificate::None => Ok(None),
        Certificate::Countermodel(m) => {
            if d.derivable {
                return Ok(Some("a countermodel backs a positive verdict".into()));
            }
            Ok(check_countermodel(m, s).err().map(|e| e.to_string()))
        }
        Certificate::Proof {
            derivation,
            native,
            witness,
        } => {
            if !d.derivable {
                return Ok(Some("a proof backs a negative verdict".into()));
            }
            if let Err(e) = check_sequent(derivation, &s.causal(), sat) {
                return Ok(Some(format!("sequent proof: {e}")));
            }
            if let Err(e) = check_native(native, s, sat) {
                return Ok(Some(format!("native derivation: {e}")));
            }
            if !s.logic().causal {
                let expected = LkSequent::new(s.outputs().cloned().collect(), vec![s.goal().output.clone()]);
                match witness {
                    Some(w) if *w == expected && sat.lk_derivable(w)? => {}
                    _ => return Ok(Some("missing or invalid classical witness on the outputs".into())),
                }
            }
            Ok(None)
        }
    }
}

/// Runs the oracle with an optional mutation and turns its refutation into a
/// countermodel, as [`engine::decide`] does for the unmutated oracle.
fn oracle_decision(sat: &SatEngine, s: &IOSequent, mutation: Option<Mutation>) -> Result<Decision> {
    let Some(mutation) = mutation else {
        return engine::decide(sat, s, Mode::Oracle);
    };
    Ok(match oracle::decide_mutated(sat, s, Some(mutation))? {
        None => Decision {
            derivable: true,
            certificate: Certificate::None,
        },
        Some(r) => Decision {
            derivable: false,
            certificate: Certificate::Countermodel(countermodel_from_refutation(sat, s, &r)?),
        },
    })
}

/// Decides `s` with every procedure within its cap, checks the certificates
/// and compares the verdicts. `mutation` breaks the oracle on purpose.
pub fn check_instance(sat: &SatEngine, s: &IOSequent, mutation: Option<Mutation>) -> (Verdicts, Vec<Failure>) {
    let mut failures = Vec::new();
    let mut verdicts = Verdicts {
        oracle: None,
        sat: None,
        proof: None,
    };
    for mode in Mode::ALL {
        if !engine::within_cap(s, mode) {
            continue;
        }
        let decided = match mode {
            Mode::Oracle => oracle_decision(sat, s, mutation),
            _ => engine::decide(sat, s, mode),
        };
        let fail = |problem| Failure {
            sequent: s.clone(),
            problem,
        };
        let decision = match decided {
            Ok(d) => d,
            Err(e) => {
                failures.push(fail(Problem::Engine {
                    mode,
                    message: e.to_string(),
                }));
                continue;
            }
        };
        match check_certificate(sat, s, &decision) {
            Ok(None) => {}
            Ok(Some(reason)) => failures.push(fail(Problem::Certificate { mode, reason })),
            Err(e) => failures.push(fail(Problem::Engine {
                mode,
                message: e.to_string(),
            })),
        }
        let slot = match mode {
            Mode::Oracle => &mut verdicts.oracle,
            Mode::Sat => &mut verdicts.sat,
            Mode::Proof => &mut verdicts.proof,
        };
        *slot = Some(decision.derivable);
    }
    if !verdicts.agree() {
        failures.push(Failure {
            sequent: s.clone(),
            problem: Problem::Disagreement(verdicts),
        });
    }
    (verdicts, failures)
}

/// Outcome of a cross-check run.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checked: usize,
    pub derivable: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The failure on the smallest instance: fewest premises, then fewest
    /// formula nodes.
    pub fn minimal_failure(&self) -> Option<&Failure> {
        self.failures.iter().min_by_key(|f| {
            let s = &f.sequent;
            let size: usize = s
                .premises()
                .iter()
                .chain([s.goal()])
                .map(|p| p.input.size() + p.output.size())
                .sum();
            (s.premises().len(), size)
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instances, {} derivable, {} failures",
            self.checked,
            self.derivable,
            self.failures.len()
        )?;
        if let Some(min) = self.minimal_failure() {
            write!(f, "\nsmallest failing instance: {min}")?;
        }
        Ok(())
    }
}

/// Cross-checks all `instances` in parallel.
pub fn crosscheck(sat: &SatEngine, instances: &[IOSequent], mutation: Option<Mutation>) -> Report {
    let (derivable, failures) = instances
        .par_iter()
        .map(|s| {
            let (verdicts, failures) = check_instance(sat, s, mutation);
            (usize::from(verdicts.sat == Some(true)), failures)
        })
        .reduce(
            || (0, Vec::new()),
            |(n, mut a), (m, b)| {
                a.extend(b);
                (n + m, a)
            },
        );
    Report {
        checked: instances.len(),
        derivable,
        failures,
    }
}
