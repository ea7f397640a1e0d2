//! One entry point over the three decision procedures, with certificates.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::calculus::{self, OriginalProof, ProofOutcome, SequentDerivation};
use crate::error::{Error, Result};
use crate::oracle::{self, Refutation};
use crate::reduction;
use crate::sat::{LkSequent, SatEngine};
use crate::semantics::{countermodel_from_refutation, IOModel};
use crate::theory::{IOSequent, NativeDerivation};

/// Which procedure decides a query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One (or, for original logics, two) solver calls on the polynomial
    /// encoding.
    #[default]
    Sat,
    /// Enumeration of all premise splits.
    Oracle,
    /// Proof search in the sequent calculus.
    Proof,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Sat, Mode::Oracle, Mode::Proof];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sat => "sat",
            Mode::Oracle => "oracle",
            Mode::Proof => "proof",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected sat, oracle or proof)"))
    }
}

/// Evidence for a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Certificate {
    /// A sequent proof of the causal variant, its native expansion in the
    /// query's own logic, and for original logics the classical sequent on
    /// the outputs.
    Proof {
        derivation: SequentDerivation,
        native: NativeDerivation,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<LkSequent>,
    },
    Countermodel(IOModel),
    /// Positive verdicts of the SAT and oracle modes carry no certificate.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub derivable: bool,
    pub certificate: Certificate,
}

impl Decision {
    pub fn countermodel(&self) -> Option<&IOModel> {
        match &self.certificate {
            Certificate::Countermodel(m) => Some(m),
            _ => None,
        }
    }
}

fn refuted(sat: &SatEngine, s: &IOSequent, r: &Refutation) -> Result<Decision> {
    Ok(Decision {
        derivable: false,
        certificate: Certificate::Countermodel(countermodel_from_refutation(sat, s, r)?),
    })
}

/// Decides `s` in its own logic with the chosen procedure.
pub fn decide(sat: &SatEngine, s: &IOSequent, mode: Mode) -> Result<Decision> {
    match mode {
        Mode::Sat => Ok(match reduction::decide_sat(sat, s)? {
            None => Decision {
                derivable: true,
                certificate: Certificate::None,
            },
            Some(m) => Decision {
                derivable: false,
                certificate: Certificate::Countermodel(m),
            },
        }),
        Mode::Oracle => match oracle::decide(sat, s)? {
            None => Ok(Decision {
                derivable: true,
                certificate: Certificate::None,
            }),
            Some(r) => refuted(sat, s, &r),
        },
        Mode::Proof if s.logic().causal => match calculus::search(sat, s)? {
            ProofOutcome::Proved(derivation) => {
                let native = calculus::to_native(&derivation)?;
                Ok(Decision {
                    derivable: true,
                    certificate: Certificate::Proof {
                        derivation,
                        native,
                        witness: None,
                    },
                })
            }
            ProofOutcome::Refuted(p) => refuted(sat, s, &Refutation::Partition(p)),
        },
        Mode::Proof => match calculus::decide_original_via_proof(sat, s)? {
            OriginalProof::Proved { derivation, witness } => {
                let native = calculus::to_native_original(&derivation, s)?;
                Ok(Decision {
                    derivable: true,
                    certificate: Certificate::Proof {
                        derivation,
                        native,
                        witness: Some(witness),
                    },
                })
            }
            OriginalProof::Refuted(r) => refuted(sat, s, &r),
        },
    }
}

/// Whether `mode` can take `s` without hitting its size cap.
pub fn within_cap(s: &IOSequent, mode: Mode) -> bool {
    let n = s.premises().len();
    match mode {
        Mode::Sat => true,
        Mode::Oracle => n <= oracle::ORACLE_CAP,
        Mode::Proof => !s.logic().family.has_or() || n <= calculus::PROOF_CAP,
    }
}

/// True for errors raised by a size cap, which the command line reports with
/// their own exit status.
pub fn is_cap_error(e: &Error) -> bool {
    matches!(e, Error::CapExceeded { .. })
}
