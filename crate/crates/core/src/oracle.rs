//! Reference decision procedure: enumerate every split of the premises into
//! input-side and output-side pairs and check the classical conditions each
//! split must meet. Exponential in the number of premises, but simple enough
//! to trust.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::sat::SatEngine;
use crate::theory::{Family, IOSequent};

/// Largest premise count the oracle accepts.
pub const ORACLE_CAP: usize = 24;

/// A split of premise indices (0-based, insertion order) into `I` and `J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    #[serde(rename = "I")]
    pub input_side: Vec<usize>,
    #[serde(rename = "J")]
    pub output_side: Vec<usize>,
}

impl Partition {
    /// Bit `k` of `mask` set puts premise `k` into `J`.
    pub fn from_mask(n: usize, mask: u64) -> Partition {
        let (output_side, input_side) = (0..n).partition(|&k| mask >> k & 1 == 1);
        Partition {
            input_side,
            output_side,
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I={:?} J={:?}", self.input_side, self.output_side)
    }
}

/// Why a query is not derivable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Refutation {
    /// A split violating every condition of the causal characterization.
    Partition(Partition),
    /// Original logics only: the premise outputs do not entail the goal
    /// output.
    Outputs,
}

/// A deliberately broken variant of the per-split test, used to make sure the
/// cross-checks notice faults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Skips the condition on the input side of the split.
    DropInputCondition,
    /// Skips the condition on the output side of the split.
    DropOutputCondition,
    /// Treats every split as passing the inconsistent-input condition.
    AssumeInconsistentInput,
}

fn entails_or(sat: &SatEngine, hyps: &[&Formula], conclusion: &Formula) -> Result<bool> {
    sat.entails(hyps.iter().copied(), conclusion)
}

/// Whether split `part` of `s` meets one of the conditions of its family.
fn split_passes(
    sat: &SatEngine,
    s: &IOSequent,
    part: &Partition,
    mutation: Option<Mutation>,
) -> Result<bool> {
    let g = s.premises();
    let goal = s.goal();
    let outputs_j: Vec<&Formula> = part.output_side.iter().map(|&j| &g[j].output).collect();
    let family = s.logic().family;

    if mutation == Some(Mutation::AssumeInconsistentInput) {
        return Ok(true);
    }
    if mutation != Some(Mutation::DropOutputCondition) && entails_or(sat, &outputs_j, &goal.output)? {
        return Ok(true);
    }
    if mutation == Some(Mutation::DropInputCondition) {
        return Ok(false);
    }

    // The left-hand side of the input-side checks: B alone for families 1
    // and 2, B together with the outputs in J for the reusable families.
    let mut lhs: Vec<&Formula> = vec![&goal.input];
    if family.reusable() {
        lhs.extend(outputs_j.iter().copied());
    }
    match family {
        Family::Out2 | Family::Out4 => {
            let inputs = Formula::disjunction(part.input_side.iter().map(|&i| g[i].input.clone()));
            entails_or(sat, &lhs, &inputs)
        }
        Family::Out1 | Family::Out3 => {
            for &i in &part.input_side {
                if entails_or(sat, &lhs, &g[i].input)? {
                    return Ok(true);
                }
            }
            entails_or(sat, &lhs, &Formula::Bot)
        }
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > ORACLE_CAP {
        return Err(Error::CapExceeded {
            procedure: "oracle",
            cap: ORACLE_CAP,
            actual: n,
        });
    }
    Ok(())
}

/// Decides the causal variant of `s`'s family, whatever the flag on `s` says.
/// Returns the first failing split in binary counting order.
pub fn decide_causal(sat: &SatEngine, s: &IOSequent) -> Result<Option<Partition>> {
    decide_causal_mutated(sat, s, None)
}

pub fn decide_causal_mutated(
    sat: &SatEngine,
    s: &IOSequent,
    mutation: Option<Mutation>,
) -> Result<Option<Partition>> {
    let n = s.premises().len();
    check_cap(n)?;
    for mask in 0..1u64 << n {
        let part = Partition::from_mask(n, mask);
        if !split_passes(sat, s, &part, mutation)? {
            return Ok(Some(part));
        }
    }
    Ok(None)
}

/// Decides an original logic: the causal variant must hold and the premise
/// outputs must classically entail the goal output.
pub fn decide_original(sat: &SatEngine, s: &IOSequent) -> Result<Option<Refutation>> {
    decide_original_mutated(sat, s, None)
}

pub fn decide_original_mutated(
    sat: &SatEngine,
    s: &IOSequent,
    mutation: Option<Mutation>,
) -> Result<Option<Refutation>> {
    if let Some(part) = decide_causal_mutated(sat, s, mutation)? {
        return Ok(Some(Refutation::Partition(part)));
    }
    if !outputs_entail_goal(sat, s)? {
        return Ok(Some(Refutation::Outputs));
    }
    Ok(None)
}

/// `X_1, ..., X_n |= Y` for the premises and goal of `s`.
pub fn outputs_entail_goal(sat: &SatEngine, s: &IOSequent) -> Result<bool> {
    sat.entails(s.outputs(), &s.goal().output)
}

/// Decides `s` in its own logic; `None` means derivable.
pub fn decide(sat: &SatEngine, s: &IOSequent) -> Result<Option<Refutation>> {
    decide_mutated(sat, s, None)
}

pub fn decide_mutated(
    sat: &SatEngine,
    s: &IOSequent,
    mutation: Option<Mutation>,
) -> Result<Option<Refutation>> {
    if s.logic().causal {
        Ok(decide_causal_mutated(sat, s, mutation)?.map(Refutation::Partition))
    } else {
        decide_original_mutated(sat, s, mutation)
    }
}
