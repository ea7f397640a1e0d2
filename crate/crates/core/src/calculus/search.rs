use super::{ClassicalLeaf, IoNode, IoRule, SequentDerivation};
use crate::error::{Error, Result};
use crate::oracle::{Partition, Refutation};
use crate::sat::{LkSequent, SatEngine};
use crate::theory::{IOPair, IOSequent};

/// Largest premise count for families 2 and 4, whose proofs have one leaf per
/// split of the premises.
pub const PROOF_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofOutcome {
    Proved(SequentDerivation),
    /// The split of premises (original indices) read off the branch that
    /// could not be closed.
    Refuted(Partition),
}

fn leaf(sequent: LkSequent) -> SequentDerivation {
    SequentDerivation::Classical(ClassicalLeaf::new(sequent, true))
}

/// Closes `s` with IN or OUT if either applies.
fn conclude(sat: &SatEngine, s: &IOSequent) -> Result<Option<SequentDerivation>> {
    let goal = s.goal();
    let inconsistent = LkSequent::new(vec![goal.input.clone()], vec![]);
    let valid = LkSequent::new(vec![], vec![goal.output.clone()]);
    let (rule, side) = if sat.lk_derivable(&inconsistent)? {
        (IoRule::In, inconsistent)
    } else if sat.lk_derivable(&valid)? {
        (IoRule::Out, valid)
    } else {
        return Ok(None);
    };
    Ok(Some(SequentDerivation::Io(IoNode {
        rule,
        sequent: s.clone(),
        eliminated: None,
        children: vec![leaf(side)],
    })))
}

/// Searches for a proof of `s` in the calculus of its causal variant.
///
/// Families 2 and 4 eliminate the premises in insertion order, each
/// elimination splitting the branch, and close every resulting leaf.
/// Families 1 and 3 follow a single branch: close if possible, otherwise
/// eliminate the first pair whose input follows from the current goal input,
/// and give up when none does.
pub fn search(sat: &SatEngine, s: &IOSequent) -> Result<ProofOutcome> {
    let s = s.causal();
    if s.logic().family.has_or() {
        let n = s.premises().len();
        if n > PROOF_CAP {
            return Err(Error::CapExceeded {
                procedure: "proof search",
                cap: PROOF_CAP,
                actual: n,
            });
        }
        let mut sides = Vec::with_capacity(n);
        Ok(match eliminate_all(sat, &s, &mut sides)? {
            Ok(d) => ProofOutcome::Proved(d),
            Err(p) => ProofOutcome::Refuted(p),
        })
    } else {
        greedy(sat, &s)
    }
}

/// `sides[k]` records whether original premise `k` went to the output side.
fn eliminate_all(
    sat: &SatEngine,
    s: &IOSequent,
    sides: &mut Vec<bool>,
) -> Result<Result<SequentDerivation, Partition>> {
    if s.premises().is_empty() {
        return Ok(conclude(sat, s)?.ok_or_else(|| {
            let (output_side, input_side) = (0..sides.len()).partition(|&k| sides[k]);
            Partition {
                input_side,
                output_side,
            }
        }));
    }
    let family = s.logic().family;
    let IOPair { input: a, output: x } = &s.premises()[0];
    let goal = s.goal();
    let rest = s.without(0);
    let left_goal = IOPair::new(goal.input.clone().and(!a.clone()), goal.output.clone());
    let right_input = if family.reusable() {
        goal.input.clone().and(x.clone())
    } else {
        goal.input.clone()
    };
    let right_goal = IOPair::new(right_input, goal.output.clone().or(!x.clone()));

    sides.push(false);
    let left = eliminate_all(sat, &rest.with_goal(left_goal), sides)?;
    sides.pop();
    let left = match left {
        Ok(d) => d,
        Err(p) => return Ok(Err(p)),
    };
    sides.push(true);
    let right = eliminate_all(sat, &rest.with_goal(right_goal), sides)?;
    sides.pop();
    let right = match right {
        Ok(d) => d,
        Err(p) => return Ok(Err(p)),
    };
    Ok(Ok(SequentDerivation::Io(IoNode {
        rule: IoRule::pair_elimination(family),
        sequent: s.clone(),
        eliminated: Some(0),
        children: vec![left, right],
    })))
}

fn greedy(sat: &SatEngine, s: &IOSequent) -> Result<ProofOutcome> {
    let family = s.logic().family;
    // original index of each remaining premise
    let mut remaining: Vec<usize> = (0..s.premises().len()).collect();
    let mut eliminated: Vec<usize> = Vec::new();
    let mut steps: Vec<(IOSequent, usize, LkSequent)> = Vec::new();
    let mut current = s.clone();
    let top = loop {
        if let Some(d) = conclude(sat, &current)? {
            break d;
        }
        let goal = current.goal().clone();
        let mut chosen = None;
        for (pos, p) in current.premises().iter().enumerate() {
            let side = LkSequent::new(vec![goal.input.clone()], vec![p.input.clone()]);
            if sat.lk_derivable(&side)? {
                chosen = Some((pos, side));
                break;
            }
        }
        let Some((pos, side)) = chosen else {
            let mut output_side = eliminated;
            output_side.sort_unstable();
            return Ok(ProofOutcome::Refuted(Partition {
                input_side: remaining,
                output_side,
            }));
        };
        let x = current.premises()[pos].output.clone();
        let input = if family.reusable() {
            goal.input.clone().and(x.clone())
        } else {
            goal.input.clone()
        };
        let next = current.without(pos).with_goal(IOPair::new(input, goal.output.or(!x)));
        eliminated.push(remaining.remove(pos));
        steps.push((current, pos, side));
        current = next;
    };
    let rule = IoRule::pair_elimination(family);
    let d = steps.into_iter().rev().fold(top, |above, (sequent, pos, side)| {
        SequentDerivation::Io(IoNode {
            rule,
            sequent,
            eliminated: Some(pos),
            children: vec![leaf(side), above],
        })
    });
    Ok(ProofOutcome::Proved(d))
}

/// A proof of the causal variant of `s`, if there is one.
pub fn prove(sat: &SatEngine, s: &IOSequent) -> Result<Option<SequentDerivation>> {
    Ok(match search(sat, s)? {
        ProofOutcome::Proved(d) => Some(d),
        ProofOutcome::Refuted(_) => None,
    })
}

/// Result of deciding an original logic through the calculus of its causal
/// variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OriginalProof {
    /// A causal proof plus the classical sequent `X_1, ..., X_n => Y`.
    Proved {
        derivation: SequentDerivation,
        witness: LkSequent,
    },
    Refuted(Refutation),
}

/// An original logic holds iff its causal variant does and the premise
/// outputs classically entail the goal output.
pub fn decide_original_via_proof(sat: &SatEngine, s: &IOSequent) -> Result<OriginalProof> {
    let derivation = match search(sat, s)? {
        ProofOutcome::Proved(d) => d,
        ProofOutcome::Refuted(p) => return Ok(OriginalProof::Refuted(Refutation::Partition(p))),
    };
    let witness = LkSequent::new(s.outputs().cloned().collect(), vec![s.goal().output.clone()]);
    if !sat.lk_derivable(&witness)? {
        return Ok(OriginalProof::Refuted(Refutation::Outputs));
    }
    Ok(OriginalProof::Proved { derivation, witness })
}
