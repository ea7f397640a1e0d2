//! Sequent calculi for the causal logics: proof search, an independent
//! checker, and translation of proofs into native derivations.
//!
//! A sequent `G |- B / Y` is closed by IN when `B` is classically
//! inconsistent and by OUT when `Y` is valid. Otherwise a premise `(A, X)` is
//! eliminated by the rule of the logic's family:
//!
//! | family | first premise      | second premise            |
//! |--------|--------------------|---------------------------|
//! | 1      | LK `B => A`        | `G' |- B / Y | !X`        |
//! | 2      | `G' |- B & !A / Y` | `G' |- B / Y | !X`        |
//! | 3      | LK `B => A`        | `G' |- B & X / Y | !X`    |
//! | 4      | `G' |- B & !A / Y` | `G' |- B & X / Y | !X`    |

mod search;
mod translate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CheckError;
use crate::sat::{LkSequent, SatEngine};
use crate::theory::{Family, IOPair, IOSequent};

pub use search::{decide_original_via_proof, prove, search, OriginalProof, ProofOutcome, PROOF_CAP};
pub use translate::{to_native, to_native_original};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IoRule {
    PairElim1,
    PairElim2,
    PairElim3,
    PairElim4,
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
}

impl IoRule {
    pub fn pair_elimination(family: Family) -> IoRule {
        match family {
            Family::Out1 => IoRule::PairElim1,
            Family::Out2 => IoRule::PairElim2,
            Family::Out3 => IoRule::PairElim3,
            Family::Out4 => IoRule::PairElim4,
        }
    }

    pub fn family(self) -> Option<Family> {
        match self {
            IoRule::PairElim1 => Some(Family::Out1),
            IoRule::PairElim2 => Some(Family::Out2),
            IoRule::PairElim3 => Some(Family::Out3),
            IoRule::PairElim4 => Some(Family::Out4),
            IoRule::In | IoRule::Out => None,
        }
    }
}

impl fmt::Display for IoRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IoRule::PairElim1 => "PairElim1",
            IoRule::PairElim2 => "PairElim2",
            IoRule::PairElim3 => "PairElim3",
            IoRule::PairElim4 => "PairElim4",
            IoRule::In => "IN",
            IoRule::Out => "OUT",
        })
    }
}

/// An I/O sequent together with the rule that closes or reduces it.
/// `eliminated` indexes the node's own premise list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IoNode {
    pub rule: IoRule,
    pub sequent: IOSequent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eliminated: Option<usize>,
    pub children: Vec<SequentDerivation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum LkTag {
    #[serde(rename = "LK")]
    Lk,
}

/// A classical sequent certified by the SAT backend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalLeaf {
    rule: LkTag,
    pub sequent: LkSequent,
    pub verdict: bool,
}

impl ClassicalLeaf {
    pub fn new(sequent: LkSequent, verdict: bool) -> ClassicalLeaf {
        ClassicalLeaf {
            rule: LkTag::Lk,
            sequent,
            verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequentDerivation {
    Io(IoNode),
    Classical(ClassicalLeaf),
}

impl SequentDerivation {
    pub fn io(&self) -> Option<&IoNode> {
        match self {
            SequentDerivation::Io(n) => Some(n),
            SequentDerivation::Classical(_) => None,
        }
    }

    /// Closed I/O leaves (IN or OUT nodes), left to right.
    pub fn concluding_nodes(&self) -> Vec<&IoNode> {
        let mut out = Vec::new();
        self.collect_concluding(&mut out);
        out
    }

    fn collect_concluding<'a>(&'a self, out: &mut Vec<&'a IoNode>) {
        if let SequentDerivation::Io(n) = self {
            if matches!(n.rule, IoRule::In | IoRule::Out) {
                out.push(n);
            }
            for c in &n.children {
                c.collect_concluding(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SequentDerivation::Io(n) => 1 + n.children.iter().map(SequentDerivation::size).sum::<usize>(),
            SequentDerivation::Classical(_) => 1,
        }
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = 2 * depth;
        match self {
            SequentDerivation::Classical(leaf) => {
                let mark = if leaf.verdict { "valid" } else { "NOT valid" };
                writeln!(f, "{:pad$}{}  [LK, {mark}]", "", leaf.sequent)
            }
            SequentDerivation::Io(n) => {
                let g: Vec<String> = n.sequent.premises().iter().map(|p| format!("({p})")).collect();
                let goal = n.sequent.goal();
                write!(
                    f,
                    "{:pad$}{} |- {} / {}  [{}",
                    "",
                    g.join(", "),
                    goal.input,
                    goal.output,
                    n.rule
                )?;
                if let Some(p) = n.eliminated.and_then(|i| n.sequent.premises().get(i)) {
                    write!(f, " on ({p})")?;
                }
                writeln!(f, "]")?;
                for c in &n.children {
                    c.fmt_indented(f, depth + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// One sequent per line; premises of a rule are indented below it.
impl fmt::Display for SequentDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

/// The first ill-formed node of a sequent derivation, addressed by child
/// indices from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentFault {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for SequentFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?}: {}", self.path, self.reason)
    }
}

impl std::error::Error for SequentFault {}

type Checked = Result<(), CheckError<SequentFault>>;

fn reject(path: &[usize], reason: String) -> Checked {
    Err(CheckError::Rejected(SequentFault {
        path: path.to_vec(),
        reason,
    }))
}

/// The premises a rule instance must have: the LK side premise or the I/O
/// sequent for each child position.
enum Expected {
    Lk(LkSequent),
    Io(IOSequent),
}

fn expected_children(node: &IoNode) -> Result<Vec<Expected>, String> {
    let s = &node.sequent;
    let goal = s.goal();
    let (b, y) = (&goal.input, &goal.output);
    match node.rule {
        IoRule::In => {
            if node.eliminated.is_some() {
                return Err("IN eliminates no pair".into());
            }
            Ok(vec![Expected::Lk(LkSequent::new(vec![b.clone()], vec![]))])
        }
        IoRule::Out => {
            if node.eliminated.is_some() {
                return Err("OUT eliminates no pair".into());
            }
            Ok(vec![Expected::Lk(LkSequent::new(vec![], vec![y.clone()]))])
        }
        rule => {
            let family = rule.family().expect("pair elimination rule");
            if family != s.logic().family {
                return Err(format!("{rule} is not a rule of the calculus for {}", s.logic()));
            }
            let Some(index) = node.eliminated else {
                return Err(format!("{rule} needs an eliminated pair"));
            };
            let Some(IOPair { input: a, output: x }) = s.premises().get(index) else {
                return Err(format!("eliminated index {index} out of range"));
            };
            let rest = s.without(index);
            let weakened = y.clone().or(!x.clone());
            let reduced_input = if family.reusable() {
                b.clone().and(x.clone())
            } else {
                b.clone()
            };
            let second = Expected::Io(rest.with_goal(IOPair::new(reduced_input, weakened)));
            let first = if family.has_or() {
                Expected::Io(rest.with_goal(IOPair::new(b.clone().and(!a.clone()), y.clone())))
            } else {
                Expected::Lk(LkSequent::new(vec![b.clone()], vec![a.clone()]))
            };
            Ok(vec![first, second])
        }
    }
}

/// Re-verifies every rule instance of `d` and every classical leaf, and that
/// the root proves `s`. Premise lists are compared as sets.
pub fn check_sequent(d: &SequentDerivation, s: &IOSequent, sat: &SatEngine) -> Checked {
    let Some(root) = d.io() else {
        return reject(&[], "the root must be an I/O sequent".into());
    };
    if !s.logic().causal {
        return reject(&[], format!("sequent derivations prove causal logics, not {}", s.logic()));
    }
    if !root.sequent.same_as(s) {
        return reject(&[], format!("root proves {}, expected {s}", root.sequent));
    }
    check_node(d, sat, &mut Vec::new())
}

fn check_node(d: &SequentDerivation, sat: &SatEngine, path: &mut Vec<usize>) -> Checked {
    let node = match d {
        SequentDerivation::Classical(leaf) => return check_leaf(leaf, sat, path),
        SequentDerivation::Io(node) => node,
    };
    let expected = match expected_children(node) {
        Ok(e) => e,
        Err(reason) => return reject(path, reason),
    };
    if node.children.len() != expected.len() {
        return reject(
            path,
            format!("{} has {} premises, found {}", node.rule, expected.len(), node.children.len()),
        );
    }
    for (k, (child, want)) in node.children.iter().zip(&expected).enumerate() {
        path.push(k);
        match (child, want) {
            (SequentDerivation::Classical(leaf), Expected::Lk(seq)) if leaf.sequent == *seq => {}
            (SequentDerivation::Io(n), Expected::Io(seq)) if n.sequent.same_as(seq) => {}
            (_, Expected::Lk(seq)) => return reject(path, format!("expected LK sequent {seq}")),
            (_, Expected::Io(seq)) => return reject(path, format!("expected I/O sequent {seq}")),
        }
        check_node(child, sat, path)?;
        path.pop();
    }
    Ok(())
}

fn check_leaf(leaf: &ClassicalLeaf, sat: &SatEngine, path: &[usize]) -> Checked {
    if !leaf.verdict {
        return reject(path, format!("LK sequent {} is recorded as not derivable", leaf.sequent));
    }
    if !sat.lk_derivable(&leaf.sequent)? {
        return reject(path, format!("LK sequent {} is not derivable", leaf.sequent));
    }
    Ok(())
}
