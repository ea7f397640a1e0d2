//! Expansion of sequent proofs into native derivations.

use super::{IoNode, IoRule, SequentDerivation};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::theory::{IOPair, IOSequent, NativeDerivation};

/// How IN leaves are expanded.
enum InLeaf<'a> {
    /// From `(F, F)` by SI and WO.
    Bot,
    /// Without `(F, F)`: strengthen every premise to input `F`, join the
    /// outputs by AND and weaken. Sound when the premise outputs entail the
    /// goal output.
    FromPremises(&'a [IOPair]),
}

/// Translates a checked proof in a causal calculus into a native derivation
/// of the same goal, valid in the same causal logic.
pub fn to_native(d: &SequentDerivation) -> Result<NativeDerivation> {
    expand(d, &InLeaf::Bot)
}

/// Like [`to_native`], but IN leaves are rebuilt from the premises of `s`
/// instead of `(F, F)`. The result uses no BOT node and is valid in the
/// original logic of `s` whenever the outputs of `s` entail its goal output.
pub fn to_native_original(d: &SequentDerivation, s: &IOSequent) -> Result<NativeDerivation> {
    expand(d, &InLeaf::FromPremises(s.premises()))
}

fn malformed(reason: impl Into<String>) -> Error {
    Error::MalformedDerivation(reason.into())
}

fn io_child(node: &IoNode, k: usize) -> Result<&SequentDerivation> {
    match node.children.get(k) {
        Some(c @ SequentDerivation::Io(_)) => Ok(c),
        _ => Err(malformed(format!("{} needs an I/O premise at position {k}", node.rule))),
    }
}

fn expand(d: &SequentDerivation, in_leaf: &InLeaf<'_>) -> Result<NativeDerivation> {
    let SequentDerivation::Io(node) = d else {
        return Err(malformed("a classical leaf has no native counterpart"));
    };
    let goal = node.sequent.goal();
    let (b, y) = (goal.input.clone(), goal.output.clone());
    match node.rule {
        IoRule::In => Ok(match in_leaf {
            InLeaf::Bot => NativeDerivation::bot().si(b).wo(y),
            InLeaf::FromPremises([]) => {
                NativeDerivation::top().wo(y).si(b)
            }
            InLeaf::FromPremises(premises) => premises
                .iter()
                .map(|p| NativeDerivation::premise(p.clone()).si(Formula::Bot))
                .reduce(NativeDerivation::and)
                .expect("non-empty premises")
                .wo(y)
                .si(b),
        }),
        IoRule::Out => Ok(NativeDerivation::top().wo(y).si(b)),
        rule => {
            let family = rule.family().expect("pair elimination rule");
            let index = node
                .eliminated
                .ok_or_else(|| malformed(format!("{rule} without an eliminated pair")))?;
            let eliminated = node
                .sequent
                .premises()
                .get(index)
                .ok_or_else(|| malformed(format!("eliminated index {index} out of range")))?;
            let (a, x) = (eliminated.input.clone(), eliminated.output.clone());
            let ba = b.clone().and(a.clone());
            let premise = || NativeDerivation::premise(eliminated.clone());

            // (B & A, Y | !X) from the second premise of the rule
            let right = expand(io_child(node, 1)?, in_leaf)?;
            let weakened_side = if family.reusable() {
                let lifted = premise().si(ba.clone());
                lifted.ct(right.si(ba.clone().and(x.clone())))
            } else {
                right.si(ba.clone())
            };
            // (B & A, Y)
            let core = premise()
                .wo(y.clone().or(x.clone()))
                .si(ba.clone())
                .and(weakened_side)
                .wo(y.clone().or(x.clone().and(!x)))
                .wo(y);
            if family.has_or() {
                let left = expand(io_child(node, 0)?, in_leaf)?;
                Ok(core.or(left).si(b.clone().and(a.clone().or(!a))).si(b))
            } else {
                Ok(core.si(b))
            }
        }
    }
}
