//! Polynomial encoding of entailment into propositional unsatisfiability.
//!
//! Every atom `x` gets one copy `x@l` per world: world 0 is the output world,
//! worlds `1..=N` are input worlds. A premise `(A, X)` becomes "if `A` holds
//! in every input world then `X` holds in the output world" (and, for the
//! reusable families, in every world). The query is derivable iff the
//! premises together with the negated goal are unsatisfiable; a satisfying
//! assignment reads back as a countermodel.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::formula::{label, Atom, Formula, Valuation};
use crate::sat::{tseitin, CnfInstance, SatEngine};
use crate::semantics::{complete, IOModel};
use crate::theory::{IOPair, IOSequent, LogicId};

/// Layout of the labeled copies for one query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingSpec {
    pub logic: LogicId,
    /// Number of input worlds.
    pub worlds: usize,
    pub universe: BTreeSet<Atom>,
}

impl EncodingSpec {
    /// One input world for families 2 and 4, `|G| + 1` for families 1 and 3.
    pub fn for_sequent(s: &IOSequent) -> EncodingSpec {
        let worlds = if s.logic().family.has_or() {
            1
        } else {
            s.premises().len() + 1
        };
        EncodingSpec {
            logic: s.logic(),
            worlds,
            universe: s.atoms(),
        }
    }
}

/// `label(f, l)` over `worlds`, joined by conjunction. A formula without
/// atoms is the same in every world and is kept as a single copy.
fn copies(f: &Formula, worlds: impl Iterator<Item = usize>) -> Result<Formula> {
    if !f.has_atoms() {
        return Ok(f.clone());
    }
    let labeled: Result<Vec<Formula>> = worlds.map(|l| label(f, l)).collect();
    Ok(Formula::conjunction(labeled?))
}

/// The propositional image of a pair.
pub fn encode_pair(p: &IOPair, spec: &EncodingSpec) -> Result<Formula> {
    let antecedent = copies(&p.input, 1..=spec.worlds)?;
    let consequent = if spec.logic.family.reusable() {
        copies(&p.output, 0..=spec.worlds)?
    } else {
        label(&p.output, 0)?
    };
    Ok(antecedent.implies(consequent))
}

/// The premises' images together with the negated image of the goal; this is
/// unsatisfiable iff the causal variant of the query is derivable.
pub fn causal_formula(s: &IOSequent) -> Result<Formula> {
    let spec = EncodingSpec::for_sequent(s);
    let mut parts = vec![!encode_pair(s.goal(), &spec)?];
    for p in s.premises() {
        parts.push(encode_pair(p, &spec)?);
    }
    Ok(Formula::conjunction(parts))
}

/// `!Y & X_1 & ... & X_n`: satisfiable iff the premise outputs fail to
/// entail the goal output.
pub fn outputs_formula(s: &IOSequent) -> Formula {
    Formula::conjunction(std::iter::once(!s.goal().output.clone()).chain(s.outputs().cloned()))
}

/// One formula whose unsatisfiability is equivalent to derivability of `s` in
/// its own logic. Used for DIMACS export.
pub fn query_formula(s: &IOSequent) -> Result<Formula> {
    let phi = causal_formula(s)?;
    Ok(if s.logic().causal {
        phi
    } else {
        phi.or(outputs_formula(s))
    })
}

/// [`query_formula`] in CNF.
pub fn query_cnf(s: &IOSequent) -> Result<CnfInstance> {
    Ok(tseitin(&query_formula(s)?))
}

/// Reads world `l` off an assignment to labeled atoms.
fn decode_world(v: &Valuation, universe: &BTreeSet<Atom>, l: usize) -> Result<Valuation> {
    let mut w = Valuation::new();
    for x in universe {
        let value = v.get(&x.labeled(l)?).unwrap_or(false);
        w.insert(x.clone(), value);
    }
    Ok(w)
}

/// Outcome of a SAT-based decision: `None` when derivable, otherwise the
/// decoded countermodel.
pub type SatVerdict = Option<IOModel>;

/// Decides the causal variant of `s`'s family by one solver call.
pub fn decide_causal_sat(sat: &SatEngine, s: &IOSequent) -> Result<SatVerdict> {
    let spec = EncodingSpec::for_sequent(s);
    let phi = causal_formula(s)?;
    let Some(v) = sat.satisfy(&[&phi])? else {
        return Ok(None);
    };
    let output = decode_world(&v, &spec.universe, 0)?;
    let inputs: Result<Vec<Valuation>> = (1..=spec.worlds)
        .map(|l| decode_world(&v, &spec.universe, l))
        .collect();
    Ok(Some(IOModel::new(inputs?, output)?))
}

/// Decides an original logic by two independent solver calls: the causal
/// encoding, and the classical condition on the outputs. A model of the
/// latter becomes a countermodel without input worlds.
pub fn decide_original_sat(sat: &SatEngine, s: &IOSequent) -> Result<SatVerdict> {
    let outputs = outputs_formula(s);
    let (causal, plain) = rayon::join(|| decide_causal_sat(sat, s), || sat.satisfy(&[&outputs]));
    if let Some(m) = causal? {
        return Ok(Some(m));
    }
    match plain? {
        Some(v) => Ok(Some(IOModel::new([], complete(v, &s.atoms()))?)),
        None => Ok(None),
    }
}

/// Decides `s` in its own logic.
pub fn decide_sat(sat: &SatEngine, s: &IOSequent) -> Result<SatVerdict> {
    if s.logic().causal {
        decide_causal_sat(sat, s)
    } else {
        decide_original_sat(sat, s)
    }
}
