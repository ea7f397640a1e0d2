//! I/O models: a set of input worlds and one output world.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CheckError, Error, Result};
use crate::formula::{Atom, Formula, Valuation};
use crate::oracle::{Partition, Refutation};
use crate::sat::SatEngine;
use crate::theory::{Family, IOPair, IOSequent, LogicId};

/// `(In, out)`. All worlds are total on the same atom universe, which is the
/// domain of `out`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IOModel {
    inputs: BTreeSet<Valuation>,
    output: Valuation,
}

impl IOModel {
    pub fn new(inputs: impl IntoIterator<Item = Valuation>, output: Valuation) -> Result<IOModel> {
        let inputs: BTreeSet<Valuation> = inputs.into_iter().collect();
        for w in &inputs {
            if let Some(a) = w
                .domain()
                .find(|a| !output.contains(a))
                .or_else(|| output.domain().find(|a| !w.contains(a)))
            {
                return Err(Error::UnassignedAtom(format!(
                    "{a} (input and output worlds must share one atom universe)"
                )));
            }
        }
        Ok(IOModel { inputs, output })
    }

    pub fn inputs(&self) -> &BTreeSet<Valuation> {
        &self.inputs
    }

    pub fn output(&self) -> &Valuation {
        &self.output
    }

    pub fn universe(&self) -> impl Iterator<Item = &Atom> {
        self.output.domain()
    }
}

impl<'de> Deserialize<'de> for IOModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            inputs: Vec<Valuation>,
            output: Valuation,
        }
        let raw = Raw::deserialize(deserializer)?;
        IOModel::new(raw.inputs, raw.output).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IOModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inputs: Vec<String> = self.inputs.iter().map(ToString::to_string).collect();
        write!(f, "In = [{}], out = {}", inputs.join(", "), self.output)
    }
}

/// How far an output is required to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notion {
    /// Output at the output world only (families 1 and 2).
    OneTwo,
    /// Output at the output world and at every input world (families 3, 4).
    ThreeFour,
}

impl Notion {
    pub fn of(family: Family) -> Notion {
        if family.reusable() {
            Notion::ThreeFour
        } else {
            Notion::OneTwo
        }
    }
}

/// Bounds on the number of input worlds admitted by a logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameCondition {
    pub min_inputs: usize,
    pub max_inputs: Option<usize>,
}

impl FrameCondition {
    pub fn of(logic: LogicId) -> FrameCondition {
        let min_inputs = usize::from(logic.causal);
        let max_inputs = logic.family.has_or().then_some(1);
        FrameCondition {
            min_inputs,
            max_inputs,
        }
    }

    pub fn admits(self, inputs: usize) -> bool {
        inputs >= self.min_inputs && self.max_inputs.is_none_or(|m| inputs <= m)
    }
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.min_inputs, self.max_inputs) {
            (0, None) => f.write_str("no condition"),
            (m, None) => write!(f, "|In| >= {m}"),
            (0, Some(x)) => write!(f, "|In| <= {x}"),
            (m, Some(x)) if m == x => write!(f, "|In| = {m}"),
            (m, Some(x)) => write!(f, "{m} <= |In| <= {x}"),
        }
    }
}

/// Validity of `(A, X)` in `m`: if every input world satisfies `A`, then `X`
/// holds at the output world (and, for [`Notion::ThreeFour`], at every input
/// world too).
pub fn pair_valid(p: &IOPair, m: &IOModel, notion: Notion) -> Result<bool> {
    if let Some(a) = p.atoms().into_iter().find(|a| !m.output.contains(a)) {
        return Err(Error::UnassignedAtom(a.to_string()));
    }
    for w in &m.inputs {
        if !p.input.evaluate(w)? {
            return Ok(true);
        }
    }
    if !p.output.evaluate(&m.output)? {
        return Ok(false);
    }
    if notion == Notion::ThreeFour {
        for w in &m.inputs {
            if !p.output.evaluate(w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Why a model fails to refute a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountermodelFault {
    Frame {
        inputs: usize,
        condition: FrameCondition,
    },
    PremiseInvalid {
        index: usize,
        pair: IOPair,
    },
    GoalValid,
}

impl fmt::Display for CountermodelFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountermodelFault::Frame { inputs, condition } => {
                write!(f, "{inputs} input worlds violate the frame condition {condition}")
            }
            CountermodelFault::PremiseInvalid { index, pair } => {
                write!(f, "premise {index} ({pair}) is not valid in the model")
            }
            CountermodelFault::GoalValid => f.write_str("the goal is valid in the model"),
        }
    }
}

impl std::error::Error for CountermodelFault {}

/// Checks that `m` is a countermodel for `s`: it meets the frame condition of
/// the logic, validates every premise and does not validate the goal.
pub fn check_countermodel(m: &IOModel, s: &IOSequent) -> Result<(), CheckError<CountermodelFault>> {
    let logic = s.logic();
    let condition = FrameCondition::of(logic);
    if !condition.admits(m.inputs.len()) {
        return Err(CheckError::Rejected(CountermodelFault::Frame {
            inputs: m.inputs.len(),
            condition,
        }));
    }
    let notion = Notion::of(logic.family);
    for (index, pair) in s.premises().iter().enumerate() {
        if !pair_valid(pair, m, notion)? {
            return Err(CheckError::Rejected(CountermodelFault::PremiseInvalid {
                index,
                pair: pair.clone(),
            }));
        }
    }
    if pair_valid(s.goal(), m, notion)? {
        return Err(CheckError::Rejected(CountermodelFault::GoalValid));
    }
    Ok(())
}

pub fn is_countermodel(m: &IOModel, s: &IOSequent) -> bool {
    check_countermodel(m, s).is_ok()
}

/// Extends `v` to all of `universe`, unset atoms false.
pub(crate) fn complete(v: Valuation, universe: &BTreeSet<Atom>) -> Valuation {
    let mut out = v;
    for a in universe {
        if !out.contains(a) {
            out.insert(a.clone(), false);
        }
    }
    out
}

fn world(sat: &SatEngine, constraints: &[&Formula], universe: &BTreeSet<Atom>) -> Result<Valuation> {
    let v = sat.satisfy(constraints)?.ok_or_else(|| {
        let parts: Vec<String> = constraints.iter().map(ToString::to_string).collect();
        Error::InconsistentWorld(parts.join(", "))
    })?;
    Ok(complete(v, universe))
}

/// Builds the countermodel described by a refutation of `s`.
///
/// For a failing split `(I, J)` the output world satisfies the outputs in `J`
/// and falsifies the goal output. Families 2 and 4 get one input world
/// falsifying every input in `I`; families 1 and 3 get one input world for the
/// goal input plus one falsifying each input in `I` separately. In the
/// reusable families every input world also satisfies the outputs in `J`.
pub fn countermodel_from_refutation(
    sat: &SatEngine,
    s: &IOSequent,
    refutation: &Refutation,
) -> Result<IOModel> {
    let universe = s.atoms();
    let g = s.premises();
    let goal = s.goal();
    let not_y = !goal.output.clone();
    match refutation {
        Refutation::Outputs => {
            let mut constraints: Vec<&Formula> = s.outputs().collect();
            constraints.push(&not_y);
            IOModel::new([], world(sat, &constraints, &universe)?)
        }
        Refutation::Partition(Partition {
            input_side,
            output_side,
        }) => {
            let outputs_j: Vec<&Formula> = output_side.iter().map(|&j| &g[j].output).collect();
            let mut out_constraints = outputs_j.clone();
            out_constraints.push(&not_y);
            let output = world(sat, &out_constraints, &universe)?;

            let mut base: Vec<&Formula> = vec![&goal.input];
            if s.logic().family.reusable() {
                base.extend(outputs_j.iter().copied());
            }
            let negated: Vec<Formula> = input_side.iter().map(|&i| !g[i].input.clone()).collect();
            let mut inputs = Vec::new();
            if s.logic().family.has_or() {
                let mut c = base.clone();
                c.extend(negated.iter());
                inputs.push(world(sat, &c, &universe)?);
            } else {
                inputs.push(world(sat, &base, &universe)?);
                for n in &negated {
                    let mut c = base.clone();
                    c.push(n);
                    inputs.push(world(sat, &c, &universe)?);
                }
            }
            IOModel::new(inputs, output)
        }
    }
}

/// Largest atom universe the exhaustive model search accepts.
pub const SEARCH_ATOM_CAP: usize = 3;

/// Searches every model over the atoms of `s` admitted by the frame condition
/// for a countermodel. Input sets are sets of distinct valuations, at most
/// `|G| + 1` of them for families 1 and 3. Models are tried by increasing
/// number of input worlds.
pub fn search_countermodel(s: &IOSequent) -> Result<Option<IOModel>> {
    let universe: Vec<Atom> = s.atoms().into_iter().collect();
    if universe.len() > SEARCH_ATOM_CAP {
        return Err(Error::CapExceeded {
            procedure: "model search (atoms)",
            cap: SEARCH_ATOM_CAP,
            actual: universe.len(),
        });
    }
    let valuations = Valuation::enumerate(&universe);
    let condition = FrameCondition::of(s.logic());
    let mut bound = valuations.len();
    if !s.logic().family.has_or() {
        bound = bound.min(s.premises().len() + 1);
    }
    if let Some(max) = condition.max_inputs {
        bound = bound.min(max);
    }
    let mut subsets: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for mask in 0..1u64 << valuations.len() {
        let size = mask.count_ones() as usize;
        if size <= bound && condition.admits(size) {
            subsets.entry(size).or_default().push(mask);
        }
    }
    for masks in subsets.values() {
        for &mask in masks {
            let inputs = valuations
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, v)| v.clone());
            let inputs: Vec<Valuation> = inputs.collect();
            for out in &valuations {
                let m = IOModel::new(inputs.iter().cloned(), out.clone())?;
                if is_countermodel(&m, s) {
                    return Ok(Some(m));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(pairs: &[(&str, bool)]) -> Valuation {
        pairs
            .iter()
            .map(|(a, b)| (Atom::new(a).unwrap(), *b))
            .collect()
    }

    fn pair(s: &str) -> IOPair {
        s.parse().unwrap()
    }

    fn seq(pairs: &[&str], goal: &str, logic: &str) -> IOSequent {
        IOSequent::new(pairs.iter().map(|p| pair(p)), pair(goal), logic.parse().unwrap())
    }

    #[test]
    fn frame_conditions() {
        let expect = [
            ("out1c", 1, None),
            ("out2c", 1, Some(1)),
            ("out3c", 1, None),
            ("out4c", 1, Some(1)),
            ("out1", 0, None),
            ("out2", 0, Some(1)),
            ("out3", 0, None),
            ("out4", 0, Some(1)),
        ];
        for (code, min, max) in expect {
            let c = FrameCondition::of(code.parse().unwrap());
            assert_eq!((c.min_inputs, c.max_inputs), (min, max), "{code}");
        }
    }

    #[test]
    fn validity_examples() {
        let m = IOModel::new([v(&[("a", true), ("x", true)])], v(&[("a", false), ("x", false)])).unwrap();
        assert!(!pair_valid(&pair("a => x"), &m, Notion::OneTwo).unwrap());

        let empty = IOModel::new([], v(&[("a", true), ("x", false)])).unwrap();
        for notion in [Notion::OneTwo, Notion::ThreeFour] {
            assert!(!pair_valid(&pair("a => x"), &empty, notion).unwrap());
            assert!(pair_valid(&pair("a => a"), &empty, notion).unwrap());
        }

        let m = IOModel::new([v(&[("a", false)])], v(&[("a", true)])).unwrap();
        for notion in [Notion::OneTwo, Notion::ThreeFour] {
            assert!(pair_valid(&pair("a => F"), &m, notion).unwrap());
        }
        assert!(pair_valid(&pair("b => F"), &m, Notion::OneTwo).is_err());
    }

    #[test]
    fn disjunctive_input_countermodel() {
        let s = seq(&["a => x", "b => x"], "a | b => x", "out1c");
        let m = IOModel::new(
            [v(&[("a", true), ("b", false), ("x", false)]), v(&[("a", false), ("b", true), ("x", false)])],
            v(&[("a", false), ("b", false), ("x", false)]),
        )
        .unwrap();
        check_countermodel(&m, &s).unwrap();
        let err = check_countermodel(&m, &s.with_logic("out2c".parse().unwrap())).unwrap_err();
        assert!(matches!(err.rejected(), Some(CountermodelFault::Frame { inputs: 2, .. })));
    }

    #[test]
    fn zero_input_worlds() {
        let s = seq(&[], "F => p", "out1");
        let m = IOModel::new([], v(&[("p", false)])).unwrap();
        check_countermodel(&m, &s).unwrap();
        assert!(!is_countermodel(&m, &s.causal()));
    }

    #[test]
    fn model_json() {
        let m = IOModel::new([v(&[("a", true)])], v(&[("a", false)])).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"inputs":[{"a":true}],"output":{"a":false}}"#);
        assert_eq!(serde_json::from_str::<IOModel>(&json).unwrap(), m);
        assert!(serde_json::from_str::<IOModel>(r#"{"inputs":[{"b":true}],"output":{"a":false}}"#).is_err());
    }

    #[test]
    fn exhaustive_search_finds_small_models() {
        let s = seq(&["a => x", "b => x"], "a | b => x", "out1c");
        let m = search_countermodel(&s).unwrap().unwrap();
        assert!(m.inputs().len() >= 2);
        assert!(search_countermodel(&s.with_logic("out2c".parse().unwrap())).unwrap().is_none());
    }
}
