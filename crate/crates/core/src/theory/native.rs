use std::fmt;

use serde::{Deserialize, Serialize};

use super::{IOPair, IOSequent, Rule};
use crate::error::CheckError;
use crate::formula::Formula;
use crate::sat::SatEngine;

/// Node label of a native derivation. `Premise` marks a leaf taken from the
/// premise set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NativeRule {
    #[serde(rename = "LEAF-G")]
    Premise,
    #[serde(rename = "TOP")]
    Top,
    #[serde(rename = "BOT")]
    Bot,
    #[serde(rename = "WO")]
    Wo,
    #[serde(rename = "SI")]
    Si,
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "OR")]
    Or,
    #[serde(rename = "CT")]
    Ct,
}

impl NativeRule {
    pub fn rule(self) -> Option<Rule> {
        Some(match self {
            NativeRule::Premise => return None,
            NativeRule::Top => Rule::Top,
            NativeRule::Bot => Rule::Bot,
            NativeRule::Wo => Rule::Wo,
            NativeRule::Si => Rule::Si,
            NativeRule::And => Rule::And,
            NativeRule::Or => Rule::Or,
            NativeRule::Ct => Rule::Ct,
        })
    }

    fn arity(self) -> usize {
        match self {
            NativeRule::Premise | NativeRule::Top | NativeRule::Bot => 0,
            NativeRule::Wo | NativeRule::Si => 1,
            NativeRule::And | NativeRule::Or | NativeRule::Ct => 2,
        }
    }

    fn label(self) -> &'static str {
        match self.rule() {
            Some(r) => r.name(),
            None => "LEAF-G",
        }
    }
}

/// A derivation tree in the native rules. The side conditions of WO and SI
/// are read off the node and its premise: WO from `(A, X)` to `(A, Y)` needs
/// `X |= Y`, SI from `(A, X)` to `(B, X)` needs `B |= A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NativeDerivation {
    pub rule: NativeRule,
    pub pair: IOPair,
    #[serde(default)]
    pub children: Vec<NativeDerivation>,
}

impl NativeDerivation {
    pub fn premise(pair: IOPair) -> NativeDerivation {
        NativeDerivation {
            rule: NativeRule::Premise,
            pair,
            children: Vec::new(),
        }
    }

    pub fn top() -> NativeDerivation {
        NativeDerivation {
            rule: NativeRule::Top,
            pair: IOPair::top(),
            children: Vec::new(),
        }
    }

    pub fn bot() -> NativeDerivation {
        NativeDerivation {
            rule: NativeRule::Bot,
            pair: IOPair::bot(),
            children: Vec::new(),
        }
    }

    /// Weakens the output to `output`.
    pub fn wo(self, output: Formula) -> NativeDerivation {
        let pair = IOPair::new(self.pair.input.clone(), output);
        NativeDerivation {
            rule: NativeRule::Wo,
            pair,
            children: vec![self],
        }
    }

    /// Strengthens the input to `input`.
    pub fn si(self, input: Formula) -> NativeDerivation {
        let pair = IOPair::new(input, self.pair.output.clone());
        NativeDerivation {
            rule: NativeRule::Si,
            pair,
            children: vec![self],
        }
    }

    pub fn and(self, other: NativeDerivation) -> NativeDerivation {
        let pair = IOPair::new(
            self.pair.input.clone(),
            self.pair.output.clone().and(other.pair.output.clone()),
        );
        NativeDerivation {
            rule: NativeRule::And,
            pair,
            children: vec![self, other],
        }
    }

    pub fn or(self, other: NativeDerivation) -> NativeDerivation {
        let pair = IOPair::new(
            self.pair.input.clone().or(other.pair.input.clone()),
            self.pair.output.clone(),
        );
        NativeDerivation {
            rule: NativeRule::Or,
            pair,
            children: vec![self, other],
        }
    }

    /// Cumulative transitivity: `self` is `(A, X)`, `other` is `(A & X, Y)`.
    pub fn ct(self, other: NativeDerivation) -> NativeDerivation {
        let pair = IOPair::new(self.pair.input.clone(), other.pair.output.clone());
        NativeDerivation {
            rule: NativeRule::Ct,
            pair,
            children: vec![self, other],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(NativeDerivation::size).sum::<usize>()
    }

    /// Whether some node of the tree uses `rule`.
    pub fn uses(&self, rule: NativeRule) -> bool {
        self.rule == rule || self.children.iter().any(|c| c.uses(rule))
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(
            f,
            "{:indent$}({})  [{}]",
            "",
            self.pair,
            self.rule.label(),
            indent = 2 * depth
        )?;
        for child in &self.children {
            child.fmt_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

/// Prints one pair per line, premises indented below their conclusion.
impl fmt::Display for NativeDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

/// The four ways a native derivation can be wrong for a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultClause {
    /// (i) the root is not the goal pair.
    Root,
    /// (ii) a leaf is not among the premises.
    Premise,
    /// (iii) a rule outside the logic's rule set.
    RuleSet,
    /// (iv) a rule instance is malformed or its side condition fails.
    Inference,
}

impl fmt::Display for FaultClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaultClause::Root => "(i) root",
            FaultClause::Premise => "(ii) premise",
            FaultClause::RuleSet => "(iii) rule set",
            FaultClause::Inference => "(iv) inference",
        })
    }
}

/// The first failing node, addressed by child indices from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NativeFault {
    pub path: Vec<usize>,
    pub clause: FaultClause,
    pub reason: String,
}

impl fmt::Display for NativeFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?}: {}: {}", self.path, self.clause, self.reason)
    }
}

impl std::error::Error for NativeFault {}

type Checked = Result<(), CheckError<NativeFault>>;

fn reject(path: &[usize], clause: FaultClause, reason: String) -> Checked {
    Err(CheckError::Rejected(NativeFault {
        path: path.to_vec(),
        clause,
        reason,
    }))
}

/// Verifies that `d` derives the goal of `s` from its premises using only the
/// rules of `s.logic()`. Nodes are visited in pre-order and the first failure
/// is reported.
pub fn check_native(d: &NativeDerivation, s: &IOSequent, sat: &SatEngine) -> Checked {
    if d.pair != *s.goal() {
        return reject(
            &[],
            FaultClause::Root,
            format!("root pair ({}) differs from goal ({})", d.pair, s.goal()),
        );
    }
    let mut path = Vec::new();
    check_node(d, s, sat, &mut path)
}

fn check_node(d: &NativeDerivation, s: &IOSequent, sat: &SatEngine, path: &mut Vec<usize>) -> Checked {
    use NativeRule as R;

    match d.rule.rule() {
        None => {
            if !s.contains_premise(&d.pair) {
                return reject(path, FaultClause::Premise, format!("({}) is not a premise", d.pair));
            }
        }
        Some(rule) if !s.logic().has_rule(rule) => {
            return reject(
                path,
                FaultClause::RuleSet,
                format!("{rule} is not a rule of {}", s.logic()),
            );
        }
        Some(_) => {}
    }
    if d.children.len() != d.rule.arity() {
        return reject(
            path,
            FaultClause::Inference,
            format!(
                "{} takes {} premises, found {}",
                d.rule.label(),
                d.rule.arity(),
                d.children.len()
            ),
        );
    }
    let node = &d.pair;
    let child = |k: usize| &d.children[k].pair;
    let bad = |reason: String| reject(path, FaultClause::Inference, reason);
    match d.rule {
        R::Premise => {}
        R::Top if *node != IOPair::top() => return bad(format!("TOP concludes ({node})")),
        R::Bot if *node != IOPair::bot() => return bad(format!("BOT concludes ({node})")),
        R::Top | R::Bot => {}
        R::Wo => {
            let c = child(0);
            if c.input != node.input {
                return bad(format!("WO changes the input of ({c})"));
            }
            if !sat.entails([&c.output], &node.output)? {
                return bad(format!("WO side condition {} |= {} fails", c.output, node.output));
            }
        }
        R::Si => {
            let c = child(0);
            if c.output != node.output {
                return bad(format!("SI changes the output of ({c})"));
            }
            if !sat.entails([&node.input], &c.input)? {
                return bad(format!("SI side condition {} |= {} fails", node.input, c.input));
            }
        }
        R::And => {
            let (l, r) = (child(0), child(1));
            if l.input != r.input {
                return bad(format!("AND premises ({l}) and ({r}) differ in input"));
            }
            let expected = IOPair::new(l.input.clone(), l.output.clone().and(r.output.clone()));
            if *node != expected {
                return bad(format!("AND concludes ({node}), expected ({expected})"));
            }
        }
        R::Or => {
            let (l, r) = (child(0), child(1));
            if l.output != r.output {
                return bad(format!("OR premises ({l}) and ({r}) differ in output"));
            }
            let expected = IOPair::new(l.input.clone().or(r.input.clone()), l.output.clone());
            if *node != expected {
                return bad(format!("OR concludes ({node}), expected ({expected})"));
            }
        }
        R::Ct => {
            let (l, r) = (child(0), child(1));
            let joined = l.input.clone().and(l.output.clone());
            if r.input != joined {
                return bad(format!("CT second premise must have input {joined}, found {}", r.input));
            }
            let expected = IOPair::new(l.input.clone(), r.output.clone());
            if *node != expected {
                return bad(format!("CT concludes ({node}), expected ({expected})"));
            }
        }
    }
    for (k, c) in d.children.iter().enumerate() {
        path.push(k);
        check_node(c, s, sat, path)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::theory::{Family, LogicId};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn pair(s: &str) -> IOPair {
        s.parse().unwrap()
    }

    fn fault(r: Checked) -> FaultClause {
        r.unwrap_err().rejected().unwrap().clause
    }

    #[test]
    fn top_leaf_against_any_logic() {
        let sat = SatEngine::new();
        for logic in LogicId::ALL {
            let s = IOSequent::new([pair("a => x")], IOPair::top(), logic);
            check_native(&NativeDerivation::top(), &s, &sat).unwrap();
        }
    }

    #[test]
    fn pair_elimination_by_hand() {
        // (b, y) from (a, x) by splitting b on a: the b & !a half is a
        // premise, the b & a half combines (a, x) with (b, y | !x)
        let sat = SatEngine::new();
        let core = NativeDerivation::premise(pair("a => x"))
            .wo(f("y | x"))
            .si(f("b & a"))
            .and(NativeDerivation::premise(pair("b => y | !x")).si(f("b & a")))
            .wo(f("y | x & !x"))
            .wo(f("y"));
        let d = core
            .or(NativeDerivation::premise(pair("b & !a => y")))
            .si(f("b & (a | !a)"))
            .si(f("b"));
        let premises = [pair("a => x"), pair("b & !a => y"), pair("b => y | !x")];
        let s = IOSequent::new(premises, pair("b => y"), LogicId::new(Family::Out2, false));
        check_native(&d, &s, &sat).unwrap();
        assert_eq!(d.size(), 12);
        let out1 = s.with_logic(LogicId::new(Family::Out1, false));
        assert_eq!(fault(check_native(&d, &out1, &sat)), FaultClause::RuleSet);
    }

    #[test]
    fn bot_outside_causal_logic() {
        let sat = SatEngine::new();
        let out1 = LogicId::new(Family::Out1, false);
        let s = IOSequent::new([], IOPair::bot(), out1);
        assert_eq!(fault(check_native(&NativeDerivation::bot(), &s, &sat)), FaultClause::RuleSet);
        check_native(&NativeDerivation::bot(), &s.causal(), &sat).unwrap();
    }

    #[test]
    fn clause_reporting() {
        let sat = SatEngine::new();
        let s = IOSequent::new([pair("a => x")], pair("a => x | y"), LogicId::new(Family::Out1, false));
        let good = NativeDerivation::premise(pair("a => x")).wo(f("x | y"));
        check_native(&good, &s, &sat).unwrap();

        let wrong_root = NativeDerivation::premise(pair("a => x"));
        assert_eq!(fault(check_native(&wrong_root, &s, &sat)), FaultClause::Root);

        let stray = NativeDerivation::premise(pair("b => x")).wo(f("x | y"));
        let s_b = s.with_goal(pair("b => x | y"));
        assert_eq!(fault(check_native(&stray, &s_b, &sat)), FaultClause::Premise);

        let bad_wo = NativeDerivation::premise(pair("a => x")).wo(f("y"));
        let s_y = s.with_goal(pair("a => y"));
        let err = check_native(&bad_wo, &s_y, &sat).unwrap_err();
        let fault = err.rejected().unwrap();
        assert_eq!(fault.clause, FaultClause::Inference);
        assert!(fault.path.is_empty());
    }

    #[test]
    fn ct_requires_syntactic_match() {
        let sat = SatEngine::new();
        let s = IOSequent::new(
            [pair("a => x"), pair("x & a => y")],
            pair("a => y"),
            LogicId::new(Family::Out3, false),
        );
        let d = NativeDerivation::premise(pair("a => x")).ct(NativeDerivation::premise(pair("x & a => y")));
        assert_eq!(fault(check_native(&d, &s, &sat)), FaultClause::Inference);
        let s = IOSequent::new([pair("a => x"), pair("a & x => y")], pair("a => y"), s.logic());
        let d = NativeDerivation::premise(pair("a => x")).ct(NativeDerivation::premise(pair("a & x => y")));
        check_native(&d, &s, &sat).unwrap();
        let s2 = s.with_logic(LogicId::new(Family::Out2, true));
        assert_eq!(fault(check_native(&d, &s2, &sat)), FaultClause::RuleSet);
    }

    #[test]
    fn json_shape() {
        let d = NativeDerivation::top().wo(f("a | !a"));
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"{"rule":"WO","pair":{"in":"T","out":"a | !a"},"children":[{"rule":"TOP","pair":{"in":"T","out":"T"},"children":[]}]}"#
        );
        assert_eq!(serde_json::from_str::<NativeDerivation>(&json).unwrap(), d);
    }
}
