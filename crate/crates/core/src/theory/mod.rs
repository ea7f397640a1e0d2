//! Logics, I/O pairs and sequents, theory files, and native derivations.

mod native;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::{parse, Atom, Formula};

pub use native::{check_native, FaultClause, NativeDerivation, NativeFault, NativeRule};

/// The four output operations, from simple-minded (1) to basic reusable (4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Out1,
    Out2,
    Out3,
    Out4,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Out1, Family::Out2, Family::Out3, Family::Out4];

    pub fn number(self) -> u8 {
        match self {
            Family::Out1 => 1,
            Family::Out2 => 2,
            Family::Out3 => 3,
            Family::Out4 => 4,
        }
    }

    /// Families 2 and 4 may combine inputs by disjunction (rule OR).
    pub fn has_or(self) -> bool {
        matches!(self, Family::Out2 | Family::Out4)
    }

    /// Families 3 and 4 may feed outputs back as inputs (rule CT).
    pub fn reusable(self) -> bool {
        matches!(self, Family::Out3 | Family::Out4)
    }
}

/// Derivation rules of the native presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Top,
    Bot,
    Wo,
    Si,
    And,
    Or,
    Ct,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::Top,
        Rule::Bot,
        Rule::Wo,
        Rule::Si,
        Rule::And,
        Rule::Or,
        Rule::Ct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Top => "TOP",
            Rule::Bot => "BOT",
            Rule::Wo => "WO",
            Rule::Si => "SI",
            Rule::And => "AND",
            Rule::Or => "OR",
            Rule::Ct => "CT",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the eight logics: an output family, optionally with the axiom
/// `(F, F)` (the causal variant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogicId {
    pub family: Family,
    pub causal: bool,
}

impl LogicId {
    pub const ALL: [LogicId; 8] = [
        LogicId::new(Family::Out1, false),
        LogicId::new(Family::Out2, false),
        LogicId::new(Family::Out3, false),
        LogicId::new(Family::Out4, false),
        LogicId::new(Family::Out1, true),
        LogicId::new(Family::Out2, true),
        LogicId::new(Family::Out3, true),
        LogicId::new(Family::Out4, true),
    ];

    pub const fn new(family: Family, causal: bool) -> LogicId {
        LogicId { family, causal }
    }

    pub fn with_causal(self, causal: bool) -> LogicId {
        LogicId { causal, ..self }
    }

    pub fn has_rule(self, rule: Rule) -> bool {
        match rule {
            Rule::Top | Rule::Wo | Rule::Si | Rule::And => true,
            Rule::Bot => self.causal,
            Rule::Or => self.family.has_or(),
            Rule::Ct => self.family.reusable(),
        }
    }

    pub fn rule_set(self) -> BTreeSet<Rule> {
        Rule::ALL.into_iter().filter(|&r| self.has_rule(r)).collect()
    }

    /// Whether every rule of `other` is also a rule of `self`.
    pub fn stronger_than(self, other: LogicId) -> bool {
        Rule::ALL
            .into_iter()
            .all(|r| !other.has_rule(r) || self.has_rule(r))
    }

    /// Short code such as `out3c`.
    pub fn code(self) -> String {
        format!(
            "out{}{}",
            self.family.number(),
            if self.causal { "c" } else { "" }
        )
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl FromStr for LogicId {
    type Err = Error;

    fn from_str(s: &str) -> Result<LogicId> {
        LogicId::ALL
            .into_iter()
            .find(|l| l.code() == s)
            .ok_or_else(|| Error::UnknownLogic(s.to_owned()))
    }
}

impl Serialize for LogicId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.code())
    }
}

impl<'de> Deserialize<'de> for LogicId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A conditional `(A, X)`: under input `A`, output `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IOPair {
    #[serde(rename = "in")]
    pub input: Formula,
    #[serde(rename = "out")]
    pub output: Formula,
}

impl IOPair {
    pub fn new(input: Formula, output: Formula) -> IOPair {
        IOPair { input, output }
    }

    pub fn top() -> IOPair {
        IOPair::new(Formula::Top, Formula::Top)
    }

    pub fn bot() -> IOPair {
        IOPair::new(Formula::Bot, Formula::Bot)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.input.atoms();
        self.output.collect_atoms(&mut out);
        out
    }
}

impl fmt::Display for IOPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.input, self.output)
    }
}

impl FromStr for IOPair {
    type Err = Error;

    /// Reads `A => X`.
    fn from_str(s: &str) -> Result<IOPair> {
        let Some((lhs, rhs)) = s.split_once("=>") else {
            return Err(Error::Syntax {
                offset: s.len(),
                message: "expected a pair of the form \"A => X\"".into(),
            });
        };
        let input = parse(lhs)?;
        let output = parse(rhs).map_err(|e| match e {
            Error::Syntax { offset, message } => Error::Syntax {
                offset: offset + lhs.len() + 2,
                message,
            },
            other => other,
        })?;
        Ok(IOPair::new(input, output))
    }
}

/// An entailment query `G |- (B, Y)` in a fixed logic. Premises form a set:
/// duplicates are dropped, first occurrence wins the position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IOSequent {
    #[serde(rename = "pairs")]
    premises: Vec<IOPair>,
    goal: IOPair,
    logic: LogicId,
}

impl IOSequent {
    pub fn new(premises: impl IntoIterator<Item = IOPair>, goal: IOPair, logic: LogicId) -> IOSequent {
        let mut unique: Vec<IOPair> = Vec::new();
        for p in premises {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        IOSequent {
            premises: unique,
            goal,
            logic,
        }
    }

    pub fn premises(&self) -> &[IOPair] {
        &self.premises
    }

    pub fn goal(&self) -> &IOPair {
        &self.goal
    }

    pub fn logic(&self) -> LogicId {
        self.logic
    }

    pub fn with_logic(&self, logic: LogicId) -> IOSequent {
        IOSequent {
            logic,
            ..self.clone()
        }
    }

    pub fn with_goal(&self, goal: IOPair) -> IOSequent {
        IOSequent {
            goal,
            ..self.clone()
        }
    }

    /// The same query in the causal variant of its family.
    pub fn causal(&self) -> IOSequent {
        self.with_logic(self.logic.with_causal(true))
    }

    pub fn outputs(&self) -> impl Iterator<Item = &Formula> {
        self.premises.iter().map(|p| &p.output)
    }

    /// The atoms occurring anywhere in the query.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.goal.atoms();
        for p in &self.premises {
            p.input.collect_atoms(&mut out);
            p.output.collect_atoms(&mut out);
        }
        out
    }

    pub fn contains_premise(&self, pair: &IOPair) -> bool {
        self.premises.contains(pair)
    }

    /// Equality up to the order of premises.
    pub fn same_as(&self, other: &IOSequent) -> bool {
        self.logic == other.logic
            && self.goal == other.goal
            && self.premises.len() == other.premises.len()
            && self.premises.iter().all(|p| other.premises.contains(p))
    }

    /// The query with premise `index` removed.
    pub fn without(&self, index: usize) -> IOSequent {
        let mut premises = self.premises.clone();
        premises.remove(index);
        IOSequent {
            premises,
            ..self.clone()
        }
    }
}

impl fmt::Display for IOSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.premises.iter().map(|p| format!("({p})")).collect();
        write!(
            f,
            "{} |-{} {}",
            pairs.join(", "),
            self.logic,
            format_args!("({})", self.goal)
        )
    }
}

impl<'de> Deserialize<'de> for IOSequent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            pairs: Vec<IOPair>,
            goal: IOPair,
            logic: LogicId,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(IOSequent::new(raw.pairs, raw.goal, raw.logic))
    }
}

/// Parses a theory file: one `A => X` pair per line, `#` starts a comment.
pub fn parse_theory(text: &str) -> Result<Vec<IOPair>> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let pair: IOPair = line.parse().map_err(|e: Error| Error::Theory {
            line: idx + 1,
            message: e.to_string(),
        })?;
        pairs.push(pair);
    }
    Ok(pairs)
}

/// The JSON form of a theory; goal and logic may instead come from the
/// command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryJson {
    pub pairs: Vec<IOPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<IOPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<LogicId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_sets() {
        let l = |s: &str| s.parse::<LogicId>().unwrap();
        assert_eq!(
            l("out1").rule_set(),
            BTreeSet::from([Rule::Top, Rule::Wo, Rule::Si, Rule::And])
        );
        assert!(l("out2").has_rule(Rule::Or) && !l("out2").has_rule(Rule::Ct));
        assert!(l("out3").has_rule(Rule::Ct) && !l("out3").has_rule(Rule::Or));
        assert_eq!(l("out4c").rule_set().len(), 7);
        assert!(!l("out4").has_rule(Rule::Bot));
    }

    #[test]
    fn strength_order() {
        let l = |s: &str| s.parse::<LogicId>().unwrap();
        for other in LogicId::ALL {
            assert!(l("out4c").stronger_than(other));
            assert!(other.stronger_than(l("out1")));
        }
        assert!(!l("out2").stronger_than(l("out3")));
        assert!(!l("out3").stronger_than(l("out2")));
        for k in LogicId::ALL.into_iter().filter(|l| !l.causal) {
            assert!(k.with_causal(true).stronger_than(k));
            assert!(!k.stronger_than(k.with_causal(true)));
        }
    }

    #[test]
    fn logic_codes() {
        for l in LogicId::ALL {
            assert_eq!(l.code().parse::<LogicId>().unwrap(), l);
        }
        assert!(matches!("out5".parse::<LogicId>(), Err(Error::UnknownLogic(_))));
    }

    #[test]
    fn theory_file() {
        let text = "# norms\na => x\n\nb & c => !y  # trailing\n";
        let pairs = parse_theory(text).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[1].to_string(), "b & c => !y");
        let err = parse_theory("a => x\na -> x\n").unwrap_err();
        assert!(matches!(err, Error::Theory { line: 2, .. }));
        let err = parse_theory("a => x &\n").unwrap_err();
        assert!(matches!(err, Error::Theory { line: 1, .. }));
    }

    #[test]
    fn premises_are_a_set() {
        let p: IOPair = "a => x".parse().unwrap();
        let q: IOPair = "b => x".parse().unwrap();
        let s = IOSequent::new(
            [p.clone(), q.clone(), p.clone()],
            p.clone(),
            LogicId::new(Family::Out1, false),
        );
        assert_eq!(s.premises(), &[p.clone(), q.clone()]);
        let t = IOSequent::new([q, p.clone()], p, s.logic());
        assert!(s.same_as(&t));
        assert_ne!(s, t);
    }

    #[test]
    fn json_forms() {
        let json = r#"{"pairs":[{"in":"a","out":"x"}],"goal":{"in":"a","out":"x | y"},"logic":"out3c"}"#;
        let s: IOSequent = serde_json::from_str(json).unwrap();
        assert_eq!(s.logic().code(), "out3c");
        assert_eq!(serde_json::to_string(&s).unwrap(), json);
        let t: TheoryJson = serde_json::from_str(r#"{"pairs":[]}"#).unwrap();
        assert!(t.goal.is_none() && t.logic.is_none());
    }
}
