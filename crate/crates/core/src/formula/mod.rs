//! Propositional formulas over named atoms.
//!
//! Formulas are plain immutable trees. The same type carries both the
//! user-facing formulas of a theory and the world-labeled copies produced by
//! [`label`] for the SAT reduction; labeled atoms are written `x@l` and the
//! `@` separator is never accepted in user input.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) use parser::{parse_ast, Ast};

/// Separator between an atom name and its world label.
pub const LABEL_SEPARATOR: char = '@';

/// A propositional variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Creates a user atom. The name must match `[a-zA-Z_][a-zA-Z0-9_]*` and
    /// must not be one of the constant keywords `T` and `F`.
    pub fn new(name: &str) -> Result<Atom> {
        if is_plain_name(name) {
            Ok(Atom(Arc::from(name)))
        } else if name.contains(LABEL_SEPARATOR) {
            Err(Error::ReservedSeparator {
                name: name.to_owned(),
                offset: 0,
            })
        } else {
            Err(Error::InvalidAtom(name.to_owned()))
        }
    }

    /// Accepts both plain names and labeled names of the form `x@l`.
    pub fn from_raw(name: &str) -> Result<Atom> {
        match name.split_once(LABEL_SEPARATOR) {
            None => Atom::new(name),
            Some((base, world))
                if is_plain_name(base)
                    && !world.is_empty()
                    && world.bytes().all(|b| b.is_ascii_digit()) =>
            {
                Ok(Atom(Arc::from(name)))
            }
            Some(_) => Err(Error::InvalidAtom(name.to_owned())),
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_labeled(&self) -> bool {
        self.0.contains(LABEL_SEPARATOR)
    }

    /// The copy of this atom living in world `world`.
    pub fn labeled(&self, world: usize) -> Result<Atom> {
        if self.is_labeled() {
            return Err(Error::AlreadyLabeled(self.0.to_string()));
        }
        Ok(Atom(Arc::from(format!("{}{LABEL_SEPARATOR}{world}", self.0))))
    }

    /// Splits a labeled atom into its base atom and world index.
    pub fn unlabel(&self) -> Option<(Atom, usize)> {
        let (base, world) = self.0.split_once(LABEL_SEPARATOR)?;
        Some((Atom(Arc::from(base)), world.parse().ok()?))
    }
}

fn is_plain_name(name: &str) -> bool {
    let mut bytes = name.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_') && name != "T" && name != "F"
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Atom::new(&name).map_err(serde::de::Error::custom)
    }
}

/// A propositional formula.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Convenience constructor for an atom; panics on an invalid name.
    pub fn var(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("invalid atom name"))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    /// Left-nested conjunction; the empty conjunction is `T`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `F`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot => false,
            Formula::Atom(_) => true,
            Formula::Not(f) => f.has_atoms(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.has_atoms() || r.has_atoms()
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Connective nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Classical truth value under `v`, which must assign every atom of the
    /// formula.
    pub fn evaluate(&self, v: &Valuation) -> Result<bool> {
        self.eval_with(&|a| v.0.get(a).copied())
            .map_err(|a| Error::UnassignedAtom(a.to_string()))
    }

    pub(crate) fn eval_with<'a, F>(&'a self, lookup: &F) -> Result<bool, &'a Atom>
    where
        F: Fn(&Atom) -> Option<bool>,
    {
        Ok(match self {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(a) => return lookup(a).ok_or(a),
            Formula::Not(f) => !f.eval_with(lookup)?,
            Formula::And(l, r) => l.eval_with(lookup)? && r.eval_with(lookup)?,
            Formula::Or(l, r) => l.eval_with(lookup)? || r.eval_with(lookup)?,
            Formula::Implies(l, r) => !l.eval_with(lookup)? || r.eval_with(lookup)?,
        })
    }

    pub(crate) fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        // Binding strength: -> 1, | 2, & 3, ! 4. `->` is right associative,
        // `&` and `|` left associative.
        let (prec, open) = match self {
            Formula::Implies(..) => (1, ctx > 1),
            Formula::Or(..) => (2, ctx > 2),
            Formula::And(..) => (3, ctx > 3),
            _ => (4, false),
        };
        if open {
            f.write_str("(")?;
        }
        match self {
            Formula::Top => f.write_str("T")?,
            Formula::Bot => f.write_str("F")?,
            Formula::Atom(a) => f.write_str(a.name())?,
            Formula::Not(inner) => {
                f.write_str("!")?;
                inner.fmt_prec(f, 4)?;
            }
            Formula::And(l, r) => {
                l.fmt_prec(f, prec)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, prec)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            Formula::Implies(l, r) => {
                l.fmt_prec(f, prec + 1)?;
                f.write_str(" -> ")?;
                r.fmt_prec(f, prec)?;
            }
        }
        if open {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl std::ops::Not for Formula {
    type Output = Formula;

    fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses a formula in the ASCII grammar: `T`, `F`, atoms, `!`, `&`, `|` and
/// right-associative `->`, in decreasing order of binding strength.
pub fn parse(text: &str) -> Result<Formula> {
    parse_ast(text, false)?.into_formula()
}

/// Replaces every atom `x` of `f` by its copy `x@world`.
pub fn label(f: &Formula, world: usize) -> Result<Formula> {
    Ok(match f {
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Atom(a) => Formula::Atom(a.labeled(world)?),
        Formula::Not(g) => !label(g, world)?,
        Formula::And(l, r) => label(l, world)?.and(label(r, world)?),
        Formula::Or(l, r) => label(l, world)?.or(label(r, world)?),
        Formula::Implies(l, r) => label(l, world)?.implies(label(r, world)?),
    })
}

/// A truth assignment, total on some declared set of atoms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(BTreeMap<Atom, bool>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    /// The valuation over `universe` that makes exactly `true_atoms` true.
    pub fn from_true<'a>(
        universe: impl IntoIterator<Item = &'a Atom>,
        true_atoms: &BTreeSet<Atom>,
    ) -> Valuation {
        Valuation(
            universe
                .into_iter()
                .map(|a| (a.clone(), true_atoms.contains(a)))
                .collect(),
        )
    }

    pub fn insert(&mut self, atom: Atom, value: bool) {
        self.0.insert(atom, value);
    }

    pub fn get(&self, atom: &Atom) -> Result<bool> {
        self.0
            .get(atom)
            .copied()
            .ok_or_else(|| Error::UnassignedAtom(atom.to_string()))
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains_key(atom)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, bool)> {
        self.0.iter().map(|(a, v)| (a, *v))
    }

    pub fn domain(&self) -> impl Iterator<Item = &Atom> {
        self.0.keys()
    }

    /// Renames every atom `x` to `x@world`.
    pub fn lift(&self, world: usize) -> Result<Valuation> {
        self.0
            .iter()
            .map(|(a, v)| Ok((a.labeled(world)?, *v)))
            .collect::<Result<_>>()
            .map(Valuation)
    }

    /// All `2^n` valuations over `atoms`, in binary counting order with the
    /// first atom as the least significant bit.
    pub fn enumerate(atoms: &[Atom]) -> Vec<Valuation> {
        assert!(atoms.len() < 24, "refusing to enumerate 2^{} valuations", atoms.len());
        (0u32..1 << atoms.len())
            .map(|bits| {
                Valuation(
                    atoms
                        .iter()
                        .enumerate()
                        .map(|(i, a)| (a.clone(), bits >> i & 1 == 1))
                        .collect(),
                )
            })
            .collect()
    }
}

impl FromIterator<(Atom, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Atom, bool)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}:{}", if *v { 'T' } else { 'F' })?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(pairs: &[(&str, bool)]) -> Valuation {
        pairs
            .iter()
            .map(|(n, b)| (Atom::new(n).unwrap(), *b))
            .collect()
    }

    #[test]
    fn parses_constants_and_connectives() {
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(parse("F").unwrap(), Formula::Bot);
        let a = Formula::var("a");
        assert_eq!(parse("a & !a").unwrap(), a.clone().and(!a.clone()));
        assert_eq!(
            parse("(a | b) -> x").unwrap(),
            a.or(Formula::var("b")).implies(Formula::var("x"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (Formula::var("a"), Formula::var("b"), Formula::var("c"));
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            a.clone().implies(b.clone().implies(c.clone()))
        );
        assert_eq!(
            parse("a & b & c").unwrap(),
            a.clone().and(b.clone()).and(c.clone())
        );
        assert_eq!(
            parse("!a | b & c").unwrap(),
            (!a.clone()).or(b.clone().and(c.clone()))
        );
        assert_eq!(
            parse("a | b -> c & a").unwrap(),
            a.clone().or(b).implies(c.and(a))
        );
    }

    #[test]
    fn printing_round_trips_with_minimal_parens() {
        for text in [
            "a & (b | c)",
            "(a -> b) -> c",
            "a -> b -> c",
            "!(a & b)",
            "a & (b & c)",
            "a | b | c",
            "!!T",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("a & ") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse("a ) b") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("x@1 & y") {
            Err(Error::ReservedSeparator { name, offset }) => {
                assert_eq!(name, "x@1");
                assert_eq!(offset, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("a $ b").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn evaluation() {
        assert!(Formula::Top.evaluate(&Valuation::new()).unwrap());
        let f = parse("a -> b").unwrap();
        assert!(!f.evaluate(&v(&[("a", true), ("b", false)])).unwrap());
        let g = parse("(a | b) & !a").unwrap();
        assert!(g.evaluate(&v(&[("a", false), ("b", true)])).unwrap());
        assert!(matches!(
            g.evaluate(&v(&[("a", false)])),
            Err(Error::UnassignedAtom(name)) if name == "b"
        ));
    }

    #[test]
    fn labeling() {
        let f = parse("a & b").unwrap();
        assert_eq!(label(&f, 0).unwrap().to_string(), "a@0 & b@0");
        assert_eq!(label(&Formula::Top, 3).unwrap(), Formula::Top);
        let g = parse("a -> b").unwrap();
        let one = label(&g, 1).unwrap().atoms();
        let two = label(&g, 2).unwrap().atoms();
        assert!(one.is_disjoint(&two));
        let again = label(&label(&g, 1).unwrap(), 2);
        assert!(matches!(again, Err(Error::AlreadyLabeled(_))));
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("x_1").is_ok());
        assert!(Atom::new("_y").is_ok());
        assert!(Atom::new("1x").is_err());
        assert!(Atom::new("T").is_err());
        assert!(Atom::new("").is_err());
        assert!(matches!(Atom::new("x@2"), Err(Error::ReservedSeparator { .. })));
        let l = Atom::from_raw("x@12").unwrap();
        assert_eq!(l.unlabel(), Some((Atom::new("x").unwrap(), 12)));
        assert!(Atom::from_raw("x@").is_err());
        assert!(Atom::from_raw("x@1@2").is_err());
    }

    #[test]
    fn enumerate_counts() {
        let atoms: Vec<Atom> = ["a", "b", "c"].iter().map(|n| Atom::new(n).unwrap()).collect();
        let all = Valuation::enumerate(&atoms);
        assert_eq!(all.len(), 8);
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 8);
    }
}
