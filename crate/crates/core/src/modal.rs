//! Shallow modal embeddings of I/O queries and the Kripke models obtained
//! from I/O models.
//!
//! A pair `(A, X)` becomes `box(A) -> X` for families 1 and 2 and
//! `box(A) -> X & box(X)` for families 3 and 4. The Kripke model of `(In, out)`
//! has `out` seeing every input world and every input world seeing itself.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{parse_ast, Ast, Formula, Valuation};
use crate::semantics::IOModel;
use crate::theory::{IOPair, IOSequent, LogicId};

/// A boolean combination of propositional formulas and boxed propositional
/// formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShallowModalFormula {
    Prop(Formula),
    Box(Formula),
    Not(Box<ShallowModalFormula>),
    And(Box<ShallowModalFormula>, Box<ShallowModalFormula>),
    Or(Box<ShallowModalFormula>, Box<ShallowModalFormula>),
    Implies(Box<ShallowModalFormula>, Box<ShallowModalFormula>),
}

impl ShallowModalFormula {
    pub fn and(self, rhs: ShallowModalFormula) -> ShallowModalFormula {
        ShallowModalFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: ShallowModalFormula) -> ShallowModalFormula {
        ShallowModalFormula::Implies(Box::new(self), Box::new(rhs))
    }

    fn from_ast(ast: Ast) -> Result<ShallowModalFormula> {
        use ShallowModalFormula as M;
        if !ast.has_box() {
            return Ok(M::Prop(ast.into_formula()?));
        }
        Ok(match ast {
            Ast::Box(inner, _) => M::Box(inner.into_formula()?),
            Ast::Not(f) => M::Not(Box::new(M::from_ast(*f)?)),
            Ast::And(l, r) => M::And(Box::new(M::from_ast(*l)?), Box::new(M::from_ast(*r)?)),
            Ast::Or(l, r) => M::Or(Box::new(M::from_ast(*l)?), Box::new(M::from_ast(*r)?)),
            Ast::Implies(l, r) => M::Implies(Box::new(M::from_ast(*l)?), Box::new(M::from_ast(*r)?)),
            Ast::Top | Ast::Bot | Ast::Atom(_) => unreachable!("box-free leaf"),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            ShallowModalFormula::Prop(f) => match f {
                Formula::Implies(..) => 1,
                Formula::Or(..) => 2,
                Formula::And(..) => 3,
                _ => 4,
            },
            ShallowModalFormula::Implies(..) => 1,
            ShallowModalFormula::Or(..) => 2,
            ShallowModalFormula::And(..) => 3,
            ShallowModalFormula::Box(_) | ShallowModalFormula::Not(_) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        use ShallowModalFormula as M;
        let prec = self.precedence();
        let open = prec < ctx;
        if open {
            f.write_str("(")?;
        }
        match self {
            M::Prop(p) => p.fmt_prec(f, 0)?,
            M::Box(p) => write!(f, "box({p})")?,
            M::Not(inner) => {
                f.write_str("!")?;
                inner.fmt_prec(f, 4)?;
            }
            M::And(l, r) => {
                l.fmt_prec(f, 3)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, 4)?;
            }
            M::Or(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, 3)?;
            }
            M::Implies(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str(" -> ")?;
                r.fmt_prec(f, 1)?;
            }
        }
        if open {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Rendering in the QMLTP flavour of TPTP syntax.
    pub fn to_tptp(&self) -> String {
        use ShallowModalFormula as M;
        match self {
            M::Prop(p) => prop_tptp(p),
            M::Box(p) => format!("(#box:{})", prop_tptp(p)),
            M::Not(g) => format!("~ {}", g.to_tptp()),
            M::And(l, r) => format!("({} & {})", l.to_tptp(), r.to_tptp()),
            M::Or(l, r) => format!("({} | {})", l.to_tptp(), r.to_tptp()),
            M::Implies(l, r) => format!("({} => {})", l.to_tptp(), r.to_tptp()),
        }
    }
}

fn prop_tptp(f: &Formula) -> String {
    match f {
        Formula::Top => "$true".into(),
        Formula::Bot => "$false".into(),
        Formula::Atom(a) => a.name().to_owned(),
        Formula::Not(g) => format!("~ {}", prop_tptp(g)),
        Formula::And(l, r) => format!("({} & {})", prop_tptp(l), prop_tptp(r)),
        Formula::Or(l, r) => format!("({} | {})", prop_tptp(l), prop_tptp(r)),
        Formula::Implies(l, r) => format!("({} => {})", prop_tptp(l), prop_tptp(r)),
    }
}

impl fmt::Display for ShallowModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl FromStr for ShallowModalFormula {
    type Err = Error;

    /// The formula grammar with `box(...)` around box-free formulas.
    fn from_str(s: &str) -> Result<ShallowModalFormula> {
        ShallowModalFormula::from_ast(parse_ast(s, true)?)
    }
}

/// The four modal logics targeted by the embeddings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetLogic {
    K,
    KD,
    KF,
    KDF,
}

impl TargetLogic {
    /// Seriality (axiom D) for causal logics, functionality (axiom F) for
    /// families 2 and 4.
    pub fn of(logic: LogicId) -> TargetLogic {
        match (logic.causal, logic.family.has_or()) {
            (false, false) => TargetLogic::K,
            (true, false) => TargetLogic::KD,
            (false, true) => TargetLogic::KF,
            (true, true) => TargetLogic::KDF,
        }
    }

    pub fn serial(self) -> bool {
        matches!(self, TargetLogic::KD | TargetLogic::KDF)
    }

    pub fn functional(self) -> bool {
        matches!(self, TargetLogic::KF | TargetLogic::KDF)
    }
}

impl fmt::Display for TargetLogic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetLogic::K => "K",
            TargetLogic::KD => "KD",
            TargetLogic::KF => "K+F",
            TargetLogic::KDF => "KD+F",
        })
    }
}

impl FromStr for TargetLogic {
    type Err = Error;

    fn from_str(s: &str) -> Result<TargetLogic> {
        Ok(match s {
            "K" => TargetLogic::K,
            "KD" => TargetLogic::KD,
            "K+F" => TargetLogic::KF,
            "KD+F" => TargetLogic::KDF,
            other => return Err(Error::UnknownLogic(other.to_owned())),
        })
    }
}

/// An embedded query: the hypotheses entail the goal in `target` iff the
/// original query is derivable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalProblem {
    pub hypotheses: Vec<ShallowModalFormula>,
    pub goal: ShallowModalFormula,
    pub target: TargetLogic,
}

fn embed_pair(p: &IOPair, reusable: bool) -> ShallowModalFormula {
    let antecedent = ShallowModalFormula::Box(p.input.clone());
    let mut consequent = ShallowModalFormula::Prop(p.output.clone());
    if reusable {
        consequent = consequent.and(ShallowModalFormula::Box(p.output.clone()));
    }
    antecedent.implies(consequent)
}

pub fn embed(s: &IOSequent) -> ModalProblem {
    let reusable = s.logic().family.reusable();
    ModalProblem {
        hypotheses: s.premises().iter().map(|p| embed_pair(p, reusable)).collect(),
        goal: embed_pair(s.goal(), reusable),
        target: TargetLogic::of(s.logic()),
    }
}

impl ModalProblem {
    /// Line-based exchange format: a `logic:` line, one `hyp:` line per
    /// hypothesis, and a `goal:` line.
    pub fn to_exchange(&self) -> String {
        let mut out = format!("logic: {}\n", self.target);
        for h in &self.hypotheses {
            out.push_str(&format!("hyp: {h}\n"));
        }
        out.push_str(&format!("goal: {}\n", self.goal));
        out
    }

    pub fn from_exchange(text: &str) -> Result<ModalProblem> {
        let mut target = None;
        let mut hypotheses = Vec::new();
        let mut goal = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Theory {
                line: idx + 1,
                message,
            };
            let Some((key, value)) = line.split_once(':') else {
                return Err(err(format!("expected \"key: value\", found {line:?}")));
            };
            let value = value.trim();
            match key.trim() {
                "logic" => target = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                "hyp" => hypotheses.push(value.parse().map_err(|e: Error| err(e.to_string()))?),
                "goal" => goal = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| Error::Theory {
            line: 0,
            message: format!("missing {what} line"),
        };
        Ok(ModalProblem {
            hypotheses,
            goal: goal.ok_or_else(|| missing("goal"))?,
            target: target.ok_or_else(|| missing("logic"))?,
        })
    }

    /// QMLTP-style problem file.
    pub fn to_tptp(&self) -> String {
        let mut out = format!("% logic: {}\n", self.target);
        for (k, h) in self.hypotheses.iter().enumerate() {
            out.push_str(&format!("qmf(hyp{}, axiom, {}).\n", k + 1, h.to_tptp()));
        }
        out.push_str(&format!("qmf(goal, conjecture, {}).\n", self.goal.to_tptp()));
        out
    }
}

/// A finite Kripke model; worlds are indices into `worlds`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<Valuation>,
    pub successors: Vec<Vec<usize>>,
    pub distinguished: usize,
}

impl KripkeModel {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(w, succ)| succ.iter().map(move |&v| (w, v)))
            .collect()
    }
}

/// World 0 is `out`; worlds `1..` are the input worlds in set order.
pub fn kripke_from_io(m: &IOModel) -> KripkeModel {
    let mut worlds = vec![m.output().clone()];
    worlds.extend(m.inputs().iter().cloned());
    let n = worlds.len();
    let mut successors = vec![(1..n).collect::<Vec<_>>()];
    successors.extend((1..n).map(|w| vec![w]));
    KripkeModel {
        worlds,
        successors,
        distinguished: 0,
    }
}

/// Truth of `f` at world `at`.
pub fn eval_shallow(f: &ShallowModalFormula, k: &KripkeModel, at: usize) -> Result<bool> {
    use ShallowModalFormula as M;
    Ok(match f {
        M::Prop(p) => p.evaluate(&k.worlds[at])?,
        M::Box(p) => {
            for &w in &k.successors[at] {
                if !p.evaluate(&k.worlds[w])? {
                    return Ok(false);
                }
            }
            true
        }
        M::Not(g) => !eval_shallow(g, k, at)?,
        M::And(l, r) => eval_shallow(l, k, at)? && eval_shallow(r, k, at)?,
        M::Or(l, r) => eval_shallow(l, k, at)? || eval_shallow(r, k, at)?,
        M::Implies(l, r) => !eval_shallow(l, k, at)? || eval_shallow(r, k, at)?,
    })
}

/// Axiom D asks for at least one successor everywhere, axiom F for at most
/// one.
pub fn frame_check(k: &KripkeModel, t: TargetLogic) -> bool {
    k.successors.iter().all(|succ| {
        (!t.serial() || !succ.is_empty()) && (!t.functional() || succ.len() <= 1)
    })
}

/// Whether `k` refutes the problem at its distinguished world: the frame fits
/// the target logic, every hypothesis holds there and the goal fails.
pub fn refutes(problem: &ModalProblem, k: &KripkeModel) -> Result<bool> {
    if !frame_check(k, problem.target) {
        return Ok(false);
    }
    for h in &problem.hypotheses {
        if !eval_shallow(h, k, k.distinguished)? {
            return Ok(false);
        }
    }
    Ok(!eval_shallow(&problem.goal, k, k.distinguished)?)
}

/// Searches the models of the shape produced by [`kripke_from_io`] over the
/// atoms of `s` for one refuting the embedding of `s`: up to `|G| + 1` input
/// worlds for families 1 and 3, at most one for families 2 and 4.
pub fn search_kripke_countermodel(s: &IOSequent) -> Result<Option<KripkeModel>> {
    let universe: Vec<_> = s.atoms().into_iter().collect();
    if universe.len() > crate::semantics::SEARCH_ATOM_CAP {
        return Err(Error::CapExceeded {
            procedure: "Kripke model search (atoms)",
            cap: crate::semantics::SEARCH_ATOM_CAP,
            actual: universe.len(),
        });
    }
    let problem = embed(s);
    let valuations = Valuation::enumerate(&universe);
    let max_inputs = if s.logic().family.has_or() {
        1
    } else {
        (s.premises().len() + 1).min(valuations.len())
    };
    for mask in 0..1u64 << valuations.len() {
        if mask.count_ones() as usize > max_inputs {
            continue;
        }
        let inputs: Vec<Valuation> = (0..valuations.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| valuations[k].clone())
            .collect();
        for out in &valuations {
            let m = IOModel::new(inputs.iter().cloned(), out.clone())?;
            let k = kripke_from_io(&m);
            if refutes(&problem, &k)? {
                return Ok(Some(k));
            }
        }
    }
    Ok(None)
}
