//! CNF satisfiability and the classical entailment checks built on it.

mod cnf;
mod dimacs;
mod external;
mod solver;
mod tseitin;

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use cnf::{CnfInstance, Model, SatResult};
pub use dimacs::{export_dimacs, import_dimacs};
pub use solver::{solve, solve_with, SolverConfig};
pub(crate) use tseitin::TseitinBuilder;
pub use tseitin::{tseitin, tseitin_with_root};

use crate::error::Result;
use crate::formula::{Formula, Valuation};

/// Classical backend shared by every decision procedure. Cheap to clone and
/// safe to share across threads; each call owns its solver state.
#[derive(Clone, Debug, Default)]
pub struct SatEngine {
    config: SolverConfig,
    external: Option<PathBuf>,
}

impl SatEngine {
    pub fn new() -> SatEngine {
        SatEngine::default()
    }

    pub fn with_config(config: SolverConfig) -> SatEngine {
        SatEngine {
            config,
            external: None,
        }
    }

    /// Routes every solver call to the DIMACS solver at `path`.
    pub fn with_external(mut self, path: impl Into<PathBuf>) -> SatEngine {
        self.external = Some(path.into());
        self
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    pub fn solve(&self, cnf: &CnfInstance) -> Result<SatResult> {
        match &self.external {
            Some(path) => external::solve_external(path, cnf),
            None => Ok(solve_with(cnf, self.config)),
        }
    }

    /// A valuation of all atoms in `formulas` satisfying each of them, if any.
    pub fn satisfy(&self, formulas: &[&Formula]) -> Result<Option<Valuation>> {
        let mut builder = TseitinBuilder::new(formulas.iter().copied());
        for f in formulas {
            builder.assert(f);
        }
        let cnf = builder.finish();
        Ok(self.solve(&cnf)?.model().map(|m| m.valuation().clone()))
    }

    pub fn is_satisfiable(&self, f: &Formula) -> Result<bool> {
        Ok(self.satisfy(&[f])?.is_some())
    }

    pub fn is_valid(&self, f: &Formula) -> Result<bool> {
        Ok(!self.is_satisfiable(&!f.clone())?)
    }

    /// Whether the hypotheses jointly entail `conclusion`.
    pub fn entails<'a>(
        &self,
        hypotheses: impl IntoIterator<Item = &'a Formula>,
        conclusion: &Formula,
    ) -> Result<bool> {
        let negated = !conclusion.clone();
        let mut all: Vec<&Formula> = hypotheses.into_iter().collect();
        all.push(&negated);
        Ok(self.satisfy(&all)?.is_none())
    }

    /// Derivability of `Γ ⇒ Δ` in LK, read as `Γ ⊨ ⋁Δ`.
    pub fn lk_derivable(&self, sequent: &LkSequent) -> Result<bool> {
        self.entails(&sequent.antecedent, &sequent.succedent_disjunction())
    }
}

/// A classical two-sided sequent. An empty succedent stands for falsum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LkSequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl LkSequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> LkSequent {
        LkSequent {
            antecedent,
            succedent,
        }
    }

    pub fn succedent_disjunction(&self) -> Formula {
        Formula::disjunction(self.succedent.iter().cloned())
    }
}

impl fmt::Display for LkSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: &[Formula]| {
            items
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let (lhs, rhs) = (join(&self.antecedent), join(&self.succedent));
        match (lhs.is_empty(), rhs.is_empty()) {
            (true, true) => f.write_str("=>"),
            (true, false) => write!(f, "=> {rhs}"),
            (false, true) => write!(f, "{lhs} =>"),
            (false, false) => write!(f, "{lhs} => {rhs}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn validity_and_entailment() {
        let sat = SatEngine::new();
        assert!(sat.is_valid(&f("a | !a")).unwrap());
        assert!(!sat.is_valid(&f("a")).unwrap());
        assert!(sat.entails(&[f("x1"), f("x2")], &f("x1 & x2")).unwrap());
        assert!(!sat.entails(&[f("a | b")], &f("a")).unwrap());
        assert!(!sat.is_satisfiable(&f("a & !a")).unwrap());
    }

    #[test]
    fn empty_succedent_is_falsum() {
        let sat = SatEngine::new();
        let s = LkSequent::new(vec![f("a & !a")], vec![]);
        assert_eq!(s.to_string(), "a & !a =>");
        assert!(sat.lk_derivable(&s).unwrap());
        assert!(!sat.lk_derivable(&LkSequent::new(vec![f("a")], vec![])).unwrap());
        let s = LkSequent::new(vec![f("a")], vec![f("b"), f("a")]);
        assert_eq!(s.to_string(), "a => b, a");
        assert!(sat.lk_derivable(&s).unwrap());
    }

    #[test]
    fn constants_only() {
        let sat = SatEngine::new();
        assert!(sat.is_valid(&Formula::Top).unwrap());
        assert!(!sat.is_satisfiable(&Formula::Bot).unwrap());
        assert_eq!(sat.satisfy(&[&Formula::Top]).unwrap(), Some(Valuation::new()));
    }
}
