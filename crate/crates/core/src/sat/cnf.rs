use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{Atom, Valuation};

/// A clause set over variables `1..=num_vars`, with DIMACS-style signed
/// literals and a partial naming of variables by atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
    atom_map: BTreeMap<Atom, u32>,
}

impl CnfInstance {
    /// Validates and normalizes a clause set: duplicate literals are merged
    /// and tautological clauses are dropped.
    pub fn new(
        num_vars: u32,
        clauses: Vec<Vec<i32>>,
        atom_map: BTreeMap<Atom, u32>,
    ) -> Result<CnfInstance> {
        let mut kept = Vec::with_capacity(clauses.len());
        for clause in clauses {
            if clause.is_empty() {
                return Err(Error::EmptyClause);
            }
            let mut lits: Vec<i32> = Vec::with_capacity(clause.len());
            let mut tautology = false;
            for lit in clause {
                if lit == 0 || lit.unsigned_abs() > num_vars {
                    return Err(Error::LiteralOutOfRange {
                        literal: lit as i64,
                        num_vars,
                    });
                }
                if lits.contains(&-lit) {
                    tautology = true;
                }
                if !lits.contains(&lit) {
                    lits.push(lit);
                }
            }
            if !tautology {
                kept.push(lits);
            }
        }
        let mut seen = BTreeSet::new();
        for (atom, &var) in &atom_map {
            if var == 0 || var > num_vars {
                return Err(Error::LiteralOutOfRange {
                    literal: var as i64,
                    num_vars,
                });
            }
            if !seen.insert(var) {
                return Err(Error::InvalidAtom(format!(
                    "{atom}: variable {var} is named twice"
                )));
            }
        }
        Ok(CnfInstance {
            num_vars,
            clauses: kept,
            atom_map,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn atom_map(&self) -> &BTreeMap<Atom, u32> {
        &self.atom_map
    }

    pub fn var_of(&self, atom: &Atom) -> Option<u32> {
        self.atom_map.get(atom).copied()
    }

    /// Checks every clause against a full assignment, where `assignment[v-1]`
    /// is the value of variable `v`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars as usize
            && self.clauses.iter().all(|c| {
                c.iter()
                    .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
            })
    }

    /// The named part of a full assignment.
    pub fn named_valuation(&self, assignment: &[bool]) -> Valuation {
        self.atom_map
            .iter()
            .map(|(a, &v)| (a.clone(), assignment[v as usize - 1]))
            .collect()
    }
}

/// A satisfying assignment together with its restriction to named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    assignment: Vec<bool>,
    valuation: Valuation,
}

impl Model {
    pub(crate) fn new(cnf: &CnfInstance, assignment: Vec<bool>) -> Model {
        let valuation = cnf.named_valuation(&assignment);
        Model {
            assignment,
            valuation,
        }
    }

    /// Value of DIMACS variable `var` (1-based).
    pub fn value(&self, var: u32) -> bool {
        self.assignment[var as usize - 1]
    }

    pub fn assignment(&self) -> &[bool] {
        &self.assignment
    }

    /// The model restricted to the instance's atom map.
    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Model),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tautologies_and_duplicates_are_normalized() {
        let cnf = CnfInstance::new(3, vec![vec![1, -1, 2], vec![2, 2, -3]], BTreeMap::new()).unwrap();
        assert_eq!(cnf.clauses(), &[vec![2, -3]]);
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            CnfInstance::new(2, vec![vec![3]], BTreeMap::new()),
            Err(Error::LiteralOutOfRange { literal: 3, .. })
        ));
        assert!(CnfInstance::new(2, vec![vec![]], BTreeMap::new()).is_err());
        let mut map = BTreeMap::new();
        map.insert(Atom::new("a").unwrap(), 1);
        map.insert(Atom::new("b").unwrap(), 1);
        assert!(CnfInstance::new(2, vec![], map).is_err());
    }

    #[test]
    fn clause_check() {
        let cnf = CnfInstance::new(2, vec![vec![1, -2]], BTreeMap::new()).unwrap();
        assert!(cnf.satisfied_by(&[true, true]));
        assert!(cnf.satisfied_by(&[false, false]));
        assert!(!cnf.satisfied_by(&[false, true]));
    }
}
