use std::collections::{BTreeMap, BTreeSet};

use super::cnf::CnfInstance;
use crate::formula::{Atom, Formula};

/// Incremental Tseitin encoder. Atoms are numbered first, in name order, so
/// that the solver's lowest-index-first branching decides them before any
/// auxiliary variable.
pub(crate) struct TseitinBuilder {
    next_var: u32,
    clauses: Vec<Vec<i32>>,
    atom_map: BTreeMap<Atom, u32>,
    truth: Option<i32>,
}

impl TseitinBuilder {
    pub(crate) fn new<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> TseitinBuilder {
        let mut atoms = BTreeSet::new();
        for f in formulas {
            f.collect_atoms(&mut atoms);
        }
        let atom_map: BTreeMap<Atom, u32> = atoms.into_iter().zip(1..).collect();
        TseitinBuilder {
            next_var: atom_map.len() as u32 + 1,
            clauses: Vec::new(),
            atom_map,
            truth: None,
        }
    }

    fn fresh(&mut self) -> i32 {
        let v = self.next_var;
        self.next_var += 1;
        v as i32
    }

    fn truth(&mut self) -> i32 {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.fresh();
        self.clauses.push(vec![t]);
        self.truth = Some(t);
        t
    }

    /// Returns a literal equivalent to `f`, adding its definitional clauses.
    pub(crate) fn literal(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::Top => self.truth(),
            Formula::Bot => -self.truth(),
            Formula::Atom(a) => *self
                .atom_map
                .get(a)
                .expect("atom registered at construction") as i32,
            Formula::Not(g) => -self.literal(g),
            Formula::And(l, r) => {
                let (a, b) = (self.literal(l), self.literal(r));
                let x = self.fresh();
                self.clauses.push(vec![-x, a]);
                self.clauses.push(vec![-x, b]);
                self.clauses.push(vec![x, -a, -b]);
                x
            }
            Formula::Or(l, r) => {
                let (a, b) = (self.literal(l), self.literal(r));
                let x = self.fresh();
                self.clauses.push(vec![-x, a, b]);
                self.clauses.push(vec![x, -a]);
                self.clauses.push(vec![x, -b]);
                x
            }
            Formula::Implies(l, r) => {
                let (a, b) = (self.literal(l), self.literal(r));
                let x = self.fresh();
                self.clauses.push(vec![-x, -a, b]);
                self.clauses.push(vec![x, a]);
                self.clauses.push(vec![x, -b]);
                x
            }
        }
    }

    /// Adds `f` as a top-level constraint and returns its root literal.
    pub(crate) fn assert(&mut self, f: &Formula) -> i32 {
        let root = self.literal(f);
        self.clauses.push(vec![root]);
        root
    }

    pub(crate) fn finish(self) -> CnfInstance {
        CnfInstance::new(self.next_var - 1, self.clauses, self.atom_map)
            .expect("tseitin output is well formed")
    }
}

/// Equisatisfiable CNF of `f`; the root literal is asserted as a unit clause.
pub fn tseitin(f: &Formula) -> CnfInstance {
    tseitin_with_root(f).0
}

/// Like [`tseitin`], also returning the root literal that stands for `f`.
pub fn tseitin_with_root(f: &Formula) -> (CnfInstance, i32) {
    let mut builder = TseitinBuilder::new([f]);
    let root = builder.assert(f);
    (builder.finish(), root)
}
