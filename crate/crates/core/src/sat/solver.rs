//! DPLL with two watched literals.
//!
//! By default conflicts are analyzed to the first unique implication point
//! and the learnt clause drives a non-chronological backjump. With
//! [`SolverConfig::learning`] unset the search backtracks chronologically
//! instead: on a conflict the most recent decision that has not been flipped
//! yet is undone and replaced by its negation. Both variants branch on the
//! lowest unassigned variable, positive polarity first, so runs are
//! reproducible.

use super::cnf::{CnfInstance, Model, SatResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Conflict-driven clause learning; off means plain chronological
    /// backtracking, which is exponentially slower on the multi-world
    /// encodings of families 1 and 3.
    pub learning: bool,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig { learning: true }
    }
}

type Lit = u32;

const NO_REASON: u32 = u32::MAX;

#[inline]
fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn negate(l: Lit) -> Lit {
    l ^ 1
}

#[inline]
fn from_dimacs(l: i32) -> Lit {
    let v = l.unsigned_abs() - 1;
    (v << 1) | u32::from(l < 0)
}

/// Solves `cnf` with the built-in solver.
pub fn solve(cnf: &CnfInstance) -> SatResult {
    solve_with(cnf, SolverConfig::default())
}

pub fn solve_with(cnf: &CnfInstance, config: SolverConfig) -> SatResult {
    let mut solver = Solver::new(cnf.num_vars() as usize, config.learning);
    for clause in cnf.clauses() {
        if !solver.add_clause(clause.iter().map(|&l| from_dimacs(l)).collect()) {
            return SatResult::Unsat;
        }
    }
    match solver.search() {
        Some(assignment) => {
            debug_assert!(cnf.satisfied_by(&assignment));
            SatResult::Sat(Model::new(cnf, assignment))
        }
        None => SatResult::Unsat,
    }
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    // 0 unassigned, 1 true, -1 false
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    flipped: Vec<bool>,
    qhead: usize,
    next_var: usize,
    learning: bool,
    seen: Vec<bool>,
}

impl Solver {
    fn new(num_vars: usize, learning: bool) -> Solver {
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            values: vec![0; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            flipped: Vec::new(),
            qhead: 0,
            next_var: 0,
            learning,
            seen: vec![false; num_vars],
        }
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        let v = self.values[var(l)];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = var(l);
        self.values[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds an input clause at level 0; returns false on an immediate conflict.
    fn add_clause(&mut self, lits: Vec<Lit>) -> bool {
        if lits.len() == 1 {
            return match self.value(lits[0]) {
                1 => true,
                -1 => false,
                _ => {
                    self.enqueue(lits[0], NO_REASON);
                    true
                }
            };
        }
        let idx = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(idx);
        self.watches[lits[1] as usize].push(idx);
        self.clauses.push(lits);
        true
    }

    /// Unit propagation; returns the index of a falsified clause on conflict.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = negate(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let clause = &mut self.clauses[ci as usize];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.values[var(first)] != 0 && (self.values[var(first)] == 1) == (first & 1 == 0)
                {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let val = self.values[var(l)];
                    let is_false = val != 0 && (val == 1) != (l & 1 == 0);
                    if !is_false {
                        clause.swap(1, k);
                        self.watches[l as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == -1 {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, ci);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let stop = self.trail_lim[level as usize];
        for idx in (stop..self.trail.len()).rev() {
            let v = var(self.trail[idx]);
            self.values[v] = 0;
            self.reason[v] = NO_REASON;
            self.next_var = self.next_var.min(v);
        }
        self.trail.truncate(stop);
        self.trail_lim.truncate(level as usize);
        self.flipped.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while self.next_var < self.values.len() {
            if self.values[self.next_var] == 0 {
                return Some((self.next_var as u32) << 1);
            }
            self.next_var += 1;
        }
        None
    }

    fn new_level(&mut self, flipped: bool) {
        self.trail_lim.push(self.trail.len());
        self.flipped.push(flipped);
    }

    /// Chronological backtracking: flips the deepest unflipped decision.
    fn backtrack(&mut self) -> bool {
        loop {
            let level = self.decision_level();
            if level == 0 {
                return false;
            }
            let decision = self.trail[self.trail_lim[level as usize - 1]];
            let was_flipped = self.flipped[level as usize - 1];
            self.cancel_until(level - 1);
            if !was_flipped {
                self.new_level(true);
                self.enqueue(negate(decision), NO_REASON);
                return true;
            }
        }
    }

    /// First-UIP conflict analysis; returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let clause = &self.clauses[confl as usize];
            let skip = usize::from(p.is_some());
            for &q in &clause[skip..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] == current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            confl = self.reason[var(lit)];
        }
        learnt[0] = negate(p.expect("conflict at positive level has a UIP"));
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn search(&mut self) -> Option<Vec<bool>> {
        loop {
            if let Some(confl) = self.propagate() {
                if self.decision_level() == 0 {
                    return None;
                }
                if self.learning {
                    let (learnt, back) = self.analyze(confl);
                    self.cancel_until(back);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let idx = self.clauses.len() as u32;
                        self.watches[learnt[0] as usize].push(idx);
                        self.watches[learnt[1] as usize].push(idx);
                        let asserting = learnt[0];
                        self.clauses.push(learnt);
                        self.enqueue(asserting, idx);
                    }
                } else if !self.backtrack() {
                    return None;
                }
            } else {
                match self.pick_branch() {
                    Some(lit) => {
                        self.new_level(false);
                        self.enqueue(lit, NO_REASON);
                    }
                    None => return Some(self.values.iter().map(|&v| v == 1).collect()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cnf(num_vars: u32, clauses: &[&[i32]]) -> CnfInstance {
        CnfInstance::new(
            num_vars,
            clauses.iter().map(|c| c.to_vec()).collect(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    fn both(c: &CnfInstance) -> [SatResult; 2] {
        [
            solve_with(c, SolverConfig { learning: false }),
            solve_with(c, SolverConfig { learning: true }),
        ]
    }

    #[test]
    fn empty_instance_is_sat() {
        for r in both(&cnf(0, &[])) {
            assert!(r.is_sat());
            assert!(r.model().unwrap().valuation().is_empty());
        }
    }

    #[test]
    fn complementary_units_are_unsat() {
        for r in both(&cnf(1, &[&[1], &[-1]])) {
            assert_eq!(r, SatResult::Unsat);
        }
    }

    #[test]
    fn positive_polarity_first() {
        let c = cnf(3, &[&[1, 2, 3]]);
        for r in both(&c) {
            assert_eq!(r.model().unwrap().assignment(), &[true, true, true]);
        }
        let c = cnf(3, &[&[-1, -2], &[2, 3]]);
        for r in both(&c) {
            assert_eq!(r.model().unwrap().assignment(), &[true, false, true]);
        }
    }

    #[test]
    fn pigeonhole_four_into_three_is_unsat() {
        // p(i,h) = pigeon i sits in hole h, variable 3*i + h + 1
        let p = |i: i32, h: i32| 3 * i + h + 1;
        let mut clauses: Vec<Vec<i32>> = (0..4).map(|i| (0..3).map(|h| p(i, h)).collect()).collect();
        for h in 0..3 {
            for i in 0..4 {
                for j in i + 1..4 {
                    clauses.push(vec![-p(i, h), -p(j, h)]);
                }
            }
        }
        let c = CnfInstance::new(12, clauses, BTreeMap::new()).unwrap();
        // brute force over all 2^12 assignments
        let brute = (0u32..1 << 12).any(|bits| {
            let a: Vec<bool> = (0..12).map(|k| bits >> k & 1 == 1).collect();
            c.satisfied_by(&a)
        });
        assert!(!brute);
        for r in both(&c) {
            assert_eq!(r, SatResult::Unsat);
        }
    }
}
