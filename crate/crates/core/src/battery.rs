//! Instance generators shared by the self-check, the test suites and the
//! benchmarks: exhaustive small batteries and seeded random instances.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::formula::{Atom, Formula};
use crate::theory::{IOPair, IOSequent, LogicId, Rule};

fn pair(text: &str) -> IOPair {
    text.parse().expect("built-in pair")
}

/// Premise pool of the three-atom battery.
pub const PAIR_POOL: [&str; 9] = [
    "a => b",
    "b => c",
    "a & b => c",
    "a => c",
    "!a => c",
    "a | b => !c",
    "T => a -> b",
    "c => F",
    "a => b | c",
];

/// Goals of the three-atom battery.
pub const GOAL_POOL: [&str; 12] = [
    "a => c",
    "a | b => c",
    "a => b & c",
    "T => T",
    "F => a",
    "a => b",
    "b => a | c",
    "a & !b => c",
    "T => a | !a",
    "!c => !a",
    "a & c => b",
    "F => F",
];

/// Premise pool of the two-atom battery.
pub const SMALL_PAIR_POOL: [&str; 6] = ["a => b", "b => a", "a => !b", "T => a", "a | b => b", "!a => F"];

/// Goals of the two-atom battery.
pub const SMALL_GOAL_POOL: [&str; 9] = [
    "a => b",
    "T => b",
    "a => a & b",
    "b => a",
    "F => a",
    "a => T",
    "a | b => a",
    "!b => !a",
    "T => a | !a",
];

/// All subsets of `pool` with at most `max` elements, in order of size and
/// then of first differing index.
fn subsets(pool: &[IOPair], max: usize) -> Vec<Vec<IOPair>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<IOPair>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..max {
        let mut next = Vec::new();
        for (set, from) in &frontier {
            for (k, pair) in pool.iter().enumerate().skip(*from) {
                let mut grown = set.clone();
                grown.push(pair.clone());
                out.push(grown.clone());
                next.push((grown, k + 1));
            }
        }
        frontier = next;
    }
    out
}

fn battery(pairs: &[&str], goals: &[&str], max_premises: usize) -> Vec<IOSequent> {
    let pool: Vec<IOPair> = pairs.iter().map(|p| pair(p)).collect();
    let sets = subsets(&pool, max_premises);
    let mut out = Vec::new();
    for logic in LogicId::ALL {
        for g in &sets {
            for goal in goals {
                out.push(IOSequent::new(g.iter().cloned(), pair(goal), logic));
            }
        }
    }
    out
}

/// Every subset of at most three premises from [`PAIR_POOL`] against every
/// goal of [`GOAL_POOL`], in all eight logics: formulas over `a, b, c` of
/// depth at most 2.
pub fn exhaustive_battery() -> Vec<IOSequent> {
    battery(&PAIR_POOL, &GOAL_POOL, 3)
}

/// Every subset of at most two premises from [`SMALL_PAIR_POOL`] against
/// every goal of [`SMALL_GOAL_POOL`], in all eight logics: formulas over
/// `a, b`.
pub fn two_atom_battery() -> Vec<IOSequent> {
    battery(&SMALL_PAIR_POOL, &SMALL_GOAL_POOL, 2)
}

/// Shape of randomly generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomShape {
    pub min_premises: usize,
    pub max_premises: usize,
    pub atoms: usize,
    pub depth: usize,
}

impl RandomShape {
    /// Four to six premises over four atoms, depth at most 3.
    pub const LARGER: RandomShape = RandomShape {
        min_premises: 4,
        max_premises: 6,
        atoms: 4,
        depth: 3,
    };

    /// Fifty premises over a hundred atoms, depth at most 2.
    pub const SCALE: RandomShape = RandomShape {
        min_premises: 50,
        max_premises: 50,
        atoms: 100,
        depth: 2,
    };
}

/// Atom names `p0, p1, ...` for large universes, `a, b, c, ...` otherwise.
pub fn atom_names(count: usize) -> Vec<Atom> {
    (0..count)
        .map(|k| {
            let name = if count <= 26 {
                char::from(b'a' + k as u8).to_string()
            } else {
                format!("p{k}")
            };
            Atom::new(&name).expect("generated atom name")
        })
        .collect()
}

/// A random formula of depth at most `depth`; leaves are atoms, with the
/// occasional constant.
pub fn random_formula(rng: &mut impl Rng, atoms: &[Atom], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..20) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone()),
        };
    }
    match rng.random_range(0..4) {
        0 => !random_formula(rng, atoms, depth - 1),
        1 => random_formula(rng, atoms, depth - 1).and(random_formula(rng, atoms, depth - 1)),
        2 => random_formula(rng, atoms, depth - 1).or(random_formula(rng, atoms, depth - 1)),
        _ => random_formula(rng, atoms, depth - 1).implies(random_formula(rng, atoms, depth - 1)),
    }
}

pub fn random_pair(rng: &mut impl Rng, atoms: &[Atom], depth: usize) -> IOPair {
    IOPair::new(random_formula(rng, atoms, depth), random_formula(rng, atoms, depth))
}

pub fn random_instance(rng: &mut impl Rng, logic: LogicId, shape: RandomShape) -> IOSequent {
    let atoms = atom_names(shape.atoms);
    let n = rng.random_range(shape.min_premises..=shape.max_premises);
    let premises: Vec<IOPair> = (0..n).map(|_| random_pair(rng, &atoms, shape.depth)).collect();
    IOSequent::new(premises, random_pair(rng, &atoms, shape.depth), logic)
}

/// `count` random instances of `logic`, reproducible from `seed`.
pub fn random_instances(seed: u64, logic: LogicId, count: usize, shape: RandomShape) -> Vec<IOSequent> {
    let mut rng = StdRng::seed_from_u64(seed ^ (u64::from(logic.family.number()) << 32) ^ u64::from(logic.causal));
    (0..count).map(|_| random_instance(&mut rng, logic, shape)).collect()
}

/// A random instance of `rule`: premises and conclusion of one application,
/// over formulas of depth at most 2 on `a, b, c`.
pub fn rule_instance(rng: &mut impl Rng, rule: Rule) -> (Vec<IOPair>, IOPair) {
    let atoms = atom_names(3);
    let mut f = || random_formula(rng, &atoms, 2);
    match rule {
        Rule::Top => (Vec::new(), IOPair::top()),
        Rule::Bot => (Vec::new(), IOPair::bot()),
        Rule::Wo => {
            let (a, x, z) = (f(), f(), f());
            (vec![IOPair::new(a.clone(), x.clone())], IOPair::new(a, x.or(z)))
        }
        Rule::Si => {
            let (a, x, c) = (f(), f(), f());
            (vec![IOPair::new(a.clone(), x.clone())], IOPair::new(a.and(c), x))
        }
        Rule::And => {
            let (a, x1, x2) = (f(), f(), f());
            (
                vec![IOPair::new(a.clone(), x1.clone()), IOPair::new(a.clone(), x2.clone())],
                IOPair::new(a, x1.and(x2)),
            )
        }
        Rule::Or => {
            let (a1, a2, x) = (f(), f(), f());
            (
                vec![IOPair::new(a1.clone(), x.clone()), IOPair::new(a2.clone(), x.clone())],
                IOPair::new(a1.or(a2), x),
            )
        }
        Rule::Ct => {
            let (a, x, y) = (f(), f(), f());
            (
                vec![IOPair::new(a.clone(), x.clone()), IOPair::new(a.clone().and(x), y.clone())],
                IOPair::new(a, y),
            )
        }
    }
}

/// For each rule missing from some logic, an instance of that rule which the
/// weakest such logic must reject.
pub fn separating_instances() -> Vec<(Rule, IOSequent)> {
    let out1 = "out1".parse().expect("logic code");
    let seq = |pairs: &[&str], goal: &str| IOSequent::new(pairs.iter().map(|p| pair(p)), pair(goal), out1);
    vec![
        (Rule::Or, seq(&["a => x", "b => x"], "a | b => x")),
        (Rule::Ct, seq(&["a => x", "a & x => y"], "a => y")),
        (Rule::Bot, seq(&[], "F => p")),
    ]
}
