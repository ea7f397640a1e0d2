//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use iolog::battery::{
    exhaustive_battery, random_instances, rule_instance, separating_instances, two_atom_battery, RandomShape,
};
use iolog::calculus::{check_sequent, prove, to_native, to_native_original};
use iolog::engine::{decide, Certificate, Mode};
use iolog::formula::{Formula, Valuation};
use iolog::modal::{embed, kripke_from_io, refutes};
use iolog::oracle;
use iolog::reduction;
use iolog::sat::{CnfInstance, SatEngine, SolverConfig};
use iolog::selfcheck::crosscheck;
use iolog::semantics::{check_countermodel, search_countermodel};
use iolog::theory::{check_native, IOSequent, LogicId, NativeRule};

const RANDOM_PER_LOGIC: usize = 1000;
const RANDOM_SEED: u64 = 2024;
const AGREEMENT_BUDGET: Duration = Duration::from_secs(300);
const RULE_INSTANCES: usize = 200;
const SCALE_INSTANCES: usize = 5;
const SCALE_BUDGET_UNIQUE_INPUT: Duration = Duration::from_secs(1);
const SCALE_BUDGET_MULTI_INPUT: Duration = Duration::from_secs(5);
const SOLVER_INSTANCES: usize = 10_000;
const SOLVER_MAX_VARS: u32 = 20;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn battery_with_random() -> Vec<IOSequent> {
    let mut all = exhaustive_battery();
    for logic in LogicId::ALL {
        all.extend(random_instances(RANDOM_SEED, logic, RANDOM_PER_LOGIC, RandomShape::LARGER));
    }
    all
}

/// Truth-table entailment, independent of the SAT backend.
fn entails_by_table(hyps: &[&Formula], conclusion: &Formula) -> bool {
    let mut atoms = conclusion.atoms();
    for h in hyps {
        atoms.extend(h.atoms());
    }
    let atoms: Vec<_> = atoms.into_iter().collect();
    Valuation::enumerate(&atoms).iter().all(|v| {
        !hyps.iter().all(|h| h.evaluate(v).unwrap()) || conclusion.evaluate(v).unwrap()
    })
}

fn three_way_agreement(sat: &SatEngine, instances: &[IOSequent]) -> Outcome {
    let start = Instant::now();
    let report = crosscheck(sat, instances, None);
    let elapsed = start.elapsed();
    let logics_seen = LogicId::ALL
        .iter()
        .all(|l| instances.iter().any(|s| s.logic() == *l));
    outcome(
        report.passed() && elapsed <= AGREEMENT_BUDGET && logics_seen,
        format!("{report} in {:.1}s (budget {}s)", elapsed.as_secs_f64(), AGREEMENT_BUDGET.as_secs()),
    )
}

fn rule_closure(sat: &SatEngine) -> Outcome {
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    let mut checked = 0;
    let mut failures = Vec::new();
    for logic in LogicId::ALL {
        for rule in logic.rule_set() {
            for _ in 0..RULE_INSTANCES {
                let (premises, conclusion) = rule_instance(&mut rng, rule);
                let s = IOSequent::new(premises, conclusion, logic);
                for mode in Mode::ALL {
                    checked += 1;
                    if !decide(sat, &s, mode).map(|d| d.derivable).unwrap_or(false) {
                        failures.push(format!("{} {mode}: {s}", rule.name()));
                    }
                }
            }
        }
    }
    let mut separations = 0;
    for (rule, canonical) in separating_instances() {
        for logic in LogicId::ALL.into_iter().filter(|l| !l.has_rule(rule)) {
            let s = canonical.with_logic(logic);
            for mode in Mode::ALL {
                separations += 1;
                if decide(sat, &s, mode).map(|d| d.derivable).unwrap_or(true) {
                    failures.push(format!("separating {} {mode}: {s}", rule.name()));
                }
            }
        }
    }
    let detail = match failures.first() {
        None => format!("{checked} rule instances derivable, {separations} separating verdicts negative"),
        Some(first) => format!("{} failures, first: {first}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn original_decomposition(sat: &SatEngine, instances: &[IOSequent]) -> Outcome {
    let originals: Vec<IOSequent> = instances
        .iter()
        .filter(|s| !s.logic().causal)
        .cloned()
        .collect();
    let failures: Vec<String> = originals
        .par_iter()
        .filter_map(|s| {
            let outputs: Vec<&Formula> = s.outputs().collect();
            let entailed = entails_by_table(&outputs, &s.goal().output);
            let causal = s.causal();
            let by_oracle = oracle::decide_original(sat, s).unwrap().is_none();
            let causal_by_oracle = oracle::decide_causal(sat, &causal).unwrap().is_none();
            let by_sat = reduction::decide_original_sat(sat, s).unwrap().is_none();
            let causal_by_sat = reduction::decide_causal_sat(sat, &causal).unwrap().is_none();
            let expected_oracle = causal_by_oracle && entailed;
            let expected_sat = causal_by_sat && entailed;
            (by_oracle != expected_oracle || by_sat != expected_sat).then(|| s.to_string())
        })
        .collect();
    outcome(
        failures.is_empty(),
        match failures.first() {
            None => format!("{} original-logic instances decompose", originals.len()),
            Some(first) => format!("{} mismatches, first: {first}", failures.len()),
        },
    )
}

fn certificate_integrity(sat: &SatEngine, instances: &[IOSequent]) -> Outcome {
    let results: Vec<(usize, usize, Option<String>)> = instances
        .par_iter()
        .map(|s| {
            let Some(d) = prove(sat, &s.causal()).unwrap() else {
                return (0, 0, None);
            };
            let causal = s.causal();
            if let Err(e) = check_sequent(&d, &causal, sat) {
                return (1, 0, Some(format!("{s}: sequent proof rejected: {e}")));
            }
            if let Err(e) = check_native(&to_native(&d).unwrap(), &causal, sat) {
                return (1, 0, Some(format!("{s}: native expansion rejected: {e}")));
            }
            let outputs: Vec<&Formula> = s.outputs().collect();
            if !entails_by_table(&outputs, &s.goal().output) {
                return (1, 0, None);
            }
            let original = s.with_logic(s.logic().with_causal(false));
            let native = to_native_original(&d, s).unwrap();
            if native.uses(NativeRule::Bot) {
                return (1, 1, Some(format!("{s}: original expansion uses BOT")));
            }
            match check_native(&native, &original, sat) {
                Ok(()) => (1, 1, None),
                Err(e) => (1, 1, Some(format!("{s}: original expansion rejected: {e}"))),
            }
        })
        .collect();
    let positives: usize = results.iter().map(|r| r.0).sum();
    let originals: usize = results.iter().map(|r| r.1).sum();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.2.as_ref()).collect();
    outcome(
        failures.is_empty() && positives > 0,
        match failures.first() {
            None => format!("{positives} proofs checked, {originals} expansions into the original logic"),
            Some(first) => format!("{} failures, first: {first}", failures.len()),
        },
    )
}

fn countermodel_integrity(sat: &SatEngine, instances: &[IOSequent]) -> Outcome {
    let results: Vec<(usize, Option<String>)> = instances
        .par_iter()
        .flat_map_iter(|s| {
            Mode::ALL.into_iter().filter_map(move |mode| {
                let d = decide(sat, s, mode).unwrap();
                if d.derivable {
                    return None;
                }
                let Certificate::Countermodel(m) = &d.certificate else {
                    return Some((1, Some(format!("{s} {mode}: negative verdict without a model"))));
                };
                if let Err(e) = check_countermodel(m, s) {
                    return Some((1, Some(format!("{s} {mode}: {e}"))));
                }
                if !refutes(&embed(s), &kripke_from_io(m)).unwrap() {
                    return Some((1, Some(format!("{s} {mode}: Kripke lift does not refute the embedding"))));
                }
                Some((1, None))
            })
        })
        .collect();
    let negatives: usize = results.iter().map(|r| r.0).sum();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    outcome(
        failures.is_empty() && negatives > 0,
        match failures.first() {
            None => format!("{negatives} countermodels and Kripke lifts checked"),
            Some(first) => format!("{} failures, first: {first}", failures.len()),
        },
    )
}

fn semantic_completeness(sat: &SatEngine) -> Outcome {
    let instances = two_atom_battery();
    let failures: Vec<String> = instances
        .par_iter()
        .filter_map(|s| {
            let derivable = oracle::decide(sat, s).unwrap().is_none();
            match search_countermodel(s).unwrap() {
                Some(m) if derivable => Some(format!("{s}: derivable but refuted by {m}")),
                Some(m) if check_countermodel(&m, s).is_err() => Some(format!("{s}: search returned a non-model")),
                None if !derivable => Some(format!("{s}: not derivable but no model found")),
                _ => None,
            }
        })
        .collect();
    outcome(
        failures.is_empty(),
        match failures.first() {
            None => format!("{} two-atom instances, model search matches in both directions", instances.len()),
            Some(first) => format!("{} mismatches, first: {first}", failures.len()),
        },
    )
}

fn scale(sat: &SatEngine) -> Outcome {
    let mut worst = Vec::new();
    let mut passed = true;
    for logic in LogicId::ALL {
        let budget = if logic.family.has_or() {
            SCALE_BUDGET_UNIQUE_INPUT
        } else {
            SCALE_BUDGET_MULTI_INPUT
        };
        let mut slowest = Duration::ZERO;
        for s in random_instances(RANDOM_SEED, logic, SCALE_INSTANCES, RandomShape::SCALE) {
            let start = Instant::now();
            decide(sat, &s, Mode::Sat).unwrap();
            slowest = slowest.max(start.elapsed());
        }
        passed &= slowest < budget;
        worst.push(format!("{logic} {:.0}ms", slowest.as_secs_f64() * 1e3));
    }
    outcome(
        passed,
        format!("|G| = 50 over 100 atoms, slowest per logic: {}", worst.join(", ")),
    )
}

fn random_cnf(rng: &mut StdRng) -> CnfInstance {
    let n = rng.random_range(1..=SOLVER_MAX_VARS);
    // around the satisfiability threshold so both answers are common
    let m = (f64::from(n) * rng.random_range(2.0..6.0)).round() as usize;
    let clauses = (0..m)
        .map(|_| {
            let len = rng.random_range(1..=4);
            (0..len)
                .map(|_| {
                    let v = rng.random_range(1..=n) as i32;
                    if rng.random_bool(0.5) { v } else { -v }
                })
                .collect()
        })
        .collect();
    CnfInstance::new(n, clauses, Default::default()).unwrap()
}

/// Exhaustive satisfiability over bit-packed clauses.
fn satisfiable_by_enumeration(cnf: &CnfInstance) -> bool {
    let packed: Vec<(u32, u32)> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(pos, neg), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 { (pos | bit, neg) } else { (pos, neg | bit) }
            })
        })
        .collect();
    (0u32..1 << cnf.num_vars()).any(|a| packed.iter().all(|&(pos, neg)| a & pos != 0 || !a & neg != 0))
}

fn solver_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    let instances: Vec<CnfInstance> = (0..SOLVER_INSTANCES).map(|_| random_cnf(&mut rng)).collect();
    let configs = [SolverConfig { learning: true }, SolverConfig { learning: false }];
    let results: Vec<(bool, Option<String>)> = instances
        .par_iter()
        .enumerate()
        .map(|(k, cnf)| {
            let expected = satisfiable_by_enumeration(cnf);
            for config in configs {
                let r = iolog::sat::solve_with(cnf, config);
                if r.is_sat() != expected {
                    return (expected, Some(format!("instance {k}: wrong verdict with {config:?}")));
                }
                if let Some(m) = r.model() {
                    if !cnf.satisfied_by(m.assignment()) {
                        return (expected, Some(format!("instance {k}: model fails a clause")));
                    }
                }
            }
            (expected, None)
        })
        .collect();
    let sat_count = results.iter().filter(|r| r.0).count();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    outcome(
        failures.is_empty(),
        match failures.first() {
            None => format!(
                "{SOLVER_INSTANCES} instances up to {SOLVER_MAX_VARS} variables, {sat_count} satisfiable, both search variants agree with enumeration"
            ),
            Some(first) => format!("{} failures, first: {first}", failures.len()),
        },
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let sat = SatEngine::new();
    let instances = battery_with_random();
    let criteria: [(&str, Criterion); 8] = [
        ("three-way agreement", Box::new(|| three_way_agreement(&sat, &instances))),
        ("rule closure and separation", Box::new(|| rule_closure(&sat))),
        ("original = causal + output entailment", Box::new(|| original_decomposition(&sat, &instances))),
        ("proof certificates", Box::new(|| certificate_integrity(&sat, &instances))),
        ("countermodel certificates", Box::new(|| countermodel_integrity(&sat, &instances))),
        ("semantic completeness", Box::new(|| semantic_completeness(&sat))),
        ("scale", Box::new(|| scale(&sat))),
        ("solver soundness", Box::new(solver_soundness)),
    ];
    let mut all_passed = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all_passed &= o.passed;
        println!(
            "criterion {} {}: {} ({}; {:.1}s)",
            k + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
