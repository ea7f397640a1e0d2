use proptest::prelude::*;

use iolog::calculus::{prove, search, ProofOutcome};
use iolog::engine::{decide, Mode};
use iolog::formula::{label, parse, Atom, Formula, Valuation};
use iolog::modal::search_kripke_countermodel;
use iolog::oracle::Refutation;
use iolog::sat::SatEngine;
use iolog::semantics::{check_countermodel, countermodel_from_refutation};
use iolog::theory::{Family, IOPair, IOSequent, LogicId};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
        6 => prop::sample::select(vec!["a", "b", "c"]).prop_map(Formula::var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| !f),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.and(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.or(r)),
            (inner.clone(), inner).prop_map(|(l, r)| l.implies(r)),
        ]
    })
}

fn pair() -> impl Strategy<Value = IOPair> {
    (formula(), formula()).prop_map(|(a, x)| IOPair::new(a, x))
}

fn logic() -> impl Strategy<Value = LogicId> {
    prop::sample::select(LogicId::ALL.to_vec())
}

fn sequent(max_premises: usize) -> impl Strategy<Value = IOSequent> {
    (prop::collection::vec(pair(), 0..=max_premises), pair(), logic())
        .prop_map(|(g, goal, logic)| IOSequent::new(g, goal, logic))
}

fn valuation(bits: u8) -> Valuation {
    ["a", "b", "c"]
        .iter()
        .enumerate()
        .map(|(k, name)| (Atom::new(name).unwrap(), bits >> k & 1 == 1))
        .collect()
}

fn satisfiable_by_table(f: &Formula) -> bool {
    (0..8).any(|bits| f.evaluate(&valuation(bits)).unwrap())
}

fn valid_by_table(f: &Formula) -> bool {
    (0..8).all(|bits| f.evaluate(&valuation(bits)).unwrap())
}

fn derivable(sat: &SatEngine, s: &IOSequent) -> bool {
    decide(sat, s, Mode::Sat).unwrap().derivable
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn labeling_commutes_with_evaluation(f in formula(), bits in 0u8..8, world in 0usize..5) {
        let v = valuation(bits);
        let lifted = v.lift(world).unwrap();
        prop_assert_eq!(label(&f, world).unwrap().evaluate(&lifted).unwrap(), f.evaluate(&v).unwrap());
    }

    #[test]
    fn de_morgan(f in formula(), g in formula()) {
        let sat = SatEngine::new();
        let lhs = !(f.clone().and(g.clone()));
        let rhs = (!f).or(!g);
        prop_assert!(sat.is_valid(&lhs.clone().implies(rhs.clone())).unwrap());
        prop_assert!(sat.is_valid(&rhs.implies(lhs)).unwrap());
    }

    #[test]
    fn solver_matches_truth_table(f in formula()) {
        let sat = SatEngine::new();
        prop_assert_eq!(sat.is_satisfiable(&f).unwrap(), satisfiable_by_table(&f));
        prop_assert_eq!(sat.is_valid(&f).unwrap(), valid_by_table(&f));
    }

    #[test]
    fn entailment_is_a_consequence_relation(f in formula(), g in formula(), h in formula()) {
        let sat = SatEngine::new();
        prop_assert!(sat.entails([&f], &f).unwrap());
        if sat.entails([&f], &h).unwrap() {
            prop_assert!(sat.entails([&f, &g], &h).unwrap());
        }
        if sat.entails([&f], &g).unwrap() && sat.entails([&f, &g], &h).unwrap() {
            prop_assert!(sat.entails([&f], &h).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn duplicate_premises_change_nothing(s in sequent(3)) {
        let sat = SatEngine::new();
        let doubled: Vec<IOPair> = s.premises().iter().chain(s.premises()).cloned().collect();
        let t = IOSequent::new(doubled, s.goal().clone(), s.logic());
        prop_assert_eq!(derivable(&sat, &t), derivable(&sat, &s));
    }

    #[test]
    fn extra_premises_preserve_derivability(s in sequent(3), extra in pair()) {
        let sat = SatEngine::new();
        if derivable(&sat, &s) {
            let more: Vec<IOPair> = s.premises().iter().cloned().chain([extra]).collect();
            prop_assert!(derivable(&sat, &IOSequent::new(more, s.goal().clone(), s.logic())));
        }
    }

    #[test]
    fn derived_pairs_can_be_cut(s in sequent(3), lemma in pair()) {
        let sat = SatEngine::new();
        let lemma_query = s.with_goal(lemma.clone());
        let with_lemma: Vec<IOPair> = s.premises().iter().cloned().chain([lemma]).collect();
        let using_lemma = IOSequent::new(with_lemma, s.goal().clone(), s.logic());
        if derivable(&sat, &lemma_query) && derivable(&sat, &using_lemma) {
            prop_assert!(derivable(&sat, &s));
        }
    }

    #[test]
    fn stronger_logics_derive_more(s in sequent(3)) {
        let sat = SatEngine::new();
        if derivable(&sat, &s) {
            for stronger in LogicId::ALL.into_iter().filter(|l| l.stronger_than(s.logic())) {
                prop_assert!(derivable(&sat, &s.with_logic(stronger)), "lost in {}", stronger);
            }
        }
    }

    #[test]
    fn tautological_input_without_premises(y in formula(), logic in logic()) {
        let sat = SatEngine::new();
        let s = IOSequent::new([], IOPair::new(Formula::Top, y.clone()), logic);
        for mode in Mode::ALL {
            prop_assert_eq!(decide(&sat, &s, mode).unwrap().derivable, valid_by_table(&y));
        }
    }

    #[test]
    fn no_premises(b in formula(), y in formula(), logic in logic()) {
        let sat = SatEngine::new();
        let s = IOSequent::new([], IOPair::new(b.clone(), y.clone()), logic);
        let expected = valid_by_table(&y) || (logic.causal && !satisfiable_by_table(&b));
        for mode in Mode::ALL {
            prop_assert_eq!(decide(&sat, &s, mode).unwrap().derivable, expected);
        }
    }

    #[test]
    fn embedding_transfers_verdicts(s in sequent(2)) {
        let sat = SatEngine::new();
        let refuted = search_kripke_countermodel(&s).unwrap().is_some();
        prop_assert_eq!(refuted, !derivable(&sat, &s));
    }

    #[test]
    fn pair_elimination_inverts(s in sequent(3)) {
        prop_assume!(!s.premises().is_empty());
        let sat = SatEngine::new();
        let s = s.causal();
        let family = s.logic().family;
        let IOPair { input: a, output: x } = s.premises()[0].clone();
        let goal = s.goal().clone();
        let rest = s.without(0);
        let reduced_input = if family.reusable() { goal.input.clone().and(x.clone()) } else { goal.input.clone() };
        let second = rest.with_goal(IOPair::new(reduced_input, goal.output.clone().or(!x)));
        if family.has_or() {
            let first = rest.with_goal(IOPair::new(goal.input.clone().and(!a), goal.output.clone()));
            prop_assert_eq!(derivable(&sat, &s), derivable(&sat, &first) && derivable(&sat, &second));
        } else if derivable(&sat, &s) && sat.entails([&goal.input], &a).unwrap() {
            prop_assert!(derivable(&sat, &second));
        }
    }

    #[test]
    fn proof_leaves_match_splits(s in sequent(3)) {
        let sat = SatEngine::new();
        let s = s.causal();
        prop_assume!(matches!(s.logic().family, Family::Out2 | Family::Out4));
        match search(&sat, &s).unwrap() {
            ProofOutcome::Proved(d) => {
                prop_assert_eq!(d.concluding_nodes().len(), 1 << s.premises().len());
            }
            ProofOutcome::Refuted(p) => {
                let m = countermodel_from_refutation(&sat, &s, &Refutation::Partition(p)).unwrap();
                prop_assert!(check_countermodel(&m, &s).is_ok());
                prop_assert!(prove(&sat, &s).unwrap().is_none());
            }
        }
    }
}
