mod common;

use common::*;
use fopkit_core::classify::{belongs_to, classify, nnf, to_cnf, to_dnf, to_prenex_universal, SyntacticClass};
use fopkit_core::eval::{assignment, eval_fo, holds, Assignment};
use fopkit_core::formula::Formula;
use fopkit_core::structure::{tuple_at, Structure};
use proptest::prelude::*;

fn all_assignments(n: u32) -> Vec<Assignment> {
    (0..(n as u64).pow(3))
        .map(|i| {
            let v = tuple_at(i, n, 3);
            assignment([("x", v[0]), ("y", v[1]), ("z", v[2])])
        })
        .collect()
}

fn equivalent(a: &Structure, f: &Formula, g: &Formula) -> bool {
    all_assignments(a.size())
        .iter()
        .all(|asg| eval_fo(a, f, asg).unwrap() == eval_fo(a, g, asg).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boolean_laws(f in fo_formula(), g in fo_formula(), a in structure(st_graph(), 4)) {
        prop_assert!(equivalent(&a, &Formula::not(Formula::not(f.clone())), &f));
        prop_assert!(equivalent(
            &a,
            &Formula::not(Formula::and([f.clone(), g.clone()])),
            &Formula::or([Formula::not(f.clone()), Formula::not(g.clone())]),
        ));
        prop_assert!(equivalent(&a, &Formula::implies(f.clone(), g.clone()), &Formula::or([Formula::not(f.clone()), g.clone()])));
        prop_assert!(equivalent(&a, &Formula::iff(f.clone(), f.clone()), &Formula::True));
    }

    #[test]
    fn quantifier_duality(f in fo_formula(), a in structure(st_graph(), 3)) {
        let left = Formula::not(Formula::exists(["x"], f.clone()));
        let right = Formula::forall(["x"], Formula::not(f));
        prop_assert!(equivalent(&a, &left, &right));
    }

    #[test]
    fn negation_normal_form_is_equivalent(f in fo_formula(), a in structure(st_graph(), 3)) {
        prop_assert!(equivalent(&a, &nnf(&f), &f));
    }

    #[test]
    fn normal_forms_are_equivalent_and_classified(f in qf_formula(), a in structure(st_graph(), 3)) {
        let cnf = to_cnf(&f).unwrap();
        let dnf = to_dnf(&f).unwrap();
        prop_assert!(equivalent(&a, &cnf, &f));
        prop_assert!(equivalent(&a, &dnf, &f));
        let classes = classify(&cnf);
        let k = classes.iter().find_map(|c| match c { SyntacticClass::Cnf(k) => Some(*k), _ => None });
        prop_assert!(k.is_some(), "{cnf} not classified as CNF: {classes:?}");
        prop_assert!(belongs_to(&cnf, SyntacticClass::Cnf(k.unwrap() + 1)));
    }

    #[test]
    fn universal_prenex_is_equivalent(f in fo_formula(), a in structure(st_graph(), 3)) {
        let sentence = universal_closure(f);
        if let Ok(p) = to_prenex_universal(&sentence) {
            let g = p.to_formula();
            prop_assert!(g.is_sentence());
            prop_assert!(belongs_to(&g, SyntacticClass::UniversalFo));
            prop_assert_eq!(holds(&a, &g).unwrap(), holds(&a, &sentence).unwrap(), "{} vs {}", sentence, g);
        }
    }

    #[test]
    fn universal_formulas_always_prenex(f in qf_formula(), a in structure(st_graph(), 3)) {
        let sentence = Formula::forall(["x"], Formula::and([f.clone(), Formula::forall(["y"], f)]));
        let sentence = universal_closure(sentence);
        let p = to_prenex_universal(&sentence).unwrap();
        prop_assert_eq!(holds(&a, &p.to_formula()).unwrap(), holds(&a, &sentence).unwrap());
    }
}

#[test]
fn symmetry_sentence_has_width_two() {
    let (x, y) = (fopkit_core::Term::var("x"), fopkit_core::Term::var("y"));
    let sym = Formula::forall(
        ["x", "y"],
        Formula::implies(Formula::rel("E", [x.clone(), y.clone()]), Formula::rel("E", [y, x])),
    );
    let p = to_prenex_universal(&sym).unwrap();
    assert_eq!(p.width, 2);
    assert_eq!(p.variables, ["x", "y"]);
}
