mod common;

use std::sync::Arc;

use common::structure;
use fopkit_core::eval::{eval_fo, eval_so, Assignment};
use fopkit_core::fop::{expand_assignment, literal_shapes, pullback, Fop};
use fopkit_core::problems::reductions::{autoreduction, identity, swap_1_max, AUTOREDUCIBLE};
use fopkit_core::problems::{catalog, problem, DecisionProblem, Monotonicity, Problem};
use fopkit_core::structure::{enumerate_structures, tuple_at, Limits, Structure};
use fopkit_core::vocab::builtin;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn by_name(name: &str) -> Problem {
    problem(name).unwrap()
}

fn catalog_fops() -> Vec<Fop> {
    let mut fops = vec![
        identity(Arc::new(builtin::st_graph())).unwrap(),
        identity(Arc::new(builtin::alt_graph())).unwrap(),
        swap_1_max().unwrap(),
    ];
    fops.extend(AUTOREDUCIBLE.iter().map(|p| autoreduction(p, 3).unwrap()));
    fops
}

#[test]
fn deciders_match_definitions_at_size_two() {
    for p in catalog() {
        let Some(def) = p.definition() else { continue };
        let budget = p.definition_budget(2);
        for a in enumerate_structures(p.vocabulary().clone(), 2, Limits::default()).unwrap() {
            assert_eq!(
                p.accepts(&a).unwrap(),
                eval_so(&a, &def, &Assignment::new(), budget).unwrap(),
                "{} on {a:?}",
                p.name()
            );
        }
    }
}

#[test]
fn deciders_match_definitions_on_sampled_size_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in catalog() {
        let Some(def) = p.definition() else { continue };
        let budget = p.definition_budget(3);
        let space = fopkit_core::StructureSpace::full(p.vocabulary().clone(), 3).unwrap();
        let count = space.count_within(u64::MAX).unwrap();
        for _ in 0..20 {
            let a = space.nth(rng.gen_range(0..count));
            assert_eq!(
                p.accepts(&a).unwrap(),
                eval_so(&a, &def, &Assignment::new(), budget).unwrap(),
                "{} on {a:?}",
                p.name()
            );
        }
    }
}

#[test]
fn padded_deciders() {
    for p in catalog() {
        for a in enumerate_structures(p.vocabulary().clone(), 2, Limits::default()).unwrap() {
            assert_eq!(p.pad(2).accepts(&a).unwrap(), p.accepts(&a).unwrap());
            assert!(p.pad(3).accepts(&a).unwrap());
        }
    }
}

#[test]
fn autoreductions_reduce_and_grow_at_size_two() {
    for name in AUTOREDUCIBLE {
        let p = by_name(name);
        let rho = autoreduction(name, 2).unwrap();
        for a in enumerate_structures(p.vocabulary().clone(), 2, Limits::default()).unwrap() {
            let img = rho.apply(&a).unwrap();
            assert!(img.size() > 2);
            assert_eq!(
                p.accepts(&a).unwrap(),
                p.pad(2).accepts(&img).unwrap(),
                "{name} on {a:?}"
            );
        }
    }
}

#[test]
fn swap_reduces_hp_01_to_hp_0max() {
    let (from, to) = (by_name("hp_01"), by_name("hp_0max"));
    let rho = swap_1_max().unwrap();
    for n in 2..=3 {
        for a in enumerate_structures(from.vocabulary().clone(), n, Limits::default()).unwrap() {
            assert_eq!(from.accepts(&a).unwrap(), to.accepts(&rho.apply(&a).unwrap()).unwrap());
        }
    }
}

/// Adds one random tuple to a random relation.
fn grow(a: &Structure, rel: usize, index: usize) -> Structure {
    let mut b = a.clone();
    let rel = rel % a.vocabulary().relations().len();
    let index = index % b.table(rel).len();
    b.set_at(rel, index, true);
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn declared_monotonicity_holds(seed in any::<u64>(), rel in 0usize..4, index in 0usize..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in catalog() {
            let n = rng.gen_range(2..=5u32);
            let space = fopkit_core::StructureSpace::full(p.vocabulary().clone(), n).unwrap();
            let Ok(count) = space.count_within(u64::MAX) else { continue };
            let a = space.nth(rng.gen_range(0..count));
            let b = grow(&a, rel, index);
            match p.monotonicity() {
                Monotonicity::Increasing => prop_assert!(!p.accepts(&a).unwrap() || p.accepts(&b).unwrap(), "{}", p.name()),
                Monotonicity::Decreasing => prop_assert!(!p.accepts(&b).unwrap() || p.accepts(&a).unwrap(), "{}", p.name()),
                Monotonicity::None => {}
            }
        }
    }

    #[test]
    fn pullback_is_sound(b in structure(Arc::new(builtin::alt_graph()), 3), fop in 0usize..7, pick in any::<u64>()) {
        let rho = &catalog_fops()[fop];
        let b = if rho.source().name() == b.vocabulary().name() {
            b
        } else {
            let space = fopkit_core::StructureSpace::full(rho.source().clone(), b.size()).unwrap();
            space.nth(pick % space.count_within(u64::MAX).unwrap())
        };
        let n = b.size();
        let image = rho.apply(&b).unwrap();
        for eta in literal_shapes(rho.target()) {
            let mu = pullback(rho, &eta, n).unwrap();
            let vars = eta.free_variables();
            let m = image.size();
            for i in 0..(m as u64).pow(vars.len() as u32) {
                let asg: Assignment = vars.iter().cloned().zip(tuple_at(i, m, vars.len())).collect();
                let source_asg = expand_assignment(&asg, n, rho.arity());
                prop_assert_eq!(
                    eval_fo(&image, &eta, &asg).unwrap(),
                    eval_fo(&b, &mu, &source_asg).unwrap(),
                    "{} {} {:?}", rho.name(), eta, asg
                );
            }
        }
    }
}
