use std::collections::BTreeSet;
use std::sync::Arc;

use fopkit_core::formula::{Formula, Term};
use fopkit_core::problems::{deciders, problem, DecisionProblem};
use fopkit_core::structure::Structure;
use fopkit_core::uniformity::*;
use fopkit_core::vocab::builtin;
use proptest::prelude::*;

fn query(n: u32, k: usize, m: &[u32], mode: Mode, shortcut: bool) -> UniformityQuery {
    UniformityQuery {
        n,
        k,
        m_range: m.to_vec(),
        options: Options {
            mode,
            monotone_shortcut: shortcut,
            ..Options::default()
        },
    }
}

fn k6() -> Formula {
    let mut edges = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            edges.push(Formula::rel("E", [Term::elem(i), Term::elem(j)]));
        }
    }
    Formula::and(edges)
}

#[test]
fn k6_probe_refutes_mono_triangle() {
    let p = problem("mono_triangle").unwrap();
    let c = Conjunction::from_formula(p.vocabulary().clone(), &k6(), 6).unwrap();
    assert_eq!(c.items().len(), 15);
    let Outcome::Refuted(cx) = check_conjunction(&p, &c, &Options::default()).unwrap() else {
        panic!("expected a refutation");
    };
    let Refutation::Extremal { structures } = &cx.refutation else {
        panic!()
    };
    assert_eq!(structures.len(), 1);
    assert_eq!(structures[0].tuples(0).count(), 15);
    assert!(!deciders::mono_triangle(&cx.consistency_witness));
}

#[test]
fn extremal_shortcut_agrees_with_full_search() {
    for name in ["reach", "hp_0max", "mono_triangle", "co_mono_triangle"] {
        let p = problem(name).unwrap();
        let fast = check_uniformity(&p, &query(2, 1, &[2, 3], Mode::Exhaustive, true)).unwrap();
        let slow = check_uniformity(&p, &query(2, 1, &[2, 3], Mode::Exhaustive, false)).unwrap();
        assert_eq!(fast.is_uniform(), slow.is_uniform(), "{name}");
        for ((_, a), (_, b)) in fast.verdicts.iter().zip(&slow.verdicts) {
            match (a, b) {
                (Verdict::Counterexample(x), Verdict::Counterexample(y)) => assert_eq!(x.conjunction, y.conjunction),
                (Verdict::Uniform { conjunctions: x }, Verdict::Uniform { conjunctions: y }) => assert_eq!(x, y),
                other => panic!("{name}: {other:?}"),
            }
        }
    }
}

#[test]
fn altreach_has_an_inconsistent_four_item_conjunction() {
    // A universal vertex whose only successor is itself is never accessible.
    let p = problem("altreach").unwrap();
    let f = Formula::and([
        Formula::rel("U", [Term::Zero]),
        Formula::rel("E", [Term::Zero, Term::Zero]),
        Formula::eq(Term::constant("s"), Term::Zero),
        Formula::eq(Term::constant("t"), Term::elem(1)),
    ]);
    for m in 3..=4 {
        let c = Conjunction::from_formula(p.vocabulary().clone(), &f, m).unwrap();
        let out = check_conjunction(&p, &c, &Options::default()).unwrap();
        assert!(matches!(out, Outcome::Refuted(_)), "{m}: {out:?}");
    }
}

#[test]
fn altreach_constructive_at_small_k() {
    let p = problem("altreach").unwrap();
    let r = check_uniformity(&p, &query(7, 3, &[7], Mode::Constructive, true)).unwrap();
    assert!(r.is_uniform());
}

#[test]
fn builders_need_room() {
    let g = Arc::new(builtin::st_graph());
    let a = Structure::empty(g, 2).unwrap();
    assert!(witness_reach(&a, &BTreeSet::from([0, 1])).is_err());
    assert!(matches!(
        check_uniformity(&problem("reach").unwrap(), &query(2, 2, &[2], Mode::Constructive, true))
            .unwrap()
            .verdicts[0]
            .1,
        Verdict::Inconclusive(_, Inconclusive::Builder(_))
    ));
}

#[test]
fn non_monotone_budget_is_reported() {
    let p = problem("altreach").unwrap();
    let mut q = query(6, 0, &[6], Mode::Exhaustive, true);
    q.options.budget = 1 << 10;
    let r = check_uniformity(&p, &q).unwrap();
    assert!(matches!(
        r.verdicts[0].1,
        Verdict::Inconclusive(_, Inconclusive::Budget { .. })
    ));
}

#[test]
fn supersets_stay_uniform() {
    // reach is contained in reach_undirected, hp_0max in hp_0max_undirected.
    for (small, large) in [("reach", "reach_undirected"), ("hp_0max", "hp_0max_undirected")] {
        let (s, t) = (problem(small).unwrap(), problem(large).unwrap());
        for a in fopkit_core::enumerate_structures(s.vocabulary().clone(), 3, Default::default()).unwrap() {
            assert!(!s.accepts(&a).unwrap() || t.accepts(&a).unwrap());
        }
        let q = query(3, 1, &[3, 4], Mode::Exhaustive, false);
        if check_uniformity(&s, &q).unwrap().is_uniform() {
            assert!(check_uniformity(&t, &q).unwrap().is_uniform(), "{large}");
        }
    }
}

#[test]
fn constructive_agrees_with_exhaustive_on_reach() {
    let p = problem("reach").unwrap();
    let exhaustive = check_uniformity(&p, &query(3, 1, &[3, 4], Mode::Exhaustive, false)).unwrap();
    let constructive = check_uniformity(&p, &query(3, 1, &[3, 4], Mode::Constructive, true)).unwrap();
    assert!(exhaustive.is_uniform());
    assert_eq!(exhaustive.verdicts, constructive.verdicts);
}

#[test]
fn builder_examples() {
    let g = Arc::new(builtin::graph());
    let out = witness_hp(&Structure::empty(g.clone(), 4).unwrap(), &BTreeSet::new()).unwrap();
    assert_eq!(out.tuples(0).collect::<Vec<_>>(), [[0, 1], [1, 2], [2, 3]]);

    let out = witness_comono(&Structure::empty(g, 8).unwrap(), &BTreeSet::from([0, 1])).unwrap();
    assert_eq!(out.tuples(0).count(), 30);
    assert!(out.tuples(0).all(|t| t[0] >= 2 && t[1] >= 2));

    let alt = Arc::new(builtin::alt_graph());
    let a = Structure::from_parts(alt.clone(), 3, &[], &[("s", 0), ("t", 1)]).unwrap();
    let out = witness_altreach(&a, &BTreeSet::from([0, 1])).unwrap();
    assert!(deciders::altreach(&out));
    assert!(out.holds("E", &[0, 2]).unwrap() && out.holds("E", &[2, 1]).unwrap());

    // s universal with an asserted edge (s, 1): 1 must lead on to t.
    let a = Structure::from_parts(alt, 4, &[("E", &[&[0, 1]]), ("U", &[&[0]])], &[("s", 0), ("t", 2)]).unwrap();
    let out = witness_altreach(&a, &BTreeSet::from([0, 1, 2])).unwrap();
    assert!(out.holds("E", &[1, 3]).unwrap());
    assert!(deciders::altreach(&out));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sharding_does_not_change_the_verdict(shards in 1usize..6, name in prop::sample::select(vec!["reach", "hp_0max", "co_mono_triangle", "mono_triangle"])) {
        let p = problem(name).unwrap();
        let opts = Options::default();
        let whole = merge_shards(vec![check_shard(&p, 2, 3, &opts, 0, 1).unwrap()]);
        let parts = (0..shards).map(|w| check_shard(&p, 2, 3, &opts, w, shards).unwrap()).collect();
        prop_assert_eq!(merge_shards(parts), whole);
    }

    #[test]
    fn uniform_verdicts_are_inherited(k in 0usize..3, n in 2u32..4) {
        let p = problem("reach").unwrap();
        let r = check_uniformity(&p, &query(n, k, &[n, n + 1], Mode::Exhaustive, true)).unwrap();
        if r.is_uniform() {
            if k > 0 {
                prop_assert!(check_uniformity(&p, &query(n, k - 1, &[n, n + 1], Mode::Exhaustive, true)).unwrap().is_uniform());
            }
            prop_assert!(check_uniformity(&p, &query(n + 1, k, &[n + 1], Mode::Exhaustive, true)).unwrap().is_uniform());
        }
    }
}
