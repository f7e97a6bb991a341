#![allow(dead_code)]

use std::sync::Arc;

use fopkit_core::fop::{coordinates, FoQuery};
use fopkit_core::formula::{Formula, NumericRel, Term};
use fopkit_core::structure::{Structure, StructureSpace};
use fopkit_core::vocab::{builtin, Vocabulary};
use proptest::prelude::*;

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

fn term_from(vars: Vec<String>) -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => prop::sample::select(vars).prop_map(|v| Term::var(&v)),
        1 => (0u32..5).prop_map(Term::elem),
        1 => Just(Term::Max),
        1 => prop::sample::select(&["s", "t"][..]).prop_map(Term::constant),
    ]
}

fn atom_from(vars: Vec<String>, so: bool) -> impl Strategy<Value = Formula> {
    let t = || term_from(vars.clone());
    let numeric = prop::sample::select(&[NumericRel::Eq, NumericRel::Le, NumericRel::Bit, NumericRel::Suc][..]);
    let p = if so { 1 } else { 0 };
    prop_oneof![
        4 => (t(), t()).prop_map(|(a, b)| Formula::rel("E", [a, b])),
        2 => (numeric, t(), t()).prop_map(|(r, a, b)| Formula::num(r, a, b)),
        p => (t(), t()).prop_map(|(a, b)| Formula::rel("P", [a, b])),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ]
}

fn connectives(inner: BoxedStrategy<Formula>, quantify: bool) -> BoxedStrategy<Formula> {
    let q = if quantify { 1 } else { 0 };
    prop_oneof![
        2 => inner.clone().prop_map(Formula::not),
        2 => prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
        2 => prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
        1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
        1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
        q => (prop::sample::subsequence(&VARS[..], 1..3), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
        q => (prop::sample::subsequence(&VARS[..], 1..3), inner).prop_map(|(v, b)| Formula::exists(v, b)),
    ]
    .boxed()
}

/// Formulas over `st-graph` of depth at most 4, some with a binary
/// second-order quantifier on `P`.
pub fn formula() -> impl Strategy<Value = Formula> {
    let vars: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
    (
        atom_from(vars, true).prop_recursive(3, 24, 3, |inner| connectives(inner.boxed(), true)),
        any::<bool>(),
    )
        .prop_map(|(f, universal)| {
            if !f.free_relations().contains("P") {
                f
            } else if universal {
                Formula::forall_so("P", 2, f)
            } else {
                Formula::exists_so("P", 2, f)
            }
        })
}

fn qf_over(vars: Vec<String>) -> impl Strategy<Value = Formula> {
    atom_from(vars, false).prop_recursive(2, 8, 3, |inner| connectives(inner.boxed(), false))
}

/// Quantifier-free queries `st-graph -> st-graph` of arity 1 or 2.
pub fn query() -> impl Strategy<Value = FoQuery> {
    (1usize..=2).prop_flat_map(|k| {
        (
            qf_over(coordinates(2 * k)),
            prop::collection::vec(qf_over(coordinates(k)), 2),
        )
            .prop_map(move |(e, consts)| {
                let voc = Arc::new(builtin::st_graph());
                FoQuery::new("generated", voc.clone(), voc, k, vec![e], consts).unwrap()
            })
    })
}

pub fn vocabularies() -> Vec<Arc<Vocabulary>> {
    builtin::all().into_iter().map(Arc::new).collect()
}

/// A structure of size 2..=3 over a builtin vocabulary, drawn by index.
pub fn structure() -> impl Strategy<Value = Structure> {
    (prop::sample::select(vocabularies()), 2u32..=3, any::<u64>()).prop_map(|(voc, n, seed)| {
        let space = StructureSpace::full(voc, n).unwrap();
        space.nth(seed % space.count_within(u64::MAX).unwrap())
    })
}
