#![allow(dead_code)]

use std::sync::Arc;

use fopkit_core::formula::{Formula, NumericRel, Term};
use fopkit_core::structure::{Structure, StructureSpace};
use fopkit_core::vocab::{builtin, Vocabulary};
use proptest::prelude::*;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn st_graph() -> Arc<Vocabulary> {
    Arc::new(builtin::st_graph())
}

pub fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => prop::sample::select(&VARS[..]).prop_map(Term::var),
        1 => Just(Term::Zero),
        1 => Just(Term::Max),
        1 => Just(Term::constant("s")),
        1 => Just(Term::constant("t")),
    ]
}

pub fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        4 => (term(), term()).prop_map(|(a, b)| Formula::rel("E", [a, b])),
        1 => (term(), term()).prop_map(|(a, b)| Formula::eq(a, b)),
        1 => (term(), term()).prop_map(|(a, b)| Formula::num(NumericRel::Le, a, b)),
        1 => (term(), term()).prop_map(|(a, b)| Formula::num(NumericRel::Bit, a, b)),
        1 => (term(), term()).prop_map(|(a, b)| Formula::num(NumericRel::Suc, a, b)),
    ]
}

/// Quantifier-free formulas over `E, s, t` in the variables `x, y, z`.
pub fn qf_formula() -> impl Strategy<Value = Formula> {
    prop_oneof![8 => atom(), 1 => Just(Formula::True), 1 => Just(Formula::False)].prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

/// First-order formulas over `E, s, t` with quantifiers.
pub fn fo_formula() -> impl Strategy<Value = Formula> {
    prop_oneof![8 => atom(), 1 => Just(Formula::True), 1 => Just(Formula::False)].prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (prop::sample::select(&VARS[..]), inner.clone()).prop_map(|(v, b)| Formula::forall([v], b)),
            (prop::sample::select(&VARS[..]), inner).prop_map(|(v, b)| Formula::exists([v], b)),
        ]
    })
}

/// Closes a formula universally over its free variables.
pub fn universal_closure(f: Formula) -> Formula {
    let free = f.free_variables();
    if free.is_empty() {
        f
    } else {
        Formula::forall(free, f)
    }
}

/// A structure of size `2..=max_size` over `voc` drawn uniformly by index.
pub fn structure(voc: Arc<Vocabulary>, max_size: u32) -> impl Strategy<Value = Structure> {
    (2..=max_size, any::<u64>()).prop_map(move |(n, seed)| {
        let space = StructureSpace::full(voc.clone(), n).unwrap();
        let count = space.count_within(u64::MAX).unwrap();
        space.nth(seed % count)
    })
}
