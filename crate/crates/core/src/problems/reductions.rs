//! Catalog fops: identity, the `1 <-> max` swap and the padding
//! autoreductions.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fop::{coordinate, FoQuery, Fop, DEFAULT_EXCLUSIVITY_BOUND};
use crate::formula::{Formula, NumericRel, Term};
use crate::vocab::{builtin, Vocabulary};

fn x(i: usize) -> Term {
    Term::Var(coordinate(i))
}

/// `R(x1, ..., xa)` for each relation and `x1 = c` for each constant.
pub fn identity(voc: Arc<Vocabulary>) -> Result<Fop> {
    let relations = voc
        .relations()
        .iter()
        .map(|(name, arity)| Formula::rel(name, (1..=*arity).map(x)))
        .collect();
    let constants = voc
        .constants()
        .iter()
        .map(|c| Formula::eq(x(1), Term::constant(c)))
        .collect();
    let q = FoQuery::new("identity", voc.clone(), voc, 1, relations, constants)?;
    Fop::new(q, DEFAULT_EXCLUSIVITY_BOUND)
}

/// Graph fop exchanging vertex `1` with `max`: `E'(u, v)` iff `E(π u, π v)`
/// where `π` swaps `1` and `max`. It reduces Hamiltonian paths from `0` to `1`
/// to Hamiltonian paths from `0` to `max`.
pub fn swap_1_max() -> Result<Fop> {
    let g = Arc::new(builtin::graph());
    let one = |t: Term| Formula::num(NumericRel::Suc, Term::Zero, t);
    let is_max = |t: Term| Formula::eq(t, Term::Max);
    // (guard on the variable, image of the variable under π)
    let cases = |t: Term| {
        [
            (is_max(t.clone()), Term::elem(1)),
            (
                Formula::and([one(t.clone()), Formula::not(is_max(t.clone()))]),
                Term::Max,
            ),
            (
                Formula::and([Formula::not(one(t.clone())), Formula::not(is_max(t.clone()))]),
                t,
            ),
        ]
    };
    let mut disjuncts = Vec::new();
    for (g1, t1) in cases(x(1)) {
        for (g2, t2) in cases(x(2)) {
            disjuncts.push(Formula::and([g1.clone(), g2, Formula::rel("E", [t1.clone(), t2])]));
        }
    }
    let q = FoQuery::new(
        "swap-1-max",
        g.clone(),
        g,
        1,
        Vec::from([Formula::or(disjuncts)]),
        Vec::new(),
    )?;
    Fop::new(q, DEFAULT_EXCLUSIVITY_BOUND)
}

/// The least `k` with `2^k > n`.
pub fn padding_arity(n: u32) -> usize {
    (0..).find(|&k| (1u64 << k) > n as u64).unwrap()
}

/// Catalog problems with a padding autoreduction.
pub const AUTOREDUCIBLE: &[&str] = &["reach", "altreach", "hp_0max", "co_mono_triangle"];

/// `x_i = 0` for every prefix coordinate of the block starting at `offset`.
fn prefix_zero(k: usize, offset: usize) -> Vec<Formula> {
    (1..k).map(|j| Formula::eq(x(offset + j), Term::Zero)).collect()
}

fn prefix_equal(k: usize) -> Vec<Formula> {
    (1..k).map(|j| Formula::eq(x(j), x(k + j))).collect()
}

/// The prefix `x{k+1} .. x{2k-1}` is the lexicographic successor of
/// `x1 .. x{k-1}`.
fn prefix_successor(k: usize) -> Formula {
    let p = |j: usize| x(j);
    let q = |j: usize| x(k + j);
    Formula::disj((1..k).map(|i| {
        let mut parts = Vec::new();
        for j in 1..i {
            parts.push(Formula::eq(p(j), q(j)));
        }
        parts.push(Formula::num(NumericRel::Suc, p(i), q(i)));
        for j in i + 1..k {
            parts.push(Formula::eq(p(j), Term::Max));
            parts.push(Formula::eq(q(j), Term::Zero));
        }
        Formula::conj(parts)
    }))
}

/// A fop from the problem to itself whose images have size `|A|^k > n`,
/// with `k` the least integer such that `2^k > n`.
///
/// * `reach`, `altreach`: the input sits in the block whose prefix
///   coordinates are all `0`; every other element is isolated.
/// * `hp_0max`: `n^(k-1)` copies of the input in lexicographic order, the
///   `max` of each copy joined to the `0` of the next.
/// * `co_mono_triangle`: `n^(k-1)` disjoint copies of the input.
pub fn autoreduction(problem: &str, n: u32) -> Result<Fop> {
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let k = padding_arity(n);
    let edge = Formula::rel("E", [x(k), x(2 * k)]);
    let block0_unary = |rel: &str| {
        let mut parts = prefix_zero(k, 0);
        parts.push(Formula::rel(rel, [x(k)]));
        Formula::conj(parts)
    };
    let block0_constant = |c: &str| {
        let mut parts = prefix_zero(k, 0);
        parts.push(Formula::eq(x(k), Term::constant(c)));
        Formula::conj(parts)
    };
    let block0_edge = || {
        let mut parts = prefix_zero(k, 0);
        parts.extend(prefix_zero(k, k));
        parts.push(edge.clone());
        Formula::conj(parts)
    };
    let copies_edge = || {
        let mut parts = prefix_equal(k);
        parts.push(edge.clone());
        Formula::conj(parts)
    };
    let (voc, relations, constants) = match problem {
        "reach" => (
            builtin::st_graph(),
            Vec::from([block0_edge()]),
            Vec::from([block0_constant("s"), block0_constant("t")]),
        ),
        "altreach" => (
            builtin::alt_graph(),
            Vec::from([block0_edge(), block0_unary("U")]),
            Vec::from([block0_constant("s"), block0_constant("t")]),
        ),
        "co_mono_triangle" => (builtin::graph(), Vec::from([copies_edge()]), Vec::new()),
        "hp_0max" => {
            let join = Formula::conj([
                Formula::eq(x(k), Term::Max),
                Formula::eq(x(2 * k), Term::Zero),
                prefix_successor(k),
            ]);
            let e = if k > 1 {
                Formula::or([join, copies_edge()])
            } else {
                copies_edge()
            };
            (builtin::graph(), Vec::from([e]), Vec::new())
        }
        other => return Err(Error::UnknownProblem(other.into())),
    };
    let voc = Arc::new(voc);
    let q = FoQuery::new(&format!("pad-{problem}-{n}"), voc.clone(), voc, k, relations, constants)?;
    Fop::new(q, DEFAULT_EXCLUSIVITY_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::deciders;
    use crate::structure::{enumerate_structures, Limits, Structure};

    #[test]
    fn padding_arity_is_least_power_above() {
        assert_eq!(padding_arity(2), 2);
        assert_eq!(padding_arity(3), 2);
        assert_eq!(padding_arity(4), 3);
        assert_eq!(padding_arity(7), 3);
        assert_eq!(padding_arity(8), 4);
        assert_eq!(autoreduction("reach", 3).unwrap().arity(), 2);
    }

    #[test]
    fn swap_moves_the_edge_to_max() {
        let g = Arc::new(builtin::graph());
        let a = Structure::from_parts(g.clone(), 3, &[("E", &[&[0, 1]])], &[]).unwrap();
        let img = swap_1_max().unwrap().apply(&a).unwrap();
        assert_eq!(img, Structure::from_parts(g, 3, &[("E", &[&[0, 2]])], &[]).unwrap());
    }

    #[test]
    fn identity_is_identity() {
        let voc = Arc::new(builtin::alt_graph());
        let id = identity(voc.clone()).unwrap();
        for a in enumerate_structures(voc, 2, Limits::default()).unwrap() {
            assert_eq!(id.apply(&a).unwrap(), a);
        }
    }

    #[test]
    fn altreach_padding_keeps_unary_in_block_zero() {
        let voc = Arc::new(builtin::alt_graph());
        let a = Structure::from_parts(voc, 2, &[("E", &[&[0, 1]]), ("U", &[&[1]])], &[("s", 0), ("t", 1)]).unwrap();
        let img = autoreduction("altreach", 3).unwrap().apply(&a).unwrap();
        assert_eq!(img.size(), 4);
        assert_eq!(img.tuples(0).collect::<Vec<_>>(), [[0, 1]]);
        assert_eq!(img.tuples(1).collect::<Vec<_>>(), [[1]]);
        assert_eq!((img.constant("s").unwrap(), img.constant("t").unwrap()), (0, 1));
    }

    #[test]
    fn chained_copies_have_a_hamiltonian_path_iff_the_input_does() {
        let g = Arc::new(builtin::graph());
        let rho = autoreduction("hp_0max", 3).unwrap();
        for a in enumerate_structures(g, 2, Limits::default()).unwrap() {
            let img = rho.apply(&a).unwrap();
            assert_eq!(deciders::hp_0max(&a), deciders::hp_0max(&img), "{a:?}");
        }
    }

    #[test]
    fn unknown_problem() {
        assert_eq!(
            autoreduction("three_dm", 3).unwrap_err(),
            Error::UnknownProblem("three_dm".into())
        );
    }
}
