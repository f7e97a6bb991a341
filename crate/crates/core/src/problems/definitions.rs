//! Logical definitions of catalog problems as second-order sentences.

use crate::formula::{Formula, NumericRel, Term};

fn v(name: &str) -> Term {
    Term::var(name)
}

fn r(name: &str, args: &[&str]) -> Formula {
    Formula::rel(name, args.iter().map(|a| v(a)))
}

fn neq(a: Term, b: Term) -> Formula {
    Formula::not(Formula::eq(a, b))
}

/// `a < b` from `<=` and `=`.
fn lt(a: &str, b: &str) -> Formula {
    Formula::and([Formula::num(NumericRel::Le, v(a), v(b)), neq(v(a), v(b))])
}

/// `∃R³ [∀x̄ (R(x̄) → M(x̄)) ∧ ∀x (each coordinate is covered)
/// ∧ ∀x̄ȳ (R(x̄) ∧ R(ȳ) ∧ x̄ ≠ ȳ → x1≠y1 ∧ x2≠y2 ∧ x3≠y3)]`
pub fn three_dm() -> Formula {
    let subset = Formula::forall(
        ["x1", "x2", "x3"],
        Formula::implies(r("R", &["x1", "x2", "x3"]), r("M", &["x1", "x2", "x3"])),
    );
    let covered = Formula::forall(
        ["x"],
        Formula::and([
            Formula::exists(["x2", "x3"], r("R", &["x", "x2", "x3"])),
            Formula::exists(["x1", "x3"], r("R", &["x1", "x", "x3"])),
            Formula::exists(["x1", "x2"], r("R", &["x1", "x2", "x"])),
        ]),
    );
    let distinct = Formula::forall(
        ["x1", "x2", "x3", "y1", "y2", "y3"],
        Formula::implies(
            Formula::and([
                r("R", &["x1", "x2", "x3"]),
                r("R", &["y1", "y2", "y3"]),
                Formula::or([neq(v("x1"), v("y1")), neq(v("x2"), v("y2")), neq(v("x3"), v("y3"))]),
            ]),
            Formula::and([neq(v("x1"), v("y1")), neq(v("x2"), v("y2")), neq(v("x3"), v("y3"))]),
        ),
    );
    Formula::exists_so("R", 3, Formula::and([subset, covered, distinct]))
}

/// `∃O²`: `O` a strict total order whose consecutive pairs are edges, with
/// `from` first and `to` last.
fn hamiltonian_order(from: Term, to: Term) -> Formula {
    let o = |a: &str, b: &str| r("O", &[a, b]);
    let irreflexive = Formula::forall(["x"], Formula::not(o("x", "x")));
    let total = Formula::forall(
        ["x", "y"],
        Formula::implies(neq(v("x"), v("y")), Formula::or([o("x", "y"), o("y", "x")])),
    );
    let transitive = Formula::forall(
        ["x", "y", "z"],
        Formula::implies(Formula::and([o("x", "y"), o("y", "z")]), o("x", "z")),
    );
    let consecutive = Formula::forall(
        ["x", "y"],
        Formula::implies(
            Formula::and([
                o("x", "y"),
                Formula::not(Formula::exists(["z"], Formula::and([o("x", "z"), o("z", "y")]))),
            ]),
            r("E", &["x", "y"]),
        ),
    );
    let first = Formula::forall(
        ["x"],
        Formula::implies(neq(v("x"), from.clone()), Formula::rel("O", [from, v("x")])),
    );
    let last = Formula::forall(
        ["x"],
        Formula::implies(neq(v("x"), to.clone()), Formula::rel("O", [v("x"), to])),
    );
    Formula::exists_so(
        "O",
        2,
        Formula::and([irreflexive, total, transitive, consecutive, first, last]),
    )
}

/// Hamiltonian path from `0` to `max`.
pub fn hp_0max() -> Formula {
    hamiltonian_order(Term::Zero, Term::Max)
}

/// Hamiltonian path from `s` to `t`.
pub fn hp_two_points() -> Formula {
    hamiltonian_order(Term::constant("s"), Term::constant("t"))
}

fn adjacent(a: &str, b: &str) -> Formula {
    Formula::or([r("E", &[a, b]), r("E", &[b, a])])
}

/// `x < y < z` spanning a triangle of the symmetrised graph whose edges all
/// get the same colour under `C` (edge `{u, w}` with `u < w` has colour
/// `C(u, w)`).
fn mono_triangle_at() -> Formula {
    let c = |a: &str, b: &str| r("C", &[a, b]);
    Formula::and([
        lt("x", "y"),
        lt("y", "z"),
        adjacent("x", "y"),
        adjacent("y", "z"),
        adjacent("x", "z"),
        Formula::or([
            Formula::and([c("x", "y"), c("y", "z"), c("x", "z")]),
            Formula::and([
                Formula::not(c("x", "y")),
                Formula::not(c("y", "z")),
                Formula::not(c("x", "z")),
            ]),
        ]),
    ])
}

/// `∃C² ∀xyz ¬(monochromatic triangle at x < y < z)`
pub fn mono_triangle() -> Formula {
    Formula::exists_so(
        "C",
        2,
        Formula::forall(["x", "y", "z"], Formula::not(mono_triangle_at())),
    )
}

/// `∀C² ∃xyz (monochromatic triangle at x < y < z)`
pub fn co_mono_triangle() -> Formula {
    Formula::forall_so("C", 2, Formula::exists(["x", "y", "z"], mono_triangle_at()))
}

/// `∀P¹ [(P(s) ∧ ∀xy (P(x) ∧ E(x,y) → P(y))) → P(t)]`
pub fn reach() -> Formula {
    let closed = Formula::and([
        Formula::rel("P", [Term::constant("s")]),
        Formula::forall(
            ["x", "y"],
            Formula::implies(Formula::and([r("P", &["x"]), r("E", &["x", "y"])]), r("P", &["y"])),
        ),
    ]);
    Formula::forall_so(
        "P",
        1,
        Formula::implies(closed, Formula::rel("P", [Term::constant("t")])),
    )
}

/// `∀P¹ [P closed under the accessibility rules towards t → P(s)]`
pub fn altreach() -> Formula {
    let p = |x: &str| r("P", &[x]);
    let existential = Formula::forall(
        ["x"],
        Formula::implies(
            Formula::and([
                Formula::not(r("U", &["x"])),
                Formula::exists(["y"], Formula::and([r("E", &["x", "y"]), p("y")])),
            ]),
            p("x"),
        ),
    );
    let universal = Formula::forall(
        ["x"],
        Formula::implies(
            Formula::and([
                r("U", &["x"]),
                Formula::exists(["y"], r("E", &["x", "y"])),
                Formula::forall(["y"], Formula::implies(r("E", &["x", "y"]), p("y"))),
            ]),
            p("x"),
        ),
    );
    let closed = Formula::and([Formula::rel("P", [Term::constant("t")]), existential, universal]);
    Formula::forall_so(
        "P",
        1,
        Formula::implies(closed, Formula::rel("P", [Term::constant("s")])),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::builtin;

    #[test]
    fn definitions_are_well_formed_sentences() {
        let cases = [
            (three_dm(), builtin::three_dm()),
            (hp_0max(), builtin::graph()),
            (hp_two_points(), builtin::st_graph()),
            (mono_triangle(), builtin::graph()),
            (co_mono_triangle(), builtin::graph()),
            (reach(), builtin::st_graph()),
            (altreach(), builtin::alt_graph()),
        ];
        for (f, voc) in cases {
            f.check(&voc).unwrap();
            assert!(f.is_sentence(), "{f}");
        }
    }
}
