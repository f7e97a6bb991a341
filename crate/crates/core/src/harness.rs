//! Bounded verification harnesses: superfluity of universal sentences with
//! respect to a fop, and decider agreement on restricted domains.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::classify::to_prenex_universal;
use crate::error::{Error, Result};
use crate::eval::{eval_fo, holds, Assignment};
use crate::fop::{expand_assignment, literal_shapes, pullback, Fop};
use crate::formula::{Formula, Literal, NumericRel, Term};
use crate::problems::{deciders, DecisionProblem, Problem};
use crate::structure::{checked_power, enumerate_structures, tuple_at, Limits, Structure, StructureSpace};
use crate::vocab::builtin;

/// A source structure whose image falsifies the sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperfluityCounterexample {
    pub structure: Structure,
    pub image: Structure,
    /// Values of the prenex variables over the image.
    pub assignment: Vec<(String, u32)>,
    /// The falsified clause with the variables replaced by image elements.
    pub clause: Formula,
    /// The pullback of the negated non-numeric literals of the clause,
    /// `⋀ μ_j` over the source vocabulary; it holds in `structure`. The
    /// ground numeric literals of the clause are false in the image.
    pub pulled_back: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperfluityReport {
    pub size_bound: u32,
    pub structures_checked: u64,
    pub counterexample: Option<SuperfluityCounterexample>,
}

impl SuperfluityReport {
    pub fn is_superfluous(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `ρ(A) |= ψ` for every source structure `A` of size `2..=size_bound`,
/// in enumeration order, stopping at the first failure.
pub fn check_superfluous_wrt_fop(psi: &Formula, rho: &Fop, size_bound: u32, budget: u64) -> Result<SuperfluityReport> {
    psi.check(rho.target())?;
    if !psi.is_sentence() {
        return Err(Error::UnboundVariable(psi.free_variables().remove(0)));
    }
    let prenex = to_prenex_universal(psi)?;
    let mut checked = 0u64;
    for n in 2..=size_bound {
        let limits = Limits {
            max_size: size_bound.max(2),
            max_count: budget,
        };
        for a in enumerate_structures(rho.source().clone(), n, limits)? {
            checked += 1;
            let image = rho.apply(&a)?;
            if holds(&image, psi)? {
                continue;
            }
            let (assignment, clause) = falsified_clause(&image, &prenex.variables, &prenex.clauses)?;
            let pulled_back = Formula::conj(
                clause
                    .iter()
                    .filter(|l| !l.is_numeric())
                    .map(|l| pullback(rho, &l.negated().to_formula(), n))
                    .collect::<Result<Vec<_>>>()?,
            );
            return Ok(SuperfluityReport {
                size_bound,
                structures_checked: checked,
                counterexample: Some(SuperfluityCounterexample {
                    structure: a,
                    image,
                    assignment,
                    clause: Formula::disj(clause.iter().map(Literal::to_formula)),
                    pulled_back,
                }),
            });
        }
    }
    Ok(SuperfluityReport {
        size_bound,
        structures_checked: checked,
        counterexample: None,
    })
}

type Falsified = (Vec<(String, u32)>, Vec<Literal>);

/// The first assignment (lexicographic) and clause of `∀x̄ ⋀ clauses` that
/// fail in `image`, with the clause grounded.
fn falsified_clause(image: &Structure, variables: &[String], clauses: &[Vec<Literal>]) -> Result<Falsified> {
    let m = image.size();
    let total = checked_power(m as u64, variables.len()).ok_or(Error::TooLarge {
        size: m as u64,
        arity: variables.len(),
    })?;
    for idx in 0..total {
        let values = tuple_at(idx, m, variables.len());
        let asg: Assignment = variables.iter().cloned().zip(values.iter().copied()).collect();
        for clause in clauses {
            let f = Formula::disj(clause.iter().map(Literal::to_formula));
            if !eval_fo(image, &f, &asg)? {
                let map: Vec<(String, Term)> = asg.iter().map(|(v, &e)| (v.clone(), Term::elem(e))).collect();
                let ground = clause
                    .iter()
                    .map(|l| Literal::from_formula(&l.to_formula().substitute(&map)).expect("literal"))
                    .collect();
                return Ok((asg.into_iter().collect(), ground));
            }
        }
    }
    Err(Error::InvalidQuery("sentence fails but no clause instance does".into()))
}

/// An image literal whose value differs from that of its pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackMismatch {
    pub structure: Structure,
    pub literal: Formula,
    pub pulled_back: Formula,
    pub assignment: Vec<(String, u32)>,
    pub image_value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PullbackReport {
    pub structures: u64,
    pub checks: u64,
    /// The first mismatch, keyed by `(size, structure index)`.
    pub mismatch: Option<((u32, u64), PullbackMismatch)>,
}

impl PullbackReport {
    /// Sums counts and keeps the earliest mismatch.
    pub fn merge(mut self, other: PullbackReport) -> PullbackReport {
        self.structures += other.structures;
        self.checks += other.checks;
        self.mismatch = match (self.mismatch, other.mismatch) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// The source structures of size `n`, and their count within `budget`.
pub fn source_space(fop: &Fop, n: u32, budget: u64) -> Result<(StructureSpace, u64)> {
    let space = StructureSpace::full(fop.source().clone(), n)?;
    let count = space.count_within(budget)?;
    Ok((space, count))
}

/// Checks `ρ(B) |= η(ā)` iff `B |= μ(ā')` for every target literal shape `η`,
/// every size-`n` source structure `B` at positions `start..end` and every
/// assignment `ā` over the image, where `ā'` spreads `ā` into coordinates.
pub fn check_pullback_range(fop: &Fop, n: u32, start: u64, end: u64, budget: u64) -> Result<PullbackReport> {
    let (space, count) = source_space(fop, n, budget)?;
    let shapes: Vec<(Formula, Formula, Vec<String>)> = literal_shapes(fop.target())
        .into_iter()
        .map(|eta| {
            let mu = pullback(fop, &eta, n)?;
            let vars = eta.free_variables();
            Ok((eta, mu, vars))
        })
        .collect::<Result<_>>()?;
    let mut report = PullbackReport::default();
    for index in start..end.min(count) {
        let b = space.nth(index);
        let image = fop.apply(&b)?;
        let m = image.size();
        report.structures += 1;
        for (eta, mu, vars) in &shapes {
            let total = checked_power(m as u64, vars.len()).ok_or(Error::TooLarge {
                size: m as u64,
                arity: vars.len(),
            })?;
            for i in 0..total {
                let asg: Assignment = vars.iter().cloned().zip(tuple_at(i, m, vars.len())).collect();
                let image_value = eval_fo(&image, eta, &asg)?;
                let source_value = eval_fo(&b, mu, &expand_assignment(&asg, n, fop.arity()))?;
                report.checks += 1;
                if image_value != source_value {
                    report.mismatch = Some((
                        (n, index),
                        PullbackMismatch {
                            structure: b,
                            literal: eta.clone(),
                            pulled_back: mu.clone(),
                            assignment: asg.into_iter().collect(),
                            image_value,
                        },
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// [`check_pullback_range`] over every source structure of size
/// `2..=size_bound`.
pub fn check_pullback(fop: &Fop, size_bound: u32, budget: u64) -> Result<PullbackReport> {
    let mut report = PullbackReport::default();
    for n in 2..=size_bound {
        let (_, count) = source_space(fop, n, budget)?;
        report = report.merge(check_pullback_range(fop, n, 0, count, budget)?);
        if report.mismatch.is_some() {
            break;
        }
    }
    Ok(report)
}

/// `∀u ∀v (E(u, v) → ¬u = max ∧ ¬v = max)`: no image edge touches the last
/// element. Holds in every image of the reach and altreach paddings, whose
/// edges stay inside the block with zero prefix.
pub fn block0_guard() -> Formula {
    let (u, v) = (Term::var("u"), Term::var("v"));
    Formula::forall(
        ["u", "v"],
        Formula::implies(
            Formula::rel("E", [u.clone(), v.clone()]),
            Formula::and([
                Formula::not(Formula::eq(u, Term::Max)),
                Formula::not(Formula::eq(v, Term::Max)),
            ]),
        ),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarnessCase {
    /// Outside the harness domain.
    Excluded,
    Agree,
    Disagree,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HarnessReport {
    pub checked: u64,
    pub excluded: u64,
    pub disagreements: Vec<Structure>,
}

impl HarnessReport {
    fn record(&mut self, case: HarnessCase, a: &Structure) {
        match case {
            HarnessCase::Excluded => self.excluded += 1,
            HarnessCase::Agree => self.checked += 1,
            HarnessCase::Disagree => {
                self.checked += 1;
                self.disagreements.push(a.clone());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// `ψ1 ∧ ψ2` with `ψ1 = ∀xyz (L(x,y,z) → z = 0)` (edge lengths in `{0, 1}`)
/// and `ψ2 = ∀x (K(x) ↔ bit(max, x))` (the bound is `max`).
pub fn longest_path_restriction() -> Formula {
    let v = Term::var;
    let psi1 = Formula::forall(
        ["x", "y", "z"],
        Formula::implies(
            Formula::rel("L", [v("x"), v("y"), v("z")]),
            Formula::eq(v("z"), Term::Zero),
        ),
    );
    let psi2 = Formula::forall(
        ["x"],
        Formula::iff(
            Formula::rel("K", [v("x")]),
            Formula::num(NumericRel::Bit, Term::Max, v("x")),
        ),
    );
    Formula::and([psi1, psi2])
}

/// Longest path against Hamiltonian path from `s` to `t` on the `E, s, t`
/// reduct. The domain is the structures satisfying the restriction whose
/// edges all have length one: `L = {(x, y, 0) : E(x, y)}`.
pub fn longest_path_case(a: &Structure) -> Result<HarnessCase> {
    a.require_vocabulary(&builtin::longest_path())?;
    if !holds(a, &longest_path_restriction())? {
        return Ok(HarnessCase::Excluded);
    }
    let n = a.size() as usize;
    let (l, e) = (0, 1);
    let unit = (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|i| a.holds_at(l, (x * n + y) * n + i) == (i == 0 && a.holds_at(e, x * n + y))))
    });
    if !unit {
        return Ok(HarnessCase::Excluded);
    }
    let reduct = longest_path_reduct(a)?;
    Ok(if deciders::longest_path(a) == deciders::hp_two_points(&reduct) {
        HarnessCase::Agree
    } else {
        HarnessCase::Disagree
    })
}

fn longest_path_reduct(a: &Structure) -> Result<Structure> {
    let mut out = Structure::empty(Arc::new(builtin::st_graph()), a.size())?;
    for (i, &b) in a.table(1).iter().enumerate() {
        out.set_at(0, i, b);
    }
    out.set_constant("s", a.constant("s")?)?;
    out.set_constant("t", a.constant("t")?)?;
    Ok(out)
}

/// The unit-length longest path instance over a graph with `s`, `t`:
/// `L = {(x, y, 0) : E(x, y)}` and `K` the bits of `max`.
pub fn unit_length_instance(g: &Structure) -> Result<Structure> {
    let n = g.size() as usize;
    let mut a = Structure::empty(Arc::new(builtin::longest_path()), g.size())?;
    for (i, &b) in g.table(0).iter().enumerate() {
        a.set_at(1, i, b);
        a.set_at(0, i * n, b);
    }
    let max = g.size() - 1;
    for i in 0..n {
        a.set_at(2, i, i < 32 && (max >> i) & 1 == 1);
    }
    a.set_constant("s", g.constant("s")?)?;
    a.set_constant("t", g.constant("t")?)?;
    Ok(a)
}

/// Runs [`longest_path_case`] on the unit-length instance of every graph
/// with `s`, `t` of size `2..=size_bound`.
pub fn longest_path_harness(size_bound: u32, budget: u64) -> Result<HarnessReport> {
    let mut report = HarnessReport::default();
    let voc = Arc::new(builtin::st_graph());
    for n in 2..=size_bound {
        let limits = Limits {
            max_size: size_bound,
            max_count: budget,
        };
        for g in enumerate_structures(voc.clone(), n, limits)? {
            let a = unit_length_instance(&g)?;
            report.record(longest_path_case(&a)?, &a);
        }
    }
    Ok(report)
}

/// `∀x ∀y (E(x, y) → E(y, x))`
pub fn symmetric() -> Formula {
    let (x, y) = (Term::var("x"), Term::var("y"));
    Formula::forall(
        ["x", "y"],
        Formula::implies(Formula::rel("E", [x.clone(), y.clone()]), Formula::rel("E", [y, x])),
    )
}

/// On symmetric graphs the directed and undirected deciders must agree.
pub fn directed_case(directed: &Problem, undirected: &Problem, a: &Structure) -> Result<HarnessCase> {
    if !holds(a, &symmetric())? {
        return Ok(HarnessCase::Excluded);
    }
    Ok(if directed.accepts(a)? == undirected.accepts(a)? {
        HarnessCase::Agree
    } else {
        HarnessCase::Disagree
    })
}

/// Every symmetric structure of size `n` over the problem's vocabulary (with
/// every constant assignment), ordered by the upper-triangle edge mask.
pub fn symmetric_graphs(p: &Problem, n: u32) -> Result<Vec<Structure>> {
    let voc = p.vocabulary().clone();
    if voc.relations().len() != 1 || voc.relations()[0].1 != 2 {
        return Err(Error::InvalidVocabulary("expected a single binary relation".into()));
    }
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    if pairs.len() >= 32 {
        return Err(Error::TooLarge {
            size: n as u64,
            arity: 2,
        });
    }
    let consts = voc.constants().len();
    let assignments = checked_power(n as u64, consts).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let mut g = Structure::empty(voc.clone(), n)?;
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                g.set_at(0, (i * n + j) as usize, true);
                g.set_at(0, (j * n + i) as usize, true);
            }
        }
        for idx in 0..assignments {
            let mut s = g.clone();
            for (c, v) in tuple_at(idx, n, consts).into_iter().enumerate() {
                s.set_constant_at(c, v);
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Runs [`directed_case`] on every symmetric graph of size `2..=size_bound`.
pub fn directed_harness(directed: &Problem, undirected: &Problem, size_bound: u32) -> Result<HarnessReport> {
    if directed.vocabulary() != undirected.vocabulary() {
        return Err(Error::VocabularyMismatch {
            expected: directed.vocabulary().name().into(),
            found: undirected.vocabulary().name().into(),
        });
    }
    let mut report = HarnessReport::default();
    for n in 2..=size_bound {
        for a in symmetric_graphs(directed, n)? {
            report.record(directed_case(directed, undirected, &a)?, &a);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::DEFAULT_BUDGET;
    use crate::problems::{problem, reductions};
    use alloc::string::ToString;

    fn path_instance(edges: &[&[u32]]) -> Structure {
        let g =
            Structure::from_parts(Arc::new(builtin::st_graph()), 3, &[("E", edges)], &[("s", 0), ("t", 2)]).unwrap();
        unit_length_instance(&g).unwrap()
    }

    #[test]
    fn tautology_is_superfluous() {
        let psi = Formula::forall(["x"], Formula::eq(Term::var("x"), Term::var("x")));
        let rho = reductions::swap_1_max().unwrap();
        assert!(check_superfluous_wrt_fop(&psi, &rho, 3, DEFAULT_BUDGET)
            .unwrap()
            .is_superfluous());
    }

    #[test]
    fn no_edges_fails_under_identity() {
        let voc = Arc::new(builtin::graph());
        let psi = Formula::forall(
            ["x", "y"],
            Formula::not(Formula::rel("E", [Term::var("x"), Term::var("y")])),
        );
        let rho = reductions::identity(voc.clone()).unwrap();
        let report = check_superfluous_wrt_fop(&psi, &rho, 2, DEFAULT_BUDGET).unwrap();
        let cx = report.counterexample.unwrap();
        assert_eq!(cx.structure.tuples(0).count(), 1);
        assert_eq!(cx.clause.to_string(), "(not (E 0 0))");
        assert!(holds(&cx.structure, &cx.pulled_back).unwrap());
    }

    #[test]
    fn block0_guard_is_superfluous_for_reach_padding() {
        let rho = reductions::autoreduction("reach", 3).unwrap();
        let report = check_superfluous_wrt_fop(&block0_guard(), &rho, 3, DEFAULT_BUDGET).unwrap();
        assert!(report.is_superfluous());
        assert_eq!(report.structures_checked, 16 * 4 + 512 * 9);
        let id = reductions::identity(Arc::new(builtin::st_graph())).unwrap();
        assert!(!check_superfluous_wrt_fop(&block0_guard(), &id, 2, DEFAULT_BUDGET)
            .unwrap()
            .is_superfluous());
    }

    #[test]
    fn pullback_of_swap_is_sound() {
        let report = check_pullback(&reductions::swap_1_max().unwrap(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.structures, 16 + 512);
        assert!(report.mismatch.is_none());
    }

    #[test]
    fn longest_path_examples() {
        let a = path_instance(&[&[0, 1], &[1, 2]]);
        assert!(deciders::longest_path(&a));
        assert_eq!(longest_path_case(&a), Ok(HarnessCase::Agree));
        let b = path_instance(&[&[0, 1]]);
        assert!(!deciders::longest_path(&b));
        assert_eq!(longest_path_case(&b), Ok(HarnessCase::Agree));
        let mut c = a.clone();
        c.set("K", &[1], false).unwrap();
        assert_eq!(longest_path_case(&c), Ok(HarnessCase::Excluded));
    }

    #[test]
    fn directed_examples() {
        let (d, u) = (problem("hp_0max").unwrap(), problem("hp_0max_undirected").unwrap());
        let g = Arc::new(builtin::graph());
        let sym = Structure::from_parts(g.clone(), 3, &[("E", &[&[0, 1], &[1, 0], &[1, 2], &[2, 1]])], &[]).unwrap();
        assert_eq!(directed_case(&d, &u, &sym), Ok(HarnessCase::Agree));
        let asym = Structure::from_parts(g.clone(), 3, &[("E", &[&[0, 1]])], &[]).unwrap();
        assert_eq!(directed_case(&d, &u, &asym), Ok(HarnessCase::Excluded));
        let empty = Structure::empty(g, 3).unwrap();
        assert_eq!(directed_case(&d, &u, &empty), Ok(HarnessCase::Agree));
        assert_eq!(symmetric_graphs(&d, 3).unwrap().len(), 64);
    }
}
