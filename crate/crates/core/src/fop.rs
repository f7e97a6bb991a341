//! First-order queries and projections as structure transformers.
//!
//! A query of arity `k` from `σ` to `τ` defines each `τ`-relation of arity `a`
//! by a `σ`-formula in the variables `x1 .. x{k*a}` and each `τ`-constant by a
//! formula in `x1 .. xk`. The image universe is `[n]^k`, identified with
//! `[n^k]` through [`tuple_index`](crate::structure::tuple_index).

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::eval::{Assignment, Ctx};
use crate::formula::{Atom, Formula, Literal, NumericRel, Term};
use crate::structure::{checked_power, tuple_at, Structure};
use crate::vocab::Vocabulary;

/// Default largest universe size for exclusivity checks.
pub const DEFAULT_EXCLUSIVITY_BOUND: u32 = 6;

/// Name of the `i`-th (1-based) coordinate variable.
pub fn coordinate(i: usize) -> String {
    format!("x{i}")
}

pub fn coordinates(count: usize) -> Vec<String> {
    (1..=count).map(coordinate).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoQuery {
    pub name: String,
    pub source: Arc<Vocabulary>,
    pub target: Arc<Vocabulary>,
    pub arity: usize,
    /// One formula per target relation, in vocabulary order.
    pub relations: Vec<Formula>,
    /// One formula per target constant, in vocabulary order.
    pub constants: Vec<Formula>,
}

impl FoQuery {
    /// Checks symbol counts, well-formedness over the source vocabulary and
    /// the free-variable discipline.
    pub fn new(
        name: &str,
        source: Arc<Vocabulary>,
        target: Arc<Vocabulary>,
        arity: usize,
        relations: Vec<Formula>,
        constants: Vec<Formula>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidQuery("query arity must be at least 1".into()));
        }
        if relations.len() != target.relations().len() || constants.len() != target.constants().len() {
            return Err(Error::InvalidQuery(format!(
                "`{name}` must define every symbol of `{}`",
                target.name()
            )));
        }
        let q = FoQuery {
            name: name.to_string(),
            source,
            target,
            arity,
            relations,
            constants,
        };
        for (symbol, f, width) in q.definitions() {
            if !f.is_first_order() {
                return Err(Error::NotFirstOrder);
            }
            f.check(&q.source)?;
            let allowed = coordinates(width);
            if let Some(v) = f.free_variables().into_iter().find(|v| !allowed.contains(v)) {
                return Err(Error::InvalidQuery(format!(
                    "formula for `{symbol}` has free variable `{v}` outside x1..x{width}"
                )));
            }
        }
        Ok(q)
    }

    /// `(symbol, formula, number of coordinate variables)` for every target
    /// symbol, relations first.
    pub fn definitions(&self) -> impl Iterator<Item = (&str, &Formula, usize)> {
        let rels = self
            .target
            .relations()
            .iter()
            .zip(&self.relations)
            .map(move |((n, a), f)| (n.as_str(), f, a * self.arity));
        let consts = self
            .target
            .constants()
            .iter()
            .zip(&self.constants)
            .map(move |(n, f)| (n.as_str(), f, self.arity));
        rels.chain(consts)
    }

    pub fn image_size(&self, n: u32) -> Result<u32> {
        checked_power(n as u64, self.arity)
            .filter(|&s| s <= crate::structure::MAX_SIZE as u64)
            .map(|s| s as u32)
            .ok_or(Error::TooLarge {
                size: n as u64,
                arity: self.arity,
            })
    }

    /// The image structure `I(A)`.
    pub fn apply(&self, a: &Structure) -> Result<Structure> {
        a.require_vocabulary(&self.source)?;
        let n = a.size();
        let big = self.image_size(n)?;
        let k = self.arity;
        let mut out = Structure::empty(self.target.clone(), big)?;

        for (j, (name, f)) in self.target.constants().iter().zip(&self.constants).enumerate() {
            let names = coordinates(k);
            let mut ctx = Ctx::with_slots(a, &names);
            let mut hits = Vec::new();
            for idx in 0..big as u64 {
                for (slot, v) in tuple_at(idx, n, k).into_iter().enumerate() {
                    ctx.set(slot, v);
                }
                if ctx.eval_bool(f)? {
                    hits.push(idx);
                }
            }
            if hits.len() != 1 {
                return Err(Error::ConstantNotUnique {
                    constant: name.clone(),
                    count: hits.len() as u64,
                });
            }
            out.set_constant_at(j, hits[0] as u32);
        }

        for (r, ((_, arity), f)) in self.target.relations().iter().zip(&self.relations).enumerate() {
            let names = coordinates(k * arity);
            let mut ctx = Ctx::with_slots(a, &names);
            let cells = out.table(r).len();
            for cell in 0..cells {
                // Image tuple index -> a tuple of image elements -> k*a source
                // coordinates; equivalently the base-n digits of `cell`.
                for (slot, v) in tuple_at(cell as u64, n, k * arity).into_iter().enumerate() {
                    ctx.set(slot, v);
                }
                if ctx.eval_bool(f)? {
                    out.set_at(r, cell, true);
                }
            }
        }
        Ok(out)
    }
}

/// `α0 ∨ (α1 ∧ λ1) ∨ ... ∨ (αe ∧ λe)` with numeric guards and non-numeric
/// literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveForm {
    pub base: Option<Formula>,
    pub cases: Vec<(Formula, Literal)>,
}

impl ProjectiveForm {
    /// All guards, `α0` first when present.
    pub fn guards(&self) -> Vec<&Formula> {
        self.base.iter().chain(self.cases.iter().map(|(a, _)| a)).collect()
    }
}

/// A formula is numeric when it mentions no relation symbol at all
/// (constants are allowed).
pub fn is_numeric(f: &Formula) -> bool {
    f.atoms().iter().all(|a| a.is_numeric())
}

fn non_numeric_literal(f: &Formula) -> Option<Literal> {
    Literal::from_formula(f).filter(|l| !l.is_numeric())
}

/// Splits `f` into projective form, or explains why it is not one.
pub fn projective_form(f: &Formula) -> core::result::Result<ProjectiveForm, String> {
    let disjuncts: Vec<&Formula> = match f {
        Formula::Or(parts) => parts.iter().collect(),
        Formula::False => vec![],
        other => vec![other],
    };
    let mut base = Vec::new();
    let mut cases = Vec::new();
    for d in disjuncts {
        if is_numeric(d) {
            base.push(d.clone());
        } else if let Some(lit) = non_numeric_literal(d) {
            cases.push((Formula::True, lit));
        } else if let Formula::And(parts) = d {
            let (lits, guards): (Vec<&Formula>, Vec<&Formula>) = parts.iter().partition(|p| !is_numeric(p));
            match lits.as_slice() {
                [one] => match non_numeric_literal(one) {
                    Some(lit) => cases.push((Formula::conj(guards.into_iter().cloned()), lit)),
                    None => return Err(format!("`{one:?}` is not a literal")),
                },
                _ => {
                    return Err(format!(
                        "a disjunct has {} non-numeric conjuncts, expected exactly one",
                        lits.len()
                    ))
                }
            }
        } else {
            return Err("a disjunct is neither numeric nor a guarded literal".into());
        }
    }
    let base = match base.len() {
        0 => None,
        _ => Some(Formula::disj(base)),
    };
    Ok(ProjectiveForm { base, cases })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusivityViolation {
    pub symbol: String,
    /// Positions in [`ProjectiveForm::guards`].
    pub guards: (usize, usize),
    pub size: u32,
    pub assignment: Vec<(String, u32)>,
    pub constants: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub query: String,
    pub shape_errors: Vec<(String, String)>,
    pub violations: Vec<ExclusivityViolation>,
    /// Exclusivity was checked for sizes `2..=bound` only.
    pub bound: u32,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.shape_errors.is_empty() && self.violations.is_empty()
    }
}

/// Checks projective shape and, for every universe size `2..=bound`, pairwise
/// exclusivity of the guards over all variable and constant values. Nothing is
/// certified beyond `bound`.
pub fn validate_fop(q: &FoQuery, bound: u32) -> ValidationReport {
    let mut report = ValidationReport {
        query: q.name.clone(),
        bound,
        ..Default::default()
    };
    for (symbol, f, _) in q.definitions() {
        match projective_form(f) {
            Err(reason) => report.shape_errors.push((symbol.to_string(), reason)),
            Ok(form) => {
                let guards = form.guards();
                for i in 0..guards.len() {
                    for j in i + 1..guards.len() {
                        if let Some(v) = exclusivity_violation(q, symbol, guards[i], guards[j], (i, j), bound) {
                            report.violations.push(v);
                        }
                    }
                }
            }
        }
    }
    report
}

fn exclusivity_violation(
    q: &FoQuery,
    symbol: &str,
    a: &Formula,
    b: &Formula,
    positions: (usize, usize),
    bound: u32,
) -> Option<ExclusivityViolation> {
    let both = Formula::and([a.clone(), b.clone()]);
    let vars = both.free_variables();
    let consts: Vec<String> = q
        .source
        .constants()
        .iter()
        .filter(|c| {
            both.atoms()
                .iter()
                .any(|at| at.terms().any(|t| *t == Term::Const((*c).clone())))
        })
        .cloned()
        .collect();
    for n in 2..=bound {
        let mut st = Structure::empty(q.source.clone(), n).ok()?;
        let width = vars.len() + consts.len();
        let total = checked_power(n as u64, width)?;
        let mut ctx_values = vec![0u32; width];
        for idx in 0..total {
            let digits = tuple_at(idx, n, width);
            ctx_values.copy_from_slice(&digits);
            for (c, v) in consts.iter().zip(&ctx_values[vars.len()..]) {
                st.set_constant(c, *v).ok()?;
            }
            let mut ctx = Ctx::with_slots(&st, &vars);
            for (slot, v) in ctx_values[..vars.len()].iter().enumerate() {
                ctx.set(slot, *v);
            }
            if ctx.eval_bool(&both).ok()? {
                return Some(ExclusivityViolation {
                    symbol: symbol.to_string(),
                    guards: positions,
                    size: n,
                    assignment: vars
                        .iter()
                        .cloned()
                        .zip(ctx_values[..vars.len()].iter().copied())
                        .collect(),
                    constants: consts
                        .iter()
                        .cloned()
                        .zip(ctx_values[vars.len()..].iter().copied())
                        .collect(),
                });
            }
        }
    }
    None
}

/// A first-order projection: a query whose every formula is projective with
/// guards exclusive up to the validation bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fop {
    query: FoQuery,
    forms: Vec<ProjectiveForm>,
}

impl Fop {
    pub fn new(query: FoQuery, exclusivity_bound: u32) -> Result<Self> {
        let report = validate_fop(&query, exclusivity_bound);
        if !report.is_valid() {
            return Err(Error::InvalidFop(Box::new(report)));
        }
        let forms = query
            .definitions()
            .map(|(_, f, _)| projective_form(f).expect("validated"))
            .collect();
        Ok(Fop { query, forms })
    }

    pub fn query(&self) -> &FoQuery {
        &self.query
    }

    pub fn name(&self) -> &str {
        &self.query.name
    }

    pub fn arity(&self) -> usize {
        self.query.arity
    }

    pub fn source(&self) -> &Arc<Vocabulary> {
        &self.query.source
    }

    pub fn target(&self) -> &Arc<Vocabulary> {
        &self.query.target
    }

    pub fn apply(&self, a: &Structure) -> Result<Structure> {
        self.query.apply(a)
    }

    fn relation_form(&self, name: &str) -> Option<(&ProjectiveForm, usize)> {
        let r = self.query.target.relation_index(name)?;
        Some((&self.forms[r], self.query.target.relations()[r].1))
    }

    fn constant_form(&self, name: &str) -> Option<&ProjectiveForm> {
        let c = self.query.target.constant_index(name)?;
        Some(&self.forms[self.query.target.relations().len() + c])
    }
}

/// One case of a pulled-back literal: either a numeric formula or a numeric
/// guard together with one non-numeric source literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PullbackCase {
    Numeric(Formula),
    Guarded(Formula, Literal),
}

impl PullbackCase {
    pub fn to_formula(&self) -> Formula {
        match self {
            PullbackCase::Numeric(a) => a.clone(),
            PullbackCase::Guarded(Formula::True, l) => l.to_formula(),
            PullbackCase::Guarded(a, l) => Formula::and([a.clone(), l.to_formula()]),
        }
    }
}

/// Name of the `i`-th (1-based) source coordinate of image variable `y`.
pub fn coordinate_of(y: &str, i: usize) -> String {
    format!("{y}_{i}")
}

/// Spreads an assignment over image elements into source coordinates.
pub fn expand_assignment(asg: &Assignment, n: u32, k: usize) -> Assignment {
    let mut out = Assignment::new();
    for (y, &v) in asg {
        for (i, d) in tuple_at(v as u64, n, k).into_iter().enumerate() {
            out.insert(coordinate_of(y, i + 1), d);
        }
    }
    out
}

fn expand_term(t: &Term, k: usize, n: u32) -> Result<Vec<Term>> {
    Ok(match t {
        Term::Var(y) => (1..=k).map(|i| Term::Var(coordinate_of(y, i))).collect(),
        Term::Zero => vec![Term::Zero; k],
        Term::Max => vec![Term::Max; k],
        Term::Elem(e) => {
            let limit = checked_power(n as u64, k).unwrap_or(u64::MAX);
            if *e as u64 >= limit {
                return Err(Error::OutOfUniverse {
                    element: *e as u64,
                    size: limit.min(u32::MAX as u64) as u32,
                });
            }
            tuple_at(*e as u64, n, k).into_iter().map(Term::elem).collect()
        }
        Term::Const(c) => return Err(Error::NotLiteral(format!("image constant `{c}` as an argument"))),
    })
}

fn substitution(args: &[Term], k: usize, n: u32) -> Result<Vec<(String, Term)>> {
    let mut map = Vec::new();
    for (j, t) in args.iter().enumerate() {
        for (i, c) in expand_term(t, k, n)?.into_iter().enumerate() {
            map.push((coordinate(j * k + i + 1), c));
        }
    }
    Ok(map)
}

fn subst_literal(l: &Literal, map: &[(String, Term)]) -> Literal {
    Literal::from_formula(&l.to_formula().substitute(map)).expect("substitution keeps literals")
}

/// The cases of `μ` with `ρ(B) |= η(ā)` iff `B |= μ(ā)`, for `η` a
/// non-numeric target literal or an equation `c = t` with `c` a target
/// constant. `n` is the source size, needed only to decode numeral arguments.
pub fn pullback_cases(fop: &Fop, eta: &Formula, n: u32) -> Result<Vec<PullbackCase>> {
    let k = fop.arity();
    let not_literal = || Error::NotLiteral(format!("{eta:?}"));
    let lit = Literal::from_formula(eta).ok_or_else(not_literal)?;
    match &lit.atom {
        Atom::Rel { name, args } => {
            let (form, arity) = fop.relation_form(name).ok_or_else(not_literal)?;
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: name.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let map = substitution(args, k, n)?;
            let mut cases = Vec::new();
            if lit.positive {
                if let Some(a0) = &form.base {
                    cases.push(PullbackCase::Numeric(a0.substitute(&map)));
                }
                for (a, l) in &form.cases {
                    cases.push(PullbackCase::Guarded(a.substitute(&map), subst_literal(l, &map)));
                }
            } else {
                let gamma = Formula::conj(form.guards().into_iter().map(|g| Formula::not(g.substitute(&map))));
                cases.push(PullbackCase::Numeric(gamma));
                for (a, l) in &form.cases {
                    cases.push(PullbackCase::Guarded(
                        a.substitute(&map),
                        subst_literal(&l.negated(), &map),
                    ));
                }
            }
            Ok(cases)
        }
        Atom::Num {
            rel: NumericRel::Eq,
            left,
            right,
        } if lit.positive => {
            let (c, t) = match (left, right) {
                (Term::Const(c), t) | (t, Term::Const(c)) if fop.target().has_constant(c) => (c, t),
                _ => return Err(not_literal()),
            };
            if matches!(t, Term::Const(_)) {
                return Err(not_literal());
            }
            let form = fop.constant_form(c).ok_or_else(not_literal)?;
            let map = substitution(core::slice::from_ref(t), k, n)?;
            let mut cases = Vec::new();
            if let Some(a0) = &form.base {
                cases.push(PullbackCase::Numeric(a0.substitute(&map)));
            }
            for (a, l) in &form.cases {
                cases.push(PullbackCase::Guarded(a.substitute(&map), subst_literal(l, &map)));
            }
            Ok(cases)
        }
        _ => Err(not_literal()),
    }
}

/// The disjunction of [`pullback_cases`].
pub fn pullback(fop: &Fop, eta: &Formula, n: u32) -> Result<Formula> {
    let cases = pullback_cases(fop, eta, n)?;
    let parts: Vec<Formula> = cases
        .iter()
        .map(PullbackCase::to_formula)
        .filter(|f| *f != Formula::False)
        .collect();
    if parts.contains(&Formula::True) {
        return Ok(Formula::True);
    }
    Ok(Formula::disj(parts))
}

/// Target literal shapes used to exercise [`pullback`]: each relation with
/// distinct variables, with a repeated variable, and with `0`/`max`
/// arguments, both polarities; and `c = y` for each constant.
pub fn literal_shapes(target: &Vocabulary) -> Vec<Formula> {
    let mut out = Vec::new();
    for (name, arity) in target.relations() {
        let distinct: Vec<Term> = (1..=*arity).map(|i| Term::Var(format!("y{i}"))).collect();
        let mut shapes = vec![distinct];
        if *arity >= 2 {
            shapes.push(vec![Term::var("y1"); *arity]);
        }
        let mut edge = vec![Term::Zero; *arity];
        edge[arity - 1] = Term::Max;
        shapes.push(edge);
        let mut mixed: Vec<Term> = (1..=*arity).map(|i| Term::Var(format!("y{i}"))).collect();
        mixed[0] = Term::Max;
        shapes.push(mixed);
        for args in shapes {
            let atom = Formula::rel(name, args);
            out.push(atom.clone());
            out.push(Formula::not(atom));
        }
    }
    for c in target.constants() {
        out.push(Formula::eq(Term::constant(c), Term::var("y1")));
    }
    let mut seen = BTreeSet::new();
    out.retain(|f| seen.insert(f.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_fo, holds};
    use crate::structure::{enumerate_structures, Limits};
    use crate::vocab::builtin;

    fn x(i: usize) -> Term {
        Term::Var(coordinate(i))
    }

    #[test]
    fn projective_shapes() {
        let e = Formula::rel("E", [x(1), x(2)]);
        let f = Formula::or([
            Formula::eq(x(1), Term::Zero),
            Formula::and([Formula::not(Formula::eq(x(1), Term::Zero)), e.clone()]),
        ]);
        let form = projective_form(&f).unwrap();
        assert!(form.base.is_some());
        assert_eq!(form.cases.len(), 1);
        assert!(projective_form(&Formula::and([e.clone(), e.clone()])).is_err());
        assert!(projective_form(&Formula::exists(["y"], e)).is_err());
    }

    fn query_with_guards(a: Formula, b: Formula) -> FoQuery {
        let g = Arc::new(builtin::graph());
        let lit = Formula::rel("E", [x(1), x(2)]);
        let f = Formula::or([Formula::and([a, lit.clone()]), Formula::and([b, Formula::not(lit)])]);
        FoQuery::new("t", g.clone(), g, 1, vec![f], vec![]).unwrap()
    }

    #[test]
    fn exclusive_guards_pass() {
        let a = Formula::eq(x(1), Term::Zero);
        let b = Formula::and([
            Formula::not(Formula::eq(x(1), Term::Zero)),
            Formula::eq(x(1), Term::Max),
        ]);
        assert!(validate_fop(&query_with_guards(a, b), 6).is_valid());
    }

    #[test]
    fn overlapping_guards_report_a_violation() {
        let a = Formula::num(NumericRel::Le, x(1), x(2));
        let b = Formula::num(NumericRel::Le, x(2), x(1));
        let report = validate_fop(&query_with_guards(a, b), 6);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.size, 2);
        assert_eq!(v.assignment[0].1, v.assignment[1].1);
    }

    #[test]
    fn free_variables_are_limited_to_coordinates() {
        let g = Arc::new(builtin::graph());
        let bad = Formula::rel("E", [x(1), Term::var("z")]);
        assert!(matches!(
            FoQuery::new("bad", g.clone(), g, 1, vec![bad], vec![]),
            Err(Error::InvalidQuery(_))
        ));
    }

    #[test]
    fn non_unique_constant_is_an_error() {
        let st = Arc::new(builtin::st_graph());
        let q = FoQuery::new(
            "loose",
            st.clone(),
            st.clone(),
            1,
            vec![Formula::rel("E", [x(1), x(2)])],
            vec![Formula::True, Formula::eq(x(1), Term::Zero)],
        )
        .unwrap();
        let a = Structure::empty(st, 3).unwrap();
        assert_eq!(
            q.apply(&a),
            Err(Error::ConstantNotUnique {
                constant: "s".into(),
                count: 3
            })
        );
    }

    #[test]
    fn empty_projection_pulls_back_to_true_under_negation() {
        let g = Arc::new(builtin::graph());
        let q = FoQuery::new("never", g.clone(), g, 1, vec![Formula::False], vec![]).unwrap();
        let fop = Fop::new(q, 4).unwrap();
        let eta = Formula::not(Formula::rel("E", [Term::var("u"), Term::var("v")]));
        assert_eq!(pullback(&fop, &eta, 3), Ok(Formula::True));
        let pos = Formula::rel("E", [Term::var("u"), Term::var("v")]);
        assert_eq!(pullback(&fop, &pos, 3), Ok(Formula::False));
    }

    #[test]
    fn pullback_rejects_non_literals() {
        let g = Arc::new(builtin::graph());
        let q = FoQuery::new("id", g.clone(), g, 1, vec![Formula::rel("E", [x(1), x(2)])], vec![]).unwrap();
        let fop = Fop::new(q, 3).unwrap();
        let eta = Formula::exists(["u"], Formula::rel("E", [Term::var("u"), Term::var("u")]));
        assert!(matches!(pullback(&fop, &eta, 2), Err(Error::NotLiteral(_))));
        let numeric = Formula::num(NumericRel::Le, Term::var("u"), Term::var("v"));
        assert!(matches!(pullback(&fop, &numeric, 2), Err(Error::NotLiteral(_))));
    }

    #[test]
    fn two_coordinate_query_flattens_lexicographically() {
        // Arity-2 query keeping only edges between tuples whose first
        // coordinates agree: E'((a,b),(c,d)) iff a = c and E(b,d).
        let g = Arc::new(builtin::graph());
        let f = Formula::and([Formula::eq(x(1), x(3)), Formula::rel("E", [x(2), x(4)])]);
        let q = FoQuery::new("copies", g.clone(), g.clone(), 2, vec![f], vec![]).unwrap();
        let a = Structure::from_parts(g, 2, &[("E", &[&[0, 1]])], &[]).unwrap();
        let img = q.apply(&a).unwrap();
        assert_eq!(img.size(), 4);
        let edges: Vec<_> = img.tuples(0).collect();
        assert_eq!(edges, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn pullback_of_copy_query_is_sound_on_small_structures() {
        let g = Arc::new(builtin::graph());
        let f = Formula::and([Formula::eq(x(1), x(3)), Formula::rel("E", [x(2), x(4)])]);
        let fop = Fop::new(
            FoQuery::new("copies", g.clone(), g.clone(), 2, vec![f], vec![]).unwrap(),
            4,
        )
        .unwrap();
        for shape in literal_shapes(&g) {
            for b in enumerate_structures(g.clone(), 2, Limits::default()).unwrap() {
                let img = fop.apply(&b).unwrap();
                let mu = pullback(&fop, &shape, b.size()).unwrap();
                let vars = shape.free_variables();
                let total = checked_power(img.size() as u64, vars.len()).unwrap();
                for idx in 0..total {
                    let vals = tuple_at(idx, img.size(), vars.len());
                    let asg: Assignment = vars.iter().cloned().zip(vals).collect();
                    let lhs = eval_fo(&img, &shape, &asg).unwrap();
                    let rhs = eval_fo(&b, &mu, &expand_assignment(&asg, b.size(), 2)).unwrap();
                    assert_eq!(lhs, rhs, "{shape:?} on {b:?} at {asg:?}");
                }
                let _ = holds(&img, &Formula::True);
            }
        }
    }
}
