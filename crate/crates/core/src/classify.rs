//! Syntactic classes, negation normal form, CNF/DNF by distribution and
//! universal prenex form.
//!
//! CNF and DNF conversion distribute without auxiliary variables, so their
//! output can be exponentially larger than the input.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formula::{fresh_name, Formula, Literal, Quantifier, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SyntacticClass {
    Literal {
        positive: bool,
        numeric: bool,
    },
    Clause,
    Implicant,
    /// Conjunction of clauses with at most `k` literals each.
    Cnf(usize),
    /// CNF whose clauses have at most `k` non-numeric literals.
    CnfNonNumeric(usize),
    Dnf(usize),
    DnfNonNumeric(usize),
    /// No relation symbols; constants allowed.
    Numeric,
    Projective,
    /// `∀x̄ θ` with `θ` quantifier-free.
    UniversalFo,
    /// Existential second-order prefix (possibly empty) over a first-order
    /// matrix.
    SigmaOneOne,
}

fn flatten<'f>(f: &'f Formula, and: bool, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(parts) if and => parts.iter().for_each(|p| flatten(p, and, out)),
        Formula::Or(parts) if !and => parts.iter().for_each(|p| flatten(p, and, out)),
        other => out.push(other),
    }
}

/// Literals of a clause (`and = false`) or implicant (`and = true`).
fn literal_list(f: &Formula, and: bool) -> Option<Vec<Literal>> {
    let unit = if and { Formula::True } else { Formula::False };
    let mut parts = Vec::new();
    flatten(f, and, &mut parts);
    parts
        .into_iter()
        .filter(|p| **p != unit)
        .map(Literal::from_formula)
        .collect()
}

/// `f` read as a conjunction of clauses (`cnf = true`) or a disjunction of
/// implicants.
fn normal_form_of(f: &Formula, cnf: bool) -> Option<Vec<Vec<Literal>>> {
    let outer_unit = if cnf { Formula::True } else { Formula::False };
    let mut outer = Vec::new();
    flatten(f, cnf, &mut outer);
    outer
        .into_iter()
        .filter(|p| **p != outer_unit)
        .map(|p| literal_list(p, !cnf))
        .collect()
}

fn widths(clauses: &[Vec<Literal>]) -> (usize, usize) {
    let all = clauses.iter().map(Vec::len).max().unwrap_or(0);
    let non_numeric = clauses
        .iter()
        .map(|c| c.iter().filter(|l| !l.is_numeric()).count())
        .max()
        .unwrap_or(0);
    (all, non_numeric)
}

fn is_numeric(f: &Formula) -> bool {
    f.atoms().iter().all(|a| a.is_numeric())
}

fn universal_matrix(f: &Formula) -> &Formula {
    match f {
        Formula::Quant {
            q: Quantifier::Forall,
            body,
            ..
        } => universal_matrix(body),
        other => other,
    }
}

fn sigma_matrix(f: &Formula) -> &Formula {
    match f {
        Formula::SoQuant {
            q: Quantifier::Exists,
            body,
            ..
        } => sigma_matrix(body),
        other => other,
    }
}

/// Every class `f` belongs to, with the least parameter for the families
/// indexed by `k` (membership in larger `k` follows, see [`belongs_to`]).
pub fn classify(f: &Formula) -> BTreeSet<SyntacticClass> {
    use SyntacticClass as C;
    let mut out = BTreeSet::new();
    if let Some(l) = Literal::from_formula(f) {
        out.insert(C::Literal {
            positive: l.positive,
            numeric: l.is_numeric(),
        });
    }
    if literal_list(f, false).is_some() {
        out.insert(C::Clause);
    }
    if literal_list(f, true).is_some() {
        out.insert(C::Implicant);
    }
    if let Some(clauses) = normal_form_of(f, true) {
        let (k, r) = widths(&clauses);
        out.insert(C::Cnf(k));
        out.insert(C::CnfNonNumeric(r));
    }
    if let Some(terms) = normal_form_of(f, false) {
        let (k, r) = widths(&terms);
        out.insert(C::Dnf(k));
        out.insert(C::DnfNonNumeric(r));
    }
    if is_numeric(f) {
        out.insert(C::Numeric);
    }
    if f.is_first_order() && crate::fop::projective_form(f).is_ok() {
        out.insert(C::Projective);
    }
    if universal_matrix(f).is_quantifier_free() {
        out.insert(C::UniversalFo);
    }
    if sigma_matrix(f).is_first_order() {
        out.insert(C::SigmaOneOne);
    }
    out
}

/// Membership, honouring `CNF(k) ⊆ CNF(k+1)` and the like.
pub fn belongs_to(f: &Formula, class: SyntacticClass) -> bool {
    use SyntacticClass as C;
    let classes = classify(f);
    match class {
        C::Cnf(k) => classes.iter().any(|c| matches!(c, C::Cnf(j) if *j <= k)),
        C::CnfNonNumeric(k) => classes.iter().any(|c| matches!(c, C::CnfNonNumeric(j) if *j <= k)),
        C::Dnf(k) => classes.iter().any(|c| matches!(c, C::Dnf(j) if *j <= k)),
        C::DnfNonNumeric(k) => classes.iter().any(|c| matches!(c, C::DnfNonNumeric(j) if *j <= k)),
        other => classes.contains(&other),
    }
}

/// Negation normal form: no `->`/`<->`, negation only on atoms.
pub fn nnf(f: &Formula) -> Formula {
    to_nnf(f, true)
}

fn to_nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::True | Formula::False => {
            if positive == (*f == Formula::True) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => to_nnf(g, !positive),
        Formula::And(parts) | Formula::Or(parts) => {
            let is_and = matches!(f, Formula::And(_)) == positive;
            let parts = parts.iter().map(|p| to_nnf(p, positive)).collect();
            if is_and {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => to_nnf(&Formula::Or(vec![Formula::not((**a).clone()), (**b).clone()]), positive),
        Formula::Iff(a, b) => {
            let both = Formula::And(vec![(**a).clone(), (**b).clone()]);
            let neither = Formula::And(vec![Formula::not((**a).clone()), Formula::not((**b).clone())]);
            to_nnf(&Formula::Or(vec![both, neither]), positive)
        }
        Formula::Quant { q, vars, body } => Formula::Quant {
            q: if positive { *q } else { q.dual() },
            vars: vars.clone(),
            body: Box::new(to_nnf(body, positive)),
        },
        Formula::SoQuant { q, name, arity, body } => Formula::SoQuant {
            q: if positive { *q } else { q.dual() },
            name: name.clone(),
            arity: *arity,
            body: Box::new(to_nnf(body, positive)),
        },
    }
}

/// Clauses (`cnf = true`) or implicants of an NNF quantifier-free formula.
/// Tautological clauses (contradictory implicants) are dropped and duplicate
/// literals merged.
fn distribute(f: &Formula, cnf: bool) -> Vec<Vec<Literal>> {
    let (outer_is_and, unit_outer) = (cnf, vec![]);
    match f {
        Formula::True => {
            if cnf {
                unit_outer
            } else {
                vec![vec![]]
            }
        }
        Formula::False => {
            if cnf {
                vec![vec![]]
            } else {
                unit_outer
            }
        }
        Formula::Atom(_) | Formula::Not(_) => {
            vec![vec![Literal::from_formula(f).expect("nnf negates atoms only")]]
        }
        Formula::And(parts) | Formula::Or(parts) => {
            let is_and = matches!(f, Formula::And(_));
            let sets: Vec<Vec<Vec<Literal>>> = parts.iter().map(|p| distribute(p, cnf)).collect();
            if is_and == outer_is_and {
                normalize(sets.into_iter().flatten().collect())
            } else {
                let mut acc: Vec<Vec<Literal>> = vec![vec![]];
                for set in sets {
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &set {
                            let mut c = a.clone();
                            c.extend(b.iter().cloned());
                            next.push(c);
                        }
                    }
                    acc = normalize(next);
                }
                acc
            }
        }
        _ => unreachable!("distribute expects a quantifier-free NNF formula"),
    }
}

fn normalize(groups: Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
    let mut out: Vec<Vec<Literal>> = Vec::new();
    for mut g in groups {
        g.sort();
        g.dedup();
        let trivial = g.iter().any(|l| g.contains(&l.negated()));
        if !trivial && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

fn require_quantifier_free(f: &Formula) -> Result<()> {
    if f.is_quantifier_free() {
        Ok(())
    } else if f.is_first_order() {
        Err(Error::NotUniversal("quantified formula".into()))
    } else {
        Err(Error::NotFirstOrder)
    }
}

/// CNF clauses of a quantifier-free formula.
pub fn cnf_clauses(f: &Formula) -> Result<Vec<Vec<Literal>>> {
    require_quantifier_free(f)?;
    Ok(distribute(&nnf(f), true))
}

/// DNF implicants of a quantifier-free formula.
pub fn dnf_terms(f: &Formula) -> Result<Vec<Vec<Literal>>> {
    require_quantifier_free(f)?;
    Ok(distribute(&nnf(f), false))
}

pub fn clauses_to_formula(clauses: &[Vec<Literal>]) -> Formula {
    Formula::conj(clauses.iter().map(|c| Formula::disj(c.iter().map(Literal::to_formula))))
}

pub fn terms_to_formula(terms: &[Vec<Literal>]) -> Formula {
    Formula::disj(terms.iter().map(|t| Formula::conj(t.iter().map(Literal::to_formula))))
}

pub fn to_cnf(f: &Formula) -> Result<Formula> {
    cnf_clauses(f).map(|c| clauses_to_formula(&c))
}

pub fn to_dnf(f: &Formula) -> Result<Formula> {
    dnf_terms(f).map(|t| terms_to_formula(&t))
}

/// `∀ variables . ⋀ clauses`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalPrenex {
    pub variables: Vec<String>,
    pub clauses: Vec<Vec<Literal>>,
    /// The least `r` with the matrix in `cnf_r`.
    pub width: usize,
}

impl UniversalPrenex {
    pub fn matrix(&self) -> Formula {
        clauses_to_formula(&self.clauses)
    }

    pub fn to_formula(&self) -> Formula {
        if self.variables.is_empty() {
            self.matrix()
        } else {
            Formula::forall(self.variables.iter(), self.matrix())
        }
    }
}

/// Rewrites a universal first-order formula as `∀x̄ θ` with `θ` in CNF.
/// Bound variables are renamed (`x` to `x_0`, `x_1`, ...) only when a name
/// is already in use; quantifiers over variables that do not occur are
/// dropped, which is sound because universes are non-empty.
pub fn to_prenex_universal(f: &Formula) -> Result<UniversalPrenex> {
    if !f.is_first_order() {
        return Err(Error::NotFirstOrder);
    }
    let n = nnf(f);
    let mut used: BTreeSet<String> = f.free_variables().into_iter().collect();
    let mut avoid = f.all_variables();
    let mut variables = Vec::new();
    let matrix = pull_universals(&n, &mut used, &mut avoid, &mut variables)?;
    let clauses = distribute(&matrix, true);
    let width = clauses
        .iter()
        .map(|c| c.iter().filter(|l| !l.is_numeric()).count())
        .max()
        .unwrap_or(0);
    Ok(UniversalPrenex {
        variables,
        clauses,
        width,
    })
}

fn pull_universals(
    f: &Formula,
    used: &mut BTreeSet<String>,
    avoid: &mut BTreeSet<String>,
    variables: &mut Vec<String>,
) -> Result<Formula> {
    match f {
        Formula::Quant { q, vars, body } => {
            let free: BTreeSet<String> = body.free_variables().into_iter().collect();
            let live: Vec<&String> = vars.iter().filter(|v| free.contains(*v)).collect();
            if *q == Quantifier::Exists && !live.is_empty() {
                return Err(Error::NotUniversal(alloc::format!(
                    "existential quantifier over `{}` in negation normal form",
                    live[0]
                )));
            }
            let mut body = (**body).clone();
            for (i, v) in vars.iter().enumerate() {
                // A repeated binder counts once.
                if !free.contains(v) || vars[i + 1..].contains(v) {
                    continue;
                }
                let name = if used.contains(v) {
                    let fresh = fresh_name(v, avoid);
                    body = body.substitute(&[(v.clone(), Term::Var(fresh.clone()))]);
                    fresh
                } else {
                    v.clone()
                };
                if variables.contains(&name) {
                    continue;
                }
                used.insert(name.clone());
                avoid.insert(name.clone());
                variables.push(name);
            }
            pull_universals(&body, used, avoid, variables)
        }
        Formula::And(parts) => Ok(Formula::And(
            parts
                .iter()
                .map(|p| pull_universals(p, used, avoid, variables))
                .collect::<Result<_>>()?,
        )),
        Formula::Or(parts) => Ok(Formula::Or(
            parts
                .iter()
                .map(|p| pull_universals(p, used, avoid, variables))
                .collect::<Result<_>>()?,
        )),
        other => Ok(other.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::NumericRel;
    use SyntacticClass as C;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn e(a: &str, b: &str) -> Formula {
        Formula::rel("E", [v(a), v(b)])
    }

    #[test]
    fn single_atom() {
        let c = classify(&e("x", "y"));
        for class in [
            C::Literal {
                positive: true,
                numeric: false,
            },
            C::Clause,
            C::Implicant,
            C::Cnf(1),
            C::Dnf(1),
            C::CnfNonNumeric(1),
            C::Projective,
            C::UniversalFo,
            C::SigmaOneOne,
        ] {
            assert!(c.contains(&class), "{class:?}");
        }
        assert!(!c.contains(&C::Numeric));
        assert!(belongs_to(&e("x", "y"), C::Cnf(3)));
    }

    #[test]
    fn constants_keep_formulas_numeric() {
        let f = Formula::eq(v("x"), Term::constant("c1"));
        assert!(classify(&f).contains(&C::Numeric));
    }

    #[test]
    fn symmetry_is_universal() {
        let f = Formula::forall(["x", "y"], Formula::implies(e("x", "y"), e("y", "x")));
        let c = classify(&f);
        assert!(c.contains(&C::UniversalFo));
        assert!(!c.contains(&C::Clause));
        let p = to_prenex_universal(&f).unwrap();
        assert_eq!(p.variables, ["x", "y"]);
        assert_eq!(p.clauses.len(), 1);
        assert_eq!(p.clauses[0].len(), 2);
        assert_eq!(p.width, 2);
    }

    #[test]
    fn trivial_and_numeric_widths() {
        let p = to_prenex_universal(&Formula::forall(["x"], Formula::True)).unwrap();
        assert!(p.clauses.is_empty());
        assert_eq!(p.width, 0);
        assert_eq!(p.matrix(), Formula::True);

        let l = Formula::rel("L", [v("x"), v("y"), v("z")]);
        let f = Formula::forall(["x", "y", "z"], Formula::implies(l, Formula::eq(v("z"), Term::Zero)));
        let p = to_prenex_universal(&f).unwrap();
        assert_eq!(p.variables, ["x", "y", "z"]);
        assert_eq!(p.width, 1);
    }

    #[test]
    fn existentials_are_rejected_unless_vacuous() {
        let f = Formula::forall(["x"], Formula::exists(["y"], e("x", "y")));
        assert!(matches!(to_prenex_universal(&f), Err(Error::NotUniversal(_))));
        let g = Formula::not(Formula::exists(["x"], e("x", "x")));
        assert_eq!(to_prenex_universal(&g).unwrap().variables, ["x"]);
        let vacuous = Formula::exists(["y"], Formula::forall(["x"], e("x", "x")));
        assert!(to_prenex_universal(&vacuous).is_ok());
    }

    #[test]
    fn clashing_binders_are_renamed() {
        let f = Formula::and([
            Formula::forall(["x"], e("x", "x")),
            Formula::forall(["x"], Formula::not(e("x", "x"))),
        ]);
        let p = to_prenex_universal(&f).unwrap();
        assert_eq!(p.variables, ["x", "x_0"]);
        let free = Formula::and([e("x", "x"), Formula::forall(["x"], e("x", "y"))]);
        let p = to_prenex_universal(&free).unwrap();
        assert_eq!(p.variables, ["x_0"]);
    }

    #[test]
    fn cnf_and_dnf_by_distribution() {
        let f = Formula::or([
            Formula::and([e("a", "b"), e("b", "c")]),
            Formula::num(NumericRel::Le, v("a"), v("c")),
        ]);
        let cnf = cnf_clauses(&f).unwrap();
        assert_eq!(cnf.len(), 2);
        assert!(cnf.iter().all(|c| c.len() == 2));
        let dnf = dnf_terms(&f).unwrap();
        assert_eq!(dnf.len(), 2);
        assert!(belongs_to(&to_cnf(&f).unwrap(), C::CnfNonNumeric(1)));
        assert!(belongs_to(&to_dnf(&f).unwrap(), C::Dnf(2)));
        assert_eq!(
            cnf_clauses(&Formula::or([e("a", "b"), Formula::not(e("a", "b"))])).unwrap(),
            Vec::<Vec<Literal>>::new()
        );
    }
}
