//! Terms, atoms and first/second-order formula trees.
//!
//! Implication and biconditional are kept as nodes of their own; they are only
//! eliminated by normal-form conversions, so printed formulas keep their shape.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// A constant symbol of the vocabulary.
    Const(String),
    Zero,
    Max,
    /// A fixed universe element written as a numeral (`1`, `2`, ...). Element
    /// zero is always represented by [`Term::Zero`].
    Elem(u32),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn elem(value: u32) -> Term {
        if value == 0 {
            Term::Zero
        } else {
            Term::Elem(value)
        }
    }

    pub fn is_ground(&self) -> bool {
        !matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::Max => f.write_str("max"),
            Term::Elem(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumericRel {
    Eq,
    Le,
    Bit,
    /// `suc(i, j)` holds iff `j = i + 1`; there is no wraparound at `max`.
    Suc,
}

impl NumericRel {
    pub fn symbol(self) -> &'static str {
        match self {
            NumericRel::Eq => "=",
            NumericRel::Le => "<=",
            NumericRel::Bit => "bit",
            NumericRel::Suc => "suc",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "=" => NumericRel::Eq,
            "<=" => NumericRel::Le,
            "bit" => NumericRel::Bit,
            "suc" => NumericRel::Suc,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// A vocabulary relation or a second-order relation variable.
    Rel {
        name: String,
        args: Vec<Term>,
    },
    Num {
        rel: NumericRel,
        left: Term,
        right: Term,
    },
}

impl Atom {
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (slice, pair): (&[Term], Option<[&Term; 2]>) = match self {
            Atom::Rel { args, .. } => (args.as_slice(), None),
            Atom::Num { left, right, .. } => (&[], Some([left, right])),
        };
        slice.iter().chain(pair.into_iter().flatten())
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Atom::Num { .. })
    }

    fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Atom {
        match self {
            Atom::Rel { name, args } => Atom::Rel {
                name: name.clone(),
                args: args.iter().map(&mut *f).collect(),
            },
            Atom::Num { rel, left, right } => Atom::Num {
                rel: *rel,
                left: f(left),
                right: f(right),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// First-order quantification over one or more variables.
    Quant {
        q: Quantifier,
        vars: Vec<String>,
        body: Box<Formula>,
    },
    /// Second-order quantification over a relation variable of fixed arity.
    SoQuant {
        q: Quantifier,
        name: String,
        arity: usize,
        body: Box<Formula>,
    },
}

/// A possibly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn new(positive: bool, atom: Atom) -> Self {
        Literal { positive, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        let atom = Formula::Atom(self.atom.clone());
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }

    pub fn from_formula(f: &Formula) -> Option<Literal> {
        match f {
            Formula::Atom(a) => Some(Literal::new(true, a.clone())),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => Some(Literal::new(false, a.clone())),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.atom.is_numeric()
    }
}

impl Formula {
    pub fn rel(name: &str, args: impl IntoIterator<Item = Term>) -> Formula {
        Formula::Atom(Atom::Rel {
            name: name.to_string(),
            args: args.into_iter().collect(),
        })
    }

    pub fn num(rel: NumericRel, left: Term, right: Term) -> Formula {
        Formula::Atom(Atom::Num { rel, left, right })
    }

    pub fn eq(left: Term, right: Term) -> Formula {
        Formula::num(NumericRel::Eq, left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::Or(parts.into_iter().collect())
    }

    /// Conjunction that collapses the empty and singleton cases.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<_> = parts.into_iter().collect();
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction that collapses the empty and singleton cases.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<_> = parts.into_iter().collect();
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall<S: ToString>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Forall, vars, body)
    }

    pub fn exists<S: ToString>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Exists, vars, body)
    }

    fn quant<S: ToString>(q: Quantifier, vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::Quant {
            q,
            vars: vars.into_iter().map(|v| v.to_string()).collect(),
            body: Box::new(body),
        }
    }

    pub fn exists_so(name: &str, arity: usize, body: Formula) -> Formula {
        Formula::SoQuant {
            q: Quantifier::Exists,
            name: name.to_string(),
            arity,
            body: Box::new(body),
        }
    }

    pub fn forall_so(name: &str, arity: usize, body: Formula) -> Formula {
        Formula::SoQuant {
            q: Quantifier::Forall,
            name: name.to_string(),
            arity,
            body: Box::new(body),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            Formula::Quant { body, .. } | Formula::SoQuant { body, .. } => vec![body],
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        if let Formula::Atom(a) = self {
            f(a);
        }
        for c in self.children() {
            c.visit_atoms(f);
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Quant { .. } | Formula::SoQuant { .. } => false,
            _ => self.children().iter().all(|c| c.is_quantifier_free()),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::SoQuant { .. } => false,
            _ => self.children().iter().all(|c| c.is_first_order()),
        }
    }

    /// Free first-order variables in order of first occurrence.
    pub fn free_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) => {
                for t in a.terms() {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
            }
            Formula::Quant { vars, body, .. } => {
                let before = bound.len();
                bound.extend(vars.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(before);
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Relation names applied in the formula but not bound by a second-order
    /// quantifier.
    pub fn free_relations(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_relations(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_relations(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(Atom::Rel { name, .. }) => {
                if !bound.contains(name) {
                    out.insert(name.clone());
                }
            }
            Formula::SoQuant { name, body, .. } => {
                bound.push(name.clone());
                body.collect_free_relations(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free_relations(bound, out);
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for t in a.terms() {
                    if let Term::Var(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Quant { vars, body, .. } => {
                out.extend(vars.iter().cloned());
                body.collect_all_vars(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_all_vars(out);
                }
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Checks that every atom is well formed over `voc` plus the numeric
    /// built-ins and any second-order relation variables in scope.
    pub fn check(&self, voc: &Vocabulary) -> Result<()> {
        self.check_in(voc, &mut Vec::new())
    }

    fn check_in(&self, voc: &Vocabulary, so: &mut Vec<(String, usize)>) -> Result<()> {
        match self {
            Formula::Atom(atom) => {
                if let Atom::Rel { name, args } = atom {
                    let arity = so
                        .iter()
                        .rev()
                        .find(|(n, _)| n == name)
                        .map(|(_, a)| *a)
                        .or_else(|| voc.relation_arity(name))
                        .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                    if arity != args.len() {
                        return Err(Error::ArityMismatch {
                            symbol: name.clone(),
                            expected: arity,
                            found: args.len(),
                        });
                    }
                }
                for t in atom.terms() {
                    if let Term::Const(c) = t {
                        if !voc.has_constant(c) {
                            return Err(Error::UnknownSymbol(c.clone()));
                        }
                    }
                }
                Ok(())
            }
            Formula::Quant { vars, body, .. } => {
                if let Some(v) = vars.iter().find(|v| voc.has_constant(v)) {
                    return Err(Error::InvalidVocabulary(format!("variable `{v}` shadows a constant")));
                }
                body.check_in(voc, so)
            }
            Formula::SoQuant { name, arity, body, .. } => {
                if *arity == 0 {
                    return Err(Error::InvalidVocabulary(format!(
                        "relation variable `{name}` has arity 0"
                    )));
                }
                so.push((name.clone(), *arity));
                let r = body.check_in(voc, so);
                so.pop();
                r
            }
            _ => self.children().iter().try_for_each(|c| c.check_in(voc, so)),
        }
    }

    /// Capture-avoiding substitution of free variables.
    pub fn substitute(&self, map: &[(String, Term)]) -> Formula {
        let mut avoid: BTreeSet<String> = BTreeSet::new();
        for (_, t) in map {
            if let Term::Var(v) = t {
                avoid.insert(v.clone());
            }
        }
        avoid.extend(self.all_variables());
        self.subst_in(map, &mut avoid)
    }

    fn subst_in(&self, map: &[(String, Term)], avoid: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| {
                match t {
                    Term::Var(v) => map
                        .iter()
                        .find(|(k, _)| k == v)
                        .map(|(_, r)| r.clone())
                        .unwrap_or_else(|| t.clone()),
                    _ => t.clone(),
                }
            })),
            Formula::Quant { q, vars, body } => {
                // Drop bindings shadowed by this quantifier, rename bound
                // variables that would capture a replacement term.
                let inner: Vec<(String, Term)> = map.iter().filter(|(k, _)| !vars.contains(k)).cloned().collect();
                let introduced: BTreeSet<&String> = inner
                    .iter()
                    .filter_map(|(_, t)| match t {
                        Term::Var(v) => Some(v),
                        _ => None,
                    })
                    .collect();
                let mut renames: Vec<(String, Term)> = inner.clone();
                let mut new_vars = Vec::with_capacity(vars.len());
                for v in vars {
                    if introduced.contains(v) {
                        let fresh = fresh_name(v, avoid);
                        avoid.insert(fresh.clone());
                        renames.push((v.clone(), Term::Var(fresh.clone())));
                        new_vars.push(fresh);
                    } else {
                        new_vars.push(v.clone());
                    }
                }
                Formula::Quant {
                    q: *q,
                    vars: new_vars,
                    body: Box::new(body.subst_in(&renames, avoid)),
                }
            }
            Formula::Not(f) => Formula::not(f.subst_in(map, avoid)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.subst_in(map, avoid)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.subst_in(map, avoid)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.subst_in(map, avoid), b.subst_in(map, avoid)),
            Formula::Iff(a, b) => Formula::iff(a.subst_in(map, avoid), b.subst_in(map, avoid)),
            Formula::SoQuant { q, name, arity, body } => Formula::SoQuant {
                q: *q,
                name: name.clone(),
                arity: *arity,
                body: Box::new(body.subst_in(map, avoid)),
            },
            Formula::True | Formula::False => self.clone(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

/// Canonical S-expression form, e.g. `(forall (x y) (-> (E x y) (E y x)))`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(Atom::Rel { name, args }) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Atom(Atom::Num { rel, left, right }) => {
                write!(f, "({} {left} {right})", rel.symbol())
            }
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(parts) | Formula::Or(parts) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for p in parts {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
            Formula::Implies(a, b) => write!(f, "(-> {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(<-> {a} {b})"),
            Formula::Quant { q, vars, body } => {
                let kw = match q {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                };
                write!(f, "({kw} (")?;
                for (i, v) in vars.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(v)?;
                }
                write!(f, ") {body})")
            }
            Formula::SoQuant { q, name, arity, body } => {
                let kw = match q {
                    Quantifier::Forall => "forall2",
                    Quantifier::Exists => "exists2",
                };
                write!(f, "({kw} ({name} {arity}) {body})")
            }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_formula().fmt(f)
    }
}

/// `base_0`, `base_1`, ... : the first one not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !avoid.contains(n))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::builtin;

    fn e(a: &str, b: &str) -> Formula {
        Formula::rel("E", [Term::var(a), Term::var(b)])
    }

    #[test]
    fn free_variables_follow_first_use() {
        assert_eq!(e("x", "y").free_variables(), vec!["x", "y"]);
        assert_eq!(Formula::forall(["x"], e("x", "y")).free_variables(), vec!["y"]);
        let so = Formula::exists_so("R", 1, Formula::forall(["x"], Formula::rel("R", [Term::var("x")])));
        assert!(so.free_variables().is_empty());
        assert!(so.free_relations().is_empty());
    }

    #[test]
    fn check_reports_arity_and_unknown_symbols() {
        let voc = builtin::st_graph();
        assert!(
            Formula::exists(["x"], Formula::rel("E", [Term::constant("s"), Term::var("x")]))
                .check(&voc)
                .is_ok()
        );
        assert_eq!(
            Formula::rel("E", [Term::var("x")]).check(&voc),
            Err(Error::ArityMismatch {
                symbol: "E".into(),
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            Formula::rel("F", [Term::var("x")]).check(&voc),
            Err(Error::UnknownSymbol("F".into()))
        );
    }

    #[test]
    fn substitution_avoids_capture() {
        // forall y. E(x, y)  with x := y  must not capture.
        let f = Formula::forall(["y"], e("x", "y"));
        let g = f.substitute(&[("x".into(), Term::var("y"))]);
        match g {
            Formula::Quant { vars, body, .. } => {
                assert_ne!(vars[0], "y");
                assert_eq!(*body, e("y", &vars[0]));
            }
            _ => panic!("shape changed"),
        }
    }
}
