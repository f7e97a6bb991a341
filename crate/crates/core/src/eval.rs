//! Model checking.
//!
//! A single three-valued (Kleene) evaluator backs everything here. With no
//! unknown cells it is ordinary two-valued evaluation; during second-order
//! search it evaluates over partially decided relation tables, so a branch is
//! cut as soon as the matrix is settled for every completion.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, NumericRel, Quantifier, Term};
use crate::problems::DecisionProblem;
use crate::structure::{checked_power, Structure, StructureSpace};
use crate::vocab::Vocabulary;

/// Values for free first-order variables.
pub type Assignment = BTreeMap<String, u32>;

pub fn assignment<'a>(pairs: impl IntoIterator<Item = (&'a str, u32)>) -> Assignment {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tri {
    False,
    True,
    Unknown,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }

    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    fn or(self, o: Tri) -> Tri {
        self.not().and(o.not()).not()
    }
}

const CELL_FALSE: u8 = 0;
const CELL_TRUE: u8 = 1;
const CELL_UNKNOWN: u8 = 2;

struct SoTable {
    name: String,
    arity: usize,
    cells: Vec<u8>,
}

pub(crate) struct Ctx<'a> {
    st: &'a Structure,
    vars: Vec<(&'a str, u32)>,
    so: Vec<SoTable>,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(st: &'a Structure) -> Self {
        Ctx {
            st,
            vars: Vec::new(),
            so: Vec::new(),
        }
    }

    pub(crate) fn with_assignment(st: &'a Structure, asg: &'a Assignment) -> Self {
        let mut ctx = Ctx::new(st);
        ctx.vars = asg.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        ctx
    }

    /// Binds `names` in order; values are then updated with [`Ctx::set`].
    pub(crate) fn with_slots(st: &'a Structure, names: &'a [String]) -> Self {
        let mut ctx = Ctx::new(st);
        ctx.vars = names.iter().map(|n| (n.as_str(), 0)).collect();
        ctx
    }

    #[inline]
    pub(crate) fn set(&mut self, slot: usize, value: u32) {
        self.vars[slot].1 = value;
    }

    fn var(&self, name: &str) -> Result<u32> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    fn term(&self, t: &Term) -> Result<u32> {
        let n = self.st.size();
        match t {
            Term::Var(v) => self.var(v),
            Term::Const(c) => self.st.constant(c),
            Term::Zero => Ok(0),
            Term::Max => Ok(n - 1),
            Term::Elem(e) if *e < n => Ok(*e),
            Term::Elem(e) => Err(Error::OutOfUniverse {
                element: *e as u64,
                size: n,
            }),
        }
    }

    fn atom(&self, a: &Atom) -> Result<Tri> {
        match a {
            Atom::Num { rel, left, right } => {
                let (i, j) = (self.term(left)?, self.term(right)?);
                Ok(Tri::from_bool(match rel {
                    NumericRel::Eq => i == j,
                    NumericRel::Le => i <= j,
                    NumericRel::Bit => j < 32 && (i >> j) & 1 == 1,
                    NumericRel::Suc => i.checked_add(1) == Some(j),
                }))
            }
            Atom::Rel { name, args } => {
                let n = self.st.size() as usize;
                let mut idx = 0usize;
                for t in args {
                    idx = idx * n + self.term(t)? as usize;
                }
                if let Some(table) = self.so.iter().rev().find(|t| t.name == *name) {
                    if table.arity != args.len() {
                        return Err(Error::ArityMismatch {
                            symbol: name.clone(),
                            expected: table.arity,
                            found: args.len(),
                        });
                    }
                    return Ok(match table.cells[idx] {
                        CELL_FALSE => Tri::False,
                        CELL_TRUE => Tri::True,
                        _ => Tri::Unknown,
                    });
                }
                let voc = self.st.vocabulary();
                let rel = voc
                    .relation_index(name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                let arity = voc.relations()[rel].1;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: name.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                Ok(Tri::from_bool(self.st.holds_at(rel, idx)))
            }
        }
    }

    pub(crate) fn eval(&mut self, f: &'a Formula) -> Result<Tri> {
        Ok(match f {
            Formula::True => Tri::True,
            Formula::False => Tri::False,
            Formula::Atom(a) => self.atom(a)?,
            Formula::Not(g) => self.eval(g)?.not(),
            Formula::And(gs) => {
                let mut acc = Tri::True;
                for g in gs {
                    acc = acc.and(self.eval(g)?);
                    if acc == Tri::False {
                        break;
                    }
                }
                acc
            }
            Formula::Or(gs) => {
                let mut acc = Tri::False;
                for g in gs {
                    acc = acc.or(self.eval(g)?);
                    if acc == Tri::True {
                        break;
                    }
                }
                acc
            }
            Formula::Implies(a, b) => {
                let l = self.eval(a)?;
                if l == Tri::False {
                    Tri::True
                } else {
                    l.not().or(self.eval(b)?)
                }
            }
            Formula::Iff(a, b) => {
                let (l, r) = (self.eval(a)?, self.eval(b)?);
                l.and(r).or(l.not().and(r.not()))
            }
            Formula::Quant { q, vars, body } => {
                let base = self.vars.len();
                for v in vars {
                    self.vars.push((v.as_str(), 0));
                }
                let r = self.quantify(*q, base, body);
                self.vars.truncate(base);
                r?
            }
            Formula::SoQuant { .. } => return Err(Error::NotFirstOrder),
        })
    }

    /// Odometer over the block of variables starting at `base`.
    fn quantify(&mut self, q: Quantifier, base: usize, body: &'a Formula) -> Result<Tri> {
        let n = self.st.size();
        let (stop, mut acc) = match q {
            Quantifier::Forall => (Tri::False, Tri::True),
            Quantifier::Exists => (Tri::True, Tri::False),
        };
        loop {
            let v = self.eval(body)?;
            if v == stop {
                return Ok(stop);
            }
            if v == Tri::Unknown {
                acc = Tri::Unknown;
            }
            let mut i = self.vars.len();
            loop {
                if i == base {
                    return Ok(acc);
                }
                i -= 1;
                if self.vars[i].1 + 1 < n {
                    self.vars[i].1 += 1;
                    break;
                }
                self.vars[i].1 = 0;
            }
        }
    }

    pub(crate) fn eval_bool(&mut self, f: &'a Formula) -> Result<bool> {
        match self.eval(f)? {
            Tri::True => Ok(true),
            Tri::False => Ok(false),
            Tri::Unknown => unreachable!("no undecided cells in two-valued evaluation"),
        }
    }
}

fn check_against(st: &Structure, f: &Formula) -> Result<()> {
    f.check(st.vocabulary()).map_err(|e| match e {
        Error::UnknownSymbol(s) => Error::VocabularyMismatch {
            expected: alloc::format!("a vocabulary with `{s}`"),
            found: st.vocabulary().name().to_string(),
        },
        other => other,
    })
}

fn check_bound(f: &Formula, asg: &Assignment) -> Result<()> {
    match f.free_variables().into_iter().find(|v| !asg.contains_key(v)) {
        Some(v) => Err(Error::UnboundVariable(v)),
        None => Ok(()),
    }
}

/// `A |= f[asg]` for a first-order formula.
pub fn eval_fo(st: &Structure, f: &Formula, asg: &Assignment) -> Result<bool> {
    if !f.is_first_order() {
        return Err(Error::NotFirstOrder);
    }
    check_against(st, f)?;
    check_bound(f, asg)?;
    Ctx::with_assignment(st, asg).eval_bool(f)
}

/// `A |= f` for a sentence.
pub fn holds(st: &Structure, f: &Formula) -> Result<bool> {
    eval_fo(st, f, &Assignment::new())
}

/// Default enumeration budget, `2^26`.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

struct SoBinder<'f> {
    q: Quantifier,
    name: &'f str,
    arity: usize,
}

fn so_prefix(f: &Formula) -> (Vec<SoBinder<'_>>, &Formula) {
    let mut binders = Vec::new();
    let mut cur = f;
    while let Formula::SoQuant { q, name, arity, body } = cur {
        binders.push(SoBinder {
            q: *q,
            name,
            arity: *arity,
        });
        cur = body;
    }
    (binders, cur)
}

/// Number of relation tables a second-order prefix ranges over at size `n`.
pub fn so_table_count(f: &Formula, n: u32) -> BigUint {
    let (binders, _) = so_prefix(f);
    let mut bits = 0u64;
    for b in &binders {
        bits = bits.saturating_add(checked_power(n as u64, b.arity).unwrap_or(u64::MAX));
    }
    BigUint::from(1u32) << bits.min(u32::MAX as u64)
}

/// `A |= f` for a sentence made of second-order quantifier blocks over a
/// first-order matrix.
///
/// The innermost block is searched depth-first over partially decided tables
/// (highest tuple of the last relation decided first, false before true, so
/// tables are met in increasing counter order), cutting every branch whose
/// outcome is already settled. Outer blocks are enumerated in full.
pub fn eval_so(st: &Structure, f: &Formula, asg: &Assignment, budget: u64) -> Result<bool> {
    let (binders, matrix) = so_prefix(f);
    if !matrix.is_first_order() {
        return Err(Error::NotSecondOrderPrefix);
    }
    check_against(st, f)?;
    check_bound(f, asg)?;
    let needed = so_table_count(f, st.size());
    if needed > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut ctx = Ctx::with_assignment(st, asg);
    so_blocks(&mut ctx, &binders, matrix)
}

fn so_blocks<'a>(ctx: &mut Ctx<'a>, binders: &[SoBinder<'_>], matrix: &'a Formula) -> Result<bool> {
    let Some(first) = binders.first() else {
        return ctx.eval_bool(matrix);
    };
    let block_len = binders.iter().take_while(|b| b.q == first.q).count();
    let (block, rest) = binders.split_at(block_len);
    let n = ctx.st.size() as u64;
    let base = ctx.so.len();
    for b in block {
        let cells = checked_power(n, b.arity).ok_or(Error::TooLarge {
            size: n,
            arity: b.arity,
        })? as usize;
        ctx.so.push(SoTable {
            name: b.name.to_string(),
            arity: b.arity,
            cells: vec![CELL_UNKNOWN; cells],
        });
    }
    let result = if rest.is_empty() {
        // Existential: look for a true completion. Universal: look for a false one.
        let target = match first.q {
            Quantifier::Exists => Tri::True,
            Quantifier::Forall => Tri::False,
        };
        let found = prune_search(ctx, base, matrix, target)?;
        Ok(found == (first.q == Quantifier::Exists))
    } else {
        for t in &mut ctx.so[base..] {
            t.cells.iter_mut().for_each(|c| *c = CELL_FALSE);
        }
        let want = first.q == Quantifier::Exists;
        loop {
            if so_blocks(ctx, rest, matrix)? == want {
                break Ok(want);
            }
            if !advance_tables(&mut ctx.so[base..]) {
                break Ok(!want);
            }
        }
    };
    ctx.so.truncate(base);
    result
}

/// Binary counter over the concatenated tables, first table least significant.
fn advance_tables(tables: &mut [SoTable]) -> bool {
    for t in tables.iter_mut() {
        for c in t.cells.iter_mut() {
            if *c == CELL_FALSE {
                *c = CELL_TRUE;
                return true;
            }
            *c = CELL_FALSE;
        }
    }
    false
}

fn prune_search<'a>(ctx: &mut Ctx<'a>, base: usize, matrix: &'a Formula, target: Tri) -> Result<bool> {
    let order: Vec<(usize, usize)> = (base..ctx.so.len())
        .rev()
        .flat_map(|t| (0..ctx.so[t].cells.len()).rev().map(move |c| (t, c)))
        .collect();
    search_from(ctx, &order, 0, matrix, target)
}

fn search_from<'a>(
    ctx: &mut Ctx<'a>,
    order: &[(usize, usize)],
    depth: usize,
    matrix: &'a Formula,
    target: Tri,
) -> Result<bool> {
    let v = ctx.eval(matrix)?;
    if v == target {
        return Ok(true);
    }
    if v != Tri::Unknown {
        return Ok(false);
    }
    let (t, c) = order[depth];
    for value in [CELL_FALSE, CELL_TRUE] {
        ctx.so[t].cells[c] = value;
        if search_from(ctx, order, depth + 1, matrix, target)? {
            ctx.so[t].cells[c] = CELL_UNKNOWN;
            return Ok(true);
        }
    }
    ctx.so[t].cells[c] = CELL_UNKNOWN;
    Ok(false)
}

/// Relation cells and constants pinned by the top-level conjuncts of `f`
/// under `asg`, or `None` if two conjuncts pin the same thing differently.
pub(crate) struct Pinned {
    pub cells: Vec<(usize, usize, bool)>,
    pub constants: Vec<(usize, u32)>,
}

fn ground_value(t: &Term, asg: &Assignment, m: u32) -> Option<u32> {
    match t {
        Term::Var(v) => asg.get(v).copied(),
        Term::Zero => Some(0),
        Term::Max => Some(m - 1),
        Term::Elem(e) => Some(*e),
        Term::Const(_) => None,
    }
}

pub(crate) fn pinned(voc: &Vocabulary, f: &Formula, asg: &Assignment, m: u32) -> Option<Pinned> {
    let mut conjuncts = Vec::new();
    flatten_and(f, &mut conjuncts);
    let mut out = Pinned {
        cells: Vec::new(),
        constants: Vec::new(),
    };
    for c in conjuncts {
        let Some(lit) = crate::formula::Literal::from_formula(c) else {
            continue;
        };
        match &lit.atom {
            Atom::Rel { name, args } => {
                let Some(rel) = voc.relation_index(name) else { continue };
                let vals: Option<Vec<u32>> = args.iter().map(|t| ground_value(t, asg, m)).collect();
                let Some(vals) = vals else { continue };
                if vals.iter().any(|&v| v >= m) {
                    continue;
                }
                let idx = vals.iter().fold(0usize, |acc, &v| acc * m as usize + v as usize);
                match out.cells.iter().find(|(r, i, _)| *r == rel && *i == idx) {
                    Some(&(_, _, p)) if p != lit.positive => return None,
                    Some(_) => {}
                    None => out.cells.push((rel, idx, lit.positive)),
                }
            }
            Atom::Num {
                rel: NumericRel::Eq,
                left,
                right,
            } if lit.positive => {
                let (c, other) = match (left, right) {
                    (Term::Const(c), o) | (o, Term::Const(c)) => (c, o),
                    _ => continue,
                };
                let (Some(ci), Some(v)) = (voc.constant_index(c), ground_value(other, asg, m)) else {
                    continue;
                };
                if v >= m {
                    continue;
                }
                match out.constants.iter().find(|(i, _)| *i == ci) {
                    Some(&(_, w)) if w != v => return None,
                    Some(_) => {}
                    None => out.constants.push((ci, v)),
                }
            }
            _ => {}
        }
    }
    Some(out)
}

fn flatten_and<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(parts) => parts.iter().for_each(|p| flatten_and(p, out)),
        other => out.push(other),
    }
}

/// The space of size-`m` structures compatible with the pinned conjuncts of
/// `f`, or `None` when the conjuncts contradict each other.
pub(crate) fn candidate_space(
    voc: &Arc<Vocabulary>,
    f: &Formula,
    asg: &Assignment,
    m: u32,
) -> Result<Option<StructureSpace>> {
    let Some(pins) = pinned(voc, f, asg, m) else {
        return Ok(None);
    };
    let mut base = Structure::empty(voc.clone(), m)?;
    for &(rel, idx, v) in &pins.cells {
        base.set_at(rel, idx, v);
    }
    for &(c, v) in &pins.constants {
        base.set_constant_at(c, v);
    }
    let cells: Vec<(usize, usize)> = pins.cells.iter().map(|&(r, i, _)| (r, i)).collect();
    let consts: Vec<usize> = pins.constants.iter().map(|&(c, _)| c).collect();
    Ok(Some(StructureSpace::with_fixed(base, &cells, &consts)))
}

/// Searches for a size-`m` structure satisfying `f` under `asg` (and accepted
/// by `within`, when given). Returns the first such structure in enumeration
/// order.
///
/// Only the cells not pinned by a top-level ground conjunct are enumerated;
/// pinned cells would reject every other candidate anyway.
pub fn is_consistent(
    voc: &Arc<Vocabulary>,
    f: &Formula,
    asg: &Assignment,
    m: u32,
    within: Option<&dyn DecisionProblem>,
    budget: u64,
) -> Result<Option<Structure>> {
    if m < 2 {
        return Err(Error::SizeTooSmall(m));
    }
    if !f.is_first_order() {
        return Err(Error::NotFirstOrder);
    }
    f.check(voc)?;
    check_bound(f, asg)?;
    if let Some((e, _)) = asg.iter().find(|(_, &v)| v >= m) {
        return Err(Error::OutOfUniverse {
            element: asg[e] as u64,
            size: m,
        });
    }
    if let Some(p) = within {
        if **p.vocabulary() != **voc {
            return Err(Error::VocabularyMismatch {
                expected: p.vocabulary().name().into(),
                found: voc.name().into(),
            });
        }
    }
    let Some(space) = candidate_space(voc, f, asg, m)? else {
        return Ok(None);
    };
    let count = space.count_within(budget)?;
    search_space(&space, 0, count, f, asg, within)
}

/// First structure in `space[start..end]` satisfying `f` (and `within`).
pub fn search_space(
    space: &StructureSpace,
    start: u64,
    end: u64,
    f: &Formula,
    asg: &Assignment,
    within: Option<&dyn DecisionProblem>,
) -> Result<Option<Structure>> {
    let found = space.scan(start, end, |_, s| {
        let sat = Ctx::with_assignment(s, asg).eval_bool(f);
        let ok = match (sat, within) {
            (Err(e), _) => Err(e),
            (Ok(false), _) => Ok(false),
            (Ok(true), None) => Ok(true),
            (Ok(true), Some(p)) => p.accepts(s),
        };
        match ok {
            Ok(false) => ControlFlow::Continue(()),
            Ok(true) => ControlFlow::Break(Ok(s.clone())),
            Err(e) => ControlFlow::Break(Err(e)),
        }
    });
    found.transpose()
}
