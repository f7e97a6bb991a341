//! `(n,k)`-uniformity checking at fixed sizes `m`.
//!
//! A conjunction is a set of ground items over `[m]`: relation literals
//! `R(ū)` / `¬R(ū)` and constant bindings `c = b`. Items are ordered by
//! relation, tuple index and polarity (positive first), followed by bindings
//! by constant and value; conjunctions are visited by size and then
//! lexicographically. Conjunctions containing `L` and `¬L`, or two different
//! values for one constant, are not `m`-consistent and are skipped; every
//! other conjunction is `m`-consistent.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::eval::{eval_fo, search_space, Assignment};
use crate::formula::{Atom, Formula, Literal, NumericRel, Term};
use crate::problems::{deciders, DecisionProblem, Monotonicity};
use crate::structure::{checked_power, tuple_at, tuple_index, Structure, StructureSpace};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Literal { rel: usize, index: usize, positive: bool },
    Binding { constant: usize, value: u32 },
}

/// All items over a vocabulary at size `m`, in item order.
#[derive(Debug, Clone)]
pub struct ItemSpace {
    voc: Arc<Vocabulary>,
    m: u32,
    items: Vec<Item>,
}

impl ItemSpace {
    pub fn new(voc: Arc<Vocabulary>, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::SizeTooSmall(m));
        }
        let mut items = Vec::new();
        for (rel, (_, arity)) in voc.relations().iter().enumerate() {
            let cells = checked_power(m as u64, *arity)
                .filter(|&c| c <= u32::MAX as u64)
                .ok_or(Error::TooLarge {
                    size: m as u64,
                    arity: *arity,
                })?;
            for index in 0..cells as usize {
                items.push(Item::Literal {
                    rel,
                    index,
                    positive: true,
                });
                items.push(Item::Literal {
                    rel,
                    index,
                    positive: false,
                });
            }
        }
        for constant in 0..voc.constants().len() {
            for value in 0..m {
                items.push(Item::Binding { constant, value });
            }
        }
        Ok(ItemSpace { voc, m, items })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn position(&self, item: &Item) -> Option<usize> {
        self.items.binary_search(item).ok()
    }

    /// The conjunction made of the items at `positions`.
    pub fn conjunction(&self, positions: &[usize]) -> Conjunction {
        Conjunction {
            voc: self.voc.clone(),
            m: self.m,
            items: positions.iter().map(|&i| self.items[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjunction {
    voc: Arc<Vocabulary>,
    m: u32,
    items: Vec<Item>,
}

impl Conjunction {
    /// Parses a conjunction of ground literals `R(ū)`, `¬R(ū)` with numeral,
    /// `0` or `max` arguments and bindings `c = b`.
    pub fn from_formula(voc: Arc<Vocabulary>, f: &Formula, m: u32) -> Result<Self> {
        let mut parts = Vec::new();
        collect_conjuncts(f, &mut parts);
        let ground = |t: &Term| -> Result<u32> {
            let v = match t {
                Term::Zero => 0,
                Term::Max => m - 1,
                Term::Elem(e) => *e,
                other => return Err(Error::InvalidQuery(format!("`{other}` is not an element"))),
            };
            if v >= m {
                return Err(Error::OutOfUniverse {
                    element: v as u64,
                    size: m,
                });
            }
            Ok(v)
        };
        let mut items = BTreeSet::new();
        for p in parts {
            let lit = Literal::from_formula(p).ok_or_else(|| Error::InvalidQuery(format!("`{p}` is not a literal")))?;
            match &lit.atom {
                Atom::Rel { name, args } => {
                    let rel = voc
                        .relation_index(name)
                        .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                    let tuple = args.iter().map(ground).collect::<Result<Vec<_>>>()?;
                    items.insert(Item::Literal {
                        rel,
                        index: tuple_index(&tuple, m)? as usize,
                        positive: lit.positive,
                    });
                }
                Atom::Num {
                    rel: NumericRel::Eq,
                    left,
                    right,
                } if lit.positive => {
                    let (c, t) = match (left, right) {
                        (Term::Const(c), t) | (t, Term::Const(c)) => (c, t),
                        _ => return Err(Error::InvalidQuery(format!("`{p}` is not a binding"))),
                    };
                    let constant = voc.constant_index(c).ok_or_else(|| Error::UnknownSymbol(c.clone()))?;
                    items.insert(Item::Binding {
                        constant,
                        value: ground(t)?,
                    });
                }
                _ => return Err(Error::InvalidQuery(format!("`{p}` is neither a literal nor a binding"))),
            }
        }
        Ok(Conjunction {
            voc,
            m,
            items: items.into_iter().collect(),
        })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn size(&self) -> u32 {
        self.m
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.voc
    }

    pub fn is_contradictory(&self) -> bool {
        self.items.iter().enumerate().any(|(i, a)| {
            self.items[i + 1..].iter().any(|b| match (a, b) {
                (
                    Item::Literal { rel, index, positive },
                    Item::Literal {
                        rel: r2,
                        index: i2,
                        positive: p2,
                    },
                ) => rel == r2 && index == i2 && positive != p2,
                (
                    Item::Binding { constant, value },
                    Item::Binding {
                        constant: c2,
                        value: v2,
                    },
                ) => constant == c2 && value != v2,
                _ => false,
            })
        })
    }

    fn arity(&self, rel: usize) -> usize {
        self.voc.relations()[rel].1
    }

    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.items.iter().map(|item| match *item {
            Item::Literal { rel, index, positive } => {
                let (name, arity) = &self.voc.relations()[rel];
                let atom = Formula::rel(name, tuple_at(index as u64, self.m, *arity).into_iter().map(Term::elem));
                if positive {
                    atom
                } else {
                    Formula::not(atom)
                }
            }
            Item::Binding { constant, value } => {
                Formula::eq(Term::constant(&self.voc.constants()[constant]), Term::elem(value))
            }
        }))
    }

    /// Elements mentioned by the conjunction.
    pub fn constrained(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for item in &self.items {
            match *item {
                Item::Literal { rel, index, .. } => {
                    out.extend(tuple_at(index as u64, self.m, self.arity(rel)));
                }
                Item::Binding { value, .. } => {
                    out.insert(value);
                }
            }
        }
        out
    }

    fn bound_constants(&self) -> Vec<(usize, u32)> {
        self.items
            .iter()
            .filter_map(|i| match *i {
                Item::Binding { constant, value } => Some((constant, value)),
                _ => None,
            })
            .collect()
    }

    fn pinned_cells(&self) -> Vec<(usize, usize)> {
        self.items
            .iter()
            .filter_map(|i| match *i {
                Item::Literal { rel, index, .. } => Some((rel, index)),
                _ => None,
            })
            .collect()
    }

    /// The least model: exactly the positive literals hold. Unbound
    /// constants take the value of the first bound constant, or else the
    /// first unconstrained element.
    pub fn minimal_model(&self) -> Result<Structure> {
        let mut a = Structure::empty(self.voc.clone(), self.m)?;
        for item in &self.items {
            if let Item::Literal {
                rel,
                index,
                positive: true,
            } = *item
            {
                a.set_at(rel, index, true);
            }
        }
        let bound = self.bound_constants();
        let constrained = self.constrained();
        let default = bound
            .first()
            .map(|&(_, v)| v)
            .or_else(|| (0..self.m).find(|e| !constrained.contains(e)))
            .unwrap_or(0);
        for c in 0..self.voc.constants().len() {
            let v = bound.iter().find(|(b, _)| *b == c).map_or(default, |&(_, v)| v);
            a.set_constant_at(c, v);
        }
        Ok(a)
    }
}

fn collect_conjuncts<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(parts) => parts.iter().for_each(|p| collect_conjuncts(p, out)),
        Formula::True => {}
        other => out.push(other),
    }
}

impl core::fmt::Display for Conjunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.to_formula().fmt(f)
    }
}

/// `C(len, size)` combinations in lexicographic order, optionally restricted
/// to those whose first element is congruent to `shard` modulo `shards`.
fn for_each_combination(
    len: usize,
    size: usize,
    shard: usize,
    shards: usize,
    mut visit: impl FnMut(&[usize]) -> Result<ControlFlow<()>>,
) -> Result<ControlFlow<()>> {
    if size == 0 {
        return if shard == 0 {
            visit(&[])
        } else {
            Ok(ControlFlow::Continue(()))
        };
    }
    if size > len {
        return Ok(ControlFlow::Continue(()));
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if idx[0] % shards == shard && visit(&idx)?.is_break() {
            return Ok(ControlFlow::Break(()));
        }
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(ControlFlow::Continue(()));
            }
            i -= 1;
            if idx[i] < len - size + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        // Skip whole blocks whose first element belongs to another shard.
        if i == 0 && shards > 1 {
            while idx[0] % shards != shard {
                idx[0] += 1;
                if idx[0] > len - size {
                    return Ok(ControlFlow::Continue(()));
                }
            }
            for j in 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Constructive,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub mode: Mode,
    /// In exhaustive mode, decide monotone problems from their extremal
    /// structures instead of searching every completion.
    pub monotone_shortcut: bool,
    pub budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Exhaustive,
            monotone_shortcut: true,
            budget: crate::eval::DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// Every completion of the conjunction was decided and rejected.
    Exhaustive { structures_checked: u64 },
    /// The problem is monotone and the extremal completions (one per
    /// assignment of the unbound constants) are all rejected.
    Extremal { structures: Vec<Structure> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub conjunction: Conjunction,
    /// A size-`m` model of the conjunction.
    pub consistency_witness: Structure,
    pub refutation: Refutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inconclusive {
    Budget { needed: BigUint, budget: u64 },
    NoBuilder(String),
    Builder(Error),
}

/// Result of one conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Contradictory,
    /// A structure in the problem satisfying the conjunction.
    Witnessed(Structure),
    Refuted(Counterexample),
    Inconclusive(Conjunction, Inconclusive),
}

/// Decides whether one conjunction is `m`-consistent in the problem.
pub fn check_conjunction(p: &dyn DecisionProblem, c: &Conjunction, opts: &Options) -> Result<Outcome> {
    if c.is_contradictory() {
        return Ok(Outcome::Contradictory);
    }
    let model = c.minimal_model()?;
    let phi = c.to_formula();
    match opts.mode {
        Mode::Constructive => {
            let Some(build) = witness_builder(p.name()) else {
                return Ok(Outcome::Inconclusive(
                    c.clone(),
                    Inconclusive::NoBuilder(p.name().to_string()),
                ));
            };
            let out = match build(&model, c) {
                Ok(s) => s,
                Err(e) => return Ok(Outcome::Inconclusive(c.clone(), Inconclusive::Builder(e))),
            };
            let gate = |name: &'static str| Error::ContradictoryWitnessBuilder {
                problem: p.name().to_string(),
                gate: name,
                conjunction: c.to_string(),
            };
            if !p.accepts(&out)? {
                return Err(gate("decider"));
            }
            if !eval_fo(&out, &phi, &Assignment::new())? {
                return Err(gate("formula"));
            }
            Ok(Outcome::Witnessed(out))
        }
        Mode::Exhaustive => {
            let mono = p.monotonicity();
            if opts.monotone_shortcut && mono != Monotonicity::None {
                return extremal(p, c, model, mono == Monotonicity::Increasing, opts.budget);
            }
            let space = StructureSpace::with_fixed(
                model.clone(),
                &c.pinned_cells(),
                &c.bound_constants().iter().map(|&(k, _)| k).collect::<Vec<_>>(),
            );
            let count = match space.count_within(opts.budget) {
                Ok(n) => n,
                Err(Error::BudgetExceeded { needed, budget }) => {
                    return Ok(Outcome::Inconclusive(
                        c.clone(),
                        Inconclusive::Budget { needed, budget },
                    ))
                }
                Err(e) => return Err(e),
            };
            match search_space(&space, 0, count, &phi, &Assignment::new(), Some(p))? {
                Some(s) => Ok(Outcome::Witnessed(s)),
                None => Ok(Outcome::Refuted(Counterexample {
                    conjunction: c.clone(),
                    consistency_witness: model,
                    refutation: Refutation::Exhaustive {
                        structures_checked: count,
                    },
                })),
            }
        }
    }
}

fn extremal(p: &dyn DecisionProblem, c: &Conjunction, model: Structure, fill: bool, budget: u64) -> Result<Outcome> {
    let pinned = c.pinned_cells();
    let mut top = model.clone();
    for rel in 0..c.voc.relations().len() {
        for index in 0..top.table(rel).len() {
            if !pinned.contains(&(rel, index)) {
                top.set_at(rel, index, fill);
            }
        }
    }
    let bound: Vec<usize> = c.bound_constants().iter().map(|&(k, _)| k).collect();
    let free: Vec<usize> = (0..c.voc.constants().len()).filter(|k| !bound.contains(k)).collect();
    let combos = checked_power(c.m as u64, free.len()).unwrap_or(u64::MAX);
    if combos > budget {
        return Ok(Outcome::Inconclusive(
            c.clone(),
            Inconclusive::Budget {
                needed: BigUint::from(combos),
                budget,
            },
        ));
    }
    let mut checked = Vec::new();
    for idx in 0..combos {
        let mut s = top.clone();
        // Constants vary fastest from the last one, as in the full order.
        for (&k, v) in free.iter().zip(tuple_at(idx, c.m, free.len())) {
            s.set_constant_at(k, v);
        }
        if p.accepts(&s)? {
            return Ok(Outcome::Witnessed(s));
        }
        checked.push(s);
    }
    Ok(Outcome::Refuted(Counterexample {
        conjunction: c.clone(),
        consistency_witness: model,
        refutation: Refutation::Extremal { structures: checked },
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Uniform { conjunctions: u64 },
    Counterexample(Box<Counterexample>),
    Inconclusive(Conjunction, Inconclusive),
}

/// What one shard of the conjunction space found.
#[derive(Debug, Clone)]
pub struct ShardOutcome {
    pub checked: u64,
    /// First failing conjunction in visiting order: `(size, positions)`.
    pub failure: Option<((usize, Vec<usize>), Verdict)>,
}

/// Checks the conjunctions with at most `k` items at size `m` whose first
/// item position is `shard` modulo `shards`, stopping at the first failure.
pub fn check_shard(
    p: &dyn DecisionProblem,
    k: usize,
    m: u32,
    opts: &Options,
    shard: usize,
    shards: usize,
) -> Result<ShardOutcome> {
    let space = ItemSpace::new(p.vocabulary().clone(), m)?;
    let mut checked = 0u64;
    let mut failure = None;
    for size in 0..=k {
        let flow = for_each_combination(space.items.len(), size, shard, shards.max(1), |pos| {
            let c = space.conjunction(pos);
            let verdict = match check_conjunction(p, &c, opts)? {
                Outcome::Contradictory => return Ok(ControlFlow::Continue(())),
                Outcome::Witnessed(_) => {
                    checked += 1;
                    return Ok(ControlFlow::Continue(()));
                }
                Outcome::Refuted(cx) => Verdict::Counterexample(Box::new(cx)),
                Outcome::Inconclusive(c, why) => Verdict::Inconclusive(c, why),
            };
            failure = Some(((size, pos.to_vec()), verdict));
            Ok(ControlFlow::Break(()))
        })?;
        if flow.is_break() {
            break;
        }
    }
    Ok(ShardOutcome { checked, failure })
}

/// Combines shard results; independent of how the space was split.
pub fn merge_shards(outcomes: Vec<ShardOutcome>) -> Verdict {
    let total = outcomes.iter().map(|o| o.checked).sum();
    outcomes
        .into_iter()
        .filter_map(|o| o.failure)
        .min_by(|a, b| a.0.cmp(&b.0))
        .map_or(Verdict::Uniform { conjunctions: total }, |(_, v)| v)
}

#[derive(Debug, Clone)]
pub struct UniformityQuery {
    pub n: u32,
    pub k: usize,
    pub m_range: Vec<u32>,
    pub options: Options,
}

impl UniformityQuery {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::SizeTooSmall(self.n));
        }
        if let Some(m) = self.m_range.iter().find(|&&m| m < self.n) {
            return Err(Error::InvalidQuery(format!("m = {m} is below n = {}", self.n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub problem: String,
    pub n: u32,
    pub k: usize,
    pub verdicts: Vec<(u32, Verdict)>,
}

impl UniformityReport {
    pub fn is_uniform(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| matches!(v, Verdict::Uniform { .. }))
    }
}

/// Sequential check of every size in the query.
pub fn check_uniformity(p: &dyn DecisionProblem, q: &UniformityQuery) -> Result<UniformityReport> {
    q.validate()?;
    let mut verdicts = Vec::new();
    for &m in &q.m_range {
        let shard = check_shard(p, q.k, m, &q.options, 0, 1)?;
        verdicts.push((m, merge_shards(vec![shard])));
    }
    Ok(UniformityReport {
        problem: p.name().to_string(),
        n: q.n,
        k: q.k,
        verdicts,
    })
}

/// Extends the least model of a conjunction to a structure in the problem.
pub type WitnessBuilder = fn(&Structure, &Conjunction) -> Result<Structure>;

pub fn witness_builder(problem: &str) -> Option<WitnessBuilder> {
    Some(match problem {
        "reach" => |a, c| witness_reach(a, &c.constrained()),
        "altreach" => |a, c| witness_altreach(a, &c.constrained()),
        "hp_0max" => witness_hp_for,
        "co_mono_triangle" => |a, c| witness_comono(a, &c.constrained()),
        _ => return None,
    })
}

fn fresh(a: &Structure, constrained: &BTreeSet<u32>, needed: usize) -> Result<Vec<u32>> {
    let free: Vec<u32> = (0..a.size()).filter(|e| !constrained.contains(e)).collect();
    if free.len() < needed {
        return Err(Error::NoFreshVertex {
            needed,
            available: free.len(),
        });
    }
    Ok(free)
}

fn edge_index(a: &Structure, u: u32, v: u32) -> usize {
    (u * a.size() + v) as usize
}

fn add_edge(a: &mut Structure, u: u32, v: u32) {
    let e = a.vocabulary().relation_index("E").expect("graph vocabulary");
    let i = edge_index(a, u, v);
    a.set_at(e, i, true);
}

/// Adds `s -> a' -> t` through the first element `a'` not in `constrained`.
pub fn witness_reach(a: &Structure, constrained: &BTreeSet<u32>) -> Result<Structure> {
    let x = fresh(a, constrained, 1)?[0];
    let mut out = a.clone();
    let (s, t) = (a.constant("s")?, a.constant("t")?);
    add_edge(&mut out, s, x);
    add_edge(&mut out, x, t);
    Ok(out)
}

/// Adds `s -> a' -> t` and an edge from every constrained element to the
/// fresh existential vertex `a'`. Meant to be applied to the least model of
/// the conjunction.
pub fn witness_altreach(a: &Structure, constrained: &BTreeSet<u32>) -> Result<Structure> {
    let x = fresh(a, constrained, 1)?[0];
    let mut out = a.clone();
    let (s, t) = (a.constant("s")?, a.constant("t")?);
    add_edge(&mut out, s, x);
    add_edge(&mut out, x, t);
    for &c in constrained {
        add_edge(&mut out, c, x);
    }
    Ok(out)
}

/// Adds a Hamiltonian path from `0` to `max` avoiding every absent edge
/// between constrained elements. First tries `0 c1 v1 c2 v2 ... cl vl w..
/// max` with `vi` the constrained inner elements and `ci`, `wi` fresh; falls
/// back to a Hamiltonian path search in the complete digraph without those
/// absent edges.
pub fn witness_hp(a: &Structure, constrained: &BTreeSet<u32>) -> Result<Structure> {
    let e = a.vocabulary().relation_index("E").expect("graph vocabulary");
    hp_avoiding(a, constrained, |u, v| {
        constrained.contains(&u) && constrained.contains(&v) && !a.holds_at(e, edge_index(a, u, v))
    })
}

/// [`witness_hp`] forbidding only the edges negated in the conjunction.
fn witness_hp_for(a: &Structure, c: &Conjunction) -> Result<Structure> {
    let absent: BTreeSet<usize> = c
        .items()
        .iter()
        .filter_map(|i| match *i {
            Item::Literal {
                index, positive: false, ..
            } => Some(index),
            _ => None,
        })
        .collect();
    hp_avoiding(a, &c.constrained(), |u, v| absent.contains(&edge_index(a, u, v)))
}

fn hp_avoiding(a: &Structure, constrained: &BTreeSet<u32>, forbidden: impl Fn(u32, u32) -> bool) -> Result<Structure> {
    let m = a.size();
    let max = m - 1;
    let inner: Vec<u32> = constrained.iter().copied().filter(|&v| v != 0 && v != max).collect();
    let free: Vec<u32> = (1..max).filter(|v| !constrained.contains(v)).collect();
    let mut path = None;
    if free.len() >= inner.len() {
        let mut p = vec![0];
        for (c, v) in free.iter().zip(&inner) {
            p.push(*c);
            p.push(*v);
        }
        p.extend(&free[inner.len()..]);
        p.push(max);
        if p.windows(2).all(|w| !forbidden(w[0], w[1])) {
            path = Some(p);
        }
    }
    if path.is_none() {
        let adj: Vec<Vec<bool>> = (0..m)
            .map(|u| (0..m).map(|v| u != v && !forbidden(u, v)).collect())
            .collect();
        path = deciders::hamiltonian_path(&adj, 0, max as usize).map(|p| p.into_iter().map(|v| v as u32).collect());
    }
    let path = path.ok_or(Error::NoFreshVertex {
        needed: inner.len(),
        available: free.len(),
    })?;
    let mut out = a.clone();
    for w in path.windows(2) {
        add_edge(&mut out, w[0], w[1]);
    }
    Ok(out)
}

/// Adds a complete graph on the first six elements not in `constrained`.
pub fn witness_comono(a: &Structure, constrained: &BTreeSet<u32>) -> Result<Structure> {
    let six = &fresh(a, constrained, 6)?[..6];
    let mut out = a.clone();
    for &u in six {
        for &v in six {
            if u != v {
                add_edge(&mut out, u, v);
            }
        }
    }
    Ok(out)
}
