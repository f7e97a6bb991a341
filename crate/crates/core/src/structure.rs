//! Finite structures over the universe `[n] = {0, ..., n-1}` and their
//! enumeration.
//!
//! Relation tables are dense bit tables indexed by [`tuple_index`], so two
//! structures are equal exactly when they agree on every tuple and constant.
//! Numeric relations are never stored; they follow from the size alone.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::vocab::Vocabulary;

/// Size cap for enumeration entry points (single-structure operations accept
/// larger universes).
pub const DEFAULT_MAX_ENUM_SIZE: u32 = 8;

/// Largest universe size accepted anywhere.
pub const MAX_SIZE: u32 = 1 << 16;

/// Largest number of cells a single relation table may have.
const MAX_CELLS: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    voc: Arc<Vocabulary>,
    size: u32,
    tables: Vec<Vec<bool>>,
    constants: Vec<u32>,
}

/// `bit(i, j)`: whether bit `j` (least significant = 0) of `i` is set.
pub fn bit(i: u32, j: u32, size: u32) -> Result<bool> {
    for v in [i, j] {
        if v >= size {
            return Err(Error::OutOfUniverse {
                element: v as u64,
                size,
            });
        }
    }
    Ok(j < 32 && (i >> j) & 1 == 1)
}

/// Position of `tuple` in the lexicographic order of `[n]^k`, leftmost
/// coordinate most significant.
pub fn tuple_index(tuple: &[u32], n: u32) -> Result<u64> {
    let mut idx: u64 = 0;
    for &u in tuple {
        if u >= n {
            return Err(Error::OutOfUniverse {
                element: u as u64,
                size: n,
            });
        }
        idx = idx
            .checked_mul(n as u64)
            .and_then(|i| i.checked_add(u as u64))
            .ok_or(Error::TooLarge {
                size: n as u64,
                arity: tuple.len(),
            })?;
    }
    Ok(idx)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(mut index: u64, n: u32, arity: usize) -> Vec<u32> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = (index % n as u64) as u32;
        index /= n as u64;
    }
    out
}

/// `n^arity`, if it fits.
pub fn checked_power(n: u64, arity: usize) -> Option<u64> {
    (0..arity).try_fold(1u64, |acc, _| acc.checked_mul(n))
}

fn cells(size: u32, arity: usize) -> Result<usize> {
    checked_power(size as u64, arity)
        .filter(|&c| c <= MAX_CELLS)
        .map(|c| c as usize)
        .ok_or(Error::TooLarge {
            size: size as u64,
            arity,
        })
}

impl Structure {
    /// The structure of the given size with empty relations and every
    /// constant at 0.
    pub fn empty(voc: Arc<Vocabulary>, size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::SizeTooSmall(size));
        }
        if size > MAX_SIZE {
            return Err(Error::TooLarge {
                size: size as u64,
                arity: 1,
            });
        }
        let tables = voc
            .relations()
            .iter()
            .map(|(_, a)| cells(size, *a).map(|c| vec![false; c]))
            .collect::<Result<_>>()?;
        let constants = vec![0; voc.constants().len()];
        Ok(Structure {
            voc,
            size,
            tables,
            constants,
        })
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.voc
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn max(&self) -> u32 {
        self.size - 1
    }

    fn check_element(&self, e: u32) -> Result<()> {
        if e >= self.size {
            Err(Error::OutOfUniverse {
                element: e as u64,
                size: self.size,
            })
        } else {
            Ok(())
        }
    }

    fn rel(&self, name: &str) -> Result<usize> {
        self.voc
            .relation_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))
    }

    fn arity_checked(&self, rel: usize, tuple: &[u32]) -> Result<u64> {
        let (name, arity) = &self.voc.relations()[rel];
        if tuple.len() != *arity {
            return Err(Error::ArityMismatch {
                symbol: name.clone(),
                expected: *arity,
                found: tuple.len(),
            });
        }
        tuple_index(tuple, self.size)
    }

    pub fn holds(&self, name: &str, tuple: &[u32]) -> Result<bool> {
        let r = self.rel(name)?;
        let idx = self.arity_checked(r, tuple)?;
        Ok(self.tables[r][idx as usize])
    }

    /// Table lookup by relation position and precomputed tuple index.
    #[inline]
    pub fn holds_at(&self, rel: usize, index: usize) -> bool {
        self.tables[rel][index]
    }

    pub fn set(&mut self, name: &str, tuple: &[u32], value: bool) -> Result<()> {
        let r = self.rel(name)?;
        let idx = self.arity_checked(r, tuple)?;
        self.tables[r][idx as usize] = value;
        Ok(())
    }

    pub fn insert(&mut self, name: &str, tuple: &[u32]) -> Result<()> {
        self.set(name, tuple, true)
    }

    pub fn set_at(&mut self, rel: usize, index: usize, value: bool) {
        self.tables[rel][index] = value;
    }

    pub fn table(&self, rel: usize) -> &[bool] {
        &self.tables[rel]
    }

    pub fn constant(&self, name: &str) -> Result<u32> {
        self.voc
            .constant_index(name)
            .map(|i| self.constants[i])
            .ok_or_else(|| Error::UnknownSymbol(name.into()))
    }

    pub fn constant_at(&self, index: usize) -> u32 {
        self.constants[index]
    }

    pub fn set_constant(&mut self, name: &str, value: u32) -> Result<()> {
        self.check_element(value)?;
        let i = self
            .voc
            .constant_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        self.constants[i] = value;
        Ok(())
    }

    pub fn set_constant_at(&mut self, index: usize, value: u32) {
        self.constants[index] = value;
    }

    /// Tuples of relation `rel` in lexicographic order.
    pub fn tuples(&self, rel: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
        let arity = self.voc.relations()[rel].1;
        let n = self.size;
        self.tables[rel]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| tuple_at(i as u64, n, arity))
    }

    pub fn tuple_count(&self, rel: usize) -> usize {
        self.tables[rel].iter().filter(|&&b| b).count()
    }

    /// Builds a structure from explicit tuple lists and constant values.
    pub fn from_parts(
        voc: Arc<Vocabulary>,
        size: u32,
        relations: &[(&str, &[&[u32]])],
        constants: &[(&str, u32)],
    ) -> Result<Self> {
        let mut s = Structure::empty(voc, size)?;
        for (name, tuples) in relations {
            for t in tuples.iter() {
                s.insert(name, t)?;
            }
        }
        for (name, v) in constants {
            s.set_constant(name, *v)?;
        }
        Ok(s)
    }

    /// Same tables reinterpreted over an equal-shaped vocabulary.
    pub fn with_vocabulary(&self, voc: Arc<Vocabulary>) -> Result<Self> {
        let same_shape = voc.relations().len() == self.voc.relations().len()
            && voc
                .relations()
                .iter()
                .zip(self.voc.relations())
                .all(|(a, b)| a.1 == b.1)
            && voc.constants().len() == self.voc.constants().len();
        if !same_shape {
            return Err(Error::VocabularyMismatch {
                expected: voc.name().into(),
                found: self.voc.name().into(),
            });
        }
        Ok(Structure { voc, ..self.clone() })
    }

    pub fn require_vocabulary(&self, voc: &Vocabulary) -> Result<()> {
        if core::ptr::eq(Arc::as_ptr(&self.voc), voc) || *self.voc == *voc {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch {
                expected: voc.name().into(),
                found: self.voc.name().into(),
            })
        }
    }
}

/// `2^(sum_j n^{a_j}) * n^{#constants}`.
pub fn count_structures(voc: &Vocabulary, n: u32) -> BigUint {
    let n_big = BigUint::from(n);
    let mut bits = BigUint::from(0u32);
    for (_, a) in voc.relations() {
        bits += n_big.pow(*a as u32);
    }
    let bits = u32::try_from(&bits).unwrap_or(u32::MAX);
    (BigUint::from(1u32) << bits) * n_big.pow(voc.constants().len() as u32)
}

/// Caps applied by enumeration entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_size: u32,
    pub max_count: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_size: DEFAULT_MAX_ENUM_SIZE,
            max_count: crate::DEFAULT_BUDGET,
        }
    }
}

impl Limits {
    pub fn with_count(max_count: u64) -> Self {
        Limits {
            max_count,
            ..Limits::default()
        }
    }
}

/// A cell the enumeration may vary: a relation cell or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Cell { rel: usize, index: usize },
    Constant(usize),
}

/// The structures of one size that agree with a set of fixed cells and
/// constants, ordered as a sub-sequence of the full enumeration order.
///
/// The full order treats each relation table as a binary counter (tuple index
/// `j` is bit `j`), places the first relation in the most significant digit,
/// and lets constants vary fastest in lexicographic product order.
#[derive(Debug, Clone)]
pub struct StructureSpace {
    base: Structure,
    /// Free slots, least significant first.
    slots: Vec<Slot>,
    count: BigUint,
}

impl StructureSpace {
    /// All structures of size `n`.
    pub fn full(voc: Arc<Vocabulary>, n: u32) -> Result<Self> {
        let base = Structure::empty(voc, n)?;
        Ok(Self::with_fixed(base, &[], &[]))
    }

    /// Structures agreeing with `base` on the listed relation cells
    /// (`(rel, tuple index)`) and constant positions.
    pub fn with_fixed(base: Structure, fixed_cells: &[(usize, usize)], fixed_constants: &[usize]) -> Self {
        let mut slots = Vec::new();
        for c in (0..base.constants.len()).rev() {
            if !fixed_constants.contains(&c) {
                slots.push(Slot::Constant(c));
            }
        }
        for rel in (0..base.tables.len()).rev() {
            for index in 0..base.tables[rel].len() {
                if !fixed_cells.contains(&(rel, index)) {
                    slots.push(Slot::Cell { rel, index });
                }
            }
        }
        let n = BigUint::from(base.size);
        let mut count = BigUint::from(1u32);
        for s in &slots {
            match s {
                Slot::Cell { .. } => count <<= 1u32,
                Slot::Constant(_) => count *= &n,
            }
        }
        let mut base = base;
        for s in &slots {
            match *s {
                Slot::Cell { rel, index } => base.tables[rel][index] = false,
                Slot::Constant(c) => base.constants[c] = 0,
            }
        }
        StructureSpace { base, slots, count }
    }

    pub fn count(&self) -> &BigUint {
        &self.count
    }

    /// Count as `u64`, failing when it exceeds `budget`.
    pub fn count_within(&self, budget: u64) -> Result<u64> {
        match u64::try_from(&self.count) {
            Ok(c) if c <= budget => Ok(c),
            _ => Err(Error::BudgetExceeded {
                needed: self.count.clone(),
                budget,
            }),
        }
    }

    fn radix(&self, slot: Slot) -> u64 {
        match slot {
            Slot::Cell { .. } => 2,
            Slot::Constant(_) => self.base.size as u64,
        }
    }

    fn write(s: &mut Structure, slot: Slot, value: u64) {
        match slot {
            Slot::Cell { rel, index } => s.tables[rel][index] = value == 1,
            Slot::Constant(c) => s.constants[c] = value as u32,
        }
    }

    fn read(s: &Structure, slot: Slot) -> u64 {
        match slot {
            Slot::Cell { rel, index } => s.tables[rel][index] as u64,
            Slot::Constant(c) => s.constants[c] as u64,
        }
    }

    /// The structure at position `index` of this space.
    pub fn nth(&self, mut index: u64) -> Structure {
        let mut s = self.base.clone();
        for &slot in &self.slots {
            let r = self.radix(slot);
            Self::write(&mut s, slot, index % r);
            index /= r;
        }
        s
    }

    /// Visits positions `start..end` in order; `visit` may stop early.
    pub fn scan<T>(&self, start: u64, end: u64, mut visit: impl FnMut(u64, &Structure) -> ControlFlow<T>) -> Option<T> {
        if start >= end {
            return None;
        }
        let mut s = self.nth(start);
        let mut i = start;
        loop {
            if let ControlFlow::Break(t) = visit(i, &s) {
                return Some(t);
            }
            i += 1;
            if i >= end {
                return None;
            }
            for &slot in &self.slots {
                let r = self.radix(slot);
                let v = Self::read(&s, slot) + 1;
                if v < r {
                    Self::write(&mut s, slot, v);
                    break;
                }
                Self::write(&mut s, slot, 0);
            }
        }
    }
}

/// Every structure of size `n` over `voc`, each exactly once, in enumeration
/// order.
pub fn enumerate_structures(voc: Arc<Vocabulary>, n: u32, limits: Limits) -> Result<impl Iterator<Item = Structure>> {
    if n > limits.max_size {
        return Err(Error::BudgetExceeded {
            needed: count_structures(&voc, n),
            budget: limits.max_count,
        });
    }
    let space = StructureSpace::full(voc, n)?;
    let count = space.count_within(limits.max_count)?;
    Ok((0..count).scan((space, None::<Structure>), |(space, prev), i| {
        let next = match prev.take() {
            None => space.nth(i),
            Some(mut s) => {
                for &slot in &space.slots {
                    let r = space.radix(slot);
                    let v = StructureSpace::read(&s, slot) + 1;
                    if v < r {
                        StructureSpace::write(&mut s, slot, v);
                        break;
                    }
                    StructureSpace::write(&mut s, slot, 0);
                }
                s
            }
        };
        *prev = Some(next.clone());
        Some(next)
    }))
}
