//! Decision problems: a vocabulary, a direct decider and, where available, a
//! defining second-order sentence.

pub mod deciders;
pub mod definitions;
pub mod reductions;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::eval::{so_table_count, DEFAULT_BUDGET};
use crate::formula::Formula;
use crate::structure::Structure;
use crate::vocab::{builtin, Vocabulary};

/// How membership reacts to adding tuples to relations (constants and size
/// fixed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    /// Closed under adding tuples.
    Increasing,
    /// Closed under removing tuples.
    Decreasing,
    None,
}

pub trait DecisionProblem: Send + Sync {
    fn name(&self) -> &str;
    fn vocabulary(&self) -> &Arc<Vocabulary>;
    /// Fails with `VocabularyMismatch` for structures over another vocabulary.
    fn accepts(&self, a: &Structure) -> Result<bool>;
    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::None
    }
}

#[derive(Clone)]
pub struct Problem {
    name: &'static str,
    vocabulary: Arc<Vocabulary>,
    decider: fn(&Structure) -> bool,
    definition: Option<fn() -> Formula>,
    class: &'static str,
    monotonicity: Monotonicity,
}

impl core::fmt::Debug for Problem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("vocabulary", &self.vocabulary.name())
            .field("class", &self.class)
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: &'static str,
        vocabulary: Vocabulary,
        decider: fn(&Structure) -> bool,
        definition: Option<fn() -> Formula>,
        class: &'static str,
        monotonicity: Monotonicity,
    ) -> Self {
        Problem {
            name,
            vocabulary: Arc::new(vocabulary),
            decider,
            definition,
            class,
            monotonicity,
        }
    }

    pub fn definition(&self) -> Option<Formula> {
        self.definition.map(|f| f())
    }

    /// Complexity class the problem is complete for.
    pub fn class(&self) -> &'static str {
        self.class
    }

    /// Table count of the definition's second-order prefix at size `n`.
    pub fn definition_cost(&self, n: u32) -> Option<BigUint> {
        self.definition().map(|f| so_table_count(&f, n))
    }

    /// A budget large enough for the definition at size `n`, at least the
    /// default.
    pub fn definition_budget(&self, n: u32) -> u64 {
        self.definition_cost(n)
            .and_then(|c| u64::try_from(c).ok())
            .map_or(DEFAULT_BUDGET, |c| c.max(DEFAULT_BUDGET))
    }

    pub fn pad(&self, threshold: u32) -> PaddedProblem {
        PaddedProblem::new(self.clone(), threshold)
    }
}

impl DecisionProblem for Problem {
    fn name(&self) -> &str {
        self.name
    }

    fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocabulary
    }

    fn accepts(&self, a: &Structure) -> Result<bool> {
        a.require_vocabulary(&self.vocabulary)?;
        Ok((self.decider)(a))
    }

    fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }
}

/// `S_n`: the base problem together with every structure of size below `n`.
#[derive(Debug, Clone)]
pub struct PaddedProblem {
    base: Problem,
    threshold: u32,
    name: String,
}

impl PaddedProblem {
    pub fn new(base: Problem, threshold: u32) -> Self {
        let name = format!("{}@{}", base.name, threshold);
        PaddedProblem { base, threshold, name }
    }

    pub fn base(&self) -> &Problem {
        &self.base
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }
}

impl DecisionProblem for PaddedProblem {
    fn name(&self) -> &str {
        &self.name
    }

    fn vocabulary(&self) -> &Arc<Vocabulary> {
        self.base.vocabulary()
    }

    fn accepts(&self, a: &Structure) -> Result<bool> {
        a.require_vocabulary(self.base.vocabulary())?;
        Ok(a.size() < self.threshold || (self.base.decider)(a))
    }

    fn monotonicity(&self) -> Monotonicity {
        self.base.monotonicity
    }
}

/// Every catalog problem, in a fixed order.
pub fn catalog() -> Vec<Problem> {
    use Monotonicity as M;
    Vec::from([
        Problem::new(
            "reach",
            builtin::st_graph(),
            deciders::reach,
            Some(definitions::reach),
            "NL",
            M::Increasing,
        ),
        Problem::new(
            "reach_undirected",
            builtin::st_graph(),
            deciders::reach_undirected,
            None,
            "L",
            M::Increasing,
        ),
        Problem::new(
            "altreach",
            builtin::alt_graph(),
            deciders::altreach,
            Some(definitions::altreach),
            "P",
            M::None,
        ),
        Problem::new(
            "hp_0max",
            builtin::graph(),
            deciders::hp_0max,
            Some(definitions::hp_0max),
            "NP",
            M::Increasing,
        ),
        Problem::new(
            "hp_0max_undirected",
            builtin::graph(),
            deciders::hp_0max_undirected,
            None,
            "NP",
            M::Increasing,
        ),
        Problem::new("hp_01", builtin::graph(), deciders::hp_01, None, "NP", M::Increasing),
        Problem::new(
            "hp_two_points",
            builtin::st_graph(),
            deciders::hp_two_points,
            Some(definitions::hp_two_points),
            "NP",
            M::Increasing,
        ),
        Problem::new(
            "hp_two_points_undirected",
            builtin::st_graph(),
            deciders::hp_two_points_undirected,
            None,
            "NP",
            M::Increasing,
        ),
        Problem::new(
            "mono_triangle",
            builtin::graph(),
            deciders::mono_triangle,
            Some(definitions::mono_triangle),
            "NP",
            M::Decreasing,
        ),
        Problem::new(
            "co_mono_triangle",
            builtin::graph(),
            deciders::co_mono_triangle,
            Some(definitions::co_mono_triangle),
            "coNP",
            M::Increasing,
        ),
        Problem::new(
            "three_dm",
            builtin::three_dm(),
            deciders::three_dm,
            Some(definitions::three_dm),
            "NP",
            M::Increasing,
        ),
        Problem::new(
            "longest_path",
            builtin::longest_path(),
            deciders::longest_path,
            None,
            "NP",
            M::None,
        ),
    ])
}

pub fn problem(name: &str) -> Result<Problem> {
    catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProblem(name.into()))
}

/// Directed problems paired with their version on undirected graphs.
pub const DIRECTED_PAIRS: &[(&str, &str)] = &[
    ("reach", "reach_undirected"),
    ("hp_0max", "hp_0max_undirected"),
    ("hp_two_points", "hp_two_points_undirected"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{enumerate_structures, Limits};

    #[test]
    fn names_are_unique_and_resolvable() {
        let all = catalog();
        for (i, p) in all.iter().enumerate() {
            assert!(all[i + 1..].iter().all(|q| q.name != p.name));
            assert_eq!(problem(p.name).unwrap().name, p.name);
        }
        assert!(matches!(problem("sat"), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn padding_accepts_small_structures() {
        let reach = problem("reach").unwrap();
        let voc = reach.vocabulary().clone();
        for a in enumerate_structures(voc.clone(), 3, Limits::default()).unwrap() {
            assert!(reach.pad(5).accepts(&a).unwrap());
            assert_eq!(reach.pad(2).accepts(&a).unwrap(), reach.accepts(&a).unwrap());
        }
        let mut a = Structure::empty(voc, 4).unwrap();
        a.set_constant("t", 3).unwrap();
        assert!(!reach.pad(3).accepts(&a).unwrap());
    }

    #[test]
    fn vocabulary_is_checked() {
        let g = Structure::empty(Arc::new(builtin::graph()), 2).unwrap();
        assert!(matches!(
            problem("reach").unwrap().accepts(&g),
            Err(Error::VocabularyMismatch { .. })
        ));
    }
}
