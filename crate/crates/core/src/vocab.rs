//! Relational vocabularies: named relation symbols with arities plus constant
//! symbols. The numeric built-ins (`=`, `<=`, `bit`, `suc`, `0`, `max`) are
//! never part of a vocabulary.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Words that may not be used as relation, constant or variable names.
pub const RESERVED: &[&str] = &[
    "=", "<=", "bit", "suc", "0", "max", "forall", "exists", "forall2", "exists2", "not", "and", "or", "->", "<->",
    "true", "false",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// `[A-Za-z_][A-Za-z0-9_']*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vocabulary {
    name: String,
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl Vocabulary {
    pub fn new<R, C>(name: &str, relations: R, constants: C) -> Result<Self>
    where
        R: IntoIterator<Item = (String, usize)>,
        C: IntoIterator<Item = String>,
    {
        let relations: Vec<_> = relations.into_iter().collect();
        let constants: Vec<_> = constants.into_iter().collect();
        let mut seen: Vec<&str> = Vec::new();
        for sym in relations.iter().map(|(n, _)| n).chain(constants.iter()) {
            if is_reserved(sym) {
                return Err(Error::ReservedSymbol(sym.clone()));
            }
            if !is_identifier(sym) {
                return Err(Error::InvalidVocabulary(alloc::format!("`{sym}` is not an identifier")));
            }
            if seen.contains(&sym.as_str()) {
                return Err(Error::InvalidVocabulary(alloc::format!(
                    "symbol `{sym}` declared twice"
                )));
            }
            seen.push(sym);
        }
        if let Some((sym, _)) = relations.iter().find(|(_, a)| *a == 0) {
            return Err(Error::InvalidVocabulary(alloc::format!("relation `{sym}` has arity 0")));
        }
        Ok(Vocabulary {
            name: name.to_string(),
            relations,
            constants,
        })
    }

    /// Shorthand for tests and built-in catalogs; panics on invalid input.
    pub fn of(name: &str, relations: &[(&str, usize)], constants: &[&str]) -> Self {
        Self::new(
            name,
            relations.iter().map(|(n, a)| (n.to_string(), *a)),
            constants.iter().map(|c| c.to_string()),
        )
        .expect("static vocabulary is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constant_index(name).is_some()
    }

    /// Same symbols with a different name.
    pub fn renamed(&self, name: &str) -> Self {
        Vocabulary {
            name: name.to_string(),
            ..self.clone()
        }
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vocab {} {{ ", self.name)?;
        let mut first = true;
        for (r, a) in &self.relations {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{r}/{a}")?;
        }
        for c in &self.constants {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            f.write_str(c)?;
        }
        f.write_str(if first { "}" } else { " }" })
    }
}

/// Built-in vocabularies used by the problem catalog.
pub mod builtin {
    use super::Vocabulary;

    pub fn graph() -> Vocabulary {
        Vocabulary::of("graph", &[("E", 2)], &[])
    }

    pub fn st_graph() -> Vocabulary {
        Vocabulary::of("st-graph", &[("E", 2)], &["s", "t"])
    }

    pub fn alt_graph() -> Vocabulary {
        Vocabulary::of("alt-graph", &[("E", 2), ("U", 1)], &["s", "t"])
    }

    pub fn three_dm() -> Vocabulary {
        Vocabulary::of("3dm", &[("M", 3)], &[])
    }

    pub fn longest_path() -> Vocabulary {
        Vocabulary::of("longest-path", &[("L", 3), ("E", 2), ("K", 1)], &["s", "t"])
    }

    pub fn all() -> alloc::vec::Vec<Vocabulary> {
        alloc::vec![graph(), st_graph(), alt_graph(), three_dm(), longest_path()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_duplicates() {
        let bad = Vocabulary::new("v", [("max".to_string(), 1)], []);
        assert_eq!(bad, Err(Error::ReservedSymbol("max".into())));
        let dup = Vocabulary::new("v", [("E".to_string(), 2)], ["E".to_string()]);
        assert!(matches!(dup, Err(Error::InvalidVocabulary(_))));
        let zero = Vocabulary::new("v", [("P".to_string(), 0)], []);
        assert!(matches!(zero, Err(Error::InvalidVocabulary(_))));
    }

    #[test]
    fn display_matches_header_format() {
        assert_eq!(builtin::st_graph().to_string(), "vocab st-graph { E/2; s; t }");
        assert_eq!(builtin::graph().to_string(), "vocab graph { E/2 }");
    }
}
