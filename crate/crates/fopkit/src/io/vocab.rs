//! Vocabulary declarations `vocab st-graph { E/2; s; t }` and the registry
//! resolving vocabulary names.

use std::sync::Arc;

use fopkit_core::vocab::{builtin, Vocabulary};

use super::lexer::{SourceSpan, Tok, Tokens};
use super::{numeral, ParseError, Result};

/// Every vocabulary declared in `text`, in order.
pub fn parse_vocabularies(text: &str) -> Result<Vec<Vocabulary>> {
    let mut toks = Tokens::new(text);
    let mut out = Vec::new();
    while !toks.at_end() {
        out.push(read_vocabulary(&mut toks)?);
    }
    Ok(out)
}

pub(crate) fn read_vocabulary(toks: &mut Tokens) -> Result<Vocabulary> {
    let start = toks.keyword("vocab")?;
    let (name, _) = toks.word()?;
    toks.expect(Tok::LBrace)?;
    let mut relations = Vec::new();
    let mut constants = Vec::new();
    while !toks.eat(&Tok::RBrace) {
        let (sym, span) = toks.word()?;
        match sym.split_once('/') {
            Some((r, a)) => relations.push((r.to_string(), numeral(a, span)? as usize)),
            None => constants.push(sym),
        }
        if !toks.eat(&Tok::Semi) {
            toks.expect(Tok::RBrace)?;
            break;
        }
    }
    let end = toks.span();
    Vocabulary::new(&name, relations, constants).map_err(|e| ParseError::invalid(e, start.to(end)))
}

pub fn print_vocabulary(voc: &Vocabulary) -> String {
    voc.to_string()
}

/// Vocabularies by name: the built-in ones plus any registered later.
#[derive(Debug, Clone)]
pub struct Registry {
    vocabularies: Vec<Arc<Vocabulary>>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry {
            vocabularies: builtin::all().into_iter().map(Arc::new).collect(),
        }
    }
}

impl Registry {
    /// Adds or replaces the vocabulary with this name.
    pub fn register(&mut self, voc: Vocabulary) -> Arc<Vocabulary> {
        let voc = Arc::new(voc);
        self.vocabularies.retain(|v| v.name() != voc.name());
        self.vocabularies.push(voc.clone());
        voc
    }

    /// Registers every vocabulary declared in `text`.
    pub fn load(&mut self, text: &str) -> Result<()> {
        for v in parse_vocabularies(text)? {
            self.register(v);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Arc<Vocabulary>> {
        self.vocabularies.iter().find(|v| v.name() == name).cloned()
    }

    pub(crate) fn resolve(&self, name: &str, span: SourceSpan) -> Result<Arc<Vocabulary>> {
        self.get(name).ok_or_else(|| ParseError::UnknownVocabulary {
            name: name.into(),
            span,
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vocabularies.iter().map(|v| v.name())
    }
}
