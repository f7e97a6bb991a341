//! Structures: `structure size=3 vocab=st-graph { E = {(0,1),(1,2)}; s = 0; t = 2 }`.

use std::fmt::Write;

use fopkit_core::structure::{tuple_index, Structure};

use super::lexer::{Tok, Tokens};
use super::vocab::Registry;
use super::{numeral, ParseError, Result};

pub fn parse_structure(text: &str, registry: &Registry) -> Result<Structure> {
    let mut toks = Tokens::new(text);
    let a = read_structure(&mut toks, registry)?;
    toks.finish()?;
    Ok(a)
}

fn element(toks: &mut Tokens, size: u32) -> Result<u32> {
    let (w, span) = toks.word()?;
    let v = if w == "max" { size - 1 } else { numeral(&w, span)? };
    if v >= size {
        return Err(ParseError::OutOfUniverse {
            element: v as u64,
            size,
            span,
        });
    }
    Ok(v)
}

pub(crate) fn read_structure(toks: &mut Tokens, registry: &Registry) -> Result<Structure> {
    let start = toks.keyword("structure")?;
    let (size, size_span) = toks.setting("size")?;
    let size = numeral(&size, size_span)?;
    let (vocab, vocab_span) = toks.setting("vocab")?;
    let voc = registry.resolve(&vocab, vocab_span)?;
    let mut a = Structure::empty(voc.clone(), size).map_err(|e| ParseError::invalid(e, size_span))?;
    let mut seen: Vec<String> = Vec::new();
    toks.expect(Tok::LBrace)?;
    while !toks.eat(&Tok::RBrace) {
        let (sym, span) = toks.word()?;
        if seen.contains(&sym) {
            return Err(ParseError::syntax(format!("`{sym}` is given twice"), span));
        }
        toks.keyword("=")?;
        if let Some(rel) = voc.relation_index(&sym) {
            let arity = voc.relations()[rel].1;
            toks.expect(Tok::LBrace)?;
            while !toks.eat(&Tok::RBrace) {
                let open = toks.expect(Tok::Open)?;
                let mut tuple = Vec::new();
                while !toks.eat(&Tok::Close) {
                    if !tuple.is_empty() {
                        toks.expect(Tok::Comma)?;
                    }
                    tuple.push(element(toks, size)?);
                }
                if tuple.len() != arity {
                    return Err(ParseError::ArityMismatch {
                        symbol: sym,
                        expected: arity,
                        found: tuple.len(),
                        span: open,
                    });
                }
                let index = tuple_index(&tuple, size).map_err(|e| ParseError::invalid(e, open))?;
                a.set_at(rel, index as usize, true);
                if !toks.eat(&Tok::Comma) {
                    toks.expect(Tok::RBrace)?;
                    break;
                }
            }
        } else if let Some(c) = voc.constant_index(&sym) {
            let v = element(toks, size)?;
            a.set_constant_at(c, v);
        } else {
            return Err(ParseError::UnknownSymbol { name: sym, span });
        }
        seen.push(sym);
        if !toks.eat(&Tok::Semi) {
            toks.expect(Tok::RBrace)?;
            break;
        }
    }
    if let Some(c) = voc.constants().iter().find(|c| !seen.contains(c)) {
        return Err(ParseError::MissingConstant {
            name: c.clone(),
            span: start,
        });
    }
    Ok(a)
}

/// Canonical form: every relation in vocabulary order (tuples in index
/// order), then every constant.
pub fn print_structure(a: &Structure) -> String {
    let voc = a.vocabulary();
    let mut out = format!("structure size={} vocab={} {{", a.size(), voc.name());
    let mut parts = Vec::new();
    for (rel, (name, _)) in voc.relations().iter().enumerate() {
        let tuples: Vec<String> = a
            .tuples(rel)
            .map(|t| {
                let items: Vec<String> = t.iter().map(u32::to_string).collect();
                format!("({})", items.join(","))
            })
            .collect();
        parts.push(format!("{name} = {{{}}}", tuples.join(",")));
    }
    for (c, name) in voc.constants().iter().enumerate() {
        parts.push(format!("{name} = {}", a.constant_at(c)));
    }
    if parts.is_empty() {
        out.push_str(" }");
    } else {
        let _ = write!(out, " {} }}", parts.join("; "));
    }
    out
}
