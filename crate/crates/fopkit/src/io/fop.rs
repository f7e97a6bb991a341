//! First-order queries:
//!
//! ```text
//! fop identity arity=1 from=graph to=graph
//! E = (E x1 x2)
//! ```
//!
//! The header is followed by one `SYMBOL = formula` definition per target
//! relation and constant, in any order.

use fopkit_core::fop::{FoQuery, Fop};
use fopkit_core::formula::Formula;

use super::formula::{formula_from_sexpr, read_sexpr};
use super::lexer::Tokens;
use super::vocab::Registry;
use super::{numeral, ParseError, Result};

pub fn parse_fop_query(text: &str, registry: &Registry) -> Result<FoQuery> {
    let mut toks = Tokens::new(text);
    let start = toks.keyword("fop")?;
    let (name, _) = toks.word()?;
    let (arity, arity_span) = toks.setting("arity")?;
    let arity = numeral(&arity, arity_span)? as usize;
    let (from, from_span) = toks.setting("from")?;
    let source = registry.resolve(&from, from_span)?;
    let (to, to_span) = toks.setting("to")?;
    let target = registry.resolve(&to, to_span)?;
    let symbols: Vec<&str> = target
        .relations()
        .iter()
        .map(|(r, _)| r.as_str())
        .chain(target.constants().iter().map(String::as_str))
        .collect();
    let mut defs: Vec<Option<Formula>> = vec![None; symbols.len()];
    while !toks.at_end() {
        let (sym, span) = toks.word()?;
        let slot = symbols
            .iter()
            .position(|s| *s == sym)
            .ok_or_else(|| ParseError::UnknownSymbol {
                name: sym.clone(),
                span,
            })?;
        if defs[slot].is_some() {
            return Err(ParseError::syntax(format!("`{sym}` is defined twice"), span));
        }
        toks.keyword("=")?;
        let s = read_sexpr(&mut toks)?;
        defs[slot] = Some(formula_from_sexpr(&s, &source)?);
    }
    let end = toks.span();
    let mut formulas = Vec::new();
    for (sym, def) in symbols.iter().zip(defs) {
        match def {
            Some(f) => formulas.push(f),
            None => return Err(ParseError::syntax(format!("no definition for `{sym}`"), end)),
        }
    }
    let constants = formulas.split_off(target.relations().len());
    FoQuery::new(&name, source, target, arity, formulas, constants).map_err(|e| ParseError::invalid(e, start))
}

/// Parses and validates a fop, checking guard exclusivity up to `bound`.
pub fn parse_fop(text: &str, registry: &Registry, bound: u32) -> Result<Fop> {
    let q = parse_fop_query(text, registry)?;
    Fop::new(q, bound).map_err(|e| ParseError::invalid(e, Default::default()))
}

pub fn print_query(q: &FoQuery) -> String {
    let mut out = format!(
        "fop {} arity={} from={} to={}\n",
        q.name,
        q.arity,
        q.source.name(),
        q.target.name()
    );
    for (sym, f, _) in q.definitions() {
        out.push_str(&format!("{sym} = {f}\n"));
    }
    out
}

pub fn print_fop(fop: &Fop) -> String {
    print_query(fop.query())
}
