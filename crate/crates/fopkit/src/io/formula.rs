//! S-expression formulas.

use fopkit_core::formula::{Formula, NumericRel, Quantifier, Term};
use fopkit_core::vocab::{is_identifier, is_reserved, Vocabulary};

use super::lexer::{SourceSpan, Tok, Tokens};
use super::{numeral, ParseError, Result};

/// A parsed S-expression with spans.
#[derive(Debug, Clone)]
pub(crate) enum Sexpr {
    Atom(String, SourceSpan),
    List(Vec<Sexpr>, SourceSpan),
}

impl Sexpr {
    fn span(&self) -> SourceSpan {
        match self {
            Sexpr::Atom(_, s) | Sexpr::List(_, s) => *s,
        }
    }
}

pub(crate) fn read_sexpr(toks: &mut Tokens) -> Result<Sexpr> {
    match toks.advance()? {
        (Tok::Word(w), span) => Ok(Sexpr::Atom(w, span)),
        (Tok::Open, open) => {
            let mut items = Vec::new();
            loop {
                if toks.peek() == Some(&Tok::Close) {
                    let close = toks.advance()?.1;
                    return Ok(Sexpr::List(items, open.to(close)));
                }
                if toks.at_end() {
                    return Err(ParseError::syntax("unclosed `(`", open));
                }
                items.push(read_sexpr(toks)?);
            }
        }
        (t, span) => Err(ParseError::syntax(format!("expected a formula, found {t}"), span)),
    }
}

/// Parses one formula over `voc`. Identifiers naming a constant of `voc`
/// are constants; other identifiers are variables.
pub fn parse_formula(text: &str, voc: &Vocabulary) -> Result<Formula> {
    let mut toks = Tokens::new(text);
    let s = read_sexpr(&mut toks)?;
    toks.finish()?;
    FormulaReader { voc, scope: Vec::new() }.formula(&s)
}

pub(crate) fn formula_from_sexpr(s: &Sexpr, voc: &Vocabulary) -> Result<Formula> {
    FormulaReader { voc, scope: Vec::new() }.formula(s)
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

struct FormulaReader<'v> {
    voc: &'v Vocabulary,
    /// Second-order relation variables in scope, innermost last.
    scope: Vec<(String, usize)>,
}

fn arity_error(symbol: &str, expected: usize, found: usize, span: SourceSpan) -> ParseError {
    ParseError::ArityMismatch {
        symbol: symbol.into(),
        expected,
        found,
        span,
    }
}

impl FormulaReader<'_> {
    fn formula(&mut self, s: &Sexpr) -> Result<Formula> {
        let (items, span) = match s {
            Sexpr::Atom(w, span) => {
                return match w.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => Err(ParseError::syntax(format!("expected a formula, found `{w}`"), *span)),
                }
            }
            Sexpr::List(items, span) => (items, *span),
        };
        let Some(Sexpr::Atom(head, head_span)) = items.first() else {
            return Err(ParseError::syntax("expected an operator", span));
        };
        let args = &items[1..];
        let fixed = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(arity_error(head, n, args.len(), span))
            }
        };
        match head.as_str() {
            "not" => {
                fixed(1)?;
                Ok(Formula::not(self.formula(&args[0])?))
            }
            "and" => Ok(Formula::And(
                args.iter().map(|a| self.formula(a)).collect::<Result<_>>()?,
            )),
            "or" => Ok(Formula::Or(
                args.iter().map(|a| self.formula(a)).collect::<Result<_>>()?,
            )),
            "->" | "<->" => {
                fixed(2)?;
                let (a, b) = (self.formula(&args[0])?, self.formula(&args[1])?);
                Ok(if head == "->" {
                    Formula::implies(a, b)
                } else {
                    Formula::iff(a, b)
                })
            }
            "forall" | "exists" => {
                fixed(2)?;
                let vars = self.binders(&args[0])?;
                let body = self.formula(&args[1])?;
                let q = if head == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                Ok(Formula::Quant {
                    q,
                    vars,
                    body: Box::new(body),
                })
            }
            "forall2" | "exists2" => {
                fixed(2)?;
                let (name, arity) = self.relation_binder(&args[0])?;
                self.scope.push((name.clone(), arity));
                let body = self.formula(&args[1]);
                self.scope.pop();
                let q = if head == "forall2" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                Ok(Formula::SoQuant {
                    q,
                    name,
                    arity,
                    body: Box::new(body?),
                })
            }
            _ => {
                if let Some(rel) = NumericRel::from_symbol(head) {
                    fixed(2)?;
                    return Ok(Formula::num(rel, self.term(&args[0])?, self.term(&args[1])?));
                }
                let arity = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == head)
                    .map(|(_, a)| *a)
                    .or_else(|| self.voc.relation_arity(head))
                    .ok_or_else(|| ParseError::UnknownSymbol {
                        name: head.clone(),
                        span: *head_span,
                    })?;
                fixed(arity)?;
                let terms = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
                Ok(Formula::rel(head, terms))
            }
        }
    }

    fn variable(&self, s: &Sexpr) -> Result<String> {
        match s {
            Sexpr::Atom(w, span) => {
                if !is_identifier(w) || is_reserved(w) {
                    return Err(ParseError::syntax(format!("`{w}` is not a variable name"), *span));
                }
                if self.voc.has_constant(w) || self.voc.relation_index(w).is_some() {
                    return Err(ParseError::syntax(
                        format!("`{w}` is a vocabulary symbol, not a variable"),
                        *span,
                    ));
                }
                Ok(w.clone())
            }
            Sexpr::List(_, span) => Err(ParseError::syntax("expected a variable", *span)),
        }
    }

    fn binders(&self, s: &Sexpr) -> Result<Vec<String>> {
        match s {
            Sexpr::List(items, span) if items.is_empty() => {
                Err(ParseError::syntax("a quantifier needs at least one variable", *span))
            }
            Sexpr::List(items, _) => items.iter().map(|i| self.variable(i)).collect(),
            Sexpr::Atom(_, span) => Err(ParseError::syntax("expected a variable list `(x y ...)`", *span)),
        }
    }

    fn relation_binder(&self, s: &Sexpr) -> Result<(String, usize)> {
        match s {
            Sexpr::List(items, span) if items.len() == 2 => {
                let name = self.variable(&items[0])?;
                let Sexpr::Atom(a, aspan) = &items[1] else {
                    return Err(ParseError::syntax("expected an arity", items[1].span()));
                };
                let arity = numeral(a, *aspan)? as usize;
                if arity == 0 {
                    return Err(ParseError::syntax("relation variables need arity at least 1", *span));
                }
                Ok((name, arity))
            }
            other => Err(ParseError::syntax("expected `(R arity)`", other.span())),
        }
    }

    fn term(&self, s: &Sexpr) -> Result<Term> {
        let Sexpr::Atom(w, span) = s else {
            return Err(ParseError::syntax("expected a term", s.span()));
        };
        match w.as_str() {
            "max" => Ok(Term::Max),
            _ if w.bytes().all(|b| b.is_ascii_digit()) => Ok(Term::elem(numeral(w, *span)?)),
            _ if self.voc.has_constant(w) => Ok(Term::constant(w)),
            _ if is_identifier(w) && !is_reserved(w) && self.voc.relation_index(w).is_none() => Ok(Term::var(w)),
            _ => Err(ParseError::syntax(format!("expected a term, found `{w}`"), *span)),
        }
    }
}
