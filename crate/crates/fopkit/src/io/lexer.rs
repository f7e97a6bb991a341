//! Tokens shared by every text format: brackets, `;` and `,` as punctuation,
//! everything else split on whitespace. `#` starts a comment running to the
//! end of the line.

use std::fmt;

use super::{ParseError, Result};

/// Byte offsets `begin..end` with the 1-based line and column of `begin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    /// From the start of `self` to the end of `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            end: other.end.max(self.end),
            ..self
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Open,
    Close,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Word(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Word(w) => write!(f, "`{w}`"),
        }
    }
}

pub fn tokenize(text: &str) -> Vec<(Tok, SourceSpan)> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.char_indices().peekable();
    let mut word: Option<(String, SourceSpan)> = None;
    let flush = |word: &mut Option<(String, SourceSpan)>, out: &mut Vec<(Tok, SourceSpan)>, end: usize| {
        if let Some((w, mut span)) = word.take() {
            span.end = end;
            out.push((Tok::Word(w), span));
        }
    };
    while let Some((i, c)) = chars.next() {
        let span = SourceSpan {
            begin: i,
            end: i + c.len_utf8(),
            line,
            column,
        };
        let punct = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if c == '#' {
            flush(&mut word, &mut out, i);
            while let Some(&(_, d)) = chars.peek() {
                if d == '\n' {
                    break;
                }
                chars.next();
            }
        } else if let Some(t) = punct {
            flush(&mut word, &mut out, i);
            out.push((t, span));
        } else if c.is_whitespace() {
            flush(&mut word, &mut out, i);
        } else {
            match &mut word {
                Some((w, _)) => w.push(c),
                None => word = Some((c.to_string(), span)),
            }
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    flush(&mut word, &mut out, text.len());
    out
}

/// A cursor over the tokens of one input.
pub struct Tokens {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    eof: SourceSpan,
}

impl Tokens {
    pub fn new(text: &str) -> Self {
        let (line, column) = text
            .lines()
            .enumerate()
            .last()
            .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
        Tokens {
            toks: tokenize(text),
            pos: 0,
            eof: SourceSpan {
                begin: text.len(),
                end: text.len(),
                line,
                column,
            },
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    /// Span of the next token, or the end of input.
    pub fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(self.eof, |(_, s)| *s)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn advance(&mut self) -> Result<(Tok, SourceSpan)> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(ParseError::syntax("unexpected end of input", self.eof)),
        }
    }

    pub fn expect(&mut self, tok: Tok) -> Result<SourceSpan> {
        let (t, span) = self.advance()?;
        if t == tok {
            Ok(span)
        } else {
            Err(ParseError::syntax(format!("expected {tok}, found {t}"), span))
        }
    }

    pub fn word(&mut self) -> Result<(String, SourceSpan)> {
        match self.advance()? {
            (Tok::Word(w), span) => Ok((w, span)),
            (t, span) => Err(ParseError::syntax(format!("expected a word, found {t}"), span)),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<SourceSpan> {
        let (w, span) = self.word()?;
        if w == kw {
            Ok(span)
        } else {
            Err(ParseError::syntax(format!("expected `{kw}`, found `{w}`"), span))
        }
    }

    /// A `key=value` word.
    pub fn setting(&mut self, key: &str) -> Result<(String, SourceSpan)> {
        let (w, span) = self.word()?;
        match w.split_once('=') {
            Some((k, v)) if k == key && !v.is_empty() => Ok((v.to_string(), span)),
            _ => Err(ParseError::syntax(format!("expected `{key}=...`, found `{w}`"), span)),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn finish(&self) -> Result<()> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some((t, span)) => Err(ParseError::syntax(format!("unexpected {t} after the end"), *span)),
        }
    }
}
