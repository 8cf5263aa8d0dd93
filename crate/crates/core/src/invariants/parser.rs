//! Recursive-descent parser for contraction expressions.
//!
//! ```text
//! expr   := factor ('*' factor)*
//! factor := ('psi' | 'psi*' | 'delta' | 'eps') '[' ident (',' ident)* ']'
//! ```
//!
//! Whitespace is insignificant and identifiers are alphanumeric.

use crate::error::{Error, Result};

use super::expr::{ContractionExpr, Factor, FactorKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LBracket,
    RBracket,
    Comma,
    Star,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Star => "`*`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Tokens with their 1-based columns.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '[' => out.push((Tok::LBracket, col)),
            ']' => out.push((Tok::RBracket, col)),
            ',' => out.push((Tok::Comma, col)),
            '*' => out.push((Tok::Star, col)),
            c if c.is_ascii_alphanumeric() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn expr(&mut self) -> Result<Vec<Factor>> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        if *self.peek() != Tok::End {
            return self.error("`*` or end of input");
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<Factor> {
        let kind = match self.peek() {
            Tok::Ident(k) if k == "psi" => {
                self.bump();
                if *self.peek() == Tok::Star && *self.peek_at(1) == Tok::LBracket {
                    self.bump();
                    FactorKind::PsiConj
                } else {
                    FactorKind::Psi
                }
            }
            Tok::Ident(k) if k == "delta" => {
                self.bump();
                FactorKind::Delta
            }
            Tok::Ident(k) if k == "eps" => {
                self.bump();
                FactorKind::Epsilon
            }
            _ => return self.error("`psi`, `psi*`, `delta` or `eps`"),
        };
        self.expect(Tok::LBracket, "`[`")?;
        let mut indices = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            indices.push(self.ident()?);
        }
        self.expect(Tok::RBracket, "`,` or `]`")?;
        Ok(Factor { kind, indices })
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("an index name"),
        }
    }
}

/// Parses and validates a contraction expression.
pub fn parse_contraction(text: &str) -> Result<ContractionExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    ContractionExpr::new(p.expr()?)
}

/// Parses an expression and checks it against a state's party dims.
pub fn parse_contraction_for(text: &str, dims: &[usize]) -> Result<ContractionExpr> {
    let expr = parse_contraction(text)?;
    expr.index_dims(dims)?;
    Ok(expr)
}

/// Parses an invariant-definition file: one expression per line, `#` starts
/// a comment, blank lines are skipped. Returns `(line number, expression)`.
pub fn parse_definitions(text: &str) -> Result<Vec<(usize, ContractionExpr)>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (i + 1, body))
        })
        .map(|(n, body)| {
            parse_contraction(body)
                .map(|e| (n, e))
                .map_err(|e| match e {
                    Error::Syntax { column, message } => Error::Syntax {
                        column,
                        message: format!("line {n}: {message}"),
                    },
                    other => other,
                })
        })
        .collect()
}
