use std::collections::BTreeSet;

use super::{Atom, Formula};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    Next,
    Globally,
    Eventually,
    Until,
    Release,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = match name.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                "X" => Tok::Next,
                "G" => Tok::Globally,
                "F" => Tok::Eventually,
                "U" => Tok::Until,
                "R" => Tok::Release,
                _ => Tok::Ident(name),
            };
            toks.push((pos, tok));
            continue;
        }
        chars.next();
        let tok = match c {
            '!' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '⊤' => Tok::True,
            '⊥' => Tok::False,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => match chars.next() {
                Some((_, '>')) => Tok::Implies,
                _ => return Err(ParseError::syntax(pos, "expected `->`")),
            },
            '<' => match (chars.next(), chars.next()) {
                (Some((_, '-')), Some((_, '>'))) => Tok::Iff,
                _ => return Err(ParseError::syntax(pos, "expected `<->`")),
            },
            other => {
                return Err(ParseError::syntax(pos, format!("unexpected character `{other}`")))
            }
        };
        toks.push((pos, tok));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    alphabet: Option<&'a BTreeSet<Atom>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary_temporal()?;
        while self.eat(&Tok::And) {
            let rhs = self.binary_temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            let rhs = self.binary_temporal()?;
            return Ok(Formula::until(lhs, rhs));
        }
        if self.eat(&Tok::Release) {
            let rhs = self.binary_temporal()?;
            return Ok(Formula::release(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::syntax(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Next => Ok(Formula::next(self.unary()?)),
            Tok::Globally => Ok(Formula::globally(self.unary()?)),
            Tok::Eventually => Ok(Formula::eventually(self.unary()?)),
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::Ident(name) => {
                if let Some(ap) = self.alphabet {
                    if !ap.iter().any(|a| a.name() == name) {
                        return Err(ParseError::UnknownAtom { name, pos });
                    }
                }
                Ok(Formula::Atom(Atom::new(name)))
            }
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::syntax(self.pos(), "expected `)`"));
                }
                Ok(inner)
            }
            other => Err(ParseError::syntax(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` without restricting atom names.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse(text, None)
}

/// Parses `text`, rejecting atoms outside `alphabet`.
pub fn parse_formula_over(text: &str, alphabet: &BTreeSet<Atom>) -> Result<Formula, ParseError> {
    parse(text, Some(alphabet))
}

fn parse(text: &str, alphabet: Option<&BTreeSet<Atom>>) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        alphabet,
    };
    let f = p.iff()?;
    if p.at != p.toks.len() {
        return Err(ParseError::syntax(p.pos(), "trailing input"));
    }
    Ok(f)
}
