//! Recursive-descent parser for the formula surface syntax.
//!
//! Grammar, loosest binding first:
//! ```text
//! iff     := implies ( "<->" implies )*          (left-associative)
//! implies := or ( "->" implies )?                (right-associative)
//! or      := and ( "|" and )*                    (left-associative)
//! and     := unary ( "&" unary )*                (left-associative)
//! unary   := ( "~" | "!" ) unary | primary
//! primary := "true" | "false" | atom | "(" iff ")"
//! atom    := [a-z][a-zA-Z0-9_]*
//! ```
//! The spec for the language fixes everything above except `<->`
//! associativity, which is taken to be left.

use thiserror::Error;

use super::Formula;
use crate::space::WorldSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: expected {}", expected.join(", "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
    },
    #[error("unknown atom `{name}` at offset {position}")]
    UnknownAtom { name: String, position: usize },
    #[error("empty formula")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Ident(name) => format!("atom `{}`", name),
            Token::Not => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '~' | '!' => {
                tokens.push((Token::Not, i));
                i += 1;
            }
            '&' => {
                tokens.push((Token::And, i));
                i += 1;
            }
            '|' => {
                tokens.push((Token::Or, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((Token::Implies, i));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        position: i,
                        expected: vec!["`->`".into()],
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    tokens.push((Token::Iff, i));
                    i += 3;
                } else {
                    return Err(ParseError::Syntax {
                        position: i,
                        expected: vec!["`<->`".into()],
                    });
                }
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let token = match word {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Ident(word.to_string()),
                };
                tokens.push((token, start));
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: i,
                    expected: vec!["a formula token".into()],
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    space: &'a WorldSpace,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_primary_error(&self) -> ParseError {
        ParseError::Syntax {
            position: self.here(),
            expected: vec![
                "an atom".into(),
                "`true`".into(),
                "`false`".into(),
                "`~`".into(),
                "`(`".into(),
            ],
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.peek() == Some(&Token::Iff) {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Token::Implies) {
            self.bump();
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Not) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let position = self.here();
        match self.bump() {
            Some(Token::True) => Ok(Formula::True),
            Some(Token::False) => Ok(Formula::False),
            Some(Token::Ident(name)) => {
                if self.space.atom_index(&name).is_none() {
                    return Err(ParseError::UnknownAtom { name, position });
                }
                Ok(Formula::Atom(name))
            }
            Some(Token::LParen) => {
                let inner = self.iff()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(ParseError::Syntax {
                        position: self.tokens.get(self.pos - 1).map(|(_, p)| *p).unwrap_or(self.end),
                        expected: vec!["`)`".into()],
                    }),
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.expect_primary_error())
            }
        }
    }
}

/// Parses `text` as a formula over the atoms declared in `space`.
pub fn parse_formula(text: &str, space: &WorldSpace) -> Result<Formula, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        space,
        end: text.len(),
    };
    let formula = parser.iff()?;
    if let Some(extra) = parser.peek() {
        return Err(ParseError::Syntax {
            position: parser.here(),
            expected: vec![
                "end of input".into(),
                "a binary connective".into(),
                format!("not {}", extra.describe()),
            ],
        });
    }
    Ok(formula)
}
