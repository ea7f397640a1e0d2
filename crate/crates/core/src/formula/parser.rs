//! Recursive-descent parser shared by propositional and shallow modal input.

use super::{Atom, Formula, LABEL_SEPARATOR};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(Token, usize)> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((Token::End, start));
        };
        let token = match b {
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(self.pos + 1) == Some(&b'>') => {
                self.pos += 2;
                return Ok((Token::Implies, start));
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let mut end = self.pos;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                if bytes.get(end) == Some(&(LABEL_SEPARATOR as u8)) {
                    let mut stop = end + 1;
                    while stop < bytes.len()
                        && (bytes[stop].is_ascii_alphanumeric() || bytes[stop] == b'_')
                    {
                        stop += 1;
                    }
                    return Err(Error::ReservedSeparator {
                        name: self.text[start..stop].to_owned(),
                        offset: start,
                    });
                }
                self.pos = end;
                return Ok((Token::Ident(self.text[start..end].to_owned()), start));
            }
            _ => {
                let ch = self.text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        self.pos += 1;
        Ok((token, start))
    }
}

/// Syntax tree of the extended grammar; `Box` only appears when the modal
/// keyword was enabled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Ast {
    Top,
    Bot,
    Atom(Atom),
    Not(Box<Ast>),
    And(Box<Ast>, Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
    Implies(Box<Ast>, Box<Ast>),
    Box(Box<Ast>, usize),
}

impl Ast {
    pub(crate) fn into_formula(self) -> Result<Formula> {
        Ok(match self {
            Ast::Top => Formula::Top,
            Ast::Bot => Formula::Bot,
            Ast::Atom(a) => Formula::Atom(a),
            Ast::Not(f) => !f.into_formula()?,
            Ast::And(l, r) => l.into_formula()?.and(r.into_formula()?),
            Ast::Or(l, r) => l.into_formula()?.or(r.into_formula()?),
            Ast::Implies(l, r) => l.into_formula()?.implies(r.into_formula()?),
            Ast::Box(_, offset) => return Err(Error::NestedBox { offset }),
        })
    }

    pub(crate) fn has_box(&self) -> bool {
        match self {
            Ast::Top | Ast::Bot | Ast::Atom(_) => false,
            Ast::Box(..) => true,
            Ast::Not(f) => f.has_box(),
            Ast::And(l, r) | Ast::Or(l, r) | Ast::Implies(l, r) => l.has_box() || r.has_box(),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
    offset: usize,
    modal: bool,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<()> {
        let (token, offset) = self.lexer.next_token()?;
        self.current = token;
        self.offset = offset;
        Ok(())
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<()> {
        if self.current == token {
            self.advance()
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        let found = match &self.current {
            Token::End => "end of input".to_owned(),
            Token::Ident(name) => format!("{name:?}"),
            Token::Not => "'!'".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Implies => "'->'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        };
        Error::Syntax {
            offset: self.offset,
            message: format!("expected {what}, found {found}"),
        }
    }

    fn implication(&mut self) -> Result<Ast> {
        let lhs = self.disjunction()?;
        if self.current == Token::Implies {
            self.advance()?;
            let rhs = self.implication()?;
            return Ok(Ast::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ast> {
        let mut lhs = self.conjunction()?;
        while self.current == Token::Or {
            self.advance()?;
            let rhs = self.conjunction()?;
            lhs = Ast::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while self.current == Token::And {
            self.advance()?;
            let rhs = self.unary()?;
            lhs = Ast::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        match std::mem::replace(&mut self.current, Token::End) {
            Token::Not => {
                self.advance()?;
                Ok(Ast::Not(Box::new(self.unary()?)))
            }
            Token::LParen => {
                self.advance()?;
                let inner = self.implication()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let offset = self.offset;
                self.advance()?;
                match name.as_str() {
                    "T" => Ok(Ast::Top),
                    "F" => Ok(Ast::Bot),
                    "box" if self.modal && self.current == Token::LParen => {
                        self.advance()?;
                        let inner = self.implication()?;
                        self.expect(Token::RParen, "')'")?;
                        Ok(Ast::Box(Box::new(inner), offset))
                    }
                    _ => Ok(Ast::Atom(Atom::new(&name)?)),
                }
            }
            other => {
                self.current = other;
                Err(self.unexpected("a formula"))
            }
        }
    }
}

/// Parses `text`; with `modal` set, `box(...)` is read as a modal operator.
pub(crate) fn parse_ast(text: &str, modal: bool) -> Result<Ast> {
    let mut parser = Parser {
        lexer: Lexer { text, pos: 0 },
        current: Token::End,
        offset: 0,
        modal,
    };
    parser.advance()?;
    let ast = parser.implication()?;
    if parser.current != Token::End {
        return Err(parser.unexpected("end of input"));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_is_an_atom_outside_modal_mode() {
        let ast = parse_ast("box", false).unwrap();
        assert_eq!(ast, Ast::Atom(Atom::new("box").unwrap()));
        assert!(parse_ast("box(a)", false).is_err());
    }

    #[test]
    fn modal_mode_reads_boxes() {
        let ast = parse_ast("box(a) -> x & box(x)", true).unwrap();
        assert!(ast.has_box());
        assert!(matches!(ast, Ast::Implies(..)));
    }
}
