//! Text form of elements.
//!
//! ```text
//! expr := term ('|' term)*
//! term := atom ('&' atom)*
//! atom := label | '(' expr ')'
//! ```
//!
//! `&` is intersection and binds tighter than `|` (union). Formatting emits
//! the antichain of minimal signatures, so formatted strings are canonical.

use super::{Frame, HyperElement, PowerElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Label(String),
    And,
    Or,
    Open,
    Close,
}

#[derive(Debug)]
enum Expr {
    Class(usize),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

fn tokenize(text: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::Open,
            ')' => Token::Close,
            _ => {
                let mut label = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '&' | '|' | '(' | ')') {
                        break;
                    }
                    label.push(c);
                    chars.next();
                }
                out.push((pos, Token::Label(label)));
                continue;
            }
        };
        chars.next();
        out.push((pos, tok));
    }
    out
}

struct Parser<'a> {
    frame: &'a Frame,
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|t| &t.1)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Token::Or) {
            self.at += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Or(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some(&Token::And) {
            self.at += 1;
            atoms.push(self.atom()?);
        }
        Ok(if atoms.len() == 1 {
            atoms.pop().unwrap()
        } else {
            Expr::And(atoms)
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.tokens.get(self.at).map(|t| t.1.clone()) {
            Some(Token::Label(label)) => {
                self.at += 1;
                self.frame
                    .index_of(&label)
                    .map(Expr::Class)
                    .ok_or(Error::UnknownLabel { label, pos })
            }
            Some(Token::Open) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::Syntax {
                        pos: self.pos(),
                        msg: "expected ')'".into(),
                    });
                }
                self.at += 1;
                Ok(inner)
            }
            Some(tok) => Err(Error::Syntax {
                pos,
                msg: format!("expected label or '(', found {tok:?}"),
            }),
            None => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn parse(frame: &Frame, text: &str) -> Result<Expr> {
    let mut p = Parser {
        frame,
        tokens: tokenize(text),
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.at != p.tokens.len() {
        return Err(Error::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

fn eval<T: Copy>(e: &Expr, atom: &impl Fn(usize) -> T, and: fn(T, T) -> T, or: fn(T, T) -> T) -> T {
    match e {
        Expr::Class(i) => atom(*i),
        Expr::And(xs) => xs
            .iter()
            .map(|x| eval(x, atom, and, or))
            .reduce(and)
            .expect("nonempty"),
        Expr::Or(xs) => xs
            .iter()
            .map(|x| eval(x, atom, and, or))
            .reduce(or)
            .expect("nonempty"),
    }
}

pub fn parse_hyper(frame: &Frame, text: &str) -> Result<HyperElement> {
    let e = parse(frame, text)?;
    let n = frame.len();
    let parts = eval(
        &e,
        &|i| HyperElement::singleton(n, i).expect("index from frame").parts(),
        |a, b| a & b,
        |a, b| a | b,
    );
    Ok(HyperElement::from_parts_unchecked(n, parts))
}

/// Intersections of distinct classes are empty in the power set, so e.g.
/// `C1&C2` fails with [`Error::EmptyElement`].
pub fn parse_power(frame: &Frame, text: &str) -> Result<PowerElement> {
    let e = parse(frame, text)?;
    let bits = eval(&e, &|i| 1u32 << i, |a, b| a & b, |a, b| a | b);
    PowerElement::new(frame.len(), bits)
}
