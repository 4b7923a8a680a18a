//! Parser for the scalar and polynomial text formats.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('+' | '-') factor | atom ('^' integer)?
//! atom   := integer | 'w' | 'x' integer | '(' expr ')'
//! ```
//!
//! `w` is the field's primitive root of unity and `xi` the i-th variable.
//! Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::{Field, FieldError};
use crate::poly::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    W,
    Var(usize),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        match chars[i] {
            c if c.is_ascii_digit() => {
                let d = digits(&mut i);
                out.push(Token::Int(d.parse().unwrap()));
            }
            'w' => {
                out.push(Token::W);
                i += 1;
            }
            'x' => {
                i += 1;
                let d = digits(&mut i);
                if d.is_empty() {
                    return Err("expected variable index after 'x'".into());
                }
                out.push(Token::Var(
                    d.parse().map_err(|_| "variable index too large")?,
                ));
            }
            c @ ('+' | '-' | '*' | '/' | '^' | '(' | ')') => {
                out.push(Token::Op(c));
                i += 1;
            }
            c => return Err(format!("unexpected character '{c}'")),
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    field: &'a F,
    nvars: usize,
    tokens: Vec<Token>,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<F>, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F>, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                let c = d
                    .as_constant()
                    .ok_or_else(|| PolyError::Parse("division by a non-constant".into()))?;
                let inv = self.field.inv(&c)?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly<F>, PolyError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(PolyError::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly<F>, PolyError> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Token::Int(v)) => {
                let c = self.field.from_rational(&BigRational::from_integer(v))?;
                Ok(Poly::constant(self.field, self.nvars, c))
            }
            Some(Token::W) => Ok(Poly::constant(
                self.field,
                self.nvars,
                self.field.primitive_root(),
            )),
            Some(Token::Var(i)) if i < self.nvars => Ok(Poly::var(self.field, self.nvars, i)),
            Some(Token::Var(i)) => Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            }),
            Some(Token::Op('(')) => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(PolyError::Parse("missing ')'".into()));
                }
                Ok(inner)
            }
            Some(t) => Err(PolyError::Parse(format!("unexpected token {t:?}"))),
            None => Err(PolyError::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_poly<F: Field>(field: &F, nvars: usize, s: &str) -> Result<Poly<F>, PolyError> {
    let tokens = tokenize(s).map_err(PolyError::Parse)?;
    if tokens.is_empty() {
        return Err(PolyError::Parse("empty input".into()));
    }
    let mut parser = Parser {
        field,
        nvars,
        tokens,
        pos: 0,
    };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(PolyError::Parse(format!(
            "trailing input at token {}",
            parser.pos
        )));
    }
    Ok(p)
}

pub fn parse_scalar<F: Field>(field: &F, s: &str) -> Result<F::Elem, FieldError> {
    let p = parse_poly(field, 0, s).map_err(|e| match e {
        PolyError::Field(f) => f,
        other => FieldError::Parse(other.to_string()),
    })?;
    Ok(p.as_constant()
        .expect("zero-variable polynomial is constant"))
}
