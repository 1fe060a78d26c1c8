//! Polynomial expression parser: integers, declared variables, unary minus,
//! `+`, `-`, `*`, `^` with non-negative integer exponents, and parentheses.
//! Juxtaposition is not multiplication; `^` binds tighter than `*`, which
//! binds tighter than `+`/`-`.

use std::fmt;

use frobdiff_core::poly::{MultiPoly, PolyRing};

/// A parse or evaluation failure with the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.pos)
    }
}

impl std::error::Error for ParseError {}

/// Abstract syntax of a polynomial expression. Variables keep their source
/// position so evaluation errors can point at them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Int(u64),
    Var(String, usize),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    /// `D[`: reserved opener of a divided-power block in operator files.
    DBracket,
    RBracket,
    Comma,
}

pub fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            ']' => {
                tokens.push((Token::RBracket, i));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let value: u64 = text
                    .parse()
                    .map_err(|_| ParseError::new(start, format!("integer {text} overflows")))?;
                tokens.push((Token::Int(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let ident = &src[start..i];
                if ident == "D" && i < bytes.len() && bytes[i] == b'[' {
                    tokens.push((Token::DBracket, start));
                    i += 1;
                } else {
                    tokens.push((Token::Ident(ident.to_string()), start));
                }
            }
            '[' => return Err(ParseError::new(i, "unexpected '['".to_string())),
            other => {
                return Err(ParseError::new(i, format!("unexpected character {other:?}")))
            }
        }
    }
    Ok(tokens)
}

pub struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    src_len: usize,
}

impl<'a> Parser<'a> {
    pub fn new(tokens: &'a [(Token, usize)], src_len: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            src_len,
        }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    pub fn peek_ahead(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n).map(|(t, _)| t)
    }

    pub fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.src_len)
    }

    pub fn bump(&mut self) -> Option<&(Token, usize)> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    pub fn expect(&mut self, want: &Token, what: &str) -> Result<(), ParseError> {
        let here = self.here();
        match self.bump() {
            Some((t, _)) if t == want => Ok(()),
            _ => Err(ParseError::new(here, format!("expected {what}"))),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    /// expr := term (('+' | '-') term)*
    pub fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = PolyExpr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = PolyExpr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := factor ('*' factor)*
    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            let rhs = self.factor()?;
            acc = PolyExpr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    /// factor := '-' factor | power
    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.bump();
            let inner = self.factor()?;
            return Ok(PolyExpr::Neg(Box::new(inner)));
        }
        self.power()
    }

    /// power := primary ('^' INT)*
    fn power(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.bump();
            let here = self.here();
            match self.bump() {
                Some((Token::Int(n), _)) => {
                    let n = u32::try_from(*n)
                        .map_err(|_| ParseError::new(here, "exponent overflows"))?;
                    acc = PolyExpr::Pow(Box::new(acc), n);
                }
                _ => {
                    return Err(ParseError::new(
                        here,
                        "expected a non-negative integer exponent",
                    ))
                }
            }
        }
        Ok(acc)
    }

    /// primary := INT | IDENT | '(' expr ')'
    fn primary(&mut self) -> Result<PolyExpr, ParseError> {
        let here = self.here();
        match self.bump() {
            Some((Token::Int(n), _)) => Ok(PolyExpr::Int(*n)),
            Some((Token::Ident(name), pos)) => Ok(PolyExpr::Var(name.clone(), *pos)),
            Some((Token::LParen, _)) => {
                let inner = self.expr()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(ParseError::new(here, "expected a term")),
        }
    }
}

/// Evaluates the AST over the ring, with exponent bounds pre-checked so the
/// core arithmetic never overflows.
pub fn eval(expr: &PolyExpr, ring: &PolyRing) -> Result<MultiPoly, ParseError> {
    match expr {
        PolyExpr::Int(n) => Ok(ring.constant_u64(*n)),
        PolyExpr::Var(name, pos) => {
            let index = ring
                .var_names()
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| ParseError::new(*pos, format!("unknown variable {name}")))?;
            Ok(ring.var(index))
        }
        PolyExpr::Neg(inner) => Ok(-&eval(inner, ring)?),
        PolyExpr::Add(a, b) => Ok(&eval(a, ring)? + &eval(b, ring)?),
        PolyExpr::Sub(a, b) => Ok(&eval(a, ring)? - &eval(b, ring)?),
        PolyExpr::Mul(a, b) => {
            let a = eval(a, ring)?;
            let b = eval(b, ring)?;
            check_mul_bound(&a, &b)?;
            Ok(&a * &b)
        }
        PolyExpr::Pow(base, n) => {
            let base = eval(base, ring)?;
            let max = base.norm() as u64;
            if max.checked_mul(*n as u64).is_none_or(|v| v > u32::MAX as u64) {
                return Err(ParseError::new(0, "exponent overflows"));
            }
            Ok(base.pow(*n as u64))
        }
    }
}

fn check_mul_bound(a: &MultiPoly, b: &MultiPoly) -> Result<(), ParseError> {
    let max = a.norm() as u64 + b.norm() as u64;
    if max > u32::MAX as u64 {
        return Err(ParseError::new(0, "exponent overflows"));
    }
    Ok(())
}

/// Parses and evaluates a polynomial over the given ring.
pub fn parse_polynomial(src: &str, ring: &PolyRing) -> Result<MultiPoly, ParseError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser::new(&tokens, src.len());
    let ast = parser.expr()?;
    if !parser.at_end() {
        return Err(ParseError::new(parser.here(), "unexpected trailing input"));
    }
    eval(&ast, ring)
}
