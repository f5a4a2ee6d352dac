//! Expression front-end for right-hand sides f(t, x, v).
//!
//! A small arithmetic language over the variables `t`, `x`, `v` with the
//! functions `sin`, `cos`, `exp`, `log`, `sqrt`, `abs`, `sign`. Power binds
//! tighter than unary minus, so `-2^2` is −4, and associates to the right;
//! `**` is accepted as an alias for `^`. Every node remembers its byte
//! offset in the source so evaluation failures can point at the culprit.
//!
//! Equality on [`Expr`] is structural and ignores source positions; that is
//! what makes print-then-reparse a genuine round trip.

use std::fmt;

use thiserror::Error;

/// The three variables an expression may reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    X,
    V,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X => "x",
            Var::V => "v",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sign,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl UnaryOp {
    fn function_name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Abs => Some("abs"),
            UnaryOp::Sign => Some("sign"),
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Log => Some("log"),
            UnaryOp::Sqrt => Some("sqrt"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 4,
        }
    }
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 10;

/// Parsed expression tree. `pos` is the byte offset of the node in the
/// original source (metadata only; ignored by equality).
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: usize,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Number(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Number(a), ExprKind::Number(b)) => a == b,
            (ExprKind::Var(a), ExprKind::Var(b)) => a == b,
            (ExprKind::Unary(op, a), ExprKind::Unary(oq, b)) => op == oq && a == b,
            (ExprKind::Binary(op, al, ar), ExprKind::Binary(oq, bl, br)) => {
                op == oq && al == bl && ar == br
            }
            _ => false,
        }
    }
}

/// Syntax error with the byte offset where parsing failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub found: String,
}

/// Evaluation stepped outside the reals: division by zero, log of a
/// non-positive value, sqrt of a negative, a fractional power of a negative
/// base, or a non-finite result.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("domain error at byte {position}: {message}")]
pub struct DomainError {
    pub position: usize,
    pub message: String,
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                // `**` is a power operator, same as `^`.
                if i + 1 < bytes.len() && bytes[i + 1] == b'*' {
                    toks.push((Tok::Caret, i));
                    i += 2;
                } else {
                    toks.push((Tok::Star, i));
                    i += 1;
                }
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent part only if followed by digits (optionally signed).
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    position: start,
                    message: "malformed number literal".into(),
                    found: format!("'{text}'"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    message: "unexpected character".into(),
                    found: format!("'{}'", &src[i..i + utf8_len(c)]),
                })
            }
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

fn utf8_len(first: u8) -> usize {
    match first {
        0x00..=0x7f => 1,
        0xc0..=0xdf => 2,
        0xe0..=0xef => 3,
        _ => 4,
    }
}

// ---------------------------------------------------------------------------
// Parsing
//
//   expr   := term { ('+' | '-') term }
//   term   := factor { ('*' | '/') factor }
//   factor := '-' factor | power
//   power  := atom [ '^' factor ]
//   atom   := number | variable | function '(' expr ')' | '(' expr ')'

struct Parser {
    toks: Vec<(Tok, usize)>,
    cur: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.cur].0
    }

    fn pos(&self) -> usize {
        self.toks[self.cur].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.cur].clone();
        self.cur += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos(),
            message: message.into(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => break,
            };
            let (_, pos) = self.bump();
            let rhs = self.term()?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => break,
            };
            let (_, pos) = self.bump();
            let rhs = self.factor()?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Tok::Minus) {
            let (_, pos) = self.bump();
            let inner = self.factor()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnaryOp::Neg, Box::new(inner)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Tok::Caret) {
            let (_, pos) = self.bump();
            let exponent = self.factor()?;
            return Ok(Expr {
                kind: ExprKind::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)),
                pos,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(value) => {
                let (_, pos) = self.bump();
                Ok(Expr {
                    kind: ExprKind::Number(value),
                    pos,
                })
            }
            Tok::Ident(name) => {
                let (_, pos) = self.bump();
                match name.as_str() {
                    "t" => Ok(Expr {
                        kind: ExprKind::Var(Var::T),
                        pos,
                    }),
                    "x" => Ok(Expr {
                        kind: ExprKind::Var(Var::X),
                        pos,
                    }),
                    "v" => Ok(Expr {
                        kind: ExprKind::Var(Var::V),
                        pos,
                    }),
                    "abs" | "sign" | "sin" | "cos" | "exp" | "log" | "sqrt" => {
                        let op = match name.as_str() {
                            "abs" => UnaryOp::Abs,
                            "sign" => UnaryOp::Sign,
                            "sin" => UnaryOp::Sin,
                            "cos" => UnaryOp::Cos,
                            "exp" => UnaryOp::Exp,
                            "log" => UnaryOp::Log,
                            _ => UnaryOp::Sqrt,
                        };
                        if !matches!(self.peek(), Tok::LParen) {
                            return Err(self.error(format!(
                                "expected '(' after function '{name}'"
                            )));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        if !matches!(self.peek(), Tok::RParen) {
                            return Err(self.error("expected ')'"));
                        }
                        self.bump();
                        Ok(Expr {
                            kind: ExprKind::Unary(op, Box::new(arg)),
                            pos,
                        })
                    }
                    _ => Err(ParseError {
                        position: pos,
                        message: "unknown identifier".into(),
                        found: format!("identifier '{name}'"),
                    }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable, function or '('")),
        }
    }
}

/// Parse a source string into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, cur: 0 };
    let e = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation

impl Expr {
    /// Evaluate at (t, x, v). Real arithmetic only: anything that would leave
    /// the reals or the finite doubles is a [`DomainError`].
    pub fn eval(&self, t: f64, x: f64, v: f64) -> Result<f64, DomainError> {
        let value = match &self.kind {
            ExprKind::Number(c) => *c,
            ExprKind::Var(Var::T) => t,
            ExprKind::Var(Var::X) => x,
            ExprKind::Var(Var::V) => v,
            ExprKind::Unary(op, a) => {
                let a = a.eval(t, x, v)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Abs => a.abs(),
                    UnaryOp::Sign => {
                        if a > 0.0 {
                            1.0
                        } else if a < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Log => {
                        if a <= 0.0 {
                            return Err(self.domain(format!("log of non-positive value {a}")));
                        }
                        a.ln()
                    }
                    UnaryOp::Sqrt => {
                        if a < 0.0 {
                            return Err(self.domain(format!("sqrt of negative value {a}")));
                        }
                        a.sqrt()
                    }
                }
            }
            ExprKind::Binary(op, l, r) => {
                let l = l.eval(t, x, v)?;
                let r = r.eval(t, x, v)?;
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div => {
                        if r == 0.0 {
                            return Err(self.domain("division by zero"));
                        }
                        l / r
                    }
                    BinaryOp::Pow => {
                        if l < 0.0 && r.fract() != 0.0 {
                            return Err(self.domain(format!(
                                "fractional power {r} of negative base {l}"
                            )));
                        }
                        if l == 0.0 && r < 0.0 {
                            return Err(self.domain("zero raised to a negative power"));
                        }
                        l.powf(r)
                    }
                }
            }
        };
        if !value.is_finite() {
            return Err(self.domain("non-finite result"));
        }
        Ok(value)
    }

    fn domain(&self, message: impl Into<String>) -> DomainError {
        DomainError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Var(_) => ATOM_PRECEDENCE,
            ExprKind::Unary(UnaryOp::Neg, _) => NEG_PRECEDENCE,
            ExprKind::Unary(_, _) => ATOM_PRECEDENCE,
            ExprKind::Binary(op, _, _) => op.precedence(),
        }
    }

    fn fmt_child(
        &self,
        f: &mut fmt::Formatter<'_>,
        needs_parens: bool,
    ) -> fmt::Result {
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    /// Prints with the fewest parentheses that still reparse to the same
    /// tree, so `parse(print(e)) == e` structurally.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(c) => write!(f, "{c}"),
            ExprKind::Var(v) => write!(f, "{}", v.name()),
            ExprKind::Unary(UnaryOp::Neg, a) => {
                write!(f, "-")?;
                a.fmt_child(f, a.precedence() < NEG_PRECEDENCE)
            }
            ExprKind::Unary(op, a) => {
                // Function names always parenthesize their argument.
                write!(f, "{}({a})", op.function_name().expect("named function"))
            }
            ExprKind::Binary(op, l, r) => {
                let p = op.precedence();
                let (left_parens, right_parens) = if *op == BinaryOp::Pow {
                    // Right-associative: a^b^c is a^(b^c).
                    (l.precedence() <= p, r.precedence() < p)
                } else {
                    (l.precedence() < p, r.precedence() <= p)
                };
                l.fmt_child(f, left_parens)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_child(f, right_parens)
            }
        }
    }
}
