//! Ring-definition files and polynomial expressions.
//!
//! ```text
//! # comment
//! label case66
//! field Q            (or GF(p))
//! vars x,y,z,u
//! order grevlex      (or lex; optional)
//! ideal:
//! x*z
//! y^2 + 3*x*y
//! ```
//!
//! Expressions use integers, identifiers, `+ - * ^ ( )` and division by an integer literal.
//! Products need an explicit `*`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{MonomialOrder, Polynomial};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident { name: String, line: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, BigInt),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

impl Lexer {
    fn new(src: &str, line: usize, col0: usize) -> Result<Self> {
        let chars: Vec<char> = src.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = col0 + i;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[s..i].iter().collect();
                toks.push((Tok::Int(text.parse().unwrap()), col));
            } else if c.is_alphabetic() || c == '_' {
                let s = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[s..i].iter().collect()), col));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(err(line, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(Lexer { toks, pos: 0, line, end_col: col0 + chars.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                let col = self.col();
                match self.peek().cloned() {
                    Some(Tok::Int(n)) if !n.is_zero() => {
                        self.pos += 1;
                        lhs = Expr::Div(Box::new(lhs), n);
                    }
                    _ => return Err(err(self.line, col, "expected a nonzero integer divisor")),
                }
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = n.to_u32().filter(|e| *e >= 1).ok_or_else(|| err(self.line, col, "exponent must be a positive integer"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(err(self.line, col, "expected a positive integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident { name, line: self.line, col })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.line, self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(err(self.line, col, format!("unexpected token {}", describe(&t)))),
            None => Err(err(self.line, col, "unexpected end of expression")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
    }
}

/// Parses one expression occupying the whole of `src`; `line` and `col0` locate it in a file.
pub fn parse_expr_at(src: &str, line: usize, col0: usize) -> Result<Expr> {
    let mut lx = Lexer::new(src, line, col0)?;
    let e = lx.expr()?;
    if lx.pos < lx.toks.len() {
        let t = lx.toks[lx.pos].0.clone();
        let msg = match t {
            Tok::Ident(_) | Tok::Int(_) | Tok::Sym('(') => format!("expected an operator before {} (products need `*`)", describe(&t)),
            _ => format!("unexpected token {}", describe(&t)),
        };
        return Err(err(line, lx.col(), msg));
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_expr_at(src, 1, 1)
}

/// Target of expression evaluation.
pub trait ExprAlgebra: Sized + Clone {
    fn constant(&self, num: &BigInt, den: &BigInt) -> Result<Self>;
    fn ident(&self, name: &str) -> Option<Self>;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
}

/// Evaluates `e` using `proto` for constants and identifier lookup.
pub fn eval<A: ExprAlgebra>(e: &Expr, proto: &A) -> Result<A> {
    Ok(match e {
        Expr::Int(n) => proto.constant(n, &BigInt::one())?,
        Expr::Ident { name, line, col } => proto.ident(name).ok_or_else(|| {
            err(*line, *col, format!("unknown identifier `{name}`"))
        })?,
        Expr::Neg(a) => eval(a, proto)?.neg(),
        Expr::Add(a, b) => eval(a, proto)?.add(&eval(b, proto)?),
        Expr::Sub(a, b) => eval(a, proto)?.add(&eval(b, proto)?.neg()),
        Expr::Mul(a, b) => eval(a, proto)?.mul(&eval(b, proto)?)?,
        Expr::Div(a, n) => eval(a, proto)?.mul(&proto.constant(&BigInt::one(), n)?)?,
        Expr::Pow(a, k) => {
            let base = eval(a, proto)?;
            let mut acc = base.clone();
            for _ in 1..*k {
                acc = acc.mul(&base)?;
            }
            acc
        }
    })
}

/// Polynomial evaluation context: a field, variable names and an order.
#[derive(Clone)]
pub struct PolyContext<'a> {
    pub field: Field,
    pub names: &'a [String],
    pub order: MonomialOrder,
    value: Polynomial,
}

impl<'a> PolyContext<'a> {
    pub fn new(field: Field, names: &'a [String], order: MonomialOrder) -> Self {
        PolyContext { field, names, order, value: Polynomial::zero(field, names.len(), order) }
    }

    pub fn into_poly(self) -> Polynomial {
        self.value
    }

    fn wrap(&self, value: Polynomial) -> Self {
        PolyContext { field: self.field, names: self.names, order: self.order, value }
    }
}

impl ExprAlgebra for PolyContext<'_> {
    fn constant(&self, num: &BigInt, den: &BigInt) -> Result<Self> {
        let c = self.field.from_ratio(num, den)?;
        Ok(self.wrap(Polynomial::constant(self.field, self.names.len(), self.order, c)))
    }
    fn ident(&self, name: &str) -> Option<Self> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(self.wrap(Polynomial::var(self.field, self.names.len(), self.order, i)))
    }
    fn add(&self, other: &Self) -> Self {
        self.wrap(self.value.add(&other.value))
    }
    fn neg(&self) -> Self {
        self.wrap(self.value.neg())
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self.wrap(self.value.mul(&other.value)))
    }
}

pub fn parse_poly(src: &str, field: Field, names: &[String], order: MonomialOrder) -> Result<Polynomial> {
    parse_poly_at(src, field, names, order, 1, 1)
}

fn parse_poly_at(src: &str, field: Field, names: &[String], order: MonomialOrder, line: usize, col: usize) -> Result<Polynomial> {
    let e = parse_expr_at(src, line, col)?;
    Ok(eval(&e, &PolyContext::new(field, names, order))?.into_poly())
}

/// A parsed ring-definition file.
#[derive(Clone, Debug, PartialEq)]
pub struct RingDefinition {
    pub label: Option<String>,
    pub field: Field,
    pub names: Vec<String>,
    pub order: Option<MonomialOrder>,
    pub relations: Vec<Polynomial>,
}

impl RingDefinition {
    pub fn order_or_default(&self) -> MonomialOrder {
        self.order.unwrap_or_default()
    }

    pub fn build(&self) -> Result<crate::quotient::QuotientRing> {
        crate::quotient::QuotientRing::new(self.field, self.names.clone(), self.relations.clone(), self.order_or_default())
    }

    /// Text form accepted by [`parse_ring`].
    pub fn print(&self) -> String {
        let mut s = String::new();
        if let Some(l) = &self.label {
            s.push_str(&format!("label {l}\n"));
        }
        s.push_str(&format!("field {}\n", self.field));
        s.push_str(&format!("vars {}\n", self.names.join(",")));
        if let Some(o) = self.order {
            s.push_str(&format!("order {}\n", o.name()));
        }
        s.push_str("ideal:\n");
        for r in &self.relations {
            s.push_str(&r.format(&self.names));
            s.push('\n');
        }
        s
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_field(arg: &str, line: usize, col: usize) -> Result<Field> {
    if arg == "Q" || arg == "QQ" {
        return Ok(Field::Rationals);
    }
    let inner = arg
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err(line, col, format!("unknown field `{arg}`; expected Q or GF(p)")))?;
    let p: u64 = inner.trim().parse().map_err(|_| err(line, col + 3, format!("bad modulus `{inner}`")))?;
    Field::prime(p)
}

pub fn parse_ring(text: &str) -> Result<RingDefinition> {
    let mut label = None;
    let mut field = None;
    let mut names: Option<Vec<String>> = None;
    let mut order = None;
    let mut in_ideal = false;
    let mut pending: Vec<(usize, usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        if in_ideal {
            pending.push((line, col, trimmed.to_string()));
            continue;
        }
        let (kw, rest) = match trimmed.find(|c: char| c.is_whitespace()) {
            Some(p) => (&trimmed[..p], trimmed[p..].trim()),
            None => (trimmed, ""),
        };
        let arg_col = col + trimmed.len() - rest.len();
        match kw {
            "ideal:" if rest.is_empty() => in_ideal = true,
            "ideal" if rest == ":" => in_ideal = true,
            "label" if !rest.is_empty() => label = Some(rest.to_string()),
            "field" => field = Some(parse_field(rest, line, arg_col)?),
            "vars" => {
                let vs: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                for v in &vs {
                    if !is_ident(v) {
                        return Err(err(line, arg_col, format!("bad variable name `{v}`")));
                    }
                }
                for (i, v) in vs.iter().enumerate() {
                    if vs[..i].contains(v) {
                        return Err(err(line, arg_col, format!("duplicate variable `{v}`")));
                    }
                }
                names = Some(vs);
            }
            "order" => {
                order = Some(MonomialOrder::from_name(rest).ok_or_else(|| err(line, arg_col, format!("unknown order `{rest}`; expected lex or grevlex")))?)
            }
            _ => return Err(err(line, col, format!("unrecognized line `{trimmed}`"))),
        }
    }
    let names = names.ok_or_else(|| err(1, 1, "missing `vars` line"))?;
    if !in_ideal {
        return Err(err(text.lines().count().max(1), 1, "missing `ideal:` section"));
    }
    let field = field.unwrap_or(Field::Rationals);
    let o = order.unwrap_or_default();
    let mut relations = Vec::new();
    for (line, col, src) in pending {
        let p = parse_poly_at(&src, field, &names, o, line, col)?;
        if p.is_zero() {
            continue;
        }
        if p.max_degree() == Some(0) {
            return Err(err(line, col, "relation is a nonzero constant"));
        }
        relations.push(p);
    }
    Ok(RingDefinition { label, field, names, order, relations })
}
