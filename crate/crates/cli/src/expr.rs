//! The expression language.
//!
//! Polynomials in the context variables, basis 1-forms `dx`, basis
//! derivations `@x`, and the operators below, loosest first:
//!
//! | op        | meaning                                   |
//! |-----------|-------------------------------------------|
//! | `#`       | tensor `ω # X` of a form and a multivector |
//! | `+ -`     | sum, difference                           |
//! | `^`       | wedge                                     |
//! | `* /`     | scalar multiplication, division by a constant |
//! | `-`       | negation                                  |
//! | `^ INT`   | power of a scalar                         |
//!
//! A `^` directly after a scalar operand and followed by an integer literal
//! is a power; every other `^` is a wedge. The printed form of every value
//! parses back to the same value.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use bracketlab_core::exactalg::int;
use bracketlab_core::{Form, Multivector, Poly, Rational, VForm, VarContext};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column in the source.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        column,
        message: message.into(),
    })
}

/// A parsed element. Degree-0 forms and multivectors are kept as scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Poly),
    Form(Form),
    Multi(Multivector),
    VForm(VForm),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "polynomial",
            Value::Form(_) => "form",
            Value::Multi(_) => "multivector",
            Value::VForm(_) => "vector-valued form",
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Scalar(p) => p.is_zero(),
            Value::Form(w) => w.is_zero(),
            Value::Multi(x) => x.is_zero(),
            Value::VForm(o) => o.is_zero(),
        }
    }

    fn normalized(self) -> Value {
        match self {
            Value::Form(w) if w.degree() == 0 => Value::Scalar(w.as_scalar()),
            Value::Multi(x) if x.degree() == 0 => Value::Scalar(x.as_scalar()),
            v => v,
        }
    }

    /// Equality up to the nominal degree of zero elements, which the printed
    /// form does not carry.
    pub fn same(&self, other: &Value) -> bool {
        (self.is_zero() && other.is_zero()) || self == other
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        match self {
            Value::Scalar(p) => p.degree(),
            Value::Form(w) => w.max_coeff_degree(),
            Value::Multi(x) => x.max_coeff_degree(),
            Value::VForm(o) => o.max_coeff_degree(),
        }
    }

    pub fn into_poly(self) -> Result<Poly, String> {
        match self {
            Value::Scalar(p) => Ok(p),
            v if v.is_zero() => Ok(Poly::zero(v.ctx())),
            v => Err(format!("expected a polynomial, got a {}", v.kind())),
        }
    }

    pub fn into_form(self) -> Result<Form, String> {
        match self {
            Value::Scalar(p) => Ok(Form::scalar(&p)),
            Value::Form(w) => Ok(w),
            Value::VForm(o) if o.multi_degree() == 0 => o.as_form().map_err(|e| e.to_string()),
            v => Err(format!("expected a form, got a {}", v.kind())),
        }
    }

    pub fn into_multi(self) -> Result<Multivector, String> {
        match self {
            Value::Scalar(p) => Ok(Multivector::scalar(&p)),
            Value::Multi(x) => Ok(x),
            Value::VForm(o) if o.form_degree() == 0 => {
                o.as_multivector().map_err(|e| e.to_string())
            }
            v => Err(format!("expected a multivector, got a {}", v.kind())),
        }
    }

    /// Forms become `ω # 1`, multivectors `1 # X`.
    pub fn into_vform(self) -> VForm {
        match self {
            Value::Scalar(p) => {
                VForm::tensor(&Form::scalar(&p), &Multivector::scalar(&Poly::one(p.ctx())))
                    .expect("same context")
            }
            Value::Form(w) => {
                VForm::tensor(&w, &Multivector::scalar(&Poly::one(w.ctx()))).expect("same context")
            }
            Value::Multi(x) => VForm::from_multivector(&x),
            Value::VForm(o) => o,
        }
    }

    fn ctx(&self) -> &Arc<VarContext> {
        match self {
            Value::Scalar(p) => p.ctx(),
            Value::Form(w) => w.ctx(),
            Value::Multi(x) => x.ctx(),
            Value::VForm(o) => o.ctx(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(p) => write!(f, "{p}"),
            Value::Form(w) => write!(f, "{w}"),
            Value::Multi(x) => write!(f, "{x}"),
            Value::VForm(o) => write!(f, "{o}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    At(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Hash,
    LParen,
    RParen,
    End,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '#' => Some(Tok::Hash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if is_ident_start(c) || c == '@' {
            let start = if c == '@' { i + 1 } else { i };
            i = start;
            if c == '@' && !(i < chars.len() && is_ident_start(chars[i])) {
                return err(col, "expected a variable name after '@'");
            }
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((if c == '@' { Tok::At(s) } else { Tok::Ident(s) }, col));
        } else {
            return err(col, format!("unexpected character {c:?}"));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// Variable names mentioned by an expression: `x`, `dx` and `@x` all
/// mention `x`. Identifiers in `skip` (definitions) are ignored.
pub fn mentioned_variables(src: &str, skip: &HashSet<String>) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    for (t, _) in lex(src)? {
        match t {
            Tok::Ident(s) if skip.contains(&s) => {}
            Tok::Ident(s) => match s.strip_prefix('d') {
                Some(rest) if !rest.is_empty() => out.push(rest.to_string()),
                _ => out.push(s),
            },
            Tok::At(s) => out.push(s),
            _ => {}
        }
    }
    Ok(out)
}

/// Variables and named definitions visible to the parser.
#[derive(Clone, Debug)]
pub struct Scope<'a> {
    pub ctx: Arc<VarContext>,
    pub defs: &'a BTreeMap<String, String>,
}

pub fn parse(src: &str, scope: &Scope<'_>) -> Result<Value, ParseError> {
    let mut active = Vec::new();
    parse_in(src, scope, &mut active)
}

fn parse_in(src: &str, scope: &Scope<'_>, active: &mut Vec<String>) -> Result<Value, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope,
        active,
    };
    let v = p.expr()?;
    let (t, col) = p.peek();
    if *t != Tok::End {
        return err(*col, "unexpected token after end of expression");
    }
    Ok(v.normalized())
}

struct Parser<'s, 'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: &'s Scope<'a>,
    active: &'s mut Vec<String>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn ctx(&self) -> &Arc<VarContext> {
        &self.scope.ctx
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let lhs = self.sum()?;
        if self.peek().0 == Tok::Hash {
            let (_, col) = self.next();
            let rhs = self.sum()?;
            return tensor(lhs, rhs, col);
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.wedge()?;
        loop {
            let (t, col) = self.peek().clone();
            match t {
                Tok::Plus => {
                    self.next();
                    let rhs = self.wedge()?;
                    acc = add(acc, rhs, col)?;
                }
                Tok::Minus => {
                    self.next();
                    let rhs = self.wedge()?;
                    acc = add(acc, neg(rhs), col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn wedge(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.product()?;
        while self.peek().0 == Tok::Caret {
            let (_, col) = self.next();
            let rhs = self.product()?;
            acc = wedge(acc, rhs, col)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let (t, col) = self.peek().clone();
            match t {
                Tok::Star => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs, col)?;
                }
                Tok::Slash => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = div(acc, rhs, col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.peek().0 == Tok::Minus {
            self.next();
            return Ok(neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.primary()?;
        if let Value::Scalar(p) = &base {
            if self.peek().0 == Tok::Caret {
                if let Tok::Int(k) = &self.toks[self.pos + 1].0 {
                    let col = self.toks[self.pos + 1].1;
                    let k = k.to_u32().ok_or(ParseError {
                        column: col,
                        message: "exponent too large".into(),
                    })?;
                    self.pos += 2;
                    return Ok(Value::Scalar(p.pow(k)));
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Value, ParseError> {
        let (t, col) = self.next();
        match t {
            Tok::Int(n) => Ok(Value::Scalar(Poly::constant(
                self.ctx(),
                Rational::from_integer(n),
            ))),
            Tok::LParen => {
                let v = self.expr()?;
                let (t, c) = self.next();
                if t != Tok::RParen {
                    return err(c, "expected ')'");
                }
                Ok(v.normalized())
            }
            Tok::At(name) => match self.ctx().index_of(&name) {
                Some(i) => Ok(Value::Multi(Multivector::basis(
                    self.ctx(),
                    &[i],
                    &Poly::one(self.ctx()),
                ))),
                None => err(col, format!("unknown variable {name:?} in '@{name}'")),
            },
            Tok::Ident(name) => self.identifier(&name, col),
            Tok::End => err(col, "unexpected end of expression"),
            _ => err(col, "expected an operand"),
        }
    }

    fn identifier(&mut self, name: &str, col: usize) -> Result<Value, ParseError> {
        let ctx = self.ctx().clone();
        if let Some(i) = ctx.index_of(name) {
            return Ok(Value::Scalar(Poly::var(&ctx, i)));
        }
        if let Some(i) = name.strip_prefix('d').and_then(|v| ctx.index_of(v)) {
            return Ok(Value::Form(Form::basis(&ctx, &[i], &Poly::one(&ctx))));
        }
        if let Some(src) = self.scope.defs.get(name) {
            if self.active.iter().any(|a| a == name) {
                return err(col, format!("definition {name:?} refers to itself"));
            }
            self.active.push(name.to_string());
            let v = parse_in(src, self.scope, self.active).map_err(|e| ParseError {
                column: col,
                message: format!("in definition {name:?}: {e}"),
            });
            self.active.pop();
            return v;
        }
        err(col, format!("unknown identifier {name:?}"))
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Scalar(p) => Value::Scalar(-&p),
        Value::Form(w) => Value::Form(-&w),
        Value::Multi(x) => Value::Multi(-&x),
        Value::VForm(o) => Value::VForm(-&o),
    }
}

fn core<T>(r: bracketlab_core::Result<T>, col: usize) -> Result<T, ParseError> {
    r.map_err(|e| ParseError {
        column: col,
        message: e.to_string(),
    })
}

fn add(a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
    if b.is_zero() && matches!(b, Value::Scalar(_)) {
        return Ok(a);
    }
    if a.is_zero() && matches!(a, Value::Scalar(_)) {
        return Ok(b);
    }
    let (a, b) = (a.normalized(), b.normalized());
    match (a, b) {
        (Value::Scalar(p), Value::Scalar(q)) => Ok(Value::Scalar(&p + &q)),
        (Value::Form(w), Value::Form(v)) if w.degree() == v.degree() => {
            Ok(Value::Form(core(w.checked_add(&v), col)?))
        }
        (Value::Multi(x), Value::Multi(y)) if x.degree() == y.degree() => {
            Ok(Value::Multi(core(x.checked_add(&y), col)?))
        }
        (Value::VForm(o), Value::VForm(p))
            if (o.form_degree(), o.multi_degree()) == (p.form_degree(), p.multi_degree()) =>
        {
            Ok(Value::VForm(core(o.checked_add(&p), col)?))
        }
        (a, b) if a.is_zero() => Ok(b),
        (a, b) if b.is_zero() => Ok(a),
        (a, b) => err(
            col,
            format!(
                "grade mismatch: cannot add {} {} and {} {}",
                a.kind(),
                grade(&a),
                b.kind(),
                grade(&b)
            ),
        ),
    }
}

fn grade(v: &Value) -> String {
    match v {
        Value::Scalar(_) => "of degree 0".into(),
        Value::Form(w) => format!("of degree {}", w.degree()),
        Value::Multi(x) => format!("of degree {}", x.degree()),
        Value::VForm(o) => format!("of bidegree ({}, {})", o.form_degree(), o.multi_degree()),
    }
}

fn scale_by(v: Value, p: &Poly) -> Value {
    match v {
        Value::Scalar(q) => Value::Scalar(&q * p),
        Value::Form(w) => Value::Form(w.mul_poly(p)),
        Value::Multi(x) => Value::Multi(x.mul_poly(p)),
        Value::VForm(o) => Value::VForm(o.mul_poly(p)),
    }
}

fn mul(a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Scalar(p), b) => Ok(scale_by(b, &p)),
        (a, Value::Scalar(q)) => Ok(scale_by(a, &q)),
        (a, b) => err(
            col,
            format!(
                "'*' needs a polynomial factor, got {} and {}; use '^' to wedge",
                a.kind(),
                b.kind()
            ),
        ),
    }
}

fn div(a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
    let c = match &b {
        Value::Scalar(q) if q.is_constant() => q.constant_term(),
        _ => return err(col, "can only divide by a rational constant"),
    };
    if c.is_zero() {
        return err(col, "division by zero");
    }
    let inv = int(1) / c;
    Ok(match a {
        Value::Scalar(p) => Value::Scalar(p.scale(&inv)),
        Value::Form(w) => Value::Form(w.scale(&inv)),
        Value::Multi(x) => Value::Multi(x.scale(&inv)),
        Value::VForm(o) => Value::VForm(o.scale(&inv)),
    })
}

fn wedge(a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Scalar(p), b) => Ok(scale_by(b, &p)),
        (a, Value::Scalar(q)) => Ok(scale_by(a, &q)),
        (Value::Form(w), Value::Form(v)) => Ok(Value::Form(core(w.wedge(&v), col)?)),
        (Value::Multi(x), Value::Multi(y)) => Ok(Value::Multi(core(x.wedge(&y), col)?)),
        (Value::Form(w), Value::VForm(o)) => {
            Ok(Value::VForm(core(VForm::wedge_form(&w, &o), col)?))
        }
        (a, b) => err(
            col,
            format!(
                "grade mismatch: cannot wedge a {} with a {}",
                a.kind(),
                b.kind()
            ),
        ),
    }
}

fn tensor(a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
    let (ak, bk) = (a.kind(), b.kind());
    let w = match a {
        Value::Scalar(p) => Form::scalar(&p),
        Value::Form(w) => w,
        _ => return err(col, format!("left of '#' must be a form, got a {ak}")),
    };
    let x = match b {
        Value::Scalar(p) => Multivector::scalar(&p),
        Value::Multi(x) => x,
        _ => {
            return err(
                col,
                format!("right of '#' must be a multivector, got a {bk}"),
            )
        }
    };
    Ok(Value::VForm(core(VForm::tensor(&w, &x), col)?))
}
