//! Arithmetic expressions for scene files.
//!
//! Grammar (usual precedence, `^` binds tighter than unary minus and is
//! right-associative):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers are either declared variables or the constant `pi`. Expressions
//! can be differentiated symbolically, which is how curve velocities are
//! obtained without finite differences.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ExprError {
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Parse { offset, .. }
            | ExprError::UnknownFunction { offset, .. }
            | ExprError::UnknownIdentifier { offset, .. } => *offset,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ExprError::Parse { .. } => "ParseError",
            ExprError::UnknownFunction { .. } => "UnknownFunction",
            ExprError::UnknownIdentifier { .. } => "UnknownIdentifier",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the names of its variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    vars: Vec<String>,
    root: Node,
}

/// Parse an expression in the single variable `t`.
pub fn parse_expression(text: &str) -> Result<Expression, ExprError> {
    Expression::parse(text, &["t"])
}

impl Expression {
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, ExprError> {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let mut p = Parser { src: text, bytes: text.as_bytes(), pos: 0, vars: &vars };
        p.skip_ws();
        if p.pos >= p.bytes.len() {
            return Err(ExprError::Parse { offset: p.pos, message: "empty expression".into() });
        }
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(ExprError::Parse {
                offset: p.pos,
                message: format!("unexpected `{}`", &text[p.pos..].chars().next().unwrap_or(' ')),
            });
        }
        Ok(Self { vars, root })
    }

    /// A constant expression over the given variables.
    pub fn constant(value: f64, vars: &[&str]) -> Self {
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), root: Node::Num(value) }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluate with positional variable values.
    pub fn eval(&self, values: &[f64]) -> f64 {
        eval_node(&self.root, values)
    }

    /// Evaluate a single-variable expression.
    pub fn eval1(&self, x: f64) -> f64 {
        eval_node(&self.root, &[x])
    }

    /// Evaluate with named bindings; unbound variables read as zero.
    pub fn eval_named(&self, env: &HashMap<&str, f64>) -> f64 {
        let values: Vec<f64> =
            self.vars.iter().map(|v| env.get(v.as_str()).copied().unwrap_or(0.0)).collect();
        self.eval(&values)
    }

    /// Symbolic derivative with respect to the variable `var`.
    pub fn derivative(&self, var: &str) -> Option<Self> {
        let idx = self.vars.iter().position(|v| v == var)?;
        Some(Self { vars: self.vars.clone(), root: simplify(derive(&self.root, idx)) })
    }
}

fn eval_node(n: &Node, values: &[f64]) -> f64 {
    match n {
        Node::Num(x) => *x,
        Node::Var(i) => values.get(*i).copied().unwrap_or(0.0),
        Node::Neg(a) => -eval_node(a, values),
        Node::Add(a, b) => eval_node(a, values) + eval_node(b, values),
        Node::Sub(a, b) => eval_node(a, values) - eval_node(b, values),
        Node::Mul(a, b) => eval_node(a, values) * eval_node(b, values),
        Node::Div(a, b) => eval_node(a, values) / eval_node(b, values),
        Node::Pow(a, b) => {
            let base = eval_node(a, values);
            match **b {
                Node::Num(e) if e.fract() == 0.0 && e.abs() < 64.0 => base.powi(e as i32),
                _ => base.powf(eval_node(b, values)),
            }
        }
        Node::Call(f, a) => f.apply(eval_node(a, values)),
    }
}

fn is_const(n: &Node) -> Option<f64> {
    match n {
        Node::Num(x) => Some(*x),
        _ => None,
    }
}

fn bx(n: Node) -> Box<Node> {
    Box::new(n)
}

fn derive(n: &Node, v: usize) -> Node {
    use Node::*;
    match n {
        Num(_) => Num(0.0),
        Var(i) => Num(if *i == v { 1.0 } else { 0.0 }),
        Neg(a) => Neg(bx(derive(a, v))),
        Add(a, b) => Add(bx(derive(a, v)), bx(derive(b, v))),
        Sub(a, b) => Sub(bx(derive(a, v)), bx(derive(b, v))),
        Mul(a, b) => Add(
            bx(Mul(bx(derive(a, v)), b.clone())),
            bx(Mul(a.clone(), bx(derive(b, v)))),
        ),
        Div(a, b) => Div(
            bx(Sub(
                bx(Mul(bx(derive(a, v)), b.clone())),
                bx(Mul(a.clone(), bx(derive(b, v)))),
            )),
            bx(Pow(b.clone(), bx(Num(2.0)))),
        ),
        Pow(a, b) => {
            if let Some(e) = is_const(b) {
                // d(a^e) = e a^(e-1) a'
                Mul(
                    bx(Mul(bx(Num(e)), bx(Pow(a.clone(), bx(Num(e - 1.0)))))),
                    bx(derive(a, v)),
                )
            } else {
                // d(a^b) = a^b (b' ln a + b a'/a)
                Mul(
                    bx(n.clone()),
                    bx(Add(
                        bx(Mul(bx(derive(b, v)), bx(Call(Func::Log, a.clone())))),
                        bx(Div(bx(Mul(b.clone(), bx(derive(a, v)))), a.clone())),
                    )),
                )
            }
        }
        Call(f, a) => {
            let inner = derive(a, v);
            let outer = match f {
                Func::Sin => Call(Func::Cos, a.clone()),
                Func::Cos => Neg(bx(Call(Func::Sin, a.clone()))),
                Func::Tan => Div(bx(Num(1.0)), bx(Pow(bx(Call(Func::Cos, a.clone())), bx(Num(2.0))))),
                Func::Sinh => Call(Func::Cosh, a.clone()),
                Func::Cosh => Call(Func::Sinh, a.clone()),
                Func::Tanh => Sub(
                    bx(Num(1.0)),
                    bx(Pow(bx(Call(Func::Tanh, a.clone())), bx(Num(2.0)))),
                ),
                Func::Exp => Call(Func::Exp, a.clone()),
                Func::Log => Div(bx(Num(1.0)), a.clone()),
                Func::Sqrt => Div(bx(Num(0.5)), bx(Call(Func::Sqrt, a.clone()))),
                Func::Abs => Div(a.clone(), bx(Call(Func::Abs, a.clone()))),
            };
            Mul(bx(outer), bx(inner))
        }
    }
}

fn simplify(n: Node) -> Node {
    use Node::*;
    match n {
        Neg(a) => match simplify(*a) {
            Num(x) => Num(-x),
            Neg(b) => *b,
            a => Neg(bx(a)),
        },
        Add(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x + y),
            (Num(z), e) | (e, Num(z)) if z == 0.0 => e,
            (a, b) => Add(bx(a), bx(b)),
        },
        Sub(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x - y),
            (e, Num(z)) if z == 0.0 => e,
            (Num(z), e) if z == 0.0 => simplify(Neg(bx(e))),
            (a, b) => Sub(bx(a), bx(b)),
        },
        Mul(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x * y),
            (Num(z), _) | (_, Num(z)) if z == 0.0 => Num(0.0),
            (Num(o), e) | (e, Num(o)) if o == 1.0 => e,
            (a, b) => Mul(bx(a), bx(b)),
        },
        Div(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(z), _) if z == 0.0 => Num(0.0),
            (e, Num(o)) if o == 1.0 => e,
            (a, b) => Div(bx(a), bx(b)),
        },
        Pow(a, b) => match (simplify(*a), simplify(*b)) {
            (_, Num(z)) if z == 0.0 => Num(1.0),
            (e, Num(o)) if o == 1.0 => e,
            (a, b) => Pow(bx(a), bx(b)),
        },
        Call(f, a) => match simplify(*a) {
            Num(x) => Num(f.apply(x)),
            a => Call(f, bx(a)),
        },
        other => other,
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { offset, message: message.into() })
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = Node::Add(bx(lhs), bx(self.term()?));
                }
                b'-' => {
                    self.pos += 1;
                    lhs = Node::Sub(bx(lhs), bx(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    lhs = Node::Mul(bx(lhs), bx(self.unary()?));
                }
                b'/' => {
                    self.pos += 1;
                    lhs = Node::Div(bx(lhs), bx(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(match inner {
                Node::Num(x) => Node::Num(-x),
                other => Node::Neg(bx(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Pow(bx(base), bx(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let start = match self.peek() {
            None => return self.err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.bytes[start];
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return self.err(self.pos, "expected `)`");
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = start;
            while end < self.bytes.len()
                && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
            {
                end += 1;
            }
            let name = &self.src[start..end];
            self.pos = end;
            if self.peek() == Some(b'(') {
                let f = Func::from_name(name).ok_or_else(|| ExprError::UnknownFunction {
                    name: name.to_string(),
                    offset: start,
                })?;
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected `)`");
                }
                self.pos += 1;
                return Ok(Node::Call(f, bx(arg)));
            }
            if let Some(i) = self.vars.iter().position(|v| v == name) {
                return Ok(Node::Var(i));
            }
            if name == "pi" {
                return Ok(Node::Num(std::f64::consts::PI));
            }
            return Err(ExprError::UnknownIdentifier { name: name.to_string(), offset: start });
        }
        self.err(start, format!("unexpected `{}`", c as char))
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        let mut end = start;
        while end < b.len() && (b[end].is_ascii_digit() || b[end] == b'.') {
            end += 1;
        }
        if end < b.len() && (b[end] == b'e' || b[end] == b'E') {
            let mut k = end + 1;
            if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
                k += 1;
            }
            if k < b.len() && b[k].is_ascii_digit() {
                while k < b.len() && b[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = &self.src[start..end];
        match text.parse::<f64>() {
            Ok(x) => {
                self.pos = end;
                Ok(Node::Num(x))
            }
            Err(_) => self.err(start, format!("malformed number `{text}`")),
        }
    }
}

// Precedence levels used by the printer.
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

fn prec(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => P_ADD,
        Node::Mul(..) | Node::Div(..) => P_MUL,
        Node::Neg(..) => P_NEG,
        Node::Pow(..) => P_POW,
        _ => P_ATOM,
    }
}

struct Printer<'a> {
    vars: &'a [String],
}

impl Printer<'_> {
    fn write(&self, n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match n {
            Node::Num(x) => {
                if *x < 0.0 || (*x == 0.0 && x.is_sign_negative()) {
                    write!(f, "(-{:?})", -x)
                } else {
                    write!(f, "{x:?}")
                }
            }
            Node::Var(i) => write!(f, "{}", self.vars.get(*i).map(String::as_str).unwrap_or("?")),
            Node::Neg(a) => {
                write!(f, "-")?;
                self.child(a, P_NEG, f)
            }
            Node::Add(a, b) => self.binary(a, "+", b, P_ADD, f),
            Node::Sub(a, b) => self.binary(a, "-", b, P_ADD, f),
            Node::Mul(a, b) => self.binary(a, "*", b, P_MUL, f),
            Node::Div(a, b) => self.binary(a, "/", b, P_MUL, f),
            Node::Pow(a, b) => {
                // base must be an atom; exponent may be a power or negation
                self.child(a, P_ATOM, f)?;
                write!(f, "^")?;
                self.child(b, P_NEG, f)
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.write(a, f)?;
                write!(f, ")")
            }
        }
    }

    fn child(&self, n: &Node, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if prec(n) < min {
            write!(f, "(")?;
            self.write(n, f)?;
            write!(f, ")")
        } else {
            self.write(n, f)
        }
    }

    fn binary(
        &self,
        a: &Node,
        op: &str,
        b: &Node,
        level: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        self.child(a, level, f)?;
        write!(f, "{op}")?;
        // left-associative: the right operand needs strictly higher precedence
        self.child(b, level + 1, f)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { vars: &self.vars }.write(&self.root, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, t: f64) -> f64 {
        parse_expression(s).unwrap().eval1(t)
    }

    #[test]
    fn evaluates_basic_forms() {
        assert_eq!(ev("cosh(t)*2", 0.0), 2.0);
        assert!((ev("sin(t)^2+cos(t)^2", 0.7) - 1.0).abs() < 1e-12);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("1.5e2 + t", 1.0), 151.0);
        assert!((ev("pi", 0.0) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn positioned_errors() {
        let e = parse_expression("cosh(").unwrap_err();
        assert_eq!(e, ExprError::Parse { offset: 5, message: "unexpected end of input".into() });
        assert!(matches!(
            parse_expression("foo(t)"),
            Err(ExprError::UnknownFunction { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expression("t + x"),
            Err(ExprError::UnknownIdentifier { offset: 4, .. })
        ));
        assert!(matches!(parse_expression("1 +"), Err(ExprError::Parse { offset: 3, .. })));
        assert!(matches!(parse_expression("(1"), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse_expression("1 2"), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse_expression("   "), Err(ExprError::Parse { .. })));
    }

    #[test]
    fn symbolic_derivative_matches_finite_difference() {
        for src in ["sin(t)*cosh(t)", "t^3+t", "sqrt(1+t^2)/exp(t)", "log(2+t)*tanh(t)", "tan(t)", "t^t"] {
            let e = parse_expression(src).unwrap();
            let d = e.derivative("t").unwrap();
            for &t in &[0.3, 0.9] {
                let fd = crate::numeric::diff(|x| e.eval1(x), t, 1e-3);
                assert!((d.eval1(t) - fd).abs() < 1e-9, "{src} at {t}");
            }
        }
    }

    #[test]
    fn multivariable_expressions() {
        let e = Expression::parse("cosh(v)^2 * u", &["u", "v"]).unwrap();
        assert!((e.eval(&[2.0, 0.0]) - 2.0).abs() < 1e-15);
        let dv = e.derivative("v").unwrap();
        assert!((dv.eval(&[1.0, 0.5]) - 2.0 * 0.5f64.cosh() * 0.5f64.sinh()).abs() < 1e-14);
        assert!(e.derivative("t").is_none());
    }

    #[test]
    fn printing_round_trips() {
        for src in ["-t^2", "(-t)^2", "2^-t", "1-(2-t)", "t/(2*t)", "-(1+t)*3", "sin(-2.5*t)"] {
            let e = parse_expression(src).unwrap();
            let printed = e.to_string();
            let again = parse_expression(&printed).unwrap();
            assert_eq!(again.to_string(), printed, "{src}");
            assert_eq!(again.eval1(0.37), e.eval1(0.37), "{src}");
        }
    }
}
