//! Arithmetic expressions for objective components in problem files.
//!
//! Grammar (usual precedence, `^` right-associative, unary minus binds looser
//! than `^`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Variables are `x1 .. xd`. A bare `x` is `x1` when `d = 1`; otherwise it
//! stands for the whole decision vector and may only appear as an argument of
//! `norm`. Constants: `pi`, `e`. Functions: `exp`, `log`, `sqrt`, `abs`,
//! `sin`, `cos`, `max`, `min`, and the variadic Euclidean `norm`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    WholeVector,
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Exp,
    Log,
    Sqrt,
    Abs,
    Sin,
    Cos,
    Max,
    Min,
    Norm,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "max" => Func::Max,
            "min" => Func::Min,
            "norm" => Func::Norm,
            _ => return None,
        })
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            Func::Max | Func::Min | Func::Norm => n >= 1,
            _ => n == 1,
        }
    }
}

/// A parsed expression over `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    dim: usize,
    source: String,
}

impl Expr {
    pub fn parse(source: &str, dim: usize) -> Result<Self> {
        let tokens = tokenize(source)?;
        let mut parser = Parser { tokens, pos: 0, dim };
        let root = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input in `{source}`"
            )));
        }
        check_vector_usage(&root, false)?;
        Ok(Self {
            root,
            dim,
            source: source.to_string(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        eval(&self.root, x)
    }
}

fn check_vector_usage(node: &Node, in_norm: bool) -> Result<()> {
    match node {
        Node::WholeVector if !in_norm => Err(Error::Parse(
            "the vector `x` may only appear inside norm(...)".into(),
        )),
        Node::Neg(a) => check_vector_usage(a, false),
        Node::Bin(_, a, b) => {
            check_vector_usage(a, false)?;
            check_vector_usage(b, false)
        }
        Node::Call(f, args) => args
            .iter()
            .try_for_each(|a| check_vector_usage(a, *f == Func::Norm)),
        _ => Ok(()),
    }
}

fn eval(node: &Node, x: &[f64]) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(i) => x[*i],
        Node::WholeVector => crate::linalg::norm(x),
        Node::Neg(a) => -eval(a, x),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, x), eval(b, x));
            match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
                Op::Div => a / b,
                Op::Pow => pow(a, b),
            }
        }
        Node::Call(f, args) => match f {
            Func::Norm => args
                .iter()
                .map(|a| match a {
                    Node::WholeVector => x.iter().map(|v| v * v).sum::<f64>(),
                    other => {
                        let v = eval(other, x);
                        v * v
                    }
                })
                .sum::<f64>()
                .sqrt(),
            Func::Max => args.iter().map(|a| eval(a, x)).fold(f64::NEG_INFINITY, f64::max),
            Func::Min => args.iter().map(|a| eval(a, x)).fold(f64::INFINITY, f64::min),
            unary => {
                let v = eval(&args[0], x);
                match unary {
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    _ => unreachable!(),
                }
            }
        },
    }
}

// Integer exponents go through powi so that x^2 is exact and defined for x < 0.
fn pow(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific notation: 1e-3, 2.5E+4
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek_sym(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Sym(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek_sym() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek_sym() {
            Some('-') => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        let token = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match token {
            Token::Num(v) => Ok(Node::Num(v)),
            Token::Sym('(') => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Token::Sym(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
            Token::Ident(name) => {
                if self.peek_sym() == Some('(') {
                    self.pos += 1;
                    let func = Func::lookup(&name)
                        .ok_or_else(|| Error::Parse(format!("unknown function `{name}`")))?;
                    let mut args = vec![self.expr()?];
                    while self.peek_sym() == Some(',') {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect_sym(')')?;
                    if !func.arity_ok(args.len()) {
                        return Err(Error::Parse(format!(
                            "wrong number of arguments for `{name}`"
                        )));
                    }
                    return Ok(Node::Call(func, args));
                }
                self.identifier(&name)
            }
        }
    }

    fn identifier(&self, name: &str) -> Result<Node> {
        match name {
            "pi" => return Ok(Node::Num(std::f64::consts::PI)),
            "e" => return Ok(Node::Num(std::f64::consts::E)),
            "x" if self.dim == 1 => return Ok(Node::Var(0)),
            "x" => return Ok(Node::WholeVector),
            _ => {}
        }
        if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            if (1..=self.dim).contains(&idx) {
                return Ok(Node::Var(idx - 1));
            }
            return Err(Error::Parse(format!(
                "variable `{name}` out of range for dimension {}",
                self.dim
            )));
        }
        Err(Error::Parse(format!("unknown identifier `{name}`")))
    }
}
