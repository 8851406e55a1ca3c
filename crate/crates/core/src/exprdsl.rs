//! A small expression language for acceleration laws and scalar profiles.
//!
//! Grammar (version 1):
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" unary)?
//! atom  := NUMBER | VAR | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//! VAR   := ("x" | "v") ("1" | "2" | "3") ("@" INTEGER)? | "u" | "u1" | "u2" | "u3"
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so `-v1^2`
//! is `-(v1^2)` and `2^3^2` is `2^(3^2)`. Error columns are 1-based.

use std::fmt;

use thiserror::Error;

use crate::numkernel::{DomainError, Scalar, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoordKind {
    Position,
    Velocity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// `x{axis+1}` or `v{axis+1}`, optionally tagged with a 1-based particle.
    Coord { kind: CoordKind, axis: usize, particle: Option<usize> },
    /// `u` of a unary profile.
    Arg,
    /// `u1`, `u2`, `u3` of a ternary profile (stored 0-based).
    ArgN(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Abs,
    Pow,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// What identifiers are legal while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseContext {
    pub particles: usize,
    /// 0 for acceleration laws, 1 for `u` profiles, 3 for `u1..u3` profiles.
    pub profile_arity: usize,
}

impl ParseContext {
    pub fn law(particles: usize) -> Self {
        ParseContext { particles, profile_arity: 0 }
    }

    pub fn profile(arity: usize) -> Self {
        ParseContext { particles: 1, profile_arity: arity }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: expected {}, found {found}", .expected.join(" or "))]
    Syntax { column: usize, expected: Vec<&'static str>, found: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { column: usize, name: String },
    #[error("function `{function}` at column {column} takes {expected} argument(s), got {found}")]
    Arity { column: usize, function: &'static str, expected: usize, found: usize },
    #[error("particle {particle} at column {column} out of range 1..={particles}")]
    ParticleOutOfRange { column: usize, particle: usize, particles: usize },
    #[error("`{name}` at column {column} needs a particle tag (e.g. `{name}@1`) when there are {particles} particles")]
    MissingParticleTag { column: usize, name: String, particles: usize },
}

impl ParseError {
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::UnknownIdentifier { column, .. }
            | ParseError::Arity { column, .. }
            | ParseError::ParticleOutOfRange { column, .. }
            | ParseError::MissingParticleTag { column, .. } => *column,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String, Option<usize>),
    Op(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Ident(s, None) => write!(f, "`{s}`"),
            Tok::Ident(s, Some(t)) => write!(f, "`{s}@{t}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let n: f64 = s.parse().map_err(|_| ParseError::Syntax {
                column: col,
                expected: vec!["number"],
                found: format!("`{s}`"),
            })?;
            out.push((Tok::Num(n), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut tag = None;
            if i < chars.len() && chars[i] == '@' {
                let tag_col = i + 2;
                i += 1;
                let ts = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if ts == i {
                    let found = chars.get(i).map_or("end of input".to_string(), |c| format!("`{c}`"));
                    return Err(ParseError::Syntax { column: tag_col, expected: vec!["particle index"], found });
                }
                let digits: String = chars[ts..i].iter().collect();
                tag = Some(digits.parse().map_err(|_| ParseError::Syntax {
                    column: tag_col,
                    expected: vec!["particle index"],
                    found: format!("`{digits}`"),
                })?);
            }
            out.push((Tok::Ident(name, tag), col));
        } else if "+-*/^(),=;".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                column: col,
                expected: vec!["operator", "operand"],
                found: format!("`{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: ParseContext,
}

impl Parser {
    fn new(text: &str, ctx: ParseContext) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, ctx })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax { column: self.column(), expected, found: self.peek().to_string() }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(vec![what]))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(vec!["operator", "end of input"]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(e)
            }
            Tok::Ident(name, tag) => {
                self.bump();
                if *self.peek() == Tok::Op('(') {
                    if tag.is_some() {
                        return Err(ParseError::UnknownIdentifier { column: col, name });
                    }
                    let func = Func::from_name(&name)
                        .ok_or(ParseError::UnknownIdentifier { column: col, name: name.clone() })?;
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')', "`)` or `,`")?;
                    if args.len() != func.arity() {
                        return Err(ParseError::Arity {
                            column: col,
                            function: func.name(),
                            expected: func.arity(),
                            found: args.len(),
                        });
                    }
                    Ok(Expr::Call(func, args))
                } else {
                    Ok(Expr::Var(self.resolve_var(&name, tag, col)?))
                }
            }
            _ => Err(self.error(vec!["number", "identifier", "`(`", "`-`"])),
        }
    }

    fn resolve_var(&self, name: &str, tag: Option<usize>, column: usize) -> Result<Var, ParseError> {
        let unknown = || ParseError::UnknownIdentifier {
            column,
            name: match tag {
                Some(t) => format!("{name}@{t}"),
                None => name.to_string(),
            },
        };
        let b = name.as_bytes();
        if b.len() == 2 && (b[0] == b'x' || b[0] == b'v') && (b'1'..=b'3').contains(&b[1]) {
            if self.ctx.profile_arity != 0 {
                return Err(unknown());
            }
            let kind = if b[0] == b'x' { CoordKind::Position } else { CoordKind::Velocity };
            let axis = usize::from(b[1] - b'1');
            let particles = self.ctx.particles;
            match tag {
                Some(p) if p == 0 || p > particles => {
                    Err(ParseError::ParticleOutOfRange { column, particle: p, particles })
                }
                None if particles > 1 => {
                    Err(ParseError::MissingParticleTag { column, name: name.to_string(), particles })
                }
                _ => Ok(Var::Coord { kind, axis, particle: tag }),
            }
        } else if tag.is_some() {
            Err(unknown())
        } else if name == "u" && self.ctx.profile_arity == 1 {
            Ok(Var::Arg)
        } else if self.ctx.profile_arity == 3 && matches!(name, "u1" | "u2" | "u3") {
            Ok(Var::ArgN(usize::from(b[1] - b'1')))
        } else {
            Err(unknown())
        }
    }
}

/// Parse a single expression.
pub fn parse(text: &str, ctx: ParseContext) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, ctx)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parse `NAME=(e1,e2,e3)`, returning the name and the three components.
pub fn parse_vector_definition(text: &str, ctx: ParseContext) -> Result<(String, [Expr; 3]), ParseError> {
    let mut p = Parser::new(text, ctx)?;
    let name = match p.peek().clone() {
        Tok::Ident(n, None) => {
            p.bump();
            n
        }
        _ => return Err(p.error(vec!["name"])),
    };
    p.expect('=', "`=`")?;
    p.expect('(', "`(`")?;
    let a = p.expr()?;
    p.expect(',', "`,`")?;
    let b = p.expr()?;
    p.expect(',', "`,`")?;
    let c = p.expr()?;
    p.expect(')', "`)`")?;
    p.expect_end()?;
    Ok((name, [a, b, c]))
}

/// Parse `NAME(u)=expr` or `NAME(u1,u2,u3)=expr`, returning name, arity and body.
pub fn parse_profile_definition(text: &str) -> Result<(String, usize, Expr), ParseError> {
    let mut p = Parser::new(text, ParseContext::profile(1))?;
    let name = match p.peek().clone() {
        Tok::Ident(n, None) => {
            p.bump();
            n
        }
        _ => return Err(p.error(vec!["profile name"])),
    };
    p.expect('(', "`(`")?;
    let mut args = Vec::new();
    loop {
        let col = p.column();
        match p.peek().clone() {
            Tok::Ident(a, None) => {
                p.bump();
                args.push((a, col));
            }
            _ => return Err(p.error(vec!["argument name"])),
        }
        if !p.eat(',') {
            break;
        }
    }
    p.expect(')', "`)`")?;
    p.expect('=', "`=`")?;
    let arity = args.len();
    let expected: &[&str] = match arity {
        1 => &["u"],
        3 => &["u1", "u2", "u3"],
        _ => {
            return Err(ParseError::Syntax {
                column: args[0].1,
                expected: vec!["`(u)`", "`(u1,u2,u3)`"],
                found: format!("{arity} arguments"),
            })
        }
    };
    for ((a, col), e) in args.iter().zip(expected) {
        if a != e {
            return Err(ParseError::UnknownIdentifier { column: *col, name: a.clone() });
        }
    }
    p.ctx = ParseContext::profile(arity);
    let body = p.expr()?;
    p.expect_end()?;
    Ok((name, arity, body))
}

// Printing precedence levels.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => PREC_ATOM,
            Expr::Neg(_) => PREC_NEG,
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
            Expr::Bin(BinOp::Pow, ..) => PREC_POW,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    /// Evaluate with the given bindings over any numeric tower.
    pub fn eval<T: Scalar>(&self, b: &Bindings<'_, T>) -> Result<T, DomainError> {
        let out = self.eval_inner(b)?;
        if !out.is_finite() {
            return Err(DomainError::new(format!("non-finite result of `{self}`")));
        }
        Ok(out)
    }

    fn eval_inner<T: Scalar>(&self, b: &Bindings<'_, T>) -> Result<T, DomainError> {
        match self {
            Expr::Num(n) => Ok(T::from(*n)),
            Expr::Var(v) => b.lookup(v).ok_or_else(|| DomainError::new(format!("unbound variable in `{self}`"))),
            Expr::Neg(e) => Ok(-e.eval_inner(b)?),
            Expr::Bin(op, l, r) => {
                let x = l.eval_inner(b)?;
                let y = r.eval_inner(b)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y.value() == 0.0 {
                            return Err(DomainError::new(format!("division by zero in `{self}`")));
                        }
                        Ok(x / y)
                    }
                    BinOp::Pow => self.pow(x, y, r),
                }
            }
            Expr::Call(func, args) => {
                let x = args[0].eval_inner(b)?;
                let v = x.value();
                match func {
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(DomainError::new(format!("sqrt of negative value in `{self}`")));
                        }
                        Ok(x.sqrt())
                    }
                    Func::Log => {
                        if v <= 0.0 {
                            return Err(DomainError::new(format!("log of non-positive value in `{self}`")));
                        }
                        Ok(x.ln())
                    }
                    Func::Exp => Ok(x.exp()),
                    Func::Sin => Ok(x.sin()),
                    Func::Cos => Ok(x.cos()),
                    Func::Abs => Ok(x.abs()),
                    Func::Pow => {
                        let y = args[1].eval_inner(b)?;
                        self.pow(x, y, &args[1])
                    }
                }
            }
        }
    }

    fn pow<T: Scalar>(&self, base: T, exp: T, exp_expr: &Expr) -> Result<T, DomainError> {
        let (a, e) = (base.value(), exp.value());
        let integral = e.fract() == 0.0 && e.abs() < f64::from(i32::MAX);
        if a < 0.0 && !integral {
            return Err(DomainError::new(format!("negative base with fractional exponent in `{self}`")));
        }
        if a == 0.0 && e < 0.0 {
            return Err(DomainError::new(format!("zero to a negative power in `{self}`")));
        }
        // Literal integer exponents use the exact integer power.
        if let (true, Expr::Num(_)) = (integral, exp_expr) {
            return Ok(base.powi(e as i32));
        }
        Ok(base.powf(exp))
    }

    /// Visit every variable reference.
    pub fn for_each_var(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => f(v),
            Expr::Neg(e) => e.for_each_var(f),
            Expr::Bin(_, l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(Var::Coord { kind, axis, particle }) => {
                let c = match kind {
                    CoordKind::Position => 'x',
                    CoordKind::Velocity => 'v',
                };
                write!(f, "{c}{}", axis + 1)?;
                if let Some(p) = particle {
                    write!(f, "@{p}")?;
                }
                Ok(())
            }
            Expr::Var(Var::Arg) => write!(f, "u"),
            Expr::Var(Var::ArgN(k)) => write!(f, "u{}", k + 1),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write_child(f, e.prec() < PREC_NEG)
            }
            Expr::Bin(op, l, r) => {
                let (sym, p) = match op {
                    BinOp::Add => ('+', PREC_ADD),
                    BinOp::Sub => ('-', PREC_ADD),
                    BinOp::Mul => ('*', PREC_MUL),
                    BinOp::Div => ('/', PREC_MUL),
                    BinOp::Pow => ('^', PREC_POW),
                };
                if *op == BinOp::Pow {
                    // The base must be an atom; the exponent is a unary.
                    l.write_child(f, l.prec() < PREC_ATOM)?;
                    write!(f, "^")?;
                    r.write_child(f, r.prec() < PREC_NEG)
                } else {
                    l.write_child(f, l.prec() < p)?;
                    write!(f, "{sym}")?;
                    r.write_child(f, r.prec() <= p)
                }
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Canonical text of an expression; re-parses to the same tree.
pub fn format(e: &Expr) -> String {
    e.to_string()
}

/// Variable values for evaluation: flattened 6N phase-space coordinates
/// and/or profile arguments.
#[derive(Debug, Clone, Copy)]
pub struct Bindings<'a, T> {
    pub coords: &'a [T],
    pub args: &'a [T],
}

impl<'a, T: Scalar> Bindings<'a, T> {
    pub fn coords(coords: &'a [T]) -> Self {
        Bindings { coords, args: &[] }
    }

    pub fn args(args: &'a [T]) -> Self {
        Bindings { coords: &[], args }
    }

    fn lookup(&self, v: &Var) -> Option<T> {
        match *v {
            Var::Coord { kind, axis, particle } => {
                let n = self.coords.len() / 6;
                let a = particle.unwrap_or(1).checked_sub(1)?;
                if a >= n {
                    return None;
                }
                let off = match kind {
                    CoordKind::Position => 0,
                    CoordKind::Velocity => 3 * n,
                };
                self.coords.get(off + 3 * a + axis).cloned()
            }
            Var::Arg => self.args.first().cloned(),
            Var::ArgN(k) => self.args.get(k).cloned(),
        }
    }
}

impl ScalarField for Expr {
    fn eval<T: Scalar>(&self, coords: &[T]) -> Result<T, DomainError> {
        Expr::eval(self, &Bindings::coords(coords))
    }
}
