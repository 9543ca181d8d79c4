//! Test-function expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-'? atom
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds tighter than `^`, so `-2^2 = 4`; `^` is right-associative.

use std::fmt;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn eval(&self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
            Func::Sqrt => v.sqrt(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(&self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

/// `X` is the univariate variable; `Coord(k)` is `x_k`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Coord(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates with `x` bound to `x` and `x_k` bound to `coords[k - 1]`.
    /// Coordinates beyond `coords` evaluate to NaN; see [`Expr::max_coord`].
    pub fn eval(&self, x: f64, coords: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Const(Constant::Pi) => std::f64::consts::PI,
            Expr::Const(Constant::E) => std::f64::consts::E,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Coord(k)) => coords.get(k - 1).copied().unwrap_or(f64::NAN),
            Expr::Neg(a) => -a.eval(x, coords),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x, coords), b.eval(x, coords));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, a) => f.eval(a.eval(x, coords)),
        }
    }

    pub fn eval_x(&self, x: f64) -> f64 {
        self.eval(x, &[])
    }

    pub fn uses_x(&self) -> bool {
        match self {
            Expr::Var(Var::X) => true,
            Expr::Num(_) | Expr::Const(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses_x(),
            Expr::Bin(_, a, b) => a.uses_x() || b.uses_x(),
        }
    }

    /// Largest `k` among the `x_k` used (0 if none).
    pub fn max_coord(&self) -> usize {
        match self {
            Expr::Var(Var::Coord(k)) => *k,
            Expr::Num(_) | Expr::Const(_) | Expr::Var(_) => 0,
            Expr::Neg(a) | Expr::Call(_, a) => a.max_coord(),
            Expr::Bin(_, a, b) => a.max_coord().max(b.max_coord()),
        }
    }
}

impl Expr {
    /// Symbolic `d/dx`, unsimplified. Coordinates `x_k` are treated as constants.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        let b = Box::new;
        match self {
            Num(_) | Const(_) | Var(self::Var::Coord(_)) => Num(0.0),
            Var(self::Var::X) => Num(1.0),
            Neg(a) => Neg(b(a.derivative())),
            Bin(op, u, v) => {
                let (du, dv) = (u.derivative(), v.derivative());
                match op {
                    BinOp::Add | BinOp::Sub => Bin(*op, b(du), b(dv)),
                    BinOp::Mul => Bin(
                        BinOp::Add,
                        b(Bin(BinOp::Mul, b(du), v.clone())),
                        b(Bin(BinOp::Mul, u.clone(), b(dv))),
                    ),
                    BinOp::Div => Bin(
                        BinOp::Div,
                        b(Bin(
                            BinOp::Sub,
                            b(Bin(BinOp::Mul, b(du), v.clone())),
                            b(Bin(BinOp::Mul, u.clone(), b(dv))),
                        )),
                        b(Bin(BinOp::Pow, v.clone(), b(Num(2.0)))),
                    ),
                    BinOp::Pow if !v.uses_x() => Bin(
                        BinOp::Mul,
                        b(Bin(
                            BinOp::Mul,
                            v.clone(),
                            b(Bin(BinOp::Pow, u.clone(), b(Bin(BinOp::Sub, v.clone(), b(Num(1.0)))))),
                        )),
                        b(du),
                    ),
                    // u^v (v' log u + v u'/u)
                    BinOp::Pow => Bin(
                        BinOp::Mul,
                        b(self.clone()),
                        b(Bin(
                            BinOp::Add,
                            b(Bin(BinOp::Mul, b(dv), b(Call(Func::Log, u.clone())))),
                            b(Bin(BinOp::Div, b(Bin(BinOp::Mul, v.clone(), b(du))), u.clone())),
                        )),
                    ),
                }
            }
            Call(f, a) => {
                let da = a.derivative();
                let outer = match f {
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => Neg(b(Call(Func::Sin, a.clone()))),
                    Func::Exp => self.clone(),
                    Func::Log => Bin(BinOp::Div, b(Num(1.0)), a.clone()),
                    Func::Sqrt => Bin(BinOp::Div, b(Num(0.5)), b(self.clone())),
                    Func::Abs => Bin(BinOp::Div, a.clone(), b(self.clone())),
                };
                Bin(BinOp::Mul, b(outer), b(da))
            }
        }
    }

    /// `[f, f', ..., f^(order)]` as expressions.
    pub fn derivatives(&self, order: usize) -> Vec<Expr> {
        let mut out = vec![self.clone()];
        for _ in 0..order {
            let next = out.last().expect("nonempty").derivative();
            out.push(next);
        }
        out
    }
}

/// Fully parenthesized, so that parsing the output gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Const(Constant::Pi) => write!(f, "pi"),
            Expr::Const(Constant::E) => write!(f, "e"),
            Expr::Var(Var::X) => write!(f, "x"),
            Expr::Var(Var::Coord(k)) => write!(f, "x{k}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Bin(op, a, b) => write!(f, "({a}){}({b})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error(&format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> CliError {
        CliError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.atom()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(c) => Err(self.error(&format!("unexpected '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if let Some(b'e' | b'E') = self.src.get(self.pos) {
            let mark = self.pos;
            self.pos += 1;
            if let Some(b'+' | b'-') = self.src.get(self.pos) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // not an exponent: leave 'e' for the caller (reported as trailing input)
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map(Expr::Num).map_err(|_| CliError::Syntax {
            offset: start,
            message: format!("malformed number '{text}'"),
        })
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(func) = Func::from_name(name) {
            if self.peek() != Some(b'(') {
                return Err(self.error(&format!("expected '(' after function '{name}'")));
            }
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        let unknown = || CliError::UnknownIdentifier {
            name: name.to_string(),
            offset: start,
        };
        match name {
            "x" => Ok(Expr::Var(Var::X)),
            "pi" => Ok(Expr::Const(Constant::Pi)),
            "e" => Ok(Expr::Const(Constant::E)),
            _ => {
                let index = name.strip_prefix('x').filter(|d| !d.starts_with('0'));
                match index.and_then(|d| d.parse::<usize>().ok()) {
                    Some(k) if k >= 1 => Ok(Expr::Var(Var::Coord(k))),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse("x").unwrap(), Expr::Var(Var::X));
        assert_eq!(parse("sin(3*x)+x^2").unwrap().eval_x(0.0), 0.0);
        assert_eq!(parse("2^3^2").unwrap().eval_x(0.0), 512.0);
        assert_eq!(parse("-2^2").unwrap().eval_x(0.0), 4.0);
        assert_eq!(parse("1 - 2 - 3").unwrap().eval_x(0.0), -4.0);
        assert_eq!(parse("8/2/2").unwrap().eval_x(0.0), 2.0);
        assert!((parse("x1 + 2*x3").unwrap().eval(0.0, &[1.0, 5.0, 0.5]) - 2.0).abs() < 1e-15);
        assert!((parse("cos(pi) + log(e)").unwrap().eval_x(0.0)).abs() < 1e-15);
        assert_eq!(parse("1.5e2").unwrap().eval_x(0.0), 150.0);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("1 + * 2") {
            Err(CliError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse("2*y") {
            Err(CliError::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "y");
                assert_eq!(offset, 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("sin x").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("").is_err());
        assert!(parse("x0").is_err());
        assert!(parse("2e").is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for text in ["sin(3*x)+x^2", "exp(-x)/(1+x^2)", "sqrt(1+x)*log(2+x)", "x^x", "abs(x-0.2)^3", "cos(x)^-2"] {
            let e = parse(text).unwrap();
            let d = e.derivative();
            for x in [0.3, 0.7, 1.1] {
                let h = 1e-6;
                let fd = (e.eval_x(x + h) - e.eval_x(x - h)) / (2.0 * h);
                assert!((d.eval_x(x) - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{text} at {x}");
            }
        }
    }
}
