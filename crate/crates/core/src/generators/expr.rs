//! Closed-form expressions in one variable `eps`, used for Steiner-like
//! coefficient functions.
//!
//! Textual grammar (whitespace insensitive):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := int | '(' ['-'] int ['/' int] ')'
//! atom     := number | 'eps' | 'g' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func     := 'sqrt' | 'arccos' | 'acos'
//! ```
//!
//! `g` is bound to the inradius of the representation when the expression is
//! parsed; powers take rational constant exponents only.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Eps,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Rational power `base^(num/den)`.
    Pow(Box<Expr>, i64, i64),
    Sqrt(Box<Expr>),
    Arccos(Box<Expr>),
}

impl Expr {
    /// Parses `src`, binding the identifier `g` to `inradius`.
    pub fn parse(src: &str, inradius: f64) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0, inradius };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Grammar(format!("unexpected trailing input in `{src}` at token {}", p.pos)));
        }
        Ok(e)
    }

    pub fn eval(&self, eps: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Eps => eps,
            Expr::Neg(a) => -a.eval(eps),
            Expr::Add(a, b) => a.eval(eps) + b.eval(eps),
            Expr::Sub(a, b) => a.eval(eps) - b.eval(eps),
            Expr::Mul(a, b) => a.eval(eps) * b.eval(eps),
            Expr::Div(a, b) => a.eval(eps) / b.eval(eps),
            Expr::Pow(a, n, d) => {
                let base = a.eval(eps);
                if *d == 1 {
                    base.powi(*n as i32)
                } else {
                    base.powf(*n as f64 / *d as f64)
                }
            }
            Expr::Sqrt(a) => a.eval(eps).sqrt(),
            Expr::Arccos(a) => clamp_unit(a.eval(eps)).acos(),
        }
    }

    /// True when the expression does not mention `eps`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Eps => false,
            Expr::Neg(a) | Expr::Pow(a, _, _) | Expr::Sqrt(a) | Expr::Arccos(a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }
}

// arccos arguments computed as g/(eps*sqrt(2)) land a few ulps above 1 at the
// piece endpoint.
fn clamp_unit(x: f64) -> f64 {
    if x > 1.0 && x < 1.0 + 1e-12 {
        1.0
    } else if x < -1.0 && x > -1.0 - 1e-12 {
        -1.0
    } else {
        x
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Eps => write!(f, "eps"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n, 1) => write!(f, "({a})^({n})"),
            Expr::Pow(a, n, d) => write!(f, "({a})^({n}/{d})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Arccos(a) => write!(f, "arccos({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
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
            // exponent part, e.g. 1e-3
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
            let v = text.parse::<f64>().map_err(|_| Error::Grammar(format!("bad number `{text}`")))?;
            out.push(Token::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Grammar(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    inradius: f64,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(Error::Grammar(format!("expected `{op}` at token {}, found {:?}", self.pos, self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let (n, d) = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), n, d))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Token::Num(v)) if v.fract() == 0.0 && v.abs() < 1e9 => {
                let v = *v as i64;
                self.pos += 1;
                Ok(v)
            }
            other => Err(Error::Grammar(format!("exponent must be a rational constant, found {other:?}"))),
        }
    }

    fn exponent(&mut self) -> Result<(i64, i64)> {
        if self.eat_op('(') {
            let sign = if self.eat_op('-') { -1 } else { 1 };
            let n = self.integer()?;
            let d = if self.eat_op('/') { self.integer()? } else { 1 };
            self.expect_op(')')?;
            if d <= 0 {
                return Err(Error::Grammar("exponent denominator must be positive".into()));
            }
            Ok((sign * n, d))
        } else {
            Ok((self.integer()?, 1))
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "eps" | "ε" => Ok(Expr::Eps),
                    "g" => Ok(Expr::Const(self.inradius)),
                    "pi" | "π" => Ok(Expr::Const(std::f64::consts::PI)),
                    "sqrt" | "arccos" | "acos" => {
                        self.expect_op('(')?;
                        let arg = self.expr()?;
                        self.expect_op(')')?;
                        Ok(if name == "sqrt" { Expr::Sqrt(Box::new(arg)) } else { Expr::Arccos(Box::new(arg)) })
                    }
                    _ => Err(Error::Grammar(format!("unknown identifier `{name}`"))),
                }
            }
            other => Err(Error::Grammar(format!("unexpected token {other:?}"))),
        }
    }
}

/// A function on `(0, g]` given by closed-form pieces on
/// `(b_0, b_1], (b_1, b_2], ...` with `b_0 = 0` and the last bound `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pieces: Vec<(f64, Expr)>,
}

impl Piecewise {
    pub fn constant(value: f64, upper: f64) -> Self {
        Piecewise { pieces: vec![(upper, Expr::Const(value))] }
    }

    /// Builds a piecewise function; bounds must be strictly increasing,
    /// positive, and end at `g`.
    pub fn new(pieces: Vec<(f64, Expr)>, g: f64) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Grammar("piecewise function has no pieces".into()));
        }
        let mut prev = 0.0;
        for (ub, _) in &pieces {
            if !(ub.is_finite() && *ub > prev) {
                return Err(Error::Grammar(format!(
                    "breakpoints must be strictly increasing in (0, g]; got {ub} after {prev}"
                )));
            }
            prev = *ub;
        }
        let last = pieces.last().map(|p| p.0).unwrap_or(0.0);
        if (last - g).abs() > 1e-12 * g {
            return Err(Error::Grammar(format!("pieces cover (0, {last}] but must cover (0, g] with g = {g}")));
        }
        Ok(Piecewise { pieces })
    }

    /// Value at `x`, or `None` when `x` lies outside `(0, g]`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        if x <= 0.0 {
            return None;
        }
        self.pieces.iter().find(|(ub, _)| x <= *ub).map(|(_, e)| e.eval(x))
    }

    pub fn pieces(&self) -> &[(f64, Expr)] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.pieces.iter().map(|p| p.0)
    }

    pub fn is_structurally_constant(&self) -> bool {
        self.pieces.iter().all(|(_, e)| e.is_constant())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_arithmetic_with_precedence() {
        let e = Expr::parse("1 + 2*3 - 4/2", 0.0).unwrap();
        assert_eq!(e.eval(0.0), 5.0);
        let e = Expr::parse("-2^2", 0.0).unwrap();
        assert_eq!(e.eval(0.0), -4.0);
    }

    #[test]
    fn binds_g_and_eps() {
        let g = 0.25;
        let e = Expr::parse("2*g/eps * sqrt(2*eps^2 - g^2)", g).unwrap();
        let eps = 0.2;
        let expect = 2.0 * g / eps * (2.0 * eps * eps - g * g).sqrt();
        assert_eq!(e.eval(eps), expect);
    }

    #[test]
    fn rational_exponents() {
        let e = Expr::parse("eps^(3/2)", 0.0).unwrap();
        assert!((e.eval(4.0) - 8.0).abs() < 1e-14);
        let e = Expr::parse("eps^(-1)", 0.0).unwrap();
        assert_eq!(e.eval(4.0), 0.25);
        assert!(Expr::parse("eps^eps", 0.0).is_err());
    }

    #[test]
    fn arccos_is_clamped_at_the_endpoint() {
        let g = 2f64.sqrt() / 6.0;
        let e = Expr::parse("arccos(g/(eps*sqrt(2)))", g).unwrap();
        let at = e.eval(g / 2f64.sqrt());
        assert!(at.is_finite() && at.abs() < 1e-6);
        assert!((e.eval(g) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("foo(1)", 0.0).is_err());
        assert!(Expr::parse("1 +", 0.0).is_err());
        assert!(Expr::parse("(1", 0.0).is_err());
        assert!(Expr::parse("1 $ 2", 0.0).is_err());
    }

    #[test]
    fn constant_detection() {
        assert!(Expr::parse("pi - 8", 0.0).unwrap().is_constant());
        assert!(!Expr::parse("pi - eps", 0.0).unwrap().is_constant());
    }

    #[test]
    fn piecewise_left_closure_convention() {
        let pw = Piecewise::new(vec![(0.5, Expr::Const(1.0)), (1.0, Expr::Const(2.0))], 1.0).unwrap();
        assert_eq!(pw.eval(0.5), Some(1.0));
        assert_eq!(pw.eval(0.5000001), Some(2.0));
        assert_eq!(pw.eval(1.0), Some(2.0));
        assert_eq!(pw.eval(1.5), None);
        assert_eq!(pw.eval(0.0), None);
    }

    #[test]
    fn piecewise_must_cover_up_to_g() {
        let r = Piecewise::new(vec![(0.5, Expr::Const(1.0))], 1.0);
        assert!(matches!(r, Err(Error::Grammar(_))));
        let r = Piecewise::new(vec![(0.5, Expr::Const(1.0)), (0.4, Expr::Const(1.0))], 0.4);
        assert!(r.is_err());
    }
}
