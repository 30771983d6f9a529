use std::f64::consts::PI;
use std::fmt;

use super::{ApproxComplex, Rational};
use crate::{Error, Result};

/// Parse tree of a scalar literal.
///
/// Grammar:
///
/// ```text
/// expr     := term { ("+"|"-") term }
/// term     := factor { ("*"|"/") factor }
/// factor   := atom [ "^" ["-"] integer ]
/// atom     := rational | "sqrt" "(" rational ")" | "zeta" "(" integer "," integer ")"
///           | "(" expr ")" | "-" atom
/// rational := integer [ "/" positive-integer ]
/// ```
///
/// A literal `a/b` between two integers is read as one rational atom, so
/// `1/2^2` is `(1/2)^2`. `zeta(n,k)` denotes `exp(2 pi i k / n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Rational(Rational),
    Sqrt(Rational),
    Zeta { n: i64, k: i64 },
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
    Pow(Box<ScalarExpr>, i32),
}

impl ScalarExpr {
    pub fn eval(&self) -> Result<ApproxComplex> {
        let v = match self {
            ScalarExpr::Rational(r) => ApproxComplex::new(super::rational_to_f64(r), 0.0),
            ScalarExpr::Sqrt(r) => {
                if *r.numer() <= 0 {
                    return Err(Error::SqrtNonPositive(r.to_string()));
                }
                ApproxComplex::new(super::rational_to_f64(r).sqrt(), 0.0)
            }
            ScalarExpr::Zeta { n, k } => root_of_unity(*n, *k)?,
            ScalarExpr::Neg(a) => -a.eval()?,
            ScalarExpr::Add(a, b) => a.eval()? + b.eval()?,
            ScalarExpr::Sub(a, b) => a.eval()? - b.eval()?,
            ScalarExpr::Mul(a, b) => a.eval()? * b.eval()?,
            ScalarExpr::Div(a, b) => {
                let den = b.eval()?;
                if den.re == 0.0 && den.im == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                a.eval()? / den
            }
            ScalarExpr::Pow(a, e) => {
                let base = a.eval()?;
                if *e < 0 && base.re == 0.0 && base.im == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                base.powi(*e)
            }
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow)
        }
    }
}

fn root_of_unity(n: i64, k: i64) -> Result<ApproxComplex> {
    if n < 1 {
        return Err(Error::Malformed(format!("zeta order must be >= 1, got {n}")));
    }
    let k = k.rem_euclid(n);
    // exact values on the axes
    if (4 * k) % n == 0 {
        return Ok(match (4 * k) / n {
            0 => ApproxComplex::new(1.0, 0.0),
            1 => ApproxComplex::new(0.0, 1.0),
            2 => ApproxComplex::new(-1.0, 0.0),
            _ => ApproxComplex::new(0.0, -1.0),
        });
    }
    let angle = 2.0 * PI * k as f64 / n as f64;
    Ok(ApproxComplex::new(angle.cos(), angle.sin()))
}

/// Writes `r` as a literal. Fractions and negatives are parenthesized so
/// that a neighbouring `/` or `^` cannot regroup them; inside `sqrt(...)`
/// the grammar wants the bare form.
fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>, bare: bool) -> fmt::Result {
    let (n, d) = (*r.numer(), *r.denom());
    let sign = if n < 0 { "-" } else { "" };
    let body = if d == 1 {
        format!("{sign}{}", n.unsigned_abs())
    } else {
        format!("{sign}{}/{}", n.unsigned_abs(), d)
    };
    if bare || (d == 1 && n >= 0) {
        write!(f, "{body}")
    } else {
        write!(f, "({body})")
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Rational(r) => fmt_rational(r, f, false),
            ScalarExpr::Sqrt(r) => {
                write!(f, "sqrt(")?;
                fmt_rational(r, f, true)?;
                write!(f, ")")
            }
            ScalarExpr::Zeta { n, k } => write!(f, "zeta({n},{k})"),
            ScalarExpr::Neg(a) => write!(f, "(-{a})"),
            ScalarExpr::Add(a, b) => write!(f, "({a} + {b})"),
            ScalarExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            ScalarExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            ScalarExpr::Div(a, b) => write!(f, "({a} / {b})"),
            ScalarExpr::Pow(a, e) => write!(f, "(({a})^{e})"),
        }
    }
}

pub fn parse_scalar(text: &str) -> Result<ScalarExpr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = ScalarExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = ScalarExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = ScalarExpr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            let e = if neg { -e } else { e };
            let e = i32::try_from(e).map_err(|_| self.error("exponent out of range"))?;
            return Ok(ScalarExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(ScalarExpr::Neg(Box::new(self.atom()?)))
            }
            Some(c) if c.is_ascii_digit() => Ok(ScalarExpr::Rational(self.rational_literal()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match word {
                    "sqrt" => {
                        self.expect(b'(')?;
                        let neg = self.eat(b'-');
                        let r = self.rational_literal()?;
                        self.expect(b')')?;
                        let r = if neg { -r } else { r };
                        if *r.numer() <= 0 {
                            return Err(Error::SqrtNonPositive(r.to_string()));
                        }
                        Ok(ScalarExpr::Sqrt(r))
                    }
                    "zeta" => {
                        self.expect(b'(')?;
                        let n = self.signed_integer()?;
                        self.expect(b',')?;
                        let k = self.signed_integer()?;
                        self.expect(b')')?;
                        if n < 1 {
                            return Err(Error::Syntax {
                                pos: start,
                                msg: format!("zeta order must be >= 1, got {n}"),
                            });
                        }
                        Ok(ScalarExpr::Zeta { n, k })
                    }
                    _ => Err(Error::Syntax {
                        pos: start,
                        msg: format!("unknown identifier '{word}'"),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        s.parse::<i64>().map_err(|_| Error::Syntax {
            pos: start,
            msg: "integer literal out of range".into(),
        })
    }

    fn signed_integer(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let v = self.integer()?;
        Ok(if neg { -v } else { v })
    }

    /// `integer [ "/" positive-integer ]`; the slash is only consumed when an
    /// integer follows it.
    fn rational_literal(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        let save = self.pos;
        if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let den = self.integer()?;
            if den == 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(Rational::new(num, den));
        }
        self.pos = save;
        Ok(Rational::from_integer(num))
    }
}

/// Renders a numerical value as a scalar literal that evaluates back to it.
///
/// Small-denominator rationals and square roots of such rationals are
/// recognized; anything else becomes a rational with denominator 10^15.
/// The imaginary part is attached as a multiple of `zeta(4,1)`.
pub fn literal_for(z: ApproxComplex) -> String {
    let re = real_literal(z.re);
    if z.im.abs() < 1e-15 {
        return re;
    }
    let im = real_literal(z.im);
    if z.re.abs() < 1e-15 {
        format!("({im})*zeta(4,1)")
    } else {
        format!("{re} + ({im})*zeta(4,1)")
    }
}

fn real_literal(x: f64) -> String {
    if x.abs() < 1e-15 {
        return "0".into();
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let a = x.abs();
    if let Some((p, q)) = small_rational(a) {
        return if q == 1 {
            format!("{sign}{p}")
        } else {
            format!("{sign}{p}/{q}")
        };
    }
    if let Some((p, q)) = small_rational(a * a) {
        return if q == 1 {
            format!("{sign}sqrt({p})")
        } else {
            format!("{sign}sqrt({p}/{q})")
        };
    }
    let scaled = (a * 1e15).round() as i64;
    let r = Rational::new(scaled, 1_000_000_000_000_000);
    format!("{sign}{}/{}", r.numer(), r.denom())
}

/// Continued-fraction search for p/q with q <= 10^4 matching `x` to 1e-13.
fn small_rational(x: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > 10_000 {
            return None;
        }
        if (h2 as f64 / k2 as f64 - x).abs() <= 1e-13 * x.max(1.0) {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac < 1e-15 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}
