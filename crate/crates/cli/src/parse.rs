//! Recursive descent parser for polynomial and operator input.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := NUMBER | NUMBER 'i' | IDENT | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals and are converted exactly. Division is
//! only by nonzero constants. In operator input `D` is the derivation and `i`
//! the imaginary unit; coefficients stand to the left of `D`.

use std::collections::BTreeMap;

use abint_core::algebra::rational::parse_rational;
use abint_core::algebra::{Field, MultiPoly, Rational, UniPoly, QI};
use abint_core::derived::DiffOperator;
use abint_core::{Error, Result};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Imag(String),
    Ident(String),
    Op(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let cs: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < cs.len() {
        let (pos, ch) = cs[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() || (ch == '.' && cs.get(k + 1).is_some_and(|c| c.1.is_ascii_digit())) {
            let start = k;
            while k < cs.len() && (cs[k].1.is_ascii_digit() || cs[k].1 == '.') {
                k += 1;
            }
            let s: String = cs[start..k].iter().map(|c| c.1).collect();
            if s.matches('.').count() > 1 {
                return Err(Error::Parse { pos, msg: format!("malformed number `{s}`") });
            }
            let imag = cs.get(k).is_some_and(|c| c.1 == 'i') && !cs.get(k + 1).is_some_and(|c| c.1.is_alphanumeric() || c.1 == '_');
            if imag {
                k += 1;
                out.push((Tok::Imag(s), pos));
            } else {
                out.push((Tok::Num(s), pos));
            }
        } else if ch.is_alphabetic() || ch == '_' {
            let start = k;
            while k < cs.len() && (cs[k].1.is_alphanumeric() || cs[k].1 == '_') {
                k += 1;
            }
            out.push((Tok::Ident(cs[start..k].iter().map(|c| c.1).collect()), pos));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Op(ch), pos));
            k += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character `{ch}`") });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    Imag(Rational),
    Var(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>, usize),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    k: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> usize {
        self.toks[self.k].1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.k += 1;
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.k += 1;
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Op('*') => {
                    self.k += 1;
                    e = Expr::Mul(Box::new(e), Box::new(self.unary()?), pos);
                }
                Tok::Op('/') => {
                    self.k += 1;
                    e = Expr::Div(Box::new(e), Box::new(self.unary()?), pos);
                }
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.k += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.k += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.k += 1;
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('.') => {
                let e: u32 = s.parse().or_else(|_| self.err("exponent too large"))?;
                self.k += 1;
                Ok(Expr::Pow(Box::new(base), e, pos))
            }
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(s) => {
                self.k += 1;
                Ok(Expr::Num(parse_rational(&s).map_err(|_| Error::Parse { pos, msg: format!("bad number `{s}`") })?))
            }
            Tok::Imag(s) => {
                self.k += 1;
                Ok(Expr::Imag(parse_rational(&s).map_err(|_| Error::Parse { pos, msg: format!("bad number `{s}`") })?))
            }
            Tok::Ident(name) => {
                self.k += 1;
                Ok(Expr::Var(name, pos))
            }
            Tok::Op('(') => {
                self.k += 1;
                let e = self.expr()?;
                if self.peek() != &Tok::Op(')') {
                    return self.err("expected `)`");
                }
                self.k += 1;
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) | Tok::Imag(s) | Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, k: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}

fn poly_eval(e: &Expr, vars: &[&str]) -> Result<MultiPoly> {
    Ok(match e {
        Expr::Num(q) => MultiPoly::constant(q.clone()),
        Expr::Imag(_) => return Err(Error::Parse { pos: 0, msg: "imaginary literal in a real polynomial".into() }),
        Expr::Var(name, pos) => {
            if name == "i" || name == "D" {
                return Err(Error::Parse { pos: *pos, msg: format!("`{name}` is reserved") });
            }
            if !vars.contains(&name.as_str()) {
                return Err(Error::UnknownVariable(name.clone()));
            }
            MultiPoly::var(name)
        }
        Expr::Add(a, b) => &poly_eval(a, vars)? + &poly_eval(b, vars)?,
        Expr::Sub(a, b) => &poly_eval(a, vars)? - &poly_eval(b, vars)?,
        Expr::Mul(a, b, _) => &poly_eval(a, vars)? * &poly_eval(b, vars)?,
        Expr::Div(a, b, pos) => {
            let d = poly_eval(b, vars)?;
            match d.as_constant() {
                Some(c) if !c.is_zero() => poly_eval(a, vars)?.scale(&c.recip()),
                Some(_) => return Err(Error::Parse { pos: *pos, msg: "division by zero".into() }),
                None => return Err(Error::Parse { pos: *pos, msg: "division by a non-constant".into() }),
            }
        }
        Expr::Neg(a) => poly_eval(a, vars)?.scale(&Rational::from_integer((-1).into())),
        Expr::Pow(a, k, _) => poly_eval(a, vars)?.pow(*k),
    })
}

/// Polynomial with rational coefficients in the declared variables.
pub fn parse_polynomial(text: &str, vars: &[&str]) -> Result<MultiPoly> {
    poly_eval(&parse_expr(text)?, vars)
}

/// Polynomial in `t` and `D` over ℚ(i), keyed by `(t exponent, D exponent)`.
type OpPoly = BTreeMap<(u32, u32), QI>;

fn op_add(a: &OpPoly, b: &OpPoly, sign: i64) -> OpPoly {
    let mut out = a.clone();
    let s = QI::real(Rational::from_integer(sign.into()));
    for (m, c) in b {
        let v = out.get(m).cloned().unwrap_or_else(QI::zero).add(&c.mul(&s));
        if v.is_zero() {
            out.remove(m);
        } else {
            out.insert(*m, v);
        }
    }
    out
}

fn op_mul(a: &OpPoly, b: &OpPoly, pos: usize) -> Result<OpPoly> {
    if a.keys().any(|m| m.1 > 0) && b.keys().any(|m| m.0 > 0) {
        return Err(Error::Parse { pos, msg: "coefficients must stand to the left of `D`".into() });
    }
    let mut out = OpPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let one = OpPoly::from([((ma.0 + mb.0, ma.1 + mb.1), ca.mul(cb))]);
            out = op_add(&out, &one, 1);
        }
    }
    Ok(out)
}

fn constant(c: QI) -> OpPoly {
    if c.is_zero() {
        OpPoly::new()
    } else {
        OpPoly::from([((0, 0), c)])
    }
}

fn op_eval(e: &Expr, var: &str, allow_d: bool) -> Result<OpPoly> {
    Ok(match e {
        Expr::Num(q) => constant(QI::real(q.clone())),
        Expr::Imag(q) => constant(QI::new(Rational::from_integer(0.into()), q.clone())),
        Expr::Var(name, pos) => match name.as_str() {
            "i" => constant(QI::i()),
            "D" if allow_d => OpPoly::from([((0, 1), QI::one())]),
            n if n == var && !var.is_empty() => OpPoly::from([((1, 0), QI::one())]),
            "D" => return Err(Error::Parse { pos: *pos, msg: "`D` is reserved".into() }),
            _ => return Err(Error::UnknownVariable(name.clone())),
        },
        Expr::Add(a, b) => op_add(&op_eval(a, var, allow_d)?, &op_eval(b, var, allow_d)?, 1),
        Expr::Sub(a, b) => op_add(&op_eval(a, var, allow_d)?, &op_eval(b, var, allow_d)?, -1),
        Expr::Mul(a, b, pos) => op_mul(&op_eval(a, var, allow_d)?, &op_eval(b, var, allow_d)?, *pos)?,
        Expr::Div(a, b, pos) => {
            let d = op_eval(b, var, allow_d)?;
            let c = match (d.len(), d.get(&(0, 0))) {
                (1, Some(c)) => c.clone(),
                (0, _) => return Err(Error::Parse { pos: *pos, msg: "division by zero".into() }),
                _ => return Err(Error::Parse { pos: *pos, msg: "division by a non-constant".into() }),
            };
            op_mul(&op_eval(a, var, allow_d)?, &constant(c.inv().expect("nonzero")), *pos)?
        }
        Expr::Neg(a) => op_add(&OpPoly::new(), &op_eval(a, var, allow_d)?, -1),
        Expr::Pow(a, k, pos) => {
            let base = op_eval(a, var, allow_d)?;
            let mut acc = constant(QI::one());
            for _ in 0..*k {
                acc = op_mul(&acc, &base, *pos)?;
            }
            acc
        }
    })
}

/// Differential operator in `t`, e.g. `(t^2 - 1)*D^2 + t*D - 1`.
pub fn parse_operator(text: &str) -> Result<DiffOperator> {
    let p = op_eval(&parse_expr(text)?, "t", true)?;
    let k = p.keys().map(|m| m.1).max().ok_or_else(|| Error::InvalidInput("zero operator".into()))?;
    let mut coeffs = Vec::new();
    for j in (0..=k).rev() {
        let deg = p.keys().filter(|m| m.1 == j).map(|m| m.0).max();
        let mut c = vec![QI::zero(); deg.map_or(0, |d| d as usize + 1)];
        for (m, v) in p.iter().filter(|(m, _)| m.1 == j) {
            c[m.0 as usize] = v.clone();
        }
        coeffs.push(UniPoly::new(c));
    }
    DiffOperator::from_polys(&coeffs)
}

/// Exact complex constant such as `1`, `-2.5`, `3i`, `1/2 - i`.
pub fn parse_qi(text: &str) -> Result<QI> {
    let p = op_eval(&parse_expr(text)?, "", false)?;
    Ok(p.get(&(0, 0)).cloned().unwrap_or_else(QI::zero))
}

pub fn parse_complex(text: &str) -> Result<Complex64> {
    Ok(parse_qi(text)?.to_c64())
}

/// Comma separated list of complex constants.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let v = parse_complex(part).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
            e => e,
        })?;
        out.push(v);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// `name=value` pairs separated by commas, values exact rationals.
pub fn parse_assignments(text: &str) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::InvalidInput(format!("expected name=value, got `{part}`")))?;
        let p = parse_polynomial(v, &[])?;
        let q = p.as_constant().ok_or_else(|| Error::InvalidInput(format!("`{v}` is not a constant")))?;
        out.insert(k.trim().to_string(), q);
    }
    Ok(out)
}
