//! Sparse multivariate polynomials over ℚ in named variables.
//!
//! Variables are kept sorted by name and only variables that occur in some
//! term are stored, so structural equality is mathematical equality.  Terms
//! are ordered graded-lexicographically; the leading term is the last one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rational_gcd, to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

/// Union of two sorted variable lists plus index maps into it.
fn merge_vars(a: &[String], b: &[String]) -> (Vec<String>, Vec<usize>, Vec<usize>) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (Vec::with_capacity(a.len()), Vec::with_capacity(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                ia.push(out.len());
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                ib.push(out.len());
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                ia.push(out.len());
                ib.push(out.len());
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    (out, ia, ib)
}

fn remap(m: &Monomial, map: &[usize], n: usize) -> Monomial {
    let mut e = vec![0u32; n];
    for (k, &x) in m.0.iter().enumerate() {
        e[map[k]] = x;
    }
    Monomial(e)
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(vec![]), c);
        }
        MultiPoly { vars: vec![], terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        MultiPoly { vars: vec![name.to_string()], terms }
    }

    /// `c · Π vars[i]^exps[i]`.
    pub fn monomial(vars: &[&str], exps: &[u32], c: Rational) -> Self {
        Self::from_terms(vars.iter().map(|s| s.to_string()).collect(), [(exps.to_vec(), c)])
    }

    /// Builds a polynomial from terms over `vars` (any order, duplicates summed).
    pub fn from_terms(vars: Vec<String>, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut idx: Vec<usize> = (0..vars.len()).collect();
        idx.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted: Vec<String> = idx.iter().map(|&i| vars[i].clone()).collect();
        assert!(sorted.windows(2).all(|w| w[0] != w[1]), "duplicate variable names");
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length mismatch");
            let m = Monomial(idx.iter().map(|&i| e[i]).collect());
            let slot = map.entry(m).or_insert_with(Rational::zero);
            *slot += c;
        }
        Self::finish(sorted, map)
    }

    /// Drops zero coefficients and unused variables.
    fn finish(vars: Vec<String>, mut terms: BTreeMap<Monomial, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let n = vars.len();
        let used: Vec<bool> = (0..n).map(|i| terms.keys().any(|m| m.0[i] > 0)).collect();
        if used.iter().all(|&u| u) {
            return MultiPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        let vars = keep.iter().map(|&i| vars[i].clone()).collect();
        let terms = terms.into_iter().map(|(m, c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c)).collect();
        MultiPoly { vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.vars.binary_search_by(|x| x.as_str().cmp(v)).is_ok()
    }

    /// Total degree; `None` stands for −∞ (zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        match self.vars.binary_search_by(|x| x.as_str().cmp(v)) {
            Ok(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            Err(_) => 0,
        }
    }

    /// Coefficient of the monomial given by `(variable, exponent)` pairs.
    pub fn coeff(&self, pairs: &[(&str, u32)]) -> Rational {
        let mut e = vec![0u32; self.vars.len()];
        for (v, k) in pairs {
            match self.vars.binary_search_by(|x| x.as_str().cmp(v)) {
                Ok(i) => e[i] = *k,
                Err(_) if *k == 0 => {}
                Err(_) => return Rational::zero(),
            }
        }
        self.terms.get(&Monomial(e)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn l1_norm(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c.abs())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn deriv(&self, v: &str) -> Self {
        let Ok(i) = self.vars.binary_search_by(|x| x.as_str().cmp(v)) else {
            return Self::zero();
        };
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] -= 1;
            out.insert(nm, c * Rational::from_integer(e.into()));
        }
        Self::finish(self.vars.clone(), out)
    }

    /// Coefficients of `self` as a polynomial in `v`, lowest power first.
    pub fn coeffs_in(&self, v: &str) -> Vec<MultiPoly> {
        let Ok(i) = self.vars.binary_search_by(|x| x.as_str().cmp(v)) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(v) as usize;
        let rest: Vec<String> = self.vars.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, s)| s.clone()).collect();
        let mut parts: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(i) as usize;
            parts[k].insert(Monomial(e), c.clone());
        }
        parts.into_iter().map(|t| Self::finish(rest.clone(), t)).collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(v: &str, coeffs: &[MultiPoly]) -> Self {
        let x = Self::var(v);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    /// Substitutes `q` for the variable `v`; identity if `v` does not occur.
    pub fn substitute(&self, v: &str, q: &MultiPoly) -> Self {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Substitutes rational constants for the listed variables.
    pub fn specialize(&self, values: &BTreeMap<String, Rational>) -> Self {
        let mut out = self.clone();
        for (v, q) in values {
            if out.contains_var(v) {
                out = out.substitute(v, &Self::constant(q.clone()));
            }
        }
        out
    }

    pub fn eval_rational(&self, values: &BTreeMap<String, Rational>) -> Result<Rational> {
        let vals: Vec<&Rational> =
            self.vars.iter().map(|v| values.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))).collect::<Result<_>>()?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(vals[k].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluates at complex values given in the order of `names`.
    pub fn eval_complex(&self, names: &[&str], values: &[Complex64]) -> Result<Complex64> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| names.iter().position(|n| n == v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<_>>()?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(to_f64(c), 0.0);
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= values[idx[k]].powu(e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Positive rational `s` with `s·self` integral and primitive.
    pub fn integer_scale(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        rational_gcd(self.terms.values()).recip()
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut s = self.integer_scale();
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            s = -s;
        }
        self.scale(&s)
    }

    /// Exact quotient `self / b`, or `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &MultiPoly) -> Option<MultiPoly> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = b.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (vars, ia, ib) = merge_vars(&self.vars, &b.vars);
        let n = vars.len();
        let mut r: BTreeMap<Monomial, Rational> = self.terms.iter().map(|(m, c)| (remap(m, &ia, n), c.clone())).collect();
        let bt: Vec<(Monomial, Rational)> = b.terms.iter().map(|(m, c)| (remap(m, &ib, n), c.clone())).collect();
        let (bm, bc) = bt.last().cloned().unwrap();
        let mut q: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = r.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !bm.divides(&rm) {
                return None;
            }
            let qm = Monomial(rm.0.iter().zip(&bm.0).map(|(a, b)| a - b).collect());
            let qc = &rc / &bc;
            for (m, c) in &bt {
                let pm = Monomial(m.0.iter().zip(&qm.0).map(|(a, b)| a + b).collect());
                let slot = r.entry(pm.clone()).or_insert_with(Rational::zero);
                *slot -= c * &qc;
                if slot.is_zero() {
                    r.remove(&pm);
                }
            }
            q.insert(qm, qc);
        }
        Some(Self::finish(vars, q))
    }

    fn binary(&self, o: &MultiPoly, sign: i32) -> MultiPoly {
        let (vars, ia, ib) = merge_vars(&self.vars, &o.vars);
        let n = vars.len();
        let mut out: BTreeMap<Monomial, Rational> = self.terms.iter().map(|(m, c)| (remap(m, &ia, n), c.clone())).collect();
        for (m, c) in &o.terms {
            let slot = out.entry(remap(m, &ib, n)).or_insert_with(Rational::zero);
            if sign > 0 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        Self::finish(vars, out)
    }

    fn product(&self, o: &MultiPoly) -> MultiPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let (vars, ia, ib) = merge_vars(&self.vars, &o.vars);
        let n = vars.len();
        let a: Vec<(Monomial, &Rational)> = self.terms.iter().map(|(m, c)| (remap(m, &ia, n), c)).collect();
        let b: Vec<(Monomial, &Rational)> = o.terms.iter().map(|(m, c)| (remap(m, &ib, n), c)).collect();
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let slot = out.entry(m).or_insert_with(Rational::zero);
                *slot += *ca * *cb;
            }
        }
        Self::finish(vars, out)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.binary(o, 1)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.binary(o, -1)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.product(o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Content of `p` viewed as a polynomial in `v` over the other variables.
fn content_in(p: &MultiPoly, v: &str) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.coeffs_in(v) {
        g = gcd(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_part(cs: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut g = MultiPoly::zero();
    for c in cs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    let g = if g.is_constant() {
        // over ℚ constants are units; keep integer coefficients small
        let all: Vec<Rational> = cs.iter().flat_map(|c| c.terms.values().cloned()).collect();
        MultiPoly::constant(rational_gcd(all.iter()))
    } else {
        g
    };
    cs.iter().map(|c| c.div_exact(&g).expect("content divides")).collect()
}

fn trim(v: &mut Vec<MultiPoly>) {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Pseudo-remainder of `f` by `g` in the main variable, up to a content factor.
fn pseudo_rem(f: &[MultiPoly], g: &[MultiPoly]) -> Vec<MultiPoly> {
    let dg = g.len() - 1;
    let lg = &g[dg];
    let mut r = f.to_vec();
    trim(&mut r);
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        let shift = dr - dg;
        for c in r.iter_mut() {
            *c = &*c * lg;
        }
        for (k, gc) in g.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &(&lead * gc);
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        if r.is_empty() {
            r.push(MultiPoly::zero());
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor, normalized to a primitive integer polynomial with
/// positive leading coefficient.  `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a == b {
        return a.normalized();
    }
    let (vars, _, _) = merge_vars(&a.vars, &b.vars);
    let v = vars[0].clone();
    let a_has = a.contains_var(&v);
    let b_has = b.contains_var(&v);
    if !a_has {
        return gcd(a, &content_in(b, &v));
    }
    if !b_has {
        return gcd(&content_in(a, &v), b);
    }
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let mut f = primitive_part(&pa.coeffs_in(&v));
    let mut g = primitive_part(&pb.coeffs_in(&v));
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        if r.len() == 1 {
            g = vec![MultiPoly::one()];
            break;
        }
        f = g;
        g = primitive_part(&r);
    }
    let g = MultiPoly::from_coeffs_in(&v, &g);
    (&c * &g).normalized()
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).normalized()
}

/// Integer content: gcd of the integer coefficients of an integral polynomial.
pub fn integer_content(p: &MultiPoly) -> BigInt {
    p.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c.numer()))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (k, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[k].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[k], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", a, factors.join("*"))?;
            }
        }
        Ok(())
    }
}
