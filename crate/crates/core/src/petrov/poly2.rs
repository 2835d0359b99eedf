//! Bivariate polynomials in `x = x₁`, `y = x₂` over an exact field.

use std::collections::BTreeMap;

use crate::algebra::rational::to_f64;
use crate::algebra::{Field, MultiPoly, RatFunc, Rational};
use crate::error::{Error, Result};

pub const X: &str = "x";
pub const Y: &str = "y";

#[derive(Clone, PartialEq, Debug)]
pub struct Poly2<F: Field> {
    t: BTreeMap<(u32, u32), F>,
}

impl<F: Field> Default for Poly2<F> {
    fn default() -> Self {
        Poly2 { t: BTreeMap::new() }
    }
}

impl<F: Field> Poly2<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: F) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((i, j), c);
        }
        Poly2 { t }
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, F::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, F::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), F)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: (u32, u32), c: &F) {
        if c.is_zero() {
            return;
        }
        let v = match self.t.get(&m) {
            Some(a) => a.add(c),
            None => c.clone(),
        };
        if v.is_zero() {
            self.t.remove(&m);
        } else {
            self.t.insert(m, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &F)> {
        self.t.iter()
    }

    pub fn get(&self, i: u32, j: u32) -> F {
        self.t.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.t.keys().map(|(i, j)| i + j).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly2 { t: self.t.iter().filter(|((i, j), _)| i + j == d).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.t {
            p.add_term(*m, c);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.t {
            p.add_term(*m, &c.neg());
        }
        p
    }

    pub fn neg(&self) -> Self {
        Poly2 { t: self.t.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        Poly2 { t: self.t.iter().map(|(m, c)| (*m, c.mul(a))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for ((i, j), a) in &self.t {
            for ((k, l), b) in &o.t {
                p.add_term((i + k, j + l), &a.mul(b));
            }
        }
        p
    }

    pub fn shift(&self, di: u32, dj: u32) -> Self {
        Poly2 { t: self.t.iter().map(|((i, j), c)| ((i + di, j + dj), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx(&self) -> Self {
        Poly2 { t: self.t.iter().filter(|((i, _), _)| *i > 0).map(|((i, j), c)| ((i - 1, *j), c.mul(&F::from_int(*i as i64)))).collect() }
    }

    pub fn dy(&self) -> Self {
        Poly2 { t: self.t.iter().filter(|((_, j), _)| *j > 0).map(|((i, j), c)| ((*i, j - 1), c.mul(&F::from_int(*j as i64)))).collect() }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly2<G> {
        Poly2::from_terms(self.t.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<Poly2<G>> {
        let mut out = Poly2::zero();
        for (m, c) in &self.t {
            out.add_term(*m, &f(c)?);
        }
        Ok(out)
    }
}

impl Poly2<Rational> {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.t.iter().map(|((i, j), c)| to_f64(c) * x.powi(*i as i32) * y.powi(*j as i32)).sum()
    }

    pub fn to_multi(&self) -> MultiPoly {
        MultiPoly::from_terms(vec![X.to_string(), Y.to_string()], self.t.iter().map(|((i, j), c)| (vec![*i, *j], c.clone())))
    }

    /// Reads a polynomial in `x`, `y` with rational coefficients.
    pub fn from_multi(p: &MultiPoly) -> Result<Self> {
        let q = Poly2::<RatFunc>::from_multi(p);
        q.try_map(|c| c.as_constant().ok_or_else(|| Error::UnknownVariable(c.vars().first().cloned().unwrap_or_default())))
    }
}

impl Poly2<RatFunc> {
    /// Splits a polynomial into `x`, `y` monomials with coefficients in the
    /// remaining variables.
    pub fn from_multi(p: &MultiPoly) -> Self {
        let mut out = Poly2::zero();
        for (i, ci) in p.coeffs_in(X).into_iter().enumerate() {
            for (j, cij) in ci.coeffs_in(Y).into_iter().enumerate() {
                out.add_term((i as u32, j as u32), &RatFunc::from_poly(cij));
            }
        }
        out
    }

    pub fn to_multi(&self) -> Option<MultiPoly> {
        let mut acc = MultiPoly::zero();
        for ((i, j), c) in &self.t {
            if !c.is_polynomial() {
                return None;
            }
            let d = c.den().as_constant().unwrap();
            let m = MultiPoly::monomial(&[X, Y], &[*i, *j], d.recip());
            acc = &acc + &(&m * c.num());
        }
        Some(acc)
    }

    /// Coefficients that are constants, if all are.
    pub fn to_rational(&self) -> Option<Poly2<Rational>> {
        let mut out = Poly2::zero();
        for (m, c) in &self.t {
            out.add_term(*m, &c.as_constant()?);
        }
        Some(out)
    }
}
