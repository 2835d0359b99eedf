//! Dense univariate polynomials over an exact field.

use super::field::Field;
use super::multipoly::MultiPoly;
use super::rational::Rational;

/// Coefficients stored lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<F: Field> {
    c: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(a: F) -> Self {
        Self::new(vec![a])
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly { c: self.c.iter().map(F::neg).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, a: &F) -> Self {
        Self::new(self.c.iter().map(|x| x.mul(a)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn deriv(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(k, a)| a.mul(&F::from_int(k as i64))).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        self.c.iter().rev().fold(F::zero(), |acc, a| acc.mul(x).add(a))
    }

    /// `self(q)`.
    pub fn compose(&self, q: &Self) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| acc.mul(q).add(&Self::constant(a.clone())))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let inv = d.lead().inv().expect("nonzero lead");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let f = r[k].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k - dd + j] = r[k - dd + j].sub(&f.mul(b));
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(i) => self.scale(&i),
            None => Self::zero(),
        }
    }

    /// Monic gcd; `gcd(0,0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        if let Some(g) = F::poly_gcd(&self.c, &o.c) {
            return Self::new(g).monic();
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.c.iter().map(f).collect())
    }
}

impl UniPoly<Rational> {
    /// Interprets a polynomial in the single variable `v`.
    pub fn from_multi(p: &MultiPoly, v: &str) -> Option<Self> {
        if p.vars().iter().any(|x| x != v) {
            return None;
        }
        Some(Self::new(p.coeffs_in(v).iter().map(|c| c.as_constant().unwrap()).collect()))
    }

    pub fn to_multi(&self, v: &str) -> MultiPoly {
        MultiPoly::from_coeffs_in(v, &self.c.iter().map(|a| MultiPoly::constant(a.clone())).collect::<Vec<_>>())
    }
}
