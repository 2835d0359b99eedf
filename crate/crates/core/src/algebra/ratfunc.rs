//! Rational functions over ℚ in canonical form.
//!
//! Canonical form: `num/den` coprime, both with integer coefficients whose
//! joint content is 1, and the leading (grlex) coefficient of `den` positive.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::multipoly::{gcd, MultiPoly};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

fn lcm_denominators(p: &MultiPoly, acc: BigInt) -> BigInt {
    p.terms().fold(acc, |a, (_, c)| a.lcm(c.denom()))
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::canonical(p, MultiPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(MultiPoly::var(name))
    }

    fn canonical(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: MultiPoly::one() };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let l = lcm_denominators(&den, lcm_denominators(&num, BigInt::one()));
        let content = num.terms().chain(den.terms()).fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c.numer() * (&l / c.denom()))));
        let mut s = Rational::new(l, content);
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            s = -s;
        }
        RatFunc { num: num.scale(&s), den: den.scale(&s) }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// Variables occurring in numerator or denominator.
    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.num.vars().iter().chain(self.den.vars()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Substitutes rational constants; fails if the denominator vanishes.
    pub fn specialize(&self, values: &BTreeMap<String, Rational>) -> Result<Self> {
        let den = self.den.specialize(values);
        if den.is_zero() {
            return Err(Error::InvalidInput("denominator vanishes at the given values".into()));
        }
        Ok(Self::canonical(self.num.specialize(values), den))
    }

    /// Substitutes a polynomial for a variable.
    pub fn substitute(&self, v: &str, q: &MultiPoly) -> Result<Self> {
        let den = self.den.substitute(v, q);
        if den.is_zero() {
            return Err(Error::InvalidInput(format!("denominator vanishes after substituting {v}")));
        }
        Ok(Self::canonical(self.num.substitute(v, q), den))
    }

    pub fn deriv(&self, v: &str) -> Self {
        let n = &(&self.num.deriv(v) * &self.den) - &(&self.num * &self.den.deriv(v));
        Self::canonical(n, &self.den * &self.den)
    }

    pub fn eval_complex(&self, names: &[&str], values: &[Complex64]) -> Result<Complex64> {
        Ok(self.num.eval_complex(names, values)? / self.den.eval_complex(names, values)?)
    }

    pub fn eval_rational(&self, values: &BTreeMap<String, Rational>) -> Result<Rational> {
        let d = self.den.eval_rational(values)?;
        if Zero::is_zero(&d) {
            return Err(Error::InvalidInput("pole".into()));
        }
        Ok(self.num.eval_rational(values)? / d)
    }
}

/// ‖num‖ + ‖den‖ of the canonical representation: an upper bound on the
/// minimum over all representations.
pub fn size_of(r: &RatFunc) -> Rational {
    r.num.l1_norm() + r.den.l1_norm()
}

/// ‖P‖ + ‖Q‖ for the given (not canonicalized) representation `P/Q`, after
/// clearing coefficient denominators and the joint integer content.
pub fn representation_size(num: &MultiPoly, den: &MultiPoly) -> Rational {
    let l = lcm_denominators(den, lcm_denominators(num, BigInt::one()));
    let content = num.terms().chain(den.terms()).fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c.numer() * (&l / c.denom()))));
    if content.is_zero() {
        return <Rational as Zero>::zero();
    }
    let s = Rational::new(l, content);
    num.scale(&s).l1_norm() + den.scale(&s).l1_norm()
}

pub fn l1_norm(p: &MultiPoly) -> Rational {
    p.l1_norm()
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc { num: MultiPoly::zero(), den: MultiPoly::one() }
    }
    fn one() -> Self {
        RatFunc { num: MultiPoly::one(), den: MultiPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::canonical(&self.num + &o.num, self.den.clone());
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::canonical(n, &self.den * &o.den)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        Self::canonical(&self.num * &o.num, &self.den * &o.den)
    }
    fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::canonical(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }
    fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map(|d| One::is_one(&d)).unwrap_or(false) {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MultiPoly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                format!("{p}")
            }
        };
        let den = self.den.to_string();
        if den.chars().all(|c| c.is_alphanumeric() || c == '^' || c == '_') {
            write!(f, "{}/{}", wrap(&self.num), den)
        } else {
            write!(f, "{}/({})", wrap(&self.num), den)
        }
    }
}
