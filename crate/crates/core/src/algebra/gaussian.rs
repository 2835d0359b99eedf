//! Gaussian rationals ℚ(i).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Signed;

use super::field::Field;
use super::rational::{to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QI {
    pub re: Rational,
    pub im: Rational,
}

impl QI {
    pub fn new(re: Rational, im: Rational) -> Self {
        QI { re, im }
    }

    pub fn real(re: Rational) -> Self {
        QI { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        QI { re: Rational::zero(), im: Field::one() }
    }

    pub fn conj(&self) -> Self {
        QI { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Field for QI {
    fn zero() -> Self {
        QI::real(Rational::zero())
    }
    fn one() -> Self {
        QI::real(<Rational as Field>::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QI { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        QI { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        QI { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn neg(&self) -> Self {
        QI { re: -&self.re, im: -&self.im }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(QI { re: &self.re / &n, im: -&self.im / &n })
    }
    fn from_rational(q: &Rational) -> Self {
        QI::real(q.clone())
    }
    fn poly_gcd(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        Some(gaussian_poly_gcd(a, b))
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            _ => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({} {} {}*i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// Gaussian integer as `(re, im)`.
type ZI = (BigInt, BigInt);

fn zi_mul(a: &ZI, b: &ZI) -> ZI {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn zi_is_zero(a: &ZI) -> bool {
    a.0.sign() == num_bigint::Sign::NoSign && a.1.sign() == num_bigint::Sign::NoSign
}

fn to_zi(c: &[QI]) -> Vec<ZI> {
    let l = c.iter().fold(BigInt::from(1), |l, z| l.lcm(z.re.denom()).lcm(z.im.denom()));
    c.iter().map(|z| ((z.re.numer() * (&l / z.re.denom())), (z.im.numer() * (&l / z.im.denom())))).collect()
}

fn trim(v: &mut Vec<ZI>) {
    while v.last().is_some_and(zi_is_zero) {
        v.pop();
    }
}

/// Nearest-integer quotient `round(n / d)` for `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (&two * n + d).div_floor(&(&two * d))
}

fn zi_gcd(a: &ZI, b: &ZI) -> ZI {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !zi_is_zero(&b) {
        // q = round(a / b) = round(a·b̄ / N(b))
        let n = &b.0 * &b.0 + &b.1 * &b.1;
        let num = zi_mul(&a, &(b.0.clone(), -&b.1));
        let q = (round_div(&num.0, &n), round_div(&num.1, &n));
        let qb = zi_mul(&q, &b);
        let r = (&a.0 - qb.0, &a.1 - qb.1);
        a = b;
        b = r;
    }
    a
}

/// Divides `a` by the Gaussian integer `d`, which must divide it exactly.
fn zi_div_exact(a: &ZI, d: &ZI) -> ZI {
    let n = &d.0 * &d.0 + &d.1 * &d.1;
    let num = zi_mul(a, &(d.0.clone(), -&d.1));
    (num.0 / &n, num.1 / &n)
}

/// Divides out the content in ℤ[i].
fn primitive(v: &mut [ZI]) {
    let mut g: ZI = (BigInt::from(0), BigInt::from(0));
    for z in v.iter() {
        g = zi_gcd(&g, z);
        if g.0.abs() + g.1.abs() == BigInt::from(1) {
            return;
        }
    }
    if zi_is_zero(&g) {
        return;
    }
    for z in v.iter_mut() {
        *z = zi_div_exact(z, &g);
    }
}

/// Pseudo-remainder of `a` by `b` up to a unit, with contents removed.
fn prem(a: &[ZI], b: &[ZI]) -> Vec<ZI> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for x in r.iter_mut() {
            *x = zi_mul(x, &lb);
        }
        for (j, y) in b.iter().enumerate() {
            let t = zi_mul(&lr, y);
            let e = &mut r[shift + j];
            e.0 -= t.0;
            e.1 -= t.1;
        }
        trim(&mut r);
        primitive(&mut r);
    }
    r
}

/// Monic gcd over ℚ(i) by the primitive pseudo-remainder sequence in ℤ[i][t].
pub(crate) fn gaussian_poly_gcd(a: &[QI], b: &[QI]) -> Vec<QI> {
    let (mut a, mut b) = (to_zi(a), to_zi(b));
    trim(&mut a);
    trim(&mut b);
    primitive(&mut a);
    primitive(&mut b);
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = r;
    }
    let Some(l) = a.last() else { return Vec::new() };
    let l = QI::new(Rational::from_integer(l.0.clone()), Rational::from_integer(l.1.clone())).inv().unwrap();
    a.iter().map(|z| QI::new(Rational::from_integer(z.0.clone()), Rational::from_integer(z.1.clone())).mul(&l)).collect()
}
