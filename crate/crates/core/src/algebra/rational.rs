//! Exact rationals backed by `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // huge numerator/denominator: shift both down to fit in f64
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900);
    let n = (n >> shift as usize).to_f64().unwrap_or(0.0);
    let d = (d >> shift as usize).to_f64().unwrap_or(1.0);
    n / d
}

/// Exact rational value of a finite double.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// Simplest rational within `tol` of `v` (continued fraction convergents).
pub fn approximate(v: f64, tol: f64) -> Rational {
    if !v.is_finite() {
        return Rational::zero();
    }
    let mut x = v;
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = x.floor();
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let cur = Rational::new(p1.clone(), q1.clone());
        if (to_f64(&cur) - v).abs() <= tol {
            return cur;
        }
        let frac = x - a;
        if frac.abs() < 1e-300 {
            return cur;
        }
        x = 1.0 / frac;
    }
    Rational::new(p1, q1)
}

/// Parse `"3"`, `"-2/7"` or a decimal such as `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("invalid rational literal `{s}`") };
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        if digits.is_empty() {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// gcd of numerators over lcm of denominators; zero for an empty list.
pub fn rational_gcd<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut n = BigInt::zero();
    let mut d = BigInt::one();
    for q in it {
        n = n.gcd(q.numer());
        d = d.lcm(q.denom());
    }
    Rational::new(n, d)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
