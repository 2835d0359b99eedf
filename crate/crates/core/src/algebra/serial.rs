//! Lossless JSON shapes for exact objects: rationals as decimal strings
//! (`"p"` or `"p/q"`), polynomials as variable lists plus exponent/coefficient
//! pairs.

use serde::{Deserialize, Serialize};

use super::multipoly::MultiPoly;
use super::ratfunc::RatFunc;
use super::rational::{parse_rational, Rational};
use super::QI;
use crate::error::Result;

pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ExactPoly {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, String)>,
}

impl From<&MultiPoly> for ExactPoly {
    fn from(p: &MultiPoly) -> Self {
        ExactPoly { vars: p.vars().to_vec(), terms: p.terms().map(|(m, c)| (m.0.clone(), rational_string(c))).collect() }
    }
}

impl ExactPoly {
    pub fn to_poly(&self) -> Result<MultiPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.clone(), parse_rational(c)?));
        }
        Ok(MultiPoly::from_terms(self.vars.clone(), terms))
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ExactRatFunc {
    pub num: ExactPoly,
    pub den: ExactPoly,
}

impl From<&RatFunc> for ExactRatFunc {
    fn from(r: &RatFunc) -> Self {
        ExactRatFunc { num: r.num().into(), den: r.den().into() }
    }
}

impl ExactRatFunc {
    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        RatFunc::new(self.num.to_poly()?, self.den.to_poly()?)
    }
}

/// `[re, im]` as rational strings.
pub fn qi_strings(z: &QI) -> [String; 2] {
    [rational_string(&z.re), rational_string(&z.im)]
}

pub fn qi_from_strings(s: &[String; 2]) -> Result<QI> {
    Ok(QI::new(parse_rational(&s[0])?, parse_rational(&s[1])?))
}
