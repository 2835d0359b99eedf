//! Univariate rational functions `F(t)` with coprime parts and monic denominator.

use super::field::Field;
use super::rational::Rational;
use super::unipoly::UniPoly;

#[derive(Clone, PartialEq, Debug)]
pub struct UniRat<F: Field> {
    num: UniPoly<F>,
    den: UniPoly<F>,
}

impl<F: Field> UniRat<F> {
    pub fn new(num: UniPoly<F>, den: UniPoly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return UniRat { num, den: UniPoly::one() };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let l = d.lead().inv().expect("nonzero");
        n = n.scale(&l);
        d = d.scale(&l);
        UniRat { num: n, den: d }
    }

    pub fn from_poly(p: UniPoly<F>) -> Self {
        UniRat { num: p, den: UniPoly::one() }
    }

    pub fn num(&self) -> &UniPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<F> {
        &self.den
    }

    pub fn deriv(&self) -> Self {
        let n = self.num.deriv().mul(&self.den).sub(&self.num.mul(&self.den.deriv()));
        Self::new(n, self.den.mul(&self.den))
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        self.num.eval(x).div(&self.den.eval(x))
    }
}

impl<F: Field> Field for UniRat<F> {
    fn zero() -> Self {
        UniRat { num: UniPoly::zero(), den: UniPoly::one() }
    }
    fn one() -> Self {
        UniRat { num: UniPoly::one(), den: UniPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        UniRat { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::from_poly(UniPoly::constant(F::from_rational(q)))
    }
}
