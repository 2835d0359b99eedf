use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;

/// The field operations shared by the exact scalar types.
///
/// Methods take references so big-number types are not cloned needlessly.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }
    /// Polynomial gcd (coefficients lowest degree first) when the type has a
    /// faster route than Euclid over the field.
    fn poly_gcd(_a: &[Self], _b: &[Self]) -> Option<Vec<Self>> {
        None
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn poly_gcd(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        let lift = |c: &[Self]| c.iter().map(|q| super::gaussian::QI::real(q.clone())).collect::<Vec<_>>();
        Some(super::gaussian::gaussian_poly_gcd(&lift(a), &lift(b)).into_iter().map(|z| z.re).collect())
    }
}
