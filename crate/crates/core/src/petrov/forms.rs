use crate::algebra::{Field, RatFunc, Rational};
use crate::error::{Error, Result};

use super::poly2::Poly2;

/// Polynomial differential form in the plane; `dx₁∧dx₂` is the positive
/// orientation.
#[derive(Clone, PartialEq, Debug)]
pub enum PolyForm<F: Field> {
    /// `P dx₁ + Q dx₂`
    One { p: Poly2<F>, q: Poly2<F> },
    /// `F dx₁∧dx₂`
    Two { f: Poly2<F> },
}

impl<F: Field> PolyForm<F> {
    pub fn one(p: Poly2<F>, q: Poly2<F>) -> Self {
        PolyForm::One { p, q }
    }

    pub fn two(f: Poly2<F>) -> Self {
        PolyForm::Two { f }
    }

    /// Degree with `deg dxᵢ = 1`; `None` for the zero form.
    pub fn degree(&self) -> Option<u32> {
        match self {
            PolyForm::One { p, q } => p.degree().max(q.degree()).map(|d| d + 1),
            PolyForm::Two { f } => f.degree().map(|d| d + 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PolyForm::One { p, q } => p.is_zero() && q.is_zero(),
            PolyForm::Two { f } => f.is_zero(),
        }
    }

    /// Exterior derivative; zero for two-forms.
    pub fn d(&self) -> Self {
        match self {
            PolyForm::One { p, q } => PolyForm::Two { f: q.dx().sub(&p.dy()) },
            PolyForm::Two { .. } => PolyForm::Two { f: Poly2::zero() },
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (PolyForm::One { p, q }, PolyForm::One { p: p2, q: q2 }) => Ok(PolyForm::One { p: p.add(p2), q: q.add(q2) }),
            (PolyForm::Two { f }, PolyForm::Two { f: f2 }) => Ok(PolyForm::Two { f: f.add(f2) }),
            _ => Err(Error::InvalidInput("adding forms of different degree".into())),
        }
    }

    pub fn scale(&self, a: &F) -> Self {
        match self {
            PolyForm::One { p, q } => PolyForm::One { p: p.scale(a), q: q.scale(a) },
            PolyForm::Two { f } => PolyForm::Two { f: f.scale(a) },
        }
    }

    /// Multiplies by a function.
    pub fn times(&self, g: &Poly2<F>) -> Self {
        match self {
            PolyForm::One { p, q } => PolyForm::One { p: p.mul(g), q: q.mul(g) },
            PolyForm::Two { f } => PolyForm::Two { f: f.mul(g) },
        }
    }
}

/// Exact one-form `dF`.
pub fn exact<F: Field>(g: &Poly2<F>) -> PolyForm<F> {
    PolyForm::One { p: g.dx(), q: g.dy() }
}

/// Coefficient of `dx₁∧dx₂` in `dH∧(A dx₁ + B dx₂)`.
pub fn dh_wedge<F: Field>(h: &Poly2<F>, a: &Poly2<F>, b: &Poly2<F>) -> Poly2<F> {
    h.dx().mul(b).sub(&h.dy().mul(a))
}

/// The monomial primitive `ω_α` and its differential `μ_α`.
#[derive(Clone, PartialEq, Debug)]
pub struct BasisForm {
    pub alpha: (u32, u32),
}

impl BasisForm {
    /// `ω_α = x₁^{α₁+1} x₂^{α₂} / (α₁+1) dx₂`
    pub fn omega<F: Field>(&self) -> PolyForm<F> {
        PolyForm::One { p: Poly2::zero(), q: self.omega_q() }
    }

    /// The `dx₂` coefficient of `ω_α`.
    pub fn omega_q<F: Field>(&self) -> Poly2<F> {
        let (a1, a2) = self.alpha;
        let c = F::from_rational(&Rational::new(1.into(), (a1 as i64 + 1).into()));
        Poly2::monomial(a1 + 1, a2, c)
    }

    /// `μ_α = x^α dx₁∧dx₂`
    pub fn mu<F: Field>(&self) -> PolyForm<F> {
        PolyForm::Two { f: Poly2::monomial(self.alpha.0, self.alpha.1, F::one()) }
    }

    pub fn degree_omega(&self) -> u32 {
        self.alpha.0 + self.alpha.1 + 2
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.alpha.0, self.alpha.1)
    }
}

/// The `n²` basis forms, ordered by `(α₂, α₁)`: `00, 10, …, 01, 11, …`.
pub fn basis_forms(n: usize) -> Result<Vec<BasisForm>> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n * n);
    for a2 in 0..n as u32 {
        for a1 in 0..n as u32 {
            out.push(BasisForm { alpha: (a1, a2) });
        }
    }
    Ok(out)
}

impl PolyForm<RatFunc> {
    pub fn to_rational(&self) -> Option<PolyForm<Rational>> {
        Some(match self {
            PolyForm::One { p, q } => PolyForm::One { p: p.to_rational()?, q: q.to_rational()? },
            PolyForm::Two { f } => PolyForm::Two { f: f.to_rational()? },
        })
    }
}
