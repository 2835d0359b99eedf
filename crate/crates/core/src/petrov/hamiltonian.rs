use std::collections::BTreeMap;

use crate::algebra::{gcd, DenseMatrix, Field, MultiPoly, RatFunc, Rational};
use crate::error::{Error, Result};

use super::poly2::Poly2;

/// `H(x, λ) = Σ_{|α| ≤ n+1} λ_α x^α` with nonzero principal part of degree n+1.
#[derive(Clone, PartialEq, Debug)]
pub struct Hamiltonian<F: Field> {
    n: usize,
    poly: Poly2<F>,
}

impl<F: Field> Hamiltonian<F> {
    pub fn new(poly: Poly2<F>) -> Result<Self> {
        let d = poly.degree().ok_or_else(|| Error::DegenerateHamiltonian("zero".into()))?;
        if d < 2 {
            return Err(Error::DegenerateHamiltonian(format!("degree {d} < 2")));
        }
        Ok(Hamiltonian { n: d as usize - 1, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ℓ = n²`
    pub fn ell(&self) -> usize {
        self.n * self.n
    }

    /// Number of non-principal coefficients, `½(n+3)(n+2) − 1`.
    pub fn m(&self) -> usize {
        (self.n + 3) * (self.n + 2) / 2 - 1
    }

    pub fn poly(&self) -> &Poly2<F> {
        &self.poly
    }

    pub fn principal(&self) -> Poly2<F> {
        self.poly.homogeneous_part(self.n as u32 + 1)
    }

    pub fn free_term(&self) -> F {
        self.poly.get(0, 0)
    }

    /// `H − H(0)`.
    pub fn without_free_term(&self) -> Self {
        Hamiltonian { n: self.n, poly: self.poly.sub(&Poly2::constant(self.free_term())) }
    }
}

impl Hamiltonian<RatFunc> {
    /// Reads `H` from a polynomial in `x`, `y`; other variables are parameters.
    pub fn from_multi(p: &MultiPoly) -> Result<Self> {
        Self::new(Poly2::<RatFunc>::from_multi(p))
    }

    /// Parameter names occurring in the coefficients.
    pub fn parameters(&self) -> Vec<String> {
        let mut v: Vec<String> = self.poly.terms().flat_map(|(_, c)| c.vars()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn to_rational(&self) -> Option<Hamiltonian<Rational>> {
        Some(Hamiltonian { n: self.n, poly: self.poly.to_rational()? })
    }

    pub fn specialize(&self, values: &BTreeMap<String, Rational>) -> Result<Hamiltonian<RatFunc>> {
        Hamiltonian::new(self.poly.try_map(|c| c.specialize(values))?)
    }
}

impl Hamiltonian<Rational> {
    pub fn lift(&self) -> Hamiltonian<RatFunc> {
        Hamiltonian { n: self.n, poly: self.poly.map(|c| RatFunc::constant(c.clone())) }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.poly.eval(x, y)
    }
}

/// Whether `Ĥ` is square-free and the monomials `x^α`, `0 ≤ αᵢ ≤ n−1`, form a
/// basis of `ℚ[x]/⟨Ĥ_{x₁}, Ĥ_{x₂}⟩`, checked degree by degree.
pub fn is_basis_regular(h: &Hamiltonian<Rational>) -> bool {
    let n = h.n() as u32;
    let hh = h.principal();
    let hx = hh.dx();
    let hy = hh.dy();
    let g = gcd(&hx.to_multi(), &hy.to_multi());
    if !g.is_constant() {
        return false;
    }
    for j in 0..=2 * n - 1 {
        // columns: monomials x^a y^(j-a), a = 0..=j
        let mut ideal: Vec<Vec<Rational>> = Vec::new();
        if j >= n {
            for a in 0..=(j - n) {
                let m = Poly2::monomial(a, j - n - a, Rational::one());
                for gen in [&hx, &hy] {
                    let p = gen.mul(&m);
                    ideal.push((0..=j).map(|k| p.get(k, j - k)).collect());
                }
            }
        }
        let basis: Vec<Vec<Rational>> = (0..=j)
            .filter(|&a| a < n && j - a < n)
            .map(|a| (0..=j).map(|k| if k == a { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let r_ideal = if ideal.is_empty() { 0 } else { DenseMatrix::from_rows(ideal.clone()).rank() };
        let all: Vec<Vec<Rational>> = ideal.into_iter().chain(basis.iter().cloned()).collect();
        let r_all = if all.is_empty() { 0 } else { DenseMatrix::from_rows(all).rank() };
        if r_all != j as usize + 1 || r_ideal + basis.len() != j as usize + 1 {
            return false;
        }
    }
    true
}
