//! Picard–Fuchs Pfaffian systems of the period matrix of the monomial forms
//! `ω_α` and their restriction to a pencil `{H = t}`.
//!
//! Periods are taken over cycles of `{H = 0}` with the free term of `H`
//! replaced by the symbol [`FREE`]. With `H₁ = H − H(0)` and the constant
//! division `H₁μ_α = Σ_β C_{αβ} μ_β + dH∧η_α`, the matrix `P⋆₀ = C + λ₀₀E`
//! satisfies `P⋆₀ ∂X/∂λ_s = P^s₀ X`, where `P^s₀(λ₀₀) = Q^s(−λ₀₀)` and `Q^s`
//! holds the Petrov coefficients of `x^s η_α` with respect to `H₁`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::to_f64;
use crate::algebra::serial::rational_string;
use crate::algebra::{
    lcm, poly_roots, size_of, solve_linear, DenseMatrix, ExactPoly, ExactRatFunc, Field, FieldMatrix, MultiPoly, RatFunc, Rational, UniPoly,
};
use crate::error::{Error, Result};
use crate::petrov::{basis_forms, divide_1form, divide_2form_with, BasisForm, DivisionOptions, Hamiltonian, Remainder};

/// Symbol standing for the free term `λ₀₀` in derived matrices.
pub const FREE: &str = "l00";
/// Pencil parameter.
pub const T: &str = "t";

#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    pub n: usize,
    pub ell: usize,
    /// The input Hamiltonian; its free term is what [`FREE`] takes on the pencil.
    pub hamiltonian: Hamiltonian<RatFunc>,
    pub basis: Vec<BasisForm>,
    pub pstar0: FieldMatrix,
    pub ps0: BTreeMap<(u32, u32), FieldMatrix>,
    /// Largest degree slack any division needed (0 for regular `H`).
    pub slack: u32,
}

#[derive(Clone, Debug)]
pub struct LinearODESystem {
    pub a: FieldMatrix,
    /// lcm of the entry denominators, primitive over ℤ.
    pub denominator: MultiPoly,
    /// Complex roots of `denominator` when it is univariate in `t`.
    pub singular_points: Vec<Complex64>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SizeReport {
    pub d: u32,
    pub ell: usize,
    pub m: usize,
    /// Largest entry size.
    pub s: String,
    pub total_size: String,
}

struct Core<F: Field> {
    c: Vec<Vec<F>>,
    q: BTreeMap<(u32, u32), Vec<Vec<UniPoly<F>>>>,
    slack: u32,
}

fn derive_core<F: Field>(h1: &Hamiltonian<F>) -> Result<Core<F>> {
    let basis = basis_forms(h1.n())?;
    let opts = DivisionOptions { p_degree_cap: Some(0), prefer_remainder: true, max_slack: 4 };
    let two: Vec<_> =
        basis.par_iter().map(|b| divide_2form_with(&h1.poly().shift(b.alpha.0, b.alpha.1), h1, &opts)).collect::<Result<Vec<_>>>()?;
    let mut slack = 0;
    let mut c = Vec::new();
    let mut etas = Vec::new();
    for dec in two {
        slack = slack.max(dec.slack);
        c.push(dec.p.iter().map(|p| p.coeff(0)).collect::<Vec<F>>());
        let Remainder::TwoForm { a, b } = dec.remainder else { unreachable!() };
        etas.push((a, b));
    }
    let jobs: Vec<((u32, u32), usize)> = basis.iter().flat_map(|s| (0..basis.len()).map(move |k| (s.alpha, k))).collect();
    let one: Vec<_> = jobs
        .par_iter()
        .map(|&(s, k)| {
            let (a, b) = &etas[k];
            divide_1form(&a.shift(s.0, s.1), &b.shift(s.0, s.1), h1)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut q: BTreeMap<(u32, u32), Vec<Vec<UniPoly<F>>>> = BTreeMap::new();
    for (&(s, _), dec) in jobs.iter().zip(one) {
        slack = slack.max(dec.slack);
        q.entry(s).or_default().push(dec.p);
    }
    Ok(Core { c, q, slack })
}

fn assemble<F: Field>(h: &Hamiltonian<RatFunc>, core: Core<F>, lift: impl Fn(&F) -> RatFunc) -> Result<PfaffianSystem> {
    let n = h.n();
    let ell = n * n;
    let basis = basis_forms(n)?;
    let l = RatFunc::var(FREE);
    let pstar0 = DenseMatrix::from_fn(ell, ell, |i, j| {
        let c = lift(&core.c[i][j]);
        if i == j {
            c.add(&l)
        } else {
            c
        }
    });
    let minus_l = l.neg();
    let mut ps0 = BTreeMap::new();
    for (s, rows) in core.q {
        let m = DenseMatrix::from_fn(ell, ell, |i, j| rows[i][j].map(&lift).eval(&minus_l));
        ps0.insert(s, m);
    }
    if pstar0.rank() < ell {
        return Err(Error::DegenerateBasis);
    }
    Ok(PfaffianSystem { n, ell, hamiltonian: h.clone(), basis, pstar0, ps0, slack: core.slack })
}

/// Derives `P⋆₀` and `P^s₀` for every basis index `s`. Non-free coefficients of
/// `H` may be rational numbers or polynomials in named parameters.
pub fn derive_pfaffian(h: &Hamiltonian<RatFunc>) -> Result<PfaffianSystem> {
    for p in h.parameters() {
        if p == FREE || p == T {
            return Err(Error::InvalidInput(format!("parameter name `{p}` is reserved")));
        }
    }
    let h1 = h.without_free_term();
    match h1.to_rational() {
        Some(hq) => assemble(h, derive_core(&hq)?, |c| RatFunc::constant(c.clone())),
        None => assemble(h, derive_core(&h1)?, |c| c.clone()),
    }
}

impl PfaffianSystem {
    /// Parameters of the matrices other than [`FREE`].
    pub fn parameters(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .pstar0
            .entries()
            .iter()
            .chain(self.ps0.values().flat_map(|m| m.entries()))
            .flat_map(|e| e.vars())
            .filter(|v| v != FREE)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// `P⋆₀` and `P^s₀` at numeric parameter values (including [`FREE`]).
    pub fn numeric(&self, names: &[&str], values: &[f64]) -> Result<(DMatrix<f64>, BTreeMap<(u32, u32), DMatrix<f64>>)> {
        let vals: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let ev = |m: &FieldMatrix| -> Result<DMatrix<f64>> {
            let mut out = DMatrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out[(i, j)] = m.get(i, j).eval_complex(names, &vals)?.re;
                }
            }
            Ok(out)
        };
        let p = ev(&self.pstar0)?;
        let mut s = BTreeMap::new();
        for (k, m) in &self.ps0 {
            s.insert(*k, ev(m)?);
        }
        Ok((p, s))
    }
}

/// Puts `λ₀₀ = f₀(λ̂) − t`, where `f₀` is the free term of `H`, and solves
/// `P⋆₀ A = −P^{00}₀` over the field of `t` (and any remaining parameters).
pub fn restrict_to_pencil(sys: &PfaffianSystem, lambda_hat: &BTreeMap<String, Rational>) -> Result<LinearODESystem> {
    // a vanishing denominator means the generic system degenerates along the whole line
    let in_locus = |e: Error| match e {
        Error::InvalidInput(msg) => Error::LineInLocus(msg),
        e => e,
    };
    let spec = |m: &FieldMatrix| m.try_map(|e| e.specialize(lambda_hat)).map_err(in_locus);
    let f0 = sys.hamiltonian.free_term().specialize(lambda_hat)?;
    if !f0.is_polynomial() {
        return Err(Error::Unsupported("free term with a denominator".into()));
    }
    let f0 = &f0.num().clone() * &MultiPoly::constant(f0.den().as_constant().unwrap().recip());
    let sub = &f0 - &MultiPoly::var(T);
    let on_line = |m: &FieldMatrix| m.try_map(|e| e.substitute(FREE, &sub)).map_err(in_locus);
    let pstar = on_line(&spec(&sys.pstar0)?)?;
    let p00 = on_line(&spec(&sys.ps0[&(0, 0)])?)?;
    if pstar.rank() < sys.ell {
        return Err(Error::LineInLocus("P⋆₀ is singular on the whole line".into()));
    }
    let mut a = DenseMatrix::zeros(sys.ell, sys.ell);
    for j in 0..sys.ell {
        let rhs: Vec<RatFunc> = p00.column(j).iter().map(|e| e.neg()).collect();
        let x = solve_linear(&pstar, &rhs)?;
        for (i, v) in x.into_iter().enumerate() {
            a.set(i, j, v);
        }
    }
    LinearODESystem::new(a)
}

impl LinearODESystem {
    pub fn new(a: FieldMatrix) -> Result<Self> {
        if a.rows() != a.cols() || a.rows() == 0 {
            return Err(Error::InvalidInput("system matrix must be square and nonempty".into()));
        }
        let mut den = MultiPoly::one();
        for e in a.entries() {
            den = lcm(&den, e.den());
        }
        let den = den.normalized();
        let singular_points = univariate_roots(&den);
        Ok(LinearODESystem { a, denominator: den, singular_points })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Whether every entry is a rational function of `t` alone.
    pub fn is_univariate(&self) -> bool {
        self.a.entries().iter().all(|e| e.vars().iter().all(|v| v == T))
    }

    pub fn eval(&self, t: Complex64) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.a.get(i, j).eval_complex(&[T], &[t])?;
            }
        }
        Ok(out)
    }
}

/// Numeric roots of a polynomial in `t` only; empty otherwise.
pub fn univariate_roots(p: &MultiPoly) -> Vec<Complex64> {
    if p.vars().iter().any(|v| v != T) || p.is_constant() {
        return Vec::new();
    }
    let cs: Vec<Complex64> = p.coeffs_in(T).iter().map(|c| Complex64::new(to_f64(&c.as_constant().unwrap()), 0.0)).collect();
    let mut r = poly_roots(&cs);
    r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    r
}

pub fn size_report(sys: &PfaffianSystem) -> SizeReport {
    assert_eq!(sys.ell, sys.n * sys.n);
    let mut d = 0;
    let mut s = Rational::from_integer(0.into());
    let mut total = s.clone();
    for e in sys.pstar0.entries().iter().chain(sys.ps0.values().flat_map(|m| m.entries())) {
        d = d.max(e.num().degree().unwrap_or(0)).max(e.den().degree().unwrap_or(0));
        let z = size_of(e);
        total += &z;
        if z > s {
            s = z;
        }
    }
    SizeReport { d, ell: sys.ell, m: sys.hamiltonian.m(), s: rational_string(&s), total_size: rational_string(&total) }
}

pub const PFAFFIAN_SCHEMA: &str = "abint/pfaffian-system/v1";
pub const ODE_SCHEMA: &str = "abint/linear-ode-system/v1";

fn matrix_json(m: &FieldMatrix) -> Vec<Vec<ExactRatFunc>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ExactRatFunc::from).collect()).collect()
}

fn matrix_from_json(rows: &[Vec<ExactRatFunc>]) -> Result<FieldMatrix> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(r.iter().map(|e| e.to_ratfunc()).collect::<Result<Vec<_>>>()?);
    }
    if out.iter().any(|r| r.len() != out.len()) {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    Ok(DenseMatrix::from_rows(out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PsJson {
    pub s: [u32; 2],
    pub matrix: Vec<Vec<ExactRatFunc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PfaffianSystemJson {
    pub schema: String,
    pub n: usize,
    pub ell: usize,
    pub free_symbol: String,
    pub hamiltonian: ExactPoly,
    pub basis: Vec<[u32; 2]>,
    pub pstar0: Vec<Vec<ExactRatFunc>>,
    pub ps0: Vec<PsJson>,
    pub slack: u32,
    pub size: SizeReport,
}

impl PfaffianSystem {
    pub fn to_json(&self) -> PfaffianSystemJson {
        let hm = self.hamiltonian.poly().to_multi().expect("polynomial coefficients");
        PfaffianSystemJson {
            schema: PFAFFIAN_SCHEMA.into(),
            n: self.n,
            ell: self.ell,
            free_symbol: FREE.into(),
            hamiltonian: (&hm).into(),
            basis: self.basis.iter().map(|b| [b.alpha.0, b.alpha.1]).collect(),
            pstar0: matrix_json(&self.pstar0),
            ps0: self.ps0.iter().map(|(s, m)| PsJson { s: [s.0, s.1], matrix: matrix_json(m) }).collect(),
            slack: self.slack,
            size: size_report(self),
        }
    }

    pub fn from_json(j: &PfaffianSystemJson) -> Result<Self> {
        let h = Hamiltonian::from_multi(&j.hamiltonian.to_poly()?)?;
        let mut ps0 = BTreeMap::new();
        for p in &j.ps0 {
            ps0.insert((p.s[0], p.s[1]), matrix_from_json(&p.matrix)?);
        }
        Ok(PfaffianSystem {
            n: j.n,
            ell: j.ell,
            basis: basis_forms(j.n)?,
            hamiltonian: h,
            pstar0: matrix_from_json(&j.pstar0)?,
            ps0,
            slack: j.slack,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearODESystemJson {
    pub schema: String,
    pub var: String,
    pub a: Vec<Vec<ExactRatFunc>>,
    pub denominator: ExactPoly,
    /// `[re, im]` pairs.
    pub singular_points: Vec<[f64; 2]>,
}

impl LinearODESystem {
    pub fn to_json(&self) -> LinearODESystemJson {
        LinearODESystemJson {
            schema: ODE_SCHEMA.into(),
            var: T.into(),
            a: matrix_json(&self.a),
            denominator: (&self.denominator).into(),
            singular_points: self.singular_points.iter().map(|z| [round12(z.re), round12(z.im)]).collect(),
        }
    }

    pub fn from_json(j: &LinearODESystemJson) -> Result<Self> {
        Self::new(matrix_from_json(&j.a)?)
    }
}

/// Fixed precision for emitted floating values.
pub fn round12(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Convenience for tests and the CLI: the concrete `Poly2` of `H` at given
/// parameter values.
pub fn concrete_hamiltonian(h: &Hamiltonian<RatFunc>, values: &BTreeMap<String, Rational>) -> Result<Hamiltonian<Rational>> {
    let hs = h.specialize(values)?;
    hs.to_rational().ok_or_else(|| Error::InvalidInput(format!("unassigned parameters {:?}", hs.parameters())))
}
