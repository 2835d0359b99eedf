//! Division of polynomial forms in the Petrov module by indeterminate
//! coefficients.

use std::collections::BTreeMap;

use crate::algebra::{Field, SparseSolver, UniPoly};
use crate::error::{Error, Result};

use super::forms::{basis_forms, dh_wedge, BasisForm, PolyForm};
use super::hamiltonian::Hamiltonian;
use super::poly2::Poly2;

#[derive(Clone, PartialEq, Debug)]
pub enum Remainder<F: Field> {
    /// `u·dH + dv`
    OneForm { u: Poly2<F>, v: Poly2<F> },
    /// `dH∧η` with `η = a dx₁ + b dx₂`
    TwoForm { a: Poly2<F>, b: Poly2<F> },
}

/// `input = Σ_α (p_α∘H)·(ω_α or μ_α) + remainder`.
#[derive(Clone, PartialEq, Debug)]
pub struct PetrovDecomposition<F: Field> {
    pub basis: Vec<BasisForm>,
    pub p: Vec<UniPoly<F>>,
    pub remainder: Remainder<F>,
    /// Extra degree allowance beyond the module bounds that was needed (0 for
    /// basis-regular Hamiltonians).
    pub slack: u32,
}

#[derive(Clone, Debug)]
pub struct DivisionOptions {
    /// Upper bound on `deg p_α`; `Some(0)` asks for constant coefficients.
    pub p_degree_cap: Option<u32>,
    /// Prefer putting as much as possible into the remainder term.
    pub prefer_remainder: bool,
    pub max_slack: u32,
}

impl Default for DivisionOptions {
    fn default() -> Self {
        DivisionOptions { p_degree_cap: None, prefer_remainder: false, max_slack: 3 }
    }
}

fn monomials_up_to(d: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 0..=d.max(-1) {
        for i in 0..=k as u32 {
            out.push((i, k as u32 - i));
        }
    }
    out
}

/// Free-variables-zero solution of `Σ x_j·cols[j] = rhs`, compared coefficientwise.
fn solve_columns<F: Field>(cols: &[Poly2<F>], rhs: &Poly2<F>) -> Option<Vec<F>> {
    let mut rows: BTreeMap<(u32, u32), Vec<(usize, F)>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (m, v) in c.terms() {
            rows.entry(*m).or_default().push((j, v.clone()));
        }
    }
    for (m, _) in rhs.terms() {
        rows.entry(*m).or_default();
    }
    let mut s = SparseSolver::new(cols.len());
    for (m, r) in rows {
        s.add_row(r, rhs.get(m.0, m.1));
        if !s.is_consistent() {
            return None;
        }
    }
    s.solve()
}

struct Powers<F: Field> {
    h: Poly2<F>,
    pw: Vec<Poly2<F>>,
}

impl<F: Field> Powers<F> {
    fn new(h: &Poly2<F>) -> Self {
        Powers { h: h.clone(), pw: vec![Poly2::constant(F::one())] }
    }
    fn get(&mut self, k: usize) -> &Poly2<F> {
        while self.pw.len() <= k {
            let next = self.pw.last().unwrap().mul(&self.h);
            self.pw.push(next);
        }
        &self.pw[k]
    }
}

fn p_bound(deg: i64, alpha: (u32, u32), n: usize, cap: Option<u32>, slack: u32) -> i64 {
    let room = deg - (alpha.0 + alpha.1) as i64 - 2;
    if room < 0 {
        return -1;
    }
    let b = room / (n as i64 + 1) + slack as i64;
    match cap {
        Some(c) => b.min(c as i64),
        None => b,
    }
}

fn collect_p<F: Field>(x: &[F], layout: &[(usize, usize)], nb: usize) -> Vec<UniPoly<F>> {
    let mut coeffs: Vec<Vec<F>> = vec![Vec::new(); nb];
    for (&(a, k), v) in layout.iter().zip(x) {
        let c = &mut coeffs[a];
        if c.len() <= k {
            c.resize(k + 1, F::zero());
        }
        c[k] = v.clone();
    }
    coeffs.into_iter().map(UniPoly::new).collect()
}

/// `F dx₁∧dx₂ = Σ (p_α∘H) μ_α + dH∧η`.
pub fn divide_2form<F: Field>(f: &Poly2<F>, h: &Hamiltonian<F>) -> Result<PetrovDecomposition<F>> {
    divide_2form_with(f, h, &DivisionOptions::default())
}

pub fn divide_2form_with<F: Field>(f: &Poly2<F>, h: &Hamiltonian<F>, opts: &DivisionOptions) -> Result<PetrovDecomposition<F>> {
    let n = h.n();
    let basis = basis_forms(n)?;
    let Some(df) = f.degree() else {
        return Ok(PetrovDecomposition {
            p: vec![UniPoly::zero(); basis.len()],
            basis,
            remainder: Remainder::TwoForm { a: Poly2::zero(), b: Poly2::zero() },
            slack: 0,
        });
    };
    let deg = df as i64 + 2;
    let hp = h.poly();
    let (hx, hy) = (hp.dx(), hp.dy());
    let mut powers = Powers::new(hp);
    for slack in 0..=opts.max_slack {
        let mut p_cols = Vec::new();
        let mut p_layout = Vec::new();
        for (ai, b) in basis.iter().enumerate() {
            for k in 0..=p_bound(deg, b.alpha, n, opts.p_degree_cap, slack) {
                let col = powers.get(k as usize).shift(b.alpha.0, b.alpha.1);
                p_cols.push(col);
                p_layout.push((ai, k as usize));
            }
        }
        let eta_mons = monomials_up_to(df as i64 - n as i64 + slack as i64);
        let mut e_cols = Vec::new();
        for &(i, j) in &eta_mons {
            e_cols.push(hy.shift(i, j).neg());
        }
        for &(i, j) in &eta_mons {
            e_cols.push(hx.shift(i, j));
        }
        let (cols, p_first) = if opts.prefer_remainder { ([e_cols, p_cols].concat(), false) } else { ([p_cols, e_cols].concat(), true) };
        let Some(x) = solve_columns(&cols, f) else {
            continue;
        };
        let np = p_layout.len();
        let ne = eta_mons.len();
        let (xp, xe) = if p_first { (&x[..np], &x[np..]) } else { (&x[2 * ne..], &x[..2 * ne]) };
        let a = Poly2::from_terms(eta_mons.iter().zip(&xe[..ne]).map(|(m, c)| (*m, c.clone())));
        let b = Poly2::from_terms(eta_mons.iter().zip(&xe[ne..]).map(|(m, c)| (*m, c.clone())));
        let dec = PetrovDecomposition { p: collect_p(xp, &p_layout, basis.len()), basis, remainder: Remainder::TwoForm { a, b }, slack };
        debug_assert!(verify_decomposition(&PolyForm::two(f.clone()), h, &dec));
        return Ok(dec);
    }
    Err(Error::SingularDivision(format!("two-form of degree {deg} not reducible within the degree bounds")))
}

/// `P dx₁ + Q dx₂ = Σ (p_α∘H) ω_α + u·dH + dv`.
///
/// Only `p` and `u` are unknowns: the difference `ω − Σ(p_α∘H)ω_α − u dH` must
/// be closed, and its potential gives `v`.
pub fn divide_1form<F: Field>(p: &Poly2<F>, q: &Poly2<F>, h: &Hamiltonian<F>) -> Result<PetrovDecomposition<F>> {
    divide_1form_with(p, q, h, &DivisionOptions::default())
}

pub fn divide_1form_with<F: Field>(
    p: &Poly2<F>,
    q: &Poly2<F>,
    h: &Hamiltonian<F>,
    opts: &DivisionOptions,
) -> Result<PetrovDecomposition<F>> {
    let n = h.n();
    let basis = basis_forms(n)?;
    let input = PolyForm::one(p.clone(), q.clone());
    let Some(deg) = input.degree() else {
        return Ok(PetrovDecomposition {
            p: vec![UniPoly::zero(); basis.len()],
            basis,
            remainder: Remainder::OneForm { u: Poly2::zero(), v: Poly2::zero() },
            slack: 0,
        });
    };
    let deg = deg as i64;
    let hp = h.poly();
    let (hx, hy) = (hp.dx(), hp.dy());
    let rhs = q.dx().sub(&p.dy());
    let mut powers = Powers::new(hp);
    for slack in 0..=opts.max_slack {
        let u_mons: Vec<(u32, u32)> = monomials_up_to(deg - n as i64 - 1 + slack as i64).into_iter().filter(|&m| m != (0, 0)).collect();
        let mut cols = Vec::new();
        for &(i, j) in &u_mons {
            let m = Poly2::monomial(i, j, F::one());
            cols.push(m.dx().mul(&hy).sub(&m.dy().mul(&hx)));
        }
        let mut p_layout = Vec::new();
        for (ai, b) in basis.iter().enumerate() {
            let w: Poly2<F> = b.omega_q();
            let xa = Poly2::monomial(b.alpha.0, b.alpha.1, F::one());
            for k in 0..=p_bound(deg, b.alpha, n, opts.p_degree_cap, slack) {
                let k = k as usize;
                let mut col = powers.get(k).mul(&xa);
                if k > 0 {
                    let lower = powers.get(k - 1).mul(&hx).mul(&w).scale(&F::from_int(k as i64));
                    col = col.add(&lower);
                }
                cols.push(col);
                p_layout.push((ai, k));
            }
        }
        let Some(x) = solve_columns(&cols, &rhs) else {
            continue;
        };
        let nu = u_mons.len();
        let u = Poly2::from_terms(u_mons.iter().zip(&x[..nu]).map(|(m, c)| (*m, c.clone())));
        let ps = collect_p(&x[nu..], &p_layout, basis.len());
        let tp = p.sub(&u.mul(&hx));
        let mut tq = q.sub(&u.mul(&hy));
        for (b, pa) in basis.iter().zip(&ps) {
            tq = tq.sub(&compose(pa, hp, &mut powers).mul(&b.omega_q()));
        }
        let v = potential(&tp, &tq);
        let dec = PetrovDecomposition { p: ps, basis, remainder: Remainder::OneForm { u, v }, slack };
        debug_assert!(verify_decomposition(&input, h, &dec));
        return Ok(dec);
    }
    Err(Error::SingularDivision(format!("one-form of degree {deg} not reducible within the degree bounds")))
}

fn compose<F: Field>(p: &UniPoly<F>, _h: &Poly2<F>, powers: &mut Powers<F>) -> Poly2<F> {
    let mut acc = Poly2::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&powers.get(k).scale(c));
        }
    }
    acc
}

/// `v` with `v(0,0) = 0` and `dv = a dx₁ + b dx₂`, assuming the form is closed.
fn potential<F: Field>(a: &Poly2<F>, b: &Poly2<F>) -> Poly2<F> {
    let mut v = Poly2::zero();
    for (&(i, j), c) in a.terms() {
        v = v.add(&Poly2::monomial(i + 1, j, c.mul(&F::from_int(i as i64 + 1).inv().unwrap())));
    }
    for (&(i, j), c) in b.terms() {
        if i == 0 {
            v = v.add(&Poly2::monomial(0, j + 1, c.mul(&F::from_int(j as i64 + 1).inv().unwrap())));
        }
    }
    v
}

/// `p∘H` as a bivariate polynomial.
pub fn compose_with_h<F: Field>(p: &UniPoly<F>, h: &Poly2<F>) -> Poly2<F> {
    let mut powers = Powers::new(h);
    compose(p, h, &mut powers)
}

/// Re-expands the decomposition and compares with the input exactly.
pub fn verify_decomposition<F: Field>(input: &PolyForm<F>, h: &Hamiltonian<F>, dec: &PetrovDecomposition<F>) -> bool {
    let hp = h.poly();
    if dec.p.len() != dec.basis.len() {
        return false;
    }
    match (input, &dec.remainder) {
        (PolyForm::One { p, q }, Remainder::OneForm { u, v }) => {
            let mut rp = u.mul(&hp.dx()).add(&v.dx());
            let mut rq = u.mul(&hp.dy()).add(&v.dy());
            for (b, pa) in dec.basis.iter().zip(&dec.p) {
                rq = rq.add(&compose_with_h(pa, hp).mul(&b.omega_q()));
            }
            rp = rp.sub(p);
            rq = rq.sub(q);
            rp.is_zero() && rq.is_zero()
        }
        (PolyForm::Two { f }, Remainder::TwoForm { a, b }) => {
            let mut r = dh_wedge(hp, a, b);
            for (bf, pa) in dec.basis.iter().zip(&dec.p) {
                r = r.add(&compose_with_h(pa, hp).shift(bf.alpha.0, bf.alpha.1));
            }
            r.sub(f).is_zero()
        }
        _ => false,
    }
}

/// Degree inequalities of the Petrov module theorem:
/// `(n+1)·deg p_α + deg ω_α ≤ deg ω`, `deg v ≤ deg ω`, `n + deg u ≤ deg ω`,
/// and for two-forms `(n+1)·deg p_α + deg μ_α ≤ deg μ`, `deg η + n ≤ deg μ`.
pub fn degree_bounds_hold<F: Field>(input: &PolyForm<F>, h: &Hamiltonian<F>, dec: &PetrovDecomposition<F>) -> bool {
    let n = h.n() as i64;
    let Some(deg) = input.degree() else {
        return dec.p.iter().all(|p| p.is_zero());
    };
    let deg = deg as i64;
    for (b, p) in dec.basis.iter().zip(&dec.p) {
        if let Some(dp) = p.degree() {
            let db = b.degree_omega() as i64;
            if (n + 1) * dp as i64 + db > deg {
                return false;
            }
        }
    }
    match &dec.remainder {
        Remainder::OneForm { u, v } => {
            let ok_v = v.degree().map(|d| d as i64 <= deg).unwrap_or(true);
            let ok_u = u.degree().map(|d| n + d as i64 <= deg).unwrap_or(true);
            ok_v && ok_u
        }
        Remainder::TwoForm { a, b } => {
            let de = a.degree().max(b.degree()).map(|d| d as i64 + 1);
            de.map(|d| d + n <= deg).unwrap_or(true)
        }
    }
}
