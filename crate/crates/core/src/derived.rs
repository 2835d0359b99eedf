//! Scalar differential operators over ℚ(i)[t]: the derived equation of a
//! first-order system, standard form, slopes, Möbius pullbacks, reflection and
//! symmetrization.

use std::fmt;

use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{rational_gcd, to_f64};
use crate::algebra::serial::{qi_from_strings, qi_strings, rational_string};
use crate::algebra::{poly_roots, DenseMatrix, Field, RatFunc, Rational, UniPoly, UniRat, QI};
use crate::error::{Error, Result};
use crate::picard_fuchs::{LinearODESystem, T};

type P = UniPoly<QI>;
type R = UniRat<QI>;

/// `D = p₀∂^k + p₁∂^{k−1} + ⋯ + p_k`, stored leading coefficient first.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffOperator {
    p: Vec<P>,
}

fn lift_q(p: &UniPoly<Rational>) -> P {
    p.map(|c| QI::real(c.clone()))
}

fn conj_poly(p: &P) -> P {
    p.map(QI::conj)
}

impl DiffOperator {
    /// Raw coefficients `p₀, …, p_k`, not normalized; `p₀ ≠ 0`.
    pub fn new(p: Vec<P>) -> Result<Self> {
        if p.is_empty() || p[0].is_zero() {
            return Err(Error::InvalidInput("leading coefficient must be nonzero".into()));
        }
        Ok(DiffOperator { p })
    }

    /// Clears denominators, removes the polynomial gcd and the Gaussian-integer
    /// content, and makes the leading coefficient of `p₀` a positive integer.
    pub fn standard_form(coeffs: &[R]) -> Result<Self> {
        if coeffs.is_empty() || coeffs[0].is_zero() {
            return Err(Error::InvalidInput("leading coefficient must be nonzero".into()));
        }
        let mut den = P::one();
        for c in coeffs {
            let g = den.gcd(c.den());
            den = den.mul(&c.den().div_rem(&g).0);
        }
        let mut p: Vec<P> = coeffs.iter().map(|c| c.num().mul(&den.div_rem(c.den()).0)).collect();
        let g = p.iter().fold(P::zero(), |g, c| g.gcd(c));
        if g.degree() != Some(0) {
            p = p.iter().map(|c| c.div_rem(&g).0).collect();
        }
        let lc = p[0].lead().conj();
        p = p.iter().map(|c| c.scale(&lc)).collect();
        let parts: Vec<Rational> =
            p.iter().flat_map(|c| c.coeffs().iter().flat_map(|z| [z.re.clone(), z.im.clone()])).filter(|q| !Field::is_zero(q)).collect();
        let content = rational_gcd(parts.iter());
        let s = QI::real(content.recip());
        Ok(DiffOperator { p: p.iter().map(|c| c.scale(&s)).collect() })
    }

    pub fn from_polys(p: &[P]) -> Result<Self> {
        Self::standard_form(&p.iter().map(|c| R::from_poly(c.clone())).collect::<Vec<_>>())
    }

    pub fn from_rational(p: &[UniPoly<Rational>]) -> Result<Self> {
        Self::from_polys(&p.iter().map(lift_q).collect::<Vec<_>>())
    }

    pub fn normalize(&self) -> Self {
        Self::from_polys(&self.p).expect("nonzero leading coefficient")
    }

    pub fn order(&self) -> usize {
        self.p.len() - 1
    }

    pub fn coeffs(&self) -> &[P] {
        &self.p
    }

    pub fn is_real(&self) -> bool {
        self.p.iter().all(|c| c.coeffs().iter().all(QI::is_real))
    }

    /// Coefficients at a point, leading first.
    pub fn eval_coeffs(&self, t: Complex64) -> Vec<Complex64> {
        self.p.iter().map(|c| c.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * t + a.to_c64())).collect()
    }

    /// `Σ p_j(t) y^{(k−j)}` for `derivs = (y, y′, …, y^{(k)})`.
    pub fn apply(&self, t: Complex64, derivs: &[Complex64]) -> Complex64 {
        let k = self.order();
        self.eval_coeffs(t).iter().enumerate().map(|(j, c)| c * derivs[k - j]).sum()
    }

    /// Distinct roots of `p₀`, found from its squarefree part.
    pub fn singular_points(&self) -> Vec<Complex64> {
        let p = &self.p[0];
        let sq = match p.degree() {
            Some(d) if d > 1 => p.div_rem(&p.gcd(&p.deriv())).0,
            _ => p.clone(),
        };
        let mut r = poly_roots(&sq.coeffs().iter().map(QI::to_c64).collect::<Vec<_>>());
        if p.coeffs().iter().all(QI::is_real) {
            for z in &mut r {
                if z.im.abs() <= 1e-13 * z.norm().max(1.0) {
                    z.im = 0.0;
                }
            }
        }
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        r
    }

    fn from_ascending(c: Vec<P>) -> Result<Self> {
        let mut c = c;
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self::from_polys(&c.into_iter().rev().collect::<Vec<_>>())
    }
}

fn fmt_poly(p: &P, var: &str) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        parts.push(match (cs.as_str(), mono.is_empty()) {
            (_, true) => cs,
            ("1", false) => mono,
            ("-1", false) => format!("-{mono}"),
            _ => format!("{cs}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for DiffOperator {
    /// Coefficients stand to the left of `D`: `t*D - 1` is `t∂ − 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.order();
        let mut parts = Vec::new();
        for (j, c) in self.p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = k - j;
            let d = match m {
                0 => String::new(),
                1 => "D".into(),
                _ => format!("D^{m}"),
            };
            let cs = fmt_poly(c, T);
            let single = c.coeffs().iter().filter(|z| !z.is_zero()).count() == 1 && c.lead().is_real();
            parts.push(if d.is_empty() {
                if single {
                    cs
                } else {
                    format!("({cs})")
                }
            } else if cs == "1" {
                d
            } else if cs == "-1" {
                format!("-{d}")
            } else if single {
                format!("{cs}*{d}")
            } else {
                format!("({cs})*{d}")
            });
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Affine slope `max_j ‖p_j‖/‖p₀‖` with ℓ¹ norms of complex moduli; exact for
/// real operators.
#[derive(Clone, PartialEq, Debug)]
pub struct Slope {
    pub value: f64,
    pub exact: Option<Rational>,
}

pub fn affine_slope(d: &DiffOperator) -> Slope {
    let d = d.normalize();
    if d.is_real() {
        let norm = |p: &P| p.coeffs().iter().fold(Rational::zero(), |a, c| a + c.re.abs());
        let n0 = norm(&d.p[0]);
        let s = d.p[1..].iter().map(|p| norm(p) / &n0).max().unwrap_or_else(Rational::zero);
        return Slope { value: to_f64(&s), exact: Some(s) };
    }
    let norm = |p: &P| p.coeffs().iter().map(QI::abs_f64).sum::<f64>();
    let n0 = norm(&d.p[0]);
    let s = d.p[1..].iter().map(|p| norm(p) / n0).fold(0.0, f64::max);
    Slope { value: s, exact: None }
}

/// `t = (a s + b)/(c s + d)`.
#[derive(Clone, PartialEq, Debug)]
pub struct MobiusMap {
    pub a: QI,
    pub b: QI,
    pub c: QI,
    pub d: QI,
}

impl MobiusMap {
    pub fn new(a: QI, b: QI, c: QI, d: QI) -> Result<Self> {
        if a.mul(&d).sub(&b.mul(&c)).is_zero() {
            return Err(Error::InvalidInput("Möbius map with ad − bc = 0".into()));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap { a: QI::one(), b: QI::zero(), c: QI::zero(), d: QI::one() }
    }

    /// `s ↦ λs + μ`.
    pub fn affine(lambda: QI, mu: QI) -> Result<Self> {
        Self::new(lambda, mu, QI::zero(), QI::one())
    }

    /// `s ↦ 1/s`.
    pub fn inversion() -> Self {
        MobiusMap { a: QI::zero(), b: QI::one(), c: QI::one(), d: QI::zero() }
    }

    pub fn det(&self) -> QI {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        MobiusMap {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap { a: self.d.clone(), b: self.b.neg(), c: self.c.neg(), d: self.a.clone() }
    }

    pub fn apply(&self, s: Complex64) -> Complex64 {
        (self.a.to_c64() * s + self.b.to_c64()) / (self.c.to_c64() * s + self.d.to_c64())
    }

    /// `dt/ds`.
    pub fn derivative(&self, s: Complex64) -> Complex64 {
        let den = self.c.to_c64() * s + self.d.to_c64();
        self.det().to_c64() / (den * den)
    }
}

/// `∂ ∘ L` for `L` given by ascending coefficients.
fn d_compose(l: &[P]) -> Vec<P> {
    let mut out = vec![P::zero(); l.len() + 1];
    for (i, c) in l.iter().enumerate() {
        out[i] = out[i].add(&c.deriv());
        out[i + 1] = out[i + 1].add(c);
    }
    out
}

fn left_mul(u: &P, l: &[P]) -> Vec<P> {
    l.iter().map(|c| u.mul(c)).collect()
}

/// Operator annihilating `y∘φ` for every solution `y` of `D`.
pub fn pullback(d: &DiffOperator, phi: &MobiusMap) -> DiffOperator {
    let k = d.order();
    let lin = |x: &QI, y: &QI| P::new(vec![y.clone(), x.clone()]);
    let num = lin(&phi.a, &phi.b);
    let den = lin(&phi.c, &phi.d);
    // ∂_t = u(s) ∂_s
    let u = den.mul(&den).scale(&phi.det().inv().unwrap());
    let mut pow: Vec<Vec<P>> = vec![vec![P::one()]];
    for m in 0..k {
        let next = left_mul(&u, &d_compose(&pow[m]));
        pow.push(next);
    }
    let nmax = d.p.iter().filter_map(P::degree).max().unwrap_or(0);
    let mut acc = vec![P::zero(); k + 1];
    for (j, p) in d.p.iter().enumerate() {
        let mut h = P::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            h = h.add(&num.pow(i as u32).mul(&den.pow((nmax - i) as u32)).scale(a));
        }
        for (m, c) in pow[k - j].iter().enumerate() {
            acc[m] = acc[m].add(&h.mul(c));
        }
    }
    DiffOperator::from_ascending(acc).expect("pullback preserves the order")
}

/// Operator annihilating `conj(y(t̄))` for the solutions `y` of `D`.
pub fn reflect(d: &DiffOperator) -> DiffOperator {
    DiffOperator::from_polys(&d.p.iter().map(conj_poly).collect::<Vec<_>>()).unwrap()
}

/// Scaled remainders `S_j = p₀^{e_j}·(∂^j mod L)` with `e_j = max(0, j − k + 1)`,
/// which are polynomial, for `j = 0..=m`.
fn right_remainders(l: &DiffOperator, m: usize) -> Vec<Vec<P>> {
    let k = l.order();
    let p0 = &l.p[0];
    let dp0 = p0.deriv();
    let mut rems = Vec::with_capacity(m + 1);
    let mut r: Vec<P> = (0..k).map(|i| if i == 0 { P::one() } else { P::zero() }).collect();
    for j in 0..=m {
        rems.push(r.clone());
        let e = (j + 1).saturating_sub(k);
        // the next remainder gains a factor p₀ exactly when e increases
        let grow = j + 1 >= k;
        let mut next = vec![P::zero(); k];
        for i in 0..k {
            let d = if grow { r[i].deriv().mul(p0).sub(&r[i].mul(&dp0).scale(&QI::from_int(e as i64))) } else { r[i].deriv() };
            next[i] = next[i].add(&d);
            let shifted = if grow { r[i].mul(p0) } else { r[i].clone() };
            if i + 1 < k {
                next[i + 1] = next[i + 1].add(&shifted);
            } else {
                // ∂^k ≡ −Σ_{i<k} (p_{k−i}/p₀) ∂^i
                for (h, q) in next.iter_mut().enumerate() {
                    *q = q.sub(&r[i].mul(&l.p[k - h]));
                }
            }
        }
        r = next;
    }
    rems
}

fn exponents(k: usize, m: usize) -> Vec<u32> {
    (0..=m).map(|j| (j + 1).saturating_sub(k) as u32).collect()
}

/// Fraction-free determinant.
fn bareiss_det(mut a: Vec<Vec<P>>) -> P {
    let n = a.len();
    let mut sign = false;
    let mut prev = P::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return P::zero();
        };
        if p != c {
            a.swap(p, c);
            sign = !sign;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                let v = a[r][j].mul(&a[c][c]).sub(&a[r][c].mul(&a[c][j]));
                a[r][j] = v.div_rem(&prev).0;
            }
            a[r][c] = P::zero();
        }
        prev = a[c][c].clone();
    }
    if sign {
        prev.neg()
    } else {
        prev
    }
}

/// Fraction-free row echelon form; returns the nonzero rows and pivot columns.
fn bareiss_echelon(mut a: Vec<Vec<P>>) -> (Vec<Vec<P>>, Vec<usize>) {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut prev = P::one();
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for c in 0..cols {
        if r0 == rows {
            break;
        }
        let Some(p) = (r0..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(p, r0);
        for r in r0 + 1..rows {
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let v = a[r][j].mul(&a[r0][c]).sub(&a[r][c].mul(&a[r0][j]));
                a[r][j] = v.div_rem(&prev).0;
            }
            a[r][c] = P::zero();
        }
        prev = a[r0][c].clone();
        pivots.push(c);
        r0 += 1;
    }
    a.truncate(r0);
    (a, pivots)
}

/// A nonzero polynomial kernel vector, by Cramer's rule on the pivot columns.
fn kernel_vector(a: Vec<Vec<P>>) -> Option<Vec<P>> {
    let cols = a.first().map_or(0, Vec::len);
    let (u, piv) = bareiss_echelon(a);
    let free = (0..cols).find(|c| !piv.contains(c))?;
    let sub = |replace: Option<usize>| -> Vec<Vec<P>> {
        u.iter().map(|row| piv.iter().map(|&c| if Some(c) == replace { row[free].clone() } else { row[c].clone() }).collect()).collect()
    };
    let mut x = vec![P::zero(); cols];
    x[free] = bareiss_det(sub(None));
    for &c in &piv {
        x[c] = bareiss_det(sub(Some(c))).neg();
    }
    Some(x)
}

/// Least common left multiple: the minimal-order operator whose solution space
/// contains those of `a` and `b`.
pub fn lclm(a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
    if a.normalize() == b.normalize() {
        return a.normalize();
    }
    let (ka, kb) = (a.order(), b.order());
    let cap = ka + kb;
    let ra = right_remainders(a, cap);
    let rb = right_remainders(b, cap);
    let (ea, eb) = (exponents(ka, cap), exponents(kb, cap));
    let (pa, pb) = (&a.p[0], &b.p[0]);
    // unknowns c_j = d_j·p_a^{ea_j}·p_b^{eb_j}
    for m in ka.max(kb)..=cap {
        let mut mat = Vec::with_capacity(ka + kb);
        for i in 0..ka {
            mat.push((0..=m).map(|j| ra[j][i].mul(&pb.pow(eb[j]))).collect::<Vec<_>>());
        }
        for i in 0..kb {
            mat.push((0..=m).map(|j| rb[j][i].mul(&pa.pow(ea[j]))).collect::<Vec<_>>());
        }
        if let Some(d) = kernel_vector(mat) {
            let c: Vec<P> = (0..=m).rev().map(|j| d[j].mul(&pa.pow(ea[j])).mul(&pb.pow(eb[j]))).collect();
            return DiffOperator::from_polys(&c).expect("minimal relation has top coefficient");
        }
    }
    unreachable!("the lclm has order at most ord a + ord b")
}

/// A circle or line in the `t`-plane.
#[derive(Clone, PartialEq, Debug)]
pub enum Curve {
    Line { point: QI, direction: QI },
    Circle { center: QI, radius: Rational },
}

impl Curve {
    pub fn real_axis() -> Self {
        Curve::Line { point: QI::zero(), direction: QI::one() }
    }

    /// A Möbius map sending ℝ onto the curve.
    pub fn chart(&self) -> Result<MobiusMap> {
        match self {
            Curve::Line { point, direction } => MobiusMap::affine(direction.clone(), point.clone()),
            Curve::Circle { center, radius } => {
                if !radius.is_positive() {
                    return Err(Error::InvalidInput("circle radius must be positive".into()));
                }
                let r = QI::real(radius.clone());
                // s ↦ a + r(s − i)/(s + i)
                MobiusMap::new(center.add(&r), center.sub(&r).mul(&QI::i()), QI::one(), QI::i())
            }
        }
    }
}

/// Operator whose solutions include those of `D` and their Schwarz reflections
/// across `γ`.
pub fn symmetrize(d: &DiffOperator, gamma: &Curve) -> Result<DiffOperator> {
    let psi = gamma.chart()?;
    let on_r = pullback(d, &psi);
    let sym = lclm(&on_r, &reflect(&on_r));
    let out = pullback(&sym, &psi.inverse());
    assert!(out.order() <= 2 * d.order());
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleSpec {
    pub samples: usize,
    pub seed: u64,
    /// Bound on numerators and denominators of the random map entries.
    pub height: i64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { samples: 16, seed: 1, height: 3 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeReport {
    pub affine_slope: f64,
    pub affine_slope_exact: Option<String>,
    /// Lower bound for the invariant slope: the largest affine slope met.
    pub sampled_invariant_slope: f64,
    pub samples: usize,
    pub seed: u64,
}

fn random_qi(rng: &mut ChaCha8Rng, h: i64) -> QI {
    let q = |rng: &mut ChaCha8Rng| Rational::new(rng.random_range(-h..=h).into(), rng.random_range(1..=h).into());
    QI::new(q(rng), q(rng))
}

fn random_map(rng: &mut ChaCha8Rng, h: i64) -> MobiusMap {
    loop {
        let m = MobiusMap { a: random_qi(rng, h), b: random_qi(rng, h), c: random_qi(rng, h), d: random_qi(rng, h) };
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn random_curve(rng: &mut ChaCha8Rng, h: i64) -> Curve {
    if rng.random_bool(0.5) {
        let mut dir = random_qi(rng, h);
        if dir.is_zero() {
            dir = QI::one();
        }
        Curve::Line { point: random_qi(rng, h), direction: dir }
    } else {
        Curve::Circle { center: random_qi(rng, h), radius: Rational::new(rng.random_range(1..=h).into(), rng.random_range(1..=h).into()) }
    }
}

/// Largest affine slope over the identity and `spec.samples` random pairs
/// `(φ, γ)` of the symmetrization of `pullback(D, φ)` across `γ`. Samples are
/// drawn in a fixed order from the seed, so more samples never lower the value.
pub fn invariant_slope_sampled(d: &DiffOperator, spec: &SampleSpec) -> SlopeReport {
    let base = affine_slope(d);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pairs: Vec<(MobiusMap, Curve)> =
        (0..spec.samples).map(|_| (random_map(&mut rng, spec.height), random_curve(&mut rng, spec.height))).collect();
    let best = pairs
        .par_iter()
        .map(|(phi, g)| symmetrize(&pullback(d, phi), g).map(|s| affine_slope(&s).value).unwrap_or(0.0))
        .reduce(|| 0.0, f64::max);
    SlopeReport {
        affine_slope: base.value,
        affine_slope_exact: base.exact.as_ref().map(rational_string),
        sampled_invariant_slope: base.value.max(best),
        samples: spec.samples,
        seed: spec.seed,
    }
}

fn to_unirat(r: &RatFunc) -> Result<UniRat<Rational>> {
    let f = |p| UniPoly::from_multi(p, T).ok_or_else(|| Error::Unsupported("system must depend on t only".into()));
    Ok(UniRat::new(f(r.num())?, f(r.den())?))
}

/// The first linear relation `A_k + R₁A_{k−1} + ⋯ + R_kA₀ = 0` among
/// `A₀ = E`, `A_{j+1} = A_j′ + A_jA`, as an operator in standard form.
pub fn reduce_to_scalar(sys: &LinearODESystem) -> Result<DiffOperator> {
    let l = sys.dim();
    let a = sys.a.try_map(to_unirat)?;
    let flat = |m: &DenseMatrix<UniRat<Rational>>| m.entries().to_vec();
    let mut seq = vec![DenseMatrix::<UniRat<Rational>>::identity(l)];
    for k in 1..=l * l {
        let prev = &seq[k - 1];
        let next = prev.map(UniRat::deriv).add(&prev.mul(&a));
        let cols: Vec<Vec<UniRat<Rational>>> = seq.iter().map(flat).collect();
        let m = DenseMatrix::from_fn(l * l, k, |i, j| cols[j][i].clone());
        let rhs: Vec<UniRat<Rational>> = flat(&next).iter().map(|e| e.neg()).collect();
        if let Some(x) = m.solve(&rhs) {
            // coefficients of ∂^k, ∂^{k−1}, …, ∂^0
            let mut c = vec![R::one()];
            for j in (0..k).rev() {
                let e = &x[j];
                c.push(R::new(lift_q(e.num()), lift_q(e.den())));
            }
            return DiffOperator::standard_form(&c);
        }
        seq.push(next);
    }
    unreachable!("ℓ²+1 matrices of size ℓ×ℓ are dependent")
}

pub const OPERATOR_SCHEMA: &str = "abint/diff-operator/v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffOperatorJson {
    pub schema: String,
    pub order: usize,
    pub field: String,
    pub text: String,
    /// `coeffs[j][m] = [re, im]` of `t^m` in `p_j`, leading coefficient first.
    pub coeffs: Vec<Vec<[String; 2]>>,
}

impl DiffOperator {
    pub fn to_json(&self) -> DiffOperatorJson {
        DiffOperatorJson {
            schema: OPERATOR_SCHEMA.into(),
            order: self.order(),
            field: if self.is_real() { "Q".into() } else { "Q(i)".into() },
            text: self.to_string(),
            coeffs: self.p.iter().map(|c| c.coeffs().iter().map(qi_strings).collect()).collect(),
        }
    }

    pub fn from_json(j: &DiffOperatorJson) -> Result<Self> {
        let mut p = Vec::new();
        for c in &j.coeffs {
            p.push(P::new(c.iter().map(qi_from_strings).collect::<Result<Vec<_>>>()?));
        }
        DiffOperator::new(p)
    }
}
