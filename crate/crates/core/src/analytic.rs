//! Analytic continuation of linear systems along arcs and segments, variation
//! of argument, monodromy, quasiunipotence, annulus bounds and zero counting.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::approximate;
use crate::algebra::{Rational, QI};
use crate::derived::{affine_slope, pullback, symmetrize, Curve, DiffOperator, MobiusMap};
use crate::error::{Error, Result};
use crate::numeric::{integrate, OdeOptions};
use crate::picard_fuchs::{LinearODESystem, T};
use crate::slits::{region_boundary, Boundary, RegionKind, SlitSystem};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// A circular arc or a line segment. Arcs sweep `sweep` radians from `start`
/// (positive is counterclockwise).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Segment { a: C, b: C },
    Arc { center: C, radius: f64, start: f64, sweep: f64 },
}

impl Piece {
    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { a, b } => (b - a).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point at arc length `u` from the start.
    pub fn point(&self, u: f64) -> C {
        match *self {
            Piece::Segment { a, b } => {
                let l = (b - a).norm();
                if l == 0.0 {
                    a
                } else {
                    a + (b - a) * (u / l)
                }
            }
            Piece::Arc { center, radius, start, sweep } => center + C::from_polar(radius, start + sweep.signum() * u / radius),
        }
    }

    /// Unit tangent at arc length `u`.
    pub fn tangent(&self, u: f64) -> C {
        match *self {
            Piece::Segment { a, b } => (b - a) / (b - a).norm(),
            Piece::Arc { radius, start, sweep, .. } => c(0.0, sweep.signum()) * C::from_polar(1.0, start + sweep.signum() * u / radius),
        }
    }

    pub fn start(&self) -> C {
        self.point(0.0)
    }

    pub fn end(&self) -> C {
        match *self {
            Piece::Segment { b, .. } => b,
            Piece::Arc { center, radius, start, sweep } => center + C::from_polar(radius, start + sweep),
        }
    }

    pub fn reversed(&self) -> Piece {
        match *self {
            Piece::Segment { a, b } => Piece::Segment { a: b, b: a },
            Piece::Arc { center, radius, start, sweep } => Piece::Arc { center, radius, start: start + sweep, sweep: -sweep },
        }
    }

    /// Euclidean distance from `p` to the piece.
    pub fn distance(&self, p: C) -> f64 {
        match *self {
            Piece::Segment { a, b } => {
                let d = b - a;
                let l2 = d.norm_sqr();
                if l2 == 0.0 {
                    return (p - a).norm();
                }
                let s = (((p - a) * d.conj()).re / l2).clamp(0.0, 1.0);
                (p - (a + d * s)).norm()
            }
            Piece::Arc { center, radius, start, sweep } => {
                let v = p - center;
                if v.norm() > 0.0 {
                    // is the radial projection inside the swept range?
                    let (lo, w) = if sweep >= 0.0 { (start, sweep) } else { (start + sweep, -sweep) };
                    let rel = (v.arg() - lo).rem_euclid(2.0 * PI);
                    if rel <= w || w >= 2.0 * PI {
                        return (v.norm() - radius).abs();
                    }
                }
                (p - self.start()).norm().min((p - self.end()).norm())
            }
        }
    }

    /// Largest modulus of a point on the piece.
    pub fn max_modulus(&self) -> f64 {
        match *self {
            Piece::Segment { a, b } => a.norm().max(b.norm()),
            Piece::Arc { center, radius, .. } => {
                let n = 256;
                let l = self.length();
                let m = (0..=n).map(|i| self.point(l * i as f64 / n as f64).norm()).fold(0.0, f64::max);
                m.min(center.norm() + radius)
            }
        }
    }
}

/// Consecutive pieces; closed paths end where they start.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourPath {
    pub pieces: Vec<Piece>,
    pub closed: bool,
}

impl ContourPath {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("empty path".into()));
        }
        let scale = pieces.iter().map(|p| p.start().norm().max(p.end().norm())).fold(1.0, f64::max);
        for w in pieces.windows(2) {
            if (w[0].end() - w[1].start()).norm() > 1e-9 * scale {
                return Err(Error::InvalidInput("consecutive path pieces do not share endpoints".into()));
            }
        }
        let closed = (pieces[0].start() - pieces.last().unwrap().end()).norm() <= 1e-9 * scale;
        Ok(ContourPath { pieces, closed })
    }

    pub fn segment(a: C, b: C) -> Self {
        ContourPath { pieces: vec![Piece::Segment { a, b }], closed: false }
    }

    /// Full counterclockwise circle starting at angle 0.
    pub fn circle(center: C, radius: f64) -> Self {
        Self::circle_from(center, radius, 0.0)
    }

    pub fn circle_from(center: C, radius: f64, start: f64) -> Self {
        ContourPath { pieces: vec![Piece::Arc { center, radius, start, sweep: 2.0 * PI }], closed: true }
    }

    pub fn arc(center: C, radius: f64, start: f64, sweep: f64) -> Self {
        let p = Piece::Arc { center, radius, start, sweep };
        ContourPath { pieces: vec![p], closed: sweep.abs() >= 2.0 * PI }
    }

    /// Closed polygon through `pts` in order.
    pub fn polygon(pts: &[C]) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::InvalidInput("polygon needs at least two vertices".into()));
        }
        let n = pts.len();
        Self::new((0..n).map(|i| Piece::Segment { a: pts[i], b: pts[(i + 1) % n] }).collect())
    }

    /// Counterclockwise boundary of `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::polygon(&[c(x0, y0), c(x1, y0), c(x1, y1), c(x0, y1)])
    }

    pub fn then(&self, o: &ContourPath) -> Result<Self> {
        Self::new(self.pieces.iter().chain(&o.pieces).copied().collect())
    }

    pub fn reversed(&self) -> Self {
        ContourPath { pieces: self.pieces.iter().rev().map(Piece::reversed).collect(), closed: self.closed }
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    pub fn start(&self) -> C {
        self.pieces[0].start()
    }

    pub fn end(&self) -> C {
        self.pieces.last().unwrap().end()
    }

    /// Nearest of `pts` to the path, with its distance.
    pub fn nearest(&self, pts: &[C]) -> Option<(C, f64)> {
        pts.iter().map(|&p| (p, self.pieces.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min))).min_by(|a, b| a.1.total_cmp(&b.1))
    }

    fn scale(&self) -> f64 {
        self.pieces.iter().map(Piece::max_modulus).fold(1.0, f64::max)
    }
}

/// A system `Y′ = A(t)Y` with `A` evaluated in floating point.
#[derive(Clone, Debug)]
pub struct NumericSystem {
    dim: usize,
    /// Row-major entries as (numerator, denominator), ascending in `t`.
    entries: Vec<Option<(Vec<C>, Vec<C>)>>,
    singular: Vec<C>,
}

fn horner(p: &[C], t: C) -> C {
    p.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * t + a)
}

impl NumericSystem {
    pub fn from_system(sys: &LinearODESystem) -> Result<Self> {
        if !sys.is_univariate() {
            return Err(Error::Unsupported("system depends on parameters other than t".into()));
        }
        let to_c = |p: &crate::algebra::MultiPoly| -> Vec<C> {
            p.coeffs_in(T).iter().map(|q| C::new(crate::algebra::rational::to_f64(&q.as_constant().unwrap_or_default()), 0.0)).collect()
        };
        let entries = sys.a.entries().iter().map(|e| if e.num().is_zero() { None } else { Some((to_c(e.num()), to_c(e.den()))) }).collect();
        Ok(NumericSystem { dim: sys.dim(), entries, singular: sys.singular_points.clone() })
    }

    /// Companion system of `D` for `Y = (y, y′, …, y^{(k−1)})`.
    pub fn from_operator(d: &DiffOperator) -> Self {
        let k = d.order();
        let asc = |j: usize| -> Vec<C> { d.coeffs()[j].coeffs().iter().map(QI::to_c64).collect() };
        let lead = asc(0);
        let mut entries = vec![None; k * k];
        for i in 0..k.saturating_sub(1) {
            entries[i * k + i + 1] = Some((vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]));
        }
        for j in 1..=k {
            let num: Vec<C> = asc(j).iter().map(|z| -z).collect();
            if num.iter().any(|z| z.norm() > 0.0) {
                entries[(k - 1) * k + (k - j)] = Some((num, lead.clone()));
            }
        }
        NumericSystem { dim: k, entries, singular: d.singular_points() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn singular_points(&self) -> &[C] {
        &self.singular
    }

    pub fn eval(&self, t: C) -> DMatrix<C> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |i, j| match &self.entries[i * n + j] {
            None => c(0.0, 0.0),
            Some((p, q)) => horner(p, t) / horner(q, t),
        })
    }

    fn singular_distance(&self, t: C) -> f64 {
        self.singular.iter().map(|s| (s - t).norm()).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug)]
pub struct ContinuationResult {
    pub values: Vec<C>,
    /// Increment of the argument of the designated combination along the path.
    pub variation_of_argument: f64,
    pub steps: usize,
    /// Sum of accepted local error estimates, scaled to the requested tolerance.
    pub error_estimate: f64,
}

/// Continuation tracks `w = functional · Y` and integrates `Im(w′/w)` alongside.
#[derive(Clone, Debug)]
pub struct ContinuationOptions {
    pub tol: f64,
    /// `|w| < zero_tol · |functional| · |Y|` counts as a zero of `w` on the path.
    pub zero_tol: f64,
    /// Step cap as a fraction of the distance to the singular locus.
    pub step_fraction: f64,
    pub max_steps: usize,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions { tol: 1e-9, zero_tol: 1e-7, step_fraction: 0.2, max_steps: 2_000_000 }
    }
}

impl ContinuationOptions {
    pub fn with_tol(tol: f64) -> Self {
        ContinuationOptions { tol, ..Default::default() }
    }
}

fn check_margin(sys: &NumericSystem, path: &ContourPath) -> Result<()> {
    if let Some((p, d)) = path.nearest(&sys.singular) {
        let scale = path.scale().max(p.norm());
        if d < 10.0 * f64::EPSILON * scale {
            return Err(Error::PathTooClose { re: p.re, im: p.im, distance: d });
        }
    }
    Ok(())
}

/// Continues `Y` from `path.start()` along `path`. `functional` selects the
/// scalar whose argument is tracked (`None` tracks nothing).
pub fn continue_along(
    sys: &NumericSystem,
    path: &ContourPath,
    initial: &[C],
    functional: Option<&[C]>,
    opts: &ContinuationOptions,
) -> Result<ContinuationResult> {
    let n = sys.dim;
    if initial.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} initial values, got {}", initial.len())));
    }
    check_margin(sys, path)?;
    let fun: Option<Vec<C>> = functional.map(|f| f.to_vec());
    if let Some(f) = &fun {
        if f.len() != n {
            return Err(Error::InvalidInput("functional has the wrong length".into()));
        }
    }
    let fnorm = fun.as_ref().map(|f| f.iter().map(|z| z.norm()).sum::<f64>()).unwrap_or(0.0);
    let scale0 = initial.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let ode = OdeOptions { rtol: opts.tol * 1e-2, atol: opts.tol * 1e-4 * scale0, max_steps: opts.max_steps, h_min: 1e-15 };

    let mut y: Vec<C> = initial.to_vec();
    y.push(c(0.0, 0.0));
    let mut steps = 0;
    let mut err = 0.0;
    let dot = |f: &[C], v: &[C]| -> C { f.iter().zip(v).map(|(a, b)| a * b).sum() };
    let zero_at = |t: C| Error::ZeroOnPath { re: t.re, im: t.im };
    if let Some(f) = &fun {
        let norm_y = y[..n].iter().map(|z| z.norm()).sum::<f64>();
        if dot(f, &y[..n]).norm() <= opts.zero_tol * fnorm * norm_y {
            return Err(zero_at(path.start()));
        }
    }
    for piece in &path.pieces {
        let len = piece.length();
        if len == 0.0 {
            continue;
        }
        let rhs = |u: f64, v: &[C]| -> Vec<C> {
            let z = piece.point(u);
            let a = sys.eval(z) * piece.tangent(u);
            let mut out = vec![c(0.0, 0.0); n + 1];
            for i in 0..n {
                out[i] = (0..n).map(|j| a[(i, j)] * v[j]).sum();
            }
            if let Some(f) = &fun {
                let w = dot(f, &v[..n]);
                let dw = dot(f, &out[..n]);
                out[n] = c((dw / w).im, 0.0);
            }
            out
        };
        let cap = |u: f64, _: &[C]| opts.step_fraction * sys.singular_distance(piece.point(u));
        let on_step = |u: f64, v: &[C]| -> Result<bool> {
            if let Some(f) = &fun {
                let norm_y = v[..n].iter().map(|z| z.norm()).sum::<f64>();
                if dot(f, &v[..n]).norm() <= opts.zero_tol * fnorm * norm_y {
                    return Err(zero_at(piece.point(u)));
                }
            }
            Ok(false)
        };
        let sol = integrate(rhs, 0.0, len, y, &ode, cap, on_step).map_err(|e| match (e, &fun) {
            // an unresolvable argument jump means the combination (nearly) vanishes
            (Error::ToleranceNotMet(_), Some(_)) => zero_at(piece.end()),
            (e, _) => e,
        })?;
        y = sol.y;
        steps += sol.steps;
        err += sol.err_sum;
    }
    let var = y.pop().unwrap().re;
    Ok(ContinuationResult { values: y, variation_of_argument: var, steps, error_estimate: err * 1e-2 * opts.tol })
}

/// Continuation of a solution of a system.
pub fn continue_solution(sys: &LinearODESystem, path: &ContourPath, initial: &[C], tol: f64) -> Result<ContinuationResult> {
    let ns = NumericSystem::from_system(sys)?;
    let mut e0 = vec![c(0.0, 0.0); ns.dim];
    e0[0] = c(1.0, 0.0);
    continue_tracked(&ns, path, initial, &e0, tol)
}

/// Continuation of `(y, y′, …, y^{(k−1)})` for a solution of `D`.
pub fn continue_operator_solution(d: &DiffOperator, path: &ContourPath, initial: &[C], tol: f64) -> Result<ContinuationResult> {
    let ns = NumericSystem::from_operator(d);
    let mut e0 = vec![c(0.0, 0.0); ns.dim];
    e0[0] = c(1.0, 0.0);
    continue_tracked(&ns, path, initial, &e0, tol)
}

/// Tracks the argument when the designated component stays away from zero,
/// and falls back to plain continuation otherwise.
fn continue_tracked(ns: &NumericSystem, path: &ContourPath, initial: &[C], f: &[C], tol: f64) -> Result<ContinuationResult> {
    let opts = ContinuationOptions::with_tol(tol);
    match continue_along(ns, path, initial, Some(f), &opts) {
        Err(Error::ZeroOnPath { .. }) => {
            let mut r = continue_along(ns, path, initial, None, &opts)?;
            r.variation_of_argument = f64::NAN;
            Ok(r)
        }
        r => r,
    }
}

/// Increment of `arg y` along `path` for the solution with initial data
/// `(y, y′, …)` at `path.start()`.
pub fn variation_of_argument(d: &DiffOperator, path: &ContourPath, initial: &[C], tol: f64) -> Result<f64> {
    let ns = NumericSystem::from_operator(d);
    let mut e0 = vec![c(0.0, 0.0); ns.dim];
    e0[0] = c(1.0, 0.0);
    Ok(continue_along(&ns, path, initial, Some(&e0), &ContinuationOptions::with_tol(tol))?.variation_of_argument)
}

#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub matrix: DMatrix<C>,
    pub base: C,
    pub loop_length: f64,
    /// 2-norm condition number.
    pub condition: f64,
}

/// Continues the fundamental matrix `X(base) = E` around `lp`; `M = X_final`
/// so that the continued `X` equals `X·M`.
pub fn monodromy_numeric(ns: &NumericSystem, lp: &ContourPath, tol: f64) -> Result<MonodromyMatrix> {
    if !lp.closed {
        return Err(Error::InvalidInput("monodromy needs a closed loop".into()));
    }
    let n = ns.dim;
    let opts = ContinuationOptions::with_tol(tol);
    let cols: Vec<Result<Vec<C>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut e = vec![c(0.0, 0.0); n];
            e[j] = c(1.0, 0.0);
            Ok(continue_along(ns, lp, &e, None, &opts)?.values)
        })
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col?.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > 1e12 {
        return Err(Error::ToleranceNotMet(format!("monodromy matrix is numerically singular (cond {condition:.3e})")));
    }
    Ok(MonodromyMatrix { matrix: m, base: lp.start(), loop_length: lp.length(), condition })
}

pub fn monodromy(sys: &LinearODESystem, lp: &ContourPath, tol: f64) -> Result<MonodromyMatrix> {
    monodromy_numeric(&NumericSystem::from_system(sys)?, lp, tol)
}

pub fn operator_monodromy(d: &DiffOperator, lp: &ContourPath, tol: f64) -> Result<MonodromyMatrix> {
    monodromy_numeric(&NumericSystem::from_operator(d), lp, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum QuasiMode {
    /// Eigenvalues must be roots of unity of bounded order.
    #[default]
    Strict,
    /// Eigenvalues need only have modulus one.
    Modulus,
}

#[derive(Clone, Debug)]
pub struct QuasiReport {
    pub ok: bool,
    pub eigenvalues: Vec<C>,
    /// Matched root-of-unity order per eigenvalue (`None` if unmatched or in
    /// modulus mode).
    pub orders: Vec<Option<u32>>,
}

pub fn eigenvalues(m: &DMatrix<C>) -> Vec<C> {
    let mut ev: Vec<C> = m.clone().schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default();
    ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    ev
}

/// Smallest `q ≤ max_order` with `λ` within `tol` of a primitive `q`-th root of unity.
pub fn root_of_unity_order(l: C, tol: f64, max_order: u32) -> Option<u32> {
    let turns = l.arg() / (2.0 * PI);
    (1..=max_order).find(|&q| {
        let p = (turns * q as f64).round();
        (l - C::from_polar(1.0, 2.0 * PI * p / q as f64)).norm() <= tol
    })
}

pub fn is_quasiunipotent(m: &DMatrix<C>, tol: f64, max_order: u32, mode: QuasiMode) -> QuasiReport {
    let ev = eigenvalues(m);
    let orders: Vec<Option<u32>> = match mode {
        QuasiMode::Strict => ev.iter().map(|&l| root_of_unity_order(l, tol, max_order)).collect(),
        QuasiMode::Modulus => vec![None; ev.len()],
    };
    let ok = match mode {
        QuasiMode::Strict => orders.iter().all(Option::is_some),
        QuasiMode::Modulus => ev.iter().all(|l| (l.norm() - 1.0).abs() <= tol),
    };
    QuasiReport { ok, eigenvalues: ev, orders }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub formula: String,
    pub inputs: BTreeMap<String, f64>,
    /// `None` when the value overflows a double.
    pub value: Option<f64>,
    /// `log₂ log₂` of the bound, for bounds too large to evaluate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log2_log2: Option<f64>,
    pub certified: bool,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// The normalizing chart `s ↦ r·s + z₀` with `z₀ = γ(0)`, `r = dist(γ, Σ)`.
pub fn normalizing_chart(d: &DiffOperator, path: &ContourPath) -> MobiusMap {
    let r = path.nearest(&d.singular_points()).map(|(_, r)| r).unwrap_or(1.0);
    let z0 = path.start();
    let q = |v: f64| approximate(v, 1e-12 * v.abs().max(1.0));
    MobiusMap::affine(QI::new(q(r), Rational::default()), QI::new(q(z0.re), q(z0.im))).expect("r > 0")
}

fn max_degree(d: &DiffOperator) -> usize {
    d.coeffs().iter().filter_map(|p| p.degree()).max().unwrap_or(0)
}

/// `k·S·|γ|·(R/r)^{C_var·d}` for `D` and `γ` transported to the chart `φ`
/// (`t = φ(s)`). Geometry in the chart is measured on a fine sampling of `γ`;
/// `R` is the radius of the origin-centred disk containing `φ⁻¹(γ)` widened by
/// `2r`, so `R/r ≥ 2`.
pub fn var_arg_bound(d: &DiffOperator, path: &ContourPath, chart: &MobiusMap, c_var: f64) -> BoundReport {
    let dp = pullback(d, chart);
    let inv = chart.inverse();
    let n = 4096;
    let total = path.length();
    let mut samples = Vec::with_capacity(n + 1);
    for piece in &path.pieces {
        let l = piece.length();
        let m = ((n as f64 * l / total.max(f64::MIN_POSITIVE)).ceil() as usize).max(2);
        for i in 0..=m {
            samples.push(inv.apply(piece.point(l * i as f64 / m as f64)));
        }
    }
    let len: f64 = samples.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let sig = dp.singular_points();
    let r = if sig.is_empty() {
        1.0
    } else {
        samples.iter().map(|z| sig.iter().map(|s| (s - z).norm()).fold(f64::INFINITY, f64::min)).fold(f64::INFINITY, f64::min)
    };
    let big_r = samples.iter().map(|z| z.norm()).fold(0.0, f64::max) + 2.0 * r;
    let k = dp.order() as f64;
    let s = affine_slope(&dp).value;
    let deg = max_degree(&dp) as f64;
    let v = k * s * len * (big_r / r).powf(c_var * deg);
    let inputs = BTreeMap::from([
        ("k".to_string(), k),
        ("S".to_string(), s),
        ("length".to_string(), len),
        ("R".to_string(), big_r),
        ("r".to_string(), r),
        ("R_over_r".to_string(), big_r / r),
        ("d".to_string(), deg),
        ("C_var".to_string(), c_var),
    ]);
    BoundReport { formula: "k*S*|gamma|*(R/r)^(C_var*d)".into(), inputs, value: finite(v), log2_log2: None, certified: false }
}

/// `(2k′+1)(2B+1)`.
pub fn petrov_bound(k_prime: usize, b: f64) -> f64 {
    (2.0 * k_prime as f64 + 1.0) * (2.0 * b + 1.0)
}

/// Concentric annulus `r_in < |t − center| < r_out`; `r_in = 0` is a punctured disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub center: C,
    pub r_in: f64,
    pub r_out: f64,
}

impl Annulus {
    fn equator(&self) -> f64 {
        if self.r_in > 0.0 {
            (self.r_in * self.r_out).sqrt()
        } else {
            0.5 * self.r_out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// `B` is the measured variation of argument of the given solution.
    #[default]
    Empirical,
    /// `B` is the larger of the two `var_arg_bound` values.
    Formula,
}

#[derive(Clone, Debug)]
pub struct CountConfig {
    pub tol: f64,
    pub qu_tol: f64,
    pub max_order: u32,
    pub qu_mode: QuasiMode,
    pub bound_mode: BoundMode,
    pub c_var: f64,
    /// Punctured disks are counted down to this fraction of their radius.
    pub puncture_ratio: f64,
    /// The exterior region is truncated at this multiple of the outer radius.
    pub exterior_ratio: f64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            tol: 1e-9,
            qu_tol: 1e-6,
            max_order: 12,
            qu_mode: QuasiMode::Strict,
            bound_mode: BoundMode::Empirical,
            c_var: 2.0,
            puncture_ratio: 1e-3,
            exterior_ratio: 4.0,
        }
    }
}

/// A solution of a system or operator given by its value at `base`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub base: C,
    pub initial: Vec<C>,
    /// The scalar counted is `functional · Y`.
    pub functional: Vec<C>,
}

impl Solution {
    /// `y` itself for an operator solution with `(y, y′, …)(base) = initial`.
    pub fn scalar(base: C, initial: Vec<C>) -> Self {
        let mut f = vec![c(0.0, 0.0); initial.len()];
        f[0] = c(1.0, 0.0);
        Solution { base, initial, functional: f }
    }
}

/// Value of the solution at `target`, continued along a polyline from the base.
/// The straight segment is tried first, then detours through nearby points.
pub fn transport(ns: &NumericSystem, sol: &Solution, target: C, tol: f64) -> Result<Vec<C>> {
    if (target - sol.base).norm() <= 1e-15 * target.norm().max(1.0) {
        return Ok(sol.initial.clone());
    }
    let opts = ContinuationOptions::with_tol(tol);
    let clearance = |p: &ContourPath| p.nearest(ns.singular_points()).map(|(_, d)| d).unwrap_or(f64::INFINITY);
    let direct = ContourPath::segment(sol.base, target);
    let mut best = (clearance(&direct), direct);
    let span = (target - sol.base).norm();
    let mid = (target + sol.base) * 0.5;
    let normal = (target - sol.base) * c(0.0, 1.0);
    for k in 1..=8 {
        if best.0 > 1e-3 * span {
            break;
        }
        for sgn in [1.0, -1.0] {
            let via = mid + normal * (sgn * 0.25 * k as f64);
            let p = ContourPath::segment(sol.base, via).then(&ContourPath::segment(via, target))?;
            let cl = clearance(&p);
            if cl > best.0 {
                best = (cl, p);
            }
        }
    }
    Ok(continue_along(ns, &best.1, &sol.initial, None, &opts)?.values)
}

/// Winding number of `functional · Y` along the closed `boundary`, for `Y`
/// given at `boundary.start()`.
pub fn winding_number(ns: &NumericSystem, boundary: &ContourPath, initial: &[C], functional: &[C], tol: f64) -> Result<i64> {
    if !boundary.closed {
        return Err(Error::InvalidInput("zero counting needs a closed boundary".into()));
    }
    let r = continue_along(ns, boundary, initial, Some(functional), &ContinuationOptions::with_tol(tol)).map_err(|e| match e {
        Error::ZeroOnPath { re, im } => Error::ZeroOnBoundary { re, im },
        e => e,
    })?;
    let w = r.variation_of_argument / (2.0 * PI);
    if (w - w.round()).abs() > 0.1 {
        return Err(Error::NonIntegerWinding(w));
    }
    Ok(w.round() as i64)
}

/// Zeros of the solution inside a simply connected region with the given
/// counterclockwise boundary.
pub fn count_zeros(ns: &NumericSystem, sol: &Solution, boundary: &ContourPath, tol: f64) -> Result<i64> {
    let y0 = transport(ns, sol, boundary.start(), tol)?;
    winding_number(ns, boundary, &y0, &sol.functional, tol)
}

pub fn count_operator_zeros(d: &DiffOperator, sol: &Solution, boundary: &ContourPath, tol: f64) -> Result<i64> {
    count_zeros(&NumericSystem::from_operator(d), sol, boundary, tol)
}

/// Argument principle for an explicit function, sampled adaptively so that
/// consecutive argument increments stay below `π/8`.
pub fn count_zeros_fn(f: impl Fn(C) -> C, boundary: &ContourPath) -> Result<i64> {
    let mut total = 0.0;
    for piece in &boundary.pieces {
        let l = piece.length();
        // start from a fixed subdivision so a full turn between two samples cannot alias to zero
        let n0 = 64;
        let mut stack: Vec<(f64, f64)> = (0..n0).rev().map(|k| (l * k as f64 / n0 as f64, l * (k + 1) as f64 / n0 as f64)).collect();
        let mut local = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (f(piece.point(a)), f(piece.point(m)), f(piece.point(b)));
            let scale = fa.norm().max(fb.norm()).max(fm.norm());
            for (s, fs) in [(a, fa), (m, fm), (b, fb)] {
                if fs.norm() <= 1e-14 * scale.max(1e-300) || fs.norm() == 0.0 {
                    let z = piece.point(s);
                    return Err(Error::ZeroOnBoundary { re: z.re, im: z.im });
                }
            }
            let (d1, d2) = ((fm / fa).arg(), (fb / fm).arg());
            let ok = d1.abs() <= PI / 8.0 && d2.abs() <= PI / 8.0;
            if !ok && b - a > 1e-13 * l.max(1.0) {
                stack.push((m, b));
                stack.push((a, m));
            } else if !ok {
                let z = piece.point(a);
                return Err(Error::ZeroOnBoundary { re: z.re, im: z.im });
            } else {
                local.push(d1 + d2);
            }
        }
        total += local.iter().sum::<f64>();
    }
    let w = total / (2.0 * PI);
    if (w - w.round()).abs() > 0.1 {
        return Err(Error::NonIntegerWinding(w));
    }
    Ok(w.round() as i64)
}

/// Boundary of the annulus slit along the ray at angle `theta`: outer circle
/// counterclockwise, inward along the slit, inner circle clockwise, back out.
pub fn slit_annulus_boundary(a: &Annulus, r_in: f64, theta: f64) -> Result<ContourPath> {
    let u = C::from_polar(1.0, theta);
    let outer = a.center + u * a.r_out;
    let inner = a.center + u * r_in;
    ContourPath::new(vec![
        Piece::Arc { center: a.center, radius: a.r_out, start: theta, sweep: 2.0 * PI },
        Piece::Segment { a: outer, b: inner },
        Piece::Arc { center: a.center, radius: r_in, start: theta, sweep: -2.0 * PI },
        Piece::Segment { a: inner, b: outer },
    ])
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnulusReport {
    pub k: usize,
    pub k_prime: usize,
    pub b: f64,
    pub bound: Option<f64>,
    pub measured_zeros: Option<i64>,
    pub eigenvalues: Vec<(f64, f64)>,
    pub orders: Vec<Option<u32>>,
    pub report: BoundReport,
}

fn translation(center: C) -> MobiusMap {
    let q = |v: f64| approximate(v, 1e-12 * v.abs().max(1.0));
    MobiusMap::affine(QI::real(Rational::from_integer(1.into())), QI::new(q(center.re), q(center.im))).expect("unit scale")
}

/// Petrov-trick bound `(2k′+1)(2B+1)` for zeros of solutions of `D` in the
/// annulus, with `k′` the order of the symmetrization about the line through
/// the centre. In empirical mode `B` is the measured variation of argument of
/// `sol` along the boundary circles, and the zeros in the slit annulus are
/// counted too.
pub fn annulus_zero_bound(d: &DiffOperator, a: &Annulus, sol: Option<&Solution>, cfg: &CountConfig) -> Result<AnnulusReport> {
    if a.r_out <= a.r_in || a.r_in < 0.0 {
        return Err(Error::InvalidInput("annulus radii must satisfy 0 <= r_in < r_out".into()));
    }
    let ns = NumericSystem::from_operator(d);
    let sig = ns.singular_points().to_vec();
    let r_in = if a.r_in > 0.0 { a.r_in } else { cfg.puncture_ratio * a.r_out };
    let outer = ContourPath::circle(a.center, a.r_out);
    let inner = ContourPath::circle(a.center, r_in);
    for circ in [&outer, &inner] {
        check_margin(&ns, circ)?;
        if let Some((p, dist)) = circ.nearest(&sig) {
            if dist < 1e-9 * a.r_out {
                return Err(Error::PathTooClose { re: p.re, im: p.im, distance: dist });
            }
        }
    }
    let eq = ContourPath::circle(a.center, a.equator());
    let m = monodromy_numeric(&ns, &eq, cfg.tol)?;
    let q = is_quasiunipotent(&m.matrix, cfg.qu_tol, cfg.max_order, cfg.qu_mode);
    let eigen: Vec<(f64, f64)> = q.eigenvalues.iter().map(|z| (z.re, z.im)).collect();
    if !q.ok {
        return Err(Error::NotQuasiunipotent(eigen));
    }
    let moved = pullback(d, &translation(a.center));
    let k_prime = symmetrize(&moved, &Curve::real_axis())?.order();

    let mut inputs = BTreeMap::from([("k_prime".to_string(), k_prime as f64)]);
    let (b, measured) = match cfg.bound_mode {
        BoundMode::Formula => {
            let b = [&outer, &inner]
                .iter()
                .map(|p| var_arg_bound(d, p, &normalizing_chart(d, p), cfg.c_var).value.unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            let measured = match sol {
                Some(s) => Some(count_slit_annulus(&ns, s, a, r_in, cfg)?),
                None => None,
            };
            (b, measured)
        }
        BoundMode::Empirical => {
            let s = sol.ok_or_else(|| Error::InvalidInput("empirical mode needs a solution".into()))?;
            let mut b: f64 = 0.0;
            for circ in [&outer, &inner] {
                let y0 = transport(&ns, s, circ.start(), cfg.tol)?;
                let r = continue_along(&ns, circ, &y0, Some(&s.functional), &ContinuationOptions::with_tol(cfg.tol))?;
                b = b.max(r.variation_of_argument.abs());
            }
            (b, Some(count_slit_annulus(&ns, s, a, r_in, cfg)?))
        }
    };
    inputs.insert("B".into(), b);
    let v = petrov_bound(k_prime, b);
    let report = BoundReport { formula: "(2*k_prime+1)*(2*B+1)".into(), inputs, value: finite(v), log2_log2: None, certified: false };
    Ok(AnnulusReport { k: d.order(), k_prime, b, bound: finite(v), measured_zeros: measured, eigenvalues: eigen, orders: q.orders, report })
}

/// Zeros in the annulus cut along a ray; the ray angle is moved off zeros of
/// the solution when needed.
fn count_slit_annulus(ns: &NumericSystem, sol: &Solution, a: &Annulus, r_in: f64, cfg: &CountConfig) -> Result<i64> {
    let mut last = None;
    for k in 0..12 {
        let theta = 0.1234 + 0.7 * k as f64;
        let bd = slit_annulus_boundary(a, r_in, theta)?;
        match count_zeros(ns, sol, &bd, cfg.tol) {
            Err(e @ (Error::ZeroOnBoundary { .. } | Error::NonIntegerWinding(_))) => last = Some(e),
            r => return r,
        }
    }
    Err(last.unwrap())
}

/// Shape of the headline bound on the number of zeros of Abelian integrals of
/// degree `n+1` forms, with unspecified constant `c`.
pub fn headline_bound(n: u64, c: f64) -> BoundReport {
    let nf = n as f64;
    let exponent = c * nf.powi(60) * nf.log2();
    let v = 2f64.powf(2f64.powf(exponent));
    BoundReport {
        formula: format!("2^(2^(C·n^60·log n)) with n = {n}, C = {c}"),
        inputs: BTreeMap::from([("n".to_string(), nf), ("C".to_string(), c)]),
        value: finite(v),
        log2_log2: Some(exponent),
        certified: false,
    }
}

/// `s^(2^(C·(d·ℓ⁴·m)^5))` for a system of size `s`, degree `d`, dimension `ℓ`
/// and `m` parameters.
pub fn system_bound(d: u64, ell: u64, m: u64, s: f64, c: f64) -> BoundReport {
    let poly = c * ((d * ell.pow(4) * m) as f64).powi(5);
    let log2s = s.log2();
    let log2_log2 = poly + log2s.log2();
    let v = 2f64.powf(log2s * 2f64.powf(poly));
    BoundReport {
        formula: format!("s^(2^(C·(d·ell^4·m)^5)) with d = {d}, ell = {ell}, m = {m}, s = {s}, C = {c}"),
        inputs: BTreeMap::from([
            ("d".to_string(), d as f64),
            ("ell".to_string(), ell as f64),
            ("m".to_string(), m as f64),
            ("s".to_string(), s),
            ("C".to_string(), c),
        ]),
        value: finite(v),
        log2_log2: Some(log2_log2),
        certified: false,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionCount {
    pub region: usize,
    pub kind: String,
    pub measured_zeros: i64,
    /// Certified column: the argument-principle count for simply connected
    /// regions, `(2k′+1)(2B+1)` for annuli.
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annulus: Option<AnnulusReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroCountReport {
    pub schema: String,
    pub regions: Vec<RegionCount>,
    pub total_measured: i64,
    pub total_bound: Option<f64>,
    /// Every measured count is within its bound.
    pub sound: bool,
}

fn region_annulus(s: &SlitSystem, kind: &RegionKind, cfg: &CountConfig) -> Result<Annulus> {
    let RegionKind::Annulus { outer, inner } = kind else { unreachable!() };
    let circle = |b: &Boundary| match b {
        Boundary::Circle { id } => Some(s.circles[*id]),
        _ => None,
    };
    let concentric = |a: C, b: C, r: f64| (a - b).norm() <= 1e-9 * r.max(1.0);
    match (outer, inner) {
        (Boundary::Infinity, Boundary::Circle { id }) => {
            let c0 = s.circles[*id];
            Ok(Annulus { center: c0.center, r_in: c0.radius, r_out: cfg.exterior_ratio * c0.radius })
        }
        (Boundary::Circle { id }, Boundary::Point { at }) if concentric(s.circles[*id].center, *at, s.circles[*id].radius) => {
            Ok(Annulus { center: *at, r_in: 0.0, r_out: s.circles[*id].radius })
        }
        (o, i) => match (circle(o), circle(i)) {
            (Some(a), Some(b)) if concentric(a.center, b.center, a.radius) => {
                let (big, small) = if a.radius > b.radius { (a, b) } else { (b, a) };
                Ok(Annulus { center: big.center, r_in: small.radius, r_out: big.radius })
            }
            _ => Err(Error::Unsupported("only concentric annuli are counted".into())),
        },
    }
}

/// Zeros of `sol` in every region of the slit system: argument principle on
/// simply connected regions, slit count plus the Petrov-trick bound on annuli.
/// The exterior annulus is truncated at `exterior_ratio` times the outer radius.
pub fn count_region_partition(d: &DiffOperator, s: &SlitSystem, sol: &Solution, cfg: &CountConfig) -> Result<ZeroCountReport> {
    let ns = NumericSystem::from_operator(d);
    let counts: Vec<Result<RegionCount>> = s
        .regions
        .par_iter()
        .map(|r| match &r.kind {
            RegionKind::SimplyConnected { .. } => {
                let bd = region_boundary(s, r)?;
                let n = count_zeros(&ns, sol, &bd, cfg.tol)?;
                Ok(RegionCount { region: r.id, kind: "simply-connected".into(), measured_zeros: n, bound: Some(n as f64), annulus: None })
            }
            kind @ RegionKind::Annulus { .. } => {
                let a = region_annulus(s, kind, cfg)?;
                let rep = annulus_zero_bound(d, &a, Some(sol), cfg)?;
                Ok(RegionCount {
                    region: r.id,
                    kind: "annulus".into(),
                    measured_zeros: rep.measured_zeros.unwrap_or(0),
                    bound: rep.bound,
                    annulus: Some(rep),
                })
            }
        })
        .collect();
    let regions = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let total_measured = regions.iter().map(|r| r.measured_zeros).sum();
    let total_bound = regions.iter().map(|r| r.bound).sum::<Option<f64>>();
    let sound = regions.iter().all(|r| r.bound.map_or(true, |b| r.measured_zeros as f64 <= b));
    Ok(ZeroCountReport { schema: "abint/zero-count/v1".into(), regions, total_measured, total_bound, sound })
}
