//! Abelian integrals over real ovals of `{H = t}`, computed by integrating the
//! arc-length normalized Hamiltonian flow together with the integrands.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::to_f64;
use crate::algebra::{poly_roots, DenseMatrix, Field, Rational, UniPoly, UniRat};
use crate::error::{Error, Result};
use crate::numeric::{integrate, OdeOptions};
use crate::petrov::{basis_forms, Hamiltonian, Poly2, PolyForm};

#[derive(Clone, Debug)]
pub struct OvalConfig {
    pub ode: OdeOptions,
    /// Levels closer than this to a real critical value are rejected.
    pub critical_margin: f64,
    pub closure_tol: f64,
    /// Seeds farther than this from the level (relative) are rejected.
    pub seed_tol: f64,
    pub escape_radius: f64,
    pub max_length: f64,
}

impl Default for OvalConfig {
    fn default() -> Self {
        OvalConfig {
            ode: OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() },
            critical_margin: 1e-6,
            closure_tol: 1e-8,
            seed_tol: 1e-6,
            escape_radius: 1e4,
            max_length: 1e5,
        }
    }
}

/// Polynomial with `f64` coefficients for fast evaluation.
#[derive(Clone, Debug)]
pub struct NumPoly2 {
    terms: Vec<(i32, i32, f64)>,
}

impl NumPoly2 {
    pub fn new(p: &Poly2<Rational>) -> Self {
        NumPoly2 { terms: p.terms().map(|((i, j), c)| (*i as i32, *j as i32, to_f64(c))).collect() }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
    }

    pub fn eval_c(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms.iter().map(|&(i, j, c)| x.powi(i) * y.powi(j) * c).sum()
    }

    /// Sum of `|c|·|x|^i|y|^j`, the natural scale of rounding in `eval`.
    pub fn magnitude(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c.abs() * x.abs().powi(i) * y.abs().powi(j)).sum()
    }
}

struct Compiled {
    h: NumPoly2,
    hx: NumPoly2,
    hy: NumPoly2,
}

impl Compiled {
    fn new(h: &Hamiltonian<Rational>) -> Self {
        let p = h.poly();
        Compiled { h: NumPoly2::new(p), hx: NumPoly2::new(&p.dx()), hy: NumPoly2::new(&p.dy()) }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub x: Complex64,
    pub y: Complex64,
    pub value: Complex64,
}

fn as_y_poly(p: &Poly2<Rational>) -> Vec<UniRat<Rational>> {
    let dy = p.terms().map(|((_, j), _)| *j).max().unwrap_or(0);
    let mut cs = vec![Vec::<Rational>::new(); dy as usize + 1];
    for ((i, j), c) in p.terms() {
        let v = &mut cs[*j as usize];
        if v.len() <= *i as usize {
            v.resize(*i as usize + 1, Rational::zero());
        }
        v[*i as usize] = c.clone();
    }
    cs.into_iter().map(|c| UniRat::from_poly(UniPoly::new(c))).collect()
}

/// `Res_y(a, b)` as a polynomial in `x`, via the Sylvester determinant.
pub fn resultant_y(a: &Poly2<Rational>, b: &Poly2<Rational>) -> UniPoly<Rational> {
    let pa = as_y_poly(a);
    let pb = as_y_poly(b);
    let (m, n) = (pa.len() - 1, pb.len() - 1);
    if m + n == 0 {
        return UniPoly::one();
    }
    let size = m + n;
    let mut s = DenseMatrix::<UniRat<Rational>>::zeros(size, size);
    for r in 0..n {
        for (k, c) in pa.iter().rev().enumerate() {
            s.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in pb.iter().rev().enumerate() {
            s.set(n + r, r + k, c.clone());
        }
    }
    let d = s.determinant();
    assert_eq!(d.den(), &UniPoly::one(), "determinant of polynomial entries");
    d.num().clone()
}

fn univariate_roots_q(p: &UniPoly<Rational>) -> Vec<Complex64> {
    let cs: Vec<Complex64> = p.coeffs().iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect();
    poly_roots(&cs)
}

fn newton_gradient(c: &Compiled, h: &Hamiltonian<Rational>, mut x: Complex64, mut y: Complex64) -> (Complex64, Complex64) {
    let p = h.poly();
    let (hxx, hxy, hyy) = (NumPoly2::new(&p.dx().dx()), NumPoly2::new(&p.dx().dy()), NumPoly2::new(&p.dy().dy()));
    for _ in 0..30 {
        let (gx, gy) = (c.hx.eval_c(x, y), c.hy.eval_c(x, y));
        let (a, b, d) = (hxx.eval_c(x, y), hxy.eval_c(x, y), hyy.eval_c(x, y));
        let det = a * d - b * b;
        if det.norm() < 1e-300 {
            break;
        }
        let dx = (d * gx - b * gy) / det;
        let dy = (a * gy - b * gx) / det;
        x -= dx;
        y -= dy;
        if dx.norm() + dy.norm() < 1e-15 * (1.0 + x.norm() + y.norm()) {
            break;
        }
    }
    (x, y)
}

/// Critical points of `H` from the resultant of `H_x`, `H_y` in `y`.
pub fn critical_points(h: &Hamiltonian<Rational>) -> Result<Vec<CriticalPoint>> {
    let p = h.poly();
    let (hx, hy) = (p.dx(), p.dy());
    if hx.is_zero() || hy.is_zero() {
        return Err(Error::DegenerateHamiltonian("H depends on one variable only".into()));
    }
    let r = resultant_y(&hx, &hy);
    if r.is_zero() {
        return Err(Error::DegenerateHamiltonian("non-isolated critical points".into()));
    }
    let c = Compiled::new(h);
    let ycoef = |poly: &Poly2<Rational>, x: Complex64| -> Vec<Complex64> {
        let dy = poly.terms().map(|((_, j), _)| *j).max().unwrap_or(0) as usize;
        let mut v = vec![Complex64::new(0.0, 0.0); dy + 1];
        for ((i, j), cf) in poly.terms() {
            v[*j as usize] += x.powi(*i as i32) * to_f64(cf);
        }
        v
    };
    let mut out: Vec<CriticalPoint> = Vec::new();
    for x in univariate_roots_q(&r) {
        let hyc = ycoef(&hy, x);
        let ys = if hyc.len() > 1 { poly_roots(&hyc) } else { poly_roots(&ycoef(&hx, x)) };
        for y in ys {
            let (x, y) = newton_gradient(&c, h, x, y);
            let scale = 1.0 + x.norm() + y.norm();
            let g = c.hx.eval_c(x, y).norm() + c.hy.eval_c(x, y).norm();
            if g > 1e-7 * scale.powi(h.n() as i32 + 1) {
                continue;
            }
            if out.iter().any(|q| (q.x - x).norm() + (q.y - y).norm() < 1e-8 * scale) {
                continue;
            }
            out.push(CriticalPoint { x, y, value: c.h.eval_c(x, y) });
        }
    }
    Ok(out)
}

/// Distinct critical values, sorted by real then imaginary part.
pub fn critical_values(h: &Hamiltonian<Rational>) -> Result<Vec<Complex64>> {
    let mut v: Vec<Complex64> = Vec::new();
    for p in critical_points(h)? {
        let z = Complex64::new(clean(p.value.re), clean(p.value.im));
        if !v.iter().any(|w| (w - z).norm() < 1e-9 * (1.0 + z.norm())) {
            v.push(z);
        }
    }
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(v)
}

fn clean(v: f64) -> f64 {
    if v.abs() < 1e-13 {
        0.0
    } else {
        v
    }
}

/// Real nondegenerate local extrema of `H`, the centers of oval nests.
pub fn centers(h: &Hamiltonian<Rational>) -> Result<Vec<(f64, f64, f64)>> {
    let p = h.poly();
    let (hxx, hxy, hyy) = (NumPoly2::new(&p.dx().dx()), NumPoly2::new(&p.dx().dy()), NumPoly2::new(&p.dy().dy()));
    let mut out = Vec::new();
    for c in critical_points(h)? {
        if c.x.im.abs() > 1e-9 || c.y.im.abs() > 1e-9 {
            continue;
        }
        let (x, y) = (c.x.re, c.y.re);
        let det = hxx.eval(x, y) * hyy.eval(x, y) - hxy.eval(x, y).powi(2);
        if det > 1e-12 {
            out.push((x, y, c.value.re));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OvalTrace {
    pub t: f64,
    pub seed: (f64, f64),
    /// Arc length of the oval.
    pub length: f64,
    /// Vertices in counterclockwise order, starting at the seed.
    pub points: Vec<(f64, f64)>,
    /// `+1` when the flow `(−H_y, H_x)` runs counterclockwise.
    pub orientation: f64,
    pub closure_error: f64,
    /// Largest `|H − t|` over the vertices, relative to the term magnitudes.
    pub level_error: f64,
}

fn check_level(h: &Hamiltonian<Rational>, t: f64, cfg: &OvalConfig) -> Result<()> {
    for v in critical_values(h)? {
        if v.im.abs() < cfg.critical_margin && (v.re - t).abs() < cfg.critical_margin * (1.0 + t.abs()) {
            return Err(Error::CriticalLevel(t));
        }
    }
    Ok(())
}

fn project(c: &Compiled, t: f64, mut x: f64, mut y: f64) -> (f64, f64) {
    for _ in 0..20 {
        let r = c.h.eval(x, y) - t;
        let (gx, gy) = (c.hx.eval(x, y), c.hy.eval(x, y));
        let g2 = gx * gx + gy * gy;
        if g2 == 0.0 {
            break;
        }
        x -= r * gx / g2;
        y -= r * gy / g2;
        if r.abs() <= 1e-15 * (1.0 + c.h.magnitude(x, y)) {
            break;
        }
    }
    (x, y)
}

fn integrand_terms(forms: &[PolyForm<Rational>]) -> Vec<(NumPoly2, NumPoly2)> {
    forms
        .iter()
        .map(|f| match f {
            PolyForm::One { p, q } => (NumPoly2::new(p), NumPoly2::new(q)),
            PolyForm::Two { .. } => panic!("integrands must be one-forms"),
        })
        .collect()
}

fn flow<'a>(c: &'a Compiled, ints: &'a [(NumPoly2, NumPoly2)]) -> impl FnMut(f64, &[f64]) -> Vec<f64> + 'a {
    move |_, z| {
        let (x, y) = (z[0], z[1]);
        let (gx, gy) = (c.hx.eval(x, y), c.hy.eval(x, y));
        let g = (gx * gx + gy * gy).sqrt();
        let (vx, vy) = (-gy / g, gx / g);
        let mut out = Vec::with_capacity(2 + ints.len());
        out.push(vx);
        out.push(vy);
        for (p, q) in ints {
            out.push(p.eval(x, y) * vx + q.eval(x, y) * vy);
        }
        out
    }
}

/// Traces the oval of `{H = t}` through `seed` and integrates `forms` over it
/// (counterclockwise).
pub fn trace_oval_with(
    h: &Hamiltonian<Rational>,
    t: f64,
    seed: (f64, f64),
    forms: &[PolyForm<Rational>],
    cfg: &OvalConfig,
) -> Result<(OvalTrace, Vec<f64>)> {
    check_level(h, t, cfg)?;
    let c = Compiled::new(h);
    let r0 = c.h.eval(seed.0, seed.1) - t;
    if r0.abs() > cfg.seed_tol * (1.0 + c.h.magnitude(seed.0, seed.1)) {
        return Err(Error::SeedOffCurve);
    }
    let (x0, y0) = project(&c, t, seed.0, seed.1);
    let ints = integrand_terms(forms);
    let mut f = flow(&c, &ints);
    let z0: Vec<f64> = [x0, y0].into_iter().chain(std::iter::repeat_n(0.0, ints.len())).collect();
    let v0 = {
        let d = f(0.0, &z0);
        (d[0], d[1])
    };
    let g = |z: &[f64]| (z[0] - x0) * v0.0 + (z[1] - y0) * v0.1;
    let mut points = vec![(x0, y0)];
    let mut prev: (f64, Vec<f64>) = (0.0, z0.clone());
    let mut extent: f64 = 0.0;
    let mut crossing: Option<(f64, Vec<f64>)> = None;
    let esc = cfg.escape_radius;
    let sol = integrate(
        flow(&c, &ints),
        0.0,
        cfg.max_length,
        z0.clone(),
        &cfg.ode,
        |_, z| 0.25 * (1.0 + z[0].hypot(z[1])),
        |s, z| {
            if z[0].hypot(z[1]) > esc {
                return Err(Error::NotClosed(format!("level curve leaves radius {esc}")));
            }
            let d = (z[0] - x0).hypot(z[1] - y0);
            extent = extent.max(d);
            if g(&prev.1) < 0.0 && g(z) >= 0.0 && d < 0.25 * extent {
                crossing = Some(prev.clone());
                return Ok(true);
            }
            points.push((z[0], z[1]));
            prev = (s, z.to_vec());
            Ok(false)
        },
    )?;
    let Some((s_prev, z_prev)) = crossing else {
        return Err(Error::NotClosed(format!("no closure within length {}", sol.s)));
    };
    // secant iteration on the section function
    let advance = |h: f64| -> Result<Vec<f64>> {
        if h == 0.0 {
            return Ok(z_prev.clone());
        }
        Ok(integrate(flow(&c, &ints), 0.0, h, z_prev.clone(), &cfg.ode, |_, _| f64::INFINITY, |_, _| Ok(false))?.y)
    };
    let (mut ha, mut ga) = (0.0, g(&z_prev));
    let mut hb = -ga / (v0.0 * v0.0 + v0.1 * v0.1);
    let mut zb = advance(hb)?;
    let mut gb = g(&zb);
    for _ in 0..50 {
        if gb.abs() < 1e-16 || (hb - ha).abs() < 1e-16 {
            break;
        }
        let hn = hb - gb * (hb - ha) / (gb - ga);
        ha = hb;
        ga = gb;
        hb = hn;
        zb = advance(hb)?;
        gb = g(&zb);
    }
    let length = s_prev + hb;
    let closure_error = (zb[0] - x0).hypot(zb[1] - y0);
    if closure_error > cfg.closure_tol * (1.0 + extent) {
        return Err(Error::NotClosed(format!("closure error {closure_error:.3e}")));
    }
    let area: f64 = points.iter().zip(points.iter().cycle().skip(1)).map(|(a, b)| a.0 * b.1 - b.0 * a.1).sum::<f64>() / 2.0;
    let orientation = if area >= 0.0 { 1.0 } else { -1.0 };
    if orientation < 0.0 {
        points[1..].reverse();
    }
    let level_error = points.iter().map(|&(x, y)| (c.h.eval(x, y) - t).abs() / (1.0 + c.h.magnitude(x, y))).fold(0.0, f64::max);
    let values = zb[2..].iter().map(|v| v * orientation).collect();
    let trace = OvalTrace { t, seed: (x0, y0), length, points, orientation, closure_error, level_error };
    Ok((trace, values))
}

pub fn trace_oval(h: &Hamiltonian<Rational>, t: f64, seed: (f64, f64), cfg: &OvalConfig) -> Result<OvalTrace> {
    Ok(trace_oval_with(h, t, seed, &[], cfg)?.0)
}

/// `∮ ω` over a traced oval, counterclockwise.
pub fn abelian_integrals(h: &Hamiltonian<Rational>, forms: &[PolyForm<Rational>], trace: &OvalTrace, cfg: &OvalConfig) -> Result<Vec<f64>> {
    let c = Compiled::new(h);
    let ints = integrand_terms(forms);
    let z0: Vec<f64> = [trace.seed.0, trace.seed.1].into_iter().chain(std::iter::repeat_n(0.0, ints.len())).collect();
    let sol = integrate(flow(&c, &ints), 0.0, trace.length, z0, &cfg.ode, |_, _| f64::INFINITY, |_, _| Ok(false))?;
    Ok(sol.y[2..].iter().map(|v| v * trace.orientation).collect())
}

pub fn abelian_integral(h: &Hamiltonian<Rational>, form: &PolyForm<Rational>, trace: &OvalTrace, cfg: &OvalConfig) -> Result<f64> {
    Ok(abelian_integrals(h, std::slice::from_ref(form), trace, cfg)?[0])
}

/// A continuous family of ovals, seeded on the ray `center + s·direction`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OvalFamily {
    pub center: (f64, f64),
    pub direction: (f64, f64),
}

impl OvalFamily {
    /// The nest around the first center of `H`, seeded along the positive `x₁` axis.
    pub fn around_first_center(h: &Hamiltonian<Rational>) -> Result<Self> {
        let c = centers(h)?;
        let (x, y, _) = c.first().ok_or_else(|| Error::InvalidInput("H has no real local extremum".into()))?;
        Ok(OvalFamily { center: (*x, *y), direction: (1.0, 0.0) })
    }
}

/// First crossing of `{H = t}` along the family's ray.
pub fn seed_on_ray(h: &Hamiltonian<Rational>, fam: &OvalFamily, t: f64, cfg: &OvalConfig) -> Result<(f64, f64)> {
    let c = Compiled::new(h);
    let (cx, cy) = fam.center;
    let nd = fam.direction.0.hypot(fam.direction.1);
    let (dx, dy) = (fam.direction.0 / nd, fam.direction.1 / nd);
    let phi = |s: f64| c.h.eval(cx + s * dx, cy + s * dy) - t;
    let mut a = 0.0;
    let mut fa = phi(a);
    let mut ds = 1e-4;
    while a < cfg.escape_radius {
        let b = a + ds;
        let fb = phi(b);
        if fa == 0.0 && a > 0.0 {
            return Ok((cx + a * dx, cy + a * dy));
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                let fm = phi(m);
                if fm == 0.0 || hi - lo < 1e-16 * (1.0 + hi) {
                    lo = m;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            return Ok((cx + lo * dx, cy + lo * dy));
        }
        a = b;
        fa = fb;
        ds *= 1.05;
    }
    Err(Error::SeedOffCurve)
}

pub fn oval_at(h: &Hamiltonian<Rational>, fam: &OvalFamily, t: f64, cfg: &OvalConfig) -> Result<OvalTrace> {
    trace_oval(h, t, seed_on_ray(h, fam, t, cfg)?, cfg)
}

/// Seeds on `{H = t}` from sign changes along lines parallel to the axes
/// through the box `[−r, r]²`, then a coarse grid of such lines.
pub fn find_seeds(h: &Hamiltonian<Rational>, t: f64, r: f64) -> Vec<(f64, f64)> {
    let c = Compiled::new(h);
    let mut out = Vec::new();
    let n = 2000;
    let lines: Vec<f64> = std::iter::once(0.0).chain((1..=8).flat_map(|k| [k as f64 * r / 8.0, -(k as f64) * r / 8.0])).collect();
    for &off in &lines {
        for horizontal in [true, false] {
            let pt = |s: f64| if horizontal { (s, off) } else { (off, s) };
            let mut prev = None;
            for k in 0..=n {
                let s = -r + 2.0 * r * k as f64 / n as f64;
                let (x, y) = pt(s);
                let v = c.h.eval(x, y) - t;
                if let Some((ps, pv)) = prev {
                    if pv * v < 0.0 {
                        let (mut lo, mut hi, mut flo): (f64, f64, f64) = (ps, s, pv);
                        for _ in 0..100 {
                            let m = 0.5 * (lo + hi);
                            let (x, y) = pt(m);
                            let fm = c.h.eval(x, y) - t;
                            if (fm < 0.0) == (flo < 0.0) {
                                lo = m;
                                flo = fm;
                            } else {
                                hi = m;
                            }
                        }
                        out.push(pt(0.5 * (lo + hi)));
                    }
                }
                prev = Some((s, v));
            }
        }
        if !out.is_empty() && off == 0.0 {
            break;
        }
    }
    out
}

/// All distinct ovals through the seeds of [`find_seeds`].
pub fn find_ovals(h: &Hamiltonian<Rational>, t: f64, r: f64, cfg: &OvalConfig) -> Result<Vec<OvalTrace>> {
    check_level(h, t, cfg)?;
    let mut ovals: Vec<OvalTrace> = Vec::new();
    for s in find_seeds(h, t, r) {
        let near = |o: &OvalTrace| o.points.iter().any(|p| (p.0 - s.0).hypot(p.1 - s.1) < 1e-3 * (1.0 + o.length));
        if ovals.iter().any(near) {
            continue;
        }
        if let Ok(tr) = trace_oval(h, t, s, cfg) {
            ovals.push(tr);
        }
    }
    Ok(ovals)
}

/// Periods `X_α(t) = ∮ ω_α` over the family's oval at level `t`.
pub fn period_vector(h: &Hamiltonian<Rational>, fam: &OvalFamily, t: f64, cfg: &OvalConfig) -> Result<Vec<f64>> {
    let forms: Vec<PolyForm<Rational>> = basis_forms(h.n())?.iter().map(|b| b.omega()).collect();
    let seed = seed_on_ray(h, fam, t, cfg)?;
    Ok(trace_oval_with(h, t, seed, &forms, cfg)?.1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegralSample {
    pub t: Vec<f64>,
    /// `values[k][j]`: form `j` at `t[k]`.
    pub values: Vec<Vec<f64>>,
    /// Change of each value when the integration tolerance is tightened tenfold.
    pub errors: Vec<f64>,
}

pub fn sample_integrals(
    h: &Hamiltonian<Rational>,
    fam: &OvalFamily,
    forms: &[PolyForm<Rational>],
    ts: &[f64],
    cfg: &OvalConfig,
) -> Result<IntegralSample> {
    let mut fine = cfg.clone();
    fine.ode.rtol *= 0.1;
    fine.ode.atol *= 0.1;
    let rows: Vec<(Vec<f64>, f64)> = ts
        .par_iter()
        .map(|&t| {
            let seed = seed_on_ray(h, fam, t, cfg)?;
            let v = trace_oval_with(h, t, seed, forms, cfg)?.1;
            let w = trace_oval_with(h, t, seed, forms, &fine)?.1;
            let e = v.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok((v, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let (values, errors) = rows.into_iter().unzip();
    Ok(IntegralSample { t: ts.to_vec(), values, errors })
}

pub fn write_csv(sample: &IntegralSample, labels: &[String], out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "t,{}", labels.join(","))?;
    for (t, row) in sample.t.iter().zip(&sample.values) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.15e}")).collect();
        writeln!(out, "{t:.15e},{}", cells.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealZeroReport {
    /// Sign changes found: a lower bound on the number of zeros, blind to
    /// multiplicity.
    pub count: usize,
    pub locations: Vec<f64>,
}

/// Sign changes of `Σ c_j ∮ω_j` over `n_samples` points of `[a, b]`, each
/// located by bisection. `[a, b]` must contain no real critical value.
pub fn count_real_zeros(
    h: &Hamiltonian<Rational>,
    fam: &OvalFamily,
    forms: &[PolyForm<Rational>],
    combination: &[f64],
    interval: (f64, f64),
    n_samples: usize,
    cfg: &OvalConfig,
) -> Result<RealZeroReport> {
    let (a, b) = interval;
    if !(a < b) || n_samples < 2 {
        return Err(Error::InvalidInput("need a < b and at least two samples".into()));
    }
    for v in critical_values(h)? {
        if v.im.abs() < 1e-12 && v.re >= a && v.re <= b {
            return Err(Error::CriticalLevel(v.re));
        }
    }
    let ts: Vec<f64> = (0..n_samples).map(|k| a + (b - a) * k as f64 / (n_samples - 1) as f64).collect();
    let sample = sample_integrals(h, fam, forms, &ts, cfg)?;
    count_sign_changes(&sample, combination, |t| {
        let seed = seed_on_ray(h, fam, t, cfg)?;
        let v = trace_oval_with(h, t, seed, forms, cfg)?.1;
        Ok(dot(&v, combination))
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sign-change scan over precomputed samples; `eval` refines by bisection.
pub fn count_sign_changes(
    sample: &IntegralSample,
    combination: &[f64],
    mut eval: impl FnMut(f64) -> Result<f64>,
) -> Result<RealZeroReport> {
    let vals: Vec<f64> = sample.values.iter().map(|v| dot(v, combination)).collect();
    let mut locations = Vec::new();
    for k in 1..vals.len() {
        let (fa, fb) = (vals[k - 1], vals[k]);
        if fa == 0.0 || fa * fb >= 0.0 {
            if fb == 0.0 && k + 1 < vals.len() && fa * vals[k + 1] < 0.0 {
                locations.push(sample.t[k]);
            }
            continue;
        }
        let (mut lo, mut hi, mut flo) = (sample.t[k - 1], sample.t[k], fa);
        for _ in 0..40 {
            let m = 0.5 * (lo + hi);
            let fm = eval(m)?;
            if fm == 0.0 {
                lo = m;
                hi = m;
                break;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = m;
                flo = fm;
            } else {
                hi = m;
            }
            if hi - lo < 1e-12 * (1.0 + hi.abs()) {
                break;
            }
        }
        locations.push(0.5 * (lo + hi));
    }
    Ok(RealZeroReport { count: locations.len(), locations })
}
