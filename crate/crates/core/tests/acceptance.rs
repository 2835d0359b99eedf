//! Acceptance run: one line per criterion with its wall time.
//!
//! `cargo test -p abint-core --test acceptance`

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use abint_core::abelian::*;
use abint_core::algebra::*;
use abint_core::analytic::*;
use abint_core::derived::{reduce_to_scalar, DiffOperator};
use abint_core::petrov::*;
use abint_core::picard_fuchs::*;
use abint_core::slits::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;
type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn deriv(f: impl Fn(f64) -> Vec<f64>, h: f64) -> Vec<f64> {
    let (p1, m1, p2, m2) = (f(h), f(-h), f(2.0 * h), f(-2.0 * h));
    (0..p1.len()).map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h)).collect()
}

fn mp_x() -> MultiPoly {
    MultiPoly::var("x")
}

fn mp_y() -> MultiPoly {
    MultiPoly::var("y")
}

fn half() -> MultiPoly {
    MultiPoly::constant(rat(1, 2))
}

fn random_regular(rng: &mut ChaCha8Rng, n: u32) -> Hamiltonian<Rational> {
    loop {
        let mut terms = vec![((n + 1, 0), int(rng.random_range(1..=3))), ((0, n + 1), int(rng.random_range(1..=3)))];
        for d in 0..=n + 1 {
            for i in 0..=d {
                if (i, d - i) == (n + 1, 0) || (i, d - i) == (0, n + 1) {
                    continue;
                }
                if rng.random_bool(0.5) {
                    terms.push(((i, d - i), int(rng.random_range(-3..=3))));
                }
            }
        }
        let h = Hamiltonian::new(Poly2::from_terms(terms)).unwrap();
        if is_basis_regular(&h) {
            return h;
        }
    }
}

fn petrov_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut by_n = [0usize; 3];
    for k in 0..200 {
        let n = 1 + (k % 3) as u32;
        let h = random_regular(&mut rng, n);
        let one = rng.random_bool(0.5);
        let dmax = 2 * n * n + 2;
        let d = rng.random_range(0..=dmax);
        let i = rng.random_range(0..=d);
        let m = Poly2::monomial(i, d - i, int(rng.random_range(1..=5)));
        let form = match (one, rng.random_bool(0.5)) {
            (true, true) => PolyForm::one(m, Poly2::zero()),
            (true, false) => PolyForm::one(Poly2::zero(), m),
            (false, _) => PolyForm::two(m),
        };
        let dec = match &form {
            PolyForm::One { p, q } => divide_1form(p, q, &h),
            PolyForm::Two { f } => divide_2form(f, &h),
        }
        .map_err(|e| format!("case {k}: {e}"))?;
        check(verify_decomposition(&form, &h, &dec), || format!("case {k}: decomposition does not re-expand"))?;
        check(degree_bounds_hold(&form, &h, &dec), || format!("case {k}: degree bounds violated"))?;
        check(dec.slack == 0, || format!("case {k}: needed slack {}", dec.slack))?;
        by_n[n as usize - 1] += 1;
    }
    Ok(format!("200/200 exact, n=1,2,3: {:?}", by_n))
}

fn circle_end_to_end() -> Outcome {
    let h = Hamiltonian::from_multi(&(&(&mp_x().pow(2) + &mp_y().pow(2)) * &half())).unwrap();
    let sys = derive_pfaffian(&h).map_err(|e| e.to_string())?;
    let ode = restrict_to_pencil(&sys, &BTreeMap::new()).map_err(|e| e.to_string())?;
    let want = RatFunc::new(MultiPoly::constant(int(1)), MultiPoly::var("t")).unwrap();
    check(ode.dim() == 1 && ode.a.get(0, 0) == &want, || format!("A = {}", ode.a.get(0, 0)))?;
    // periods measured independently by tracing the level curves
    let hc = concrete_hamiltonian(&h, &BTreeMap::new()).unwrap();
    let fam = OvalFamily::around_first_center(&hc).unwrap();
    let cfg = OvalConfig::default();
    let mut worst: f64 = 0.0;
    for t in [0.25, 0.5, 1.0, 2.0] {
        let x = period_vector(&hc, &fam, t, &cfg).map_err(|e| e.to_string())?[0];
        check((x - 2.0 * PI * t).abs() <= 1e-8 * t, || format!("X({t}) = {x}"))?;
        let dx = deriv(|e| period_vector(&hc, &fam, t + e, &cfg).unwrap(), 1e-3)[0];
        worst = worst.max((t * dx - x).abs() / x.abs());
    }
    check(worst <= 1e-6, || format!("t X' - X relative {worst:.2e}"))?;
    Ok(format!("A = [{}], max |tX'-X|/|X| = {worst:.1e}", ode.a.get(0, 0)))
}

fn restricted_residual(ode: &LinearODESystem, t: f64, x: &[f64], dx: &[f64]) -> f64 {
    let l = ode.dim();
    let tc = c(t, 0.0);
    let mut res = vec![0.0; l];
    let mut scale = vec![0.0; l];
    for i in 0..l {
        let di = ode.a.row(i).iter().fold(MultiPoly::constant(int(1)), |acc, e| lcm(&acc, e.den()));
        let dv = RatFunc::from_poly(di.clone()).eval_complex(&["t"], &[tc]).unwrap().re;
        let mut r = dv * dx[i];
        let mut sc = r.abs();
        for j in 0..l {
            let e = ode.a.get(i, j);
            let num = RatFunc::from_poly(&e.num().clone() * &di.div_exact(e.den()).unwrap());
            let v = num.eval_complex(&["t"], &[tc]).unwrap().re * x[j];
            r -= v;
            sc += v.abs();
        }
        res[i] = r;
        scale[i] = sc;
    }
    norm(&res) / norm(&scale)
}

fn elliptic_pf() -> Outcome {
    let hm = &(&(&mp_y().pow(2) * &half()) + &mp_x().pow(3)) - &mp_x();
    let h = Hamiltonian::from_multi(&hm).unwrap();
    let sys = derive_pfaffian(&h).map_err(|e| e.to_string())?;
    let ode = restrict_to_pencil(&sys, &BTreeMap::new()).map_err(|e| e.to_string())?;
    let hc = concrete_hamiltonian(&h, &BTreeMap::new()).unwrap();
    let fam = OvalFamily::around_first_center(&hc).unwrap();
    let cfg = OvalConfig::default();
    let pv = |t: f64| period_vector(&hc, &fam, t, &cfg).unwrap();
    let mut worst_sys: f64 = 0.0;
    for t in [0.0, 0.2, -0.2] {
        let x = pv(t);
        let dx = deriv(|e| pv(t + e), 1e-4);
        let r = restricted_residual(&ode, t, &x, &dx);
        check(r <= 1e-4, || format!("system residual {r:.2e} at t = {t}"))?;
        worst_sys = worst_sys.max(r);
    }

    let d = reduce_to_scalar(&ode).map_err(|e| e.to_string())?;
    let k = d.order();
    let t0 = 0.2;
    let x0: Vec<C> = pv(t0).into_iter().map(|v| c(v, 0.0)).collect();
    let mut aj = vec![DenseMatrix::<RatFunc>::identity(ode.dim())];
    for j in 0..k {
        let next = aj[j].map(|e| e.deriv("t")).add(&aj[j].mul(&ode.a));
        aj.push(next);
    }
    let mut worst_op: f64 = 0.0;
    for target in [c(0.1, 0.1), c(0.25, -0.05), c(-0.1, 0.05), c(0.3, 0.0)] {
        let x = continue_solution(&ode, &ContourPath::segment(c(t0, 0.0), target), &x0, 1e-12).map_err(|e| e.to_string())?.values;
        for comp in 0..ode.dim() {
            let derivs: Vec<C> =
                aj.iter().map(|m| (0..ode.dim()).map(|j| m.get(comp, j).eval_complex(&["t"], &[target]).unwrap() * x[j]).sum()).collect();
            let res = d.apply(target, &derivs);
            let scale: f64 = d.eval_coeffs(target).iter().enumerate().map(|(j, a)| a.norm() * derivs[k - j].norm()).sum();
            let r = res.norm() / scale;
            check(r <= 1e-6, || format!("operator residual {r:.2e} at {target}"))?;
            worst_op = worst_op.max(r);
        }
    }
    Ok(format!("system {worst_sys:.1e}, order-{k} operator {worst_op:.1e}"))
}

fn elliptic_sign_changes() -> Outcome {
    let h = Hamiltonian::new(Poly2::from_terms([((0, 2), rat(1, 2)), ((3, 0), int(1)), ((1, 0), int(-1))])).unwrap();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    let forms: Vec<PolyForm<Rational>> = basis_forms(2).unwrap()[..2].iter().map(|b| b.omega()).collect();
    let cfg = OvalConfig::default();
    let ts: Vec<f64> = (0..40).map(|k| -0.38 + 0.76 * k as f64 / 39.0).collect();
    let sample = sample_integrals(&h, &fam, &forms, &ts, &cfg).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut hist = [0usize; 2];
    for k in 0..200 {
        let cs = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let r = count_sign_changes(&sample, &cs, |t| {
            let v = period_vector(&h, &fam, t, &cfg)?;
            Ok(cs[0] * v[0] + cs[1] * v[1])
        })
        .map_err(|e| e.to_string())?;
        check(r.count <= 1, || format!("combination {k} {cs:?}: {} sign changes", r.count))?;
        hist[r.count] += 1;
    }
    Ok(format!("200 combinations, sign changes 0/1: {}/{}", hist[0], hist[1]))
}

fn qi(v: i64) -> QI {
    QI::real(int(v))
}

fn polynomial_zero_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut done = 0;
    let mut total = 0;
    while done < 50 {
        let deg = rng.random_range(1..=6usize);
        let roots: Vec<C> = (0..deg).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        let center = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let r = rng.random_range(0.3..2.0);
        if roots.iter().any(|z| ((z - center).norm() - r).abs() < 1e-3) {
            continue;
        }
        let truth = roots.iter().filter(|z| (*z - center).norm() < r).count() as i64;
        // expand Π(t − w) for the initial conditions at the origin
        let mut coeffs = vec![c(1.0, 0.0)];
        for w in &roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * w;
            }
            coeffs = next;
        }
        let derivs: Vec<C> = (0..=deg).map(|j| coeffs[j] * (1..=j).product::<usize>() as f64).collect();
        let mut ps = vec![UniPoly::constant(qi(1))];
        ps.extend(std::iter::repeat_n(UniPoly::zero(), deg + 1));
        let d = DiffOperator::from_polys(&ps).unwrap();
        let n = count_operator_zeros(&d, &Solution::scalar(c(0.0, 0.0), derivs), &ContourPath::circle(center, r), 1e-10)
            .map_err(|e| format!("polynomial {done}: {e}"))?;
        check(n == truth, || format!("polynomial {done}: counted {n}, true {truth}"))?;
        total += truth;
        done += 1;
    }
    Ok(format!("50/50 exact ({total} zeros in total)"))
}

fn op(ps: &[&[i64]]) -> DiffOperator {
    DiffOperator::from_polys(&ps.iter().map(|v| UniPoly::new(v.iter().map(|&x| qi(x)).collect())).collect::<Vec<_>>()).unwrap()
}

fn annulus_counts() -> Outcome {
    check(petrov_bound(2, 3.0) == 35.0, || format!("petrov_bound(2, 3) = {}", petrov_bound(2, 3.0)))?;
    let cfg = CountConfig::default();
    let mut cases: Vec<(DiffOperator, Annulus, Solution)> = vec![
        (
            op(&[&[1], &[], &[1]]),
            Annulus { center: c(0.0, 0.0), r_in: 1.0, r_out: 5.0 },
            Solution::scalar(c(0.0, 0.0), vec![c(0.0, 0.0), c(1.0, 0.0)]),
        ),
        (
            op(&[&[1], &[], &[1]]),
            Annulus { center: c(0.5, 0.2), r_in: 2.0, r_out: 7.5 },
            Solution::scalar(c(0.0, 0.0), vec![c(1.0, 0.0), c(0.3, 0.0)]),
        ),
        (
            op(&[&[1], &[], &[-1]]),
            Annulus { center: c(0.0, 0.0), r_in: 0.5, r_out: 4.0 },
            Solution::scalar(c(0.0, 0.0), vec![c(1.0, 0.0), c(-0.5, 0.0)]),
        ),
        (op(&[&[0, 1], &[-1]]), Annulus { center: c(0.0, 0.0), r_in: 1.0, r_out: 2.0 }, Solution::scalar(c(1.5, 0.0), vec![c(1.5, 0.0)])),
    ];
    // q·t(t−b)·y′ = (n₁(t−b) + n₂t)·y, with y = t^{n₁/q}(t−b)^{n₂/q}
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..6 {
        let b = rng.random_range(2..=4);
        let q = rng.random_range(1..=3);
        let (n1, n2) = (rng.random_range(-3..=3), rng.random_range(-3..=3));
        let d = op(&[&[0, -b * q, q], &[n1 * b, -(n1 + n2)]]);
        let a = Annulus { center: c(0.0, 0.0), r_in: 0.2 * b as f64, r_out: 0.8 * b as f64 };
        cases.push((d, a, Solution::scalar(c(0.5 * b as f64, 0.1), vec![c(1.0, 0.3)])));
    }
    let mut max_zeros = 0;
    for (d, a, sol) in &cases {
        let r = annulus_zero_bound(d, a, Some(sol), &cfg).map_err(|e| format!("{d}: {e}"))?;
        let bound = r.bound.ok_or_else(|| format!("{d}: no finite bound"))?;
        let expect = ((2 * r.k_prime + 1) as f64) * (2.0 * r.b + 1.0);
        check((bound - expect).abs() <= 1e-12 * expect, || format!("{d}: bound {bound} vs {expect}"))?;
        let m = r.measured_zeros.unwrap();
        check(m as f64 <= bound, || format!("{d}: {m} zeros above bound {bound}"))?;
        max_zeros = max_zeros.max(m);
    }
    Ok(format!("{} annuli within (2k'+1)(2B+1), up to {max_zeros} zeros; (2,3) -> 35", cases.len()))
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, sep: f64) -> Vec<C> {
    loop {
        let t: Vec<C> = (0..n).map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))).collect();
        if (0..n).all(|i| (0..i).all(|j| (t[i] - t[j]).norm() > sep)) {
            return t;
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn slit_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let cfg = SlitConfig::default();
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = rng.random_range(1..=10);
        let t = random_set(&mut rng, n, 0.05);
        let s = build_slits(&t, &cfg).map_err(|e| format!("set {k}: {e}"))?;
        check(is_admissible(&s), || format!("set {k}: not admissible"))?;
        check(s.circles.len() <= 3 * n, || format!("set {k}: {} circles for {n} points", s.circles.len()))?;

        let a = C::from_polar(rng.random_range(0.1..10.0), rng.random_range(0.0..2.0 * PI));
        let b = c(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        let map = |z: C| a * z + b;
        let moved: Vec<C> = t.iter().map(|&z| map(z)).collect();
        for circ in &s.circles {
            let img = Circle { center: map(circ.center), radius: a.norm() * circ.radius };
            let (u, v) = (normalized_length(&circ.piece(), &t).unwrap(), normalized_length(&img.piece(), &moved).unwrap());
            worst = worst.max(rel(u, v));
        }
        for seg in &s.segments {
            let img = Segment { a: map(seg.a), b: map(seg.b) };
            let (u, v) = (normalized_length(&seg.piece(), &t).unwrap(), normalized_length(&img.piece(), &moved).unwrap());
            worst = worst.max(rel(u, v));
        }
        let u = cluster_diameter_upper(&t, 3 * n, &cfg).map_err(|e| format!("set {k}: {e}"))?;
        let v = cluster_diameter_upper(&moved, 3 * n, &cfg).map_err(|e| format!("set {k} mapped: {e}"))?;
        worst = worst.max(rel(u, v));
        check(worst <= 1e-12, || format!("set {k}: relative change {worst:.2e}"))?;
    }
    Ok(format!("100 maps, max relative change {worst:.1e}; all admissible within 3|T| circles"))
}

fn cluster_sandwich() -> Outcome {
    const FACTOR: f64 = 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let cfg = SlitConfig::default();
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 2;
        let t = random_set(&mut rng, n, 0.5);
        let brute = brute_force_cluster_diameter(&t, n + 1, GridSpec::default()).map_err(|e| format!("set {k}: {e}"))?;
        let upper = cluster_diameter_upper(&t, 3 * n, &cfg).map_err(|e| format!("set {k}: {e}"))?;
        check(brute <= upper && upper <= FACTOR * brute, || format!("set {k}: brute {brute}, upper {upper}"))?;
        worst = worst.max(upper / brute);
    }
    Ok(format!("20 sets, max upper/brute = {worst:.2} (factor {FACTOR})"))
}

fn euler_monodromy() -> Outcome {
    let mut out = Vec::new();
    for (num, den, order) in [(1, 2, 2), (1, 3, 3), (2, 5, 5)] {
        let a = RatFunc::new(MultiPoly::constant(rat(num, den)), MultiPoly::var("t")).unwrap();
        let sys = LinearODESystem::new(DenseMatrix::from_rows(vec![vec![a]])).unwrap();
        let m = monodromy(&sys, &ContourPath::circle(c(0.0, 0.0), 1.0), 1e-12).map_err(|e| e.to_string())?;
        let want = C::from_polar(1.0, 2.0 * PI * num as f64 / den as f64);
        let err = (m.matrix[(0, 0)] - want).norm();
        check(err <= 1e-8, || format!("c = {num}/{den}: error {err:.2e}"))?;
        let q = is_quasiunipotent(&m.matrix, 1e-6, 12, QuasiMode::Strict);
        check(q.ok && q.orders == vec![Some(order)], || format!("c = {num}/{den}: orders {:?}", q.orders))?;
        out.push(format!("{num}/{den}: {err:.0e}"));
    }
    Ok(out.join(", "))
}

fn random_mpoly(rng: &mut ChaCha8Rng, vars: &[&str], deg: u32, terms: usize, coef: i64) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for _ in 0..terms {
        let e: Vec<u32> = vars.iter().map(|_| rng.random_range(0..=deg)).collect();
        let k = rat(rng.random_range(-coef..=coef), rng.random_range(1..=3));
        acc = &acc + &MultiPoly::monomial(vars, &e, k);
    }
    acc
}

fn nonzero(rng: &mut ChaCha8Rng, vars: &[&str]) -> MultiPoly {
    loop {
        let p = random_mpoly(rng, vars, 2, 3, 5);
        if !p.is_zero() {
            return p;
        }
    }
}

fn norm_and_size() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let vars = ["t", "a"];
    for k in 0..1000 {
        let p = random_mpoly(&mut rng, &vars, 3, 4, 9);
        let q = random_mpoly(&mut rng, &vars, 3, 4, 9);
        check(l1_norm(&(&p * &q)) <= l1_norm(&p) * l1_norm(&q), || format!("norm instance {k}: {p} · {q}"))?;
    }
    for k in 0..1000 {
        let (p1, q1) = (nonzero(&mut rng, &vars), nonzero(&mut rng, &vars));
        let (p2, q2) = (nonzero(&mut rng, &vars), nonzero(&mut rng, &vars));
        let s1 = representation_size(&p1, &q1);
        let s2 = representation_size(&p2, &q2);
        let den = &q1 * &q2;
        let sum = representation_size(&(&(&p1 * &q2) + &(&p2 * &q1)), &den);
        let prod = representation_size(&(&p1 * &p2), &den);
        let bound = &s1 * &s2;
        check(sum <= int(3) * &bound, || format!("size instance {k}: sum {sum} vs 3·{bound}"))?;
        check(prod <= int(2) * &bound, || format!("size instance {k}: product {prod} vs 2·{bound}"))?;
        // canonical forms only shrink
        let r = Field::add(&RatFunc::new(p1.clone(), q1.clone()).unwrap(), &RatFunc::new(p2.clone(), q2.clone()).unwrap());
        check(Field::is_zero(&r) || size_of(&r) <= int(3) * &bound, || format!("size instance {k}: canonical sum {}", size_of(&r)))?;
    }
    Ok("1000 norm and 1000 size instances".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("Petrov division exactness", petrov_exactness, 60),
        ("circle end to end", circle_end_to_end, 1),
        ("elliptic Picard-Fuchs residuals", elliptic_pf, 120),
        ("elliptic combinations change sign at most once", elliptic_sign_changes, 300),
        ("zero counts of random polynomials", polynomial_zero_counts, 600),
        ("annulus counts below (2k'+1)(2B+1)", annulus_counts, 600),
        ("slit similarity invariance and admissibility", slit_invariance, 600),
        ("cluster diameter sandwich", cluster_sandwich, 600),
        ("Euler monodromy and quasiunipotence", euler_monodromy, 600),
        ("norm and size inequalities", norm_and_size, 600),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = start.elapsed();
        let r = match r {
            Ok(m) if dt > Duration::from_secs(*limit) => Err(format!("{m}; over the {limit} s limit")),
            r => r,
        };
        match r {
            Ok(m) => println!("criterion {:>2} PASS {:>8.3} s  {name}: {m}", i + 1, dt.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("criterion {:>2} FAIL {:>8.3} s  {name}: {m}", i + 1, dt.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
