use std::f64::consts::PI;

use abint_core::abelian::*;
use abint_core::algebra::*;
use abint_core::error::Error;
use abint_core::petrov::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ham(terms: &[((u32, u32), Rational)]) -> Hamiltonian<Rational> {
    Hamiltonian::new(Poly2::from_terms(terms.iter().cloned())).unwrap()
}

fn circle() -> Hamiltonian<Rational> {
    ham(&[((2, 0), rat(1, 2)), ((0, 2), rat(1, 2))])
}

fn elliptic() -> Hamiltonian<Rational> {
    ham(&[((0, 2), rat(1, 2)), ((3, 0), int(1)), ((1, 0), int(-1))])
}

fn x_dy() -> PolyForm<Rational> {
    PolyForm::one(Poly2::from_terms(Vec::new()), Poly2::from_terms([((1, 0), int(1))]))
}

fn sorted_re(h: &Hamiltonian<Rational>) -> Vec<f64> {
    let mut v: Vec<f64> = critical_values(h).unwrap().iter().filter(|z| z.im.abs() < 1e-12).map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn critical_value_examples() {
    let c = sorted_re(&circle());
    assert_eq!(c.len(), 1);
    assert!(c[0].abs() < 1e-14);

    let e = sorted_re(&elliptic());
    let v = 2.0 / (3.0 * 3f64.sqrt());
    assert_eq!(e.len(), 2);
    assert!((e[0] + v).abs() < 1e-12 && (e[1] - v).abs() < 1e-12);

    let h = ham(&[((0, 2), rat(1, 2)), ((2, 0), int(1)), ((3, 0), int(1))]);
    let v = sorted_re(&h);
    assert_eq!(v.len(), 2);
    assert!(v[0].abs() < 1e-12 && (v[1] - 4.0 / 27.0).abs() < 1e-12);
}

#[test]
fn circle_trace_has_unit_radius() {
    let h = circle();
    let tr = trace_oval(&h, 0.5, (1.0, 0.0), &OvalConfig::default()).unwrap();
    assert!((tr.length - 2.0 * PI).abs() < 1e-6);
    assert!(tr.closure_error < 1e-8);
    assert!(tr.level_error < 1e-10);
    for &(x, y) in &tr.points {
        assert!((x.hypot(y) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn elliptic_oval_at_zero_spans_roots() {
    let h = elliptic();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    assert!((fam.center.0 - 1.0 / 3f64.sqrt()).abs() < 1e-10);
    let tr = oval_at(&h, &fam, 0.0, &OvalConfig::default()).unwrap();
    let xmin = tr.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = tr.points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    assert!(xmin.abs() < 1e-3, "xmin {xmin}");
    assert!((xmax - 1.0).abs() < 1e-3, "xmax {xmax}");
    assert!(tr.closure_error < 1e-8);
}

#[test]
fn critical_level_is_rejected() {
    let h = elliptic();
    let v = 2.0 / (3.0 * 3f64.sqrt());
    let r = trace_oval(&h, -v, (1.0 / 3f64.sqrt(), 0.0), &OvalConfig::default());
    assert!(matches!(r, Err(Error::CriticalLevel(_))));
    let r = trace_oval(&circle(), 0.5, (2.0, 0.0), &OvalConfig::default());
    assert!(matches!(r, Err(Error::SeedOffCurve)));
}

#[test]
fn circle_area_integrals() {
    let h = circle();
    let cfg = OvalConfig::default();
    let tr = trace_oval(&h, 0.5, (1.0, 0.0), &cfg).unwrap();
    assert!((abelian_integral(&h, &x_dy(), &tr, &cfg).unwrap() - PI).abs() < 1e-8);
    for k in 1..=10 {
        let t = k as f64 / 10.0;
        let tr = trace_oval(&h, t, ((2.0 * t).sqrt(), 0.0), &cfg).unwrap();
        let v = abelian_integral(&h, &x_dy(), &tr, &cfg).unwrap();
        assert!((v - 2.0 * PI * t).abs() < 1e-6, "t = {t}: {v}");
    }
}

#[test]
fn exact_forms_integrate_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = OvalConfig::default();
    let (c, e) = (circle(), elliptic());
    let traces = [
        (&c, trace_oval(&c, 0.5, (1.0, 0.0), &cfg).unwrap()),
        (&e, oval_at(&e, &OvalFamily::around_first_center(&e).unwrap(), 0.0, &cfg).unwrap()),
    ];
    for _ in 0..20 {
        let mut terms = Vec::new();
        for d in 1..=5u32 {
            for i in 0..=d {
                if rng.random_bool(0.4) {
                    terms.push(((i, d - i), rat(rng.random_range(-5..=5), rng.random_range(1..=3))));
                }
            }
        }
        let f = exact(&Poly2::from_terms(terms));
        for (h, tr) in &traces {
            let v = abelian_integral(h, &f, tr, &cfg).unwrap();
            assert!(v.abs() < 1e-8, "∮dF = {v}");
        }
    }
}

/// Shoelace area of the vertex polygon, in the given vertex order.
fn shoelace(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

#[test]
fn orientation_is_counterclockwise() {
    let h = elliptic();
    let cfg = OvalConfig::default();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    for t in [-0.2, 0.0, 0.2] {
        let tr = oval_at(&h, &fam, t, &cfg).unwrap();
        let area = abelian_integral(&h, &x_dy(), &tr, &cfg).unwrap();
        let poly = shoelace(&tr.points);
        assert!(area > 0.0);
        assert!((poly - area).abs() < 1e-3 * area, "{poly} vs {area}");
        let mut rev = tr.points.clone();
        rev.reverse();
        assert!((shoelace(&rev) + poly).abs() <= 1e-12 * poly.abs());
    }
}

#[test]
fn quadrature_is_converged() {
    let h = elliptic();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    let forms: Vec<PolyForm<Rational>> = basis_forms(2).unwrap().iter().map(|b| b.omega()).collect();
    let ts = [-0.3, -0.1, 0.0, 0.1, 0.3];
    let s = sample_integrals(&h, &fam, &forms, &ts, &OvalConfig::default()).unwrap();
    assert_eq!(s.values.len(), ts.len());
    for e in &s.errors {
        assert!(*e <= 1e-8, "tolerance change moved a value by {e}");
    }
}

#[test]
fn circle_combination_has_no_zeros() {
    let h = circle();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    let forms = vec![basis_forms(1).unwrap()[0].omega()];
    for c in [1.0, -2.5] {
        let r = count_real_zeros(&h, &fam, &forms, &[c], (0.1, 1.0), 20, &OvalConfig::default()).unwrap();
        assert_eq!(r.count, 0);
    }
}

#[test]
fn elliptic_combinations_change_sign_at_most_once() {
    let h = elliptic();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    let forms: Vec<PolyForm<Rational>> = basis_forms(2).unwrap()[..2].iter().map(|b| b.omega()).collect();
    let cfg = OvalConfig::default();
    let ts: Vec<f64> = (0..40).map(|k| -0.38 + 0.76 * k as f64 / 39.0).collect();
    let sample = sample_integrals(&h, &fam, &forms, &ts, &cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let c = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let r = count_sign_changes(&sample, &c, |t| {
            let v = period_vector(&h, &fam, t, &cfg)?;
            Ok(c[0] * v[0] + c[1] * v[1])
        })
        .unwrap();
        assert!(r.count <= 1);
    }
    // I₁₀/I₀₀ decreases from 1/√3 at the centre to below 1/2 by t = 0.2, so the combination I₁₀ − 0.5·I₀₀ vanishes once
    let r = count_real_zeros(&h, &fam, &forms, &[-0.5, 1.0], (-0.38, 0.38), 40, &cfg).unwrap();
    assert_eq!(r.count, 1);
}

#[test]
fn interval_with_critical_value_is_rejected() {
    let h = elliptic();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    let forms = vec![basis_forms(2).unwrap()[0].omega()];
    let r = count_real_zeros(&h, &fam, &forms, &[1.0], (-0.5, 0.0), 10, &OvalConfig::default());
    assert!(matches!(r, Err(Error::CriticalLevel(_))));
}

#[test]
fn csv_dump() {
    let h = circle();
    let fam = OvalFamily::around_first_center(&h).unwrap();
    let forms = vec![x_dy()];
    let s = sample_integrals(&h, &fam, &forms, &[0.5, 1.0], &OvalConfig::default()).unwrap();
    let mut out = Vec::new();
    write_csv(&s, &["x1dx2".to_string()], &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1dx2");
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - PI).abs() < 1e-8);
}
