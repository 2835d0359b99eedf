use abint_core::algebra::*;
use abint_core::analytic::{continue_solution, ContourPath};
use abint_core::derived::*;
use abint_core::picard_fuchs::LinearODESystem;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

fn qi(n: i64) -> QI {
    QI::real(int(n))
}

fn p(cs: &[i64]) -> UniPoly<QI> {
    UniPoly::new(cs.iter().map(|&c| qi(c)).collect())
}

fn op(ps: &[&[i64]]) -> DiffOperator {
    DiffOperator::from_polys(&ps.iter().map(|c| p(c)).collect::<Vec<_>>()).unwrap()
}

fn random_qi(rng: &mut ChaCha8Rng) -> QI {
    QI::new(rat(rng.random_range(-4..=4), rng.random_range(1..=3)), rat(rng.random_range(-4..=4), rng.random_range(1..=3)))
}

fn random_op(rng: &mut ChaCha8Rng, k: usize, complex: bool) -> DiffOperator {
    loop {
        let ps: Vec<UniPoly<QI>> = (0..=k)
            .map(|_| {
                let deg = rng.random_range(0..=2);
                UniPoly::new((0..=deg).map(|_| if complex { random_qi(rng) } else { qi(rng.random_range(-3..=3)) }).collect())
            })
            .collect();
        if let Ok(d) = DiffOperator::from_polys(&ps) {
            return d;
        }
    }
}

fn random_map(rng: &mut ChaCha8Rng) -> MobiusMap {
    loop {
        if let Ok(m) = MobiusMap::new(random_qi(rng), random_qi(rng), random_qi(rng), random_qi(rng)) {
            return m;
        }
    }
}

fn system(rows: Vec<Vec<RatFunc>>) -> LinearODESystem {
    LinearODESystem::new(DenseMatrix::from_rows(rows)).unwrap()
}

fn tf() -> RatFunc {
    RatFunc::var("t")
}

fn qc(n: i64) -> RatFunc {
    RatFunc::constant(int(n))
}

#[test]
fn reduce_constant_system() {
    let d = reduce_to_scalar(&system(vec![vec![qc(0)]])).unwrap();
    assert_eq!(d, op(&[&[1], &[]]));
}

#[test]
fn reduce_euler_system() {
    let a = RatFunc::new(MultiPoly::constant(int(1)), MultiPoly::var("t")).unwrap();
    let d = reduce_to_scalar(&system(vec![vec![a]])).unwrap();
    assert_eq!(d, op(&[&[0, 1], &[-1]]));
    assert_eq!(d.to_string(), "t*D - 1");
}

/// Derivatives `y, y′, …, y^{(n)}` of an Airy solution from `(y, y′)` via
/// `y^{(m+2)} = t·y^{(m)} + m·y^{(m−1)}`.
fn airy_derivs(t: C, y: C, yp: C, n: usize) -> Vec<C> {
    let mut d = vec![y, yp];
    while d.len() <= n {
        let m = d.len() - 2;
        let prev = if m >= 1 { d[m - 1] * m as f64 } else { C::new(0.0, 0.0) };
        d.push(t * d[m] + prev);
    }
    d
}

#[test]
fn reduce_airy_companion_annihilates_continued_solutions() {
    let sys = system(vec![vec![qc(0), qc(1)], vec![tf(), qc(0)]]);
    let d = reduce_to_scalar(&sys).unwrap();
    assert!(d.order() <= 4);
    let k = d.order();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let y0 = vec![C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), C::new(rng.random_range(-1.0..1.0), 0.3)];
        let target = C::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if d.singular_points().iter().any(|s| (s - target).norm() < 0.1) {
            continue;
        }
        let r = continue_solution(&sys, &ContourPath::segment(C::new(0.0, 0.0), target), &y0, 1e-12).unwrap();
        let (y, yp) = (r.values[0], r.values[1]);
        let dy = airy_derivs(target, y, yp, k + 1);
        for comp in [&dy[..=k], &dy[1..=k + 1]] {
            let res = d.apply(target, comp);
            let scale: f64 = d.eval_coeffs(target).iter().enumerate().map(|(j, c)| c.norm() * comp[k - j].norm()).sum();
            assert!(res.norm() <= 1e-8 * scale, "residual {} scale {}", res.norm(), scale);
        }
    }
}

#[test]
fn standard_form_examples() {
    let r = |c: &[i64]| UniRat::from_poly(p(c));
    let d = DiffOperator::standard_form(&[r(&[0, 2]), r(&[0, 0, 4])]).unwrap();
    assert_eq!(d, op(&[&[1], &[0, 2]]));
    assert_eq!(d.normalize(), d);
    // 1/(t−1)·∂ + 1 → ∂ + (t − 1)
    let inv = UniRat::new(p(&[1]), p(&[-1, 1]));
    let d = DiffOperator::standard_form(&[inv, r(&[1])]).unwrap();
    assert_eq!(d, op(&[&[1], &[-1, 1]]));
    assert!(DiffOperator::standard_form(&[r(&[]), r(&[1])]).is_err());
}

#[test]
fn proportional_operators_share_standard_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let d = random_op(&mut rng, 2, true);
        let mut f = random_qi(&mut rng);
        if f.is_zero() {
            f = qi(5);
        }
        let g = p(&[1, 1]).mul(&UniPoly::constant(f));
        let scaled: Vec<_> = d.coeffs().iter().map(|c| c.mul(&g)).collect();
        let e = DiffOperator::from_polys(&scaled).unwrap();
        assert_eq!(e, d);
        assert_eq!(affine_slope(&e), affine_slope(&d));
    }
}

#[test]
fn affine_slope_examples() {
    assert_eq!(affine_slope(&op(&[&[1], &[2], &[3]])).exact, Some(int(3)));
    assert_eq!(affine_slope(&op(&[&[0, 1], &[-1]])).exact, Some(int(1)));
    assert_eq!(affine_slope(&op(&[&[1, 2], &[5, 0, 1]])).exact, Some(int(2)));
}

#[test]
fn pullback_examples() {
    let d = op(&[&[1, 2, 0, 1], &[3, -1], &[0, 0, 2]]);
    assert_eq!(pullback(&d, &MobiusMap::identity()), d);
    let shift = MobiusMap::affine(qi(1), QI::new(int(2), int(-1))).unwrap();
    assert_eq!(pullback(&op(&[&[1], &[]]), &shift), op(&[&[1], &[]]));
    let euler = op(&[&[0, 1], &[-1]]);
    let twice = MobiusMap::affine(qi(2), qi(0)).unwrap();
    assert_eq!(affine_slope(&pullback(&euler, &twice)), affine_slope(&euler));
}

#[test]
fn pullback_by_inversion_transports_solutions() {
    let euler = op(&[&[0, 1], &[-1]]);
    let e = pullback(&euler, &MobiusMap::inversion());
    assert_eq!(e.order(), 1);
    for s in [C::new(0.5, 0.2), C::new(-2.0, 1.0), C::new(3.0, -0.7)] {
        let y = 1.0 / s;
        let yp = -1.0 / (s * s);
        let res = e.apply(s, &[y, yp]);
        let scale: f64 = e.eval_coeffs(s).iter().zip([yp, y]).map(|(c, v)| c.norm() * v.norm()).sum();
        assert!(res.norm() <= 1e-10 * scale);
    }
}

#[test]
fn pullback_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let cx = rng.random_bool(0.5);
        let d = random_op(&mut rng, 2, cx);
        let phi = random_map(&mut rng);
        let psi = random_map(&mut rng);
        assert_eq!(pullback(&pullback(&d, &phi), &psi), pullback(&d, &phi.compose(&psi)));
    }
}

#[test]
fn reflect_examples() {
    let d = op(&[&[1, 1], &[0, -3], &[2]]);
    assert_eq!(reflect(&d), d);
    let minus_i = DiffOperator::from_polys(&[p(&[1]), UniPoly::constant(QI::i().neg())]).unwrap();
    let plus_i = DiffOperator::from_polys(&[p(&[1]), UniPoly::constant(QI::i())]).unwrap();
    assert_eq!(reflect(&minus_i), plus_i);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let d = random_op(&mut rng, 2, true);
        assert_eq!(reflect(&reflect(&d)), d);
    }
}

#[test]
fn symmetrize_real_operator_on_real_axis() {
    let d = op(&[&[-1, 0, 1], &[0, 1], &[-1]]);
    let s = symmetrize(&d, &Curve::real_axis()).unwrap();
    assert_eq!(s, d);
}

#[test]
fn symmetrize_on_imaginary_axis() {
    let d = op(&[&[1], &[-1]]);
    let axis = Curve::Line { point: QI::zero(), direction: QI::i() };
    let s = symmetrize(&d, &axis).unwrap();
    assert_eq!(s, op(&[&[1], &[], &[-1]]));
    for t in [C::new(0.3, 0.1), C::new(-1.0, 2.0)] {
        for sign in [1.0, -1.0] {
            let y = (t * sign).exp();
            let res = s.apply(t, &[y, y * sign, y]);
            assert!(res.norm() <= 1e-12 * y.norm());
        }
    }
}

#[test]
fn symmetrize_order_and_idempotence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let d = random_op(&mut rng, 1, true);
        let gamma = if rng.random_bool(0.5) {
            Curve::Line { point: random_qi(&mut rng), direction: QI::new(int(1), int(rng.random_range(-2..=2))) }
        } else {
            Curve::Circle { center: random_qi(&mut rng), radius: rat(rng.random_range(1..=3), 2) }
        };
        let s = symmetrize(&d, &gamma).unwrap();
        assert!(s.order() <= 2 * d.order());
        assert_eq!(symmetrize(&s, &gamma).unwrap(), s);
    }
}

#[test]
fn sampled_slope_bounds() {
    let d = op(&[&[0, 1], &[-1]]);
    let none = invariant_slope_sampled(&d, &SampleSpec { samples: 0, ..SampleSpec::default() });
    assert_eq!(none.sampled_invariant_slope, none.affine_slope);
    assert_eq!(none.affine_slope_exact.as_deref(), Some("1"));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..3 {
        let d = random_op(&mut rng, 1, false);
        let mut last = 0.0;
        for n in [0, 4, 8, 16] {
            let r = invariant_slope_sampled(&d, &SampleSpec { samples: n, seed: 4, height: 3 });
            assert!(r.sampled_invariant_slope >= r.affine_slope);
            assert!(r.sampled_invariant_slope >= last);
            last = r.sampled_invariant_slope;
        }
    }
}

#[test]
fn operator_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10 {
        let d = random_op(&mut rng, 3, true);
        let j = serde_json::to_string(&d.to_json()).unwrap();
        let back: DiffOperatorJson = serde_json::from_str(&j).unwrap();
        assert_eq!(DiffOperator::from_json(&back).unwrap(), d);
    }
}
