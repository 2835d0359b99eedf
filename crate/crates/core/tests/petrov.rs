use std::collections::BTreeMap;

use abint_core::algebra::*;
use abint_core::petrov::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    int(n)
}

fn circle() -> Hamiltonian<Rational> {
    let h = Poly2::from_terms([((2, 0), rat(1, 2)), ((0, 2), rat(1, 2))]);
    Hamiltonian::new(h).unwrap()
}

fn elliptic() -> Hamiltonian<Rational> {
    let h = Poly2::from_terms([((0, 2), rat(1, 2)), ((3, 0), q(1)), ((1, 0), q(-1))]);
    Hamiltonian::new(h).unwrap()
}

fn random_regular(rng: &mut ChaCha8Rng, n: u32) -> Hamiltonian<Rational> {
    loop {
        let mut terms = vec![((n + 1, 0), q(rng.random_range(1..=3))), ((0, n + 1), q(rng.random_range(1..=3)))];
        for d in 0..=n + 1 {
            for i in 0..=d {
                if (i, d - i) == (n + 1, 0) || (i, d - i) == (0, n + 1) {
                    continue;
                }
                if rng.random_bool(0.5) {
                    terms.push(((i, d - i), q(rng.random_range(-3..=3))));
                }
            }
        }
        let h = Hamiltonian::new(Poly2::from_terms(terms)).unwrap();
        if is_basis_regular(&h) {
            return h;
        }
    }
}

#[test]
fn basis_forms_count_and_primitives() {
    assert!(basis_forms(0).is_err());
    for n in 1..=4 {
        let b = basis_forms(n).unwrap();
        assert_eq!(b.len(), n * n);
        for f in &b {
            assert_eq!(f.omega::<Rational>().d(), f.mu::<Rational>());
        }
    }
    let b = basis_forms(1).unwrap();
    assert_eq!(b[0].omega_q::<Rational>(), Poly2::x());
}

#[test]
fn regularity_examples() {
    let h = Hamiltonian::new(Poly2::from_terms([((3, 0), q(1)), ((0, 3), q(1))])).unwrap();
    assert!(is_basis_regular(&h));
    let h = Hamiltonian::new(Poly2::from_terms([((3, 0), q(1)), ((2, 1), q(1))])).unwrap();
    assert!(!is_basis_regular(&h));
    assert!(is_basis_regular(&circle()));
    // principal part x³ is not square-free
    assert!(!is_basis_regular(&elliptic()));
}

#[test]
fn two_form_basis_element() {
    let h = elliptic();
    for (k, b) in basis_forms(2).unwrap().iter().enumerate() {
        let f = Poly2::monomial(b.alpha.0, b.alpha.1, q(1));
        let dec = divide_2form(&f, &h).unwrap();
        for (j, p) in dec.p.iter().enumerate() {
            let want = if j == k { UniPoly::one() } else { UniPoly::zero() };
            assert_eq!(p, &want);
        }
        assert_eq!(dec.remainder, Remainder::TwoForm { a: Poly2::zero(), b: Poly2::zero() });
    }
}

#[test]
fn two_form_gradient_multiple() {
    let h = circle();
    let hx = h.poly().dx();
    let dec = divide_2form_with(&hx, &h, &DivisionOptions { prefer_remainder: true, ..Default::default() }).unwrap();
    assert!(dec.p.iter().all(|p| p.is_zero()));
    // dH∧dx₂ = H_x dx₁∧dx₂
    assert_eq!(dec.remainder, Remainder::TwoForm { a: Poly2::zero(), b: Poly2::constant(q(1)) });
    assert!(verify_decomposition(&PolyForm::two(hx), &h, &dec));
}

#[test]
fn circle_h_times_area_form() {
    let h = circle();
    let dec = divide_2form(h.poly(), &h).unwrap();
    assert_eq!(dec.p, vec![UniPoly::x()]);
    assert_eq!(dec.remainder, Remainder::TwoForm { a: Poly2::zero(), b: Poly2::zero() });
}

#[test]
fn one_form_examples() {
    let h = elliptic();
    for (k, b) in basis_forms(2).unwrap().iter().enumerate() {
        let dec = divide_1form(&Poly2::zero(), &b.omega_q(), &h).unwrap();
        for (j, p) in dec.p.iter().enumerate() {
            assert_eq!(p.is_zero(), j != k);
        }
        assert_eq!(dec.remainder, Remainder::OneForm { u: Poly2::zero(), v: Poly2::zero() });
    }
    let f = Poly2::from_terms([((4, 1), q(3)), ((0, 3), q(-2)), ((1, 1), q(5))]);
    let dec = divide_1form(&f.dx(), &f.dy(), &h).unwrap();
    assert!(dec.p.iter().all(|p| p.is_zero()));
    assert_eq!(dec.remainder, Remainder::OneForm { u: Poly2::zero(), v: f });

    let c = circle();
    let w = PolyForm::<Rational>::one(Poly2::zero(), basis_forms(1).unwrap()[0].omega_q()).times(c.poly());
    let PolyForm::One { p, q: qq } = &w else { unreachable!() };
    let dec = divide_1form(p, qq, &c).unwrap();
    assert!(verify_decomposition(&w, &c, &dec));
    assert!(degree_bounds_hold(&w, &c, &dec));
    assert!(dec.p[0].degree().unwrap() <= 1);
}

#[test]
fn perturbed_decomposition_fails() {
    let h = elliptic();
    let f = Poly2::from_terms([((3, 1), q(2)), ((0, 2), q(1))]);
    let input = PolyForm::two(f.clone());
    let mut dec = divide_2form(&f, &h).unwrap();
    assert!(verify_decomposition(&input, &h, &dec));
    dec.p[1] = dec.p[1].add(&UniPoly::one());
    assert!(!verify_decomposition(&input, &h, &dec));
}

#[test]
fn alternate_decomposition_also_verifies() {
    // Moving H·μ₀₀ between the p₀₀ slot and dH∧η changes nothing.
    let h = circle();
    let input = PolyForm::two(h.poly().clone());
    let dec = divide_2form(h.poly(), &h).unwrap();
    // H = dH∧(x₂/2 dx₂·...) : H_x·B − H_y·A with A = −y/2, B = x/2
    let alt = PetrovDecomposition {
        basis: dec.basis.clone(),
        p: vec![UniPoly::zero()],
        remainder: Remainder::TwoForm { a: Poly2::monomial(0, 1, rat(-1, 2)), b: Poly2::monomial(1, 0, rat(1, 2)) },
        slack: 0,
    };
    assert!(verify_decomposition(&input, &h, &alt));
    assert_ne!(alt, dec);
}

fn random_monomial_form(rng: &mut ChaCha8Rng, n: u32) -> PolyForm<Rational> {
    let dmax = 2 * n * n;
    let one = rng.random_bool(0.5);
    let d = rng.random_range(0..=dmax.saturating_sub(if one { 1 } else { 2 }).max(0));
    let i = rng.random_range(0..=d);
    let m = Poly2::monomial(i, d - i, q(rng.random_range(1..=4)));
    if one {
        if rng.random_bool(0.5) {
            PolyForm::one(m, Poly2::zero())
        } else {
            PolyForm::one(Poly2::zero(), m)
        }
    } else {
        PolyForm::two(m)
    }
}

fn divide(form: &PolyForm<Rational>, h: &Hamiltonian<Rational>) -> PetrovDecomposition<Rational> {
    match form {
        PolyForm::One { p, q } => divide_1form(p, q, h).unwrap(),
        PolyForm::Two { f } => divide_2form(f, h).unwrap(),
    }
}

#[test]
fn random_forms_exact_with_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..60 {
        let n = 1 + k % 3;
        let h = random_regular(&mut rng, n);
        let form = random_monomial_form(&mut rng, n);
        let dec = divide(&form, &h);
        assert!(verify_decomposition(&form, &h, &dec));
        assert!(degree_bounds_hold(&form, &h, &dec), "{form:?} {h:?}");
        assert_eq!(dec.slack, 0);
    }
}

#[test]
fn linearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = random_regular(&mut rng, 2);
    let f1 = Poly2::from_terms([((3, 2), q(1)), ((1, 0), q(2))]);
    let f2 = Poly2::from_terms([((0, 4), q(-1)), ((2, 2), q(3))]);
    let (a, b) = (rat(3, 2), q(-2));
    let d1 = divide_2form(&f1, &h).unwrap();
    let d2 = divide_2form(&f2, &h).unwrap();
    let d = divide_2form(&f1.scale(&a).add(&f2.scale(&b)), &h).unwrap();
    for k in 0..4 {
        assert_eq!(d.p[k], d1.p[k].scale(&a).add(&d2.p[k].scale(&b)));
    }
    let (Remainder::TwoForm { a: a1, b: b1 }, Remainder::TwoForm { a: a2, b: b2 }, Remainder::TwoForm { a: a3, b: b3 }) =
        (&d1.remainder, &d2.remainder, &d.remainder)
    else {
        unreachable!()
    };
    assert_eq!(a3, &a1.scale(&a).add(&a2.scale(&b)));
    assert_eq!(b3, &b1.scale(&a).add(&b2.scale(&b)));
}

#[test]
fn symbolic_specializes_to_concrete() {
    // H = y²/2 + x³ + a·x, coefficient a symbolic
    let a = MultiPoly::var("a");
    let x = MultiPoly::var("x");
    let y = MultiPoly::var("y");
    let hm = &(&(&y.pow(2) * &MultiPoly::constant(rat(1, 2))) + &x.pow(3)) + &(&a * &x);
    let hs = Hamiltonian::from_multi(&hm).unwrap();
    assert_eq!(hs.parameters(), vec!["a".to_string()]);
    let f = Poly2::<RatFunc>::from_terms([((2, 2), RatFunc::constant(q(1))), ((3, 0), RatFunc::constant(q(2)))]);
    let ds = divide_2form(&f, &hs).unwrap();
    assert!(verify_decomposition(&PolyForm::two(f.clone()), &hs, &ds));
    for v in [-1i64, 2, 5] {
        let vals: BTreeMap<String, Rational> = [("a".to_string(), q(v))].into();
        let hc = hs.specialize(&vals).unwrap().to_rational().unwrap();
        let dc = divide_2form(&f.to_rational().unwrap(), &hc).unwrap();
        for (ps, pc) in ds.p.iter().zip(&dc.p) {
            let spec = ps.map(|c| c.specialize(&vals).unwrap().as_constant().unwrap());
            assert_eq!(&spec, pc);
        }
    }
}
