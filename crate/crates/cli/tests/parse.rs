use abint_cli::parse::*;
use abint_core::algebra::*;
use abint_core::derived::DiffOperator;
use abint_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn x() -> MultiPoly {
    MultiPoly::var("x")
}

fn y() -> MultiPoly {
    MultiPoly::var("y")
}

#[test]
fn elliptic_hamiltonian() {
    let p = parse_polynomial("1/2*y^2 + x^3 - x", &["x", "y"]).unwrap();
    let q = &(&(&y().pow(2) * &MultiPoly::constant(rat(1, 2))) + &x().pow(3)) - &x();
    assert_eq!(p, q);
}

#[test]
fn products_expand() {
    let p = parse_polynomial("x*(x+y)^2", &["x", "y"]).unwrap();
    let q = &(&x().pow(3) + &(&x().pow(2) * &y()).scale(&int(2))) + &(&x() * &y().pow(2));
    assert_eq!(p, q);
}

#[test]
fn negative_exponent_is_a_syntax_error() {
    match parse_polynomial("x^-1", &["x"]) {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
        r => panic!("{r:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let cases = [("x + * y", 4), ("(x + y", 6), ("x $ y", 2), ("x^1.5", 2), ("2 3", 2)];
    for (text, at) in cases {
        match parse_polynomial(text, &["x", "y"]) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, at, "{text}"),
            r => panic!("{text}: {r:?}"),
        }
    }
    assert!(matches!(parse_polynomial("x + z", &["x"]), Err(Error::UnknownVariable(v)) if v == "z"));
    assert!(matches!(parse_polynomial("x/(x+1)", &["x"]), Err(Error::Parse { pos: 1, .. })));
    assert!(matches!(parse_polynomial("x/0", &["x"]), Err(Error::Parse { .. })));
    assert!(matches!(parse_polynomial("D + x", &["x", "D"]), Err(Error::Parse { pos: 0, .. })));
}

#[test]
fn decimals_are_exact() {
    let p = parse_polynomial("0.1*x + 2.50", &["x"]).unwrap();
    assert_eq!(p.coeff(&[("x", 1)]), rat(1, 10));
    assert_eq!(p.coeff(&[]), rat(5, 2));
    assert_eq!(parse_polynomial(".5", &[]).unwrap().as_constant(), Some(rat(1, 2)));
}

/// Random polynomial with small rational coefficients.
fn random_poly(rng: &mut ChaCha8Rng) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for _ in 0..rng.random_range(1..6) {
        let m = MultiPoly::monomial(
            &["x", "y", "a"],
            &[rng.random_range(0..4), rng.random_range(0..3), rng.random_range(0..2)],
            rat(rng.random_range(-9..=9), rng.random_range(1..=5)),
        );
        acc = &acc + &m;
    }
    acc
}

#[test]
fn printing_then_parsing_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let p = random_poly(&mut rng);
        let back = parse_polynomial(&p.to_string(), &["x", "y", "a"]).unwrap();
        assert_eq!(back, p, "{p}");
        assert_eq!(back.to_string(), p.to_string());
    }
}

fn qi(n: i64) -> QI {
    QI::real(int(n))
}

#[test]
fn operator_examples() {
    let d = parse_operator("t*D-1").unwrap();
    assert_eq!(d, DiffOperator::from_polys(&[UniPoly::new(vec![qi(0), qi(1)]), UniPoly::constant(qi(-1))]).unwrap());
    let d = parse_operator("(t^2 - 1)*D^2 + t*D - 1").unwrap();
    assert_eq!(d.order(), 2);
    assert_eq!(d.to_string(), "(t^2 - 1)*D^2 + t*D - 1");
    let d = parse_operator("D + i").unwrap();
    assert!(!d.is_real());
    assert_eq!(parse_operator(&d.to_string()).unwrap(), d);
    // D*D is fine, D*t is not left-normalized
    assert_eq!(parse_operator("D*D + 1").unwrap().order(), 2);
    assert!(matches!(parse_operator("D*t"), Err(Error::Parse { pos: 1, .. })));
    assert!(matches!(parse_operator("(t*D)^2"), Err(Error::Parse { .. })));
    assert!(matches!(parse_operator("x*D"), Err(Error::UnknownVariable(_))));
}

#[test]
fn operator_display_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let k = rng.random_range(1..=3);
        let polys: Vec<UniPoly<QI>> = (0..=k)
            .map(|_| {
                UniPoly::new(
                    (0..rng.random_range(1..=3))
                        .map(|_| QI::new(rat(rng.random_range(-4..=4), rng.random_range(1..=3)), rat(rng.random_range(-1..=1), 2)))
                        .collect(),
                )
            })
            .collect();
        let Ok(d) = DiffOperator::from_polys(&polys) else {
            continue;
        };
        assert_eq!(parse_operator(&d.to_string()).unwrap(), d, "{d}");
    }
}

#[test]
fn complex_literals() {
    let z = parse_complex_list("0, 1, 2+3i, -i, 1/2 - 0.25i, 100").unwrap();
    let want = [(0.0, 0.0), (1.0, 0.0), (2.0, 3.0), (0.0, -1.0), (0.5, -0.25), (100.0, 0.0)];
    assert_eq!(z.len(), want.len());
    for (a, b) in z.iter().zip(want) {
        assert_eq!((a.re, a.im), b);
    }
    assert!(matches!(parse_complex_list("1, 2+, 3"), Err(Error::Parse { pos: 5, .. })));
    assert!(parse_complex("t").is_err());
}

#[test]
fn assignments() {
    let a = parse_assignments("a=1/2, b = -3, c=0.125").unwrap();
    assert_eq!(a["a"], rat(1, 2));
    assert_eq!(a["b"], int(-3));
    assert_eq!(a["c"], rat(1, 8));
    assert!(parse_assignments("a").is_err());
    assert!(parse_assignments("").unwrap().is_empty());
}
