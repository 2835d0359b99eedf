use abint_core::algebra::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t() -> MultiPoly {
    MultiPoly::var("t")
}

fn c(n: i64) -> MultiPoly {
    MultiPoly::constant(int(n))
}

fn upoly(cs: &[i64]) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for (k, &a) in cs.iter().enumerate() {
        acc = &acc + &(&c(a) * &t().pow(k as u32));
    }
    acc
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[&str], deg: u32, terms: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for _ in 0..terms {
        let e: Vec<u32> = vars.iter().map(|_| rng.random_range(0..=deg)).collect();
        let k = rng.random_range(-5i64..=5);
        acc = &acc + &MultiPoly::monomial(vars, &e, int(k));
    }
    acc
}

#[test]
fn l1_norm_examples() {
    assert_eq!(l1_norm(&upoly(&[1, 1, 1, 1, 1])), int(5));
    assert_eq!(l1_norm(&MultiPoly::zero()), int(0));
    let p = &MultiPoly::monomial(&["x"], &[1], int(3)) - &MultiPoly::monomial(&["y"], &[1], int(4));
    assert_eq!(l1_norm(&p), int(7));
}

#[test]
fn size_examples() {
    let num = &t().pow(5) - &c(1);
    let den = &t() - &c(1);
    assert_eq!(representation_size(&num, &den), int(4));
    let canon = RatFunc::new(num, den).unwrap();
    assert_eq!(canon.den(), &MultiPoly::one());
    assert_eq!(size_of(&canon), int(6));
    assert_eq!(size_of(&RatFunc::constant(int(7))), int(8));
    assert_eq!(size_of(&RatFunc::new(t(), t()).unwrap()), int(2));
    assert_eq!(size_of(&RatFunc::constant(rat(1, 2))), int(3));
}

#[test]
fn poly_arith_examples() {
    let p = &(&c(1) + &t()) * &(&c(1) - &t());
    assert_eq!(p, upoly(&[1, 0, -1]));
    assert!(l1_norm(&p) <= int(4));
    assert_eq!(t().pow(3).deriv("t"), upoly(&[0, 0, 3]));
    assert_eq!(gcd(&upoly(&[-1, 0, 1]), &upoly(&[-1, 1])), upoly(&[-1, 1]));
    // substituting an absent variable is the identity
    assert_eq!(p.substitute("z", &t()), p);
}

#[test]
fn multivariate_gcd_and_division() {
    let x = MultiPoly::var("x");
    let y = MultiPoly::var("y");
    let a = &(&x + &y) * &(&(&x * &y) - &c(2));
    let b = &(&x + &y) * &(&x - &(&y * &y));
    let g = gcd(&a, &b);
    assert_eq!(g, &x + &y);
    assert_eq!(a.div_exact(&(&x + &y)).unwrap(), &(&x * &y) - &c(2));
    assert!(a.div_exact(&(&x - &y)).is_none());
    assert_eq!(gcd(&x, &y), MultiPoly::one());
}

#[test]
fn ratfunc_canonical_uniqueness_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let p = random_poly(&mut rng, &["a", "t"], 2, 3);
        let mut q = random_poly(&mut rng, &["a", "t"], 2, 3);
        if q.is_zero() {
            q = c(1);
        }
        let mut r = random_poly(&mut rng, &["a", "t"], 2, 2);
        if r.is_zero() {
            r = &t() + &c(3);
        }
        let lhs = RatFunc::new(&p * &r, &q * &r).unwrap();
        let rhs = RatFunc::new(p.clone(), q.clone()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn solve_linear_examples() {
    let id = FieldMatrix::identity(3);
    let b: Vec<RatFunc> = (0..3).map(|k| RatFunc::from_poly(upoly(&[k, 1]))).collect();
    assert_eq!(solve_linear(&id, &b).unwrap(), b);
    let a = FieldMatrix::from_rows(vec![vec![RatFunc::var("t")]]);
    let x = solve_linear(&a, &[RatFunc::from_poly(upoly(&[0, 1, 1]))]).unwrap();
    assert_eq!(x, vec![RatFunc::from_poly(upoly(&[1, 1]))]);
    let sing = FieldMatrix::from_rows(vec![vec![RatFunc::var("t"), RatFunc::one()], vec![RatFunc::var("t"), RatFunc::one()]]);
    assert_eq!(solve_linear(&sing, &[RatFunc::one(), RatFunc::zero()]), Err(abint_core::Error::NoSolution));
    // consistent rank-deficient system: free variable set to zero
    let x = solve_linear(&sing, &[RatFunc::one(), RatFunc::one()]).unwrap();
    assert_eq!(x[1], RatFunc::zero());
}

fn det3(m: &FieldMatrix) -> RatFunc {
    let g = |i, j| m.get(i, j).clone();
    let minor = |a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc| a.mul(&d).sub(&b.mul(&c));
    g(0, 0)
        .mul(&minor(g(1, 1), g(1, 2), g(2, 1), g(2, 2)))
        .sub(&g(0, 1).mul(&minor(g(1, 0), g(1, 2), g(2, 0), g(2, 2))))
        .add(&g(0, 2).mul(&minor(g(1, 0), g(1, 1), g(2, 0), g(2, 1))))
}

#[test]
fn solve_linear_matches_cramer_on_random_3x3() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tested = 0;
    while tested < 15 {
        let a = FieldMatrix::from_fn(3, 3, |_, _| RatFunc::zero());
        let mut a = a;
        for i in 0..3 {
            for j in 0..3 {
                let n = random_poly(&mut rng, &["t"], 2, 2);
                let d = &random_poly(&mut rng, &["t"], 1, 1) + &c(7);
                a.set(i, j, RatFunc::new(n, d).unwrap());
            }
        }
        let det = det3(&a);
        if det.is_zero() {
            continue;
        }
        let b: Vec<RatFunc> = (0..3).map(|_| RatFunc::from_poly(random_poly(&mut rng, &["t"], 2, 2))).collect();
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        for k in 0..3 {
            let mut ak = a.clone();
            for i in 0..3 {
                ak.set(i, k, b[i].clone());
            }
            assert_eq!(x[k], det3(&ak).div(&det).unwrap());
        }
        tested += 1;
    }
}

#[test]
fn sparse_solver_free_variables_zero_and_order_independent() {
    let rows: Vec<(Vec<(usize, Rational)>, Rational)> = vec![
        (vec![(0, int(1)), (2, int(1))], int(3)),
        (vec![(1, int(2)), (2, int(2))], int(4)),
        (vec![(0, int(1)), (1, int(1)), (2, int(2))], int(5)),
    ];
    let mut s1 = SparseSolver::new(3);
    for (r, b) in rows.clone() {
        s1.add_row(r, b);
    }
    let mut s2 = SparseSolver::new(3);
    for (r, b) in rows.into_iter().rev() {
        s2.add_row(r, b);
    }
    let x1 = s1.solve().unwrap();
    assert_eq!(x1, s2.solve().unwrap());
    assert_eq!(x1, vec![int(3), int(2), int(0)]);
    let mut s3 = SparseSolver::<Rational>::new(1);
    s3.add_row(vec![(0, int(1))], int(1));
    s3.add_row(vec![(0, int(2))], int(3));
    assert!(s3.solve().is_none());
}

#[test]
fn parse_rational_literals() {
    use abint_core::algebra::rational::parse_rational;
    assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
    assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
    assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn unirat_field_arithmetic() {
    let x = UniRat::from_poly(UniPoly::<Rational>::x());
    let inv = x.inv().unwrap();
    assert!(x.mul(&inv).is_one());
    let y = x.add(&UniRat::one()).mul(&inv);
    assert_eq!(y.deriv(), inv.mul(&inv).neg());
}

proptest! {
    #[test]
    fn norm_is_submultiplicative(a in proptest::collection::vec(-9i64..9, 0..6),
                                 b in proptest::collection::vec(-9i64..9, 0..6)) {
        let p = upoly(&a);
        let q = upoly(&b);
        prop_assert!(l1_norm(&(&p * &q)) <= l1_norm(&p) * l1_norm(&q));
    }

    #[test]
    fn gcd_divides_both(a in proptest::collection::vec(-5i64..5, 1..5),
                        b in proptest::collection::vec(-5i64..5, 1..5),
                        g in proptest::collection::vec(-5i64..5, 1..4)) {
        let g = upoly(&g);
        prop_assume!(!g.is_zero());
        let p = &upoly(&a) * &g;
        let q = &upoly(&b) * &g;
        let h = gcd(&p, &q);
        if !p.is_zero() { prop_assert!(p.div_exact(&h).is_some()); }
        if !q.is_zero() { prop_assert!(q.div_exact(&h).is_some()); }
        if !p.is_zero() && !q.is_zero() { prop_assert!(h.div_exact(&g.normalized()).is_some()); }
    }
}

#[test]
fn zero_polynomial_degree_sentinel() {
    assert_eq!(MultiPoly::zero().degree(), None);
    assert_eq!(MultiPoly::one().degree(), Some(0));
    assert!(int(0) < int(1));
}

fn random_upoly_qi(rng: &mut ChaCha8Rng, deg: usize) -> UniPoly<QI> {
    let q = |rng: &mut ChaCha8Rng| rat(rng.random_range(-6..=6), rng.random_range(1..=4));
    loop {
        let p = UniPoly::new((0..=deg).map(|_| QI::new(q(rng), q(rng))).collect());
        if p.degree() == Some(deg) {
            return p;
        }
    }
}

#[test]
fn gaussian_poly_gcd_recovers_common_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let (dg, da, db) = (rng.random_range(0..=3), rng.random_range(1..=4), rng.random_range(1..=4));
        let g = random_upoly_qi(&mut rng, dg);
        let a = random_upoly_qi(&mut rng, da);
        let b = random_upoly_qi(&mut rng, db);
        let h = a.mul(&g).gcd(&b.mul(&g));
        // a and b are coprime for generic coefficients
        if a.gcd(&b).degree() == Some(0) {
            assert_eq!(h, g.monic());
        }
        assert!(a.mul(&g).div_rem(&h).1.is_zero());
        assert!(b.mul(&g).div_rem(&h).1.is_zero());
    }
}
