//! Property tests for polynomial arithmetic and the tensor calculus.

use gck_core::fuzz::{differential_sides, Fuzzer};
use gck_core::ratpoly::{rat, RatPoly};
use gck_core::tensor::{exterior_d, koszul_d2, lie_bracket, lie_derivative, wedge, Chart};
use proptest::prelude::*;

fn setup(seed: u64, n: usize, degree: u32) -> (Fuzzer, Chart) {
    (Fuzzer::new(seed, degree), Chart::standard(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), n in 1usize..=4, degree in 0u32..=3) {
        let (mut fz, c) = setup(seed, n, degree);
        let (p, q, r) = (fz.poly(&c), fz.poly(&c), fz.poly(&c));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &c.one(), p.clone());
    }

    #[test]
    fn partials_commute(seed in any::<u64>(), degree in 0u32..=4) {
        let (mut fz, c) = setup(seed, 3, degree);
        let p = fz.poly(&c);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(p.partial_idx(i).partial_idx(j), p.partial_idx(j).partial_idx(i));
            }
        }
    }

    #[test]
    fn eval_is_a_ring_homomorphism(seed in any::<u64>(), pt in proptest::collection::vec(-5i64..=5, 3), den in 1i64..=4) {
        let (mut fz, c) = setup(seed, 3, 2);
        let (p, q) = (fz.poly(&c), fz.poly(&c));
        let point: Vec<_> = pt.iter().map(|&v| rat(v, den)).collect();
        let (ep, eq) = (p.eval(&point).unwrap(), q.eval(&point).unwrap());
        prop_assert_eq!((&p * &q).eval(&point).unwrap(), &ep * &eq);
        prop_assert_eq!((&p + &q).eval(&point).unwrap(), &ep + &eq);
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), degree in 0u32..=3) {
        let (mut fz, c) = setup(seed, 4, degree);
        let p = fz.poly(&c);
        let text = p.to_string();
        let back = RatPoly::parse(&text, c.vars()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 2usize..=4, degree in 0u32..=2) {
        let (mut fz, c) = setup(seed, n, degree);
        let f = fz.poly(&c);
        prop_assert!(exterior_d(&exterior_d(&gck_core::KForm::function(&c, f))).is_zero());
        for k in 1..n {
            let form = fz.form(&c, k);
            prop_assert!(exterior_d(&exterior_d(&form)).is_zero());
        }
    }

    #[test]
    fn koszul_matches_exterior_derivative(seed in any::<u64>(), n in 3usize..=4, degree in 0u32..=2) {
        let (mut fz, c) = setup(seed, n, degree);
        let sigma = fz.form(&c, 2);
        let [x, y, z] = [0, 1, 2].map(|_| fz.vector_field(&c));
        prop_assert_eq!(koszul_d2(&sigma, &x, &y, &z).unwrap(), exterior_d(&sigma).eval_on(&[&x, &y, &z]).unwrap());
    }

    #[test]
    fn differential_identity(seed in any::<u64>(), n in 2usize..=4, degree in 0u32..=2) {
        let (mut fz, c) = setup(seed, n, degree);
        let sigma = fz.form(&c, 2);
        let (x, y) = (fz.vector_field(&c), fz.vector_field(&c));
        let (lhs, rhs) = differential_sides(&sigma, &x, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_for_vector_fields(seed in any::<u64>(), n in 1usize..=4, degree in 0u32..=2) {
        let (mut fz, c) = setup(seed, n, degree);
        let [x, y, z] = [0, 1, 2].map(|_| fz.vector_field(&c));
        let jac = lie_bracket(&x, &lie_bracket(&y, &z).unwrap()).unwrap()
            .add(&lie_bracket(&y, &lie_bracket(&z, &x).unwrap()).unwrap())
            .add(&lie_bracket(&z, &lie_bracket(&x, &y).unwrap()).unwrap());
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn lie_derivative_is_a_derivation_of_wedge(seed in any::<u64>(), n in 2usize..=4, degree in 0u32..=2) {
        let (mut fz, c) = setup(seed, n, degree);
        let x = fz.vector_field(&c);
        let (a, b) = (fz.form(&c, 1), fz.form(&c, 1));
        let lhs = lie_derivative(&x, &wedge(&a, &b).unwrap()).unwrap();
        let rhs = wedge(&lie_derivative(&x, &a).unwrap(), &b).unwrap()
            .add(&wedge(&a, &lie_derivative(&x, &b).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_commutes_with_d(seed in any::<u64>(), n in 2usize..=4, degree in 0u32..=2) {
        let (mut fz, c) = setup(seed, n, degree);
        let x = fz.vector_field(&c);
        let a = fz.form(&c, 1);
        prop_assert_eq!(
            lie_derivative(&x, &exterior_d(&a)).unwrap(),
            exterior_d(&lie_derivative(&x, &a).unwrap())
        );
    }
}
