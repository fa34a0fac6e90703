//! Property tests tying the structure checkers to each other.

use gck_core::algebroid::{anchor_defect, check_im_form, IMFormCandidate, PoissonAlgebroid};
use gck_core::courant::{
    apply_j, check_c1, check_c2, check_c3, check_gcs, courant_bracket, dirac_check, gauge, integrable_on_basis,
    opposite, pairing, pi_bracket, GSection, GeneralizedStructure,
};
use gck_core::fuzz::Fuzzer;
use gck_core::groupoid::{
    build_pair_hitchin_groupoid, check_hitchin_groupoid, check_multiplicative_endo, check_multiplicative_form,
    check_ts_gholomorphic, omega_j, right_invariant_identity,
};
use gck_core::hitchin::{check_hitchin_pair, gcs_to_hitchin, hitchin_to_gcs, omega_a, sc_structure_check, twist};
use gck_core::morphism::{check_gholomorphic, GHolMapCandidate};
use gck_core::tensor::{
    d_fn, exterior_d, interior, interior2, invert_2form, lie_bracket, pullback, torsion, Bivector, Chart, EndoField,
    KForm, PolyMap, VectorField,
};
use gck_core::{PolyMatrix, RatPoly};
use proptest::prelude::*;

fn even_dim() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(4usize)]
}

/// `s` transported along `φ` with polynomial inverse `ψ`.
fn transport(s: &GeneralizedStructure, phi: &PolyMap, psi: &PolyMap) -> GeneralizedStructure {
    let chart = s.chart();
    let dphi = psi.pull_matrix(&phi.jacobian()).unwrap();
    let dpsi = psi.jacobian();
    let a = &(&dphi * &psi.pull_matrix(s.a.matrix()).unwrap()) * &dpsi;
    let p = &(&dphi * &psi.pull_matrix(&s.pi.sharp()).unwrap()) * &dphi.transpose();
    GeneralizedStructure::new(
        EndoField::new(chart, a).unwrap(),
        Bivector::from_sharp(chart, &p).unwrap(),
        pullback(psi, &s.sigma).unwrap(),
    )
    .unwrap()
}

/// `x_k ↦ x_k + c·x_j²` and its inverse.
fn shear(chart: &Chart, k: usize, j: usize, c: i64) -> (PolyMap, PolyMap) {
    let sq = &chart.coord(j) * &chart.coord(j);
    let mut fwd: Vec<RatPoly> = (0..chart.dim()).map(|i| chart.coord(i)).collect();
    let mut back = fwd.clone();
    fwd[k] = &fwd[k] + &sq.scale(&gck_core::ratpoly::int(c));
    back[k] = &back[k] - &sq.scale(&gck_core::ratpoly::int(c));
    (PolyMap::new(chart, chart, fwd).unwrap(), PolyMap::new(chart, chart, back).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pairing_is_symmetric(seed in any::<u64>(), n in 1usize..=4) {
        let mut fz = Fuzzer::new(seed, 2);
        let c = Chart::standard(n);
        let a = GSection::new(fz.vector_field(&c), fz.form(&c, 1)).unwrap();
        let b = GSection::new(fz.vector_field(&c), fz.form(&c, 1)).unwrap();
        prop_assert_eq!(pairing(&a, &b).unwrap(), pairing(&b, &a).unwrap());
        prop_assert!(courant_bracket(&a, &b).unwrap().add(&courant_bracket(&b, &a).unwrap()).is_zero());
    }

    #[test]
    fn gcs_verdict_matches_basis_oracle(seed in any::<u64>(), n in even_dim(), degree in 0u32..=2, broken in any::<bool>()) {
        let mut fz = Fuzzer::new(seed, degree);
        let c = Chart::standard(n);
        let valid = fz.valid_gcs(&c);
        let s = if broken { fz.perturb(&valid).0 } else { valid };
        let verdict = check_gcs(&s).unwrap().certified();
        prop_assert_eq!(verdict, !broken);
        prop_assert_eq!(verdict, integrable_on_basis(&s).unwrap().certified());
    }

    #[test]
    fn j_squares_to_minus_one_on_valid(seed in any::<u64>(), n in even_dim()) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let s = fz.valid_gcs(&c);
        let v = GSection::new(fz.vector_field(&c), fz.form(&c, 1)).unwrap();
        let jj = apply_j(&s, &apply_j(&s, &v).unwrap()).unwrap();
        prop_assert_eq!(jj, v.neg());
    }

    #[test]
    fn opposite_and_closed_gauge_keep_verdict(seed in any::<u64>(), n in even_dim(), broken in any::<bool>()) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let valid = fz.valid_gcs(&c);
        let s = if broken { fz.perturb(&valid).0 } else { valid };
        let verdict = check_gcs(&s).unwrap().certified();
        prop_assert_eq!(check_gcs(&opposite(&s)).unwrap().certified(), verdict);
        let b = fz.closed_two_form(&c);
        let gauged = gauge(&s, &b).unwrap();
        prop_assert_eq!(check_gcs(&gauged).unwrap().certified(), verdict);
        prop_assert_eq!(gauge(&gauged, &b.neg()).unwrap(), s);
    }

    #[test]
    fn c1_iff_anchor_on_coordinate_differentials(seed in any::<u64>(), n in 2usize..=4, random in any::<bool>()) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let pi = if random { Bivector::from_form(&fz.form(&c, 2)) } else { fz.poisson(&c) };
        let mut jacobi = true;
        for i in 0..n {
            for j in 0..n {
                let (df, dg) = (d_fn(&c, &c.coord(i)), d_fn(&c, &c.coord(j)));
                let lhs = pi.apply(&pi_bracket(&pi, &df, &dg).unwrap());
                jacobi &= lhs == lie_bracket(&pi.apply(&df), &pi.apply(&dg)).unwrap();
            }
        }
        prop_assert_eq!(check_c1(&pi).unwrap().certified(), jacobi);
    }

    #[test]
    fn dirac_iff_c2_for_nondegenerate_pi(seed in any::<u64>(), n in even_dim(), random in any::<bool>()) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let s = fz.valid_gcs(&c);
        let a = if random { fz.endo(&c) } else { s.a.clone() };
        let c2 = check_c2(&s.pi, &a).unwrap().certified();
        prop_assert_eq!(dirac_check(&s.pi, &a).unwrap().certified(), c2);
        if !random {
            prop_assert!(c2);
        }
    }

    #[test]
    fn c2_iff_im_form(seed in any::<u64>(), n in 2usize..=4) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let (pi, a) = fz.im_pair(&c);
        prop_assume!(check_c1(&pi).unwrap().certified());
        let alg = PoissonAlgebroid::new(pi.clone()).unwrap();
        let im = check_im_form(&alg, &IMFormCandidate::dual_of(&a)).unwrap().certified();
        prop_assert_eq!(check_c2(&pi, &a).unwrap().certified(), im);
    }

    #[test]
    fn anchor_preserves_brackets(seed in any::<u64>(), n in 2usize..=4) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let alg = PoissonAlgebroid::new(fz.poisson(&c)).unwrap();
        let (xi, eta) = (fz.form(&c, 1), fz.form(&c, 1));
        prop_assert!(anchor_defect(&alg, &xi, &eta).unwrap().iter().all(RatPoly::is_zero));
    }

    #[test]
    fn hitchin_round_trip(seed in any::<u64>(), n in even_dim(), degree in 0u32..=2) {
        let mut fz = Fuzzer::new(seed, degree);
        let c = Chart::standard(n);
        let p = fz.hitchin_pair(&c);
        let s = hitchin_to_gcs(&p).unwrap();
        prop_assert!(check_gcs(&s).unwrap().certified());
        prop_assert_eq!(&gcs_to_hitchin(&s).unwrap(), &p);
        prop_assert_eq!(hitchin_to_gcs(&gcs_to_hitchin(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn lemma_bijection(seed in any::<u64>(), n in even_dim(), degree in 0u32..=2) {
        let mut fz = Fuzzer::new(seed, degree);
        let c = Chart::standard(n);
        let omega = fz.symplectic(&c);
        let beta = fz.form(&c, 2);
        let a = EndoField::new(&c, &invert_2form(&omega).unwrap().sharp() * &beta.sharp()).unwrap();
        prop_assert_eq!(omega_a(&omega, &a).unwrap(), beta);
    }

    #[test]
    fn post_twist_identities(seed in any::<u64>(), n in even_dim()) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let p = fz.hitchin_pair(&c);
        let sigma = twist(&p);
        let pi = invert_2form(&p.omega).unwrap();
        let a = p.a.matrix();
        let lhs = a * a;
        let rhs = &(-&PolyMatrix::identity(c.vars(), n)) - &(&pi.sharp() * &sigma.sharp());
        prop_assert_eq!(lhs, rhs);
        let ds = exterior_d(&sigma);
        for i in 0..n {
            for j in (i + 1)..n {
                let (x, y) = (VectorField::basis(&c, i), VectorField::basis(&c, j));
                let nij = torsion(&p.a, &x, &y).unwrap();
                prop_assert_eq!(interior(&nij, &p.omega).unwrap(), interior2(&x, &y, &ds).unwrap());
            }
        }
    }

    #[test]
    fn sc_iff_hitchin_with_zero_twist(seed in any::<u64>(), n in even_dim(), variant in 0u8..3) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let p = match variant {
            0 => gck_core::HitchinPair::new(fz.symplectic(&c), EndoField::scalar(&c, fz.coefficient())).unwrap(),
            1 => fz.hitchin_pair(&c),
            _ => {
                // ω = dx0∧dx2 − dx1∧dx3 with the standard complex structure
                let c4 = Chart::standard(4);
                let w = KForm::basis(&c4, &[0, 2]).unwrap().sub(&KForm::basis(&c4, &[1, 3]).unwrap());
                let j = EndoField::new(&c4, Fuzzer::darboux(&c4).sharp()).unwrap();
                gck_core::HitchinPair::new(w, j).unwrap()
            }
        };
        let expected = check_hitchin_pair(&p).unwrap().certified() && twist(&p).is_zero();
        match sc_structure_check(&p.omega, &p.a) {
            Ok(r) => prop_assert_eq!(r.certified(), expected),
            Err(_) => prop_assert!(!expected),
        }
        if variant == 2 {
            prop_assert!(expected);
        }
    }

    #[test]
    fn generalized_holomorphic_maps_compose(seed in any::<u64>(), n in even_dim(), k in 0usize..4, j in 1usize..4, c1 in -2i64..=2, c2 in -2i64..=2) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(n);
        let (k, j) = (k % n, (k + j) % n);
        let j = if j == k { (k + 1) % n } else { j };
        let s0 = fz.valid_gcs(&c);
        let (f, finv) = shear(&c, k, j, c1);
        let (g, ginv) = shear(&c, j, k, c2);
        let s1 = transport(&s0, &f, &finv);
        let s2 = transport(&s1, &g, &ginv);
        let first = GHolMapCandidate::new(f.clone(), s0.clone(), s1.clone()).unwrap();
        let second = GHolMapCandidate::new(g.clone(), s1, s2.clone()).unwrap();
        prop_assert!(check_gholomorphic(&first).unwrap().certified());
        prop_assert!(check_gholomorphic(&second).unwrap().certified());
        let both = GHolMapCandidate::new(f.then(&g).unwrap(), s0, s2).unwrap();
        prop_assert!(check_gholomorphic(&both).unwrap().certified());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pair_groupoid_matches_base(seed in any::<u64>(), bump in -2i64..=2) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(2);
        let p = fz.hitchin_pair(&c);
        let mut cand = build_pair_hitchin_groupoid(&p).unwrap();
        prop_assert!(check_hitchin_groupoid(&cand).unwrap().certified());
        prop_assert!(check_ts_gholomorphic(&cand).unwrap().certified());
        prop_assert!(right_invariant_identity(&cand).unwrap().certified());
        cand.sigma = cand.sigma.add(&KForm::basis(&c, &[0, 1]).unwrap().scale_q(&gck_core::ratpoly::int(bump)));
        let base = hitchin_to_gcs(&p).unwrap();
        let c3 = check_c3(&base.pi, &base.a, &cand.sigma).unwrap().certified();
        prop_assert_eq!(check_hitchin_groupoid(&cand).unwrap().certified(), c3);
        prop_assert_eq!(check_ts_gholomorphic(&cand).unwrap().certified(), c3);
        prop_assert_eq!(c3, bump == 0);
    }

    #[test]
    fn omega_j_multiplicative_iff_j(seed in any::<u64>(), skew in any::<bool>()) {
        let mut fz = Fuzzer::new(seed, 1);
        let c = Chart::standard(2);
        let p = fz.hitchin_pair(&c);
        let mut cand = build_pair_hitchin_groupoid(&p).unwrap();
        if skew {
            let shifted = p.a.add(&EndoField::scalar(&c, fz.coefficient()));
            cand.j = cand.groupoid.block_endo(&p.a, &shifted).unwrap();
        }
        let g = &cand.groupoid;
        let j_mult = check_multiplicative_endo(g, &cand.j).unwrap().certified();
        prop_assert_eq!(check_multiplicative_form(g, &omega_j(&cand)).unwrap().certified(), j_mult);
        prop_assert_eq!(j_mult, !skew);
    }
}
