mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superlax::coeff::Chart;
use superlax::fermion::{exchange_operator, fock_basis, multiply_words, FermionPoly};
use superlax::matrix::dense;
use superlax::{BasisTag, Jacobi, Operator, RatCoeff, Scalar};

use common::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn scalar_inverse(a in nonzero_scalar()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(Scalar::parse(&a.to_text()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn ratcoeff_products_commute_and_evaluate(
        (n, a, b) in (2usize..=3, chart()).prop_flat_map(|(n, c)| (Just(n), ratcoeff(n, c), ratcoeff(n, c))),
        seed in any::<u64>(),
    ) {
        prop_assert!((&(&a * &b) - &(&b * &a)).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let p = point(&mut rng, n);
            let (ea, eb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
            prop_assert_eq!((&a * &b).eval(&p).unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).eval(&p).unwrap(), &ea + &eb);
        }
    }

    #[test]
    fn derive_obeys_leibniz(c in chart(), f in ratcoeff(3, Chart::ExpHyperbolic), g in ratcoeff(3, Chart::ExpHyperbolic), k in 0usize..3) {
        let lhs = (&f * &g).derive(k, c);
        let rhs = &(&f.derive(k, c) * &g) + &(&f * &g.derive(k, c));
        prop_assert!((&lhs - &rhs).is_zero(), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn ratcoeff_text_round_trip(f in ratcoeff(3, Chart::ExpTrigonometric)) {
        prop_assert_eq!(RatCoeff::parse(&f.to_text(), 3).unwrap(), f);
    }

    #[test]
    fn operator_product_is_associative(
        a in operator(2, Chart::Cartesian),
        b in operator(2, Chart::Cartesian),
        c in operator(2, Chart::Cartesian),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn operator_product_is_associative_in_exponential_chart(
        a in operator(2, Chart::ExpTrigonometric),
        b in operator(2, Chart::ExpTrigonometric),
        c in operator(2, Chart::ExpTrigonometric),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn adjoint_is_an_antiinvolution((a, b) in chart().prop_flat_map(|c| (operator(2, c), operator(2, c)))) {
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn operator_text_round_trip(
        (n, c, a) in (2usize..=3, chart()).prop_flat_map(|(n, c)| (Just(n), Just(c), operator(n, c))),
    ) {
        let text = a.to_text();
        let back = Operator::parse(&text, c, n).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn fock_representation_is_a_morphism((n, a, b) in (1usize..=4).prop_flat_map(|n| (Just(n), word(n), word(n)))) {
        let product = multiply_words(a.clone(), b.clone())
            .into_iter()
            .fold(FermionPoly::zero(), |acc, (s, w)| &acc + &FermionPoly::word(w, Scalar::from_int(s)));
        let ma = FermionPoly::word(a, Scalar::one()).fock_matrix(n);
        let mb = FermionPoly::word(b, Scalar::one()).fock_matrix(n);
        prop_assert_eq!(product.fock_matrix(n), dense::mul(&ma, &mb));
    }

    #[test]
    fn fermion_text_round_trip(p in fermion_poly(4)) {
        prop_assert_eq!(FermionPoly::parse(&p.to_text(), 4).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn sector_block_is_a_morphism_on_the_commutant(
        a in bilinear(2, Chart::Cartesian),
        b in bilinear(2, Chart::Cartesian),
        m in 0usize..=2,
    ) {
        let ab = (&a * &b).sector_block(m, BasisTag::Particle, None).unwrap();
        let ba = a.sector_block(m, BasisTag::Particle, None).unwrap().mul(&b.sector_block(m, BasisTag::Particle, None).unwrap());
        prop_assert!(ab.sub(&ba).is_zero());
    }

    #[test]
    fn sector_block_morphism_three_particles(
        a in bilinear(3, Chart::ExpHyperbolic),
        b in bilinear(3, Chart::ExpHyperbolic),
        m in 0usize..=3,
    ) {
        let ab = (&a * &b).sector_block(m, BasisTag::Particle, None).unwrap();
        let ba = a.sector_block(m, BasisTag::Particle, None).unwrap().mul(&b.sector_block(m, BasisTag::Particle, None).unwrap());
        prop_assert!(ab.sub(&ba).is_zero());
    }

    #[test]
    fn total_sum_is_centre_of_mass_expectation(
        (n, a) in (2usize..=3).prop_flat_map(|n| (Just(n), bilinear(n, Chart::Cartesian))),
    ) {
        let jac = Jacobi::standard(n).unwrap();
        let cm = [jac.vector(0, true)];
        let expect = a.matrix_elements(&cm, &cm, BasisTag::Jacobi).get(0, 0).scale_int(n as i64);
        let block = a.sector_block(1, BasisTag::Particle, None).unwrap();
        prop_assert_eq!(block.total_sum(), expect);
    }

    #[test]
    fn relative_projection_closed_form((n, p) in (2usize..=4).prop_flat_map(|n| (Just(n), fermion_poly(n)))) {
        let jac = Jacobi::standard(n).unwrap();
        prop_assert_eq!(jac.relative_projection(&p), jac.projection_closed_form(&p));
    }
}

#[test]
fn exchange_operators_are_self_adjoint_involutions() {
    for n in 2..=4 {
        let dim = fock_basis(n).len();
        for i in 0..n {
            for j in (i + 1)..n {
                let k = exchange_operator(i, j, n).unwrap();
                assert_eq!(&k * &k, FermionPoly::one(), "K_{i}{j}^2, N={n}");
                assert_eq!(k.adjoint(), k);
                assert_eq!(dense::mul(&k.fock_matrix(n), &k.fock_matrix(n)), dense::identity(dim));
            }
        }
    }
}
