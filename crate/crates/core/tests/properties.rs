//! Property-based invariants over randomly generated inputs.

use proptest::prelude::*;

use k3zd::arith::Place;
use k3zd::quadform::{self, QuadraticForm};
use k3zd::{hilbert, oracle, rat, rat_int, Int, Rat};

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (
        (-60i64..=60).prop_filter("nonzero numerator", |n| *n != 0),
        1i64..=30,
    )
        .prop_map(|(n, d)| rat(n, d))
}

fn small_place() -> impl Strategy<Value = Place> {
    prop_oneof![
        Just(Place::Infinity),
        prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 17])
            .prop_map(|p| Place::prime(p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The product of (a, b)_v over all places is +1.
    #[test]
    fn product_formula(a in nonzero_rat(), b in nonzero_rat()) {
        let pf = hilbert::product_formula_check(&a, &b).unwrap();
        prop_assert!(pf.pass, "product formula failed for a={a}, b={b}: product {}", pf.product);
    }

    /// Symmetry, bilinearity, and the square-class identities of the symbol.
    #[test]
    fn symbol_identities(
        a in nonzero_rat(),
        b in nonzero_rat(),
        c in nonzero_rat(),
        place in small_place(),
    ) {
        let check = hilbert::symbol_identities_check(&a, &b, &c, &place).unwrap();
        prop_assert!(check.pass, "{:?}", check.first_violation);
    }

    /// Scaling both slots by squares never changes the symbol.
    #[test]
    fn symbol_square_class_invariance(
        a in nonzero_rat(),
        b in nonzero_rat(),
        s in nonzero_rat(),
        t in nonzero_rat(),
        place in small_place(),
    ) {
        let lhs = hilbert::hilbert_symbol(&a, &b, &place).unwrap();
        let rhs = hilbert::hilbert_symbol(&(&a * &s * &s), &(&b * &t * &t), &place).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Signature and discriminant are invariant under unimodular congruence
    /// transforms G -> U^T G U.
    #[test]
    fn congruence_invariance(
        diag in prop::collection::vec((-9i64..=9).prop_filter("nonzero", |x| *x != 0), 2..=4),
        shears in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
    ) {
        let n = diag.len();
        let q = QuadraticForm::diagonal(
            &diag.iter().map(|&c| rat_int(c)).collect::<Vec<_>>(),
        ).unwrap();

        // Build U as a product of elementary shears (row_i += k * row_j).
        let mut g: Vec<Vec<Rat>> = q.gram().to_vec();
        for &(i, j, k) in &shears {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            // Apply the shear congruence on both sides of g.
            let k = rat_int(k);
            for col in 0..n {
                let add = &g[j][col] * &k;
                g[i][col] += add;
            }
            for row in 0..n {
                let add = &g[row][j] * &k;
                g[row][i] += add;
            }
        }
        let q2 = QuadraticForm::from_gram(g).unwrap();
        prop_assert_eq!(quadform::signature(&q), quadform::signature(&q2));
        prop_assert_eq!(
            quadform::discriminant(&q).unwrap(),
            quadform::discriminant(&q2).unwrap()
        );
    }

    /// On small diagonal forms the local-global verdict and the exhaustive
    /// integer zero search must agree in both directions.
    #[test]
    fn oracle_agreement_small_diagonal(
        coeffs in prop::collection::vec((-15i64..=15).prop_filter("nonzero", |x| *x != 0), 2..=3),
    ) {
        let q = QuadraticForm::diagonal(
            &coeffs.iter().map(|&c| rat_int(c)).collect::<Vec<_>>(),
        ).unwrap();
        let verdict = quadform::is_isotropic_global(&q).unwrap();
        let zero = oracle::find_integer_zero(&q, 500);
        if verdict.is_isotropic() {
            // Witness bounds for these coefficient sizes are far below 500.
            let w = zero.expect("isotropic form must have a small witness");
            prop_assert!(q.eval(&w) == Rat::from(Int::from(0)));
        } else {
            prop_assert!(zero.is_none(), "anisotropic verdict but zero {zero:?}");
        }
    }
}
