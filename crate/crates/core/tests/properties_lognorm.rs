use numspec::{
    lognorm_closed, lognorm_duality, lognorm_quotient, op_norm, sample_numrange, spectral_abscissa, CMatrix,
    LpExponent, NormSpec, C64,
};
use proptest::prelude::*;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn cmatrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(2.0), n * n).prop_map(move |v| CMatrix::from_row_major(n, &v).unwrap())
}

fn any_cmatrix() -> impl Strategy<Value = CMatrix> {
    (1usize..=4).prop_flat_map(cmatrix)
}

fn classical() -> impl Strategy<Value = LpExponent> {
    prop_oneof![Just(LpExponent::ONE), Just(LpExponent::TWO), Just(LpExponent::INF)]
}

/// `μ` from the closed form where one exists, else the quotient estimator,
/// with the tolerance its convergence test supports.
fn lognorm(a: &CMatrix, p: LpExponent) -> (f64, f64) {
    if p.is_classical() {
        (lognorm_closed(a, p).unwrap().value, 1e-8)
    } else {
        (lognorm_quotient(a, &NormSpec::P(p)).unwrap().value, 1e-6)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairings_never_exceed_the_logarithmic_norm(
        a in any_cmatrix(),
        p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0), Just(f64::INFINITY)],
        seed in any::<u64>(),
    ) {
        let p = LpExponent::new(p).unwrap();
        let (mu, tol) = lognorm(&a, p);
        for w in sample_numrange(&a, p, 400, seed).unwrap() {
            prop_assert!(w.re <= mu + tol, "pairing {w} above μ = {mu}");
        }
    }

    #[test]
    fn subadditive_in_the_matrix((a, b) in (1usize..=4).prop_flat_map(|n| (cmatrix(n), cmatrix(n))), p in classical()) {
        let lhs = lognorm_closed(&a.add(&b), p).unwrap().value;
        let rhs = lognorm_closed(&a, p).unwrap().value + op_norm(&b, &NormSpec::P(p)).unwrap();
        prop_assert!(lhs <= rhs + 1e-8);
    }

    #[test]
    fn dominates_the_spectral_abscissa(a in any_cmatrix(), p in classical()) {
        let mu = lognorm_closed(&a, p).unwrap().value;
        prop_assert!(spectral_abscissa(&a).unwrap() <= mu + 1e-8);
    }

    #[test]
    fn shift_adds_the_real_part(a in any_cmatrix(), c in complex(5.0), p in classical()) {
        let mu = lognorm_closed(&a, p).unwrap().value;
        let shifted = lognorm_closed(&a.shifted(c), p).unwrap().value;
        prop_assert!((shifted - (mu + c.re)).abs() <= 1e-8 * (1.0 + mu.abs() + c.re.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimators_agree(a in cmatrix(3), seed in any::<u64>()) {
        for p in [LpExponent::ONE, LpExponent::TWO, LpExponent::INF] {
            let c = lognorm_closed(&a, p).unwrap().value;
            let q = lognorm_quotient(&a, &NormSpec::P(p)).unwrap().value;
            prop_assert!((c - q).abs() <= 1e-5, "p = {}: closed {c}, quotient {q}", p.value());
        }
        for p in [1.5, 3.0] {
            let e = LpExponent::new(p).unwrap();
            let q = lognorm_quotient(&a, &NormSpec::P(e)).unwrap().value;
            let d = lognorm_duality(&a, e, seed, 8).unwrap().value;
            prop_assert!((q - d).abs() <= 1e-3, "p = {p}: quotient {q}, duality {d}");
        }
    }
}
