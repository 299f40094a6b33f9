use numspec::{
    growth_envelope_check, lognorm_closed, norm_curve, semigroup::log_grid, spectral_abscissa, CMatrix, LpExponent,
    NormSpec, C64,
};
use proptest::prelude::*;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn cmatrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(1.5), n * n).prop_map(move |v| CMatrix::from_row_major(n, &v).unwrap())
}

fn any_cmatrix() -> impl Strategy<Value = CMatrix> {
    (1usize..=4).prop_flat_map(cmatrix)
}

fn classical() -> impl Strategy<Value = LpExponent> {
    prop_oneof![Just(LpExponent::ONE), Just(LpExponent::TWO), Just(LpExponent::INF)]
}

fn grid() -> Vec<f64> {
    log_grid(1e-3, 20.0, 25)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn growth_rate_below_the_logarithmic_norm(a in any_cmatrix(), theta in 0.0f64..std::f64::consts::TAU, p in classical()) {
        let mu = lognorm_closed(&a.rotated(theta), p).unwrap().value;
        let curve = norm_curve(&a, &NormSpec::P(p), theta, &grid()).unwrap();
        for (t, v) in curve.ts.iter().zip(&curve.values) {
            prop_assert!(v.ln() / t <= mu + 1e-8, "t = {t}: rate {} above μ = {mu}", v.ln() / t);
        }
        prop_assert!(growth_envelope_check(&curve, mu).pass);
    }

    #[test]
    fn growth_rate_above_the_spectral_abscissa(a in any_cmatrix(), p in classical()) {
        // ‖e^{tA}‖ dominates the spectral radius e^{t s(A)}.
        let s = spectral_abscissa(&a).unwrap();
        let curve = norm_curve(&a, &NormSpec::P(p), 0.0, &grid()).unwrap();
        for (t, v) in curve.ts.iter().zip(&curve.values) {
            prop_assert!(v.ln() / t >= s - 1e-8 * (1.0 + 1.0 / t), "t = {t}: rate {} below s = {s}", v.ln() / t);
        }
    }

    #[test]
    fn skew_hermitian_generates_isometries(b in any_cmatrix()) {
        let skew = b.add(&b.adjoint().scaled(C64::new(-1.0, 0.0)));
        let curve = norm_curve(&skew, &NormSpec::P(LpExponent::TWO), 0.0, &grid()).unwrap();
        for v in &curve.values {
            prop_assert!((v - 1.0).abs() <= 1e-9, "norm {v}");
        }
        prop_assert!(lognorm_closed(&skew, LpExponent::TWO).unwrap().value.abs() <= 1e-12);
    }
}
