use numspec::renorm::TimeGrid;
use numspec::{
    build_hildebrandt_norm, check_spectrum_inclusion, mat_exp, renormed_region, spectral_abscissa, vec_norm, CMatrix,
    CVector, LpExponent, NormSpec, RenormSpec, C64,
};
use proptest::prelude::*;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn cmatrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(1.5), n * n).prop_map(move |v| CMatrix::from_row_major(n, &v).unwrap())
}

fn base() -> impl Strategy<Value = LpExponent> {
    prop_oneof![
        Just(LpExponent::ONE),
        Just(LpExponent::TWO),
        Just(LpExponent::INF),
        Just(LpExponent::new(3.0).unwrap()),
    ]
}

/// A renorming with `ω` a fixed distance above the rotated spectral abscissa.
fn spec(a: &CMatrix, theta: f64, gap: f64, p: LpExponent) -> RenormSpec {
    let omega = spectral_abscissa(&a.rotated(theta)).unwrap() + gap;
    build_hildebrandt_norm(a, theta, omega, p, &TimeGrid::default()).unwrap()
}

fn matrix_and_vectors(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (CMatrix, Vec<Vec<C64>>)> {
    sizes.prop_flat_map(|n| {
        (
            cmatrix(n),
            prop::collection::vec(prop::collection::vec(complex(2.0), n), 4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalent_to_the_base_norm(
        (a, xs) in matrix_and_vectors(1..=3),
        theta in 0.0f64..std::f64::consts::TAU,
        gap in 0.2f64..1.5,
        p in base(),
    ) {
        let r = spec(&a, theta, gap, p);
        for x in &xs {
            let base = vec_norm(&CVector::new(x.clone()).unwrap(), &NormSpec::P(p)).unwrap();
            let renormed = r.norm(x);
            prop_assert!(renormed >= base * (1.0 - 1e-12), "{renormed} < {base}");
            prop_assert!(renormed <= r.bound() * base * (1.0 + 1e-9), "{renormed} > M·{base}");
        }
    }

    #[test]
    fn is_a_norm((a, xs) in matrix_and_vectors(1..=3), c in complex(3.0), p in base()) {
        let r = spec(&a, 0.0, 0.5, p);
        let (x, y) = (&xs[0], &xs[1]);
        let sum: Vec<C64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let (nx, ny) = (r.norm(x), r.norm(y));
        prop_assert!(r.norm(&sum) <= (nx + ny) * (1.0 + 1e-9));
        let scaled: Vec<C64> = x.iter().map(|z| z * c).collect();
        prop_assert!((r.norm(&scaled) - c.norm() * nx).abs() <= 1e-9 * (1.0 + c.norm() * nx));
    }

    #[test]
    fn semigroup_is_omega_contractive(
        (a, xs) in matrix_and_vectors(1..=3),
        theta in 0.0f64..std::f64::consts::TAU,
        t in 0.0f64..3.0,
        p in base(),
    ) {
        let r = spec(&a, theta, 0.5, p);
        let flow = mat_exp(&a.rotated(theta), t).unwrap();
        for x in &xs {
            let before = r.norm(x);
            let after = r.norm(&flow.apply(x));
            // The continuous peak is located to about the square root of
            // machine precision.
            prop_assert!(after <= (r.omega() * t).exp() * before * (1.0 + 1e-7), "t = {t}: {after} vs {before}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn spectrum_inside_the_renormed_region(a in cmatrix(2), p in prop_oneof![Just(LpExponent::ONE), Just(LpExponent::TWO)]) {
        let r = spec(&a, 0.0, 0.5, p);
        let region = renormed_region(&r, 16, 0).unwrap();
        let scale = 1.0 + a.norm2();
        for (lambda, margin) in check_spectrum_inclusion(&a, &region).unwrap() {
            prop_assert!(margin >= -1e-8 * scale, "{lambda} outside by {}", -margin);
        }
    }
}
