use numspec::{
    dual_witness, mat_exp, op_norm, pairing, resolvent, vec_norm, CMatrix, CVector, LpExponent, NormSpec, C64,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn cvector(n: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec(complex(3.0), n).prop_map(|v| CVector::new(v).unwrap())
}

fn cmatrix(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = CMatrix> {
    sizes.prop_flat_map(|n| {
        prop::collection::vec(complex(2.0), n * n).prop_map(move |v| CMatrix::from_row_major(n, &v).unwrap())
    })
}

fn exponent() -> impl Strategy<Value = LpExponent> {
    prop_oneof![
        Just(1.0),
        Just(1.5),
        Just(2.0),
        Just(3.0),
        Just(f64::INFINITY),
        1.0f64..6.0,
    ]
    .prop_map(|p| LpExponent::new(p).unwrap())
}

fn nonzero(x: &CVector) -> bool {
    x.as_slice().iter().any(|z| z.norm() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_axioms((x, y) in (1usize..6).prop_flat_map(|n| (cvector(n), cvector(n))), c in complex(4.0), p in exponent()) {
        let norm = NormSpec::P(p);
        let nx = vec_norm(&x, &norm).unwrap();
        let ny = vec_norm(&y, &norm).unwrap();
        let sum = CVector::new(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a + b).collect()).unwrap();
        prop_assert!(vec_norm(&sum, &norm).unwrap() <= nx + ny + 1e-12 * (1.0 + nx + ny));
        let scaled = vec_norm(&x.scaled(c), &norm).unwrap();
        prop_assert!((scaled - c.norm() * nx).abs() <= 1e-12 * (1.0 + c.norm() * nx));
    }

    #[test]
    fn duality_identities(x in (1usize..6).prop_flat_map(cvector), p in exponent()) {
        prop_assume!(nonzero(&x));
        let nx = vec_norm(&x, &NormSpec::P(p)).unwrap();
        let j = dual_witness(&x, p).unwrap();
        let pj = pairing(x.as_slice(), j.as_slice());
        let nj = vec_norm(&j, &NormSpec::P(p.conjugate())).unwrap();
        let tol = 1e-10 * nx * nx;
        prop_assert!((pj.re - nx * nx).abs() <= tol, "⟨x, j⟩ = {pj}, ‖x‖² = {}", nx * nx);
        prop_assert!(pj.im.abs() <= tol);
        prop_assert!((nj * nj - nx * nx).abs() <= tol);
    }

    #[test]
    fn operator_norm_dominates_images(a in cmatrix(1..=4), p in prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY), Just(3.0)], seed in any::<u64>()) {
        let norm = NormSpec::p(p).unwrap();
        let m = op_norm(&a, &norm).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let x: Vec<C64> = (0..a.n())
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let x = CVector::new(x).unwrap();
            let ax = CVector::new(a.apply(x.as_slice())).unwrap();
            let bound = m * vec_norm(&x, &norm).unwrap();
            // General p is a certified lower bound from ascent; allow its
            // convergence tolerance.
            let slack = if p == 3.0 { 1e-6 * (1.0 + bound) } else { 1e-10 * (1.0 + bound) };
            prop_assert!(vec_norm(&ax, &norm).unwrap() <= bound + slack);
        }
    }

    #[test]
    fn exponential_semigroup_law(a in cmatrix(1..=4), s in 0.0f64..1.5, t in 0.0f64..1.5) {
        let es = mat_exp(&a, s).unwrap();
        let et = mat_exp(&a, t).unwrap();
        let est = mat_exp(&a, s + t).unwrap();
        let scale = 1.0 + est.norm2();
        prop_assert!(es.mul(&et).max_abs_diff(&est) <= 1e-10 * scale);
        let small = mat_exp(&a, 1e-9).unwrap();
        prop_assert!(small.max_abs_diff(&CMatrix::identity(a.n())) <= 1e-8 * (1.0 + a.norm2()));
    }

    #[test]
    fn resolvent_identity(a in cmatrix(1..=5), lambda in complex(12.0)) {
        let eigs = numspec::eigenvalues(&a).unwrap();
        prop_assume!(eigs.iter().all(|e| (e - lambda).norm() > 1e-2));
        let r = resolvent(&a, lambda).unwrap();
        let shifted = a.scaled(C64::new(-1.0, 0.0)).shifted(lambda);
        prop_assert!(shifted.mul(&r).max_abs_diff(&CMatrix::identity(a.n())) <= 1e-8);
    }
}
