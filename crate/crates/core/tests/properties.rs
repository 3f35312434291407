mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use qwmp::io::{matrix_to_json, parse_matrix};
use qwmp::qmatrix::complex_embed;
use qwmp::rcdet::*;
use qwmp::spectral::{eig_hermitian, wsvd};
use qwmp::verify::{penrose_residuals, random_instance, Instance, WeightKind};
use qwmp::wmp::*;
use qwmp::{QMatrix, Rational, Real};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quat(bound: i64) -> impl Strategy<Value = QR> {
    (-bound..=bound, -bound..=bound, -bound..=bound, -bound..=bound).prop_map(|(a, b, c, d)| q(a, b, c, d))
}

fn matrix(m: usize, n: usize, bound: i64) -> impl Strategy<Value = MR> {
    prop::collection::vec(quat(bound), m * n).prop_map(move |v| QMatrix::new(m, n, v).unwrap())
}

fn sized_matrix(max: usize, bound: i64) -> impl Strategy<Value = MR> {
    (1..=max, 1..=max).prop_flat_map(move |(m, n)| matrix(m, n, bound))
}

fn hermitian(max: usize) -> impl Strategy<Value = MR> {
    (1..=max).prop_flat_map(|n| {
        (matrix(n, n, 2), prop::collection::vec(-3i64..=3, n)).prop_map(move |(b, d)| {
            let d: Vec<Rational> = d.into_iter().map(Rational::from_i64).collect();
            b.add(b.conj_transpose()).unwrap().add(&MR::diag_real(&d)).unwrap()
        })
    })
}

fn instance(max: usize) -> impl Strategy<Value = Instance<Rational>> {
    (1..=max, 1..=max, any::<u64>(), 0..3usize, any::<bool>()).prop_map(|(m, n, seed, kind, deficient)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = [WeightKind::Identity, WeightKind::Scalar, WeightKind::General][kind];
        let rank = deficient.then(|| m.min(n).saturating_sub(1));
        random_instance(&mut rng, m, n, rank, kind).unwrap()
    })
}

fn embed_rank(a: &MR) -> usize {
    complex_embed(a).data.rank(1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in quat(9), b in quat(9), c in quat(9)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn norm_is_multiplicative(a in quat(9), b in quat(9)) {
        prop_assert_eq!((&a * &b).norm_sqr(), a.norm_sqr() * b.norm_sqr());
    }

    #[test]
    fn conjugation_reverses_products(a in quat(9), b in quat(9)) {
        prop_assert_eq!((&a * &b).conj(), b.conj() * a.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        let n = &a * &a.conj();
        prop_assert!(n.a1.is_zero() && n.a2.is_zero() && n.a3.is_zero() && n.a0 >= Rational::from_i64(0));
    }

    #[test]
    fn nonzero_quaternions_invert(a in quat(9)) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert_eq!(&a * &inv, QR::one());
        prop_assert_eq!(&inv * &a, QR::one());
    }

    #[test]
    fn adjoint_reverses_products(a in matrix(3, 4, 3), b in matrix(4, 2, 3)) {
        let lhs = a.matmul(&b).unwrap().conj_transpose().clone();
        let rhs = b.conj_transpose().matmul(a.conj_transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedding_is_multiplicative(a in matrix(2, 3, 3), b in matrix(3, 3, 3)) {
        let lhs = complex_embed(&a.matmul(&b).unwrap()).data;
        let rhs = complex_embed(&a).data * complex_embed(&b).data;
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn rank_is_preserved(a in sized_matrix(4, 2)) {
        let r = a.rank();
        prop_assert_eq!(a.conj_transpose().rank(), r);
        prop_assert_eq!(a.conj_transpose().matmul(&a).unwrap().rank(), r);
        prop_assert_eq!(a.matmul(a.conj_transpose()).unwrap().rank(), r);
        prop_assert_eq!(embed_rank(&a), 2 * r);
    }

    #[test]
    fn json_round_trip(a in sized_matrix(3, 50)) {
        let scaled = a.scale_real(&Rational::from_ratio(1, 7));
        let text = matrix_to_json(&scaled).to_string();
        prop_assert_eq!(parse_matrix::<Rational>(&text).unwrap(), scaled);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hermitian_determinants_agree(h in hermitian(4)) {
        let d = det_hermitian(&h).unwrap();
        for t in 0..h.rows() {
            prop_assert_eq!(rdet(t, &h).unwrap(), QR::real(d.clone()));
            prop_assert_eq!(cdet(t, &h).unwrap(), QR::real(d.clone()));
        }
    }

    #[test]
    fn gram_determinant_detects_dependence(a in sized_matrix(4, 2)) {
        let g = a.conj_transpose().matmul(&a).unwrap();
        let d = det_hermitian(&g).unwrap();
        prop_assert!(d >= Rational::from_i64(0));
        prop_assert_eq!(d.is_zero(), a.rank() < a.cols());
    }

    #[test]
    fn repeated_row_of_hermitian_matrix_vanishes(h in hermitian(4), c in quat(3)) {
        let n = h.rows();
        prop_assume!(n >= 2);
        // row 0 replaced by c times row 1
        let row: Vec<QR> = h.row(1).iter().map(|x| &c * x).collect();
        let g = h.replace_row(0, &row).unwrap();
        prop_assert!(rdet(0, &g).unwrap().is_zero());
        let col: Vec<QR> = h.col(1).iter().map(|x| x * &c).collect();
        let g = h.replace_col(0, &col).unwrap();
        prop_assert!(cdet(0, &g).unwrap().is_zero());
    }

    #[test]
    fn minor_sums_vanish_beyond_rank(a in sized_matrix(4, 2)) {
        let g = a.conj_transpose().matmul(&a).unwrap();
        let (n, r) = (g.rows(), a.rank());
        let f = a.conj_transpose().mul_col(&a.col(0)).unwrap();
        for k in r + 1..=n {
            prop_assert!(principal_minor_sum(&g, k).unwrap().is_zero());
            for i in 0..n {
                prop_assert!(bordered_minor_sum_col(&g, &f, i, k).unwrap().is_zero());
            }
        }
        if r > 0 {
            prop_assert!(principal_minor_sum(&g, r).unwrap() > Rational::from_i64(0));
        }
    }

    #[test]
    fn gram_eigenvalues_are_nonnegative(a in sized_matrix(4, 3)) {
        let af = a.to_f64();
        let e = eig_hermitian(&af.conj_transpose().matmul(&af).unwrap(), 1e-9).unwrap();
        let scale = 1.0 + af.max_norm().powi(2) * a.rows() as f64;
        prop_assert!(e.values.iter().all(|&v| v >= -1e-10 * scale));
    }

    #[test]
    fn sharp_products_share_nonzero_spectrum(inst in instance(4)) {
        let sharp = weighted_adjoint(&inst.a, &inst.weights).unwrap().to_f64();
        let af = inst.a.to_f64();
        let ws = wsvd(&inst.a, &inst.weights).unwrap();
        // A♯A = V Σ² V^{-1} on the row space, so its trace is Σσ²
        let left: f64 = (0..af.cols()).map(|t| sharp.matmul(&af).unwrap().get(t, t).a0).sum();
        let right: f64 = (0..af.rows()).map(|t| af.matmul(&sharp).unwrap().get(t, t).a0).sum();
        let s2: f64 = ws.sigma.iter().map(|s| s * s).sum();
        prop_assert!((left - s2).abs() <= 1e-8 * (1.0 + s2));
        prop_assert!((right - s2).abs() <= 1e-8 * (1.0 + s2));
    }

    #[test]
    fn automatic_inverse_satisfies_the_axioms(inst in instance(4)) {
        let rep = wmp(&inst.a, &inst.weights, Method::Auto).unwrap();
        let res = penrose_residuals(&inst.a, &inst.weights, &rep.inverse).unwrap();
        let exact = matches!(rep.method, Method::HermitianCol | Method::HermitianRow)
            || (rep.method == Method::GeneralCol && inst.a.rank() == inst.a.cols())
            || (rep.method == Method::GeneralRow && inst.a.rank() == inst.a.rows());
        if exact {
            prop_assert!(res.exact_zero, "{} {:?}", rep.method, res);
        } else {
            prop_assert!(res.max() <= 1e-8, "{} {:?}", rep.method, res);
        }
    }

    #[test]
    fn unweighted_inverse_is_exact_and_symmetric(a in sized_matrix(4, 2)) {
        let col = mp_det(&a, Side::Col).unwrap();
        prop_assert_eq!(mp_det(&a, Side::Row).unwrap(), col.clone());
        let w = qwmp::weights::WeightPair::identity(a.rows(), a.cols());
        prop_assert!(penrose_residuals(&a, &w, &col).unwrap().exact_zero);
        let adj_inv = mp_det(a.conj_transpose(), Side::Col).unwrap();
        prop_assert_eq!(adj_inv, col.conj_transpose().clone());
    }

    #[test]
    fn projections_are_idempotent(inst in instance(4)) {
        prop_assume!(sharp_hermitian_flags(&inst.a, &inst.weights).unwrap().0);
        let p = projection_p(&inst.a, &inst.weights).unwrap();
        prop_assert_eq!(p.matmul(&p).unwrap(), p);
    }
}
