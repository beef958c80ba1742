use gl2lab::decomp::{character_sum, character_sum_closed, inverse_in_window};
use gl2lab::deltasym::{delta_eval, frames, mod_inverse, weight_sum};
use gl2lab::forms::CuspForm;
use gl2lab::lcrit::l_value_afe;
use gl2lab::numerics::gamma::gamma;
use gl2lab::numerics::{gcd, Complex64};
use gl2lab::oscint::conductor_kernel;
use gl2lab::voronoi::bessel::bessel_j;
use gl2lab::windows::{partition_of_unity, Window};
use proptest::prelude::*;
use std::sync::OnceLock;

fn form() -> &'static CuspForm {
    static F: OnceLock<CuspForm> = OnceLock::new();
    F.get_or_init(|| CuspForm::delta(10_000).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_identity_real_q(n in -200i64..=200, big_q in 1.0f64..25.0) {
        let d = delta_eval(n, big_q).unwrap();
        prop_assert!((d - f64::from(n == 0)).abs() <= 1e-9, "n={} Q={} d={}", n, big_q, d);
        prop_assert!((weight_sum(big_q).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn frames_are_coprime_and_windowed(big_q in 1.0f64..30.0) {
        for f in frames(big_q).unwrap() {
            prop_assert_eq!(gcd(f.a, f.q), 1);
            prop_assert!(big_q < f.a as f64 && f.a as f64 <= big_q + f.q as f64);
            prop_assert_eq!((f.a * f.a_bar).rem_euclid(f.q), 1 % f.q);
        }
    }

    #[test]
    fn inverses_invert(a in -1000i64..1000, q in 1i64..500) {
        match mod_inverse(a, q) {
            Ok(b) => {
                prop_assert_eq!(gcd(a, q), 1);
                prop_assert_eq!((a * b).rem_euclid(q), 1 % q);
            }
            Err(_) => prop_assert_ne!(gcd(a, q), 1),
        }
    }

    #[test]
    fn unique_inverse_in_window(m in -500i64..500, q in 1i64..40, big_q in 1.0f64..12.0) {
        prop_assume!(gcd(m, q) == 1);
        let a = inverse_in_window(m, q, big_q).unwrap();
        prop_assert!(big_q < a as f64 && a as f64 <= big_q + q as f64);
        prop_assert_eq!((a * m).rem_euclid(q), 1 % q);
    }

    #[test]
    fn hecke_multiplicative(m in 1usize..100, n in 1usize..100) {
        prop_assume!(gcd(m as i64, n as i64) == 1);
        let f = form();
        prop_assert_eq!(f.tau(m).unwrap() * f.tau(n).unwrap(), f.tau(m * n).unwrap());
    }

    #[test]
    fn deligne_bound(n in 1usize..=10_000) {
        let d = gl2lab::numerics::divisor_count(n as u64) as f64;
        prop_assert!(form().lambda(n).unwrap().abs() <= d * (1.0 + 1e-12));
    }

    #[test]
    fn character_sum_collapses(q in 1i64..30, qq in 1i64..30, a in 0i64..30, aa in 0i64..30, n in -500i64..500) {
        let z = character_sum(q, qq, a, aa, n).unwrap();
        prop_assert!((z - character_sum_closed(q, qq, a, aa, n)).norm() <= 1e-9);
    }

    #[test]
    fn partition_sums_to_one(r in 1.0f64..5000.0, u in -1.0f64..1.0) {
        let x = u * r;
        let total: f64 = partition_of_unity(r).unwrap().iter().map(|w| w.value(x)).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12, "R={} x={} sum={}", r, x, total);
    }

    #[test]
    fn bump_is_supported_and_bounded(a in -10.0f64..10.0, len in 0.1f64..10.0, u in -0.5f64..1.5) {
        let w = Window::make_bump(a, a + len, false).unwrap();
        let x = a + u * len;
        let v = w.value(x);
        prop_assert!((0.0..=(-1f64).exp() + 1e-15).contains(&v));
        if !(0.0..=1.0).contains(&u) {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn bessel_recurrence(order in 1u32..=12, x in 0.1f64..200.0) {
        let lhs = bessel_j(order - 1, x) + bessel_j(order + 1, x);
        let rhs = 2.0 * order as f64 / x * bessel_j(order, x);
        let scale = bessel_j(order - 1, x).abs() + bessel_j(order + 1, x).abs() + 1e-300;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale.max(1e-3), "n={} x={}", order, x);
    }

    #[test]
    fn gamma_recurrence(re in 0.2f64..30.0, im in -200.0f64..200.0) {
        let z = Complex64::new(re, im);
        let lhs = gamma(z + 1.0);
        let rhs = z * gamma(z);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn conductor_kernel_is_hermitian(n in 1000u64..2000, d in 0u64..200) {
        let v = Window::make_bump(1.0, 2.0, true).unwrap();
        let a = conductor_kernel(n, n + d, 20.0, &v).unwrap();
        let b = conductor_kernel(n + d, n, 20.0, &v).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12);
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn l_conjugate_symmetry(t in 2.0f64..80.0) {
        let f = form();
        let a = l_value_afe(f, t, 1e-10).unwrap().value;
        let b = l_value_afe(f, -t, 1e-10).unwrap().value;
        prop_assert!((a.conj() - b).norm() <= 1e-10);
    }
}
