//! Shared numerical kernels: compensated sums, Taylor jets, panel quadrature,
//! the complex log-gamma function and a few arithmetic helpers.

pub mod gamma;
pub mod jet;
pub mod quad;
pub mod sum;

pub use jet::Jet;
pub use num_complex::Complex64;
pub use quad::{Quadrature, QuadratureReport};
pub use sum::{CompensatedSum, ComplexSum};

use std::f64::consts::TAU;

/// The additive character `e(x) = exp(2 pi i x)`.
///
/// The argument is reduced modulo 1 before the exponential is taken, so large
/// arguments keep their fractional part to full precision.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(num / den)` with the numerator reduced exactly in integer arithmetic.
#[inline]
pub fn e_rational(num: i64, den: i64) -> Complex64 {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den);
    e(r as f64 / den as f64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// Number of divisors of `n`, by trial division.
pub fn divisor_count(n: u64) -> u64 {
    let mut n = n;
    let mut count = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

/// Upper bound for `sum_{n > m} d(n) n^{-s}`, valid for `s > 1`, `m >= 1`.
///
/// Uses `D(x) = sum_{n<=x} d(n) <= x (log x + 1)` and partial summation.
pub fn divisor_dirichlet_tail(m: f64, s: f64) -> f64 {
    assert!(s > 1.0 && m >= 1.0);
    let l = m.ln();
    s * m.powf(1.0 - s) * ((l + 1.0) / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_reduces_large_arguments() {
        let a = e(1e12 + 0.25);
        assert!((a - Complex64::new(0.0, 1.0)).norm() < 1e-4);
        let b = e_rational(7, 4);
        assert!((b - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisor_count(1), 1);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisor_count(97), 2);
        assert_eq!(divisor_count(720), 30);
    }

    #[test]
    fn dirichlet_tail_dominates_direct_sum() {
        for &(m, s) in &[(10.0, 2.0), (100.0, 1.5), (50.0, 4.0)] {
            let direct: f64 = ((m as u64 + 1)..200_000)
                .map(|n| divisor_count(n) as f64 * (n as f64).powf(-s))
                .sum();
            assert!(divisor_dirichlet_tail(m, s) >= direct, "m={m} s={s}");
        }
    }
}
