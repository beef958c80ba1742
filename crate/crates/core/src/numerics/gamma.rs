//! Complex log-gamma by upward shift, Stirling series and reflection.

use num_complex::Complex64;
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(z)` on some branch; `exp` of differences is branch independent.
///
/// Returns a non-finite value at the poles `z = 0, -1, -2, ...`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(π z)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = zi;
    for c in STIRLING {
        series += p * c;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Distance from `z` to the nearest pole of Γ.
pub fn pole_distance(z: Complex64) -> f64 {
    if z.re > 0.5 {
        return z.norm();
    }
    let k = z.re.round().min(0.0);
    Complex64::new(z.re - k, z.im).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_values() {
        assert!((gamma(c(1.0, 0.0)).re - 1.0).abs() < 1e-14);
        assert!((gamma(c(6.0, 0.0)).re - 120.0).abs() < 1e-11);
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(c(100.0, 0.0)).re - 359.134_205_369_575_4).abs() < 1e-11);
    }

    #[test]
    fn recurrence_and_critical_line_modulus() {
        for &(x, y) in &[(0.3, 2.0), (2.5, -7.0), (6.0, 40.0), (-3.2, 1.5)] {
            let z = c(x, y);
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            let d = (lhs - rhs).exp();
            assert!((d - 1.0).norm() < 1e-12, "z={z}");
        }
        // |Γ(1/2 + it)|^2 = π / cosh(π t)
        for t in [0.5, 3.0, 20.0] {
            let m = (2.0 * ln_gamma(c(0.5, t)).re).exp();
            assert!((m / (PI / (PI * t).cosh()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn poles() {
        assert!(pole_distance(c(-2.0, 1e-9)) < 1e-8);
        assert!(pole_distance(c(3.0, 0.0)) > 1.0);
    }
}
