//! Truncated Taylor series ("jets") for exact-to-rounding derivatives of the
//! smooth weights and phases used throughout the crate.
//!
//! A `Jet<N>` stores the Taylor coefficients `c_0, ..., c_{N-1}` of a function
//! at a base point, so `f^{(k)}(x_0) = k! c_k`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    c: [f64; N],
}

impl<const N: usize> Jet<N> {
    pub fn zero() -> Self {
        Self { c: [0.0; N] }
    }

    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Self { c }
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x0;
        if N > 1 {
            c[1] = 1.0;
        }
        Self { c }
    }

    pub fn from_coefficients(c: [f64; N]) -> Self {
        Self { c }
    }

    /// Builds a jet from derivative values `f, f', f'', ...` (missing orders are zero).
    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut c = [0.0; N];
        let mut fact = 1.0;
        for (k, slot) in c.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            if let Some(v) = d.get(k) {
                *slot = v / fact;
            }
        }
        Self { c }
    }

    pub fn coefficients(&self) -> &[f64; N] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `k`-th derivative at the base point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= s);
        Self { c }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    pub fn recip(&self) -> Self {
        let g0 = self.c[0];
        let mut r = [0.0; N];
        r[0] = 1.0 / g0;
        for k in 1..N {
            let mut s = 0.0;
            for i in 1..=k {
                s += self.c[i] * r[k - i];
            }
            r[k] = -s / g0;
        }
        Self { c: r }
    }

    pub fn exp(&self) -> Self {
        let mut e = [0.0; N];
        e[0] = self.c[0].exp();
        for k in 1..N {
            let mut s = 0.0;
            for i in 1..=k {
                s += i as f64 * self.c[i] * e[k - i];
            }
            e[k] = s / k as f64;
        }
        Self { c: e }
    }

    pub fn ln(&self) -> Self {
        let g0 = self.c[0];
        let mut f = [0.0; N];
        f[0] = g0.ln();
        for k in 1..N {
            let mut s = 0.0;
            for i in 1..k {
                s += i as f64 * f[i] * self.c[k - i];
            }
            f[k] = (self.c[k] - s / k as f64) / g0;
        }
        Self { c: f }
    }

    /// `self^p` for a positive base value.
    pub fn powf(&self, p: f64) -> Self {
        (self.ln().scale(p)).exp()
    }

    /// Composition `self(a * x + b)` re-expanded in `x`: scales the k-th coefficient by `a^k`.
    pub fn chain_affine(&self, a: f64) -> Self {
        let mut c = self.c;
        let mut p = 1.0;
        for x in c.iter_mut() {
            *x *= p;
            p *= a;
        }
        Self { c }
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x += y;
        }
        Self { c }
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x -= y;
        }
        Self { c }
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [0.0; N];
        for i in 0..N {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..N - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Self { c }
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(mut self, v: f64) -> Self {
        self.c[0] += v;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(self, v: f64) -> Self {
        self.scale(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_square() {
        // d^k/dx^k exp(x^2) at x = 0.3
        let x = Jet::<5>::variable(0.3);
        let f = (x * x).exp();
        let v = (0.09f64).exp();
        assert!((f.derivative(0) - v).abs() < 1e-14);
        assert!((f.derivative(1) - 0.6 * v).abs() < 1e-14);
        assert!((f.derivative(2) - (2.0 + 0.36) * v).abs() < 1e-13);
        // f''' = (12x + 8x^3) f
        assert!((f.derivative(3) - (3.6 + 8.0 * 0.027) * v).abs() < 1e-12);
    }

    #[test]
    fn recip_ln_pow_roundtrip() {
        let x = Jet::<6>::variable(1.7);
        let a = x.recip() * x;
        assert!((a.value() - 1.0).abs() < 1e-15);
        for k in 1..6 {
            assert!(a.coefficients()[k].abs() < 1e-14);
        }
        let p = x.powf(2.5);
        assert!((p.derivative(2) - 2.5 * 1.5 * 1.7f64.powf(0.5)).abs() < 1e-12);
        let l = x.ln();
        assert!((l.derivative(3) - 2.0 / 1.7f64.powi(3)).abs() < 1e-13);
    }
}
