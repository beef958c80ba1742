//! Bessel functions `J_ν(x)` of integer order.
//!
//! Three regimes: the ascending series for small `x`, Miller's backward
//! recurrence normalized by `J_0 + 2 Σ J_{2k} = 1` in the middle, and the
//! Hankel asymptotic expansion with optimal truncation for `x ≥ x_switch`.

use std::f64::consts::PI;

/// Start of the asymptotic regime for order `ν`: `max(30, ν²/4)`.
///
/// Frozen after a scan against the recurrence: for `ν = 11` the two agree to
/// a few ulps of the envelope from `x = 20` on, for `ν = 20` from `x = 70`.
pub fn asymptotic_switch(order: u32) -> f64 {
    let nu = order as f64;
    (nu * nu / 4.0).max(30.0)
}

/// Upper end of the ascending-series regime.
pub fn series_switch(order: u32) -> f64 {
    ((order + 1) as f64).sqrt().max(1.0)
}

#[derive(Clone, Debug)]
pub struct BesselJ {
    order: u32,
    x_switch: f64,
    /// `a_k(ν) = ∏_{i=1}^k (4ν² - (2i-1)²) / (k! 8^k)`
    hankel: Vec<f64>,
}

impl BesselJ {
    pub fn new(order: u32) -> Self {
        let mu = 4.0 * (order as f64).powi(2);
        let mut hankel = vec![1.0];
        let mut a = 1.0;
        for k in 1..=120 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0);
            hankel.push(a);
            if a == 0.0 {
                break;
            }
        }
        Self {
            order,
            x_switch: asymptotic_switch(order),
            hankel,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn x_switch(&self) -> f64 {
        self.x_switch
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            let v = self.eval(-x);
            return if self.order % 2 == 1 { -v } else { v };
        }
        if x == 0.0 {
            return if self.order == 0 { 1.0 } else { 0.0 };
        }
        if x <= series_switch(self.order) {
            series(self.order, x)
        } else if x < self.x_switch {
            miller(self.order, x)
        } else {
            self.hankel(x)
        }
    }

    /// Hankel expansion, truncated before the terms start growing.
    pub fn hankel(&self, x: f64) -> f64 {
        let zi = 1.0 / x;
        let (mut p, mut q) = (0.0, 0.0);
        let mut pow = 1.0;
        let mut prev = f64::INFINITY;
        for (k, &a) in self.hankel.iter().enumerate() {
            let t = a * pow;
            if t.abs() > prev && k > 2 {
                break;
            }
            match k % 4 {
                0 => p += t,
                1 => q += t,
                2 => p -= t,
                _ => q -= t,
            }
            if t.abs() < 1e-17 * p.abs().max(1e-300) || t == 0.0 {
                break;
            }
            prev = t.abs();
            pow *= zi;
        }
        let chi = x - (0.5 * self.order as f64 + 0.25) * PI;
        let (s, c) = chi.sin_cos();
        (2.0 / (PI * x)).sqrt() * (p * c - q * s)
    }
}

/// `J_ν(x)` for any integer order and real `x`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    BesselJ::new(order).eval(x)
}

pub fn series(order: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut t = 1.0;
    for i in 1..=order {
        t *= h / i as f64;
    }
    let h2 = h * h;
    let mut sum = t;
    for m in 1..200 {
        t *= -h2 / (m as f64 * (m + order) as f64);
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn miller(order: u32, x: f64) -> f64 {
    let n = order as usize;
    let top = n.max(x as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut found = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx == n {
            found = j;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            found *= 1e-250;
        }
    }
    norm += j;
    found / norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_argument_leading_term() {
        let x = 1e-2;
        let lead = (x / 2.0f64).powi(11) / 39_916_800.0;
        let ratio = bessel_j(11, x) / lead;
        // next series term: -(x/2)^2 / 12
        assert!((ratio - (1.0 - x * x / 48.0)).abs() < 1e-11);
        assert!((bessel_j(11, 1e-4) / ((0.5e-4f64).powi(11) / 39_916_800.0) - 1.0).abs() < 1e-9);
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert!((bessel_j(11, -3.0) + bessel_j(11, 3.0)).abs() < 1e-300);
    }

    #[test]
    fn reference_values() {
        // frozen from mpmath besselj at 30 digits
        let cases = [
            (0u32, 1.0, 0.765_197_686_557_966_6),
            (1, 2.5, 0.497_094_102_464_274_0),
            (11, 5.0, 3.509_274_497_662_090e-4),
            (11, 15.0, 9.995_047_705_030_159e-2),
            (11, 40.0, -1.380_842_424_652_202e-2),
            (11, 1000.0, -6.206_171_618_102_462e-3),
        ];
        for (n, x, v) in cases {
            let got = bessel_j(n, x);
            assert!((got - v).abs() < 1e-13, "J_{n}({x}) = {got}, want {v}");
        }
    }

    #[test]
    fn regimes_agree_at_switches() {
        let b = BesselJ::new(11);
        let xs = b.x_switch();
        let env = (2.0 / (PI * xs)).sqrt();
        assert!((b.hankel(xs) - miller(11, xs)).abs() < 1e-9 * env);
        let ss = series_switch(11);
        assert!((series(11, ss) - miller(11, ss)).abs() < 1e-9 * series(11, ss).abs());
    }

    #[test]
    fn envelope() {
        let b = BesselJ::new(11);
        for i in 0..2000 {
            let x = 100.0 + 0.37 * i as f64;
            assert!(b.eval(x).abs() <= (2.0 / (PI * x)).sqrt() * 1.01);
        }
    }
}
