//! Kloosterman's form of the circle method:
//!
//! `δ(n) = 2 Re Σ_{q ≤ Q} Σ_{Q < a ≤ Q+q, (a,q)=1} (1/(aq)) e(n ā / q) ∫₀¹ e(-n x/(aq)) dx`
//!
//! valid for every real `Q ≥ 1`. The `x`-integral has a closed form, so the
//! identity is checked here without quadrature.

use crate::error::{Error, Result};
use crate::numerics::{e_rational, gcd, CompensatedSum, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One `(q, a, ā)` cell of the dissection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircleFrame {
    pub q: i64,
    pub a: i64,
    pub a_bar: i64,
}

/// The `b ∈ [0, q)` with `a b ≡ 1 (mod q)`; `0` when `q = 1`.
pub fn mod_inverse(a: i64, q: i64) -> Result<i64> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("modulus {q} < 1")));
    }
    if q == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (a.rem_euclid(q), q);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { a, q });
    }
    Ok(s0.rem_euclid(q))
}

/// All frames for the dissection parameter `Q`, ordered by `q` then `a`.
pub fn frames(big_q: f64) -> Result<Vec<CircleFrame>> {
    if !(big_q >= 1.0) || !big_q.is_finite() {
        return Err(Error::InvalidArgument(format!("Q = {big_q} must be at least 1")));
    }
    let qmax = big_q.floor() as i64;
    let mut out = Vec::new();
    for q in 1..=qmax {
        let lo = big_q.floor() as i64 + 1;
        let hi = (big_q + q as f64).floor() as i64;
        for a in lo..=hi {
            if gcd(a, q) == 1 {
                out.push(CircleFrame {
                    q,
                    a,
                    a_bar: mod_inverse(a, q)?,
                });
            }
        }
    }
    Ok(out)
}

/// `∫₀¹ e(-n x / d) dx = e(-θ/2) sin(πθ)/(πθ)` with `θ = n/d`.
pub fn x_integral(n: i64, d: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let theta = n as f64 / d as f64;
    let sinc = (PI * theta).sin() / (PI * theta);
    e_rational(-n, 2 * d) * sinc
}

impl CircleFrame {
    /// `(1/(aq)) e(n ā/q) X(n, aq)`.
    pub fn term(&self, n: i64) -> Complex64 {
        let d = self.a * self.q;
        e_rational(n * self.a_bar, self.q) * x_integral(n, d) / d as f64
    }
}

/// The right-hand side of the identity; equals `[n = 0]` up to rounding.
pub fn delta_eval(n: i64, big_q: f64) -> Result<f64> {
    let fr = frames(big_q)?;
    let terms: Vec<f64> = fr.par_iter().map(|f| f.term(n).re).collect();
    Ok(2.0 * terms.into_iter().collect::<CompensatedSum>().value())
}

/// `2 Σ 1/(aq)`, which must equal 1.
pub fn weight_sum(big_q: f64) -> Result<f64> {
    let fr = frames(big_q)?;
    Ok(2.0
        * fr
            .iter()
            .map(|f| 1.0 / (f.a * f.q) as f64)
            .collect::<CompensatedSum>()
            .value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(1, 1).unwrap(), 0);
        assert_eq!(mod_inverse(-1, 5).unwrap(), 4);
        assert_eq!(mod_inverse(4, 6), Err(Error::NotCoprime { a: 4, q: 6 }));
    }

    #[test]
    fn small_frame_lists() {
        let f1 = frames(1.0).unwrap();
        assert_eq!(f1, vec![CircleFrame { q: 1, a: 2, a_bar: 0 }]);
        let f2 = frames(2.0).unwrap();
        assert_eq!(
            f2,
            vec![
                CircleFrame { q: 1, a: 3, a_bar: 0 },
                CircleFrame { q: 2, a: 3, a_bar: 1 }
            ]
        );
        for big_q in [1.5, 7.0, 12.3] {
            for f in frames(big_q).unwrap() {
                assert!(big_q < f.a as f64 && f.a as f64 <= big_q + f.q as f64);
            }
        }
        assert!(frames(0.5).is_err());
    }

    #[test]
    fn identity_at_small_q() {
        assert!((delta_eval(0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(delta_eval(1, 1.0).unwrap().abs() < 1e-15);
        assert!((weight_sum(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((delta_eval(0, 1.5).unwrap() - 1.0).abs() < 1e-12);
        assert!(delta_eval(3, 1.5).unwrap().abs() < 1e-12);
    }
}
