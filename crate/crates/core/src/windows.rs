//! Smooth compactly supported weights: bumps, plateau windows and the
//! dyadic partition of unity `W_J`.
//!
//! Every window is evaluated through [`Jet`] arithmetic, so derivatives of any
//! order come out of the same code path as the values. Derivative bounds
//! `D_0..D_4` are found once by grid maximization and stored alongside.
//!
//! The partition pieces are differences of nested plateau windows
//! `P_j` (plateau `[-2^j, 2^j]`, support `[-2^{j+1}, 2^{j+1}]`), split by sign.
//! Their sum telescopes to the outermost plateau, which is 1 on the whole
//! target range. This is one concrete admissible construction; any smooth
//! family with the same support and derivative properties would do.

use crate::error::{Error, Result};
use crate::numerics::{Jet, Quadrature};
use serde::{Deserialize, Serialize};

const GRID: usize = 4000;
const UNDERFLOW: f64 = -740.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    Bump,
    Plateau,
    DyadicPiece,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
enum Shape {
    Bump { a: f64, b: f64 },
    Plateau([f64; 4]),
    /// `outer - inner` restricted to `sign * x > 0`.
    Difference { outer: [f64; 4], inner: [f64; 4], sign: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    kind: WindowKind,
    shape: Shape,
    scale: f64,
    support: (f64, f64),
    plateau: Option<(f64, f64)>,
    /// Dyadic label `J` for partition pieces (0 for the central window).
    label: Option<f64>,
    bounds: [f64; 5],
    scaled_bounds: [f64; 5],
}

/// `exp(-1/u)` for `u > 0`, else 0.
fn e_minus_recip<const N: usize>(u: Jet<N>) -> Jet<N> {
    if u.value() <= 0.0 || -1.0 / u.value() < UNDERFLOW {
        return Jet::zero();
    }
    (-u.recip()).exp()
}

/// Smooth step: 0 for `u <= 0`, 1 for `u >= 1`.
fn smoothstep<const N: usize>(u: Jet<N>) -> Jet<N> {
    let v = u.value();
    if v <= 0.0 {
        return Jet::zero();
    }
    if v >= 1.0 {
        return Jet::constant(1.0);
    }
    let p = e_minus_recip(u);
    let q = e_minus_recip(Jet::constant(1.0) - u);
    if q.value() == 0.0 {
        return Jet::constant(1.0);
    }
    p * (p + q).recip()
}

fn plateau_jet<const N: usize>(k: &[f64; 4], x: f64) -> Jet<N> {
    let [a, b, c, d] = *k;
    if x <= a || x >= d {
        return Jet::zero();
    }
    if x >= b && x <= c {
        return Jet::constant(1.0);
    }
    let t = Jet::<N>::variable(x);
    if x < b {
        smoothstep((t + (-a)).scale(1.0 / (b - a)))
    } else {
        smoothstep((-t + d).scale(1.0 / (d - c)))
    }
}

impl Shape {
    fn jet<const N: usize>(&self, x: f64) -> Jet<N> {
        match self {
            Shape::Bump { a, b } => {
                if x <= *a || x >= *b {
                    return Jet::zero();
                }
                let u = (Jet::<N>::variable(x).scale(2.0) + (-(a + b))).scale(1.0 / (b - a));
                let w = Jet::constant(1.0) - u * u;
                let ex = -w.recip();
                if ex.value() < UNDERFLOW {
                    return Jet::zero();
                }
                ex.exp()
            }
            Shape::Plateau(k) => plateau_jet(k, x),
            Shape::Difference { outer, inner, sign } => {
                if sign * x <= 0.0 {
                    return Jet::zero();
                }
                plateau_jet::<N>(outer, x) - plateau_jet::<N>(inner, x)
            }
        }
    }
}

impl Window {
    fn build(
        kind: WindowKind,
        shape: Shape,
        support: (f64, f64),
        plateau: Option<(f64, f64)>,
        label: Option<f64>,
    ) -> Self {
        let mut w = Self {
            kind,
            shape,
            scale: 1.0,
            support,
            plateau,
            label,
            bounds: [0.0; 5],
            scaled_bounds: [0.0; 5],
        };
        w.compute_bounds();
        w
    }

    fn compute_bounds(&mut self) {
        let (a, b) = self.support;
        let mut d = [0.0f64; 5];
        let mut s = [0.0f64; 5];
        for i in 1..GRID {
            let x = a + (b - a) * i as f64 / GRID as f64;
            let j = self.jet::<5>(x);
            let mut xp = 1.0;
            for l in 0..5 {
                let v = j.derivative(l).abs();
                d[l] = d[l].max(v);
                s[l] = s[l].max(v * xp);
                xp *= x.abs();
            }
        }
        self.bounds = d;
        self.scaled_bounds = s;
    }

    /// `exp(-1/(1-u^2))` rescaled to `[a, b]`; `normalized` makes `∫ = 1`.
    pub fn make_bump(a: f64, b: f64, normalized: bool) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("degenerate interval [{a}, {b}]")));
        }
        let mut w = Self::build(WindowKind::Bump, Shape::Bump { a, b }, (a, b), None, None);
        if normalized {
            let i = w.integral();
            w.scale = 1.0 / i;
            w.compute_bounds();
        }
        Ok(w)
    }

    /// Equal to 1 on `[b, c]`, supported on `[a, d]`, monotone ramps.
    pub fn make_plateau(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a < b && b < c && c < d) {
            return Err(Error::InvalidArgument(format!(
                "plateau knots must satisfy a < b < c < d, got {a}, {b}, {c}, {d}"
            )));
        }
        Ok(Self::build(
            WindowKind::Plateau,
            Shape::Plateau([a, b, c, d]),
            (a, d),
            Some((b, c)),
            None,
        ))
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn plateau(&self) -> Option<(f64, f64)> {
        self.plateau
    }

    pub fn label(&self) -> Option<f64> {
        self.label
    }

    /// `max |W^{(j)}|`, `j = 0..=4`.
    pub fn derivative_bounds(&self) -> [f64; 5] {
        self.bounds
    }

    /// `max |x^j W^{(j)}(x)|`, `j = 0..=4`.
    pub fn scaled_derivative_bounds(&self) -> [f64; 5] {
        self.scaled_bounds
    }

    pub fn jet<const N: usize>(&self, x: f64) -> Jet<N> {
        self.shape.jet::<N>(x).scale(self.scale)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet::<1>(x).value()
    }

    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        assert!(k <= 4, "only derivatives up to order 4 are exposed");
        self.jet::<5>(x).derivative(k)
    }

    pub fn integral(&self) -> f64 {
        let (a, b) = self.support;
        let q = Quadrature::with_tol(1e-15 * (b - a));
        q.integrate_real(a, b, |x| self.value(x))
            .expect("smooth window integrand converges")
    }
}

/// Dyadic windows `W_0, W_{±1}, W_{±2}, W_{±4}, ...` summing to 1 on
/// `[-range_bound, range_bound]`; `2 floor(log2 R) + 3` pieces.
pub fn partition_of_unity(range_bound: f64) -> Result<Vec<Window>> {
    if !(range_bound >= 1.0) || !range_bound.is_finite() {
        return Err(Error::InvalidArgument(format!("range bound {range_bound} < 1")));
    }
    let m = range_bound.log2().floor() as i32;
    let knots = |j: i32| -> [f64; 4] {
        if j < 0 {
            return [-1.0, -0.5, 0.5, 1.0];
        }
        let p = if j == m { range_bound } else { 2f64.powi(j) };
        [-2.0 * p, -p, p, 2.0 * p]
    };
    let central = knots(-1);
    let mut out = vec![Window::build(
        WindowKind::Plateau,
        Shape::Plateau(central),
        (-1.0, 1.0),
        Some((-0.5, 0.5)),
        Some(0.0),
    )];
    for j in 0..=m {
        let outer = knots(j);
        let inner = knots(j - 1);
        let label = 2f64.powi(j);
        for sign in [1.0, -1.0] {
            let (lo, hi) = (inner[2], outer[3]);
            let support = if sign > 0.0 { (lo, hi) } else { (-hi, -lo) };
            out.push(Window::build(
                WindowKind::DyadicPiece,
                Shape::Difference { outer, inner, sign },
                support,
                None,
                Some(sign * label),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_properties() {
        let v = Window::make_bump(1.0, 2.0, true).unwrap();
        assert!((v.integral() - 1.0).abs() < 1e-12);
        let u = Window::make_bump(1.0, 2.0, false).unwrap();
        assert_eq!(u.value(1.0), 0.0);
        for k in 0..=4 {
            assert_eq!(u.derivative(1.0, k), 0.0);
            assert!(u.derivative(1.0 + 1e-3, k).abs() < 1e-80);
        }
        let peak = u.value(1.5);
        assert!((peak - (-1f64).exp()).abs() < 1e-15);
        assert!(u.value(1.49) < peak && u.value(1.51) < peak);
        assert!(Window::make_bump(2.0, 2.0, false).is_err());
    }

    #[test]
    fn plateau_properties() {
        let u = Window::make_plateau(0.5, 1.0, 2.0, 2.5).unwrap();
        assert_eq!(u.value(1.5), 1.0);
        assert_eq!(u.value(1.0), 1.0);
        assert_eq!(u.value(0.5), 0.0);
        let q = Quadrature::with_tol(1e-14);
        let rise = q.integrate_real(0.5, 1.0, |x| u.derivative(x, 1)).unwrap();
        assert!((rise - 1.0).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = u.value(0.5 + 0.005 * i as f64);
            assert!(v >= prev);
            prev = v;
        }
        assert!(Window::make_plateau(0.0, 2.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn partition_sums_to_one() {
        for r in [1.0, 3.7, 100.0, 1e4] {
            let ws = partition_of_unity(r).unwrap();
            assert!(ws.len() as f64 <= 2.0 * r.log2() + 3.0);
            assert_eq!(ws[0].support(), (-1.0, 1.0));
            for i in 0..=1000 {
                let x = -r + 2.0 * r * i as f64 / 1000.0;
                let s: f64 = ws.iter().map(|w| w.value(x)).sum();
                assert!((s - 1.0).abs() < 1e-10, "r={r} x={x} s={s}");
            }
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let ws = [
            Window::make_bump(1.0, 2.0, true).unwrap(),
            Window::make_plateau(0.5, 1.0, 2.0, 2.5).unwrap(),
            partition_of_unity(10.0).unwrap()[3].clone(),
        ];
        for w in &ws {
            let (a, b) = w.support();
            for i in 1..20 {
                let x = a + (b - a) * (0.05 + 0.9 * i as f64 / 20.0);
                let h = 1e-5 * (b - a);
                let fd = (w.value(x + h) - w.value(x - h)) / (2.0 * h);
                let d = w.derivative(x, 1);
                let scale = w.derivative_bounds()[1];
                assert!((fd - d).abs() <= 1e-6 * scale.max(d.abs()), "x={x}");
            }
        }
    }
}
