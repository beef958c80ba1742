//! Oscillatory integrals `∫ g(x) e(f(x)) dx`: a brute-force oracle, the two
//! branches of the stationary-phase lemma, the Mellin-type transform
//! `W†(r, s) = ∫₀^∞ W(x) e(-rx) x^{s-1} dx` with its leading-term expansion,
//! the conductor-lowering kernel and the two-dimensional second-derivative
//! bound.

use crate::error::{Error, Result};
use crate::numerics::quad::composite_rule;
use crate::numerics::{e, Complex64, Jet, Quadrature};
use crate::windows::Window;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

pub type JetFn = Arc<dyn Fn(f64) -> Jet<5> + Send + Sync>;

/// Phase, amplitude and the scale parameters of the stationary-phase lemma.
#[derive(Clone)]
pub struct PhaseProfile {
    pub phase: JetFn,
    pub amplitude: JetFn,
    pub support: (f64, f64),
    pub theta_f: f64,
    pub omega_f: f64,
    pub omega_g: f64,
    pub lambda: Option<f64>,
    pub kappa: Option<f64>,
}

/// Sampled ratios `max |f^{(i)}| Ω_f^i / Θ_f` (i = 2, 3, 4) and
/// `max |g^{(j)}| Ω_g^j` (j = 0, 1, 2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileConstants {
    pub phase: [f64; 3],
    pub amplitude: [f64; 3],
    pub vanishes_at_ends: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryExpansion {
    pub x0: f64,
    pub main: Complex64,
    pub error_bound: f64,
}

impl PhaseProfile {
    pub fn new(
        phase: JetFn,
        amplitude: JetFn,
        support: (f64, f64),
        theta_f: f64,
        omega_f: f64,
        omega_g: f64,
    ) -> Result<Self> {
        if !(support.0 < support.1) {
            return Err(Error::InvalidArgument(format!("empty support {support:?}")));
        }
        if !(theta_f > 0.0 && omega_f > 0.0 && omega_g > 0.0) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
        Ok(Self {
            phase,
            amplitude,
            support,
            theta_f,
            omega_f,
            omega_g,
            lambda: None,
            kappa: None,
        })
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    fn f(&self, x: f64) -> Jet<5> {
        (self.phase)(x)
    }

    fn g(&self, x: f64) -> Jet<5> {
        (self.amplitude)(x)
    }

    pub fn sampled_constants(&self, points: usize) -> ProfileConstants {
        let (a, b) = self.support;
        let mut ph = [0.0f64; 3];
        let mut am = [0.0f64; 3];
        for i in 0..=points {
            let x = a + (b - a) * i as f64 / points as f64;
            let f = self.f(x);
            let g = self.g(x);
            for (k, slot) in ph.iter_mut().enumerate() {
                let i = k + 2;
                *slot = slot.max(f.derivative(i).abs() * self.omega_f.powi(i as i32) / self.theta_f);
            }
            for (j, slot) in am.iter_mut().enumerate() {
                *slot = slot.max(g.derivative(j).abs() * self.omega_g.powi(j as i32));
            }
        }
        let scale = am[0].max(f64::MIN_POSITIVE);
        ProfileConstants {
            phase: ph,
            amplitude: am,
            vanishes_at_ends: self.g(a).value().abs() <= 1e-14 * scale
                && self.g(b).value().abs() <= 1e-14 * scale,
        }
    }
}

/// `∫ g e(f)` by adaptive panels of width at most `c/(1 + |f'|)`.
pub fn oracle_quadrature(profile: &PhaseProfile, tol: f64) -> Result<Complex64> {
    if !(tol >= 1e-13) {
        return Err(Error::InvalidArgument(format!("tolerance {tol:e} below 1e-13")));
    }
    let (a, b) = profile.support;
    let q = Quadrature::with_tol(tol);
    q.integrate_oscillatory(
        a,
        b,
        |x| e(profile.f(x).value()) * profile.g(x).value(),
        |x| 1.0 + profile.f(x).derivative(1).abs(),
    )
}

/// Non-stationary bound `(Θ/(Ω²Λ³)) (1 + Ω_f/Ω_g + (Ω_f²/Ω_g²) Λ/(Θ/Ω_f))`.
pub fn first_branch_bound(profile: &PhaseProfile) -> Result<f64> {
    let lam = profile
        .lambda
        .ok_or_else(|| Error::InvalidArgument("first branch needs Lambda = min |f'|".into()))?;
    let (t, of, og) = (profile.theta_f, profile.omega_f, profile.omega_g);
    Ok(t / (of * of * lam.powi(3)) * (1.0 + of / og + (of * of / (og * og)) * lam / (t / of)))
}

/// Zero of `fp` on `[a, b]` by bisection; needs `fp(a) < 0 < fp(b)`.
fn bisect<F: Fn(f64) -> f64>(fp: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    if !(fp(lo) < 0.0 && fp(hi) > 0.0) {
        return Err(Error::NoStationaryPoint { a, b });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if fp(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Leading stationary-phase term and its error bound (for `f'` rising through 0).
pub fn second_branch_expand(profile: &PhaseProfile) -> Result<StationaryExpansion> {
    let (a, b) = profile.support;
    let x0 = bisect(|x| profile.f(x).derivative(1), a, b, 1e-12)?;
    let (t, of, og) = (profile.theta_f, profile.omega_f, profile.omega_g);
    let floor = t / (of * of);
    for i in 0..=400 {
        let x = a + (b - a) * i as f64 / 400.0;
        let f2 = profile.f(x).derivative(2);
        if f2 < floor * (1.0 - 1e-12) {
            return Err(Error::Hypothesis(format!(
                "f''({x}) = {f2:e} below Θ_f/Ω_f² = {floor:e}"
            )));
        }
    }
    let kappa = profile.kappa.unwrap_or((b - x0).min(x0 - a));
    let f = profile.f(x0);
    let main = e(f.value() + 0.125) * (profile.g(x0).value() / f.derivative(2).sqrt());
    let error_bound =
        of.powi(4) / (t * t * kappa.powi(3)) + of / t.powf(1.5) + of.powi(3) / (t.powf(1.5) * og * og);
    Ok(StationaryExpansion {
        x0,
        main,
        error_bound,
    })
}

/// `f(x) = B x²` against the unit bump on `[-1, 1]`, with `Θ_f = 2B`, `Ω_f = Ω_g = 1`.
pub fn fresnel_profile(big_b: f64) -> PhaseProfile {
    let bump = Window::make_bump(-1.0, 1.0, false).expect("valid interval");
    PhaseProfile::new(
        Arc::new(move |x| {
            let v = Jet::variable(x);
            v * v * big_b
        }),
        Arc::new(move |x| bump.jet::<5>(x)),
        (-1.0, 1.0),
        2.0 * big_b,
        1.0,
        1.0,
    )
    .expect("valid scales")
}

/// `f(x) = B x` against the unit bump on `[1, 2]`, with `Λ = Θ_f = B`, `Ω_f = Ω_g = 1`.
pub fn linear_profile(big_b: f64) -> PhaseProfile {
    let bump = Window::make_bump(1.0, 2.0, false).expect("valid interval");
    PhaseProfile::new(
        Arc::new(move |x| Jet::variable(x) * big_b),
        Arc::new(move |x| bump.jet::<5>(x)),
        (1.0, 2.0),
        big_b,
        1.0,
        1.0,
    )
    .expect("valid scales")
    .with_lambda(big_b)
}

fn positive_support(w: &Window) -> Result<(f64, f64)> {
    let (a, b) = w.support();
    if a <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "W† needs a window supported in (0, ∞), got [{a}, {b}]"
        )));
    }
    Ok((a, b))
}

/// `W†(r, s) = ∫ W(x) e(-r x) x^{s-1} dx` by oracle quadrature.
pub fn w_dagger(w: &Window, r: f64, s: Complex64) -> Result<Complex64> {
    w_dagger_with(w, r, s, &Quadrature::with_tol(1e-13))
}

pub fn w_dagger_with(w: &Window, r: f64, s: Complex64, quad: &Quadrature) -> Result<Complex64> {
    let (a, b) = positive_support(w)?;
    let (sigma, beta) = (s.re, s.im);
    let k = beta / TAU;
    quad.integrate_oscillatory(
        a,
        b,
        |x| e(-r * x + k * x.ln()) * (w.value(x) * x.powf(sigma - 1.0)),
        |x| 1.0 + (k / x - r).abs(),
    )
}

/// Leading term of `W†(r, s)` from the stationary point `x₀ = β/(2πr)`:
/// `√(2π) e(1/8)/√(-β) · W(x₀) x₀^σ (β/(2πe r))^{iβ}`, principal square root,
/// together with the error shape `min(|β|^{-3/2}, |r|^{-3/2})`.
pub fn w_dagger_main(w: &Window, r: f64, s: Complex64) -> Result<(Complex64, f64)> {
    if r == 0.0 {
        return Err(Error::InvalidArgument("x₀ = β/(2πr) undefined at r = 0".into()));
    }
    let (sigma, beta) = (s.re, s.im);
    let bound = beta.abs().powf(-1.5).min(r.abs().powf(-1.5));
    let x0 = beta / (TAU * r);
    let wx = if x0 > 0.0 { w.value(x0) } else { 0.0 };
    if wx == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), bound));
    }
    let root = Complex64::new(-beta, 0.0).sqrt();
    let osc = Complex64::from_polar(1.0, beta * (x0.ln() - 1.0));
    let main = e(0.125) * (TAU.sqrt() * wx * x0.powf(sigma)) / root * osc;
    Ok((main, bound))
}

/// `(1/K) ∫ (n/m)^{iv} V(v/K) dv = V†(-K log(n/m)/(2π), 1)`.
pub fn conductor_kernel(n: u64, m: u64, big_k: f64, v: &Window) -> Result<Complex64> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let r = -big_k * (n as f64 / m as f64).ln() / TAU;
    w_dagger(v, r, Complex64::new(1.0, 0.0))
}

/// `[f, f_x, f_y, f_xx, f_yy, f_xy]` at a point.
pub type Phase2Fn = Arc<dyn Fn(f64, f64) -> [f64; 6] + Send + Sync>;
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct TwoDPhaseProfile {
    pub phase: Phase2Fn,
    pub amplitude: Fn2,
    /// `∂²g/∂x∂y`.
    pub amplitude_xy: Fn2,
    pub rect: [f64; 4],
    pub r1: f64,
    pub r2: f64,
    pub total_variation: f64,
}

impl TwoDPhaseProfile {
    /// Builds the profile and computes `var(g) = ∬ |g_xy|` by composite quadrature.
    pub fn new(
        phase: Phase2Fn,
        amplitude: Fn2,
        amplitude_xy: Fn2,
        rect: [f64; 4],
        r1: f64,
        r2: f64,
    ) -> Result<Self> {
        let [a, b, c, d] = rect;
        if !(a < b && c < d) || !(r1 > 0.0 && r2 > 0.0) {
            return Err(Error::InvalidArgument("bad rectangle or r1, r2".into()));
        }
        let xs = composite_rule(a, b, 64, 8);
        let ys = composite_rule(c, d, 64, 8);
        let mut var = crate::numerics::CompensatedSum::new();
        for &(x, wx) in &xs {
            for &(y, wy) in &ys {
                var.add(wx * wy * amplitude_xy(x, y).abs());
            }
        }
        Ok(Self {
            phase,
            amplitude,
            amplitude_xy,
            rect,
            r1,
            r2,
            total_variation: var.value(),
        })
    }

    /// Checks `f_xx ≥ r1²`, `f_yy ≥ r2²`, `det ≥ r1² r2²` on a grid.
    pub fn check_hessian(&self, points: usize) -> Result<()> {
        let [a, b, c, d] = self.rect;
        let (s1, s2) = (self.r1 * self.r1, self.r2 * self.r2);
        let slack = 1.0 - 1e-12;
        for i in 0..=points {
            for j in 0..=points {
                let x = a + (b - a) * i as f64 / points as f64;
                let y = c + (d - c) * j as f64 / points as f64;
                let p = (self.phase)(x, y);
                let det = p[3] * p[4] - p[5] * p[5];
                if p[3] < s1 * slack || p[4] < s2 * slack || det < s1 * s2 * slack {
                    return Err(Error::Hypothesis(format!(
                        "Hessian condition fails at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `var(g) / (r1 r2)` after verifying the Hessian hypotheses.
pub fn second_derivative_bound_2d(profile: &TwoDPhaseProfile) -> Result<f64> {
    profile.check_hessian(64)?;
    Ok(profile.total_variation / (profile.r1 * profile.r2))
}

/// `∬ g e(f)` by nested adaptive quadrature.
pub fn oracle_quadrature_2d(profile: &TwoDPhaseProfile, tol: f64) -> Result<Complex64> {
    let [a, b, c, d] = profile.rect;
    let ymid = 0.5 * (c + d);
    let outer = Quadrature::with_tol(tol);
    let inner = Quadrature::with_tol(tol / (b - a));
    outer
        .try_integrate(
            a,
            b,
            |x| {
                inner.try_integrate(
                    c,
                    d,
                    |y| {
                        let g = (profile.amplitude)(x, y);
                        if g == 0.0 {
                            return Ok(Complex64::new(0.0, 0.0));
                        }
                        Ok(e((profile.phase)(x, y)[0]) * g)
                    },
                    |y| 1.0 + (profile.phase)(x, y)[2].abs(),
                )
                .map(|r| r.value)
            },
            |x| 1.0 + (profile.phase)(x, ymid)[1].abs(),
        )
        .map(|r| r.value)
}

/// `f = B(x² + y²)` with `g = b(x) b(y)` for the unit bump `b` on `[-h, h]`.
pub fn fresnel_profile_2d(big_b: f64, h: f64) -> Result<TwoDPhaseProfile> {
    let bump = Window::make_bump(-h, h, false)?;
    let b1 = bump.clone();
    let r = (2.0 * big_b).sqrt();
    TwoDPhaseProfile::new(
        Arc::new(move |x, y| {
            [
                big_b * (x * x + y * y),
                2.0 * big_b * x,
                2.0 * big_b * y,
                2.0 * big_b,
                2.0 * big_b,
                0.0,
            ]
        }),
        Arc::new(move |x, y| b1.value(x) * b1.value(y)),
        Arc::new(move |x, y| bump.derivative(x, 1) * bump.derivative(y, 1)),
        [-h, h, -h, h],
        r,
        r,
    )
}

/// `√(2π/|β|) W(x₀) x₀^σ`, the modulus the branch choice must reproduce.
pub fn w_dagger_main_modulus(w: &Window, r: f64, s: Complex64) -> f64 {
    let x0 = s.im / (TAU * r);
    if x0 <= 0.0 {
        return 0.0;
    }
    (2.0 * PI / s.im.abs()).sqrt() * w.value(x0) * x0.powf(s.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_branch_formula() {
        let p = linear_profile(100.0);
        assert!((first_branch_bound(&p).unwrap() - 3e-4).abs() < 1e-18);
        let q = linear_profile(200.0);
        assert!(first_branch_bound(&q).unwrap() < first_branch_bound(&p).unwrap());
        let mut r = linear_profile(10.0);
        r.lambda = None;
        assert!(first_branch_bound(&r).is_err());
    }

    #[test]
    fn oracle_basic() {
        let bump = Window::make_bump(1.0, 2.0, false).unwrap();
        let b2 = bump.clone();
        let p = PhaseProfile::new(
            Arc::new(|_| Jet::zero()),
            Arc::new(move |x| b2.jet::<5>(x)),
            (1.0, 2.0),
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        let z = oracle_quadrature(&p, 1e-13).unwrap();
        assert!((z.re - bump.integral()).abs() < 1e-13 && z.im.abs() < 1e-13);
        assert!(oracle_quadrature(&p, 1e-14).is_err());
    }

    #[test]
    fn stationary_point_location_and_errors() {
        let p = fresnel_profile(100.0);
        let s = second_branch_expand(&p).unwrap();
        assert!(s.x0.abs() < 1e-11);
        let expected = e(0.125) * ((-1f64).exp() / 200f64.sqrt());
        assert!((s.main - expected).norm() < 1e-14);
        let lin = linear_profile(5.0);
        assert!(matches!(
            second_branch_expand(&lin),
            Err(Error::NoStationaryPoint { .. })
        ));
    }

    #[test]
    fn main_term_branch_and_modulus() {
        let w = Window::make_bump(1.0, 2.0, false).unwrap();
        for beta in [300.0, -300.0] {
            let r = beta / (TAU * 1.5);
            let s = Complex64::new(0.5, beta);
            let (m, _) = w_dagger_main(&w, r, s).unwrap();
            assert!((m.norm() - w_dagger_main_modulus(&w, r, s)).abs() < 1e-14);
            let o = w_dagger(&w, r, s).unwrap();
            assert!((o - m).norm() < 0.1 * m.norm(), "beta={beta}");
        }
        assert!(w_dagger_main(&w, 0.0, Complex64::new(1.0, 5.0)).is_err());
    }

    #[test]
    fn kernel_symmetries() {
        let v = Window::make_bump(1.0, 2.0, true).unwrap();
        let one = conductor_kernel(77, 77, 50.0, &v).unwrap();
        assert!((one - 1.0).norm() < 1e-12);
        let a = conductor_kernel(100, 103, 50.0, &v).unwrap();
        let b = conductor_kernel(103, 100, 50.0, &v).unwrap();
        assert!((a - b.conj()).norm() < 1e-13);
        let c = conductor_kernel(200, 206, 50.0, &v).unwrap();
        assert!((a - c).norm() < 1e-13);
    }

    #[test]
    fn two_d_zero_amplitude() {
        let p = TwoDPhaseProfile::new(
            Arc::new(|x, y| [x * x + y * y, 2.0 * x, 2.0 * y, 2.0, 2.0, 0.0]),
            Arc::new(|_, _| 0.0),
            Arc::new(|_, _| 0.0),
            [-1.0, 1.0, -1.0, 1.0],
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(second_derivative_bound_2d(&p).unwrap(), 0.0);
        assert_eq!(oracle_quadrature_2d(&p, 1e-10).unwrap(), Complex64::new(0.0, 0.0));
        let bad = TwoDPhaseProfile { r1: 2.0, ..p };
        assert!(matches!(second_derivative_bound_2d(&bad), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn two_d_fresnel_bound() {
        let p = fresnel_profile_2d(100.0, 0.25).unwrap();
        let bound = second_derivative_bound_2d(&p).unwrap();
        let value = oracle_quadrature_2d(&p, 1e-10).unwrap().norm();
        assert!(value <= bound, "{value} > {bound}");
        assert!((value / bound - 0.25).abs() < 1e-3);
    }
}
