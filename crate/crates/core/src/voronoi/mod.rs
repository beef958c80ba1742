//! GL(2) Voronoi summation for a level-1 cusp form of weight `k`:
//!
//! `Σ λ(n) e(na/q) F(n) = (2π i^k / q) Σ λ(n) e(-nā/q) ∫₀^∞ F(x) J_{k-1}(4π√(nx)/q) dx`
//!
//! together with the gamma-factor ratio `γ(s)` of the inverse-Mellin
//! representation of the Bessel kernel and its Stirling residue `Φ(τ)`.
//!
//! The dual sum is truncated at `n_cut` with a tail bound from repeated
//! integration by parts against `d/dz (z^{ν+1} J_{ν+1}) = z^{ν+1} J_ν`, which
//! gives `|I_n| ≤ (q/(2π√n))^j ‖G_j‖₁` with `G_{j+1} = -x^{(ν+j+1)/2}(x^{-(ν+j)/2} G_j)'`,
//! summed against the cached `|λ(n)|`, with `|λ(n)| ≤ d(n)` as a crude envelope
//! past the end of the cache.
//! The Bessel factor left after the last integration is bounded either by 1
//! or by Landau's uniform `|J_μ(z)| ≤ 0.7858 z^{-1/3}`, whichever is smaller.

pub mod bessel;

use crate::deltasym::mod_inverse;
use crate::error::{Error, Result};
use crate::forms::CuspForm;
use crate::numerics::gamma::{ln_gamma, pole_distance};
use crate::numerics::quad::composite_rule;
use crate::numerics::{divisor_dirichlet_tail, e_rational, ComplexSum, Complex64, Quadrature};
use crate::windows::Window;
use bessel::BesselJ;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI, TAU};

/// Highest integration-by-parts order used by the tail bound.
pub const MAX_IBP: usize = 40;

const LANDAU: f64 = 0.7858;

/// `γ(s) = Γ(s/2 + (k-1)/2) / Γ(1 - s/2 + (k-1)/2)`.
pub fn gamma_ratio(s: Complex64, k: u32) -> Result<Complex64> {
    let h = (k as f64 - 1.0) / 2.0;
    let num = s * 0.5 + h;
    if pole_distance(num) < 1e-8 {
        return Err(Error::NearPole(format!("s = {s}")));
    }
    let den = Complex64::new(1.0 + h, 0.0) - s * 0.5;
    if pole_distance(den) < 1e-8 {
        // 1/Γ vanishes at its poles
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((ln_gamma(num) - ln_gamma(den)).exp())
}

/// `Φ(τ) = (2π)^{-iτ} γ(1+iτ) (|τ|/(4eπ))^{-iτ}`.
///
/// The factor `(2π)^{-iτ}` removes the linear phase `τ log 2π` left by the
/// unnormalized ratio, after which `Φ' ≪ 1/|τ|`; see [`phi_literal`].
pub fn phi(tau: f64, k: u32) -> Result<Complex64> {
    Ok(phi_literal(tau, k)? * Complex64::from_polar(1.0, -tau * TAU.ln()))
}

/// `γ(1+iτ) (|τ|/(4eπ))^{-iτ}` without the `(2π)^{-iτ}` normalization.
pub fn phi_literal(tau: f64, k: u32) -> Result<Complex64> {
    if tau == 0.0 {
        return Err(Error::InvalidArgument("Φ(τ) needs τ ≠ 0".into()));
    }
    let g = gamma_ratio(Complex64::new(1.0, tau), k)?;
    let ph = -tau * (tau.abs() / (4.0 * E * PI)).ln();
    Ok(g * Complex64::from_polar(1.0, ph))
}

fn check_test_function(f: &Window, form: &CuspForm) -> Result<(f64, f64)> {
    let (a, b) = f.support();
    if a <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "test function must be supported in (0, ∞), got [{a}, {b}]"
        )));
    }
    if b.floor() as usize > form.n_max() {
        return Err(Error::OutOfRange {
            index: b.floor() as usize,
            n_max: form.n_max(),
        });
    }
    Ok((a, b))
}

/// `Σ λ(n) e(na/q) F(n)` over the support of `F`.
pub fn voronoi_lhs(form: &CuspForm, a: i64, q: i64, f: &Window) -> Result<Complex64> {
    mod_inverse(a, q)?;
    let (lo, hi) = check_test_function(f, form)?;
    let lam = form.lambdas();
    let mut acc = ComplexSum::new();
    for n in (lo.ceil() as i64).max(1)..=hi.floor() as i64 {
        let w = f.value(n as f64);
        if w != 0.0 {
            acc.add(e_rational(n * a, q) * (lam[n as usize - 1] * w));
        }
    }
    Ok(acc.value())
}

/// Integration-by-parts norms `‖G_j‖₁`, `j = 0..=MAX_IBP`, for one test function.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualTail {
    /// `∫ |G_j|`
    pub norms: Vec<f64>,
    /// `∫ |G_j| x^{-1/6}`
    pub weighted_norms: Vec<f64>,
    pub order: u32,
}

impl DualTail {
    pub fn new(f: &Window, order: u32) -> Self {
        const J: usize = MAX_IBP + 1;
        let nu = order as f64;
        // c[j][i]: coefficient of x^{i - j/2} F^{(i)} in G_j
        let mut c = vec![vec![0.0f64; J]; J];
        c[0][0] = 1.0;
        for j in 0..MAX_IBP {
            for i in 0..=j + 1 {
                let keep = if i <= j { -(i as f64 - j as f64 - nu / 2.0) * c[j][i] } else { 0.0 };
                let shift = if i >= 1 { -c[j][i - 1] } else { 0.0 };
                c[j + 1][i] = keep + shift;
            }
        }
        let (a, b) = f.support();
        let mut norms = vec![0.0f64; J];
        let mut weighted_norms = vec![0.0f64; J];
        let mut fact = [1.0f64; J];
        for i in 1..J {
            fact[i] = fact[i - 1] * i as f64;
        }
        for (x, w) in composite_rule(a, b, 200, 10) {
            let jet = f.jet::<J>(x);
            let d: Vec<f64> = jet.coefficients().iter().zip(&fact).map(|(c, f)| c * f).collect();
            let sqrt_x = x.sqrt();
            for j in 0..J {
                let mut g = 0.0;
                let mut p = sqrt_x.powi(-(j as i32));
                for (i, di) in d.iter().enumerate().take(j + 1) {
                    g += c[j][i] * p * di;
                    p *= x;
                }
                norms[j] += w * g.abs();
                weighted_norms[j] += w * g.abs() * x.powf(-1.0 / 6.0);
            }
        }
        Self {
            norms,
            weighted_norms,
            order,
        }
    }

    /// Bound on `|(2π/q) Σ_{n > m} λ(n) e(-nā/q) I_n|` from `|λ(n)| ≤ d(n)` alone.
    pub fn bound(&self, q: i64, m: usize) -> f64 {
        self.bound_with(q, m, &[])
    }

    /// As [`DualTail::bound`], with the exact `|λ(n)|` for `n ≤ lambdas.len()`
    /// and the divisor envelope only past the cache.
    pub fn bound_with(&self, q: i64, m: usize, lambdas: &[f64]) -> f64 {
        const J: usize = MAX_IBP + 1;
        let m = m.max(1);
        let top = lambdas.len().max(m);
        // exact[j] = Σ_{m<n≤top} |λ(n)| n^{-j/2}, landau[j] the same with n^{-1/6} more
        let mut exact = [0.0f64; J];
        let mut exact6 = [0.0f64; J];
        for n in m + 1..=top {
            let l = lambdas[n - 1].abs();
            let nf = n as f64;
            let step = 1.0 / nf.sqrt();
            let six = nf.powf(-1.0 / 6.0);
            let mut p = l * step * step * step;
            for j in 3..J {
                exact[j] += p;
                exact6[j] += p * six;
                p *= step;
            }
        }
        let r = q as f64 / TAU;
        // z = 4π√(nx)/q, so z^{-1/3} = (q/4π)^{1/3} n^{-1/6} x^{-1/6}
        let landau = LANDAU * (q as f64 / (2.0 * TAU)).cbrt();
        let top = top as f64;
        let best = (3..=MAX_IBP)
            .map(|j| {
                let s = j as f64 / 2.0;
                let plain = self.norms[j] * (exact[j] + divisor_dirichlet_tail(top, s));
                let decay =
                    landau * self.weighted_norms[j] * (exact6[j] + divisor_dirichlet_tail(top, s + 1.0 / 6.0));
                r.powi(j as i32) * plain.min(decay)
            })
            .fold(f64::INFINITY, f64::min);
        best / r
    }

    /// Smallest cut with `bound ≤ tol`, by doubling then bisection.
    pub fn cutoff(&self, q: i64, tol: f64) -> usize {
        self.cutoff_with(q, tol, &[])
    }

    pub fn cutoff_with(&self, q: i64, tol: f64, lambdas: &[f64]) -> usize {
        let mut hi = 1usize;
        while self.bound_with(q, hi, lambdas) > tol {
            hi *= 2;
            if hi > 1 << 40 {
                return hi;
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.bound_with(q, mid, lambdas) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSum {
    pub value: Complex64,
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    pub n_cut: usize,
}

/// `∫ F(x) J_{k-1}(4π√(nx)/q) dx` with the quadrature error estimate.
pub fn dual_integral(f: &Window, j: &BesselJ, n: usize, q: i64, quad: &Quadrature) -> Result<(f64, f64)> {
    let (a, b) = f.support();
    let c = 4.0 * PI * (n as f64).sqrt() / q as f64;
    let rate = (n as f64).sqrt() / q as f64;
    let r = quad.try_integrate(
        a,
        b,
        |x| Ok(Complex64::new(f.value(x) * j.eval(c * x.sqrt()), 0.0)),
        |x| 1.0 + rate / x.sqrt(),
    )?;
    Ok((r.value.re, r.error_estimate))
}

/// Truncated dual side and its tail bound; errors if the bound exceeds `tail_tol`.
pub fn voronoi_rhs(
    form: &CuspForm,
    a: i64,
    q: i64,
    f: &Window,
    n_cut: usize,
    tail_tol: f64,
) -> Result<DualSum> {
    let tail = DualTail::new(f, form.weight() - 1);
    voronoi_rhs_with(form, a, q, f, n_cut, tail_tol, &tail)
}

pub fn voronoi_rhs_with(
    form: &CuspForm,
    a: i64,
    q: i64,
    f: &Window,
    n_cut: usize,
    tail_tol: f64,
    tail: &DualTail,
) -> Result<DualSum> {
    mod_inverse(a, q)?;
    let tail_estimate = tail.bound_with(q, n_cut, form.lambdas());
    if tail_estimate > tail_tol {
        return Err(Error::TailTooLarge {
            tail: tail_estimate,
            tol: tail_tol,
        });
    }
    let ints = DualIntegrals::new(form, q, f, n_cut)?;
    let mut sum = ints.combine(form, a)?;
    sum.tail_estimate = tail_estimate;
    Ok(sum)
}

/// `I_n = ∫ F(x) J_{k-1}(4π√(nx)/q) dx` for `n ≤ n_cut`; independent of the residue `a`.
#[derive(Clone, Debug)]
pub struct DualIntegrals {
    pub q: i64,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl DualIntegrals {
    pub fn new(form: &CuspForm, q: i64, f: &Window, n_cut: usize) -> Result<Self> {
        check_test_function(f, form)?;
        if q < 1 {
            return Err(Error::InvalidArgument(format!("modulus {q} < 1")));
        }
        if n_cut > form.n_max() {
            return Err(Error::OutOfRange {
                index: n_cut,
                n_max: form.n_max(),
            });
        }
        let (lo, hi) = f.support();
        let quad = Quadrature {
            tol: 1e-13 * (hi - lo),
            ..Quadrature::default()
        };
        let j = BesselJ::new(form.weight() - 1);
        let pairs: Vec<(f64, f64)> = (1..=n_cut)
            .into_par_iter()
            .map(|n| dual_integral(f, &j, n, q, &quad))
            .collect::<Result<_>>()?;
        let (values, errors) = pairs.into_iter().unzip();
        Ok(Self { q, values, errors })
    }

    pub fn n_cut(&self) -> usize {
        self.values.len()
    }

    /// `(2π i^k/q) Σ λ(n) e(-nā/q) I_n`; `tail_estimate` is left at 0.
    pub fn combine(&self, form: &CuspForm, a: i64) -> Result<DualSum> {
        let a_bar = mod_inverse(a, self.q)?;
        let lam = form.lambdas();
        let mut acc = ComplexSum::new();
        let mut qerr = 0.0;
        for (i, (v, e)) in self.values.iter().zip(&self.errors).enumerate() {
            let l = lam[i];
            acc.add(e_rational(-((i + 1) as i64) * a_bar, self.q) * (l * v));
            qerr += l.abs() * e;
        }
        let k = form.weight();
        // i^k for even k
        let ik = if k % 4 == 0 { 1.0 } else { -1.0 };
        let pre = TAU * ik / self.q as f64;
        Ok(DualSum {
            value: acc.value() * pre,
            tail_estimate: 0.0,
            quadrature_error: qerr * pre.abs(),
            n_cut: self.n_cut(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoronoiReport {
    pub q: i64,
    pub a: i64,
    pub support: (f64, f64),
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    pub n_cut: usize,
}

/// Default truncation tolerance for [`voronoi_check`].
pub const TAIL_TOL: f64 = 1e-8;

/// Both sides of the identity with the error budget split.
pub fn voronoi_check(form: &CuspForm, a: i64, q: i64, f: &Window) -> Result<VoronoiReport> {
    mod_inverse(a, q)?;
    let (tail, n_cut) = plan_cut(form, q, f, TAIL_TOL)?;
    let ints = DualIntegrals::new(form, q, f, n_cut)?;
    report(form, a, f, &ints, tail.bound_with(q, n_cut, form.lambdas()))
}

/// [`voronoi_check`] for every `1 ≤ a ≤ q` coprime to `q`, sharing the dual integrals.
pub fn voronoi_check_all(form: &CuspForm, q: i64, f: &Window) -> Result<Vec<VoronoiReport>> {
    voronoi_check_all_with(form, q, f, TAIL_TOL)
}

pub fn voronoi_check_all_with(form: &CuspForm, q: i64, f: &Window, tail_tol: f64) -> Result<Vec<VoronoiReport>> {
    let (tail, n_cut) = plan_cut(form, q, f, tail_tol)?;
    let ints = DualIntegrals::new(form, q, f, n_cut)?;
    let bound = tail.bound_with(q, n_cut, form.lambdas());
    (1..=q)
        .filter(|&a| crate::numerics::gcd(a, q) == 1)
        .map(|a| report(form, a, f, &ints, bound))
        .collect()
}

fn plan_cut(form: &CuspForm, q: i64, f: &Window, tail_tol: f64) -> Result<(DualTail, usize)> {
    let tail = DualTail::new(f, form.weight() - 1);
    let n_cut = tail.cutoff_with(q, tail_tol, form.lambdas());
    if n_cut > form.n_max() {
        return Err(Error::InsufficientCoefficients {
            precision: tail_tol,
            needed: n_cut,
            available: form.n_max(),
        });
    }
    Ok((tail, n_cut))
}

fn report(form: &CuspForm, a: i64, f: &Window, ints: &DualIntegrals, tail_estimate: f64) -> Result<VoronoiReport> {
    let lhs = voronoi_lhs(form, a, ints.q, f)?;
    let rhs = ints.combine(form, a)?;
    let abs_residual = (lhs - rhs.value).norm();
    Ok(VoronoiReport {
        q: ints.q,
        a,
        support: f.support(),
        lhs,
        rhs: rhs.value,
        abs_residual,
        rel_residual: abs_residual / lhs.norm(),
        tail_estimate,
        quadrature_error: rhs.quadrature_error,
        n_cut: ints.n_cut(),
    })
}

/// The bump on `[X, 2X]` used as the scale-`X` test function.
pub fn scale_bump(x: f64) -> Result<Window> {
    Window::make_bump(x, 2.0 * x, false)
}
