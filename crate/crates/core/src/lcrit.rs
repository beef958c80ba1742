//! `L(1/2 + it, f)` on the critical line and the dyadic sums
//! `S(N) = Σ λ(n) n^{-it} V(n/N)`.
//!
//! With `γ(s) = (2π)^{-s} Γ(s + (k-1)/2)` and root number `i^k`, the smoothed
//! approximate functional equation reads
//!
//! `L(s) = Σ λ(n) n^{-s} V_s(n/Y) + i^k (γ(1-s)/γ(s)) Σ λ(n) n^{-(1-s)} V_{1-s}(nY)`,
//!
//! `V_s(y) = (1/2πi) ∫_{(c)} γ(s+w)/γ(s) G(w) y^{-w} dw/w`
//!
//! for any even entire `G` with `G(0) = 1`. The cutoff integral is computed
//! once per `t` on a fixed panel grid and reused for every `n`. Terms of size
//! `t^{-A}` for huge `A` are treated as exactly zero.

use crate::error::{Error, Result};
use crate::forms::CuspForm;
use crate::numerics::gamma::ln_gamma;
use crate::numerics::quad::gauss_legendre;
use crate::numerics::{divisor_dirichlet_tail, loglog_slope, ComplexSum, Complex64};
use crate::windows::Window;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// The `ε` used for every grid range in this module.
pub const EPSILON: f64 = 0.02;

/// `S(N)` for the window `V` on `[1, 2]`, summed over `N ≤ n ≤ 2N`.
pub fn s_of_n(form: &CuspForm, n: f64, t: f64, v: &Window) -> Result<Complex64> {
    s_of_n_with(form, n, t, v.support(), |x| v.value(x))
}

/// `S(N)` for an arbitrary weight supported on `support` (in units of `N`).
pub fn s_of_n_with<F: Fn(f64) -> f64>(
    form: &CuspForm,
    n: f64,
    t: f64,
    support: (f64, f64),
    weight: F,
) -> Result<Complex64> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!("N = {n} must be positive")));
    }
    let lo = ((support.0 * n).ceil() as usize).max(1);
    let hi = (support.1 * n).floor() as usize;
    if hi > form.n_max() {
        return Err(Error::InsufficientCoefficients {
            precision: 0.0,
            needed: hi,
            available: form.n_max(),
        });
    }
    let lam = form.lambdas();
    let mut acc = ComplexSum::new();
    for m in lo..=hi {
        let w = weight(m as f64 / n);
        if w != 0.0 {
            let ph = -t * (m as f64).ln();
            acc.add(Complex64::from_polar(lam[m - 1] * w, ph));
        }
    }
    Ok(acc.value())
}

/// Cutoff family `G(w) = e^{w²/α}(1 + b w²)`, balance point `Y`, contour `Re w = c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Smoothing {
    pub alpha: f64,
    pub b: f64,
    pub y: f64,
    pub contour: f64,
    /// Panel width in `Im w`.
    pub panel: f64,
}

impl Smoothing {
    /// Gaussian cutoff, balanced sums.
    pub fn standard() -> Self {
        Self {
            alpha: 12.0,
            b: 0.0,
            y: 1.0,
            contour: 1.0,
            panel: 0.5,
        }
    }

    /// The oracle's family: a different `G`, unbalanced sums and a finer grid.
    pub fn oracle() -> Self {
        Self {
            alpha: 8.0,
            b: 0.25,
            y: 1.25,
            contour: 1.5,
            panel: 0.25,
        }
    }

    fn g(&self, w: Complex64) -> Complex64 {
        let w2 = w * w;
        (w2 / self.alpha).exp() * (1.0 + self.b * w2)
    }

    fn ln_abs_g(&self, w: Complex64) -> f64 {
        let w2 = w * w;
        w2.re / self.alpha + (1.0 + self.b * w2).norm().ln()
    }
}

fn ln_gamma_factor(z: Complex64, k: u32) -> Complex64 {
    -z * TAU.ln() + ln_gamma(z + (k as f64 - 1.0) / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub t: f64,
    pub value: Complex64,
    /// Terms kept in each sum.
    pub terms: usize,
    pub truncation_bound: f64,
    pub quadrature_error: f64,
    pub smoothing: Smoothing,
}

/// Nodes `(u, weight, weight_lo)` in `Im w`; `weight_lo` is the embedded 12-point rule.
struct Contour {
    nodes: Vec<(f64, f64, f64)>,
}

impl Contour {
    fn new(s: Complex64, k: u32, sm: &Smoothing) -> Self {
        let lg0 = ln_gamma_factor(s, k).re;
        let ln_mag = |u: f64| {
            let w = Complex64::new(sm.contour, u);
            (ln_gamma_factor(s + w, k).re - lg0) + sm.ln_abs_g(w) - w.norm().ln()
        };
        let peak = (-160..=160).map(|i| ln_mag(i as f64 * 0.5)).fold(f64::MIN, f64::max);
        // walk outward until the integrand is below e^{-46} of its peak
        let edge = |dir: f64| {
            let mut u = 0.0;
            let mut quiet = 0;
            while quiet < 4 {
                u += dir;
                if ln_mag(u) < peak - 46.0 {
                    quiet += 1;
                } else {
                    quiet = 0;
                }
            }
            u
        };
        let (lo, hi) = (edge(-1.0), edge(1.0));
        let panels = ((hi - lo) / sm.panel).ceil() as usize;
        let h = (hi - lo) / panels as f64;
        let hi_rule = gauss_legendre(24);
        let lo_rule = gauss_legendre(12);
        let mut nodes = Vec::with_capacity(panels * 36);
        for p in 0..panels {
            let a = lo + p as f64 * h;
            for (&x, &w) in hi_rule.0.iter().zip(&hi_rule.1) {
                nodes.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w, 0.0));
            }
            for (&x, &w) in lo_rule.0.iter().zip(&lo_rule.1) {
                nodes.push((a + 0.5 * h * (x + 1.0), 0.0, 0.5 * h * w));
            }
        }
        Self { nodes }
    }

    /// `γ(s+w)/γ(s) G(w)/w / 2π` at each node.
    fn kernel(&self, s: Complex64, k: u32, sm: &Smoothing) -> Vec<Complex64> {
        let lg0 = ln_gamma_factor(s, k);
        self.nodes
            .iter()
            .map(|&(u, _, _)| {
                let w = Complex64::new(sm.contour, u);
                (ln_gamma_factor(s + w, k) - lg0).exp() * sm.g(w) / w / TAU
            })
            .collect()
    }

    /// `|V_s(y)| ≤ y^{-c} (1/2π) ∫ |γ(s+c+iu)/γ(s)| |G(c+iu)|/|c+iu| du` at `Re w = c`.
    fn magnitude_integral(s: Complex64, k: u32, sm: &Smoothing, c: f64) -> f64 {
        let lg0 = ln_gamma_factor(s, k).re;
        let rule = gauss_legendre(24);
        let mut total = 0.0;
        let h = 1.0;
        for p in -80..80 {
            let a = p as f64 * h;
            for (&x, &wt) in rule.0.iter().zip(&rule.1) {
                let u = a + 0.5 * h * (x + 1.0);
                let w = Complex64::new(c, u);
                let lm = (ln_gamma_factor(s + w, k).re - lg0) + sm.ln_abs_g(w) - w.norm().ln();
                total += 0.5 * h * wt * lm.exp();
            }
        }
        total / TAU
    }
}

const SHIFTS: usize = 40;

/// `(I(s, c), I(1-s, c))` for the shifts `c = 1..=SHIFTS`.
fn tail_integrals(s: Complex64, k: u32, sm: &Smoothing) -> Vec<(f64, f64)> {
    let sb = Complex64::new(1.0 - s.re, -s.im);
    (1..=SHIFTS)
        .map(|c| {
            let c = c as f64;
            (
                Contour::magnitude_integral(s, k, sm, c),
                Contour::magnitude_integral(sb, k, sm, c),
            )
        })
        .collect()
}

/// Bound on both tails past `m` terms, minimized over shifted contours.
fn tail_bound(ints: &[(f64, f64)], sm: &Smoothing, m: usize) -> f64 {
    ints.iter()
        .enumerate()
        .map(|(i, (i1, i2))| {
            let c = (i + 1) as f64;
            (sm.y.powf(c) * i1 + sm.y.powf(-c) * i2) * divisor_dirichlet_tail(m.max(1) as f64, 0.5 + c)
        })
        .fold(f64::INFINITY, f64::min)
}

fn required_terms(s: Complex64, k: u32, sm: &Smoothing, precision: f64) -> Result<usize> {
    let ints = tail_integrals(s, k, sm);
    let bound = |m: usize| tail_bound(&ints, sm, m);
    let mut hi = 1usize;
    while bound(hi) > precision {
        hi *= 2;
        if hi > 1 << 30 {
            return Err(Error::TailTooLarge {
                tail: bound(hi),
                tol: precision,
            });
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bound(mid) > precision {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `Σ_{n≤M} λ(n) n^{-s} V_s(n/y)` for both rules.
fn smoothed_sum(form: &CuspForm, s: Complex64, sm: &Smoothing, y: f64, m: usize) -> (Complex64, Complex64) {
    let k = form.weight();
    let contour = Contour::new(s, k, sm);
    let kern = contour.kernel(s, k, sm);
    let lam = form.lambdas();
    let terms: Vec<(Complex64, Complex64)> = (1..=m)
        .into_par_iter()
        .map(|n| {
            let ly = (n as f64 / y).ln();
            let mut hi = ComplexSum::new();
            let mut lo = ComplexSum::new();
            for (&(u, wh, wl), kv) in contour.nodes.iter().zip(&kern) {
                // y^{-w} with w = c + iu
                let f = *kv * Complex64::from_polar((-sm.contour * ly).exp(), -u * ly);
                if wh != 0.0 {
                    hi.add(f * wh);
                } else {
                    lo.add(f * wl);
                }
            }
            let coef = lam[n - 1] * Complex64::from_polar((n as f64).powf(-s.re), -s.im * (n as f64).ln());
            (coef * hi.value(), coef * lo.value())
        })
        .collect();
    let mut a = ComplexSum::new();
    let mut b = ComplexSum::new();
    for (h, l) in terms {
        a.add(h);
        b.add(l);
    }
    (a.value(), b.value())
}

/// `L(1/2 + it)` with an explicit number of terms per sum.
pub fn l_value_terms(form: &CuspForm, t: f64, terms: usize, sm: &Smoothing) -> Result<LValue> {
    if terms > form.n_max() {
        return Err(Error::InsufficientCoefficients {
            precision: 0.0,
            needed: terms,
            available: form.n_max(),
        });
    }
    let k = form.weight();
    let s = Complex64::new(0.5, t);
    let sb = Complex64::new(0.5, -t);
    let (a_hi, a_lo) = smoothed_sum(form, s, sm, sm.y, terms);
    let (b_hi, b_lo) = smoothed_sum(form, sb, sm, 1.0 / sm.y, terms);
    let root = if k % 4 == 0 { 1.0 } else { -1.0 };
    let ratio = (ln_gamma_factor(sb, k) - ln_gamma_factor(s, k)).exp() * root;
    let value = a_hi + ratio * b_hi;
    let low = a_lo + ratio * b_lo;
    Ok(LValue {
        t,
        value,
        terms,
        truncation_bound: tail_bound(&tail_integrals(s, k, sm), sm, terms),
        quadrature_error: (value - low).norm(),
        smoothing: *sm,
    })
}

/// Length is chosen so the truncation bound is below `precision`.
pub fn l_value_with(form: &CuspForm, t: f64, precision: f64, sm: &Smoothing) -> Result<LValue> {
    if !t.is_finite() || !(precision > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t}, precision = {precision}")));
    }
    let s = Complex64::new(0.5, t);
    let m = required_terms(s, form.weight(), sm, precision)?;
    if m > form.n_max() {
        return Err(Error::InsufficientCoefficients {
            precision,
            needed: m,
            available: form.n_max(),
        });
    }
    l_value_terms(form, t, m, sm)
}

/// Smoothed approximate functional equation with [`Smoothing::standard`].
pub fn l_value_afe(form: &CuspForm, t: f64, precision: f64) -> Result<LValue> {
    l_value_with(form, t, precision, &Smoothing::standard())
}

/// Largest `|t|` accepted by [`l_value_oracle`].
pub const ORACLE_T_MAX: f64 = 300.0;

/// Independent slow evaluation: [`Smoothing::oracle`], twice the length needed for `1e-14`.
pub fn l_value_oracle(form: &CuspForm, t: f64) -> Result<LValue> {
    if !(t.abs() <= ORACLE_T_MAX) {
        return Err(Error::InvalidArgument(format!("oracle needs |t| ≤ {ORACLE_T_MAX}, got {t}")));
    }
    let sm = Smoothing::oracle();
    let m = required_terms(Complex64::new(0.5, t), form.weight(), &sm, 1e-14)?;
    l_value_terms(form, t, 2 * m, &sm)
}

/// Grid of `t` values with the admissible `(N, K)` ranges at each.
#[derive(Clone, Debug, Serialize)]
pub struct SweepPlan {
    pub t_grid: Vec<f64>,
    pub epsilon: f64,
    pub v: Window,
    pub precision: f64,
}

impl SweepPlan {
    /// `points` equally spaced values in `[t_min, t_max]` with a normalized bump `V` on `[1, 2]`.
    pub fn linear(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if points == 0 || !(t_min <= t_max) {
            return Err(Error::InvalidArgument(format!("grid [{t_min}, {t_max}] with {points} points")));
        }
        let t_grid = (0..points)
            .map(|i| {
                if points == 1 {
                    t_min
                } else {
                    t_min + (t_max - t_min) * i as f64 / (points - 1) as f64
                }
            })
            .collect();
        Ok(Self {
            t_grid,
            epsilon: EPSILON,
            v: Window::make_bump(1.0, 2.0, true)?,
            precision: 1e-8,
        })
    }

    /// Dyadic `N = 2^j ≤ t^{1+ε}`.
    pub fn n_list(&self, t: f64) -> Vec<f64> {
        let top = t.powf(1.0 + self.epsilon);
        std::iter::successors(Some(1.0f64), |n| Some(n * 2.0))
            .take_while(|&n| n <= top)
            .collect()
    }

    /// Default `K = N^{2/3}`.
    pub fn k_for(&self, n: f64) -> f64 {
        n.powf(2.0 / 3.0)
    }

    pub fn validate(&self) -> Result<()> {
        for &t in &self.t_grid {
            if !(t > 2.0) {
                return Err(Error::InvalidArgument(format!("sweep needs t > 2, got {t}")));
            }
            for n in self.n_list(t) {
                let k = self.k_for(n);
                let ok = k >= n.sqrt() - 1e-12 && k <= n.powf(1.0 - self.epsilon) + 1e-12 && k < t;
                if !ok {
                    return Err(Error::InvalidArgument(format!("K = {k} inadmissible at N = {n}, t = {t}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub l: Complex64,
    pub abs_l: f64,
    /// `|L| / t^{1/2}`
    pub convexity_ratio: f64,
    /// `sup_N |S(N)| / N^{1/2}` and the `N` attaining it.
    pub sup_s_ratio: f64,
    pub n_at_sup: f64,
    pub truncation_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log |L|` against `log t`; recorded, never asserted.
    pub exponent_fit: f64,
    pub epsilon: f64,
    pub smoothing: Smoothing,
}

/// Grid points are independent and collected in order.
pub fn convexity_sweep(form: &CuspForm, plan: &SweepPlan) -> Result<SweepTable> {
    plan.validate()?;
    let rows: Vec<SweepRow> = plan
        .t_grid
        .par_iter()
        .map(|&t| {
            let l = l_value_afe(form, t, plan.precision)?;
            let mut best = (0.0f64, 1.0f64);
            for n in plan.n_list(t) {
                let r = s_of_n(form, n, t, &plan.v)?.norm() / n.sqrt();
                if r > best.0 {
                    best = (r, n);
                }
            }
            Ok(SweepRow {
                t,
                l: l.value,
                abs_l: l.value.norm(),
                convexity_ratio: l.value.norm() / t.sqrt(),
                sup_s_ratio: best.0,
                n_at_sup: best.1,
                truncation_bound: l.truncation_bound,
            })
        })
        .collect::<Result<_>>()?;
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let ls: Vec<f64> = rows.iter().map(|r| r.abs_l).collect();
    let exponent_fit = if rows.len() >= 2 { loglog_slope(&ts, &ls) } else { f64::NAN };
    Ok(SweepTable {
        rows,
        exponent_fit,
        epsilon: plan.epsilon,
        smoothing: Smoothing::standard(),
    })
}
