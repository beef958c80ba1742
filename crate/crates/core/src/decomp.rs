//! Desk-scale instances of the structural identities behind the bound for `S(N)`:
//! the split `S(N) = S⁺(N) + S⁻(N)` through the delta symbol and the
//! conductor-lowering integral, Poisson summation of the `m`-sum, the complete
//! character sum `𝔠`, and the double integral `I**(q, m, τ)` with its main term
//! `I₁` and error budget `B(C, τ)`.

use crate::deltasym::{frames, mod_inverse};
use crate::error::{Error, Result};
use crate::forms::CuspForm;
use crate::lcrit::{s_of_n_with, EPSILON};
use crate::numerics::{e, e_rational, gcd, ComplexSum, Complex64, Quadrature};
use crate::oscint::w_dagger_with;
use crate::windows::{partition_of_unity, Window};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, TAU};

/// Size caps; the identities are scale-free, so small parameters suffice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeskCaps {
    pub n_max: f64,
    pub q_max: f64,
    pub poisson_n_max: f64,
    pub poisson_q_max: i64,
}

impl Default for DeskCaps {
    fn default() -> Self {
        Self {
            n_max: 500.0,
            q_max: 12.0,
            poisson_n_max: 200.0,
            poisson_q_max: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompConfig {
    pub n: f64,
    pub k: f64,
    pub t: f64,
    pub q: f64,
    /// Set when `q` differs from `(N/K)^{1/2}`.
    pub q_overridden: bool,
    pub epsilon: f64,
    /// Normalized bump on `[1, 2]`.
    pub v: Window,
    /// Plateau window, 1 on `[1, 2]`, supported on `[1/2, 5/2]`.
    pub u: Window,
    /// Absolute tolerance for the inner oscillatory integrals.
    pub quad_tol: f64,
    pub caps: DeskCaps,
}

impl DecompConfig {
    pub fn new(n: f64, k: f64, t: f64) -> Result<Self> {
        let cfg = Self {
            n,
            k,
            t,
            q: (n / k).sqrt(),
            q_overridden: false,
            epsilon: EPSILON,
            v: Window::make_bump(1.0, 2.0, true)?,
            u: Window::make_plateau(0.5, 1.0, 2.0, 2.5)?,
            quad_tol: 1e-11,
            caps: DeskCaps::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_q(mut self, q: f64) -> Result<Self> {
        self.q = q;
        self.q_overridden = (q - (self.n / self.k).sqrt()).abs() > 1e-12;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n > 0.0 && self.k > 0.0 && self.t > 0.0 && self.q >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need N, K, t > 0 and Q ≥ 1, got N={}, K={}, t={}, Q={}",
                self.n, self.k, self.t, self.q
            )));
        }
        if !(self.k < self.t) {
            return Err(Error::InvalidArgument(format!("need K < t, got K={} t={}", self.k, self.t)));
        }
        if self.n > self.caps.n_max {
            return Err(Error::ResourceLimit {
                requested: self.n as usize,
                budget: self.caps.n_max as usize,
            });
        }
        if self.q > self.caps.q_max {
            return Err(Error::ResourceLimit {
                requested: self.q.ceil() as usize,
                budget: self.caps.q_max as usize,
            });
        }
        Ok(())
    }

    fn quad(&self) -> Quadrature {
        Quadrature::with_tol(self.quad_tol)
    }

    /// Dyadic base `C = 2^j` with `C < q ≤ 2C`.
    pub fn dyadic_base(q: i64) -> f64 {
        let mut c = 0.5;
        while 2.0 * c < q as f64 {
            c *= 2.0;
        }
        c
    }

    /// The `τ`-range `N t^ε / (QC)` beyond which the dual integrals are negligible.
    pub fn tau_range(&self, c: f64) -> f64 {
        self.n * self.t.powf(self.epsilon) / (self.q * c)
    }

    /// Partition of unity `W_J` covering `[-R, R]` with `R = N t^ε/(QC)`.
    pub fn tau_partition(&self, c: f64) -> Result<Vec<Window>> {
        partition_of_unity(self.tau_range(c).max(1.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSum {
    pub s_plus: Complex64,
    pub s_minus: Complex64,
    /// `S(N)` summed directly with weight `V(n/N)`.
    pub s_direct: Complex64,
    pub rel_residual: f64,
    pub frames: usize,
}

fn check_coefficients(form: &CuspForm, cfg: &DecompConfig) -> Result<()> {
    let top = (2.5 * cfg.n).floor() as usize;
    if top > form.n_max() {
        return Err(Error::InsufficientCoefficients {
            precision: 0.0,
            needed: top,
            available: form.n_max(),
        });
    }
    Ok(())
}

/// `(n, λ(n) V(n/N))` and `(m, U(m/N) m^{-it})` over the two supports.
fn weighted_ranges(form: &CuspForm, cfg: &DecompConfig) -> (Vec<(i64, f64)>, Vec<(i64, Complex64)>) {
    let lam = form.lambdas();
    let ns = (cfg.n.ceil() as i64..=(2.0 * cfg.n).floor() as i64)
        .map(|n| (n, lam[n as usize - 1] * cfg.v.value(n as f64 / cfg.n)))
        .filter(|p| p.1 != 0.0)
        .collect();
    let ms = ((0.5 * cfg.n).ceil() as i64..=(2.5 * cfg.n).floor() as i64)
        .map(|m| {
            let w = cfg.u.value(m as f64 / cfg.n);
            (m, Complex64::from_polar(w, -cfg.t * (m as f64).ln()))
        })
        .filter(|p| p.1.norm() != 0.0)
        .collect();
    (ns, ms)
}

/// `(1/K) ∫ V(v/K) (n/m)^{iv} dv` for every pair, indexed `[i][j]`.
fn kernel_table(cfg: &DecompConfig, ns: &[(i64, f64)], ms: &[(i64, Complex64)]) -> Result<Vec<Vec<Complex64>>> {
    let quad = cfg.quad();
    ns.par_iter()
        .map(|&(n, _)| {
            ms.iter()
                .map(|&(m, _)| {
                    let r = -cfg.k * (n as f64 / m as f64).ln() / TAU;
                    w_dagger_with(&cfg.v, r, Complex64::new(1.0, 0.0), &quad)
                })
                .collect()
        })
        .collect()
}

/// Both branches of the split, each `x`- and `v`-integral by quadrature.
pub fn s_plus_minus(form: &CuspForm, cfg: &DecompConfig) -> Result<SplitSum> {
    cfg.validate()?;
    check_coefficients(form, cfg)?;
    let fr = frames(cfg.q)?;
    let (ns, ms) = weighted_ranges(form, cfg);
    let kern = kernel_table(cfg, &ns, &ms)?;
    let quad = cfg.quad();
    let dmin = ns[0].0 - ms[ms.len() - 1].0;
    let dmax = ns[ns.len() - 1].0 - ms[0].0;
    let per_frame: Vec<(Complex64, Complex64)> = fr
        .par_iter()
        .map(|f| {
            let d_aq = (f.a * f.q) as f64;
            // X(d) = ∫₀¹ e(-d x/(aq)) dx; the minus branch uses conj
            let xs: Vec<Complex64> = (dmin..=dmax)
                .map(|d| quad.integrate_oscillatory(0.0, 1.0, |x| e(-(d as f64) * x / d_aq), |_| 1.0 + d.abs() as f64 / d_aq))
                .collect::<Result<_>>()?;
            let mut plus = ComplexSum::new();
            let mut minus = ComplexSum::new();
            for (i, &(n, ln)) in ns.iter().enumerate() {
                for (j, &(m, um)) in ms.iter().enumerate() {
                    let d = n - m;
                    let base = kern[i][j] * um * ln;
                    let tw = e_rational(d * f.a_bar, f.q);
                    let x = xs[(d - dmin) as usize];
                    plus.add(base * tw * x);
                    minus.add(base * tw.conj() * x.conj());
                }
            }
            Ok((plus.value() / d_aq, minus.value() / d_aq))
        })
        .collect::<Result<_>>()?;
    let mut sp = ComplexSum::new();
    let mut sm = ComplexSum::new();
    for (p, m) in per_frame {
        sp.add(p);
        sm.add(m);
    }
    let s_direct = s_of_n_with(form, cfg.n, cfg.t, cfg.v.support(), |x| cfg.v.value(x))?;
    let total = sp.value() + sm.value();
    Ok(SplitSum {
        s_plus: sp.value(),
        s_minus: sm.value(),
        s_direct,
        rel_residual: (total - s_direct).norm() / s_direct.norm(),
        frames: fr.len(),
    })
}

/// The same double sum with the delta symbol in closed form; only `n = m` survives.
pub fn collapsed_sum(form: &CuspForm, cfg: &DecompConfig) -> Result<Complex64> {
    cfg.validate()?;
    check_coefficients(form, cfg)?;
    let fr = frames(cfg.q)?;
    let (ns, ms) = weighted_ranges(form, cfg);
    let delta = |d: i64| -> f64 {
        2.0 * fr
            .iter()
            .map(|f| f.term(d).re)
            .collect::<crate::numerics::CompensatedSum>()
            .value()
    };
    let quad = cfg.quad();
    let mut acc = ComplexSum::new();
    for &(n, ln) in &ns {
        for &(m, um) in &ms {
            let dd = delta(n - m);
            if dd.abs() < 1e-9 {
                continue;
            }
            let r = -cfg.k * (n as f64 / m as f64).ln() / TAU;
            let k = w_dagger_with(&cfg.v, r, Complex64::new(1.0, 0.0), &quad)?;
            acc.add(k * um * (ln * dd));
        }
    }
    Ok(acc.value())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub q: i64,
    pub a: i64,
    pub x: f64,
    pub v: f64,
    pub direct: Complex64,
    pub dual: Complex64,
    pub residual: f64,
    pub m_cut: i64,
}

/// Multiple of `q(1 + |t+v|)/N` kept in the dual sum.
pub const POISSON_GUARD: f64 = 3.0;

/// Default dual cut `|m| ≤ guard·q(1+|t+v|)/N + 2`.
pub fn poisson_cut(cfg: &DecompConfig, q: i64, v: f64) -> i64 {
    (POISSON_GUARD * q as f64 * (1.0 + (cfg.t + v).abs()) / cfg.n).ceil() as i64 + 2
}

/// Direct `m`-sum against its Poisson dual.
pub fn poisson_dual_m_sum(cfg: &DecompConfig, q: i64, a: i64, x: f64, v: f64) -> Result<PoissonReport> {
    poisson_dual_with_cut(cfg, q, a, x, v, poisson_cut(cfg, q, v))
}

pub fn poisson_dual_with_cut(cfg: &DecompConfig, q: i64, a: i64, x: f64, v: f64, m_cut: i64) -> Result<PoissonReport> {
    if q as f64 > cfg.caps.poisson_q_max as f64 || q < 1 {
        return Err(Error::ResourceLimit {
            requested: q.max(0) as usize,
            budget: cfg.caps.poisson_q_max as usize,
        });
    }
    if cfg.n > cfg.caps.poisson_n_max {
        return Err(Error::ResourceLimit {
            requested: cfg.n as usize,
            budget: cfg.caps.poisson_n_max as usize,
        });
    }
    let a_bar = mod_inverse(a, q)?;
    let big_t = cfg.t + v;
    let aq = (a * q) as f64;
    let mut direct = ComplexSum::new();
    for m in (0.5 * cfg.n).ceil() as i64..=(2.5 * cfg.n).floor() as i64 {
        let w = cfg.u.value(m as f64 / cfg.n);
        if w == 0.0 {
            continue;
        }
        let ph = -big_t * (m as f64).ln() / TAU - (m * a_bar).rem_euclid(q) as f64 / q as f64 + m as f64 * x / aq;
        direct.add(e(ph) * w);
    }
    let direct = direct.value();
    // m ≡ ā (mod q), |m| ≤ m_cut
    let quad = cfg.quad();
    let s = Complex64::new(1.0, -big_t);
    let first = a_bar - q * ((a_bar + m_cut) / q);
    let ms: Vec<i64> = std::iter::successors(Some(first), |m| Some(m + q))
        .take_while(|&m| m <= m_cut)
        .filter(|m| m.abs() <= m_cut)
        .collect();
    let terms: Vec<Complex64> = ms
        .par_iter()
        .map(|&m| w_dagger_with(&cfg.u, cfg.n * (m as f64 * a as f64 - x) / aq, s, &quad))
        .collect::<Result<_>>()?;
    let pre = Complex64::from_polar(cfg.n, -big_t * cfg.n.ln());
    let dual = terms.into_iter().collect::<ComplexSum>().value() * pre;
    Ok(PoissonReport {
        q,
        a,
        x,
        v,
        direct,
        dual,
        residual: (direct - dual).norm() / direct.norm(),
        m_cut,
    })
}

/// `Σ_{β mod qq'} e(β(a'q - aq' + n)/(qq'))` by direct summation.
pub fn character_sum(q: i64, q_prime: i64, a: i64, a_prime: i64, n: i64) -> Result<Complex64> {
    if q < 1 || q_prime < 1 {
        return Err(Error::InvalidArgument(format!("moduli must be positive, got {q}, {q_prime}")));
    }
    let m = q * q_prime;
    if m > 10_000 {
        return Err(Error::ResourceLimit {
            requested: m as usize,
            budget: 10_000,
        });
    }
    let c = (a_prime * q - a * q_prime + n).rem_euclid(m);
    Ok((0..m).map(|b| e_rational(b * c, m)).collect::<ComplexSum>().value())
}

/// `qq' · [n ≡ aq' - a'q (mod qq')]`.
pub fn character_sum_closed(q: i64, q_prime: i64, a: i64, a_prime: i64, n: i64) -> f64 {
    let m = q * q_prime;
    if (n - (a * q_prime - a_prime * q)).rem_euclid(m) == 0 {
        m as f64
    } else {
        0.0
    }
}

/// The unique `a ∈ (Q, Q+q]` with `am ≡ 1 (mod q)`.
pub fn inverse_in_window(m: i64, q: i64, big_q: f64) -> Result<i64> {
    if gcd(m, q) != 1 {
        return Err(Error::NotCoprime { a: m, q });
    }
    let lo = big_q.floor() as i64 + 1;
    let hi = (big_q + q as f64).floor() as i64;
    let found: Vec<i64> = (lo..=hi).filter(|a| (a * m - 1).rem_euclid(q) == 0).collect();
    match found.as_slice() {
        [a] => Ok(*a),
        _ => Err(Error::Hypothesis(format!(
            "{} inverses of {m} mod {q} in ({big_q}, {big_q}+{q}]",
            found.len()
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IStarStar {
    pub q: i64,
    pub m: i64,
    pub tau: f64,
    pub a: i64,
    pub value: Complex64,
    pub error_estimate: f64,
}

/// `∫₀¹ ∫ V(v) U†(N(ma-x)/(aq), 1-i(t+Kv)) V†(Nx/(aq), 1/2 - iτ/2 + iKv) dv dx`,
/// nested quadrature with `U†` and `V†` computed inside.
pub fn i_star_star(cfg: &DecompConfig, q: i64, m: i64, tau: f64) -> Result<IStarStar> {
    cfg.validate()?;
    let a = inverse_in_window(m, q, cfg.q)?;
    let aq = (a * q) as f64;
    let inner = Quadrature::with_tol(cfg.quad_tol);
    let outer = Quadrature::with_tol(1e-3 * cfg.quad_tol.sqrt());
    let (v_lo, v_hi) = cfg.v.support();
    let ma = (m * a) as f64;
    let mut err = 0.0;
    let rep = outer.try_integrate(
        0.0,
        1.0,
        |x| {
            let r_u = cfg.n * (ma - x) / aq;
            let r_v = cfg.n * x / aq;
            let row = outer.try_integrate(
                v_lo,
                v_hi,
                |v| {
                    let w = cfg.v.value(v);
                    if w == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let kv = cfg.k * v;
                    let ud = w_dagger_with(&cfg.u, r_u, Complex64::new(1.0, -(cfg.t + kv)), &inner)?;
                    let vd = w_dagger_with(&cfg.v, r_v, Complex64::new(0.5, kv - tau / 2.0), &inner)?;
                    Ok(ud * vd * w)
                },
                |_| 1.0 + cfg.k / TAU,
            )?;
            err += row.error_estimate;
            Ok(row.value)
        },
        |_| 1.0 + 2.0 * cfg.n / aq,
    )?;
    Ok(IStarStar {
        q,
        m,
        tau,
        a,
        value: rep.value,
        error_estimate: rep.error_estimate + err,
    })
}

/// `I**` after carrying out the `v`- and `x`-integrals first:
/// `∬ U(u)V(y) u^{-it} y^{-1/2-iτ/2} e(-Nmu/q) V†(K log(u/y)/2π, 1) X(N(u-y)/(aq)) du dy`
/// with `X(θ) = ∫₀¹ e(θx) dx`. Used as an independent check on [`i_star_star`].
pub fn i_star_star_separated(cfg: &DecompConfig, q: i64, m: i64, tau: f64) -> Result<IStarStar> {
    cfg.validate()?;
    let a = inverse_in_window(m, q, cfg.q)?;
    let aq = (a * q) as f64;
    let inner = Quadrature::with_tol(cfg.quad_tol);
    let outer = Quadrature::with_tol(1e-3 * cfg.quad_tol.sqrt());
    let (u_lo, u_hi) = cfg.u.support();
    let (y_lo, y_hi) = cfg.v.support();
    let mut err = 0.0;
    let rate_u = (cfg.t / (TAU * u_lo) + cfg.n * (m.abs() as f64) / q as f64).max(1.0);
    let rep = outer.try_integrate(
        u_lo,
        u_hi,
        |u| {
            let uw = cfg.u.value(u);
            if uw == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let pre = Complex64::from_polar(uw, -cfg.t * u.ln()) * e(-cfg.n * m as f64 * u / q as f64);
            let row = outer.try_integrate(
                y_lo,
                y_hi,
                |y| {
                    let yw = cfg.v.value(y);
                    if yw == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let vd = w_dagger_with(&cfg.v, cfg.k * (u / y).ln() / TAU, Complex64::new(1.0, 0.0), &inner)?;
                    let theta = cfg.n * (u - y) / aq;
                    let x = if theta == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        (e(theta) - 1.0) / Complex64::new(0.0, TAU * theta)
                    };
                    let yf = Complex64::from_polar(yw * y.powf(-0.5), -0.5 * tau * y.ln());
                    Ok(vd * x * yf)
                },
                |_| 1.0 + cfg.n / aq + tau.abs() / TAU,
            )?;
            err += row.error_estimate;
            Ok(pre * row.value)
        },
        |_| 1.0 + rate_u,
    )?;
    Ok(IStarStar {
        q,
        m,
        tau,
        a,
        value: rep.value,
        error_estimate: rep.error_estimate + err,
    })
}

/// Main term `I₁(q, m, τ)` with the constant `c₄`; vanishes unless `m < 0`.
pub fn i_one(cfg: &DecompConfig, q: i64, m: i64, tau: f64, c4: Complex64) -> Result<Complex64> {
    let a = inverse_in_window(m, q, cfg.q)?;
    if m >= 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tt = cfg.t + tau / 2.0;
    if !(tt > 0.0) {
        return Err(Error::InvalidArgument(format!("t + τ/2 = {tt} must be positive")));
    }
    let mf = m as f64;
    let arg = -tt * q as f64 / (TAU * cfg.n * mf);
    let vw = cfg.v.value(arg);
    if vw == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // (arg/e)^{3/2 - i tt}
    let base = arg / E;
    let power = Complex64::from_polar(base.powf(1.5), -tt * base.ln());
    let ma = mf * a as f64;
    let quad = Quadrature::with_tol(1e-14);
    let inner = quad.integrate_real(0.0, 1.0, |x| cfg.v.value(tau / (2.0 * cfg.k) - tt * x / (cfg.k * ma)))?;
    Ok(c4 / (tt.sqrt() * cfg.k) * power * vw * inner)
}

/// Length of the `x`-range on which the inner window of [`i_one`] is nonzero, and
/// the size `K|m|a/(t+τ/2)` it is compared with.
pub fn i_one_inner_length(cfg: &DecompConfig, q: i64, m: i64, tau: f64) -> Result<(f64, f64)> {
    let a = inverse_in_window(m, q, cfg.q)?;
    let tt = cfg.t + tau / 2.0;
    let ma = (m * a) as f64;
    let grid = 20_000;
    let hits = (0..grid)
        .filter(|i| {
            let x = (*i as f64 + 0.5) / grid as f64;
            cfg.v.value(tau / (2.0 * cfg.k) - tt * x / (cfg.k * ma)) > 0.0
        })
        .count();
    Ok((hits as f64 / grid as f64, cfg.k * ma.abs() / tt))
}

/// `B(C, τ) = t^ε/(t^{1/2}K^{3/2}) min{1, 10K/|τ|} + (N/(QC))^{1/2}/(t^{1/2}K^{5/2})`.
pub fn error_budget(cfg: &DecompConfig, c: f64, tau: f64) -> f64 {
    let (t, k) = (cfg.t, cfg.k);
    let m = if tau == 0.0 { 1.0 } else { (10.0 * k / tau.abs()).min(1.0) };
    t.powf(cfg.epsilon) / (t.sqrt() * k.powf(1.5)) * m + (cfg.n / (cfg.q * c)).sqrt() / (t.sqrt() * k.powf(2.5))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratedBudget {
    pub c: f64,
    pub range: f64,
    pub numeric: f64,
    /// `2(K/(t^{1/2}K^{3/2}) + (N/(QC))^{3/2}/(t^{1/2}K^{5/2}))`
    pub closed: f64,
    pub ratio: f64,
}

/// `∫_{|τ| ≤ N t^ε/(QC)} B(C, τ) dτ` against its closed-form size.
pub fn integrated_budget(cfg: &DecompConfig, c: f64) -> Result<IntegratedBudget> {
    let r = cfg.tau_range(c);
    let quad = Quadrature::with_tol(1e-14);
    let kink = (10.0 * cfg.k).min(r);
    // B is even in τ with a kink at |τ| = 10K
    let mut numeric = 2.0 * quad.integrate_real(0.0, kink, |x| error_budget(cfg, c, x))?;
    if r > kink {
        numeric += 2.0 * quad.integrate_real(kink, r, |x| error_budget(cfg, c, x))?;
    }
    let (t, k) = (cfg.t, cfg.k);
    let closed = 2.0 * (k / (t.sqrt() * k.powf(1.5)) + (cfg.n / (cfg.q * c)).powf(1.5) / (t.sqrt() * k.powf(2.5)));
    Ok(IntegratedBudget {
        c,
        range: r,
        numeric,
        closed,
        ratio: numeric / closed,
    })
}
