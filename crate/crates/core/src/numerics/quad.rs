//! Adaptive Gauss–Legendre panel quadrature for smooth, possibly strongly
//! oscillatory integrands on finite intervals.
//!
//! Each panel is integrated with a 24-point and a 12-point rule; the difference
//! is the (pessimistic) error indicator and panels are bisected until the
//! indicator falls below the panel's share of the absolute tolerance. For
//! oscillatory integrands the caller supplies the local frequency (in cycles
//! per unit length) and the initial partition then places at most
//! `cycles_per_panel` oscillations in each panel.

use crate::error::{Error, Result};
use crate::numerics::sum::ComplexSum;
use num_complex::Complex64;
use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn rule(n: usize) -> &'static Rule {
    static R12: OnceLock<Rule> = OnceLock::new();
    static R24: OnceLock<Rule> = OnceLock::new();
    let cell = match n {
        12 => &R12,
        24 => &R24,
        _ => unreachable!("only the 12/24 pair is cached"),
    };
    cell.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(n);
        Rule { nodes, weights }
    })
}

/// Composite Gauss–Legendre nodes and weights on `[a, b]` with `panels` equal panels.
pub fn composite_rule(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let half = 0.5 * h;
        let mid = lo + half;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + half * xi, half * wi));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureReport {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
    /// Panels accepted because refinement stalled at the rounding floor.
    pub noise_limited: usize,
}

/// Configuration of the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Quadrature {
    /// Absolute tolerance on the whole interval.
    pub tol: f64,
    pub max_panels: usize,
    pub cycles_per_panel: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_panels: 4_000_000,
            cycles_per_panel: 2.0,
        }
    }
}

impl Quadrature {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Integrates a smooth integrand starting from a single panel.
    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Complex64,
    {
        self.run(a, b, vec![a, b], |x| Ok(f(x))).map(|r| r.value)
    }

    pub fn integrate_real<F>(&self, a: f64, b: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        self.run(a, b, vec![a, b], |x| Ok(Complex64::new(f(x), 0.0)))
            .map(|r| r.value.re)
    }

    /// Integrates `f` whose oscillation rate at `x` is roughly `freq(x)` cycles per unit.
    pub fn integrate_oscillatory<F, G>(&self, a: f64, b: f64, mut f: F, freq: G) -> Result<Complex64>
    where
        F: FnMut(f64) -> Complex64,
        G: Fn(f64) -> f64,
    {
        let breaks = self.breakpoints(a, b, &freq);
        self.run(a, b, breaks, |x| Ok(f(x))).map(|r| r.value)
    }

    /// Fallible integrand (used for nested integrals) with oscillation-aware partition.
    pub fn try_integrate<F, G>(&self, a: f64, b: f64, f: F, freq: G) -> Result<QuadratureReport>
    where
        F: FnMut(f64) -> Result<Complex64>,
        G: Fn(f64) -> f64,
    {
        let breaks = self.breakpoints(a, b, &freq);
        self.run(a, b, breaks, f)
    }

    fn breakpoints<G: Fn(f64) -> f64>(&self, a: f64, b: f64, freq: &G) -> Vec<f64> {
        let len = b - a;
        let mut pts = vec![a];
        let mut x = a;
        while x < b {
            let h = (self.cycles_per_panel / freq(x).abs().max(1e-300)).min(0.5 * len);
            let next = if x + h >= b - 1e-3 * h { b } else { x + h };
            pts.push(next);
            x = next;
            if pts.len() > self.max_panels {
                break;
            }
        }
        if *pts.last().unwrap() != b {
            pts.push(b);
        }
        pts
    }

    fn run<F>(&self, a: f64, b: f64, breaks: Vec<f64>, mut f: F) -> Result<QuadratureReport>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        if a == b {
            return Ok(QuadratureReport {
                value: Complex64::new(0.0, 0.0),
                error_estimate: 0.0,
                panels: 0,
                noise_limited: 0,
            });
        }
        if !(a < b) {
            return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
        }
        let r24 = rule(24);
        let r12 = rule(12);
        let total = b - a;
        let mut acc = ComplexSum::new();
        let mut err = 0.0;
        let mut panels = 0usize;
        let mut noise_limited = 0usize;
        let mut stack: Vec<(f64, f64, u32, f64)> = breaks
            .windows(2)
            .rev()
            .map(|w| (w[0], w[1], 0, f64::INFINITY))
            .collect();
        while let Some((lo, hi, depth, parent_err)) = stack.pop() {
            panels += 1;
            if panels > self.max_panels {
                return Err(Error::QuadratureBudget {
                    a,
                    b,
                    panels: self.max_panels,
                });
            }
            let half = 0.5 * (hi - lo);
            let mid = lo + half;
            let mut q24 = ComplexSum::new();
            let mut mass = 0.0;
            for (x, w) in r24.nodes.iter().zip(&r24.weights) {
                let v = f(mid + half * x)?;
                mass += w * v.norm();
                q24.add(v * *w);
            }
            let mut q12 = ComplexSum::new();
            for (x, w) in r12.nodes.iter().zip(&r12.weights) {
                q12.add(f(mid + half * x)? * *w);
            }
            let q24 = q24.value() * half;
            let q12 = q12.value() * half;
            let e = (q24 - q12).norm();
            let local_tol = (self.tol * (hi - lo) / total).max(1e-15 * q24.norm());
            let converged = e <= local_tol;
            // bisection no longer helps: the estimate is at the rounding floor
            let stalled = depth >= 2 && e > parent_err / 8.0 && e <= 1e-10 * mass * half;
            if converged || stalled || depth >= 60 || hi - lo <= 1e-14 * total {
                if !converged {
                    noise_limited += 1;
                }
                acc.add(q24);
                err += e;
                continue;
            }
            stack.push((mid, hi, depth + 1, e));
            stack.push((lo, mid, depth + 1, e));
        }
        Ok(QuadratureReport {
            value: acc.value(),
            error_estimate: err,
            panels,
            noise_limited,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for n in [1usize, 2, 5, 12, 24] {
            let (x, w) = gauss_legendre(n);
            let sw: f64 = w.iter().sum();
            assert!((sw - 2.0).abs() < 1e-14, "n={n}");
            // exact through degree 2n-1
            let deg = 2 * n - 2;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn smooth_and_oscillatory() {
        let q = Quadrature::with_tol(1e-13);
        let v = q.integrate_real(0.0, 1.0, |x| x.exp()).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        // int_0^1 e(200 x) x dx = 1/(2 pi i 200)
        let w = 200.0;
        let z = q
            .integrate_oscillatory(
                0.0,
                1.0,
                |x| crate::numerics::e(w * x) * x,
                |_| w,
            )
            .unwrap();
        let exact = Complex64::new(0.0, -1.0 / (std::f64::consts::TAU * w));
        assert!((z - exact).norm() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = Quadrature {
            tol: 1e-15,
            max_panels: 3,
            cycles_per_panel: 2.0,
        };
        let r = q.integrate_oscillatory(0.0, 1.0, |x| crate::numerics::e(1e4 * x), |_| 1e4);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }
}
