//! Fourier coefficients of the weight-12 level-1 cusp form Δ and their
//! normalized Hecke eigenvalues `λ(n) = τ(n) / n^{11/2}`.
//!
//! Coefficients come from the exact integer expansion of
//! `Δ = q ∏ (1 - q^n)^24`: the Euler product is the sparse pentagonal series,
//! and its 24th power is obtained with the power-series recurrence
//! `n g_n = Σ_{k=1}^n (25k - n) f_k g_{n-k}`.

use crate::error::{Error, Result};
use std::io::{BufRead, Write};

/// Default ceiling on the number of coefficients generated in one call.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// `τ(1..=n_max)`, exact.
pub fn generate_tau(n_max: usize) -> Result<Vec<i128>> {
    generate_tau_with_budget(n_max, DEFAULT_BUDGET)
}

pub fn generate_tau_with_budget(n_max: usize, budget: usize) -> Result<Vec<i128>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if n_max > budget {
        return Err(Error::ResourceLimit {
            requested: n_max,
            budget,
        });
    }
    let deg = n_max - 1;
    // (exponent, sign) of the nonzero terms of ∏(1 - q^n) up to `deg`
    let mut pent: Vec<(usize, i128)> = Vec::new();
    for m in 1i64.. {
        let e1 = (m * (3 * m - 1) / 2) as usize;
        if e1 > deg {
            break;
        }
        let s = if m % 2 == 0 { 1 } else { -1 };
        pent.push((e1, s));
        let e2 = (m * (3 * m + 1) / 2) as usize;
        if e2 <= deg {
            pent.push((e2, s));
        }
    }
    pent.sort_unstable();

    let mut g = vec![0i128; n_max];
    g[0] = 1;
    for n in 1..=deg {
        // Partial sums may leave the i128 range; the total n g_n does not,
        // so wrapping arithmetic is exact once the f64 shadow confirms that.
        let mut acc: i128 = 0;
        let mut shadow = 0.0f64;
        for &(k, s) in &pent {
            if k > n {
                break;
            }
            let coef = (25 * k as i128 - n as i128) * s;
            acc = acc.wrapping_add(coef.wrapping_mul(g[n - k]));
            shadow += coef as f64 * g[n - k] as f64;
        }
        if shadow.abs() > 1e37 {
            return Err(Error::Overflow { index: n + 1 });
        }
        debug_assert_eq!(acc % n as i128, 0);
        g[n] = acc / n as i128;
    }
    Ok(g)
}

/// A holomorphic cusp form of level 1 through its coefficient cache.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspForm {
    weight: u32,
    tau: Vec<i128>,
    lambda: Vec<f64>,
}

impl CuspForm {
    /// Δ with `n_max` coefficients.
    pub fn delta(n_max: usize) -> Result<Self> {
        Self::from_tau(12, generate_tau(n_max)?)
    }

    pub fn from_tau(weight: u32, tau: Vec<i128>) -> Result<Self> {
        if weight < 12 || weight % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "weight {weight} is not an even integer >= 12"
            )));
        }
        if tau.first() != Some(&1) {
            return Err(Error::InvalidArgument("coefficients must satisfy τ(1) = 1".into()));
        }
        let half = (weight as f64 - 1.0) / 2.0;
        let lambda = tau
            .iter()
            .enumerate()
            .map(|(i, &t)| t as f64 / ((i + 1) as f64).powf(half))
            .collect();
        Ok(Self { weight, tau, lambda })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn n_max(&self) -> usize {
        self.tau.len()
    }

    pub fn tau(&self, n: usize) -> Result<i128> {
        self.check(n)?;
        Ok(self.tau[n - 1])
    }

    pub fn lambda(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.lambda[n - 1])
    }

    /// `λ(1), λ(2), ...` as a slice; index `i` holds `λ(i + 1)`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    /// `Σ_{n ≤ x} λ(n)²`; divide by `x` for the average.
    pub fn rankin_average(&self, x: usize) -> Result<f64> {
        self.check(x)?;
        Ok(self.lambda[..x]
            .iter()
            .map(|l| l * l)
            .collect::<crate::numerics::CompensatedSum>()
            .value())
    }

    /// Largest `|λ(n)| / d(n)` over the cache (Deligne: at most 1).
    pub fn deligne_ratio(&self) -> f64 {
        self.lambda
            .iter()
            .enumerate()
            .map(|(i, l)| l.abs() / crate::numerics::divisor_count(i as u64 + 1) as f64)
            .fold(0.0, f64::max)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.tau.len() {
            return Err(Error::OutOfRange {
                index: n,
                n_max: self.tau.len(),
            });
        }
        Ok(())
    }

    /// Header `weight=<k> n_max=<N>` followed by one coefficient per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "weight={} n_max={}", self.weight, self.tau.len())?;
        for t in &self.tau {
            writeln!(w, "{t}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or(Error::Parse {
                line: 1,
                msg: "missing header".into(),
            })??;
        let (mut weight, mut n_max) = (None, None);
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("weight", v)) => weight = v.parse::<u32>().ok(),
                Some(("n_max", v)) => n_max = v.parse::<usize>().ok(),
                _ => {}
            }
        }
        let (Some(weight), Some(n_max)) = (weight, n_max) else {
            return Err(Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}"),
            });
        };
        let mut tau = Vec::with_capacity(n_max);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            tau.push(s.parse::<i128>().map_err(|e| Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            })?);
        }
        if tau.len() != n_max {
            return Err(Error::Parse {
                line: tau.len() + 1,
                msg: format!("expected {n_max} coefficients, found {}", tau.len()),
            });
        }
        Self::from_tau(weight, tau)
    }
}
