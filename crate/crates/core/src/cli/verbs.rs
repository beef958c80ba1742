use super::config::{ConfigError, Params};
use super::record::{Cell, Check, Table};
use crate::calibration;
use crate::decomp::{self, DecompConfig};
use crate::deltasym;
use crate::error::Error;
use crate::forms::CuspForm;
use crate::lcrit::{self, SweepPlan};
use crate::numerics::{gcd, loglog_slope, Complex64};
use crate::oscint;
use crate::voronoi;
use crate::windows::Window;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

#[derive(Debug, Default)]
pub struct Outcome {
    pub results: serde_json::Value,
    pub residuals: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    /// Extra `(file name, contents)` written next to the tables.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value);
    }
}

#[derive(Debug)]
pub enum VerbError {
    Usage(ConfigError),
    Compute(Error),
}

impl From<ConfigError> for VerbError {
    fn from(e: ConfigError) -> Self {
        VerbError::Usage(e)
    }
}

impl From<Error> for VerbError {
    fn from(e: Error) -> Self {
        VerbError::Compute(e)
    }
}

type VerbResult = Result<Outcome, VerbError>;

pub fn defaults(verb: &str) -> &'static [(&'static str, &'static str)] {
    match verb {
        "verify delta" => &[
            ("qmax", "15"),
            ("nmax", "50"),
            ("weight-qmax", "50"),
            ("tol", "1e-9"),
            ("weight-tol", "1e-12"),
        ],
        "verify hecke" => &[
            ("generate", "100000"),
            ("exact-max", "10000"),
            ("xs", "1000,10000,100000"),
            ("band", "1.5"),
        ],
        "verify voronoi" => &[
            ("qmax", "3"),
            ("scales", "10,50"),
            ("rel-tol", "1e-4"),
            ("tail-tol", "1e-8"),
            ("coefficients", "120000"),
        ],
        "verify stationary" => &[
            ("b-list", "100,1000,10000"),
            ("oracle-tol", "1e-13"),
            ("fitted", "0.05"),
            ("slope-min", "-1.8"),
            ("slope-max", "-1.2"),
        ],
        "verify wdagger" => &[
            ("betas", "50,100,200,400,800"),
            ("sigmas", "0.5,1"),
            ("x0", "1.5"),
            ("fitted", "30"),
            ("radii", "5,20,50"),
            ("off-beta", "10"),
            ("decay-min", "1000"),
        ],
        "verify conductor" => &[("N", "10000"), ("K", "100"), ("ratio-max", "1e-3"), ("diag-tol", "1e-10")],
        "verify poisson" => &[
            ("t", "200"),
            ("N", "50"),
            ("K", "8"),
            ("qmax", "5"),
            ("draws", "10"),
            ("seed", "1"),
            ("rel-tol", "1e-3"),
            ("quad-tol", "1e-11"),
        ],
        "verify charsum" => &[("max", "12"), ("tol", "1e-9")],
        "verify istar" => &[
            ("N", "20"),
            ("K", "5"),
            ("t", "200"),
            ("Q", "3"),
            ("quad-tol", "1e-9"),
            ("qs", "1,2,3"),
            ("ms", "-1,-5,-7"),
            ("taus", "-10,0,10"),
            ("fitted", "4"),
            ("c4-re", "44.8273881618"),
            ("c4-im", "44.1249386057"),
            ("trivial-max", "1.1"),
            ("epsilon", "0.02"),
        ],
        "eval-l" => &[
            ("t", "10,50,100"),
            ("precision", "1e-8"),
            ("oracle-tol", "1e-6"),
            ("symmetry-tol", "1e-10"),
            ("coefficients", "20000"),
        ],
        "sweep" => &[
            ("tmin", "10"),
            ("tmax", "200"),
            ("points", "20"),
            ("precision", "1e-8"),
            ("ratio-max", "1"),
            ("coefficients", "20000"),
            ("epsilon", "0.02"),
        ],
        "decompose" => &[
            ("N", "60"),
            ("K", "8"),
            ("t", "100"),
            ("Q", "auto"),
            ("rel-tol", "1e-2"),
            ("quad-tol", "1e-11"),
            ("epsilon", "0.02"),
        ],
        _ => &[],
    }
}

pub fn dispatch(verb: &str, p: &Params) -> VerbResult {
    match verb {
        "verify delta" => delta(p),
        "verify hecke" => hecke(p),
        "verify voronoi" => voronoi(p),
        "verify stationary" => stationary(p),
        "verify wdagger" => wdagger(p),
        "verify conductor" => conductor(p),
        "verify poisson" => poisson(p),
        "verify charsum" => charsum(p),
        "verify istar" => istar(p),
        "eval-l" => eval_l(p),
        "sweep" => sweep(p),
        "decompose" => decompose(p),
        other => Err(ConfigError(format!("unknown verb {other}")).into()),
    }
}

fn re_im(z: Complex64) -> [Cell; 2] {
    [Cell::Float(z.re), Cell::Float(z.im)]
}

fn delta(p: &Params) -> VerbResult {
    let (qmax, nmax) = (p.i64("qmax")?, p.i64("nmax")?);
    let (tol, weight_tol) = (p.f64("tol")?, p.f64("weight-tol")?);
    let weight_qmax = p.i64("weight-qmax")?;
    let mut out = Outcome::default();
    let mut table = Table::new("verify-delta", &["Q", "n", "delta", "residual"]);
    let mut worst = 0.0f64;
    for q in 1..=qmax {
        for n in -nmax..=nmax {
            let d = deltasym::delta_eval(n, q as f64)?;
            let r = (d - f64::from(n == 0)).abs();
            worst = worst.max(r);
            table.push(vec![q.into(), n.into(), d.into(), r.into()]);
        }
    }
    let mut weight_worst = 0.0f64;
    for q in 1..=weight_qmax {
        weight_worst = weight_worst.max((deltasym::weight_sum(q as f64)? - 1.0).abs());
    }
    out.residual("delta_max_residual", worst);
    out.residual("weight_sum_max_residual", weight_worst);
    out.checks.push(Check::at_most("delta_max_residual", worst, tol));
    out.checks.push(Check::at_most("weight_sum_max_residual", weight_worst, weight_tol));
    out.results = json!({ "rows": table.rows.len() });
    out.tables.push(table);
    Ok(out)
}

fn hecke(p: &Params) -> VerbResult {
    let generate = p.usize("generate")?;
    let exact_max = p.usize("exact-max")?;
    let xs: Vec<usize> = p.f64_list("xs")?.into_iter().map(|x| x as usize).collect();
    let band = p.f64("band")?;
    let form = CuspForm::delta(generate.max(exact_max))?;
    let mut out = Outcome::default();

    let mut checked = 0u64;
    let mut failures = 0u64;
    for m in 1..=exact_max {
        for n in 1..=exact_max / m {
            if gcd(m as i64, n as i64) == 1 {
                checked += 1;
                if form.tau(m)? * form.tau(n)? != form.tau(m * n)? {
                    failures += 1;
                }
            }
        }
    }
    let mut rec_checked = 0u64;
    let mut rec_failures = 0u64;
    for pr in (2..=exact_max).filter(|&n| is_prime(n)) {
        let pp = (pr as i128).pow(11);
        let (mut prev, mut cur) = (1usize, pr);
        while cur.checked_mul(pr).is_some_and(|x| x <= exact_max) {
            let next = cur * pr;
            let want = form.tau(pr)? * form.tau(cur)? - pp * form.tau(prev)?;
            rec_checked += 1;
            if want != form.tau(next)? {
                rec_failures += 1;
            }
            (prev, cur) = (cur, next);
        }
    }

    let mut table = Table::new("verify-hecke", &["x", "rankin_average"]);
    let mut avgs = Vec::new();
    for &x in &xs {
        let a = form.rankin_average(x)? / x as f64;
        avgs.push(a);
        table.push(vec![Cell::Int(x as i64), a.into()]);
    }
    let hi = avgs.iter().cloned().fold(f64::MIN, f64::max);
    let lo = avgs.iter().cloned().fold(f64::MAX, f64::min);
    out.residual("multiplicativity_failures", failures as f64);
    out.residual("recursion_failures", rec_failures as f64);
    out.residual("rankin_band", hi / lo);
    out.checks.push(Check::at_most("multiplicativity_failures", failures as f64, 0.0));
    out.checks.push(Check::at_most("recursion_failures", rec_failures as f64, 0.0));
    out.checks.push(Check::at_most("rankin_band", hi / lo, band));
    out.results = json!({
        "coprime_pairs": checked,
        "recursion_steps": rec_checked,
        "rankin_averages": avgs,
        "deligne_ratio": form.deligne_ratio(),
    });
    out.tables.push(table);
    Ok(out)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn voronoi(p: &Params) -> VerbResult {
    let qmax = p.i64("qmax")?;
    let scales = p.f64_list("scales")?;
    let (rel_tol, tail_tol) = (p.f64("rel-tol")?, p.f64("tail-tol")?);
    let form = CuspForm::delta(p.usize("coefficients")?)?;
    let mut out = Outcome::default();
    let mut table = Table::new(
        "verify-voronoi",
        &[
            "X", "q", "a", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "rel_residual", "tail_estimate",
            "quadrature_error", "n_cut",
        ],
    );
    let (mut worst, mut worst_tail) = (0.0f64, 0.0f64);
    let mut reports = Vec::new();
    for &x in &scales {
        let f = voronoi::scale_bump(x)?;
        for q in 1..=qmax {
            for r in voronoi::voronoi_check_all_with(&form, q, &f, tail_tol)? {
                worst = worst.max(r.rel_residual);
                worst_tail = worst_tail.max(r.tail_estimate);
                let mut row = vec![x.into(), r.q.into(), r.a.into()];
                row.extend(re_im(r.lhs));
                row.extend(re_im(r.rhs));
                row.extend([
                    r.rel_residual.into(),
                    r.tail_estimate.into(),
                    r.quadrature_error.into(),
                    Cell::Int(r.n_cut as i64),
                ]);
                table.push(row);
                reports.push(r);
            }
        }
    }
    out.residual("max_rel_residual", worst);
    out.residual("max_tail_estimate", worst_tail);
    out.checks.push(Check::at_most("max_rel_residual", worst, rel_tol));
    out.checks.push(Check::at_most("max_tail_estimate", worst_tail, tail_tol));
    out.results = serde_json::to_value(&reports).unwrap_or_default();
    out.tables.push(table);
    Ok(out)
}

fn stationary(p: &Params) -> VerbResult {
    let bs = p.f64_list("b-list")?;
    let oracle_tol = p.f64("oracle-tol")?;
    let fitted = p.f64("fitted")?;
    let (slope_min, slope_max) = (p.f64("slope-min")?, p.f64("slope-max")?);
    let mut out = Outcome::default();
    let mut table = Table::new("verify-stationary", &["B", "abs_error", "error_bound", "ratio"]);
    let rows: Vec<(f64, f64, f64)> = bs
        .par_iter()
        .map(|&b| {
            let prof = oscint::fresnel_profile(b);
            let oracle = oscint::oracle_quadrature(&prof, oracle_tol)?;
            let exp = oscint::second_branch_expand(&prof)?;
            Ok(((oracle - exp.main).norm(), exp.error_bound, b))
        })
        .collect::<Result<_, Error>>()?;
    let mut worst = 0.0f64;
    for &(err, bound, b) in &rows {
        worst = worst.max(err / bound);
        table.push(vec![b.into(), err.into(), bound.into(), (err / bound).into()]);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let slope = if bs.len() >= 2 { loglog_slope(&bs, &errs) } else { f64::NAN };
    out.residual("max_ratio", worst);
    out.residual("loglog_slope", slope);
    out.checks.push(Check::at_most("max_ratio", worst, fitted));
    out.checks.push(Check::at_least("loglog_slope", slope, slope_min));
    out.checks.push(Check::at_most("loglog_slope", slope, slope_max));
    out.results = json!({ "calibration_point": calibration::STATIONARY.point });
    out.tables.push(table);
    Ok(out)
}

fn wdagger(p: &Params) -> VerbResult {
    let betas = p.f64_list("betas")?;
    let sigmas = p.f64_list("sigmas")?;
    let x0 = p.f64("x0")?;
    let fitted = p.f64("fitted")?;
    let radii = p.f64_list("radii")?;
    let off_beta = p.f64("off-beta")?;
    let decay_min = p.f64("decay-min")?;
    let w = Window::make_bump(1.0, 2.0, false)?;
    let mut out = Outcome::default();

    let mut grid = Vec::new();
    for &sigma in &sigmas {
        for &beta in &betas {
            grid.push((sigma, beta));
        }
    }
    let rows: Vec<(f64, f64, f64, f64)> = grid
        .par_iter()
        .map(|&(sigma, beta)| {
            let r = beta / (TAU * x0);
            let s = Complex64::new(sigma, beta);
            let (main, _) = oscint::w_dagger_main(&w, r, s)?;
            let err = (oscint::w_dagger(&w, r, s)? - main).norm();
            Ok((sigma, beta, r, err))
        })
        .collect::<Result<_, Error>>()?;
    let mut table = Table::new("verify-wdagger", &["sigma", "beta", "r", "abs_error", "scaled_error"]);
    let mut worst = 0.0f64;
    for &(sigma, beta, r, err) in &rows {
        let scaled = err * beta.powf(1.5);
        worst = worst.max(scaled);
        table.push(vec![sigma.into(), beta.into(), r.into(), err.into(), scaled.into()]);
    }

    let mut decay_table = Table::new("verify-wdagger-decay", &["r", "abs_w", "abs_w_tenfold", "decay"]);
    let s = Complex64::new(1.0, off_beta);
    let mut weakest = f64::INFINITY;
    for &r in &radii {
        let (lo, hi) = w.support();
        let x = off_beta / (TAU * r);
        if (lo..=hi).contains(&x) {
            return Err(ConfigError(format!("radius {r} puts the stationary point {x} inside the support")).into());
        }
        let a = oscint::w_dagger(&w, r, s)?.norm();
        let b = oscint::w_dagger(&w, 10.0 * r, s)?.norm();
        weakest = weakest.min(a / b);
        decay_table.push(vec![r.into(), a.into(), b.into(), (a / b).into()]);
    }
    out.residual("max_scaled_error", worst);
    out.residual("min_decay", weakest);
    out.checks.push(Check::at_most("max_scaled_error", worst, fitted));
    out.checks.push(Check::at_least("min_decay", weakest, decay_min));
    out.results = json!({ "calibration_point": calibration::W_DAGGER.point });
    out.tables.push(table);
    out.tables.push(decay_table);
    Ok(out)
}

fn conductor(p: &Params) -> VerbResult {
    let (n, k) = (p.u64("N")?, p.f64("K")?);
    let (ratio_max, diag_tol) = (p.f64("ratio-max")?, p.f64("diag-tol")?);
    let v = Window::make_bump(1.0, 2.0, true)?;
    let mut out = Outcome::default();
    let unit = (n as f64 / k).round() as u64;
    let mut table = Table::new("verify-conductor", &["separation", "re_kernel", "im_kernel", "abs_kernel"]);
    let mut at = BTreeMap::new();
    for mult in [0u64, 1, 2, 4, 8, 16] {
        let z = oscint::conductor_kernel(n, n + mult * unit, k, &v)?;
        at.insert(mult, z);
        let mut row = vec![Cell::Int((mult * unit) as i64)];
        row.extend(re_im(z));
        row.push(z.norm().into());
        table.push(row);
    }
    let diag = (at[&0] - 1.0).norm();
    let ratio = at[&4].norm() / at[&1].norm();
    out.residual("diagonal_deviation", diag);
    out.residual("separation_ratio", ratio);
    out.checks.push(Check::at_most("diagonal_deviation", diag, diag_tol));
    out.checks.push(Check::at_most("separation_ratio", ratio, ratio_max));
    out.results = json!({ "unit_separation": unit });
    out.tables.push(table);
    Ok(out)
}

fn poisson(p: &Params) -> VerbResult {
    let mut cfg = DecompConfig::new(p.f64("N")?, p.f64("K")?, p.f64("t")?)?;
    cfg.quad_tol = p.f64("quad-tol")?;
    let qmax = p.i64("qmax")?;
    let draws = p.usize("draws")?;
    let rel_tol = p.f64("rel-tol")?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.u64("seed")?);
    let mut cases = Vec::new();
    for q in 1..=qmax {
        let window: Vec<i64> = (cfg.q.floor() as i64 + 1..=(cfg.q + q as f64).floor() as i64)
            .filter(|&a| gcd(a, q) == 1)
            .collect();
        for _ in 0..draws {
            let a = window[rng.gen_range(0..window.len())];
            let x: f64 = rng.gen_range(0.0..1.0);
            let v: f64 = rng.gen_range(cfg.k..2.0 * cfg.k);
            cases.push((q, a, x, v));
        }
    }
    let reports: Vec<decomp::PoissonReport> = cases
        .iter()
        .map(|&(q, a, x, v)| decomp::poisson_dual_m_sum(&cfg, q, a, x, v))
        .collect::<Result<_, Error>>()?;
    let mut table = Table::new(
        "verify-poisson",
        &["q", "a", "x", "v", "re_direct", "im_direct", "re_dual", "im_dual", "rel_residual", "m_cut"],
    );
    let mut worst = 0.0f64;
    for r in &reports {
        worst = worst.max(r.residual);
        let mut row = vec![r.q.into(), r.a.into(), r.x.into(), r.v.into()];
        row.extend(re_im(r.direct));
        row.extend(re_im(r.dual));
        row.extend([Cell::from(r.residual), Cell::from(r.m_cut)]);
        table.push(row);
    }
    let mut out = Outcome::default();
    out.residual("max_rel_residual", worst);
    out.checks.push(Check::at_most("max_rel_residual", worst, rel_tol));
    out.results = json!({ "Q": cfg.q, "cases": reports.len() });
    out.tables.push(table);
    Ok(out)
}

fn charsum(p: &Params) -> VerbResult {
    let max = p.i64("max")?;
    let tol = p.f64("tol")?;
    let pairs: Vec<(i64, i64)> = (1..=max).flat_map(|q| (1..=max).map(move |qq| (q, qq))).collect();
    let rows: Vec<(i64, i64, i64, f64)> = pairs
        .par_iter()
        .map(|&(q, qq)| {
            let m = q * qq;
            let (mut cases, mut worst) = (0i64, 0.0f64);
            for a in (0..q).filter(|&a| gcd(a, q) == 1) {
                for aa in (0..qq).filter(|&aa| gcd(aa, qq) == 1) {
                    for n in 0..m {
                        let z = decomp::character_sum(q, qq, a, aa, n)?;
                        let want = decomp::character_sum_closed(q, qq, a, aa, n);
                        worst = worst.max((z - want).norm());
                        cases += 1;
                    }
                }
            }
            Ok((q, qq, cases, worst))
        })
        .collect::<Result<_, Error>>()?;
    let mut table = Table::new("verify-charsum", &["q", "q_prime", "cases", "max_residual"]);
    let mut worst = 0.0f64;
    let mut total = 0i64;
    for &(q, qq, cases, r) in &rows {
        worst = worst.max(r);
        total += cases;
        table.push(vec![q.into(), qq.into(), cases.into(), r.into()]);
    }
    let mut out = Outcome::default();
    out.residual("max_residual", worst);
    out.checks.push(Check::at_most("max_residual", worst, tol));
    out.results = json!({ "cases": total });
    out.tables.push(table);
    Ok(out)
}

fn istar(p: &Params) -> VerbResult {
    let mut cfg = DecompConfig::new(p.f64("N")?, p.f64("K")?, p.f64("t")?)?.with_q(p.f64("Q")?)?;
    cfg.quad_tol = p.f64("quad-tol")?;
    cfg.epsilon = p.f64("epsilon")?;
    let (qs, ms, taus) = (p.i64_list("qs")?, p.i64_list("ms")?, p.f64_list("taus")?);
    let fitted = p.f64("fitted")?;
    let c4 = Complex64::new(p.f64("c4-re")?, p.f64("c4-im")?);
    let trivial_max = p.f64("trivial-max")?;
    let mut table = Table::new(
        "verify-istar",
        &[
            "q", "m", "tau", "a", "re_istar", "im_istar", "re_ione", "im_ione", "budget", "ratio",
        ],
    );
    let (mut worst, mut largest) = (0.0f64, 0.0f64);
    for &q in &qs {
        for &m in &ms {
            for &tau in &taus {
                let s = decomp::i_star_star(&cfg, q, m, tau)?;
                let one = decomp::i_one(&cfg, q, m, tau, c4)?;
                let b = decomp::error_budget(&cfg, DecompConfig::dyadic_base(q), tau);
                let ratio = (s.value - one).norm() / b;
                worst = worst.max(ratio);
                largest = largest.max(s.value.norm());
                let mut row = vec![q.into(), m.into(), tau.into(), s.a.into()];
                row.extend(re_im(s.value));
                row.extend(re_im(one));
                row.extend([Cell::from(b), Cell::from(ratio)]);
                table.push(row);
            }
        }
    }
    let mut out = Outcome::default();
    out.residual("max_budget_ratio", worst);
    out.residual("max_abs_istar", largest);
    out.checks.push(Check::at_most("max_budget_ratio", worst, fitted));
    out.checks.push(Check::at_most("max_abs_istar", largest, trivial_max));
    out.results = json!({ "c4_point": calibration::C4_POINT, "fit_point": calibration::I_STAR_STAR.point });
    out.tables.push(table);
    Ok(out)
}

const L_HEADER: &[&str] = &["t", "re_L", "im_L", "abs_L", "convexity_ratio"];

fn eval_l(p: &Params) -> VerbResult {
    let ts = p.f64_list("t")?;
    let precision = p.f64("precision")?;
    let (oracle_tol, symmetry_tol) = (p.f64("oracle-tol")?, p.f64("symmetry-tol")?);
    let form = CuspForm::delta(p.usize("coefficients")?)?;
    let mut table = Table::new("eval-l", L_HEADER);
    let (mut worst_oracle, mut worst_sym) = (0.0f64, 0.0f64);
    let mut details = Vec::new();
    for &t in &ts {
        let l = lcrit::l_value_afe(&form, t, precision)?;
        let mirror = lcrit::l_value_afe(&form, -t, precision)?;
        let sym = (mirror.value - l.value.conj()).norm();
        worst_sym = worst_sym.max(sym);
        let oracle_diff = if t.abs() <= lcrit::ORACLE_T_MAX {
            let o = lcrit::l_value_oracle(&form, t)?;
            let d = (o.value - l.value).norm();
            worst_oracle = worst_oracle.max(d);
            Some(d)
        } else {
            None
        };
        table.push(vec![
            t.into(),
            l.value.re.into(),
            l.value.im.into(),
            l.value.norm().into(),
            (l.value.norm() / t.abs().sqrt()).into(),
        ]);
        details.push(json!({
            "t": t, "terms": l.terms, "truncation_bound": l.truncation_bound,
            "quadrature_error": l.quadrature_error, "oracle_diff": oracle_diff, "symmetry": sym,
        }));
    }
    let mut out = Outcome::default();
    out.residual("max_oracle_diff", worst_oracle);
    out.residual("max_symmetry_residual", worst_sym);
    out.checks.push(Check::at_most("max_oracle_diff", worst_oracle, oracle_tol));
    out.checks.push(Check::at_most("max_symmetry_residual", worst_sym, symmetry_tol));
    out.results = json!(details);
    out.tables.push(table);
    Ok(out)
}

fn sweep(p: &Params) -> VerbResult {
    let mut plan = SweepPlan::linear(p.f64("tmin")?, p.f64("tmax")?, p.usize("points")?)?;
    plan.precision = p.f64("precision")?;
    plan.epsilon = p.f64("epsilon")?;
    let ratio_max = p.f64("ratio-max")?;
    let form = CuspForm::delta(p.usize("coefficients")?)?;
    let sweep = lcrit::convexity_sweep(&form, &plan)?;
    let mut table = Table::new("sweep", L_HEADER);
    let mut worst = 0.0f64;
    for r in &sweep.rows {
        worst = worst.max(r.convexity_ratio);
        table.push(vec![
            r.t.into(),
            r.l.re.into(),
            r.l.im.into(),
            r.abs_l.into(),
            r.convexity_ratio.into(),
        ]);
    }
    let script = "set datafile separator ','\n\
                  set key autotitle columnhead\n\
                  set xlabel 't'\n\
                  set ylabel '|L(1/2+it)| / t^(1/2)'\n\
                  plot 'sweep.csv' using 1:5 with linespoints title 'convexity ratio'\n";
    let mut out = Outcome::default();
    out.residual("max_convexity_ratio", worst);
    out.residual("exponent_fit", sweep.exponent_fit);
    out.checks.push(Check::at_most("max_convexity_ratio", worst, ratio_max));
    out.results = serde_json::to_value(&sweep).unwrap_or_default();
    out.tables.push(table);
    out.files.push(("sweep.gp".into(), script.into()));
    Ok(out)
}

fn decompose(p: &Params) -> VerbResult {
    let (n, k, t) = (p.f64("N")?, p.f64("K")?, p.f64("t")?);
    let mut cfg = DecompConfig::new(n, k, t)?;
    let q = match p.str("Q")? {
        "auto" => (n / k).sqrt().ceil(),
        _ => p.f64("Q")?,
    };
    cfg = cfg.with_q(q)?;
    cfg.quad_tol = p.f64("quad-tol")?;
    cfg.epsilon = p.f64("epsilon")?;
    let rel_tol = p.f64("rel-tol")?;
    let form = CuspForm::delta((3.0 * n).ceil() as usize + 10)?;
    let s = decomp::s_plus_minus(&form, &cfg)?;
    let mut table = Table::new(
        "decompose",
        &[
            "N", "K", "t", "Q", "frames", "re_s_direct", "im_s_direct", "re_s_plus", "im_s_plus",
            "re_s_minus", "im_s_minus", "rel_residual",
        ],
    );
    let mut row = vec![n.into(), k.into(), t.into(), q.into(), Cell::Int(s.frames as i64)];
    row.extend(re_im(s.s_direct));
    row.extend(re_im(s.s_plus));
    row.extend(re_im(s.s_minus));
    row.push(s.rel_residual.into());
    table.push(row);
    let mut out = Outcome::default();
    out.residual("rel_residual", s.rel_residual);
    out.checks.push(Check::at_most("rel_residual", s.rel_residual, rel_tol));
    out.results = serde_json::to_value(&s).unwrap_or_default();
    out.tables.push(table);
    Ok(out)
}
