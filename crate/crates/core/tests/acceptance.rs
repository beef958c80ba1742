//! One line per acceptance criterion, run in order. Tolerances are pinned here
//! and do not read any configuration.

use gl2lab::calibration;
use gl2lab::decomp::{self, DecompConfig};
use gl2lab::deltasym::{delta_eval, weight_sum};
use gl2lab::forms::CuspForm;
use gl2lab::lcrit::{self, SweepPlan};
use gl2lab::numerics::{gcd, loglog_slope, Complex64};
use gl2lab::oscint;
use gl2lab::voronoi;
use gl2lab::windows::Window;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::process::Command;
use std::time::Instant;

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn report(lines: &mut Vec<Line>, id: u32, pass: bool, detail: String) {
    println!("{} criterion {id:>2}: {detail}", if pass { "PASS" } else { "FAIL" });
    lines.push(Line { id, pass, detail });
}

fn c1() -> (bool, String) {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for q in 1..=15 {
        for n in -50i64..=50 {
            worst = worst.max((delta_eval(n, q as f64).unwrap() - f64::from(n == 0)).abs());
        }
    }
    let mut wworst = 0.0f64;
    for q in 1..=50 {
        wworst = wworst.max((weight_sum(q as f64).unwrap() - 1.0).abs());
    }
    let secs = t0.elapsed().as_secs_f64();
    (
        worst <= 1e-9 && wworst <= 1e-12 && secs <= 2.0,
        format!("delta max residual {worst:.2e} (<= 1e-9), weight sum {wworst:.2e} (<= 1e-12), {secs:.2}s (<= 2s)"),
    )
}

fn c2() -> (bool, String) {
    let t0 = Instant::now();
    let form = CuspForm::delta(100_000).unwrap();
    let mut bad = 0;
    for m in 1..=10_000usize {
        for n in 1..=10_000 / m {
            if gcd(m as i64, n as i64) == 1 && form.tau(m).unwrap() * form.tau(n).unwrap() != form.tau(m * n).unwrap() {
                bad += 1;
            }
        }
    }
    let mut bad_rec = 0;
    for p in 2..=100usize {
        if !(2..p).all(|d| p % d != 0) {
            continue;
        }
        let p11 = (p as i128).pow(11);
        let (mut prev, mut cur) = (1usize, p);
        while cur * p <= 10_000 {
            let want = form.tau(p).unwrap() * form.tau(cur).unwrap() - p11 * form.tau(prev).unwrap();
            if want != form.tau(cur * p).unwrap() {
                bad_rec += 1;
            }
            (prev, cur) = (cur, cur * p);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    (
        bad == 0 && bad_rec == 0 && secs <= 5.0,
        format!("multiplicativity failures {bad}, recursion failures {bad_rec}, {secs:.2}s incl. generation to 1e5 (<= 5s)"),
    )
}

fn c3() -> (bool, String) {
    let form = CuspForm::delta(100_000).unwrap();
    let a: Vec<f64> = [1_000, 10_000, 100_000].iter().map(|&x| form.rankin_average(x).unwrap() / x as f64).collect();
    let band = a.iter().cloned().fold(f64::MIN, f64::max) / a.iter().cloned().fold(f64::MAX, f64::min);
    (
        band <= 1.5,
        format!("Rankin averages {:.5} {:.5} {:.5}, band {band:.4} (<= 1.5)", a[0], a[1], a[2]),
    )
}

fn c4() -> (bool, String) {
    let t0 = Instant::now();
    let form = CuspForm::delta(120_000).unwrap();
    let (mut worst, mut tail) = (0.0f64, 0.0f64);
    let mut cases = 0;
    for x in [10.0, 50.0] {
        let f = voronoi::scale_bump(x).unwrap();
        for q in 1..=3 {
            for r in voronoi::voronoi_check_all(&form, q, &f).unwrap() {
                worst = worst.max(r.rel_residual);
                tail = tail.max(r.tail_estimate);
                cases += 1;
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    (
        worst <= 1e-4 && tail <= 1e-8 && secs <= 60.0,
        format!("{cases} (q, a, X) cases, max rel residual {worst:.2e} (<= 1e-4), max tail {tail:.2e} (<= 1e-8), {secs:.1}s (<= 60s)"),
    )
}

fn c5() -> (bool, String) {
    let bs = [1e2, 1e3, 1e4];
    let mut errs = Vec::new();
    let mut worst = 0.0f64;
    for b in bs {
        let p = oscint::fresnel_profile(b);
        let o = oscint::oracle_quadrature(&p, 1e-13).unwrap();
        let m = oscint::second_branch_expand(&p).unwrap();
        let err = (o - m.main).norm();
        worst = worst.max(err / m.error_bound);
        errs.push(err);
    }
    let slope = loglog_slope(&bs, &errs);
    let c = calibration::STATIONARY.value;
    (
        worst <= c && (-1.8..=-1.2).contains(&slope),
        format!("max |oracle - main|/bound {worst:.4} (<= fitted {c}), slope {slope:.4} (in [-1.8, -1.2])"),
    )
}

fn c6() -> (bool, String) {
    let w = Window::make_bump(1.0, 2.0, false).unwrap();
    let mut worst = 0.0f64;
    for sigma in [0.5, 1.0] {
        for beta in [50.0, 100.0, 200.0, 400.0, 800.0] {
            let r = beta / (TAU * 1.5);
            let s = Complex64::new(sigma, beta);
            let (main, _) = oscint::w_dagger_main(&w, r, s).unwrap();
            let err = (oscint::w_dagger(&w, r, s).unwrap() - main).norm();
            worst = worst.max(err * beta.powf(1.5));
        }
    }
    let s = Complex64::new(1.0, 10.0);
    let mut decay = f64::INFINITY;
    for r in [5.0, 20.0, 50.0] {
        let a = oscint::w_dagger(&w, r, s).unwrap().norm();
        let b = oscint::w_dagger(&w, 10.0 * r, s).unwrap().norm();
        decay = decay.min(a / b);
    }
    let c = calibration::W_DAGGER.value;
    (
        worst <= c && decay >= 1e3,
        format!("max |W - main| beta^1.5 {worst:.2} (<= fitted {c}), min tenfold decay {decay:.3e} (>= 1e3)"),
    )
}

fn c7() -> (bool, String) {
    let v = Window::make_bump(1.0, 2.0, true).unwrap();
    let (n, k) = (10_000u64, 100.0);
    let near = oscint::conductor_kernel(n, n + 100, k, &v).unwrap().norm();
    let far = oscint::conductor_kernel(n, n + 400, k, &v).unwrap().norm();
    let diag = (oscint::conductor_kernel(n, n, k, &v).unwrap() - 1.0).norm();
    let ratio = far / near;
    (
        ratio <= 1e-3 && diag <= 1e-10,
        format!("|k(4N/K)|/|k(N/K)| = {ratio:.4} (<= 1e-3), |k(n,n) - 1| = {diag:.1e} (<= 1e-10)"),
    )
}

fn c8() -> (bool, String) {
    let cfg = DecompConfig::new(50.0, 8.0, 200.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for q in 1..=5i64 {
        let window: Vec<i64> = (cfg.q.floor() as i64 + 1..=(cfg.q + q as f64).floor() as i64)
            .filter(|&a| gcd(a, q) == 1)
            .collect();
        for _ in 0..10 {
            let a = window[rng.gen_range(0..window.len())];
            let x: f64 = rng.gen_range(0.0..1.0);
            let v: f64 = rng.gen_range(cfg.k..2.0 * cfg.k);
            worst = worst.max(decomp::poisson_dual_m_sum(&cfg, q, a, x, v).unwrap().residual);
        }
    }
    (worst <= 1e-3, format!("50 draws over q <= 5, max rel residual {worst:.2e} (<= 1e-3)"))
}

fn c9() -> (bool, String) {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0u64;
    for q in 1..=12i64 {
        for qq in 1..=12i64 {
            for a in (0..q).filter(|&a| gcd(a, q) == 1) {
                for aa in (0..qq).filter(|&aa| gcd(aa, qq) == 1) {
                    for n in 0..q * qq {
                        let z = decomp::character_sum(q, qq, a, aa, n).unwrap();
                        worst = worst.max((z - decomp::character_sum_closed(q, qq, a, aa, n)).norm());
                        cases += 1;
                    }
                }
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    (
        worst <= 1e-9 && secs <= 1.0,
        format!("{cases} cases, max residual {worst:.2e} (<= 1e-9), {secs:.2}s (<= 1s)"),
    )
}

fn c10() -> (bool, String) {
    let t0 = Instant::now();
    let form = CuspForm::delta(300).unwrap();
    let cfg = DecompConfig::new(60.0, 8.0, 100.0).unwrap().with_q((60.0f64 / 8.0).sqrt().ceil()).unwrap();
    let s = decomp::s_plus_minus(&form, &cfg).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    (
        s.rel_residual <= 1e-2 && secs <= 600.0,
        format!("Q = {}, {} frames, rel residual {:.2e} (<= 1e-2), {secs:.1}s (<= 600s)", cfg.q, s.frames, s.rel_residual),
    )
}

fn c11() -> (bool, String) {
    let mut cfg = DecompConfig::new(calibration::DESK_N, calibration::DESK_K, calibration::DESK_T)
        .unwrap()
        .with_q(calibration::DESK_Q)
        .unwrap();
    cfg.quad_tol = calibration::DESK_QUAD_TOL;
    let (mut worst, mut largest) = (0.0f64, 0.0f64);
    for q in [1i64, 2, 3] {
        for m in [-1i64, -5, -7] {
            for tau in [-10.0, 0.0, 10.0] {
                let s = decomp::i_star_star(&cfg, q, m, tau).unwrap();
                let one = decomp::i_one(&cfg, q, m, tau, calibration::C4).unwrap();
                let b = decomp::error_budget(&cfg, DecompConfig::dyadic_base(q), tau);
                worst = worst.max((s.value - one).norm() / b);
                largest = largest.max(s.value.norm());
            }
        }
    }
    let c = calibration::I_STAR_STAR.value;
    (
        worst <= c && largest <= 1.1,
        format!("max |I** - I1|/B {worst:.3} (<= fitted {c}), max |I**| {largest:.4} (<= 1.1)"),
    )
}

fn c12() -> (bool, String) {
    let form = CuspForm::delta(20_000).unwrap();
    let (mut oracle, mut sym) = (0.0f64, 0.0f64);
    for t in [10.0, 50.0, 100.0] {
        let l = lcrit::l_value_afe(&form, t, 1e-8).unwrap();
        let o = lcrit::l_value_oracle(&form, t).unwrap();
        let m = lcrit::l_value_afe(&form, -t, 1e-8).unwrap();
        oracle = oracle.max((l.value - o.value).norm());
        sym = sym.max((m.value - l.value.conj()).norm());
    }
    let sweep = lcrit::convexity_sweep(&form, &SweepPlan::linear(10.0, 200.0, 20).unwrap()).unwrap();
    let ratio = sweep.rows.iter().map(|r| r.convexity_ratio).fold(0.0, f64::max);
    (
        oracle <= 1e-6 && sym <= 1e-10 && ratio.is_finite(),
        format!(
            "max |afe - oracle| {oracle:.2e} (<= 1e-6), symmetry {sym:.2e} (<= 1e-10); \
             sweep t in [10, 200]: max |L|/t^1/2 {ratio:.3}, log-log fit {:.3} (recorded only)",
            sweep.exponent_fit
        ),
    )
}

fn csv_body(args: &[&str], threads: &str, csv: &str) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let runs = dir.path().join("runs");
    let status = Command::new(env!("CARGO_BIN_EXE_gl2lab"))
        .args(args)
        .args(["--threads", threads, "--out", out.to_str().unwrap(), "--runs", runs.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(status.status.success(), "{args:?}: {}", String::from_utf8_lossy(&status.stderr));
    std::fs::read(out.join(csv)).unwrap()
}

fn c13() -> (bool, String) {
    let cases: [(&[&str], &str); 3] = [
        (&["verify", "delta"], "verify-delta.csv"),
        (&["verify", "charsum"], "verify-charsum.csv"),
        (&["decompose"], "decompose.csv"),
    ];
    let mut same = Vec::new();
    for (args, csv) in cases {
        let a = csv_body(args, "1", csv);
        let b = csv_body(args, "8", csv);
        same.push(a == b && !a.is_empty());
    }
    (
        same.iter().all(|&s| s),
        format!("byte-identical CSV bodies at --threads 1 vs 8: delta {}, charsum {}, decompose {}", same[0], same[1], same[2]),
    )
}

#[test]
fn acceptance_criteria() {
    let checks: [(u32, fn() -> (bool, String)); 13] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
        (13, c13),
    ];
    println!();
    let mut lines = Vec::new();
    for (id, f) in checks {
        let (pass, detail) = f();
        report(&mut lines, id, pass, detail);
    }
    let failed: Vec<String> = lines.iter().filter(|l| !l.pass).map(|l| format!("{}: {}", l.id, l.detail)).collect();
    println!("{} of {} criteria pass", lines.len() - failed.len(), lines.len());
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.join("\n"));
}
