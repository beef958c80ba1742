//! The `gl2lab` command line: verbs, parameter resolution and run persistence.
//!
//! Every verb writes its tables under `--out` (default `out/`) and appends a
//! [`RunRecord`] to `--runs` (default `runs/`). Exit status is 0 when every
//! check passes, 1 when a check fails or a computation errors, 2 on usage or
//! configuration errors.

pub mod config;
pub mod record;
mod verbs;

use clap::{Args, Parser, Subcommand};
use config::{ConfigError, Params};
use record::{Check, RunRecord};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use verbs::Outcome;

macro_rules! verb_args {
    ($name:ident { $($field:ident : $key:literal => $help:literal),* $(,)? }) => {
        #[derive(Args, Debug, Clone, Default)]
        pub struct $name {
            $(
                #[arg(long = $key, help = $help, allow_hyphen_values = true)]
                pub $field: Option<String>,
            )*
        }

        impl $name {
            fn flags(&self) -> Vec<(&'static str, Option<String>)> {
                vec![$(($key, self.$field.clone())),*]
            }
        }
    };
}

verb_args!(DeltaArgs {
    qmax: "qmax" => "largest Q",
    nmax: "nmax" => "check n in [-nmax, nmax]",
    weight_qmax: "weight-qmax" => "largest Q for the weight sum",
    tol: "tol" => "tolerance on |delta - [n=0]|",
    weight_tol: "weight-tol" => "tolerance on |weight_sum - 1|",
});

verb_args!(HeckeArgs {
    generate: "generate" => "coefficients to generate",
    exact_max: "exact-max" => "bound on mn and p^(r+1)",
    xs: "xs" => "cut-offs for the Rankin averages",
    band: "band" => "allowed max/min ratio of the averages",
});

verb_args!(VoronoiArgs {
    qmax: "qmax" => "largest modulus",
    scales: "scales" => "bump scales X (F supported on [X, 2X])",
    rel_tol: "rel-tol" => "relative residual tolerance",
    tail_tol: "tail-tol" => "dual-sum truncation tolerance",
    coefficients: "coefficients" => "coefficients to generate",
});

verb_args!(StationaryArgs {
    b_list: "b-list" => "Fresnel parameters B",
    oracle_tol: "oracle-tol" => "oracle quadrature tolerance",
    fitted: "fitted" => "frozen constant on |oracle - main| / error_bound",
    slope_min: "slope-min" => "lower end of the log-log slope window",
    slope_max: "slope-max" => "upper end of the log-log slope window",
});

verb_args!(WDaggerArgs {
    betas: "betas" => "imaginary parts of s",
    sigmas: "sigmas" => "real parts of s",
    x0: "x0" => "stationary point",
    fitted: "fitted" => "frozen constant on |W - main| beta^(3/2)",
    radii: "radii" => "r values for the non-stationary decay (each also at 10r)",
    off_beta: "off-beta" => "beta for the non-stationary decay",
    decay_min: "decay-min" => "required |W(r)| / |W(10r)|",
});

verb_args!(ConductorArgs {
    n: "N" => "size of n",
    k: "K" => "length of the v-integral",
    ratio_max: "ratio-max" => "allowed |k(4N/K)| / |k(N/K)|",
    diag_tol: "diag-tol" => "tolerance on |k(n, n) - 1|",
});

verb_args!(PoissonArgs {
    t: "t" => "height",
    n: "N" => "size of the m-sum",
    k: "K" => "conductor-lowering length",
    qmax: "qmax" => "largest modulus",
    draws: "draws" => "random (a, x, v) per modulus",
    seed: "seed" => "RNG seed",
    rel_tol: "rel-tol" => "relative residual tolerance",
    quad_tol: "quad-tol" => "inner quadrature tolerance",
});

verb_args!(CharsumArgs {
    max: "max" => "largest q and q'",
    tol: "tol" => "complex residual tolerance",
});

verb_args!(IStarArgs {
    n: "N" => "size of n",
    k: "K" => "conductor-lowering length",
    t: "t" => "height",
    q: "Q" => "dissection parameter",
    quad_tol: "quad-tol" => "inner quadrature tolerance",
    qs: "qs" => "moduli q",
    ms: "ms" => "dual indices m",
    taus: "taus" => "tau values",
    fitted: "fitted" => "frozen constant on |I** - I1| / B(C, tau)",
    c4_re: "c4-re" => "real part of the frozen c4",
    c4_im: "c4-im" => "imaginary part of the frozen c4",
    trivial_max: "trivial-max" => "bound on |I**|",
});

verb_args!(EvalLArgs {
    t: "t" => "heights (comma separated)",
    precision: "precision" => "approximate functional equation precision",
    oracle_tol: "oracle-tol" => "tolerance against the oracle",
    symmetry_tol: "symmetry-tol" => "tolerance on |L(1/2-it) - conj L(1/2+it)|",
    coefficients: "coefficients" => "coefficients to generate",
});

verb_args!(SweepArgs {
    tmin: "tmin" => "first height",
    tmax: "tmax" => "last height",
    points: "points" => "grid points",
    precision: "precision" => "approximate functional equation precision",
    ratio_max: "ratio-max" => "bound on |L| / t^(1/2)",
    coefficients: "coefficients" => "coefficients to generate",
});

verb_args!(DecomposeArgs {
    n: "N" => "size of n",
    k: "K" => "conductor-lowering length",
    t: "t" => "height",
    q: "Q" => "dissection parameter, or auto for ceil((N/K)^(1/2))",
    rel_tol: "rel-tol" => "tolerance on |S - (S+ + S-)| / |S|",
    quad_tol: "quad-tol" => "inner quadrature tolerance",
});

#[derive(Parser, Debug)]
#[command(name = "gl2lab", version, about = "Numerical checks for the delta-symbol method on GL(2)")]
pub struct Cli {
    /// Config file, key=value lines or a flat JSON object.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<String>,
    /// Output directory for tables.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Directory for run records.
    #[arg(long, global = true)]
    pub runs: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Identity and lemma checks.
    #[command(subcommand)]
    Verify(Verify),
    /// L(1/2 + it) against the oracle, with conjugate symmetry.
    EvalL(EvalLArgs),
    /// |L(1/2 + it)| / t^(1/2) and sup_N |S(N)| / N^(1/2) over a t-grid.
    Sweep(SweepArgs),
    /// S(N) against S+(N) + S-(N).
    Decompose(DecomposeArgs),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Kloosterman's delta identity and the weight sum.
    Delta(DeltaArgs),
    /// Hecke relations and Rankin averages of tau.
    Hecke(HeckeArgs),
    /// Voronoi summation for tau.
    Voronoi(VoronoiArgs),
    /// Second-derivative stationary phase on the Fresnel profile.
    Stationary(StationaryArgs),
    /// Leading term of W(r, s) and its non-stationary decay.
    Wdagger(WDaggerArgs),
    /// The conductor-lowering kernel.
    Conductor(ConductorArgs),
    /// Poisson summation of the m-sum.
    Poisson(PoissonArgs),
    /// The complete character sum.
    Charsum(CharsumArgs),
    /// I** against its main term.
    Istar(IStarArgs),
}

const COMMON: &[(&str, &str)] = &[("threads", "1"), ("out", "out"), ("runs", "runs")];

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify(v) => match v {
                Verify::Delta(_) => "verify delta",
                Verify::Hecke(_) => "verify hecke",
                Verify::Voronoi(_) => "verify voronoi",
                Verify::Stationary(_) => "verify stationary",
                Verify::Wdagger(_) => "verify wdagger",
                Verify::Conductor(_) => "verify conductor",
                Verify::Poisson(_) => "verify poisson",
                Verify::Charsum(_) => "verify charsum",
                Verify::Istar(_) => "verify istar",
            },
            Command::EvalL(_) => "eval-l",
            Command::Sweep(_) => "sweep",
            Command::Decompose(_) => "decompose",
        }
    }

    fn flags(&self) -> Vec<(&'static str, Option<String>)> {
        match self {
            Command::Verify(v) => match v {
                Verify::Delta(a) => a.flags(),
                Verify::Hecke(a) => a.flags(),
                Verify::Voronoi(a) => a.flags(),
                Verify::Stationary(a) => a.flags(),
                Verify::Wdagger(a) => a.flags(),
                Verify::Conductor(a) => a.flags(),
                Verify::Poisson(a) => a.flags(),
                Verify::Charsum(a) => a.flags(),
                Verify::Istar(a) => a.flags(),
            },
            Command::EvalL(a) => a.flags(),
            Command::Sweep(a) => a.flags(),
            Command::Decompose(a) => a.flags(),
        }
    }
}

/// Parse `argv` (program name first), run the verb and return the exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<i32, ConfigError> {
    let name = cli.command.name();
    let mut defaults: Vec<(&str, &str)> = COMMON.to_vec();
    defaults.extend_from_slice(verbs::defaults(name));
    let file = match &cli.config {
        Some(p) => config::load_config(p)?,
        None => BTreeMap::new(),
    };
    let mut flags = cli.command.flags();
    flags.push(("threads", cli.threads.clone()));
    flags.push(("out", cli.out.clone()));
    flags.push(("runs", cli.runs.clone()));
    flags.push(("epsilon", cli.epsilon.clone()));
    let params = Params::resolve(&defaults, &file, |k| std::env::var(k).ok(), &flags);
    for w in &params.warnings {
        eprintln!("warning: {w}");
    }
    let threads = params.usize("threads")?;
    if threads == 0 {
        return Err(ConfigError("threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError(format!("thread pool: {e}")))?;

    let started_at = chrono::Utc::now().to_rfc3339();
    let clock = Instant::now();
    let outcome = pool.install(|| verbs::dispatch(name, &params));
    let duration_s = clock.elapsed().as_secs_f64();

    let (outcome, error) = match outcome {
        Ok(o) => (o, None),
        Err(verbs::VerbError::Usage(e)) => return Err(e),
        Err(verbs::VerbError::Compute(e)) => (Outcome::default(), Some(e.to_string())),
    };

    let out_dir = PathBuf::from(params.str("out")?);
    let mut outputs = Vec::new();
    let mut io_error = None;
    for table in &outcome.tables {
        match record::write_file(&out_dir, &format!("{}.csv", table.name), &table.render()) {
            Ok(p) => outputs.push(p.display().to_string()),
            Err(e) => io_error = Some(format!("writing {}: {e}", table.name)),
        }
    }
    for (file_name, body) in &outcome.files {
        match record::write_file(&out_dir, file_name, body) {
            Ok(p) => outputs.push(p.display().to_string()),
            Err(e) => io_error = Some(format!("writing {file_name}: {e}")),
        }
    }
    let error = error.or(io_error);

    let passed = error.is_none() && outcome.checks.iter().all(Check::passed);
    let record = RunRecord {
        command: name.to_string(),
        argv: argv.to_vec(),
        config_snapshot: params.snapshot().clone(),
        ignored_keys: params.ignored.clone(),
        warnings: params.warnings.clone(),
        results: outcome.results,
        residuals: outcome.residuals,
        checks: outcome.checks.clone(),
        passed,
        error: error.clone(),
        started_at,
        duration_s,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.clone(),
    };
    match record::append_record(Path::new(params.str("runs")?), &record) {
        Ok(p) => outputs.push(p.display().to_string()),
        Err(e) => {
            eprintln!("error: cannot write run record: {e}");
            return Ok(1);
        }
    }

    for c in &outcome.checks {
        let op = if c.at_least { ">=" } else { "<=" };
        let mark = if c.passed() { "ok  " } else { "FAIL" };
        println!("{mark} {} = {:.6e} (need {op} {:.3e})", c.name, c.value, c.limit);
    }
    for p in &outputs {
        println!("wrote {p}");
    }
    if let Some(e) = error {
        eprintln!("error: {e}");
        return Ok(1);
    }
    if let Some(c) = outcome.checks.iter().find(|c| !c.passed()) {
        eprintln!("tolerance violated: {} = {:e} (limit {:e})", c.name, c.value, c.limit);
        return Ok(1);
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_verb_has_defaults() {
        for name in [
            "verify delta",
            "verify hecke",
            "verify voronoi",
            "verify stationary",
            "verify wdagger",
            "verify conductor",
            "verify poisson",
            "verify charsum",
            "verify istar",
            "eval-l",
            "sweep",
            "decompose",
        ] {
            assert!(!verbs::defaults(name).is_empty(), "{name}");
        }
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["gl2lab", "frobnicate"]), 2);
        assert_eq!(run(["gl2lab", "verify"]), 2);
        assert_eq!(run(["gl2lab", "--help"]), 0);
    }
}
