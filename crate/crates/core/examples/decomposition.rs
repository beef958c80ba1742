//! `S(N) = S⁺(N) + S⁻(N)` at desk scale, with `Q = ⌈(N/K)^{1/2}⌉`.

use gl2lab::decomp::{collapsed_sum, s_plus_minus, DecompConfig};
use gl2lab::forms::CuspForm;
use std::time::Instant;

fn main() -> gl2lab::Result<()> {
    let (n, k, t) = (60.0, 8.0, 100.0);
    let cfg = DecompConfig::new(n, k, t)?.with_q((n / k).sqrt().ceil())?;
    let form = CuspForm::delta(300)?;
    let t0 = Instant::now();
    let s = s_plus_minus(&form, &cfg)?;
    println!("N = {n}, K = {k}, t = {t}, Q = {}, {} frames", cfg.q, s.frames);
    println!("S(N)      = {:.12}", s.s_direct);
    println!("S+ + S-   = {:.12}", s.s_plus + s.s_minus);
    println!("S+ = {:.6}, S- = {:.6}", s.s_plus, s.s_minus);
    println!("rel residual {:.2e} in {:.2}s", s.rel_residual, t0.elapsed().as_secs_f64());
    println!("delta collapsed first: {:.12}", collapsed_sum(&form, &cfg)?);
    Ok(())
}
