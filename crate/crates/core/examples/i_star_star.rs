use gl2lab::calibration::{self, C4};
use gl2lab::decomp::*;

fn main() -> gl2lab::Result<()> {
    let mut cfg = DecompConfig::new(calibration::DESK_N, calibration::DESK_K, calibration::DESK_T)?
        .with_q(calibration::DESK_Q)?;
    cfg.quad_tol = calibration::DESK_QUAD_TOL;
    println!("c4 = {C4} fitted at {}", calibration::C4_POINT);
    for (q, m, tau) in [(1, -1, 0.0), (1, -1, 10.0), (2, -1, 0.0)] {
        let s = i_star_star(&cfg, q, m, tau)?;
        let one = i_one(&cfg, q, m, tau, C4)?;
        let b = error_budget(&cfg, DecompConfig::dyadic_base(q), tau);
        let (len, size) = i_one_inner_length(&cfg, q, m, tau)?;
        println!(
            "q = {q}, m = {m}, tau = {tau}: a = {}, I** = {:.6}, I1 = {:.6}, |I** - I1|/B = {:.3}, inner length {len:.3} vs K|m|a/t {size:.3}",
            s.a,
            s.value,
            one,
            (s.value - one).norm() / b
        );
    }
    let ib = integrated_budget(&cfg, 1.0)?;
    println!("integral of B over |tau| <= {:.2}: {:.4e}, closed size {:.4e}", ib.range, ib.numeric, ib.closed);
    Ok(())
}
