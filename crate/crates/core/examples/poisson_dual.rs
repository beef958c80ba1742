use gl2lab::decomp::{poisson_dual_m_sum, DecompConfig};

fn main() -> gl2lab::Result<()> {
    let cfg = DecompConfig::new(50.0, 8.0, 200.0)?;
    for (q, a, x, v) in [(1, 3, 0.2, 9.0), (3, 4, 0.55, 12.5), (5, 3, 0.9, 15.0)] {
        let r = poisson_dual_m_sum(&cfg, q, a, x, v)?;
        println!(
            "q = {q}, a = {a}, x = {x}, v = {v}: direct {:.10} dual {:.10} (|m| <= {}), rel residual {:.2e}",
            r.direct, r.dual, r.m_cut, r.residual
        );
    }
    Ok(())
}
