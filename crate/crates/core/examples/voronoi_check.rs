//! Both sides of Voronoi summation for tau with the bump on [10, 20].

use gl2lab::forms::CuspForm;
use gl2lab::voronoi::{scale_bump, voronoi_check_all};
use std::time::Instant;

fn main() -> gl2lab::Result<()> {
    let form = CuspForm::delta(60_000)?;
    let f = scale_bump(10.0)?;
    for q in 1..=2 {
        let t0 = Instant::now();
        for r in voronoi_check_all(&form, q, &f)? {
            println!(
                "q = {}, a = {}: lhs = {:.10}, rhs = {:.10}, rel residual {:.2e}, tail {:.1e}, {} dual terms ({:.1}s)",
                r.q,
                r.a,
                r.lhs,
                r.rhs,
                r.rel_residual,
                r.tail_estimate,
                r.n_cut,
                t0.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}
