//! The v-integral `(1/K) ∫ V(v/K) (n/m)^{iv} dv` as a function of `|n - m|`.

use gl2lab::oscint::conductor_kernel;
use gl2lab::windows::Window;

fn main() -> gl2lab::Result<()> {
    let v = Window::make_bump(1.0, 2.0, true)?;
    let (n, k) = (10_000u64, 100.0);
    let unit = (n as f64 / k) as u64;
    for mult in [0u64, 1, 2, 4, 8, 16, 32, 64] {
        let z = conductor_kernel(n, n + mult * unit, k, &v)?;
        println!("|n - m| = {:>2} N/K: |kernel| = {:.4e}", mult, z.norm());
    }
    Ok(())
}
