use gl2lab::numerics::Complex64;
use gl2lab::oscint::{w_dagger, w_dagger_main};
use gl2lab::windows::Window;
use std::f64::consts::TAU;

fn main() -> gl2lab::Result<()> {
    let w = Window::make_bump(1.0, 2.0, false)?;
    println!("stationary point at x0 = 1.5, s = 1/2 + i beta");
    for beta in [50.0, 100.0, 200.0, 400.0, 800.0] {
        let r = beta / (TAU * 1.5);
        let s = Complex64::new(0.5, beta);
        let exact = w_dagger(&w, r, s)?;
        let (main, shape) = w_dagger_main(&w, r, s)?;
        println!(
            "  beta = {beta:>4}: |W| = {:.5e}, |W - main| = {:.3e}, / beta^-1.5 = {:.2}",
            exact.norm(),
            (exact - main).norm(),
            (exact - main).norm() / shape
        );
    }
    println!("x0 outside the support (beta = 10):");
    let s = Complex64::new(1.0, 10.0);
    for r in [5.0, 50.0, 500.0] {
        println!("  r = {r:>4}: |W| = {:.3e}", w_dagger(&w, r, s)?.norm());
    }
    Ok(())
}
