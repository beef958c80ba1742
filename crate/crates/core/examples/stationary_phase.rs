//! Both branches of the stationary-phase lemma, and the two-dimensional
//! second-derivative bound.

use gl2lab::calibration::STATIONARY;
use gl2lab::oscint::*;

fn main() -> gl2lab::Result<()> {
    println!("Fresnel profile B x^2 on the unit bump:");
    for b in [1e2, 1e3, 1e4] {
        let p = fresnel_profile(b);
        let oracle = oracle_quadrature(&p, 1e-13)?;
        let exp = second_branch_expand(&p)?;
        let err = (oracle - exp.main).norm();
        println!(
            "  B = {b:>7}: x0 = {:+.1e}, |oracle - main| = {err:.3e}, ratio to bound {:.4} (fitted {})",
            exp.x0,
            err / exp.error_bound,
            STATIONARY.value
        );
    }

    println!("linear phase B x on [1, 2], no stationary point:");
    for b in [10.0, 100.0, 1000.0] {
        let p = linear_profile(b);
        let oracle = oracle_quadrature(&p, 1e-13)?;
        println!("  B = {b:>6}: |I| = {:.3e} <= {:.3e}", oracle.norm(), first_branch_bound(&p)?);
    }

    let p2 = fresnel_profile_2d(50.0, 0.25)?;
    let bound = second_derivative_bound_2d(&p2)?;
    let value = oracle_quadrature_2d(&p2, 1e-10)?;
    println!("2D: |I| = {:.4e} <= var(g)/(r1 r2) = {bound:.4e}", value.norm());
    Ok(())
}
