//! Fitted constants. Each was measured once at the recorded point and frozen;
//! the checks that use them never refit.

use crate::numerics::Complex64;

/// A frozen constant and where it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fitted {
    pub name: &'static str,
    pub value: f64,
    pub point: &'static str,
}

/// `|oracle - main| ≤ C · error_bound` on the Fresnel profile `B x²`.
/// Measured ratios 0.0283 to 0.0292 over `B ∈ {10², 10³, 10⁴}`.
pub const STATIONARY: Fitted = Fitted {
    name: "stationary_phase",
    value: 0.05,
    point: "fresnel_profile(B), B in {1e2, 1e3, 1e4}, oracle tol 1e-13",
};

/// `|W† - main| ≤ C β^{-3/2}` for the bump on `[1, 2]` with `x₀ = 1.5`.
/// Largest measured ratio 25.3 at `σ = 1`, 20.3 at `σ = 1/2`.
pub const W_DAGGER: Fitted = Fitted {
    name: "w_dagger",
    value: 30.0,
    point: "bump [1,2], x0 = 1.5, beta in {50..800}, sigma in {1/2, 1}",
};

/// `c₄` in the main term of `I**`, fitted by `I** / I₁(c₄ = 1)`.
pub const C4: Complex64 = Complex64::new(44.827_388_161_8, 44.124_938_605_7);

pub const C4_POINT: &str = "(N, K, t) = (20, 5, 200), Q = 3, quad_tol 1e-9, (q, m, tau) = (1, -1, 0)";

/// `|I** - I₁| ≤ C · B(C, τ)`, taken as the τ = 0 slice maximum (3.12) rounded up.
pub const I_STAR_STAR: Fitted = Fitted {
    name: "i_star_star_remainder",
    value: 4.0,
    point: "(N, K, t) = (20, 5, 200), Q = 3, q in {1,2,3}, m in {-1,-5,-7}, tau = 0",
};

/// `|S(N)| ≤ C N t^ε` for the normalized bump on `[1, 2]`; measured maximum 0.474.
pub const TRIVIAL_S: Fitted = Fitted {
    name: "trivial_s_of_n",
    value: 1.0,
    point: "V normalized bump [1,2], N dyadic up to t^{3/4}, t in [10, 200]",
};

/// Desk parameters for the `I**` grid.
pub const DESK_N: f64 = 20.0;
pub const DESK_K: f64 = 5.0;
pub const DESK_T: f64 = 200.0;
pub const DESK_Q: f64 = 3.0;
pub const DESK_QUAD_TOL: f64 = 1e-9;

pub fn all() -> [Fitted; 4] {
    [STATIONARY, W_DAGGER, I_STAR_STAR, TRIVIAL_S]
}
