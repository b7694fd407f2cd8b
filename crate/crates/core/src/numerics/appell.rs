//! Appell's `F2(1, ½, ½, 3/2, 3/2; −p, −q)` for `p, q >= 0`.
//!
//! At these parameters the Euler-type integral representation reads
//!
//! ```text
//! F2 = ¼ ∫₀¹∫₀¹ u^{-½} v^{-½} / (1 + p u + q v) du dv
//!    =   ∫₀¹∫₀¹ dρ dφ / (1 + p ρ² + q φ²)          (u = ρ², v = φ²)
//! ```
//!
//! The inner integral over `φ` is elementary, leaving a smooth one-dimensional
//! integral. The power series of F2 only converges for `p + q < 1`, so it is
//! not used.

use crate::error::{Error, Result};
use crate::numerics::quadrature::{quad1d, QuadOptions};

/// `atan(x) / x`, stable near zero.
fn atan_over_x(x: f64) -> f64 {
    if x < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 3.0 + x2 * x2 / 5.0
    } else {
        x.atan() / x
    }
}

pub fn appell_f2_restricted(p: f64, q: f64) -> Result<f64> {
    if !(p.is_finite() && q.is_finite() && p >= 0.0 && q >= 0.0) {
        return Err(Error::Domain(format!(
            "restricted F2 needs finite non-negative arguments, got ({p}, {q})"
        )));
    }
    // ∫₀¹ dφ / (A + q φ²) = atan(√(q/A)) / √(qA)
    let inner = |rho: f64| {
        let a = 1.0 + p * rho * rho;
        atan_over_x((q / a).sqrt()) / a
    };
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        max_evals: 200_000,
        ..QuadOptions::default()
    };
    Ok(quad1d(inner, (0.0, 1.0), &opts)?.value)
}
