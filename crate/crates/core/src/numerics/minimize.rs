//! Bracketing minimization on a closed interval: a uniform scan followed by
//! golden-section refinement around the best sample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub argmin: f64,
    pub min_value: f64,
    /// The minimum was attained at an end of the search interval.
    pub at_boundary: bool,
    /// Final golden-section bracket.
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Number of uniform scan points, endpoints included.
    pub scan_points: usize,
    /// Width of the final bracket.
    pub tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            scan_points: 101,
            tol: 1e-6,
        }
    }
}

/// Minimizes `objective` on `[lo, hi]` with default scan density.
pub fn minimize_1d<F>(objective: F, interval: (f64, f64), tol: f64) -> Result<MinimizeResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    minimize_1d_with(
        objective,
        interval,
        &MinimizeOptions {
            tol,
            ..MinimizeOptions::default()
        },
    )
}

pub fn minimize_1d_with<F>(
    objective: F,
    (lo, hi): (f64, f64),
    opts: &MinimizeOptions,
) -> Result<MinimizeResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!(
            "search interval must be finite and non-empty, got [{lo}, {hi}]"
        )));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.scan_points < 3 {
        return Err(Error::InvalidInput(
            "minimizer needs tol > 0 and at least 3 scan points".into(),
        ));
    }
    let eval = |x: f64| -> Result<f64> {
        let v = objective(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(x))
        }
    };

    let n = opts.scan_points;
    let xs: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let fs = xs
        .par_iter()
        .map(|&x| eval(x))
        .collect::<Result<Vec<f64>>>()?;
    let mut evaluations = n;

    // first index attaining the minimum
    let ibest = (0..n).fold(0, |b, i| if fs[i] < fs[b] { i } else { b });
    let (mut best_x, mut best_f) = (xs[ibest], fs[ibest]);

    let (mut a, mut b) = (xs[ibest.saturating_sub(1)], xs[(ibest + 1).min(n - 1)]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    evaluations += 2;
    while b - a > opts.tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
        evaluations += 1;
        for (x, f) in [(c, fc), (d, fd)] {
            if f < best_f {
                best_x = x;
                best_f = f;
            }
        }
    }
    for (x, f) in [(c, fc), (d, fd)] {
        if f < best_f {
            best_x = x;
            best_f = f;
        }
    }

    Ok(MinimizeResult {
        argmin: best_x,
        min_value: best_f,
        at_boundary: best_x == lo || best_x == hi,
        bracket: (a, b),
        evaluations,
    })
}
