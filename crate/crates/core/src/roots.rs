//! Expanding-bracket bisection for strictly increasing scalar maps.
//!
//! Shared by ψ = φ⁻¹, the boundary-constant equations and the derivative
//! bound: all three invert a continuous strictly increasing function whose
//! root location is not known in advance. The bracket starts at [−1, 1] and
//! doubles per side; exceeding the doubling cap turns silent divergence into
//! a diagnosable error.

use crate::error::Error;

pub(crate) const MAX_DOUBLINGS: u32 = 200;
const MAX_BISECTIONS: u32 = 4000;

pub(crate) struct RootResult {
    pub x: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Solve f(x) = target for increasing `f`.
///
/// Stops once |f(x) − target| ≤ `residual_tol` and the bracket half-width is
/// below `x_tol · max(1, |x|)`; pass `f64::INFINITY` to disable either
/// criterion. `f` may fail (e.g. a nested inversion), in which case the
/// failure propagates.
pub(crate) fn solve_increasing(
    context: &'static str,
    mut f: impl FnMut(f64) -> Result<f64, Error>,
    target: f64,
    residual_tol: f64,
    x_tol: f64,
) -> Result<RootResult, Error> {
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    let mut iterations = 0u32;

    let mut doublings = 0u32;
    while f_hi < target {
        if doublings >= MAX_DOUBLINGS {
            return Err(Error::IterationCap {
                context,
                max_doublings: MAX_DOUBLINGS,
            });
        }
        hi *= 2.0;
        f_hi = f(hi)?;
        doublings += 1;
        iterations += 1;
    }
    doublings = 0;
    while f_lo > target {
        if doublings >= MAX_DOUBLINGS {
            return Err(Error::IterationCap {
                context,
                max_doublings: MAX_DOUBLINGS,
            });
        }
        lo *= 2.0;
        f_lo = f(lo)?;
        doublings += 1;
        iterations += 1;
    }

    let mut best_x = if (f_hi - target).abs() < (f_lo - target).abs() {
        hi
    } else {
        lo
    };
    let mut best_residual = (f(best_x)? - target).abs();

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break; // bracket exhausted at double precision
        }
        let f_mid = f(mid)?;
        iterations += 1;
        let residual = (f_mid - target).abs();
        if residual <= best_residual {
            best_x = mid;
            best_residual = residual;
        }
        if f_mid < target {
            lo = mid;
        } else {
            hi = mid;
        }
        let width_ok = x_tol.is_infinite() || (hi - lo) <= x_tol * best_x.abs().max(1.0);
        let residual_ok = residual_tol.is_infinite() || best_residual <= residual_tol;
        if width_ok && residual_ok {
            return Ok(RootResult {
                x: best_x,
                residual: best_residual,
                iterations,
            });
        }
    }

    if residual_tol.is_finite() && best_residual > residual_tol {
        return Err(Error::IterationCap {
            context,
            max_doublings: MAX_DOUBLINGS,
        });
    }
    Ok(RootResult {
        x: best_x,
        residual: best_residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let r = solve_increasing("test", |x| Ok(x * x * x), 27.0, 1e-12, 1e-12).unwrap();
        assert!((r.x - 3.0).abs() < 1e-11);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn far_target_needs_expansion() {
        let r = solve_increasing("test", |x| Ok(x), 1e9, 1e-9, f64::INFINITY).unwrap();
        assert!((r.x - 1e9).abs() < 2.0);
    }

    #[test]
    fn negative_branch() {
        let r = solve_increasing("test", |x| Ok(x.powi(3)), -8.0, 1e-12, 1e-12).unwrap();
        assert!((r.x + 2.0).abs() < 1e-11);
    }

    #[test]
    fn unreachable_target_is_capped() {
        // Bounded increasing map never reaches 2.
        let res = solve_increasing("test", |x| Ok(x.tanh()), 2.0, 1e-12, 1e-12);
        assert!(matches!(res, Err(Error::IterationCap { .. })));
    }
}
