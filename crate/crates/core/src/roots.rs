//! Bracketed root finding for strictly monotone scalar equations on `(0, inf)`.
//!
//! Every 1-D equation in the crate has this shape: the per-node defining
//! equation of the Orlicz radial addition, the dilation factor restoring the
//! quermassintegral constraint, and the radius of the feasible initial ball.
//! All of them are strictly monotone in a positive unknown, so a single
//! log-space bisection routine with geometric bracket expansion serves them
//! all.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootError {
    #[error("no sign change found after {expansions} bracket expansions (last bracket [{lo:.3e}, {hi:.3e}])")]
    BracketExhausted { expansions: u32, lo: f64, hi: f64 },
    #[error("function value not finite at x = {x:.6e}")]
    NonFinite { x: f64 },
    #[error("invalid bracket [{lo:.3e}, {hi:.3e}]")]
    InvalidBracket { lo: f64, hi: f64 },
}

/// Bracket expansion policy: each failed bracket is widened by `factor`
/// on the deficient side, at most `max_expansions` times.
#[derive(Debug, Clone, Copy)]
pub struct BracketPolicy {
    pub factor: f64,
    pub max_expansions: u32,
}

impl Default for BracketPolicy {
    fn default() -> Self {
        Self { factor: 10.0, max_expansions: 10 }
    }
}

/// Solves `f(x) = target` for `x > 0`, where `f` is strictly monotone
/// (increasing or decreasing) on the bracket. Bisection runs on `log x`,
/// so `rel_tol` bounds the relative width of the final bracket.
pub fn solve_monotone_positive(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo0: f64,
    hi0: f64,
    rel_tol: f64,
    policy: BracketPolicy,
) -> Result<f64, RootError> {
    if !(lo0 > 0.0 && hi0 > lo0) {
        return Err(RootError::InvalidBracket { lo: lo0, hi: hi0 });
    }
    let eval = |x: f64| -> Result<f64, RootError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v - target)
        } else {
            Err(RootError::NonFinite { x })
        }
    };

    let (mut lo, mut hi) = (lo0, hi0);
    let mut flo = eval(lo)?;
    let mut fhi = eval(hi)?;
    let mut expansions = 0;
    while flo * fhi > 0.0 {
        if expansions >= policy.max_expansions {
            return Err(RootError::BracketExhausted { expansions, lo, hi });
        }
        // Widen toward the side that can still move the residual to zero:
        // with both endpoint residuals on the same side, monotonicity tells
        // us which endpoint to push.
        let decreasing_residual = fhi < flo;
        let need_smaller_residual = flo > 0.0;
        if decreasing_residual == need_smaller_residual {
            hi *= policy.factor;
            fhi = eval(hi)?;
        } else {
            lo /= policy.factor;
            flo = eval(lo)?;
        }
        expansions += 1;
    }

    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }

    // 200 log-space bisections shrink even a 1e12-wide bracket far below
    // any representable relative tolerance.
    for _ in 0..200 {
        let mid = ((lo.ln() + hi.ln()) * 0.5).exp();
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm * flo > 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * lo {
            break;
        }
    }
    Ok(((lo.ln() + hi.ln()) * 0.5).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_increasing_cubic() {
        let x = solve_monotone_positive(|t| t * t * t, 8.0, 1.0, 2.5, 1e-13, BracketPolicy::default())
            .unwrap();
        assert!((x - 2.0).abs() < 1e-11);
    }

    #[test]
    fn solves_decreasing_reciprocal_with_expansion() {
        // Root at x = 1000, far outside the seed bracket.
        let x = solve_monotone_positive(
            |t| 1.0 / t,
            1e-3,
            0.5,
            2.0,
            1e-13,
            BracketPolicy::default(),
        )
        .unwrap();
        assert!((x - 1000.0).abs() / 1000.0 < 1e-11);
    }

    #[test]
    fn reports_bracket_exhaustion() {
        // f > target everywhere: no root to find.
        let err = solve_monotone_positive(
            |t| 5.0 + t,
            1.0,
            0.5,
            2.0,
            1e-13,
            BracketPolicy { factor: 10.0, max_expansions: 3 },
        )
        .unwrap_err();
        assert!(matches!(err, RootError::BracketExhausted { .. }));
    }
}
