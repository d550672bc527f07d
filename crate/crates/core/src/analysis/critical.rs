//! The critical exponent `α* > 0` solving `E(1+ξ)^α = 1`.
//!
//! `α ↦ E(1+ξ)^α` is convex with value 1 at the origin and slope
//! `E ln(1+ξ)` there, so a positive root exists exactly when the slope is
//! negative and `ξ` puts mass above zero. The root is bracketed by doubling
//! from `α = 1` and refined by bisection.

use crate::error::{Error, Result};
use crate::noise::{Law, NoiseModel};
use crate::scalar::Scalar;

/// Upper limit of the doubling search.
pub const MAX_BRACKET: f64 = 128.0;
/// Target residual `|E(1+ξ)^α* - 1|`.
pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalExponent<T> {
    pub alpha_star: T,
    /// Final bisection bracket, `g(lo) <= 0 <= g(hi)`.
    pub bracket: (T, T),
    /// `|E(1+ξ)^α* - 1|`.
    pub residual: T,
}

/// `E(1+ξ)^α - 1`, with divergent moments mapped to `+∞`.
fn gap<T: Scalar>(law: &Law<T>, alpha: T) -> Result<T> {
    match law.power_moment(alpha) {
        Ok(m) => Ok(m - T::one()),
        Err(Error::NonFinite(_)) => Ok(T::infinity()),
        Err(e) => Err(e),
    }
}

pub fn critical_alpha<T: Scalar>(noise: &NoiseModel<T>) -> Result<CriticalExponent<T>> {
    if !noise.is_iid() {
        return Err(Error::NotIid);
    }
    let law = noise.law(1)?;
    let log_moment = law.log_moment()?;
    if log_moment >= T::zero() {
        return Err(Error::NoRoot(format!("E ln(1+ξ) = {log_moment} is not negative")));
    }
    if !law.has_positive_mass() {
        return Err(Error::NoRoot("P(ξ > 0) = 0".into()));
    }

    let two = T::lit(2.0);
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut g_hi = gap(&law, hi)?;
    while g_hi < T::zero() {
        lo = hi;
        hi = hi * two;
        if hi > T::lit(MAX_BRACKET) {
            return Err(Error::NoRoot(format!(
                "E(1+ξ)^α < 1 on the whole bracket (0, {MAX_BRACKET}]"
            )));
        }
        g_hi = gap(&law, hi)?;
    }
    if g_hi == T::zero() {
        return Ok(CriticalExponent {
            alpha_star: hi,
            bracket: (hi, hi),
            residual: T::zero(),
        });
    }
    if lo == T::zero() {
        // root lies in (0, 1]: walk down until the gap turns negative
        let mut probe = hi;
        loop {
            probe = probe / two;
            if probe < T::epsilon() {
                return Err(Error::NoRoot("no sign change near the origin".into()));
            }
            let g = gap(&law, probe)?;
            if g < T::zero() {
                lo = probe;
                break;
            }
            hi = probe;
        }
    }

    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let g = gap(&law, mid)?;
        if g == T::zero() {
            lo = mid;
            hi = mid;
            break;
        }
        if g < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let g_lo = gap(&law, lo)?.abs();
    let g_hi = gap(&law, hi)?.abs();
    let (alpha_star, residual) = if g_lo <= g_hi { (lo, g_lo) } else { (hi, g_hi) };
    Ok(CriticalExponent {
        alpha_star,
        bracket: (lo, hi),
        residual,
    })
}
