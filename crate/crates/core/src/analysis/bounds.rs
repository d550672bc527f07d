//! Explicit constants for two auxiliary inequalities.

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::scalar::Scalar;

/// Smallest `K(ε)` with `(a+b)^α <= (1+ε) a^α + K(ε) b^α` for all `a, b > 0`.
///
/// For `α > 1` this is `(1 - (1+ε)^(-1/(α-1)))^(1-α)`, obtained by
/// maximising `((1+t)^α - (1+ε) t^α)` over `t = a/b`; `α = 1` gives `1`.
pub fn power_split_bound<T: Scalar>(alpha: T, epsilon: T) -> Result<T> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be >= 1, got {alpha}")));
    }
    if !(epsilon > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if alpha == T::one() {
        return Ok(T::one());
    }
    let m = alpha - T::one();
    let base = -(-(epsilon.ln_1p()) / m).exp_m1();
    Ok(base.powf(-m))
}

/// Admissible exponent bound derived from a uniform constant `K` on the
/// ratio `E[(2+ξ) ln²(1+ξ)] / |E ln(1+ξ)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma45Bound<T> {
    pub k: T,
    /// `min(1/K, 1)`; the sandwich holds for every `α` strictly below it.
    pub alpha_bound: T,
}

/// Verifies the ratio bound over `1..=n_check` (once for i.i.d. noise) and
/// returns the admissible exponent range.
pub fn lemma45_alpha_bound<T: Scalar>(
    noise: &NoiseModel<T>,
    k: T,
    n_check: usize,
) -> Result<Lemma45Bound<T>> {
    if !(k > T::zero()) {
        return Err(Error::InvalidParameter(format!("K must be positive, got {k}")));
    }
    let last = if noise.is_iid() { 1 } else { n_check.max(1) };
    for n in 1..=last {
        let r = noise.lemma45_ratio(n)?;
        if r > k {
            return Err(Error::Precondition(format!(
                "ratio {r} at n = {n} exceeds K = {k}"
            )));
        }
    }
    Ok(Lemma45Bound {
        k,
        alpha_bound: k.recip().min(T::one()),
    })
}

impl<T: Scalar> Lemma45Bound<T> {
    /// Endpoints `(α E ln(1+ξ_n), α (E ln(1+ξ_n) + |E ln(1+ξ_n)|/2))` that
    /// enclose `E(1+ξ_n)^α - 1`.
    pub fn sandwich(&self, noise: &NoiseModel<T>, n: usize, alpha: T) -> Result<(T, T)> {
        if !(alpha > T::zero() && alpha < self.alpha_bound) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} outside (0, {})",
                self.alpha_bound
            )));
        }
        let l = noise.log_moment(n)?;
        Ok((alpha * l, alpha * (l + l.abs() / T::lit(2.0))))
    }
}
