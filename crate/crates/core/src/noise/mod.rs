//! Noise laws for `ξ_n` (and `ζ_n` of the Itô-type recursion).
//!
//! A [`NoiseModel`] is a family whose parameters may depend on the step index
//! `n >= 1`. Resolving it at an index gives a [`Law`], which carries the exact
//! moment formulas and the sampling map. Parameters are validated once at
//! construction, so sampling never fails. The support condition `1 + ξ > 0`
//! depends on the recursion the noise drives and is checked separately by
//! [`NoiseModel::validate_positivity`]; functionals of `1 + ξ` refuse laws
//! that violate it.

mod law;
mod schedule;

pub use law::Law;
pub use schedule::Schedule;

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Indices checked exhaustively when validating a scheduled model.
pub const VALIDATION_WINDOW: usize = 10_000;

/// Far indices probed in addition to the window, to catch schedules that
/// leave the admissible region only asymptotically.
const FAR_PROBES: [usize; 4] = [100_000, 1_000_000, 1_000_000_000, 1_000_000_000_000];

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseFamily<T> {
    TwoPoint {
        lo: Schedule<T>,
        hi: Schedule<T>,
        p_hi: Schedule<T>,
    },
    UniformInterval {
        lo: Schedule<T>,
        hi: Schedule<T>,
    },
    /// `1 + ξ` is Pareto with shape `gamma` and scale `a`.
    ParetoTail { gamma: T, a: T },
    Degenerate { c: T },
}

/// A validated noise law, possibly scheduled in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel<T> {
    family: NoiseFamily<T>,
    iid: bool,
}

/// Which recursion a positivity check is for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositivityContext<T> {
    Linear,
    Nonlinear,
    /// `1 + k f a + sqrt(k f) ζ > 0` for every `f ∈ [0, 1]`.
    Ito { a: T, k: T },
}

impl<T: Scalar> NoiseModel<T> {
    pub fn new(family: NoiseFamily<T>) -> Result<Self> {
        let iid = match &family {
            NoiseFamily::TwoPoint { lo, hi, p_hi } => {
                lo.is_const() && hi.is_const() && p_hi.is_const()
            }
            NoiseFamily::UniformInterval { lo, hi } => lo.is_const() && hi.is_const(),
            NoiseFamily::ParetoTail { .. } | NoiseFamily::Degenerate { .. } => true,
        };
        let model = Self { family, iid };
        model.check_indices(|law, n| Self::check_law(law, n))?;
        Ok(model)
    }

    pub fn two_point(lo: T, hi: T, p_hi: T) -> Result<Self> {
        Self::new(NoiseFamily::TwoPoint {
            lo: lo.into(),
            hi: hi.into(),
            p_hi: p_hi.into(),
        })
    }

    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        Self::new(NoiseFamily::UniformInterval {
            lo: lo.into(),
            hi: hi.into(),
        })
    }

    pub fn pareto(gamma: T, a: T) -> Result<Self> {
        Self::new(NoiseFamily::ParetoTail { gamma, a })
    }

    pub fn degenerate(c: T) -> Result<Self> {
        Self::new(NoiseFamily::Degenerate { c })
    }

    pub fn family(&self) -> &NoiseFamily<T> {
        &self.family
    }

    /// Parameters do not depend on `n`.
    pub fn is_iid(&self) -> bool {
        self.iid
    }

    /// Resolves the law of `ξ_n`. Index `0` is rejected.
    pub fn law(&self, n: usize) -> Result<Law<T>> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "noise is indexed from n = 1".into(),
            ));
        }
        Ok(self.law_unchecked(n))
    }

    #[inline]
    pub(crate) fn law_unchecked(&self, n: usize) -> Law<T> {
        match &self.family {
            NoiseFamily::TwoPoint { lo, hi, p_hi } => Law::TwoPoint {
                lo: lo.at(n),
                hi: hi.at(n),
                p_hi: p_hi.at(n),
            },
            NoiseFamily::UniformInterval { lo, hi } => Law::Uniform {
                lo: lo.at(n),
                hi: hi.at(n),
            },
            NoiseFamily::ParetoTail { gamma, a } => Law::Pareto {
                gamma: *gamma,
                scale: *a,
            },
            NoiseFamily::Degenerate { c } => Law::Degenerate(*c),
        }
    }

    /// Runs `check` over every index a scheduled model is validated on, or
    /// once for an i.i.d. model.
    fn check_indices(&self, mut check: impl FnMut(&Law<T>, usize) -> Result<()>) -> Result<()> {
        if self.iid {
            return check(&self.law_unchecked(1), 1);
        }
        for n in (1..=VALIDATION_WINDOW).chain(FAR_PROBES) {
            check(&self.law_unchecked(n), n)?;
        }
        Ok(())
    }

    fn check_law(law: &Law<T>, n: usize) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidParameter(format!("at n = {n}: {msg}")));
        match *law {
            Law::TwoPoint { lo, hi, p_hi } => {
                if !(lo.is_finite() && hi.is_finite() && p_hi.is_finite()) {
                    return invalid("non-finite two-point parameter".into());
                }
                if !(p_hi >= T::zero() && p_hi <= T::one()) {
                    return invalid(format!("p_hi = {p_hi} outside [0, 1]"));
                }
                if !(lo < hi) {
                    return invalid(format!("lo = {lo} must be below hi = {hi}"));
                }
            }
            Law::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite()) {
                    return invalid("non-finite interval endpoint".into());
                }
                if !(lo < hi) {
                    return invalid(format!("lo = {lo} must be below hi = {hi}"));
                }
            }
            Law::Pareto { gamma, scale } => {
                if !(gamma > T::zero() && gamma.is_finite()) {
                    return invalid(format!("shape must be positive, got {gamma}"));
                }
                if !(scale > T::zero() && scale.is_finite()) {
                    return invalid(format!("scale must be positive, got {scale}"));
                }
            }
            Law::Degenerate(c) => {
                if !c.is_finite() {
                    return invalid("non-finite constant".into());
                }
            }
        }
        Ok(())
    }

    /// Draws `ξ_n`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> T {
        let u: f64 = rng.sample(Open01);
        self.law_unchecked(n.max(1)).from_uniform(T::lit(u))
    }

    /// `E(1+ξ_n)^α`; infinite moments are reported as [`Error::NonFinite`].
    pub fn power_moment(&self, n: usize, alpha: T) -> Result<T> {
        self.law(n)?.power_moment(alpha).map_err(|e| e.at_index(n))
    }

    /// `E ln(1+ξ_n)`.
    pub fn log_moment(&self, n: usize) -> Result<T> {
        self.law(n)?.log_moment().map_err(|e| e.at_index(n))
    }

    /// `E ξ_n^k` for `k ∈ 1..=3`.
    pub fn raw_moment(&self, n: usize, k: u32) -> Result<T> {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "raw moment order must be 1, 2 or 3, got {k}"
            )));
        }
        self.law(n)?.raw_moment(k)
    }

    /// `E[(2+ξ_n) ln²(1+ξ_n)] / |E ln(1+ξ_n)|`.
    pub fn lemma45_ratio(&self, n: usize) -> Result<T> {
        let law = self.law(n)?;
        let denom = law.log_moment().map_err(|e| e.at_index(n))?.abs();
        if denom == T::zero() {
            return Err(Error::DivisionByZero {
                n,
                what: "E ln(1+ξ) = 0".into(),
            });
        }
        Ok(law.log_square_weighted()? / denom)
    }

    /// Checks that the multiplicative factor of the recursion stays positive.
    pub fn validate_positivity(&self, context: PositivityContext<T>) -> Result<()> {
        match context {
            PositivityContext::Linear | PositivityContext::Nonlinear => {
                self.check_indices(|law, n| law.require_positive_factor().map_err(|e| e.at_index(n)))
            }
            PositivityContext::Ito { a, k } => self.check_indices(|law, n| {
                let worst = ito_min_factor(a, k, law.inf_support());
                if worst > T::zero() {
                    Ok(())
                } else {
                    Err(Error::Positivity {
                        n,
                        bound: worst.as_f64(),
                    })
                }
            }),
        }
    }
}

/// Minimum over `f ∈ [0, 1]` of `1 + k f a + sqrt(k f) z`.
///
/// With `s = sqrt(k f)` the map is the parabola `1 + a s² + z s` on
/// `[0, sqrt(k)]`, minimised at `s* = -z / (2a)` clamped to the interval.
pub fn ito_min_factor<T: Scalar>(a: T, k: T, z: T) -> T {
    if z >= T::zero() {
        return T::one();
    }
    let s_max = k.sqrt();
    let s = if a > T::zero() {
        (-z / (T::lit(2.0) * a)).min(s_max)
    } else {
        s_max
    };
    T::one() + a * s * s + z * s
}
