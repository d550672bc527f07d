use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::scalar::Scalar;

/// Feedback gain `f: ℝ → [0, 1]` modulating the noise in the nonlinear
/// recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeedbackFunction {
    /// `min(|u|, 1)`
    MinAbsOne,
    /// `|u| / (1 + |u|)`
    Rational,
    /// `u² / (1 + u²)`
    SquareRational,
    /// `f ≡ 1`, the linear case.
    One,
}

impl FeedbackFunction {
    pub const ALL: [FeedbackFunction; 4] = [
        FeedbackFunction::MinAbsOne,
        FeedbackFunction::Rational,
        FeedbackFunction::SquareRational,
        FeedbackFunction::One,
    ];

    #[inline]
    pub fn eval<T: Scalar>(self, u: T) -> T {
        match self {
            FeedbackFunction::MinAbsOne => u.abs().min(T::one()),
            FeedbackFunction::Rational => {
                let a = u.abs();
                a / (T::one() + a)
            }
            FeedbackFunction::SquareRational => {
                let s = u * u;
                s / (T::one() + s)
            }
            FeedbackFunction::One => T::one(),
        }
    }

    /// `f(0) = 0`.
    pub fn vanishes_at_zero(self) -> bool {
        self != FeedbackFunction::One
    }

    /// Probes `inf_{u > c} u f(u) > 0` for `c` on `{10^-3, …, 10}`.
    ///
    /// Each infimum is approximated over a geometric grid of `u` from just
    /// above `c` to `10^6 c`; returns the smallest value seen.
    pub fn min_weighted_gain<T: Scalar>(self) -> T {
        let mut worst = T::infinity();
        for exp in -3..=1 {
            let c = T::lit(10f64.powi(exp));
            for j in 0..=240 {
                let u = c * T::lit(10f64.powf(j as f64 / 40.0)) * T::lit(1.0 + 1e-9);
                worst = worst.min(u * self.eval(u));
            }
        }
        worst
    }

    /// Conditions required by the noiseless stability result: `f(0) = 0` and
    /// a positive weighted gain away from the origin.
    pub fn is_admissible_for_deterministic(self) -> bool {
        self.vanishes_at_zero() && self.min_weighted_gain::<f64>() > 0.0
    }

    pub fn name(self) -> &'static str {
        match self {
            FeedbackFunction::MinAbsOne => "min_abs_one",
            FeedbackFunction::Rational => "rational",
            FeedbackFunction::SquareRational => "square_rational",
            FeedbackFunction::One => "one",
        }
    }
}

impl fmt::Display for FeedbackFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeedbackFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeedbackFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown feedback function `{s}`")))
    }
}
