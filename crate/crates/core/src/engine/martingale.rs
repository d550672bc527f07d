use crate::error::{Error, Result};
use crate::noise::{NoiseFamily, NoiseModel};
use crate::scalar::Scalar;

use super::{EquationKind, EquationSpec, FeedbackFunction};

/// Running value of `M_{n+1} = M_n (1 + f(X_n) ξ_{n+1})^{-1} / E[(1 + f(X_n) ξ)^{-1}]`,
/// `M_0 = 1`, a mean-one martingale along any path of the nonlinear recursion.
#[derive(Debug, Clone)]
pub struct MartingaleTracker<T> {
    noise: NoiseModel<T>,
    f: FeedbackFunction,
    value: T,
    abs_dev_sum: T,
    steps: usize,
}

impl<T: Scalar> MartingaleTracker<T> {
    /// Requires a linear or nonlinear spec whose noise is bounded on both
    /// sides and stays away from `-1`.
    pub fn new(spec: &EquationSpec<T>) -> Result<Self> {
        let f = match spec.kind() {
            EquationKind::Linear => FeedbackFunction::One,
            EquationKind::Nonlinear { f } => *f,
            _ => {
                return Err(Error::Unsupported(
                    "martingale tracker applies to the linear and nonlinear recursions".into(),
                ))
            }
        };
        let noise = spec.noise().cloned().ok_or_else(|| Error::Unsupported("no noise".into()))?;
        match noise.family() {
            NoiseFamily::ParetoTail { .. } => {
                return Err(Error::Unsupported(
                    "martingale tracker needs noise bounded on both sides".into(),
                ))
            }
            NoiseFamily::UniformInterval { .. } if !noise.is_iid() => {
                return Err(Error::Unsupported(
                    "martingale tracker is disabled for scheduled uniform noise".into(),
                ))
            }
            _ => {}
        }
        Ok(Self {
            noise,
            f,
            value: T::one(),
            abs_dev_sum: T::zero(),
            steps: 0,
        })
    }

    /// Advances with the state `x_n` and the innovation `ξ_{n+1}` of step `n`.
    pub fn update(&mut self, n: usize, x: T, innovation: T) -> Result<T> {
        let w = self.f.eval(x);
        let expected = self.noise.law(n + 1)?.mean_inverse(w)?;
        self.value = self.value / ((T::one() + w * innovation) * expected);
        self.abs_dev_sum = self.abs_dev_sum + (self.value - T::one()).abs();
        self.steps += 1;
        Ok(self.value)
    }

    pub fn value(&self) -> T {
        self.value
    }

    /// `(1/N) Σ_{n=1}^{N} |M_n - 1|`.
    pub fn mean_abs_dev(&self) -> T {
        if self.steps == 0 {
            T::zero()
        } else {
            self.abs_dev_sum / T::from_index(self.steps)
        }
    }
}
