use crate::error::{Error, Result};
use crate::noise::{NoiseModel, PositivityContext};
use crate::scalar::Scalar;
use crate::sequences::{CoefficientSequence, KappaSequence};

use super::FeedbackFunction;

/// Values above this are reported as [`Error::Overflow`].
pub const OVERFLOW_CAP: f64 = 1e300;

/// Indices on which a deterministic drift is checked at construction.
const DRIFT_CHECK_WINDOW: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum EquationKind<T> {
    /// `X_{n+1} = X_n (1 + ξ_{n+1}) + S_n`
    Linear,
    /// `X_{n+1} = X_n (1 + f(X_n) ξ_{n+1}) + S_n`
    Nonlinear { f: FeedbackFunction },
    /// `X_{n+1} = (1 + k f(X_n) a + sqrt(k f(X_n)) ζ_{n+1}) X_n + S_n`
    Ito { f: FeedbackFunction, a: T, k: T },
    /// `x_{n+1} = x_n (1 + f(x_n) a_{n+1}) + S_n`
    Deterministic {
        f: FeedbackFunction,
        drift: KappaSequence<T>,
    },
}

/// A recursion together with its initial value, noise and forcing.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSpec<T> {
    kind: EquationKind<T>,
    x0: T,
    noise: Option<NoiseModel<T>>,
    forcing: CoefficientSequence<T>,
}

impl<T: Scalar> EquationSpec<T> {
    /// Validates `x0 > 0` and positivity of the multiplicative factor.
    /// `noise` is required for every kind except `Deterministic`, which
    /// rejects it.
    pub fn new(
        kind: EquationKind<T>,
        x0: T,
        noise: Option<NoiseModel<T>>,
        forcing: CoefficientSequence<T>,
    ) -> Result<Self> {
        if !(x0 > T::zero() && x0.is_finite()) {
            return Err(Error::InvalidParameter(format!("X0 must be positive, got {x0}")));
        }
        match (&kind, &noise) {
            (EquationKind::Deterministic { drift, .. }, None) => {
                // with f <= 1 the factor 1 + f a stays >= 0 iff a >= -1
                for n in 1..=DRIFT_CHECK_WINDOW {
                    let a = drift.value_at(n);
                    if !(a >= -T::one() && a.is_finite()) {
                        return Err(Error::Positivity { n, bound: a.as_f64() });
                    }
                }
            }
            (EquationKind::Deterministic { .. }, Some(_)) => {
                return Err(Error::InvalidParameter(
                    "the deterministic recursion takes no noise".into(),
                ))
            }
            (_, None) => {
                return Err(Error::InvalidParameter("noise model required".into()));
            }
            (EquationKind::Linear, Some(m)) | (EquationKind::Nonlinear { .. }, Some(m)) => {
                let ctx = if kind == EquationKind::Linear {
                    PositivityContext::Linear
                } else {
                    PositivityContext::Nonlinear
                };
                m.validate_positivity(ctx)?;
            }
            (EquationKind::Ito { a, k, .. }, Some(m)) => {
                if !(*a >= T::zero() && a.is_finite()) {
                    return Err(Error::InvalidParameter(format!("drift a must be >= 0, got {a}")));
                }
                if !(*k > T::zero() && k.is_finite()) {
                    return Err(Error::InvalidParameter(format!("step k must be positive, got {k}")));
                }
                m.validate_positivity(PositivityContext::Ito { a: *a, k: *k })?;
            }
        }
        Ok(Self {
            kind,
            x0,
            noise,
            forcing,
        })
    }

    pub fn linear(x0: T, noise: NoiseModel<T>, forcing: CoefficientSequence<T>) -> Result<Self> {
        Self::new(EquationKind::Linear, x0, Some(noise), forcing)
    }

    pub fn nonlinear(
        f: FeedbackFunction,
        x0: T,
        noise: NoiseModel<T>,
        forcing: CoefficientSequence<T>,
    ) -> Result<Self> {
        Self::new(EquationKind::Nonlinear { f }, x0, Some(noise), forcing)
    }

    pub fn ito(
        f: FeedbackFunction,
        a: T,
        k: T,
        x0: T,
        zeta: NoiseModel<T>,
        forcing: CoefficientSequence<T>,
    ) -> Result<Self> {
        Self::new(EquationKind::Ito { f, a, k }, x0, Some(zeta), forcing)
    }

    pub fn deterministic(
        f: FeedbackFunction,
        drift: KappaSequence<T>,
        x0: T,
        forcing: CoefficientSequence<T>,
    ) -> Result<Self> {
        Self::new(EquationKind::Deterministic { f, drift }, x0, None, forcing)
    }

    pub fn kind(&self) -> &EquationKind<T> {
        &self.kind
    }

    pub fn x0(&self) -> T {
        self.x0
    }

    pub fn noise(&self) -> Option<&NoiseModel<T>> {
        self.noise.as_ref()
    }

    pub fn forcing(&self) -> &CoefficientSequence<T> {
        &self.forcing
    }

    /// Feedback gain `f`, with `f ≡ 1` for the linear kind.
    pub fn feedback(&self) -> FeedbackFunction {
        match &self.kind {
            EquationKind::Linear => FeedbackFunction::One,
            EquationKind::Nonlinear { f }
            | EquationKind::Ito { f, .. }
            | EquationKind::Deterministic { f, .. } => *f,
        }
    }

    /// Multiplicative factor of step `n` given the innovation `ξ_{n+1}`
    /// (ignored by the deterministic kind).
    #[inline]
    pub fn factor(&self, x: T, n: usize, innovation: T) -> T {
        match &self.kind {
            EquationKind::Linear => T::one() + innovation,
            EquationKind::Nonlinear { f } => T::one() + f.eval(x) * innovation,
            EquationKind::Ito { f, a, k } => {
                let kf = *k * f.eval(x);
                T::one() + kf * *a + kf.sqrt() * innovation
            }
            EquationKind::Deterministic { f, drift } => T::one() + f.eval(x) * drift.value_at(n + 1),
        }
    }

    /// `X_{n+1}` from `X_n = x` and a given innovation `ξ_{n+1}`.
    #[inline]
    pub fn step_with(&self, x: T, n: usize, innovation: T) -> Result<T> {
        let next = x * self.factor(x, n, innovation) + self.forcing.term(n);
        if next > T::lit(OVERFLOW_CAP) || next.is_nan() {
            return Err(Error::Overflow { n: n + 1 });
        }
        Ok(next)
    }

    /// Draws the innovation `ξ_{n+1}` used by step `n` (zero for the
    /// deterministic kind, which consumes no randomness).
    #[inline]
    pub fn draw<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> T {
        match &self.noise {
            Some(m) => m.sample(n + 1, rng),
            None => T::zero(),
        }
    }

    /// One step of the recursion.
    #[inline]
    pub fn step<R: rand::Rng + ?Sized>(&self, x: T, n: usize, rng: &mut R) -> Result<T> {
        let innovation = self.draw(n, rng);
        self.step_with(x, n, innovation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Spec = EquationSpec<f64>;

    #[test]
    fn step_examples() {
        let lin = Spec::linear(1.0, NoiseModel::degenerate(0.0).unwrap(), CoefficientSequence::power_law(0.1, 0.0).unwrap())
            .unwrap();
        assert!((lin.step_with(1.0, 0, 0.0).unwrap() - 1.1).abs() < 1e-15);

        let nl = Spec::nonlinear(
            FeedbackFunction::MinAbsOne,
            1.0,
            NoiseModel::uniform(-0.5, 0.6).unwrap(),
            CoefficientSequence::zero(),
        )
        .unwrap();
        assert!((nl.step_with(0.5, 3, 0.4).unwrap() - 0.6).abs() < 1e-15);

        let ito = Spec::ito(
            FeedbackFunction::One,
            0.25,
            0.01,
            1.0,
            NoiseModel::two_point(-1.0, 1.0, 0.5).unwrap(),
            CoefficientSequence::zero(),
        )
        .unwrap();
        assert!((ito.step_with(1.0, 0, -1.0).unwrap() - 0.9025).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let bad = NoiseModel::two_point(-1.2, 1.0, 0.5).unwrap();
        assert!(matches!(
            Spec::linear(1.0, bad, CoefficientSequence::zero()),
            Err(Error::Positivity { .. })
        ));
        let ok = NoiseModel::degenerate(0.0).unwrap();
        assert!(Spec::linear(0.0, ok.clone(), CoefficientSequence::zero()).is_err());
        assert!(Spec::new(EquationKind::Linear, 1.0, None, CoefficientSequence::zero()).is_err());
        let drift = KappaSequence::constant(-1.5);
        assert!(Spec::deterministic(FeedbackFunction::MinAbsOne, drift, 1.0, CoefficientSequence::zero()).is_err());
    }

    #[test]
    fn overflow_reported() {
        let spec = Spec::linear(1.0, NoiseModel::degenerate(1e200).unwrap(), CoefficientSequence::zero()).unwrap();
        assert_eq!(spec.step_with(1e200, 4, 1e200), Err(Error::Overflow { n: 5 }));
    }
}
