//! Deterministic coefficient families: the free coefficient `S_n`, the
//! weights `κ_n`, and the drift `a_n` of the noiseless recursion.
//!
//! Infinite sums are decided by exact rules where one exists (p-series,
//! geometric, finite tables). Sums whose terms come from noise moments are
//! decided by fitting the decay exponent of the terms over the last decade of
//! indices; the fit returns [`Status::Inconclusive`] inside the band
//! `(0.95, 1.05)` rather than guessing.

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::scalar::{log_add_exp, Scalar};

/// Default number of terms evaluated for tail classification.
pub const DEFAULT_N_TAIL: usize = 100_000;

/// Decay exponents at or above this count as summable.
pub const SUMMABLE_SLOPE: f64 = 1.05;
/// Decay exponents at or below this count as non-summable.
pub const DIVERGENT_SLOPE: f64 = 0.95;
/// Ratio-test margin: successive terms bounded by `1 - δ` decay geometrically.
pub const RATIO_MARGIN: f64 = 1e-3;
/// Log-summands above this are reported as overflow.
pub const LOG_OVERFLOW: f64 = 700.0;

/// Outcome of checking one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summability {
    Summable,
    Divergent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceFamily<T> {
    /// `c n^(-p)`
    PowerLaw { c: T, p: T },
    /// `c r^n`
    Geometric { c: T, r: T },
    /// Explicit values for `n = 1, 2, …`; zero beyond the table.
    Table(Vec<T>),
    Zero,
}

impl<T: Scalar> SequenceFamily<T> {
    #[inline]
    fn value_at(&self, n: usize) -> T {
        match self {
            SequenceFamily::PowerLaw { c, p } => {
                if *p == T::zero() {
                    *c
                } else {
                    *c * T::from_index(n).powf(-*p)
                }
            }
            SequenceFamily::Geometric { c, r } => *c * r.powf(T::from_index(n)),
            SequenceFamily::Table(v) => v.get(n.wrapping_sub(1)).copied().unwrap_or_else(T::zero),
            SequenceFamily::Zero => T::zero(),
        }
    }

    /// Value used as the forcing of step `n >= 0`. Geometric families are
    /// defined at `n = 0`; the others are evaluated at `max(n, 1)`.
    #[inline]
    fn term(&self, n: usize) -> T {
        match self {
            SequenceFamily::Geometric { c, r } => *c * r.powf(T::from_index(n)),
            _ => self.value_at(n.max(1)),
        }
    }

    fn validate(&self, signed: bool) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            SequenceFamily::PowerLaw { c, p } => {
                if !c.is_finite() || !p.is_finite() {
                    return bad("power law parameters must be finite".into());
                }
                if !signed && *c < T::zero() {
                    return bad(format!("coefficient must be non-negative, got {c}"));
                }
            }
            SequenceFamily::Geometric { c, r } => {
                if !c.is_finite() || !(*r > T::zero() && *r < T::one()) {
                    return bad(format!("geometric ratio must lie in (0, 1), got {r}"));
                }
                if !signed && *c < T::zero() {
                    return bad(format!("coefficient must be non-negative, got {c}"));
                }
            }
            SequenceFamily::Table(v) => {
                if v.iter().any(|x| !x.is_finite() || (!signed && *x < T::zero())) {
                    return bad("table entries must be finite (and non-negative for S_n)".into());
                }
            }
            SequenceFamily::Zero => {}
        }
        Ok(())
    }
}

/// Non-negative free coefficient `S_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence<T>(SequenceFamily<T>);

impl<T: Scalar> CoefficientSequence<T> {
    pub fn new(family: SequenceFamily<T>) -> Result<Self> {
        family.validate(false)?;
        Ok(Self(family))
    }

    pub fn power_law(c: T, p: T) -> Result<Self> {
        Self::new(SequenceFamily::PowerLaw { c, p })
    }

    pub fn geometric(c: T, r: T) -> Result<Self> {
        Self::new(SequenceFamily::Geometric { c, r })
    }

    pub fn zero() -> Self {
        Self(SequenceFamily::Zero)
    }

    pub fn family(&self) -> &SequenceFamily<T> {
        &self.0
    }

    /// `S_n` for `n >= 1`.
    pub fn value_at(&self, n: usize) -> T {
        self.0.value_at(n)
    }

    /// Forcing applied at step `n >= 0` of a recursion.
    #[inline]
    pub fn term(&self, n: usize) -> T {
        self.0.term(n)
    }

    /// Whether `Σ S_n^α < ∞`.
    pub fn alpha_summable(&self, alpha: T) -> Summability {
        match &self.0 {
            SequenceFamily::PowerLaw { c, p } => {
                if *c == T::zero() || alpha * *p > T::one() {
                    Summability::Summable
                } else {
                    Summability::Divergent
                }
            }
            _ => Summability::Summable,
        }
    }

    /// Smallest decay exponent `p` of a power law, used to pick a summability
    /// order; `None` for families that are summable at every order.
    pub fn power_exponent(&self) -> Option<T> {
        match &self.0 {
            SequenceFamily::PowerLaw { c, p } if *c != T::zero() => Some(*p),
            _ => None,
        }
    }
}

/// Signed weights `κ_n`, also used for the drift `a_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaSequence<T>(SequenceFamily<T>);

impl<T: Scalar> KappaSequence<T> {
    pub fn new(family: SequenceFamily<T>) -> Result<Self> {
        family.validate(true)?;
        Ok(Self(family))
    }

    /// The constant sequence `c`.
    pub fn constant(c: T) -> Self {
        Self(SequenceFamily::PowerLaw { c, p: T::zero() })
    }

    pub fn power_law(c: T, p: T) -> Result<Self> {
        Self::new(SequenceFamily::PowerLaw { c, p })
    }

    pub fn family(&self) -> &SequenceFamily<T> {
        &self.0
    }

    pub fn value_at(&self, n: usize) -> T {
        self.0.value_at(n)
    }

    /// `[0, κ_1, κ_1 + κ_2, …]` up to `Σ_{i<=n_max} κ_i`.
    pub fn prefix_sums(&self, n_max: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut acc = T::zero();
        out.push(acc);
        for i in 1..=n_max {
            acc = acc + self.value_at(i);
            out.push(acc);
        }
        out
    }

    /// Whether `Σ κ_n = -∞`.
    pub fn sum_diverges_to_minus_infinity(&self) -> Status {
        match &self.0 {
            SequenceFamily::PowerLaw { c, p } => {
                Status::from_bool(*c < T::zero() && *p <= T::one())
            }
            _ => Status::Fails,
        }
    }
}

/// Result of a numeric tail classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesFit<T> {
    pub status: Status,
    /// Partial sum over `1..=n_tail`.
    pub partial_sum: T,
    /// Fitted decay exponent `q` of the terms, when one was fitted.
    pub decay_exponent: Option<T>,
}

/// Least-squares slope of `ln|t_i|` against `ln i` over the last decade of
/// indices, negated. `terms[0]` is the term at index 1.
fn tail_decay_exponent<T: Scalar>(terms: &[T]) -> Option<T> {
    let n = terms.len();
    let start = (n / 10).max(1);
    let (mut sx, mut sy, mut sxx, mut sxy, mut m) =
        (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for (i, t) in terms.iter().enumerate().skip(start - 1) {
        let t = t.abs();
        if t > T::zero() && t.is_finite() {
            let x = T::from_index(i + 1).ln();
            let y = t.ln();
            sx = sx + x;
            sy = sy + y;
            sxx = sxx + x * x;
            sxy = sxy + x * y;
            m = m + T::one();
        }
    }
    if m < T::lit(2.0) {
        return None;
    }
    let denom = m * sxx - sx * sx;
    if denom <= T::zero() {
        return None;
    }
    Some(-(m * sxy - sx * sy) / denom)
}

fn tail_is_zero<T: Scalar>(terms: &[T]) -> bool {
    let start = (terms.len() / 10).max(1) - 1;
    terms[start..].iter().all(|t| *t == T::zero())
}

/// Decides `Σ |t_i| < ∞` from the terms at indices `1..=terms.len()`.
pub fn classify_convergent<T: Scalar>(terms: &[T]) -> SeriesFit<T> {
    let partial_sum = terms.iter().copied().sum();
    if terms.is_empty() || tail_is_zero(terms) {
        return SeriesFit {
            status: Status::Holds,
            partial_sum,
            decay_exponent: None,
        };
    }
    let q = tail_decay_exponent(terms);
    let status = match q {
        Some(q) if q >= T::lit(SUMMABLE_SLOPE) => Status::Holds,
        Some(q) if q <= T::lit(DIVERGENT_SLOPE) => Status::Fails,
        _ => Status::Inconclusive,
    };
    SeriesFit {
        status,
        partial_sum,
        decay_exponent: q,
    }
}

/// Decides `Σ |t_i| = ∞`; the mirror image of [`classify_convergent`].
pub fn classify_divergent<T: Scalar>(terms: &[T]) -> SeriesFit<T> {
    let mut fit = classify_convergent(terms);
    fit.status = match fit.status {
        Status::Holds => Status::Fails,
        Status::Fails => Status::Holds,
        Status::Inconclusive => Status::Inconclusive,
    };
    fit
}

/// Checks `Σ_{i>=1} S_i^α / |1 - E(1+ξ_{i+1})^α|^(α-1) < ∞` for `α > 1`.
pub fn weighted_condition8<T: Scalar>(
    seq: &CoefficientSequence<T>,
    noise: &NoiseModel<T>,
    alpha: T,
    n_tail: usize,
) -> Result<SeriesFit<T>> {
    if !(alpha > T::one()) {
        return Err(Error::InvalidParameter(format!(
            "condition (8) needs alpha > 1, got {alpha}"
        )));
    }
    let iid_gap = if noise.is_iid() {
        Some(noise.power_moment(1, alpha)? - T::one())
    } else {
        None
    };
    let mut terms = Vec::with_capacity(n_tail);
    for i in 1..=n_tail {
        let gap = match iid_gap {
            Some(g) => g,
            None => noise.power_moment(i + 1, alpha)? - T::one(),
        };
        if gap == T::zero() {
            return Err(Error::DivisionByZero {
                n: i,
                what: format!("E(1+ξ_{})^{alpha} = 1", i + 1),
            });
        }
        let s = seq.value_at(i);
        let t = if s == T::zero() {
            T::zero()
        } else {
            s.powf(alpha) / gap.abs().powf(alpha - T::one())
        };
        terms.push(t);
    }
    Ok(classify_convergent(&terms))
}

/// Result of the exponentially weighted summability check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpWeightedFit<T> {
    pub status: Status,
    /// `ln Σ_{n<=n_tail} e^{-Σ_{i<=n+1} κ_i} S_n^α`.
    pub log_partial_sum: T,
    /// A log-summand exceeded [`LOG_OVERFLOW`]; terms grow without bound.
    pub overflow: bool,
}

/// Checks `Σ_n e^{-Σ_{i=1}^{n+1} κ_i} S_n^α < ∞`, evaluated in log space.
pub fn thm32_exp_weighted<T: Scalar>(
    seq: &CoefficientSequence<T>,
    kappa: &KappaSequence<T>,
    alpha: T,
    n_tail: usize,
) -> ExpWeightedFit<T> {
    let prefix = kappa.prefix_sums(n_tail + 1);
    let mut logs = Vec::with_capacity(n_tail);
    let mut log_sum = T::neg_infinity();
    for n in 1..=n_tail {
        let s = seq.value_at(n);
        let l = if s == T::zero() {
            T::neg_infinity()
        } else {
            -prefix[n + 1] + alpha * s.ln()
        };
        if l > T::lit(LOG_OVERFLOW) {
            return ExpWeightedFit {
                status: Status::Fails,
                log_partial_sum: log_add_exp(log_sum, l),
                overflow: true,
            };
        }
        log_sum = log_add_exp(log_sum, l);
        logs.push(l);
    }

    let tail = &logs[(n_tail / 2).max(1) - 1..];
    let finite: Vec<T> = tail.iter().copied().filter(|l| l.is_finite()).collect();
    if finite.len() < tail.len() / 2 || finite.len() < 2 {
        // mostly exact zeros: finitely many non-zero terms
        return ExpWeightedFit {
            status: Status::Holds,
            log_partial_sum: log_sum,
            overflow: false,
        };
    }
    let log_margin = (T::one() - T::lit(RATIO_MARGIN)).ln();
    let steps = || finite.windows(2).map(|w| w[1] - w[0]);
    let geometric = steps().all(|d| d <= log_margin);
    let growing = steps().all(|d| d >= T::zero());

    let terms: Vec<T> = logs.iter().map(|l| l.exp()).collect();
    let slope_fit = classify_convergent(&terms);
    let status = if growing {
        Status::Fails
    } else if geometric && slope_fit.status != Status::Fails {
        Status::Holds
    } else {
        slope_fit.status
    };
    ExpWeightedFit {
        status,
        log_partial_sum: log_sum,
        overflow: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = CoefficientSequence<f64>;

    #[test]
    fn value_examples() {
        assert_eq!(S::power_law(1.0, 0.75).unwrap().value_at(16), 0.125);
        assert_eq!(S::zero().value_at(1_000_000), 0.0);
        assert_eq!(S::geometric(1.0, 0.25).unwrap().value_at(3), 0.015625);
        let t = S::new(SequenceFamily::Table(vec![3.0, 2.0])).unwrap();
        assert_eq!((t.value_at(1), t.value_at(2), t.value_at(3)), (3.0, 2.0, 0.0));
    }

    #[test]
    fn forcing_term_convention() {
        assert_eq!(S::geometric(1.0, 0.5).unwrap().term(0), 1.0);
        assert_eq!(S::power_law(1.0, 2.0).unwrap().term(0), 1.0);
        assert_eq!(S::power_law(1.0, 2.0).unwrap().term(2), 0.25);
    }

    #[test]
    fn summability_examples() {
        let s = S::power_law(1.0, 0.75).unwrap();
        assert_eq!(s.alpha_summable(2.0), Summability::Summable);
        let lemma = S::power_law(1.0, 1.0 / 1.5).unwrap();
        assert_eq!(lemma.alpha_summable(2.0), Summability::Summable);
        assert_eq!(lemma.alpha_summable(1.5), Summability::Divergent);
        let harmonic = S::power_law(1.0, 1.0).unwrap();
        assert_eq!(harmonic.alpha_summable(1.0), Summability::Divergent);
        assert_eq!(S::geometric(2.0, 0.9).unwrap().alpha_summable(0.01), Summability::Summable);
        assert_eq!(S::zero().alpha_summable(0.01), Summability::Summable);
    }

    #[test]
    fn rejects_negative_coefficient() {
        assert!(S::power_law(-1.0, 1.0).is_err());
        assert!(S::geometric(1.0, 1.0).is_err());
        assert!(KappaSequence::power_law(-1.0f64, 0.5).is_ok());
    }

    #[test]
    fn condition8_degenerate_noise() {
        let noise = NoiseModel::degenerate(-0.5f64).unwrap();
        let fast = weighted_condition8(&S::power_law(1.0, 1.0).unwrap(), &noise, 2.0, 10_000)
            .unwrap();
        assert_eq!(fast.status, Status::Holds);
        assert!((fast.decay_exponent.unwrap() - 2.0).abs() < 1e-9);
        let slow = weighted_condition8(&S::power_law(1.0, 0.4).unwrap(), &noise, 2.0, 10_000)
            .unwrap();
        assert_eq!(slow.status, Status::Fails);
        assert!((slow.decay_exponent.unwrap() - 0.8).abs() < 1e-9);
    }

    #[test]
    fn condition8_division_by_zero() {
        // E(1+ξ)^2 = 1 for ξ ≡ 0
        let noise = NoiseModel::degenerate(0.0f64).unwrap();
        let r = weighted_condition8(&S::power_law(1.0, 1.0).unwrap(), &noise, 2.0, 100);
        assert!(matches!(r, Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn exp_weighted_examples() {
        let kappa = KappaSequence::constant(-0.125f64);
        let geo = thm32_exp_weighted(&S::geometric(1.0, 0.25).unwrap(), &kappa, 1.0, 1000);
        assert_eq!(geo.status, Status::Holds);

        let poly = thm32_exp_weighted(&S::power_law(1.0, 2.0).unwrap(), &kappa, 1.0, DEFAULT_N_TAIL);
        assert_eq!(poly.status, Status::Fails);
        assert!(poly.overflow);

        let zero = KappaSequence::constant(0.0f64);
        let flat = thm32_exp_weighted(&S::power_law(1.0, 2.0).unwrap(), &zero, 1.0, DEFAULT_N_TAIL);
        assert_eq!(flat.status, Status::Holds);
        assert!(!flat.overflow);
        assert!((flat.log_partial_sum.exp() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-4);
        assert_eq!(zero.sum_diverges_to_minus_infinity(), Status::Fails);
    }

    #[test]
    fn kappa_divergence_rules() {
        assert_eq!(KappaSequence::constant(-0.125f64).sum_diverges_to_minus_infinity(), Status::Holds);
        let a = KappaSequence::power_law(-1.0f64, 0.5).unwrap();
        assert_eq!(a.sum_diverges_to_minus_infinity(), Status::Holds);
        let b = KappaSequence::power_law(-1.0f64, 2.0).unwrap();
        assert_eq!(b.sum_diverges_to_minus_infinity(), Status::Fails);
        let p = a.prefix_sums(4);
        assert_eq!(p.len(), 5);
        assert!((p[4] + (1.0 + 0.5f64.sqrt() + 1.0 / 3.0f64.sqrt() + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn powerlaw_strictly_decreasing() {
        let s = S::power_law(2.0, 0.3).unwrap();
        for n in 1..1000 {
            assert!(s.value_at(n + 1) < s.value_at(n));
        }
    }

    #[test]
    fn classifier_band() {
        let terms = |q: f64| (1..=10_000).map(|n| (n as f64).powf(-q)).collect::<Vec<_>>();
        assert_eq!(classify_convergent(&terms(1.2)).status, Status::Holds);
        assert_eq!(classify_convergent(&terms(1.0)).status, Status::Inconclusive);
        assert_eq!(classify_convergent(&terms(0.5)).status, Status::Fails);
        assert_eq!(classify_divergent(&terms(0.5)).status, Status::Holds);
        assert_eq!(classify_divergent(&vec![0.0; 100]).status, Status::Fails);
    }
}
