//! Hypothesis checkers. Each returns a [`TheoremVerdict`] listing every
//! condition with the quantity it was decided from.
//!
//! Conditions on i.i.d. noise reduce to the sign of a single moment and are
//! decided exactly. Scheduled noise is decided numerically over indices
//! `1..=n_tail` with the tail classifiers of [`crate::sequences`].

use crate::engine::FeedbackFunction;
use crate::error::{Error, Result};
use crate::noise::{NoiseModel, PositivityContext};
use crate::scalar::Scalar;
use crate::sequences::{
    classify_convergent, classify_divergent, thm32_exp_weighted, weighted_condition8,
    CoefficientSequence, KappaSequence, SequenceFamily, Status, Summability,
};

use super::verdict::{Conclusion, TheoremId, TheoremVerdict, VerdictBuilder};

/// First index of the finite window on which "from some n on" provisos are
/// checked.
pub const PROVISO_START: usize = 10;

/// Flag attached to Itô-type verdicts: the conclusion holds only for a
/// sufficiently small step `k`, for which no explicit threshold is known.
pub const SMALL_K_FLAG: &str = "small_k_required";

/// Tolerance on the pointwise comparison `κ_i >= [E(1+ξ_{i+1})^α - 1]^-`.
const KAPPA_TOL: f64 = 1e-12;

/// Evaluates `g(n)` for `n ∈ 1..=n_tail`, or once when the noise is i.i.d.
fn moment_terms<T: Scalar>(
    noise: &NoiseModel<T>,
    n_tail: usize,
    offset: usize,
    g: impl Fn(usize) -> Result<T>,
) -> Result<MomentTerms<T>> {
    if noise.is_iid() {
        Ok(MomentTerms::Constant(g(1 + offset)?))
    } else {
        (1..=n_tail)
            .map(|i| g(i + offset))
            .collect::<Result<Vec<_>>>()
            .map(MomentTerms::Scheduled)
    }
}

enum MomentTerms<T> {
    Constant(T),
    Scheduled(Vec<T>),
}

impl<T: Scalar> MomentTerms<T> {
    /// `Σ [t]^+ < ∞`.
    fn positive_part_summable(&self) -> (Status, Option<T>) {
        match self {
            MomentTerms::Constant(d) => (Status::from_bool(*d <= T::zero()), Some(*d)),
            MomentTerms::Scheduled(v) => {
                let pos: Vec<T> = v.iter().map(|d| d.pos_part()).collect();
                let fit = classify_convergent(&pos);
                (fit.status, Some(fit.partial_sum))
            }
        }
    }

    /// `Σ [t]^- = -∞`.
    fn negative_part_diverges(&self) -> (Status, Option<T>) {
        match self {
            MomentTerms::Constant(d) => (Status::from_bool(*d < T::zero()), Some(*d)),
            MomentTerms::Scheduled(v) => {
                let neg: Vec<T> = v.iter().map(|d| d.neg_part()).collect();
                let fit = classify_divergent(&neg);
                (fit.status, Some(fit.partial_sum))
            }
        }
    }
}

fn summable_status<T: Scalar>(seq: &CoefficientSequence<T>, alpha: T) -> Status {
    Status::from_bool(seq.alpha_summable(alpha) == Summability::Summable)
}

fn require_positive(name: &str, v: impl Scalar) -> Result<()> {
    if v > Scalar::lit(0.0) && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Linear equation: existence of the limit and convergence to zero from
/// `α`-moments of `1 + ξ` and the decay of `S_n`.
pub fn check_theorem_3_1<T: Scalar>(
    noise: &NoiseModel<T>,
    seq: &CoefficientSequence<T>,
    alpha: T,
    n_tail: usize,
) -> Result<TheoremVerdict<T>> {
    require_positive("alpha", alpha)?;
    noise.validate_positivity(PositivityContext::Linear)?;
    let gaps = moment_terms(noise, n_tail, 1, |n| Ok(noise.power_moment(n, alpha)? - T::one()))?;

    let mut b = VerdictBuilder::new(TheoremId::T3_1);
    let (s6, q6) = gaps.positive_part_summable();
    b.condition("6", s6, q6);

    let decay_id = if alpha <= T::one() {
        b.condition("7", summable_status(seq, alpha), Some(alpha));
        "7"
    } else {
        let (status, q) = match &gaps {
            // constant weight: reduces to α-summability unless the weight vanishes
            MomentTerms::Constant(d) if *d == T::zero() => (Status::Fails, Some(*d)),
            MomentTerms::Constant(_) => (summable_status(seq, alpha), Some(alpha)),
            MomentTerms::Scheduled(_) => match weighted_condition8(seq, noise, alpha, n_tail) {
                Ok(fit) => (fit.status, Some(fit.partial_sum)),
                // a vanishing denominator makes the summand infinite
                Err(Error::DivisionByZero { .. }) => (Status::Fails, None),
                Err(e) => return Err(e),
            },
        };
        b.condition("8", status, q);
        "8"
    };

    let (s9, q9) = gaps.negative_part_diverges();
    b.condition("9", s9, q9);

    let strong: [&str; 3] = ["6", decay_id, "9"];
    let weak: [&str; 2] = ["6", decay_id];
    Ok(b.finish(&[
        (Conclusion::ConvergesToZero, &strong),
        (Conclusion::LimitExists, &weak),
    ]))
}

/// Linear equation: exponential decay rate `e^{-γ Σ κ_i} X_n^α → 0`.
pub fn check_theorem_3_2<T: Scalar>(
    noise: &NoiseModel<T>,
    seq: &CoefficientSequence<T>,
    kappa: &KappaSequence<T>,
    alpha: T,
    gamma_decay: T,
    n_tail: usize,
) -> Result<TheoremVerdict<T>> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(gamma_decay > T::zero() && gamma_decay < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "gamma_decay must lie in (0, 1), got {gamma_decay}"
        )));
    }
    noise.validate_positivity(PositivityContext::Linear)?;
    let gaps = moment_terms(noise, n_tail, 1, |n| Ok(noise.power_moment(n, alpha)? - T::one()))?;
    let tol = T::lit(KAPPA_TOL);
    let slack_at = |i: usize, d: T| {
        let k = kappa.value_at(i);
        (k - d.neg_part()) + tol * k.abs().max(T::one())
    };
    let min_slack = match &gaps {
        // a constant κ against constant moments is one comparison; otherwise
        // the whole window is scanned
        MomentTerms::Constant(d) if matches!(kappa.family(), SequenceFamily::PowerLaw { p, .. } if *p == T::zero()) => {
            slack_at(1, *d)
        }
        MomentTerms::Constant(d) => (1..=n_tail).map(|i| slack_at(i, *d)).fold(T::infinity(), T::min),
        MomentTerms::Scheduled(v) => v
            .iter()
            .enumerate()
            .map(|(i, d)| slack_at(i + 1, *d))
            .fold(T::infinity(), T::min),
    };

    let mut b = VerdictBuilder::new(TheoremId::T3_2);
    b.condition("10", Status::from_bool(min_slack >= T::zero()), Some(min_slack));
    b.condition("11", kappa.sum_diverges_to_minus_infinity(), None);
    let fit = thm32_exp_weighted(seq, kappa, alpha, n_tail);
    b.condition("exp_weighted", fit.status, Some(fit.log_partial_sum));
    b.condition("gamma_decay", Status::Holds, Some(gamma_decay));
    if fit.overflow {
        b.flag("exp_weighted_overflow");
    }
    Ok(b.finish(&[(
        Conclusion::ConvergesToZero,
        &["10", "11", "exp_weighted", "gamma_decay"],
    )]))
}

/// Homogeneous linear equation with i.i.d. noise: `X_n → 0` iff `E ln(1+ξ) < 0`.
pub fn check_theorem_4_2<T: Scalar>(
    noise: &NoiseModel<T>,
    seq: &CoefficientSequence<T>,
) -> Result<TheoremVerdict<T>> {
    if !noise.is_iid() {
        return Err(Error::NotIid);
    }
    noise.validate_positivity(PositivityContext::Linear)?;
    let l = noise.log_moment(1)?;
    let homogeneous = matches!(seq.family(), SequenceFamily::Zero)
        || matches!(seq.family(), SequenceFamily::PowerLaw { c, .. } if *c == T::zero());
    let mut b = VerdictBuilder::new(TheoremId::T4_2);
    b.condition("homogeneous", Status::from_bool(homogeneous), None);
    b.condition("log_moment_negative", Status::from_bool(l < T::zero()), Some(l));
    Ok(b.finish(&[(Conclusion::ConvergesToZero, &["homogeneous", "log_moment_negative"])]))
}

/// Linear equation with i.i.d. noise: `liminf X_n = 0` when `E ln(1+ξ) < 0`
/// and `S_n` is `α`-summable for some `α > 0`.
pub fn check_theorem_4_3<T: Scalar>(
    noise: &NoiseModel<T>,
    seq: &CoefficientSequence<T>,
) -> Result<TheoremVerdict<T>> {
    if !noise.is_iid() {
        return Err(Error::NotIid);
    }
    noise.validate_positivity(PositivityContext::Linear)?;
    let l = noise.log_moment(1)?;
    // power laws are α-summable for every α > 1/p; other families for all α
    let (some_alpha, threshold) = match seq.power_exponent() {
        Some(p) => (p > T::zero(), Some(p.recip())),
        None => (true, None),
    };
    let mut b = VerdictBuilder::new(TheoremId::T4_3);
    b.condition("log_moment_negative", Status::from_bool(l < T::zero()), Some(l));
    b.condition("alpha_summable_some", Status::from_bool(some_alpha), threshold);
    Ok(b.finish(&[(Conclusion::LiminfZero, &["log_moment_negative", "alpha_summable_some"])]))
}

/// Nonlinear equation with summable `S_n`: conditions on `E ξ_n`.
pub fn check_theorem_5_1<T: Scalar>(
    noise: &NoiseModel<T>,
    seq: &CoefficientSequence<T>,
    n_tail: usize,
) -> Result<TheoremVerdict<T>> {
    noise.validate_positivity(PositivityContext::Nonlinear)?;
    let means = moment_terms(noise, n_tail, 0, |n| noise.raw_moment(n, 1))?;
    let mut b = VerdictBuilder::new(TheoremId::T5_1);
    let (s21, q21) = means.positive_part_summable();
    b.condition("21", s21, q21);
    b.condition("S_summable", summable_status(seq, T::one()), None);
    let (s22, q22) = means.negative_part_diverges();
    b.condition("22", s22, q22);
    Ok(b.finish(&[
        (Conclusion::ConvergesToZero, &["21", "S_summable", "22"]),
        (Conclusion::LimitExists, &["21", "S_summable"]),
    ]))
}

/// Nonlinear equation with `α`-summable `S_n`, `α ∈ (0, 1)`: conditions on
/// the first three moments of `ξ_n`.
pub fn check_theorem_5_2<T: Scalar>(
    noise: &NoiseModel<T>,
    seq: &CoefficientSequence<T>,
    alpha: T,
    n_tail: usize,
) -> Result<TheoremVerdict<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    noise.validate_positivity(PositivityContext::Nonlinear)?;
    let two_minus = T::lit(2.0) - alpha;
    let three = T::lit(3.0);
    let means = moment_terms(noise, n_tail, 0, |n| noise.raw_moment(n, 1))?;
    // (E ξ², [E ξ³]^+) per index
    let pairs = moment_terms(noise, n_tail, 0, |n| {
        Ok(noise.raw_moment(n, 2)? - two_minus / three * noise.raw_moment(n, 3)?.pos_part())
    })?;

    let mut b = VerdictBuilder::new(TheoremId::T5_2);
    b.condition("alpha_summable", summable_status(seq, alpha), Some(alpha));
    let (s21, q21) = means.positive_part_summable();
    b.condition("21", s21, q21);

    // 3 E ξ² - (2-α)[E ξ³]^+ = 3 × the summand of (23)
    let (proviso, min_term, s23, q23) = match &pairs {
        MomentTerms::Constant(t) => {
            let pos = *t > T::zero();
            (pos, three * *t, Status::from_bool(pos), Some(*t))
        }
        MomentTerms::Scheduled(v) => {
            let window = &v[(PROVISO_START - 1).min(v.len())..];
            let min = window.iter().copied().fold(T::infinity(), T::min);
            let pos = min > T::zero();
            let fit = classify_divergent(v);
            let s = if pos { fit.status } else { Status::Fails };
            (pos, three * min, s, Some(fit.partial_sum))
        }
    };
    b.condition("proviso", Status::from_bool(proviso), Some(min_term));
    b.condition("23", s23, q23);
    Ok(b.finish(&[
        (Conclusion::ConvergesToZero, &["alpha_summable", "21", "proviso", "23"]),
        (Conclusion::LimitExists, &["alpha_summable", "21"]),
    ]))
}

/// `α₀ = (E ζ² - 2a) / E ζ²`.
pub fn alpha_zero<T: Scalar>(zeta: &NoiseModel<T>, a: T) -> Result<T> {
    let var = zeta.raw_moment(1, 2)?;
    if var <= T::zero() {
        return Err(Error::Precondition("E ζ² must be positive".into()));
    }
    Ok((var - T::lit(2.0) * a) / var)
}

/// Itô-type recursion: stabilisation of a positive drift by the diffusion.
pub fn check_theorem_5_4<T: Scalar>(
    zeta: &NoiseModel<T>,
    a: T,
    k: T,
    seq: &CoefficientSequence<T>,
    alpha: T,
) -> Result<TheoremVerdict<T>> {
    if !zeta.is_iid() {
        return Err(Error::NotIid);
    }
    if !(a >= T::zero()) {
        return Err(Error::InvalidParameter(format!("drift a must be >= 0, got {a}")));
    }
    require_positive("k", k)?;
    require_positive("alpha", alpha)?;
    let mean = zeta.raw_moment(1, 1)?;
    if mean.abs() > T::abs_tol() {
        return Err(Error::Precondition(format!("E ζ must be 0, got {mean}")));
    }
    let var = zeta.raw_moment(1, 2)?;
    // E|ζ|³ < ∞ is equivalent to a finite third moment for these families
    zeta.raw_moment(1, 3)?;
    let alpha0 = alpha_zero(zeta, a)?;
    let half_var = var / T::lit(2.0);

    let mut b = VerdictBuilder::new(TheoremId::T5_4);
    b.condition("drift_below_half_variance", Status::from_bool(a < half_var), Some(half_var));
    b.condition("alpha_below_alpha0", Status::from_bool(alpha < alpha0), Some(alpha0));
    b.condition("alpha_summable", summable_status(seq, alpha), Some(alpha));
    let positivity = zeta.validate_positivity(PositivityContext::Ito { a, k });
    let worst = crate::noise::ito_min_factor(a, k, zeta.law(1)?.inf_support());
    b.condition("25", Status::from_bool(positivity.is_ok()), Some(worst));
    b.flag(SMALL_K_FLAG);
    Ok(b.finish(&[(
        Conclusion::ConvergesToZero,
        &["drift_below_half_variance", "alpha_below_alpha0", "alpha_summable", "25"],
    )]))
}

/// Whether `S_n / a_n → 0`, decided from the symbolic families.
fn ratio_vanishes<T: Scalar>(seq: &CoefficientSequence<T>, drift: &KappaSequence<T>) -> Status {
    use SequenceFamily::*;
    let s_finite = matches!(seq.family(), Zero | Table(_))
        || matches!(seq.family(), PowerLaw { c, .. } if *c == T::zero());
    match drift.family() {
        PowerLaw { c, p } if *c != T::zero() => match seq.family() {
            _ if s_finite => Status::Holds,
            Geometric { .. } => Status::Holds,
            PowerLaw { p: ps, .. } => Status::from_bool(*ps > *p),
            _ => Status::Fails,
        },
        Geometric { c, r } if *c != T::zero() => match seq.family() {
            _ if s_finite => Status::Holds,
            Geometric { r: rs, .. } => Status::from_bool(*rs < *r),
            _ => Status::Fails,
        },
        _ => Status::Fails,
    }
}

/// Noiseless nonlinear recursion `x_{n+1} = x_n (1 + f(x_n) a_{n+1}) + S_n`.
///
/// The interval condition `-1 < a_n < 0` is checked on the tail window
/// `[PROVISO_START, n_tail]`; finitely many early terms do not affect the
/// limit as long as they keep the state positive, which `a_n >= -1` ensures
/// for `f <= 1`. That weaker bound is checked over the whole window.
pub fn check_lemma_6_1<T: Scalar>(
    f: FeedbackFunction,
    drift: &KappaSequence<T>,
    seq: &CoefficientSequence<T>,
    n_tail: usize,
) -> Result<TheoremVerdict<T>> {
    let start = PROVISO_START.min(n_tail.max(1));
    let mut in_interval = true;
    let mut keeps_positive = true;
    let mut extreme = T::neg_infinity();
    for n in 1..=n_tail.max(1) {
        let a = drift.value_at(n);
        keeps_positive &= a >= -T::one() && a.is_finite();
        if n >= start {
            in_interval &= a < T::zero() && a > -T::one();
            extreme = extreme.max(a);
        }
    }
    let gain = f.min_weighted_gain::<T>();
    let mut b = VerdictBuilder::new(TheoremId::L6_1);
    b.condition("a_in_interval", Status::from_bool(in_interval && keeps_positive), Some(extreme));
    b.condition("a_sum_diverges", drift.sum_diverges_to_minus_infinity(), None);
    b.condition("ratio_vanishes", ratio_vanishes(seq, drift), None);
    b.condition(
        "f_admissible",
        Status::from_bool(f.vanishes_at_zero() && gain > T::zero()),
        Some(gain),
    );
    Ok(b.finish(&[(
        Conclusion::ConvergesToZero,
        &["a_in_interval", "a_sum_diverges", "ratio_vanishes", "f_admissible"],
    )]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{NoiseFamily, Schedule};

    const N_TAIL: usize = 100_000;

    type S = CoefficientSequence<f64>;

    fn section3_noise() -> NoiseModel<f64> {
        NoiseModel::new(NoiseFamily::TwoPoint {
            lo: Schedule::parse("-1*n^(-1/3)").unwrap(),
            hi: Schedule::Sqrt,
            p_hi: Schedule::parse("n^-2").unwrap(),
        })
        .unwrap()
    }

    fn section51_noise() -> NoiseModel<f64> {
        NoiseModel::new(NoiseFamily::UniformInterval {
            lo: Schedule::parse("n^-2 - 1").unwrap(),
            hi: Schedule::Const(1.0),
        })
        .unwrap()
    }

    fn skewed() -> NoiseModel<f64> {
        NoiseModel::two_point(-0.5, 1.0, 0.25).unwrap()
    }

    #[test]
    fn t31_section3_example() {
        let v = check_theorem_3_1(&section3_noise(), &S::power_law(1.0, 0.75).unwrap(), 2.0, N_TAIL)
            .unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero, "{}", v.to_text());
        assert_eq!(v.condition("8").unwrap().status, Status::Holds);
    }

    #[test]
    fn t31_iid_skewed() {
        let v = check_theorem_3_1(&skewed(), &S::power_law(1.0, 2.0).unwrap(), 1.0, N_TAIL).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero);
        assert_eq!(v.condition("9").unwrap().quantity, Some(-0.125));
    }

    #[test]
    fn t31_pareto_boundary() {
        let noise = NoiseModel::pareto(2.0, 0.5).unwrap();
        let v = check_theorem_3_1(&noise, &S::power_law(1.0, 2.0).unwrap(), 1.0, N_TAIL).unwrap();
        assert_eq!(v.conclusion, Conclusion::LimitExists);
        assert_eq!(v.condition("9").unwrap().status, Status::Fails);
    }

    #[test]
    fn t31_propagates_non_finite() {
        let noise = NoiseModel::pareto(2.0, 0.5).unwrap();
        let r = check_theorem_3_1(&noise, &S::power_law(1.0, 2.0).unwrap(), 2.5, N_TAIL);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn t32_examples() {
        let kappa = KappaSequence::constant(-0.125);
        let ok = check_theorem_3_2(&skewed(), &S::geometric(1.0, 0.25).unwrap(), &kappa, 1.0, 0.5, N_TAIL)
            .unwrap();
        assert_eq!(ok.conclusion, Conclusion::ConvergesToZero, "{}", ok.to_text());
        assert_eq!(ok.condition("10").unwrap().status, Status::Holds);

        let slow = check_theorem_3_2(&skewed(), &S::power_law(1.0, 2.0).unwrap(), &kappa, 1.0, 0.5, N_TAIL)
            .unwrap();
        assert_eq!(slow.condition("exp_weighted").unwrap().status, Status::Fails);
        assert_eq!(slow.conclusion, Conclusion::NotApplicable);

        let zero = KappaSequence::constant(0.0);
        let v = check_theorem_3_2(&skewed(), &S::geometric(1.0, 0.25).unwrap(), &zero, 1.0, 0.5, N_TAIL)
            .unwrap();
        assert_eq!(v.condition("11").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::NotApplicable);
    }

    #[test]
    fn t32_kappa_too_negative() {
        let kappa = KappaSequence::constant(-0.2);
        let v = check_theorem_3_2(&skewed(), &S::geometric(1.0, 0.25).unwrap(), &kappa, 1.0, 0.5, N_TAIL)
            .unwrap();
        assert_eq!(v.condition("10").unwrap().status, Status::Fails);
        assert!(check_theorem_3_2(&skewed(), &S::zero(), &kappa, 1.5, 0.5, 10).is_err());
        assert!(check_theorem_3_2(&skewed(), &S::zero(), &kappa, 1.0, 1.0, 10).is_err());
    }

    #[test]
    fn t42_t43() {
        let v = check_theorem_4_2(&skewed(), &S::zero()).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero);
        let v = check_theorem_4_2(&NoiseModel::degenerate(0.0).unwrap(), &S::zero()).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotApplicable);
        let sym = NoiseModel::two_point(-0.5, 0.5, 0.5).unwrap();
        let v = check_theorem_4_3(&sym, &S::power_law(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(v.conclusion, Conclusion::LiminfZero);
        assert_eq!(check_theorem_4_3(&section3_noise(), &S::zero()), Err(Error::NotIid));
    }

    #[test]
    fn t51_examples() {
        let v = check_theorem_5_1(&skewed(), &S::power_law(1.0, 2.0).unwrap(), N_TAIL).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero);
        let v = check_theorem_5_1(&section51_noise(), &S::power_law(1.0, 2.0).unwrap(), N_TAIL).unwrap();
        assert_eq!(v.condition("21").unwrap().status, Status::Holds);
        assert_eq!(v.condition("22").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::LimitExists);
        let v = check_theorem_5_1(&skewed(), &S::power_law(1.0, 1.0).unwrap(), N_TAIL).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotApplicable);
    }

    #[test]
    fn t52_examples() {
        let v = check_theorem_5_2(&section51_noise(), &S::power_law(1.0, 3.0).unwrap(), 0.5, N_TAIL).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero, "{}", v.to_text());

        let u = NoiseModel::uniform(-0.5, 0.6).unwrap();
        let v = check_theorem_5_2(&u, &S::power_law(1.0, 3.0).unwrap(), 0.5, N_TAIL).unwrap();
        assert_eq!(v.condition("21").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::NotApplicable);

        let d = NoiseModel::degenerate(0.0).unwrap();
        let v = check_theorem_5_2(&d, &S::power_law(1.0, 3.0).unwrap(), 0.5, N_TAIL).unwrap();
        assert_eq!(v.condition("23").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::LimitExists);

        assert!(check_theorem_5_2(&d, &S::zero(), 1.0, 10).is_err());
    }

    #[test]
    fn t54_examples() {
        let zeta = NoiseModel::two_point(-1.0, 1.0, 0.5).unwrap();
        assert_eq!(alpha_zero(&zeta, 0.25).unwrap(), 0.5);
        let v = check_theorem_5_4(&zeta, 0.25, 0.01, &S::power_law(1.0, 4.0).unwrap(), 0.3).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero, "{}", v.to_text());
        assert_eq!(v.condition("alpha_below_alpha0").unwrap().quantity, Some(0.5));
        assert!(v.has_flag(SMALL_K_FLAG));

        let v = check_theorem_5_4(&zeta, 0.6, 0.01, &S::power_law(1.0, 4.0).unwrap(), 0.3).unwrap();
        assert_eq!(v.condition("drift_below_half_variance").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::NotApplicable);

        let biased = NoiseModel::two_point(-1.0, 1.0, 0.6).unwrap();
        assert!(matches!(
            check_theorem_5_4(&biased, 0.25, 0.01, &S::zero(), 0.3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn l61_examples() {
        let f = FeedbackFunction::MinAbsOne;
        let a = KappaSequence::power_law(-1.0, 0.5).unwrap();
        let v = check_lemma_6_1(f, &a, &S::power_law(1.0, 1.0).unwrap(), N_TAIL).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConvergesToZero, "{}", v.to_text());

        let fast = KappaSequence::power_law(-1.0, 2.0).unwrap();
        let v = check_lemma_6_1(f, &fast, &S::power_law(1.0, 1.0).unwrap(), N_TAIL).unwrap();
        assert_eq!(v.condition("a_sum_diverges").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::NotApplicable);

        let v = check_lemma_6_1(f, &a, &S::power_law(1.0, 0.5).unwrap(), N_TAIL).unwrap();
        assert_eq!(v.condition("ratio_vanishes").unwrap().status, Status::Fails);
        assert_eq!(v.conclusion, Conclusion::NotApplicable);

        let v = check_lemma_6_1(FeedbackFunction::One, &a, &S::power_law(1.0, 1.0).unwrap(), 100).unwrap();
        assert_eq!(v.condition("f_admissible").unwrap().status, Status::Fails);
    }

    #[test]
    fn not_applicable_only_when_required_fail() {
        let v = check_theorem_5_1(&section51_noise(), &S::power_law(1.0, 2.0).unwrap(), 1000).unwrap();
        if v.conclusion != Conclusion::NotApplicable {
            assert!(v.conditions.iter().filter(|c| c.required).all(|c| c.status == Status::Holds));
        }
    }
}
