//! A noise distribution with its parameters fixed at one index.

use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::Scalar;

/// Distribution of a single `ξ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law<T> {
    /// `hi` with probability `p_hi`, `lo` otherwise.
    TwoPoint { lo: T, hi: T, p_hi: T },
    /// Uniform on `[lo, hi]`.
    Uniform { lo: T, hi: T },
    /// `1 + ξ` has density `γ a^γ / x^(1+γ)` on `(a, ∞)`.
    Pareto { gamma: T, scale: T },
    Degenerate(T),
}

impl<T: Scalar> Law<T> {
    /// Atoms with positive mass, as `(value, probability)`.
    fn atoms(&self) -> Option<[(T, T); 2]> {
        match *self {
            Law::TwoPoint { lo, hi, p_hi } => Some([(lo, T::one() - p_hi), (hi, p_hi)]),
            Law::Degenerate(c) => Some([(c, T::one()), (c, T::zero())]),
            _ => None,
        }
    }

    /// `Σ p g(x)` over atoms with positive mass. Zero-mass atoms are skipped
    /// so that a boundary atom at `-1` never produces `0 * ∞`.
    fn atom_expectation(atoms: [(T, T); 2], g: impl Fn(T) -> T) -> T {
        atoms
            .iter()
            .filter(|(_, w)| *w > T::zero())
            .map(|&(x, w)| w * g(x))
            .sum()
    }

    /// Infimum of the support, counting only atoms with positive mass.
    pub fn inf_support(&self) -> T {
        match *self {
            Law::TwoPoint { lo, hi, p_hi } => {
                if p_hi >= T::one() {
                    hi
                } else if p_hi <= T::zero() {
                    lo
                } else {
                    lo.min(hi)
                }
            }
            Law::Uniform { lo, .. } => lo,
            Law::Pareto { scale, .. } => scale - T::one(),
            Law::Degenerate(c) => c,
        }
    }

    /// Supremum of the support; infinite for the Pareto tail.
    pub fn sup_support(&self) -> T {
        match *self {
            Law::TwoPoint { lo, hi, p_hi } => {
                if p_hi >= T::one() {
                    hi
                } else if p_hi <= T::zero() {
                    lo
                } else {
                    lo.max(hi)
                }
            }
            Law::Uniform { hi, .. } => hi,
            Law::Pareto { .. } => T::infinity(),
            Law::Degenerate(c) => c,
        }
    }

    /// `P(ξ > 0) > 0`.
    pub fn has_positive_mass(&self) -> bool {
        self.sup_support() > T::zero()
    }

    /// Maps a uniform draw `u ∈ (0, 1)` to a draw of `ξ`.
    ///
    /// Two-point laws return `hi` when `u < p_hi`; the Pareto tail uses the
    /// inverse CDF `1 + ξ = a u^(-1/γ)`.
    #[inline]
    pub fn from_uniform(&self, u: T) -> T {
        match *self {
            Law::TwoPoint { lo, hi, p_hi } => {
                if u < p_hi {
                    hi
                } else {
                    lo
                }
            }
            Law::Uniform { lo, hi } => lo + (hi - lo) * u,
            Law::Pareto { gamma, scale } => scale * u.powf(-gamma.recip()) - T::one(),
            Law::Degenerate(c) => c,
        }
    }

    /// `1 + ξ > 0` almost surely. A continuous law may touch `-1` at an
    /// endpoint, which carries no mass.
    pub fn factor_positive(&self) -> bool {
        let inf = self.inf_support();
        match self {
            Law::Uniform { .. } => inf >= -T::one(),
            _ => inf > -T::one(),
        }
    }

    pub(crate) fn require_positive_factor(&self) -> Result<()> {
        let inf = self.inf_support();
        if self.factor_positive() {
            Ok(())
        } else {
            Err(Error::Positivity {
                n: 0,
                bound: inf.as_f64(),
            })
        }
    }

    /// `E(1+ξ)^α`.
    pub fn power_moment(&self, alpha: T) -> Result<T> {
        self.require_positive_factor()?;
        if !(alpha > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if let Some(atoms) = self.atoms() {
            return Ok(Self::atom_expectation(atoms, |x| (T::one() + x).powf(alpha)));
        }
        match *self {
            Law::Uniform { lo, hi } => {
                let e = alpha + T::one();
                Ok(((T::one() + hi).powf(e) - (T::one() + lo).powf(e)) / (e * (hi - lo)))
            }
            Law::Pareto { gamma, scale } => {
                if alpha >= gamma {
                    Err(Error::NonFinite(format!(
                        "E(1+ξ)^{alpha} diverges for Pareto shape {gamma}"
                    )))
                } else {
                    Ok(gamma * scale.powf(alpha) / (gamma - alpha))
                }
            }
            _ => unreachable!(),
        }
    }

    /// `E ln(1+ξ)`.
    pub fn log_moment(&self) -> Result<T> {
        self.require_positive_factor()?;
        if let Some(atoms) = self.atoms() {
            return Ok(Self::atom_expectation(atoms, |x| x.ln_1p()));
        }
        match *self {
            Law::Uniform { lo, hi } => {
                // antiderivative of ln y is y ln y - y, with y ln y -> 0 at 0
                let anti = |y: T| {
                    if y == T::zero() {
                        T::zero()
                    } else {
                        y * y.ln() - y
                    }
                };
                Ok((anti(T::one() + hi) - anti(T::one() + lo)) / (hi - lo))
            }
            // ln(1+ξ) - ln a is exponential with rate γ
            Law::Pareto { gamma, scale } => Ok(scale.ln() + gamma.recip()),
            _ => unreachable!(),
        }
    }

    /// `E ξ^k`.
    pub fn raw_moment(&self, k: u32) -> Result<T> {
        if k == 0 {
            return Ok(T::one());
        }
        if let Some(atoms) = self.atoms() {
            return Ok(Self::atom_expectation(atoms, |x| x.powi(k as i32)));
        }
        match *self {
            Law::Uniform { lo, hi } => {
                let e = (k + 1) as i32;
                Ok((hi.powi(e) - lo.powi(e)) / (T::from_index(k as usize + 1) * (hi - lo)))
            }
            Law::Pareto { gamma, scale } => {
                let kf = T::from_index(k as usize);
                if kf >= gamma {
                    return Err(Error::NonFinite(format!(
                        "E ξ^{k} diverges for Pareto shape {gamma}"
                    )));
                }
                // ξ = Y - 1, E Y^j = γ a^j / (γ - j)
                let mut total = T::zero();
                let mut binom = T::one();
                for j in 0..=k {
                    let jf = T::from_index(j as usize);
                    let ey = gamma * scale.powi(j as i32) / (gamma - jf);
                    let sign = if (k - j) % 2 == 0 { T::one() } else { -T::one() };
                    total = total + sign * binom * ey;
                    binom = binom * T::from_index((k - j) as usize) / T::from_index(j as usize + 1);
                }
                Ok(total)
            }
            _ => unreachable!(),
        }
    }

    /// `E[(2+ξ) ln²(1+ξ)]`.
    pub fn log_square_weighted(&self) -> Result<T> {
        self.require_positive_factor()?;
        let two = T::lit(2.0);
        if let Some(atoms) = self.atoms() {
            return Ok(Self::atom_expectation(atoms, |x| {
                let l = x.ln_1p();
                (two + x) * l * l
            }));
        }
        match *self {
            Law::Uniform { lo, hi } => {
                // substitute y = 1 + ξ: ∫ (1+y) ln² y dy over [1+lo, 1+hi]
                let integral = quadrature::integrate(
                    |y: T| {
                        let l = y.ln();
                        (T::one() + y) * l * l
                    },
                    T::one() + lo,
                    T::one() + hi,
                    T::abs_tol(),
                )?;
                Ok(integral / (hi - lo))
            }
            Law::Pareto { gamma, scale } => {
                if gamma <= T::one() {
                    return Err(Error::NonFinite(format!(
                        "E[(2+ξ) ln²(1+ξ)] diverges for Pareto shape {gamma}"
                    )));
                }
                // Y = a e^E with E ~ Exp(γ); L = ln a
                let l = scale.ln();
                let g = gamma;
                let g1 = gamma - T::one();
                let e_ln2 = l * l + two * l / g + two / (g * g);
                let e_y_ln2 =
                    scale * g * (l * l / g1 + two * l / (g1 * g1) + two / (g1 * g1 * g1));
                Ok(e_ln2 + e_y_ln2)
            }
            _ => unreachable!(),
        }
    }

    /// `E[(1 + w ξ)^(-1)]` for a feedback weight `w ∈ [0, 1]`.
    pub fn mean_inverse(&self, w: T) -> Result<T> {
        if w == T::zero() {
            return Ok(T::one());
        }
        self.require_positive_factor()?;
        if let Some(atoms) = self.atoms() {
            return Ok(Self::atom_expectation(atoms, |x| (T::one() + w * x).recip()));
        }
        match *self {
            Law::Uniform { lo, hi } => {
                let m = ((w * hi).ln_1p() - (w * lo).ln_1p()) / (w * (hi - lo));
                if m.is_finite() {
                    Ok(m)
                } else {
                    Err(Error::NonFinite("E[(1+ξ)^-1] diverges at the endpoint -1".into()))
                }
            }
            Law::Pareto { .. } => Err(Error::Unsupported(
                "martingale tracker needs noise bounded on both sides".into(),
            )),
            _ => unreachable!(),
        }
    }
}
