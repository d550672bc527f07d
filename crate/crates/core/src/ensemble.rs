//! Seeded Monte Carlo over independent paths and empirical estimators for
//! the asymptotic conclusions.
//!
//! "Converged" and "exceeded" are finite-horizon surrogates for `X_n → 0`
//! and `limsup X_n = ∞`. Every report carries the [`Surrogate`] it used.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::analysis::{check_theorem_3_2, critical_alpha, Conclusion};
use crate::engine::{
    path_rng, simulate_with_rng, EquationKind, EquationSpec, MartingaleTracker, PathSummary,
    SimulationOptions,
};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::scalar::Scalar;
use crate::sequences::{CoefficientSequence, KappaSequence, DEFAULT_N_TAIL};

/// Quantile levels reported for final values and running minima.
pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Finite surrogates: a path has converged if its last `window` recorded
/// values are all below `eps_conv`, and has exceeded if its running maximum
/// passes `c_div`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Surrogate<T> {
    pub eps_conv: T,
    pub window: usize,
    pub c_div: T,
}

impl<T: Scalar> Default for Surrogate<T> {
    fn default() -> Self {
        Self {
            eps_conv: T::lit(1e-2),
            window: 100,
            c_div: T::lit(1e2),
        }
    }
}

impl<T: Scalar> Surrogate<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_conv > T::zero()) || self.window == 0 {
            return Err(Error::InvalidParameter(
                "eps_conv must be positive and the window non-empty".into(),
            ));
        }
        if !(self.c_div > self.eps_conv) {
            return Err(Error::InvalidParameter(format!(
                "c_div = {} must exceed eps_conv = {}",
                self.c_div, self.eps_conv
            )));
        }
        Ok(())
    }

    pub fn converged(&self, path: &PathSummary<T>) -> bool {
        !path.overflow && path.tail_max < self.eps_conv
    }
}

/// Type-7 sample quantile (linear interpolation between order statistics).
/// `sorted` must be ascending and non-empty.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], level: f64) -> T {
    let h = (sorted.len() - 1) as f64 * level.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let (a, b) = (sorted[lo], sorted[hi]);
    if lo == hi || a == b {
        return a;
    }
    a + (b - a) * T::lit(h - lo as f64)
}

/// Type-7 quantiles of `values` at each level.
pub fn quantiles<T: Scalar>(values: &[T], levels: &[f64]) -> Vec<T> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("quantiles of NaN"));
    levels.iter().map(|&q| quantile_sorted(&sorted, q)).collect()
}

fn mean_and_se<T: Scalar>(values: &[T]) -> (T, T) {
    let n = T::from_index(values.len());
    let mean = values.iter().copied().sum::<T>() / n;
    if values.len() < 2 {
        return (mean, T::zero());
    }
    let ss: T = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let var = ss / (n - T::one());
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult<T> {
    pub horizon: usize,
    pub master_seed: u64,
    pub surrogate: Surrogate<T>,
    /// Per-path summaries in replica order.
    pub paths: Vec<PathSummary<T>>,
    pub p_converged: f64,
    /// Fraction of paths with running maximum above `surrogate.c_div`.
    pub p_exceeded: f64,
    /// Quantiles at [`QUANTILE_LEVELS`].
    pub final_quantiles: Vec<T>,
    pub running_min_quantiles: Vec<T>,
    pub martingale_mean: Option<T>,
    pub martingale_se: Option<T>,
}

impl<T: Scalar> EnsembleResult<T> {
    pub fn replicas(&self) -> usize {
        self.paths.len()
    }

    /// Fraction of paths with running maximum above `c`.
    pub fn p_exceeded_at(&self, c: T) -> f64 {
        self.fraction(|p| p.running_max > c)
    }

    /// Fraction of paths that passed above the level
    /// `thresholds_above[threshold_index]` at some index `<= n`.
    pub fn p_passed_above_by(&self, threshold_index: usize, n: usize) -> f64 {
        self.fraction(|p| {
            p.first_passage_above
                .get(threshold_index)
                .copied()
                .flatten()
                .is_some_and(|m| m <= n)
        })
    }

    fn fraction(&self, pred: impl Fn(&PathSummary<T>) -> bool) -> f64 {
        self.paths.iter().filter(|p| pred(p)).count() as f64 / self.paths.len() as f64
    }

    /// Quantile of `X_n` over paths at checkpoint `n`.
    pub fn checkpoint_quantile(&self, n: usize, level: f64) -> Result<T> {
        let values = self
            .paths
            .iter()
            .map(|p| p.checkpoint(n).map(|c| c.x))
            .collect::<Option<Vec<T>>>()
            .ok_or_else(|| Error::InvalidParameter(format!("{n} is not a recorded checkpoint")))?;
        Ok(quantiles(&values, &[level])[0])
    }

    /// One row per path: `replica,final,max,min,argmax,argmin,overflow,M_N`.
    pub fn paths_csv(&self) -> String {
        let mut out = String::from("replica,final,max,min,argmax,argmin,overflow,M_N\n");
        for (r, p) in self.paths.iter().enumerate() {
            let m = p.martingale.map(|m| format!("{m:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{r},{:e},{:e},{:e},{},{},{},{m}",
                p.final_value, p.running_max, p.running_min, p.argmax, p.argmin, p.overflow
            );
        }
        out
    }

    /// `statistic,value` rows, including the surrogate used.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("statistic,value\n");
        let mut row = |k: &str, v: String| {
            let _ = writeln!(out, "{k},{v}");
        };
        row("replicas", self.replicas().to_string());
        row("horizon", self.horizon.to_string());
        row("master_seed", self.master_seed.to_string());
        row("surrogate_eps_conv", format!("{:e}", self.surrogate.eps_conv));
        row("surrogate_window", self.surrogate.window.to_string());
        row("surrogate_c_div", format!("{:e}", self.surrogate.c_div));
        row("p_converged", self.p_converged.to_string());
        row("p_exceeded", self.p_exceeded.to_string());
        for (q, v) in QUANTILE_LEVELS.iter().zip(&self.final_quantiles) {
            row(&format!("final_q{q}"), format!("{v:e}"));
        }
        for (q, v) in QUANTILE_LEVELS.iter().zip(&self.running_min_quantiles) {
            row(&format!("running_min_q{q}"), format!("{v:e}"));
        }
        if let (Some(m), Some(se)) = (self.martingale_mean, self.martingale_se) {
            row("martingale_mean", format!("{m:e}"));
            row("martingale_se", format!("{se:e}"));
        }
        out
    }
}

/// Simulates `replicas` paths; path `r` draws from `path_rng(master_seed, r)`.
///
/// `options` supplies thresholds, checkpoints and tracking flags; its tail
/// window is replaced by `surrogate.window`.
pub fn run_ensemble<T: Scalar>(
    spec: &EquationSpec<T>,
    horizon: usize,
    replicas: usize,
    master_seed: u64,
    surrogate: Surrogate<T>,
    options: &SimulationOptions<T>,
) -> Result<EnsembleResult<T>> {
    if replicas == 0 {
        return Err(Error::InvalidParameter("replicas must be at least 1".into()));
    }
    surrogate.validate()?;
    if options.track_martingale {
        MartingaleTracker::new(spec)?;
    }
    let opts = SimulationOptions {
        tail_window: surrogate.window,
        ..options.clone()
    };
    let paths = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = path_rng(master_seed, r as u64);
            simulate_with_rng(spec, horizon, &mut rng, &opts).map(|p| p.summary)
        })
        .collect::<Result<Vec<_>>>()?;

    let count = |pred: &dyn Fn(&PathSummary<T>) -> bool| {
        paths.iter().filter(|p| pred(p)).count() as f64 / replicas as f64
    };
    let p_converged = count(&|p| surrogate.converged(p));
    let p_exceeded = count(&|p| p.running_max > surrogate.c_div);
    let finals: Vec<T> = paths.iter().map(|p| p.final_value).collect();
    let mins: Vec<T> = paths.iter().map(|p| p.running_min).collect();
    let (martingale_mean, martingale_se) = if options.track_martingale {
        let ms: Vec<T> = paths.iter().filter_map(|p| p.martingale).collect();
        let (m, se) = mean_and_se(&ms);
        (Some(m), Some(se))
    } else {
        (None, None)
    };
    Ok(EnsembleResult {
        horizon,
        master_seed,
        surrogate,
        final_quantiles: quantiles(&finals, &QUANTILE_LEVELS),
        running_min_quantiles: quantiles(&mins, &QUANTILE_LEVELS),
        paths,
        p_converged,
        p_exceeded,
        martingale_mean,
        martingale_se,
    })
}

/// Median and 95th percentile of `e^{-γ Σ_{i<=n} κ_i} X_n^α` at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayQuantiles<T> {
    pub n: usize,
    pub median: T,
    pub p95: T,
}

/// Empirical decay statistic for the linear recursion, computed from
/// `ln X_n` so that neither factor under- or overflows.
///
/// Refuses configurations for which the exponential-decay hypothesis check
/// does not conclude.
#[allow(clippy::too_many_arguments)]
pub fn decay_rate_check<T: Scalar>(
    spec: &EquationSpec<T>,
    kappa: &KappaSequence<T>,
    alpha: T,
    gamma_decay: T,
    checkpoints: &[usize],
    replicas: usize,
    master_seed: u64,
) -> Result<Vec<DecayQuantiles<T>>> {
    if *spec.kind() != EquationKind::Linear {
        return Err(Error::Precondition("decay check applies to the linear recursion".into()));
    }
    let noise = spec.noise().expect("linear spec carries noise");
    let verdict = check_theorem_3_2(noise, spec.forcing(), kappa, alpha, gamma_decay, DEFAULT_N_TAIL)?;
    if verdict.conclusion == Conclusion::NotApplicable {
        let unmet: Vec<&str> = verdict.unmet().map(|c| c.id).collect();
        return Err(Error::Precondition(format!(
            "decay hypotheses not met: {}",
            unmet.join(", ")
        )));
    }
    let horizon = checkpoints
        .iter()
        .copied()
        .max()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidParameter("at least one positive checkpoint".into()))?;
    let opts = SimulationOptions {
        track_log: true,
        extra_checkpoints: checkpoints.to_vec(),
        ..SimulationOptions::default()
    };
    let result = run_ensemble(spec, horizon, replicas, master_seed, Surrogate::default(), &opts)?;
    let kappa_sums = kappa.prefix_sums(horizon);
    checkpoints
        .iter()
        .map(|&n| {
            let stats: Vec<T> = result
                .paths
                .iter()
                .map(|p| {
                    let c = p.checkpoint(n).expect("requested checkpoint recorded");
                    let log_x = c.log_x.expect("log tracking on");
                    (alpha * log_x - gamma_decay * kappa_sums[n]).exp()
                })
                .collect();
            let q = quantiles(&stats, &[0.5, 0.95]);
            Ok(DecayQuantiles {
                n,
                median: q[0],
                p95: q[1],
            })
        })
        .collect()
}

pub fn decay_csv<T: Scalar>(rows: &[DecayQuantiles<T>]) -> String {
    let mut out = String::from("n,median,p95\n");
    for r in rows {
        let _ = writeln!(out, "{},{:e},{:e}", r.n, r.median, r.p95);
    }
    out
}

/// Quantiles of the running minimum over paths, at [`QUANTILE_LEVELS`].
pub fn liminf_estimator<T: Scalar>(
    spec: &EquationSpec<T>,
    horizon: usize,
    replicas: usize,
    master_seed: u64,
) -> Result<Vec<T>> {
    let r = run_ensemble(
        spec,
        horizon,
        replicas,
        master_seed,
        Surrogate::default(),
        &SimulationOptions::default(),
    )?;
    Ok(r.running_min_quantiles)
}

/// Position of `S_n = n^{-p}` relative to `α*`-summability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeClass {
    Summable,
    NotSummable,
    Boundary,
}

impl ProbeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeClass::Summable => "summable",
            ProbeClass::NotSummable => "not summable",
            ProbeClass::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow<T> {
    pub p: T,
    pub class: ProbeClass,
    pub p_converged: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSetup<T> {
    pub x0: T,
    pub horizon: usize,
    pub replicas: usize,
    pub master_seed: u64,
    pub surrogate: Surrogate<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureProbe<T> {
    pub alpha_star: T,
    pub surrogate: Surrogate<T>,
    pub rows: Vec<ProbeRow<T>>,
}

impl<T: Scalar> ConjectureProbe<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,p_times_alpha_star,summability,p_converged\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.p,
                r.p * self.alpha_star,
                r.class.as_str(),
                r.p_converged
            );
        }
        out
    }
}

/// Relative tolerance for classifying `p α*` as exactly 1.
const BOUNDARY_TOL: f64 = 1e-9;

/// Sweeps the linear recursion with `S_n = n^{-p}` over `p_grid` and reports
/// the convergence fraction per `p`. Results are reported, never asserted.
pub fn conjecture_probe<T: Scalar>(
    noise: &NoiseModel<T>,
    p_grid: &[T],
    setup: &ProbeSetup<T>,
) -> Result<ConjectureProbe<T>> {
    let alpha_star = critical_alpha(noise)?.alpha_star;
    let rows = p_grid
        .iter()
        .map(|&p| {
            let pa = p * alpha_star;
            let class = if (pa - T::one()).abs() <= T::lit(BOUNDARY_TOL) {
                ProbeClass::Boundary
            } else if pa > T::one() {
                ProbeClass::Summable
            } else {
                ProbeClass::NotSummable
            };
            let spec = EquationSpec::linear(
                setup.x0,
                noise.clone(),
                CoefficientSequence::power_law(T::one(), p)?,
            )?;
            let r = run_ensemble(
                &spec,
                setup.horizon,
                setup.replicas,
                setup.master_seed,
                setup.surrogate,
                &SimulationOptions::default(),
            )?;
            Ok(ProbeRow {
                p,
                class,
                p_converged: r.p_converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConjectureProbe {
        alpha_star,
        surrogate: setup.surrogate,
        rows,
    })
}
