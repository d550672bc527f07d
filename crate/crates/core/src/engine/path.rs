use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{log_add_exp, Scalar};

use super::{EquationSpec, MartingaleTracker};

pub const DEFAULT_RECORD_STRIDE: usize = 64;
pub const DEFAULT_TAIL_WINDOW: usize = 100;

/// Independent stream for path `replica` under `master_seed`. Streams are
/// derived per index, so a path's draws do not depend on which other paths
/// were simulated.
pub fn path_rng(master_seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replica);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions<T> {
    pub track_martingale: bool,
    /// Track `ln X_n` exactly alongside `X_n`, immune to underflow.
    pub track_log: bool,
    /// Levels `τ` for the first index with `X_n < τ`.
    pub thresholds_below: Vec<T>,
    /// Levels `C` for the first index with `X_n > C`.
    pub thresholds_above: Vec<T>,
    /// Every `record_stride`-th index is recorded, as are powers of two,
    /// `extra_checkpoints` and the horizon.
    pub record_stride: usize,
    pub extra_checkpoints: Vec<usize>,
    /// Number of final steps over which [`PathSummary::tail_max`] is taken.
    pub tail_window: usize,
    /// Keep every recorded `(n, X_n)` pair, not only the checkpoints.
    pub keep_trajectory: bool,
}

impl<T> Default for SimulationOptions<T> {
    fn default() -> Self {
        Self {
            track_martingale: false,
            track_log: false,
            thresholds_below: Vec::new(),
            thresholds_above: Vec::new(),
            record_stride: DEFAULT_RECORD_STRIDE,
            extra_checkpoints: Vec::new(),
            tail_window: DEFAULT_TAIL_WINDOW,
            keep_trajectory: false,
        }
    }
}

/// State at a checkpoint index. After an overflow both values are `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint<T> {
    pub n: usize,
    pub x: T,
    /// `ln X_n` when log tracking is on.
    pub log_x: Option<T>,
}

/// Streaming statistics of one path over `n = 0..=horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSummary<T> {
    pub horizon: usize,
    /// `X_N`, or `+∞` after an overflow.
    pub final_value: T,
    pub running_max: T,
    pub running_min: T,
    pub argmax: usize,
    pub argmin: usize,
    pub first_passage_below: Vec<Option<usize>>,
    pub first_passage_above: Vec<Option<usize>>,
    /// `M_N` when the tracker is on.
    pub martingale: Option<T>,
    pub martingale_mean_abs_dev: Option<T>,
    pub overflow: bool,
    /// `max X_n` over the last `tail_window` indices `n <= horizon`.
    pub tail_max: T,
    /// Powers of two, extra checkpoints and the horizon, in index order.
    pub checkpoints: Vec<Checkpoint<T>>,
}

impl<T: Scalar> PathSummary<T> {
    pub fn checkpoint(&self, n: usize) -> Option<&Checkpoint<T>> {
        self.checkpoints
            .binary_search_by_key(&n, |c| c.n)
            .ok()
            .map(|i| &self.checkpoints[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path<T> {
    pub summary: PathSummary<T>,
    /// Recorded `(n, X_n)` pairs, starting at `n = 0`; empty unless requested.
    pub trajectory: Vec<(usize, T)>,
}

/// Simulates `horizon` steps with the stream `path_rng(seed, 0)`.
pub fn simulate<T: Scalar>(
    spec: &EquationSpec<T>,
    horizon: usize,
    seed: u64,
    options: &SimulationOptions<T>,
) -> Result<Path<T>> {
    simulate_with_rng(spec, horizon, &mut path_rng(seed, 0), options)
}

pub fn simulate_with_rng<T: Scalar, R: Rng + ?Sized>(
    spec: &EquationSpec<T>,
    horizon: usize,
    rng: &mut R,
    options: &SimulationOptions<T>,
) -> Result<Path<T>> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    if options.record_stride == 0 || options.tail_window == 0 {
        return Err(Error::InvalidParameter(
            "record stride and tail window must be positive".into(),
        ));
    }
    let mut tracker = if options.track_martingale {
        Some(MartingaleTracker::new(spec)?)
    } else {
        None
    };
    let mut extra = options.extra_checkpoints.clone();
    extra.sort_unstable();
    extra.dedup();
    let mut extra = extra.into_iter().filter(|&n| n <= horizon).peekable();

    let x0 = spec.x0();
    let mut x = x0;
    let mut log_x = if options.track_log { Some(x0.ln()) } else { None };
    let mut s = PathSummary {
        horizon,
        final_value: x0,
        running_max: x0,
        running_min: x0,
        argmax: 0,
        argmin: 0,
        first_passage_below: options.thresholds_below.iter().map(|&t| (x0 < t).then_some(0)).collect(),
        first_passage_above: options.thresholds_above.iter().map(|&c| (x0 > c).then_some(0)).collect(),
        martingale: None,
        martingale_mean_abs_dev: None,
        overflow: false,
        tail_max: x0,
        checkpoints: Vec::new(),
    };
    let tail_start = horizon.saturating_sub(options.tail_window - 1);
    let mut tail_max = if tail_start == 0 { x0 } else { T::neg_infinity() };
    let mut trajectory = Vec::new();
    if options.keep_trajectory {
        trajectory.push((0, x0));
    }

    for n in 0..horizon {
        let next_n = n + 1;
        if !s.overflow {
            let innovation = spec.draw(n, rng);
            if let Some(t) = tracker.as_mut() {
                t.update(n, x, innovation)?;
            }
            match spec.step_with(x, n, innovation) {
                Ok(next) => {
                    if let Some(l) = log_x.as_mut() {
                        let factor = spec.factor(x, n, innovation);
                        let forcing = spec.forcing().term(n);
                        *l = log_add_exp(*l + factor.ln(), forcing.ln());
                    }
                    x = next;
                }
                Err(Error::Overflow { .. }) => {
                    s.overflow = true;
                    x = T::infinity();
                    log_x = log_x.map(|_| T::infinity());
                }
                Err(e) => return Err(e),
            }
            if x > s.running_max {
                s.running_max = x;
                s.argmax = next_n;
            }
            if x < s.running_min {
                s.running_min = x;
                s.argmin = next_n;
            }
            for (slot, &t) in s.first_passage_below.iter_mut().zip(&options.thresholds_below) {
                if slot.is_none() && x < t {
                    *slot = Some(next_n);
                }
            }
            for (slot, &c) in s.first_passage_above.iter_mut().zip(&options.thresholds_above) {
                if slot.is_none() && x > c {
                    *slot = Some(next_n);
                }
            }
        }

        let requested = extra.next_if_eq(&next_n).is_some();
        let is_checkpoint = requested || next_n.is_power_of_two() || next_n == horizon;
        if is_checkpoint {
            s.checkpoints.push(Checkpoint { n: next_n, x, log_x });
        }
        if next_n >= tail_start {
            tail_max = tail_max.max(x);
        }
        if options.keep_trajectory && (is_checkpoint || next_n % options.record_stride == 0) {
            trajectory.push((next_n, x));
        }
    }

    s.final_value = x;
    s.tail_max = tail_max;
    if let Some(t) = tracker {
        s.martingale = Some(t.value());
        s.martingale_mean_abs_dev = Some(t.mean_abs_dev());
    }
    Ok(Path {
        summary: s,
        trajectory,
    })
}

/// Trajectory as CSV with header `n,x`.
pub fn trajectory_csv<T: Scalar>(trajectory: &[(usize, T)]) -> String {
    let mut out = String::from("n,x\n");
    for (n, x) in trajectory {
        let _ = writeln!(out, "{n},{x:e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::FeedbackFunction;
    use crate::noise::NoiseModel;
    use crate::sequences::{CoefficientSequence, KappaSequence};

    fn zero_noise_linear(x0: f64, forcing: CoefficientSequence<f64>) -> EquationSpec<f64> {
        EquationSpec::linear(x0, NoiseModel::degenerate(0.0).unwrap(), forcing).unwrap()
    }

    #[test]
    fn constant_path() {
        let p = simulate(&zero_noise_linear(3.0, CoefficientSequence::zero()), 500, 1, &SimulationOptions::default())
            .unwrap();
        assert_eq!(p.summary.final_value, 3.0);
        assert_eq!(p.summary.running_min, 3.0);
        assert_eq!(p.summary.running_max, 3.0);
    }

    #[test]
    fn geometric_forcing() {
        let spec = zero_noise_linear(1.0, CoefficientSequence::geometric(1.0, 0.5).unwrap());
        for n in [1usize, 2, 10, 40] {
            let p = simulate(&spec, n, 0, &SimulationOptions::default()).unwrap();
            let want = 3.0 - 2f64.powi(1 - n as i32);
            assert!((p.summary.final_value - want).abs() < 1e-14, "{n}");
        }
    }

    #[test]
    fn deterministic_trend() {
        let spec = EquationSpec::deterministic(
            FeedbackFunction::MinAbsOne,
            KappaSequence::power_law(-1.0, 0.5).unwrap(),
            1.0,
            CoefficientSequence::power_law(1.0, 1.0).unwrap(),
        )
        .unwrap();
        let p = simulate(&spec, 100_000, 0, &SimulationOptions::default()).unwrap();
        assert!(p.summary.final_value < 1.0);
        assert!(p.summary.running_min < 0.5);
    }

    #[test]
    fn checkpoints_and_trajectory() {
        let spec = zero_noise_linear(1.0, CoefficientSequence::zero());
        let opts = SimulationOptions {
            record_stride: 10,
            extra_checkpoints: vec![3, 8, 1000, 12],
            keep_trajectory: true,
            tail_window: 2,
            track_log: true,
            ..SimulationOptions::default()
        };
        let p = simulate(&spec, 40, 0, &opts).unwrap();
        let ns: Vec<usize> = p.summary.checkpoints.iter().map(|c| c.n).collect();
        assert_eq!(ns, vec![1, 2, 3, 4, 8, 12, 16, 32, 40]);
        let rec: Vec<usize> = p.trajectory.iter().map(|(n, _)| *n).collect();
        assert_eq!(rec, vec![0, 1, 2, 3, 4, 8, 10, 12, 16, 20, 30, 32, 40]);
        assert_eq!(p.summary.checkpoint(32).unwrap().log_x, Some(0.0));
        assert!(trajectory_csv(&p.trajectory).starts_with("n,x\n0,1e0\n"));
    }

    #[test]
    fn halving_and_passage() {
        let spec = EquationSpec::linear(1.0, NoiseModel::degenerate(-0.5).unwrap(), CoefficientSequence::zero()).unwrap();
        let opts = SimulationOptions {
            thresholds_below: vec![0.1],
            thresholds_above: vec![2.0],
            track_log: true,
            ..SimulationOptions::default()
        };
        let p = simulate(&spec, 1100, 0, &opts).unwrap();
        assert_eq!(p.summary.first_passage_below, vec![Some(4)]);
        assert_eq!(p.summary.first_passage_above, vec![None]);
        assert_eq!(p.summary.final_value, 0.0);
        // the log stays exact past underflow
        let l = p.summary.checkpoint(1024).unwrap().log_x.unwrap();
        assert!((l + 1024.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn overflow_flags_path() {
        let spec = EquationSpec::linear(1.0, NoiseModel::degenerate(1.0).unwrap(), CoefficientSequence::zero()).unwrap();
        let p = simulate(&spec, 2000, 0, &SimulationOptions::default()).unwrap();
        assert!(p.summary.overflow);
        assert_eq!(p.summary.final_value, f64::INFINITY);
        assert_eq!(p.summary.argmax, 997);
    }
}
