use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stochdiff::engine::{path_rng, simulate, FeedbackFunction, SimulationOptions};
use stochdiff::{CoefficientSequence64 as Seq, EquationSpec64 as Spec, KappaSequence64 as Kappa, NoiseModel64 as Noise};

fn random_spec(rng: &mut ChaCha8Rng) -> Option<Spec> {
    let f = FeedbackFunction::ALL[rng.random_range(0..4)];
    let forcing = match rng.random_range(0..3) {
        0 => Seq::zero(),
        1 => Seq::power_law(rng.random_range(0.0..2.0), rng.random_range(0.0..3.0)).unwrap(),
        _ => Seq::geometric(rng.random_range(0.0..2.0), rng.random_range(0.05..0.95)).unwrap(),
    };
    let x0 = 10f64.powf(rng.random_range(-3.0..3.0));
    let lo = rng.random_range(-0.99..0.0);
    let noise = match rng.random_range(0..4) {
        0 => Noise::two_point(lo, rng.random_range(0.0..3.0), rng.random_range(0.0..1.0)).unwrap(),
        1 => Noise::uniform(lo, rng.random_range(0.0..3.0)).unwrap(),
        2 => Noise::pareto(rng.random_range(0.5..4.0), rng.random_range(0.05..2.0)).unwrap(),
        _ => Noise::degenerate(lo).unwrap(),
    };
    match rng.random_range(0..4) {
        0 => Spec::linear(x0, noise, forcing).ok(),
        1 => Spec::nonlinear(f, x0, noise, forcing).ok(),
        2 => {
            let zeta = Noise::two_point(-1.0, 1.0, 0.5).unwrap();
            Spec::ito(f, rng.random_range(0.0..0.5), rng.random_range(0.001..0.5), x0, zeta, forcing).ok()
        }
        _ => Spec::deterministic(f, Kappa::power_law(-rng.random_range(0.0..1.0), rng.random_range(0.0..2.0)).unwrap(), x0, forcing).ok(),
    }
}

#[test]
fn paths_stay_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 1_000 {
        let Some(spec) = random_spec(&mut rng) else { continue };
        let mut path_rng = ChaCha8Rng::seed_from_u64(checked);
        let mut x = spec.x0();
        for n in 0..1_000 {
            match spec.step(x, n, &mut path_rng) {
                Ok(next) => {
                    // exact zero is reachable only through underflow or a_n = -1
                    assert!(next >= 0.0 && !next.is_nan(), "{spec:?} n={n}");
                    x = next;
                }
                Err(stochdiff::Error::Overflow { .. }) => break,
                Err(e) => panic!("{e}"),
            }
        }
        checked += 1;
    }
}

#[test]
fn identical_seeds_give_identical_summaries() {
    let spec = Spec::nonlinear(
        FeedbackFunction::Rational,
        1.0,
        Noise::uniform(-0.5, 0.6).unwrap(),
        Seq::power_law(1.0, 2.0).unwrap(),
    )
    .unwrap();
    let opts = SimulationOptions {
        track_martingale: true,
        thresholds_below: vec![0.5],
        thresholds_above: vec![3.0],
        ..SimulationOptions::default()
    };
    let a = simulate(&spec, 5_000, 42, &opts).unwrap();
    let b = simulate(&spec, 5_000, 42, &opts).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, simulate(&spec, 5_000, 43, &opts).unwrap());
}

#[test]
fn nonlinear_with_unit_gain_is_linear() {
    let noise = Noise::two_point(-0.5, 1.0, 0.25).unwrap();
    let s = Seq::power_law(1.0, 1.5).unwrap();
    let lin = Spec::linear(2.0, noise.clone(), s.clone()).unwrap();
    let nl = Spec::nonlinear(FeedbackFunction::One, 2.0, noise, s).unwrap();
    let opts = SimulationOptions {
        keep_trajectory: true,
        record_stride: 1,
        ..SimulationOptions::default()
    };
    assert_eq!(simulate(&lin, 3_000, 5, &opts).unwrap(), simulate(&nl, 3_000, 5, &opts).unwrap());
}

#[test]
fn homogeneous_growth_rate_is_log_moment() {
    let noise = Noise::two_point(-0.5, 1.0, 0.25).unwrap();
    let l = noise.log_moment(1).unwrap();
    let var = 0.75 * 0.5f64.ln().powi(2) + 0.25 * 2f64.ln().powi(2) - l * l;
    let spec = Spec::linear(1.0, noise, Seq::zero()).unwrap();
    let n = 100_000;
    let opts = SimulationOptions {
        track_log: true,
        ..SimulationOptions::default()
    };
    for seed in 0..5 {
        let p = simulate(&spec, n, seed, &opts).unwrap();
        let rate = p.summary.checkpoint(n).unwrap().log_x.unwrap() / n as f64;
        assert!((rate - l).abs() <= 5.0 * (var / n as f64).sqrt(), "{rate} vs {l}");
    }
}

#[test]
fn deterministic_path_ignores_seed() {
    let spec = Spec::deterministic(
        FeedbackFunction::MinAbsOne,
        Kappa::power_law(-1.0, 0.5).unwrap(),
        1.0,
        Seq::power_law(1.0, 1.0).unwrap(),
    )
    .unwrap();
    let opts = SimulationOptions::default();
    assert_eq!(simulate(&spec, 10_000, 1, &opts).unwrap(), simulate(&spec, 10_000, 2, &opts).unwrap());
}

#[test]
fn replica_streams_differ() {
    let a: Vec<u64> = (0..4).map(|_| 0).scan(path_rng(1, 0), |r, _: u64| Some(r.random())).collect();
    let b: Vec<u64> = (0..4).map(|_| 0).scan(path_rng(1, 1), |r, _: u64| Some(r.random())).collect();
    assert_ne!(a, b);
}
