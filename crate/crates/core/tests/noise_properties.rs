use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stochdiff::noise::{NoiseFamily, PositivityContext, Schedule};
use stochdiff::{Error, NoiseModel64 as Noise};

fn bounded_laws() -> Vec<Noise> {
    vec![
        Noise::two_point(-0.5, 1.0, 0.25).unwrap(),
        Noise::two_point(-0.5, 0.5, 0.5).unwrap(),
        Noise::uniform(-0.5, 0.6).unwrap(),
        Noise::uniform(-0.9, 2.0).unwrap(),
        Noise::degenerate(0.3).unwrap(),
    ]
}

/// Sample mean and standard error of `g(ξ_n)` over `draws` samples.
fn monte_carlo(noise: &Noise, n: usize, draws: usize, seed: u64, g: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<f64> = (0..draws).map(|_| g(noise.sample(n, &mut rng))).collect();
    let m = vals.iter().sum::<f64>() / draws as f64;
    let var = vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (draws as f64 - 1.0);
    (m, (var / draws as f64).sqrt())
}

proptest! {
    #[test]
    fn power_moment_is_convex(a in 0.05f64..3.0, b in 0.05f64..3.0) {
        for noise in bounded_laws() {
            let m = |x: f64| noise.power_moment(1, x).unwrap();
            prop_assert!(m(0.5 * (a + b)) <= 0.5 * (m(a) + m(b)) + 1e-9);
        }
    }
}

#[test]
fn slope_at_origin_is_log_moment() {
    let h = 1e-5;
    for noise in bounded_laws() {
        let d = |h: f64| (noise.power_moment(1, h).unwrap() - 1.0) / h;
        // Richardson extrapolation removes the O(h) term
        let slope = 2.0 * d(h / 2.0) - d(h);
        let l = noise.log_moment(1).unwrap();
        assert!((slope - l).abs() < 1e-6, "{slope} vs {l}");
    }
}

#[test]
fn scheduled_moments_match_monte_carlo() {
    let section3 = Noise::new(NoiseFamily::TwoPoint {
        lo: Schedule::parse("-1*n^(-1/3)").unwrap(),
        hi: Schedule::Sqrt,
        p_hi: Schedule::parse("n^-2").unwrap(),
    })
    .unwrap();
    let uniform = Noise::new(NoiseFamily::UniformInterval {
        lo: Schedule::parse("n^-2 - 1").unwrap(),
        hi: Schedule::Const(1.0),
    })
    .unwrap();
    let mut seed = 7;
    for (noise, n) in [(&section3, 3usize), (&section3, 7), (&uniform, 2), (&uniform, 5)] {
        let checks: [(f64, Box<dyn Fn(f64) -> f64>); 4] = [
            (noise.power_moment(n, 2.0).unwrap(), Box::new(|x: f64| (1.0 + x).powi(2))),
            (noise.log_moment(n).unwrap(), Box::new(|x: f64| x.ln_1p())),
            (noise.raw_moment(n, 1).unwrap(), Box::new(|x| x)),
            (noise.raw_moment(n, 3).unwrap(), Box::new(|x: f64| x.powi(3))),
        ];
        for (exact, g) in checks {
            seed += 1;
            let (m, se) = monte_carlo(noise, n, 200_000, seed, g);
            assert!((m - exact).abs() <= 4.0 * se, "n={n}: {m} ± {se} vs {exact}");
        }
    }
}

#[test]
fn sampling_is_reproducible_and_in_support() {
    let pareto = Noise::pareto(1.5, 1.0 / 3.0).unwrap();
    let mut a = ChaCha8Rng::seed_from_u64(11);
    let mut b = ChaCha8Rng::seed_from_u64(11);
    for n in 1..2000 {
        let x = pareto.sample(n, &mut a);
        assert_eq!(x, pareto.sample(n, &mut b));
        assert!(1.0 + x >= 1.0 / 3.0);
    }
    let tp = Noise::two_point(-0.5, 1.0, 0.25).unwrap();
    assert!((0..1000).all(|_| matches!(tp.sample(1, &mut a), -0.5 | 1.0)));
}

#[test]
fn pareto_closed_forms() {
    let p = Noise::pareto(2.0, 0.5).unwrap();
    assert!((p.power_moment(1, 1.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(matches!(p.power_moment(1, 2.0), Err(Error::NonFinite(_))));
    assert!((p.log_moment(1).unwrap() - (0.5f64.ln() + 0.5)).abs() < 1e-15);
    assert!(matches!(p.raw_moment(1, 2), Err(Error::NonFinite(_))));
}

#[test]
fn positivity_contexts() {
    let wide = Noise::two_point(-1.2, 1.0, 0.5).unwrap();
    assert!(matches!(wide.validate_positivity(PositivityContext::Linear), Err(Error::Positivity { .. })));
    let zeta = Noise::two_point(-1.0, 1.0, 0.5).unwrap();
    assert!(zeta.validate_positivity(PositivityContext::Ito { a: 0.25, k: 0.01 }).is_ok());
    assert!(zeta.validate_positivity(PositivityContext::Ito { a: 0.1, k: 2.0 }).is_err());
    assert!(zeta.validate_positivity(PositivityContext::Nonlinear).is_err());
}

#[test]
fn scheduled_law_needs_index() {
    let uniform = Noise::new(NoiseFamily::UniformInterval {
        lo: Schedule::parse("n^-2 - 1").unwrap(),
        hi: Schedule::Const(1.0),
    })
    .unwrap();
    assert!(!uniform.is_iid());
    assert!(uniform.law(0).is_err());
    assert!(uniform.validate_positivity(PositivityContext::Nonlinear).is_ok());
    assert!((uniform.raw_moment(2, 1).unwrap() - 0.125).abs() < 1e-15);
}
