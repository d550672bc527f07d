//! One function per subcommand. Each writes its CSV files and returns the
//! text report for stdout.

use std::fmt::Write as _;

use stochdiff::analysis::{self, critical_alpha, TheoremId, TheoremVerdict, VERDICT_CSV_HEADER};
use stochdiff::engine::{path_rng, simulate_with_rng, PathSummary, SimulationOptions};
use stochdiff::ensemble::{
    conjecture_probe, decay_csv, decay_rate_check, quantiles, run_ensemble, ProbeSetup,
    QUANTILE_LEVELS,
};
use stochdiff::sequences::DEFAULT_N_TAIL;
use stochdiff::{Error, NoiseModel64, Surrogate};

use crate::config::RunConfig;
use crate::output::OutputDir;
use crate::CliError;

/// Indices evaluated by `moments` when the config gives none.
const SCHEDULED_N_GRID: [usize; 5] = [1, 10, 100, 1_000, 10_000];

fn cell(v: Result<f64, Error>) -> String {
    match v {
        Ok(x) => format!("{x:e}"),
        Err(Error::NonFinite(_)) => "inf".into(),
        Err(_) => String::new(),
    }
}

pub fn moments(cfg: &RunConfig, out: &OutputDir) -> Result<String, CliError> {
    let noise = cfg.noise_model()?;
    let alpha = cfg.analysis.alpha.unwrap_or(1.0);
    let grid = match &cfg.analysis.n_grid {
        Some(g) => g.clone(),
        None if noise.is_iid() => vec![1],
        None => SCHEDULED_N_GRID.to_vec(),
    };
    if grid.contains(&0) {
        return Err(CliError::Config("analysis.n_grid: indices start at 1".into()));
    }
    let mut csv = String::from("n,alpha,power_moment,log_moment,raw_moment_1,raw_moment_2,raw_moment_3,lemma45_ratio\n");
    let mut text = String::new();
    for &n in &grid {
        let row = [
            cell(noise.power_moment(n, alpha)),
            cell(noise.log_moment(n)),
            cell(noise.raw_moment(n, 1)),
            cell(noise.raw_moment(n, 2)),
            cell(noise.raw_moment(n, 3)),
            cell(noise.lemma45_ratio(n)),
        ];
        let _ = writeln!(csv, "{n},{alpha},{}", row.join(","));
        let names = ["power_moment", "log_moment", "raw_moment_1", "raw_moment_2", "raw_moment_3", "lemma45_ratio"];
        for (name, v) in names.iter().zip(&row) {
            let v = if v.is_empty() { "undefined" } else { v };
            let _ = writeln!(text, "n{n}.{name} = {v}");
        }
    }
    if noise.is_iid() {
        match critical_alpha(&noise) {
            Ok(c) => {
                let _ = writeln!(text, "alpha_star = {:e}", c.alpha_star);
                let _ = writeln!(text, "alpha_star.residual = {:e}", c.residual);
            }
            Err(e) => {
                let _ = writeln!(text, "alpha_star = none ({e})");
            }
        }
    }
    out.write("moments.csv", &csv)?;
    Ok(text)
}

fn verdict(cfg: &RunConfig, id: TheoremId, noise: Option<&NoiseModel64>) -> Result<TheoremVerdict<f64>, CliError> {
    let n_tail = cfg.analysis.n_tail.unwrap_or(DEFAULT_N_TAIL);
    let s = cfg.forcing()?;
    let alpha = || {
        cfg.analysis
            .alpha
            .ok_or_else(|| CliError::Config(format!("analysis.alpha: required by {id}")))
    };
    let noise = || noise.ok_or_else(|| CliError::Config(format!("noise: required by {id}")));
    let v = match id {
        TheoremId::T3_1 => analysis::check_theorem_3_1(noise()?, &s, alpha()?, n_tail)?,
        TheoremId::T3_2 => {
            let gamma = cfg.analysis.gamma_decay.unwrap_or(0.5);
            analysis::check_theorem_3_2(noise()?, &s, &cfg.kappa()?, alpha()?, gamma, n_tail)?
        }
        TheoremId::T4_2 => analysis::check_theorem_4_2(noise()?, &s)?,
        TheoremId::T4_3 => analysis::check_theorem_4_3(noise()?, &s)?,
        TheoremId::T5_1 => analysis::check_theorem_5_1(noise()?, &s, n_tail)?,
        TheoremId::T5_2 => analysis::check_theorem_5_2(noise()?, &s, alpha()?, n_tail)?,
        TheoremId::T5_4 => {
            let a = cfg.equation.a.ok_or_else(|| CliError::Config("equation.a: required by T5_4".into()))?;
            let k = cfg.equation.k.ok_or_else(|| CliError::Config("equation.k: required by T5_4".into()))?;
            analysis::check_theorem_5_4(noise()?, a, k, &s, alpha()?)?
        }
        TheoremId::L6_1 => analysis::check_lemma_6_1(cfg.feedback()?, &cfg.kappa()?, &s, n_tail)?,
    };
    Ok(v)
}

pub fn check(cfg: &RunConfig, out: &OutputDir) -> Result<String, CliError> {
    if cfg.analysis.theorems.is_empty() {
        return Err(CliError::Config("analysis.theorems: list at least one theorem".into()));
    }
    let noise = match &cfg.noise {
        Some(t) => Some(t.build()?),
        None => None,
    };
    let mut text = String::new();
    let mut csv = format!("{VERDICT_CSV_HEADER}\n");
    for name in &cfg.analysis.theorems {
        let id: TheoremId = name.parse()?;
        let v = verdict(cfg, id, noise.as_ref())?;
        text.push_str(&v.to_text());
        csv.push_str(&v.to_csv_rows());
    }
    out.write("verdicts.csv", &csv)?;
    Ok(text)
}

fn simulation_options(cfg: &RunConfig) -> SimulationOptions<f64> {
    let e = &cfg.ensemble;
    let mut opts = SimulationOptions {
        track_martingale: e.track_martingale.unwrap_or(false),
        thresholds_below: e.thresholds_below.clone().unwrap_or_default(),
        thresholds_above: e.thresholds_above.clone().unwrap_or_default(),
        extra_checkpoints: e.checkpoints.clone().unwrap_or_default(),
        ..SimulationOptions::default()
    };
    if let Some(stride) = cfg.output.stride {
        opts.record_stride = stride;
    }
    if let Some(w) = e.window {
        opts.tail_window = w;
    }
    opts
}

fn path_row(out: &mut String, r: usize, p: &PathSummary<f64>) {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    let idx = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let _ = write!(
        out,
        "{r},{:e},{:e},{:e},{},{},{},{},{},{:e}",
        p.final_value,
        p.running_max,
        p.running_min,
        p.argmax,
        p.argmin,
        p.overflow,
        opt(p.martingale),
        opt(p.martingale_mean_abs_dev),
        p.tail_max
    );
    for v in p.first_passage_below.iter().chain(&p.first_passage_above) {
        let _ = write!(out, ",{}", idx(v));
    }
    out.push('\n');
}

pub fn simulate(cfg: &RunConfig, out: &OutputDir) -> Result<String, CliError> {
    let spec = cfg.equation_spec()?;
    let horizon = cfg.horizon();
    let paths = cfg.ensemble.replicas.unwrap_or(1);
    let seed = cfg.seed();
    let opts = SimulationOptions {
        keep_trajectory: true,
        ..simulation_options(cfg)
    };
    let mut summary = String::from("replica,final,max,min,argmax,argmin,overflow,M_N,M_mean_abs_dev,tail_max");
    for t in &opts.thresholds_below {
        let _ = write!(summary, ",first_below_{t}");
    }
    for c in &opts.thresholds_above {
        let _ = write!(summary, ",first_above_{c}");
    }
    summary.push('\n');
    let mut text = String::new();
    for r in 0..paths {
        let path = simulate_with_rng(&spec, horizon, &mut path_rng(seed, r as u64), &opts)?;
        out.write(&format!("trajectory_{r}.csv"), &stochdiff::engine::trajectory_csv(&path.trajectory))?;
        path_row(&mut summary, r, &path.summary);
        let s = &path.summary;
        let _ = writeln!(text, "path{r}.final = {:e}", s.final_value);
        let _ = writeln!(text, "path{r}.running_max = {:e}", s.running_max);
        let _ = writeln!(text, "path{r}.running_min = {:e}", s.running_min);
        let _ = writeln!(text, "path{r}.overflow = {}", s.overflow);
    }
    out.write("path_summary.csv", &summary)?;
    Ok(text)
}

fn surrogate_text(text: &mut String, s: &Surrogate<f64>) {
    let _ = writeln!(text, "surrogate.eps_conv = {:e}", s.eps_conv);
    let _ = writeln!(text, "surrogate.window = {}", s.window);
    let _ = writeln!(text, "surrogate.c_div = {:e}", s.c_div);
}

pub fn ensemble(cfg: &RunConfig, out: &OutputDir) -> Result<String, CliError> {
    let spec = cfg.equation_spec()?;
    let surrogate = cfg.surrogate()?;
    let opts = simulation_options(cfg);
    let r = run_ensemble(&spec, cfg.horizon(), cfg.replicas(), cfg.seed(), surrogate, &opts)?;
    out.write("ensemble_paths.csv", &r.paths_csv())?;
    out.write("ensemble_summary.csv", &r.summary_csv())?;

    let mut cp = String::from("n");
    for q in QUANTILE_LEVELS {
        let _ = write!(cp, ",q{q}");
    }
    cp.push('\n');
    for c in &r.paths[0].checkpoints {
        let values: Vec<f64> = r.paths.iter().filter_map(|p| p.checkpoint(c.n).map(|c| c.x)).collect();
        let _ = write!(cp, "{}", c.n);
        for v in quantiles(&values, &QUANTILE_LEVELS) {
            let _ = write!(cp, ",{v:e}");
        }
        cp.push('\n');
    }
    out.write("checkpoint_quantiles.csv", &cp)?;

    let mut text = String::new();
    surrogate_text(&mut text, &surrogate);
    let _ = writeln!(text, "p_converged = {}", r.p_converged);
    let _ = writeln!(text, "p_exceeded = {}", r.p_exceeded);
    let _ = writeln!(text, "final.median = {:e}", r.final_quantiles[2]);
    let _ = writeln!(text, "running_min.median = {:e}", r.running_min_quantiles[2]);
    if let (Some(m), Some(se)) = (r.martingale_mean, r.martingale_se) {
        let _ = writeln!(text, "martingale.mean = {m:e}");
        let _ = writeln!(text, "martingale.se = {se:e}");
    }

    if cfg.ensemble.decay.unwrap_or(false) {
        let alpha = cfg
            .analysis
            .alpha
            .ok_or_else(|| CliError::Config("analysis.alpha: required by the decay check".into()))?;
        let gamma = cfg
            .analysis
            .gamma_decay
            .ok_or_else(|| CliError::Config("analysis.gamma_decay: required by the decay check".into()))?;
        let checkpoints = cfg
            .ensemble
            .checkpoints
            .clone()
            .ok_or_else(|| CliError::Config("ensemble.checkpoints: required by the decay check".into()))?;
        let rows = decay_rate_check(&spec, &cfg.kappa()?, alpha, gamma, &checkpoints, cfg.replicas(), cfg.seed())?;
        out.write("decay.csv", &decay_csv(&rows))?;
        for row in rows {
            let _ = writeln!(text, "decay.n{}.median = {:e}", row.n, row.median);
            let _ = writeln!(text, "decay.n{}.p95 = {:e}", row.n, row.p95);
        }
    }
    Ok(text)
}

/// Sweeps the linear recursion `X_{n+1} = X_n (1 + ξ_{n+1}) + n^{-p}` over
/// `ensemble.p_grid`, using `equation.x0` and the noise table.
pub fn probe_conjecture(cfg: &RunConfig, out: &OutputDir) -> Result<String, CliError> {
    let noise = cfg.noise_model()?;
    let grid = cfg
        .ensemble
        .p_grid
        .clone()
        .ok_or_else(|| CliError::Config("ensemble.p_grid: required by probe-conjecture".into()))?;
    let setup = ProbeSetup {
        x0: cfg.equation.x0,
        horizon: cfg.horizon(),
        replicas: cfg.replicas(),
        master_seed: cfg.seed(),
        surrogate: cfg.surrogate()?,
    };
    let probe = conjecture_probe(&noise, &grid, &setup)?;
    out.write("conjecture_probe.csv", &probe.to_csv())?;
    let mut text = String::new();
    surrogate_text(&mut text, &setup.surrogate);
    let _ = writeln!(text, "alpha_star = {:e}", probe.alpha_star);
    for row in &probe.rows {
        let _ = writeln!(text, "p{}.summability = {}", row.p, row.class.as_str());
        let _ = writeln!(text, "p{}.p_converged = {}", row.p, row.p_converged);
    }
    Ok(text)
}
