//! Run configuration: one TOML file with a table per concern.
//!
//! ```toml
//! [equation]
//! kind = "nonlinear"          # linear | nonlinear | ito | deterministic
//! x0 = 1.0
//! f = "min_abs_one"
//!
//! [noise]
//! family = "uniform"          # two_point | uniform | pareto | degenerate
//! lo = "n^-2 - 1"             # a number or an index schedule
//! hi = 1.0
//!
//! [free_coefficient]
//! family = "power_law"        # power_law | geometric | table | zero
//! c = 1.0
//! p = 2.0
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use stochdiff::analysis::TheoremId;
use stochdiff::noise::{NoiseFamily, Schedule};
use stochdiff::sequences::SequenceFamily;
use stochdiff::{
    CoefficientSequence64, EquationKind, EquationSpec64, FeedbackFunction, KappaSequence64,
    NoiseModel64, Surrogate,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub equation: EquationTable,
    pub noise: Option<NoiseTable>,
    pub free_coefficient: SequenceTable,
    pub kappa: Option<SequenceTable>,
    #[serde(default)]
    pub analysis: AnalysisTable,
    #[serde(default)]
    pub ensemble: EnsembleTable,
    #[serde(default)]
    pub output: OutputTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationTable {
    pub kind: String,
    pub x0: f64,
    pub f: Option<String>,
    /// Itô drift.
    pub a: Option<f64>,
    /// Itô step.
    pub k: Option<f64>,
}

/// A constant or an index schedule such as `"-1*n^(-1/3)"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Schedule(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(v) => write!(f, "{v}"),
            ParamValue::Schedule(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseTable {
    pub family: String,
    pub lo: Option<ParamValue>,
    pub hi: Option<ParamValue>,
    pub p_hi: Option<ParamValue>,
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceTable {
    pub family: String,
    pub c: Option<f64>,
    pub p: Option<f64>,
    pub r: Option<f64>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisTable {
    pub alpha: Option<f64>,
    pub gamma_decay: Option<f64>,
    #[serde(default)]
    pub theorems: Vec<String>,
    pub n_tail: Option<usize>,
    /// Indices at which `moments` evaluates the noise.
    pub n_grid: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleTable {
    pub horizon: Option<usize>,
    pub replicas: Option<usize>,
    pub master_seed: Option<u64>,
    pub eps_conv: Option<f64>,
    pub window: Option<usize>,
    pub c_div: Option<f64>,
    pub checkpoints: Option<Vec<usize>>,
    pub track_martingale: Option<bool>,
    /// Also run the exponential decay check (needs `kappa` and `gamma_decay`).
    pub decay: Option<bool>,
    pub thresholds_below: Option<Vec<f64>>,
    pub thresholds_above: Option<Vec<f64>>,
    /// Forcing exponents swept by `probe-conjecture`.
    pub p_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputTable {
    pub directory: Option<PathBuf>,
    pub stride: Option<usize>,
}

pub const DEFAULT_HORIZON: usize = 10_000;
pub const DEFAULT_REPLICAS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

fn field_err(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn require<T: Clone>(v: &Option<T>, field: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| field_err(field, "missing"))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Parses and validates.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Cross-field checks: every table builds, positivity holds and the
    /// surrogate levels are ordered.
    pub fn validate(&self) -> Result<(), CliError> {
        self.equation_spec()?;
        self.surrogate()?;
        for t in &self.analysis.theorems {
            let id: TheoremId = t.parse().map_err(|e| field_err("analysis.theorems", e))?;
            let alpha = self.analysis.alpha;
            let bad_alpha = |range: &str| field_err("analysis.alpha", format!("{id} requires alpha in {range}"));
            match id {
                TheoremId::T3_2 if !alpha.is_some_and(|a| a > 0.0 && a <= 1.0) => {
                    return Err(bad_alpha("(0, 1]"))
                }
                TheoremId::T5_2 if !alpha.is_some_and(|a| a > 0.0 && a < 1.0) => {
                    return Err(bad_alpha("(0, 1)"))
                }
                TheoremId::T3_1 | TheoremId::T5_4 if !alpha.is_some_and(|a| a > 0.0) => {
                    return Err(bad_alpha("(0, ∞)"))
                }
                TheoremId::T3_2 if !self.analysis.gamma_decay.is_some_and(|g| g > 0.0 && g < 1.0) => {
                    return Err(field_err("analysis.gamma_decay", "T3_2 requires gamma_decay in (0, 1)"))
                }
                TheoremId::T3_2 | TheoremId::L6_1 if self.kappa.is_none() => {
                    return Err(field_err("kappa", format!("{id} requires a kappa table")))
                }
                _ => {}
            }
        }
        if let Some(0) = self.ensemble.horizon {
            return Err(field_err("ensemble.horizon", "must be at least 1"));
        }
        if let Some(0) = self.ensemble.replicas {
            return Err(field_err("ensemble.replicas", "must be at least 1"));
        }
        if let Some(0) = self.output.stride {
            return Err(field_err("output.stride", "must be at least 1"));
        }
        Ok(())
    }

    pub fn feedback(&self) -> Result<FeedbackFunction, CliError> {
        match &self.equation.f {
            Some(name) => name.parse().map_err(|e| field_err("equation.f", e)),
            None => Ok(FeedbackFunction::One),
        }
    }

    pub fn noise_model(&self) -> Result<NoiseModel64, CliError> {
        let table = self.noise.as_ref().ok_or_else(|| field_err("noise", "missing table"))?;
        table.build()
    }

    pub fn forcing(&self) -> Result<CoefficientSequence64, CliError> {
        let fam = self.free_coefficient.family("free_coefficient")?;
        CoefficientSequence64::new(fam).map_err(|e| field_err("free_coefficient", e))
    }

    pub fn kappa(&self) -> Result<KappaSequence64, CliError> {
        let table = self.kappa.as_ref().ok_or_else(|| field_err("kappa", "missing table"))?;
        KappaSequence64::new(table.family("kappa")?).map_err(|e| field_err("kappa", e))
    }

    pub fn equation_spec(&self) -> Result<EquationSpec64, CliError> {
        let f = self.feedback()?;
        let eq = &self.equation;
        let kind = match eq.kind.as_str() {
            "linear" => EquationKind::Linear,
            "nonlinear" => EquationKind::Nonlinear { f },
            "ito" => EquationKind::Ito {
                f,
                a: require(&eq.a, "equation.a")?,
                k: require(&eq.k, "equation.k")?,
            },
            "deterministic" => EquationKind::Deterministic { f, drift: self.kappa()? },
            other => return Err(field_err("equation.kind", format!("unknown kind `{other}`"))),
        };
        let noise = match kind {
            EquationKind::Deterministic { .. } => None,
            _ => Some(self.noise_model()?),
        };
        EquationSpec64::new(kind, eq.x0, noise, self.forcing()?).map_err(|e| field_err("equation", e))
    }

    pub fn surrogate(&self) -> Result<Surrogate<f64>, CliError> {
        let d = Surrogate::default();
        let s = Surrogate {
            eps_conv: self.ensemble.eps_conv.unwrap_or(d.eps_conv),
            window: self.ensemble.window.unwrap_or(d.window),
            c_div: self.ensemble.c_div.unwrap_or(d.c_div),
        };
        s.validate().map_err(|e| field_err("ensemble", e))?;
        Ok(s)
    }

    pub fn horizon(&self) -> usize {
        self.ensemble.horizon.unwrap_or(DEFAULT_HORIZON)
    }

    pub fn replicas(&self) -> usize {
        self.ensemble.replicas.unwrap_or(DEFAULT_REPLICAS)
    }

    pub fn seed(&self) -> u64 {
        self.ensemble.master_seed.unwrap_or(DEFAULT_SEED)
    }
}

fn schedule(v: &Option<ParamValue>, field: &str) -> Result<Schedule<f64>, CliError> {
    match v {
        None => Err(field_err(field, "missing")),
        Some(ParamValue::Number(x)) => Ok(Schedule::Const(*x)),
        Some(ParamValue::Schedule(s)) => Schedule::parse(s).map_err(|e| field_err(field, e)),
    }
}

impl NoiseTable {
    pub fn build(&self) -> Result<NoiseModel64, CliError> {
        let family = match self.family.as_str() {
            "two_point" => NoiseFamily::TwoPoint {
                lo: schedule(&self.lo, "noise.lo")?,
                hi: schedule(&self.hi, "noise.hi")?,
                p_hi: schedule(&self.p_hi, "noise.p_hi")?,
            },
            "uniform" => NoiseFamily::UniformInterval {
                lo: schedule(&self.lo, "noise.lo")?,
                hi: schedule(&self.hi, "noise.hi")?,
            },
            "pareto" => NoiseFamily::ParetoTail {
                gamma: require(&self.gamma, "noise.gamma")?,
                a: require(&self.a, "noise.a")?,
            },
            "degenerate" => NoiseFamily::Degenerate {
                c: require(&self.c, "noise.c")?,
            },
            other => return Err(field_err("noise.family", format!("unknown family `{other}`"))),
        };
        NoiseModel64::new(family).map_err(|e| field_err("noise", e))
    }
}

impl SequenceTable {
    fn family(&self, table: &str) -> Result<SequenceFamily<f64>, CliError> {
        let f = |name: &str| format!("{table}.{name}");
        Ok(match self.family.as_str() {
            "power_law" => SequenceFamily::PowerLaw {
                c: self.c.unwrap_or(1.0),
                p: require(&self.p, &f("p"))?,
            },
            "geometric" => SequenceFamily::Geometric {
                c: self.c.unwrap_or(1.0),
                r: require(&self.r, &f("r"))?,
            },
            "constant" => SequenceFamily::PowerLaw {
                c: require(&self.c, &f("c"))?,
                p: 0.0,
            },
            "table" => SequenceFamily::Table(require(&self.values, &f("values"))?),
            "zero" => SequenceFamily::Zero,
            other => return Err(field_err(&f("family"), format!("unknown family `{other}`"))),
        })
    }
}
