use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::Error;
use crate::scalar::Scalar;
use crate::sequences::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    T3_1,
    T3_2,
    T4_2,
    T4_3,
    T5_1,
    T5_2,
    T5_4,
    L6_1,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T4_2,
        TheoremId::T4_3,
        TheoremId::T5_1,
        TheoremId::T5_2,
        TheoremId::T5_4,
        TheoremId::L6_1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "T3_1",
            TheoremId::T3_2 => "T3_2",
            TheoremId::T4_2 => "T4_2",
            TheoremId::T4_3 => "T4_3",
            TheoremId::T5_1 => "T5_1",
            TheoremId::T5_2 => "T5_2",
            TheoremId::T5_4 => "T5_4",
            TheoremId::L6_1 => "L6_1",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conclusion {
    LimitExists,
    ConvergesToZero,
    LiminfZero,
    DivergesAS,
    NotApplicable,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::LimitExists => "LimitExists",
            Conclusion::ConvergesToZero => "ConvergesToZero",
            Conclusion::LiminfZero => "LiminfZero",
            Conclusion::DivergesAS => "DivergesAS",
            Conclusion::NotApplicable => "NotApplicable",
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked hypothesis with the quantity it was decided from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck<T> {
    pub id: &'static str,
    pub status: Status,
    pub quantity: Option<T>,
    /// Part of the requirement set of the reported conclusion (or, for
    /// `NotApplicable`, of the weakest conclusion the theorem offers).
    pub required: bool,
}

/// Structured result of a hypothesis check.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict<T> {
    pub theorem: TheoremId,
    pub conditions: Vec<ConditionCheck<T>>,
    pub conclusion: Conclusion,
    /// Free-form flags, e.g. `small_k_required`.
    pub flags: Vec<String>,
}

/// Builds a verdict from checked conditions and the theorem's conclusion
/// tiers, strongest first. The strongest tier whose conditions all hold wins.
pub(crate) struct VerdictBuilder<T> {
    theorem: TheoremId,
    conditions: Vec<ConditionCheck<T>>,
    flags: Vec<String>,
}

impl<T: Scalar> VerdictBuilder<T> {
    pub fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            conditions: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn condition(&mut self, id: &'static str, status: Status, quantity: Option<T>) -> &mut Self {
        self.conditions.push(ConditionCheck {
            id,
            status,
            quantity,
            required: false,
        });
        self
    }

    pub fn flag(&mut self, flag: impl Into<String>) -> &mut Self {
        self.flags.push(flag.into());
        self
    }

    pub fn finish(mut self, tiers: &[(Conclusion, &[&str])]) -> TheoremVerdict<T> {
        let holds = |id: &str, conds: &[ConditionCheck<T>]| {
            conds
                .iter()
                .any(|c| c.id == id && c.status == Status::Holds)
        };
        let chosen = tiers
            .iter()
            .find(|(_, req)| req.iter().all(|id| holds(id, &self.conditions)));
        let (conclusion, required) = match chosen {
            Some((c, req)) => (*c, *req),
            None => (
                Conclusion::NotApplicable,
                tiers.last().map(|(_, r)| *r).unwrap_or(&[]),
            ),
        };
        for c in &mut self.conditions {
            c.required = required.contains(&c.id);
        }
        TheoremVerdict {
            theorem: self.theorem,
            conditions: self.conditions,
            conclusion,
            flags: self.flags,
        }
    }
}

impl<T: Scalar> TheoremVerdict<T> {
    pub fn condition(&self, id: &str) -> Option<&ConditionCheck<T>> {
        self.conditions.iter().find(|c| c.id == id)
    }

    /// Conditions that failed or could not be decided.
    pub fn unmet(&self) -> impl Iterator<Item = &ConditionCheck<T>> {
        self.conditions.iter().filter(|c| c.status != Status::Holds)
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    /// Flat `key = value` report, one line per field.
    pub fn to_text(&self) -> String {
        let id = self.theorem;
        let mut out = String::new();
        let _ = writeln!(out, "{id}.conclusion = {}", self.conclusion);
        for c in &self.conditions {
            let _ = writeln!(out, "{id}.{}.status = {}", c.id, c.status.as_str());
            if let Some(q) = c.quantity {
                let _ = writeln!(out, "{id}.{}.quantity = {q}", c.id);
            }
            let _ = writeln!(out, "{id}.{}.required = {}", c.id, c.required);
        }
        for f in &self.flags {
            let _ = writeln!(out, "{id}.flag = {f}");
        }
        out
    }

    /// CSV rows `theorem_id,condition_id,status,quantity`, without header.
    /// The conclusion is emitted as a final row with condition id `conclusion`.
    pub fn to_csv_rows(&self) -> String {
        let mut out = String::new();
        for c in &self.conditions {
            let q = c.quantity.map(|q| q.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", self.theorem, c.id, c.status.as_str(), q);
        }
        let _ = writeln!(out, "{},conclusion,{},", self.theorem, self.conclusion);
        out
    }
}

pub const VERDICT_CSV_HEADER: &str = "theorem_id,condition_id,status,quantity";
