//! Domain types shared by every design module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Probability(value))
        } else {
            Err(Error::domain("p", value, "must lie strictly between 0 and 1"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Degrees of freedom of a χ², t or F distribution. Real-valued, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DegreesOfFreedom(f64);

impl DegreesOfFreedom {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(DegreesOfFreedom(value))
        } else {
            Err(Error::domain("df", value, "must be positive and finite"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Confidence level `1 - alpha`.
///
/// The significance `alpha` is the stored quantity so that `from_alpha(0.05)`
/// hands exactly `0.025` to the two-sided quantile lookups.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ConfidenceLevel {
    alpha: f64,
}

impl ConfidenceLevel {
    /// From a confidence such as `0.95`.
    pub fn new(confidence: f64) -> Result<Self> {
        if confidence > 0.0 && confidence < 1.0 {
            Ok(ConfidenceLevel {
                alpha: 1.0 - confidence,
            })
        } else {
            Err(Error::domain(
                "confidence",
                confidence,
                "must lie strictly between 0 and 1",
            ))
        }
    }

    /// From a significance such as `0.05`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(ConfidenceLevel { alpha })
        } else {
            Err(Error::domain(
                "alpha",
                alpha,
                "must lie strictly between 0 and 1",
            ))
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn confidence(self) -> f64 {
        1.0 - self.alpha
    }
}

impl fmt::Display for ConfidenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", format_percent_trimmed(self.confidence()))
    }
}

pub(crate) fn format_percent_trimmed(x: f64) -> String {
    let s = format!("{:.2}", x * 100.0);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    TwoSided,
    /// `[domain minimum, upper]`.
    UpperOnly,
    /// `[lower, domain maximum]`.
    LowerOnly,
}

/// A confidence interval; asymmetric intervals are the norm here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
    pub sidedness: Sidedness,
}

impl ConfidenceInterval {
    pub(crate) fn new(lower: f64, upper: f64, level: ConfidenceLevel, sidedness: Sidedness) -> Self {
        debug_assert!(lower <= upper, "inverted interval [{lower}, {upper}]");
        ConfidenceInterval {
            lower,
            upper,
            confidence: level.confidence(),
            sidedness,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// `self` ⊇ `other`.
    pub fn contains_interval(&self, other: &ConfidenceInterval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ConfidenceInterval {
            lower: self.lower * factor,
            upper: self.upper * factor,
            ..*self
        }
    }
}

impl fmt::Display for ConfidenceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// How a design result or interval was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ChiSquare,
    StudentT,
    FisherZ,
    /// Clopper-Pearson through F percentiles.
    Exact,
    Normal,
    NormalContinuity,
    Poisson,
    ZeroAcceptance,
    RuleOfThree,
}

/// Conditions attached to a result; returned as data, never logged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// `Np > 5` and `N(1-p) > 5` does not hold.
    NormalApproximationInvalid,
    /// `N >= 20`, `p <= 5%` and `Np >= 30` do not all hold.
    PoissonApproximationInvalid,
    /// Requested absolute precision is at least the expected proportion.
    DeltaAtLeastProportion,
}

impl Flag {
    /// Whether the flag marks the number itself as untrustworthy.
    pub fn invalidates(self) -> bool {
        !matches!(self, Flag::DeltaAtLeastProportion)
    }

    pub fn message(self) -> &'static str {
        match self {
            Flag::NormalApproximationInvalid => "normal approximation invalid: Np <= 5 or N(1-p) <= 5",
            Flag::PoissonApproximationInvalid => {
                "Poisson/Gaussian approximation invalid: needs N >= 20, p <= 5% and Np >= 30"
            }
            Flag::DeltaAtLeastProportion => "requested precision is not smaller than the proportion",
        }
    }
}

/// Minimal sample size (or event count) together with what it delivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub size: u64,
    /// Precision actually achieved at `size`; never worse than requested.
    pub achieved: f64,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

impl DesignResult {
    pub(crate) fn new(size: u64, achieved: f64, method: Method) -> Self {
        DesignResult {
            size,
            achieved,
            method,
            flags: Vec::new(),
        }
    }

    pub(crate) fn with_flag(mut self, flag: Flag) -> Self {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
        self
    }

    /// False when an approximation behind the number does not hold.
    pub fn is_valid(&self) -> bool {
        !self.flags.iter().any(|f| f.invalidates())
    }
}

/// Checks `n >= min` for a sample size argument.
pub(crate) fn require_at_least(param: &'static str, n: u64, min: u64, reason: &'static str) -> Result<()> {
    if n < min {
        Err(Error::domain(param, n as f64, reason))
    } else {
        Ok(())
    }
}

pub(crate) fn require_positive(param: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(param, x, "must be positive and finite"))
    }
}
