//! Request and response schema shared by the command line and the HTTP
//! service. Both front ends only translate input into a [`DesignRequest`]
//! and hand it to [`handle`]; all arithmetic happens in the design modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::intervals::{
    correlation_ci, correlation_sample_size, correlation_width, hazard_rate_ci, lifetime_ci,
    lifetime_precision, lifetime_required_events, lifetime_sample_size, mean_ci, mean_precision,
    mean_sample_size, stddev_ci, stddev_precision, stddev_sample_size, MIN_EVENTS, MIN_N_CORRELATION,
    MIN_N_LOCATION,
};
use crate::proportion::{
    clopper_pearson_ci, exact_precision, normal_precision, one_sided_exact_sample_size,
    proportion_sample_size_exact, proportion_sample_size_normal, rare_precision_exact,
    rare_precision_poisson, rare_proportion_sample_size_exact, rare_proportion_sample_size_poisson,
    rule_of_three_sample_size, rule_of_three_upper_bound, wald_ci, zero_acceptance_sample_size,
    zero_event_ci, BinomialObservation, OneSidedBound, RARE_LIMIT,
};
use crate::types::{ConfidenceInterval, ConfidenceLevel, DesignResult, Flag, Method, Sidedness};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimand {
    #[serde(rename = "stddev")]
    StdDev,
    Mean,
    Paired,
    Proportion,
    ProportionRare,
    ProportionOneSided,
    Correlation,
    Lifetime,
}

impl Estimand {
    pub const ALL: [Estimand; 8] = [
        Estimand::StdDev,
        Estimand::Mean,
        Estimand::Paired,
        Estimand::Proportion,
        Estimand::ProportionRare,
        Estimand::ProportionOneSided,
        Estimand::Correlation,
        Estimand::Lifetime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Estimand::StdDev => "stddev",
            Estimand::Mean => "mean",
            Estimand::Paired => "paired",
            Estimand::Proportion => "proportion",
            Estimand::ProportionRare => "proportion-rare",
            Estimand::ProportionOneSided => "proportion-one-sided",
            Estimand::Correlation => "correlation",
            Estimand::Lifetime => "lifetime",
        }
    }
}

impl fmt::Display for Estimand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Estimand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Estimand::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                what: "estimand",
                input: s.to_string(),
            })
    }
}

/// What is being asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    /// Minimal sample size for a target precision.
    Design,
    /// Precision delivered by a given sample size.
    Precision,
    /// Confidence interval from observed data.
    Ci,
}

impl Operation {
    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Design => "design",
            Operation::Precision => "precision",
            Operation::Ci => "ci",
        }
    }
}

/// Method choices a request may name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RequestMethod {
    Exact,
    Normal,
    Poisson,
    ZeroAcceptance,
    RuleOfThree,
}

impl RequestMethod {
    pub const ALL: [RequestMethod; 5] = [
        RequestMethod::Exact,
        RequestMethod::Normal,
        RequestMethod::Poisson,
        RequestMethod::ZeroAcceptance,
        RequestMethod::RuleOfThree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RequestMethod::Exact => "exact",
            RequestMethod::Normal => "normal",
            RequestMethod::Poisson => "poisson",
            RequestMethod::ZeroAcceptance => "zero-acceptance",
            RequestMethod::RuleOfThree => "rule-of-three",
        }
    }
}

/// A request as received. Every field is optional here; [`validate`]
/// decides what the (estimand, operation) pair needs.
///
/// `r` is the number of successes for proportions and the observed
/// correlation for `correlation`. `e` is a number of events.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimand: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub censoring: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Missing,
    OutOfRange,
    NotInteger,
    UnknownEstimand,
    UnsupportedMethod,
    Conflicting,
    InvalidBody,
    NoSolution,
    Numerical,
}

impl ErrorCode {
    /// Errors in how the request was put together rather than in its values.
    pub fn is_usage(self) -> bool {
        matches!(
            self,
            ErrorCode::Missing
                | ErrorCode::UnknownEstimand
                | ErrorCode::UnsupportedMethod
                | ErrorCode::Conflicting
                | ErrorCode::InvalidBody
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub code: ErrorCode,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// A rejected request: one entry per offending field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub errors: Vec<FieldError>,
}

impl ApiError {
    fn single(field: &str, code: ErrorCode, message: impl Into<String>) -> ApiError {
        ApiError {
            errors: vec![FieldError {
                field: field.to_string(),
                code,
                message: message.into(),
            }],
        }
    }

    pub fn invalid_body(message: impl Into<String>) -> ApiError {
        ApiError::single("body", ErrorCode::InvalidBody, message)
    }

    pub fn is_usage(&self) -> bool {
        self.errors.iter().any(|e| e.code.is_usage())
    }

    /// True for failures inside the numerics rather than in the request.
    pub fn is_internal(&self) -> bool {
        self.errors.iter().any(|e| e.code == ErrorCode::Numerical)
    }
}

impl fmt::Display for ApiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.errors.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl std::error::Error for ApiError {}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        let message = e.to_string();
        // A failing table cell is reported under the cause's field.
        let mut cause = &e;
        while let Error::Cell { source, .. } = cause {
            cause = source;
        }
        match cause {
            Error::Domain { param, .. } => ApiError::single(param, ErrorCode::OutOfRange, message),
            Error::EmptyGrid { axis, .. } => ApiError::single(axis, ErrorCode::Missing, message),
            Error::UnknownTable(_) | Error::Unknown { .. } => ApiError::single("body", ErrorCode::OutOfRange, message),
            Error::NoSolution { .. } => ApiError::single("body", ErrorCode::NoSolution, message),
            _ => ApiError::single("body", ErrorCode::Numerical, message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultKind {
    SampleSize,
    Precision,
    Interval,
}

/// A computed answer together with the fully resolved request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResponse {
    pub kind: ResultKind,
    pub estimand: Estimand,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<u64>,
    /// Events to observe, for lifetime designs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<u64>,
    /// For designs, the precision achieved at `sample_size`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sidedness: Option<Sidedness>,
    /// Interval for the hazard rate `1/θ`, for lifetime intervals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hazard_interval: Option<[f64; 2]>,
    pub valid: bool,
    #[serde(default)]
    pub flags: Vec<Flag>,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// The request with defaults filled in and unused fields dropped.
    pub params: Map<String, Value>,
}

/// A request reduced to exactly the call it stands for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Query {
    StdDevDesign { delta: f64 },
    StdDevPrecision { n: u64 },
    StdDevCi { s: f64, n: u64 },
    MeanDesign { delta: f64 },
    MeanPrecision { n: u64 },
    MeanCi { mean: f64, s: f64, n: u64 },
    ProportionDesign { p: f64, delta: f64, method: RequestMethod, continuity: bool },
    ProportionPrecision { p: f64, n: u64, method: RequestMethod, continuity: bool },
    ProportionCi { r: u64, n: u64, method: RequestMethod },
    RareDesign { p: f64, k: f64, method: RequestMethod },
    RarePrecision { p: f64, n: u64, method: RequestMethod },
    OneSidedDesign { bound: OneSidedBound, method: RequestMethod },
    OneSidedPrecision { n: u64, method: RequestMethod },
    OneSidedCi { r: u64, n: u64, method: RequestMethod },
    CorrelationDesign { rho: f64, delta: f64 },
    CorrelationPrecision { rho: f64, n: u64 },
    CorrelationCi { r: f64, n: u64 },
    LifetimeDesign { k: f64, censoring: f64 },
    LifetimePrecision { e: u64 },
    LifetimeCi { theta: f64, e: u64 },
}

/// A validated request.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub operation: Operation,
    pub estimand: Estimand,
    pub level: ConfidenceLevel,
    pub query: Query,
    pub params: Map<String, Value>,
}

struct Validator<'a> {
    req: &'a DesignRequest,
    errors: Vec<FieldError>,
    params: Map<String, Value>,
}

impl Validator<'_> {
    fn fail(&mut self, field: &str, code: ErrorCode, message: String) {
        self.errors.push(FieldError {
            field: field.to_string(),
            code,
            message,
        });
    }

    fn record(&mut self, field: &str, value: Value) {
        self.params.insert(field.to_string(), value);
    }

    /// A required real field that must satisfy `ok`.
    fn real(&mut self, field: &'static str, value: Option<f64>, ok: impl Fn(f64) -> bool, range: &str) -> Option<f64> {
        let Some(x) = value else {
            self.fail(field, ErrorCode::Missing, format!("`{field}` is required ({range})"));
            return None;
        };
        self.record(field, Value::from(x));
        if x.is_finite() && ok(x) {
            Some(x)
        } else {
            self.fail(field, ErrorCode::OutOfRange, format!("`{field}` must be {range} (got {x})"));
            None
        }
    }

    /// A required whole number `>= min`.
    fn count(&mut self, field: &'static str, value: Option<f64>, min: u64) -> Option<u64> {
        let Some(x) = value else {
            self.fail(field, ErrorCode::Missing, format!("`{field}` is required (an integer >= {min})"));
            return None;
        };
        if x.fract() != 0.0 || !x.is_finite() || x < 0.0 || x > 1e15 {
            self.record(field, Value::from(x));
            self.fail(field, ErrorCode::NotInteger, format!("`{field}` must be a whole number (got {x})"));
            return None;
        }
        let n = x as u64;
        self.record(field, Value::from(n));
        if n < min {
            self.fail(field, ErrorCode::OutOfRange, format!("`{field}` must be at least {min} (got {n})"));
            return None;
        }
        Some(n)
    }

    fn level(&mut self) -> Option<ConfidenceLevel> {
        let c = self.req.confidence.unwrap_or(DEFAULT_CONFIDENCE);
        self.real("confidence", Some(c), |c| c > 0.0 && c < 1.0, "strictly between 0 and 1")
            .and_then(|c| ConfidenceLevel::new(c).ok())
    }

    /// The method named in the request, or `default`, restricted to `allowed`.
    fn method(&mut self, allowed: &[RequestMethod], default: Option<RequestMethod>) -> Option<RequestMethod> {
        let names: Vec<&str> = allowed.iter().map(|m| m.as_str()).collect();
        let chosen = match &self.req.method {
            None => default,
            Some(name) => RequestMethod::ALL.into_iter().find(|m| m.as_str() == name),
        };
        match chosen {
            Some(m) if allowed.contains(&m) => {
                self.record("method", Value::from(m.as_str()));
                Some(m)
            }
            None if default.is_none() && self.req.method.is_none() => None,
            _ => {
                let given = self.req.method.clone().unwrap_or_default();
                let message = if names.is_empty() {
                    format!("`method` does not apply here (got `{given}`)")
                } else {
                    format!("`method` must be one of {} (got `{given}`)", names.join(", "))
                };
                self.fail("method", ErrorCode::UnsupportedMethod, message);
                None
            }
        }
    }

    fn no_method(&mut self) {
        self.method(&[], None);
    }

    fn continuity(&mut self) -> bool {
        let on = self.req.continuity.unwrap_or(true);
        self.record("continuity", Value::from(on));
        on
    }
}

fn unit_open(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

fn positive(x: f64) -> bool {
    x > 0.0
}

fn rare(p: f64) -> bool {
    unit_open(p) && p.min(1.0 - p) <= RARE_LIMIT
}

/// Checks a request for `operation` and resolves defaults (confidence 0.95,
/// continuity correction on, no censoring, exact methods). Every offending
/// field is reported, not just the first.
pub fn validate(operation: Operation, req: &DesignRequest) -> Result<Resolved, ApiError> {
    let mut v = Validator {
        req,
        errors: Vec::new(),
        params: Map::new(),
    };
    let estimand = match req.estimand.as_deref() {
        None => {
            v.fail("estimand", ErrorCode::Missing, "`estimand` is required".into());
            return Err(ApiError { errors: v.errors });
        }
        Some(name) => match name.parse::<Estimand>() {
            Ok(e) => e,
            Err(_) => {
                let known: Vec<&str> = Estimand::ALL.iter().map(|e| e.as_str()).collect();
                v.fail(
                    "estimand",
                    ErrorCode::UnknownEstimand,
                    format!("unknown estimand `{name}`; expected one of {}", known.join(", ")),
                );
                return Err(ApiError { errors: v.errors });
            }
        },
    };
    v.record("estimand", Value::from(estimand.as_str()));
    let level = v.level();

    use Estimand as E;
    use Operation as O;
    use RequestMethod as M;
    let query = match (estimand, operation) {
        (E::StdDev, O::Design) => {
            v.no_method();
            let delta = v.real("delta", req.delta, positive, "positive");
            delta.map(|delta| Query::StdDevDesign { delta })
        }
        (E::StdDev, O::Precision) => {
            v.no_method();
            v.count("n", req.n, MIN_N_LOCATION).map(|n| Query::StdDevPrecision { n })
        }
        (E::StdDev, O::Ci) => {
            v.no_method();
            let s = v.real("s", req.s, positive, "positive");
            let n = v.count("n", req.n, MIN_N_LOCATION);
            s.zip(n).map(|(s, n)| Query::StdDevCi { s, n })
        }
        (E::Mean | E::Paired, O::Design) => {
            v.no_method();
            v.real("delta", req.delta, positive, "positive")
                .map(|delta| Query::MeanDesign { delta })
        }
        (E::Mean | E::Paired, O::Precision) => {
            v.no_method();
            v.count("n", req.n, MIN_N_LOCATION).map(|n| Query::MeanPrecision { n })
        }
        (E::Mean | E::Paired, O::Ci) => {
            v.no_method();
            let mean = v.real("mean", req.mean, |_| true, "a finite number");
            let s = v.real("s", req.s, |s| s >= 0.0, "non-negative");
            let n = v.count("n", req.n, MIN_N_LOCATION);
            match (mean, s, n) {
                (Some(mean), Some(s), Some(n)) => Some(Query::MeanCi { mean, s, n }),
                _ => None,
            }
        }
        (E::Proportion, O::Design) => {
            let method = v.method(&[M::Exact, M::Normal], Some(M::Exact));
            let p = v.real("p", req.p, unit_open, "strictly between 0 and 1");
            let delta = v.real("delta", req.delta, unit_open, "strictly between 0 and 1");
            let continuity = method == Some(M::Normal) && v.continuity();
            match (method, p, delta) {
                (Some(method), Some(p), Some(delta)) => Some(Query::ProportionDesign {
                    p,
                    delta,
                    method,
                    continuity,
                }),
                _ => None,
            }
        }
        (E::Proportion, O::Precision) => {
            let method = v.method(&[M::Exact, M::Normal], Some(M::Exact));
            let p = v.real("p", req.p, unit_open, "strictly between 0 and 1");
            let n = v.count("n", req.n, 1);
            let continuity = method == Some(M::Normal) && v.continuity();
            match (method, p, n) {
                (Some(method), Some(p), Some(n)) => Some(Query::ProportionPrecision {
                    p,
                    n,
                    method,
                    continuity,
                }),
                _ => None,
            }
        }
        (E::Proportion | E::ProportionRare, O::Ci) => {
            let allowed: &[RequestMethod] = if estimand == E::Proportion {
                &[M::Exact, M::Normal]
            } else {
                &[M::Exact]
            };
            let method = v.method(allowed, Some(M::Exact));
            let (r, n) = successes(&mut v);
            match (method, r, n) {
                (Some(method), Some(r), Some(n)) => Some(Query::ProportionCi { r, n, method }),
                _ => None,
            }
        }
        (E::ProportionRare, O::Design) => {
            let method = v.method(&[M::Exact, M::Poisson], Some(M::Exact));
            let p = v.real("p", req.p, rare, "in (0, 0.1] or [0.9, 1)");
            let k = v.real("k", req.k, |k| k > 0.0 && k <= 1.0, "in (0, 1]");
            match (method, p, k) {
                (Some(method), Some(p), Some(k)) => Some(Query::RareDesign { p, k, method }),
                _ => None,
            }
        }
        (E::ProportionRare, O::Precision) => {
            let method = v.method(&[M::Exact, M::Poisson], Some(M::Exact));
            let p = v.real("p", req.p, rare, "in (0, 0.1] or [0.9, 1)");
            let n = v.count("n", req.n, 1);
            match (method, p, n) {
                (Some(method), Some(p), Some(n)) => Some(Query::RarePrecision { p, n, method }),
                _ => None,
            }
        }
        (E::ProportionOneSided, O::Design) => {
            let method = v.method(&[M::Exact, M::ZeroAcceptance, M::RuleOfThree], Some(M::Exact));
            let bound = match (req.p_upper, req.p_lower) {
                (Some(_), Some(_)) => {
                    v.fail(
                        "p_lower",
                        ErrorCode::Conflicting,
                        "give either `p_upper` or `p_lower`, not both".into(),
                    );
                    None
                }
                (None, Some(pl)) => v
                    .real("p_lower", Some(pl), unit_open, "strictly between 0 and 1")
                    .zip(level)
                    .and_then(|(pl, level)| OneSidedBound::lower(pl, level).ok()),
                (pu, None) => v
                    .real("p_upper", pu, unit_open, "strictly between 0 and 1")
                    .zip(level)
                    .and_then(|(pu, level)| OneSidedBound::upper(pu, level).ok()),
            };
            method.zip(bound).map(|(method, bound)| Query::OneSidedDesign { bound, method })
        }
        (E::ProportionOneSided, O::Precision) => {
            let method = v.method(&[M::Exact, M::ZeroAcceptance, M::RuleOfThree], Some(M::Exact));
            let n = v.count("n", req.n, 1);
            method.zip(n).map(|(method, n)| Query::OneSidedPrecision { n, method })
        }
        (E::ProportionOneSided, O::Ci) => {
            let method = v.method(&[M::Exact, M::ZeroAcceptance, M::RuleOfThree], Some(M::Exact));
            let (r, n) = successes(&mut v);
            if let (Some(m), Some(r)) = (method, r) {
                if m != M::Exact && r != 0 {
                    v.fail(
                        "r",
                        ErrorCode::OutOfRange,
                        format!("`{}` bounds assume zero observed events (got r = {r})", m.as_str()),
                    );
                }
            }
            match (method, r, n) {
                (Some(method), Some(r), Some(n)) => Some(Query::OneSidedCi { r, n, method }),
                _ => None,
            }
        }
        (E::Correlation, O::Design) => {
            v.no_method();
            let rho = v.real("rho", req.rho, |x| x.abs() < 1.0, "strictly between -1 and 1");
            let delta = v.real("delta", req.delta, |d| d > 0.0 && d < 2.0, "strictly between 0 and 2");
            rho.zip(delta).map(|(rho, delta)| Query::CorrelationDesign { rho, delta })
        }
        (E::Correlation, O::Precision) => {
            v.no_method();
            let rho = v.real("rho", req.rho, |x| x.abs() < 1.0, "strictly between -1 and 1");
            let n = v.count("n", req.n, MIN_N_CORRELATION);
            rho.zip(n).map(|(rho, n)| Query::CorrelationPrecision { rho, n })
        }
        (E::Correlation, O::Ci) => {
            v.no_method();
            let r = v.real("r", req.r, |x| x.abs() < 1.0, "strictly between -1 and 1");
            let n = v.count("n", req.n, MIN_N_CORRELATION);
            r.zip(n).map(|(r, n)| Query::CorrelationCi { r, n })
        }
        (E::Lifetime, O::Design) => {
            v.no_method();
            let k = v.real("k", req.k, positive, "positive");
            let censoring = v.real(
                "censoring",
                Some(req.censoring.unwrap_or(0.0)),
                |c| (0.0..1.0).contains(&c),
                "in [0, 1)",
            );
            k.zip(censoring).map(|(k, censoring)| Query::LifetimeDesign { k, censoring })
        }
        (E::Lifetime, O::Precision) => {
            v.no_method();
            v.count("e", req.e, MIN_EVENTS).map(|e| Query::LifetimePrecision { e })
        }
        (E::Lifetime, O::Ci) => {
            v.no_method();
            let theta = v.real("theta", req.theta, positive, "positive");
            let e = v.count("e", req.e, MIN_EVENTS);
            theta.zip(e).map(|(theta, e)| Query::LifetimeCi { theta, e })
        }
    };
    match (query, level) {
        (Some(query), Some(level)) if v.errors.is_empty() => Ok(Resolved {
            operation,
            estimand,
            level,
            query,
            params: v.params,
        }),
        _ => Err(ApiError { errors: v.errors }),
    }
}

/// `r` and `n` of a binomial observation, with `r <= n`.
fn successes(v: &mut Validator<'_>) -> (Option<u64>, Option<u64>) {
    let r = v.count("r", v.req.r, 0);
    let n = v.count("n", v.req.n, 1);
    if let (Some(rr), Some(nn)) = (r, n) {
        if rr > nn {
            v.fail("r", ErrorCode::OutOfRange, format!("`r` cannot exceed `n` (got r = {rr}, n = {nn})"));
            return (None, n);
        }
    }
    (r, n)
}

fn base(resolved: &Resolved, kind: ResultKind, method: Method) -> DesignResponse {
    DesignResponse {
        kind,
        estimand: resolved.estimand,
        method,
        sample_size: None,
        events: None,
        precision: None,
        interval: None,
        sidedness: None,
        hazard_interval: None,
        valid: true,
        flags: Vec::new(),
        warnings: Vec::new(),
        params: resolved.params.clone(),
    }
}

fn sized(resolved: &Resolved, d: DesignResult) -> DesignResponse {
    let mut r = base(resolved, ResultKind::SampleSize, d.method);
    r.sample_size = Some(d.size);
    r.precision = Some(d.achieved);
    r.valid = d.is_valid();
    r.warnings = d.flags.iter().map(|f| f.message().to_string()).collect();
    r.flags = d.flags;
    r
}

fn precision(resolved: &Resolved, method: Method, value: f64) -> DesignResponse {
    let mut r = base(resolved, ResultKind::Precision, method);
    r.precision = Some(value);
    r
}

fn interval(resolved: &Resolved, method: Method, ci: &ConfidenceInterval) -> DesignResponse {
    let mut r = base(resolved, ResultKind::Interval, method);
    r.interval = Some([ci.lower, ci.upper]);
    r.sidedness = Some(ci.sidedness);
    r
}

fn flag_normal(mut r: DesignResponse, valid: bool) -> DesignResponse {
    if !valid {
        r.valid = false;
        r.flags.push(Flag::NormalApproximationInvalid);
        r.warnings.push(Flag::NormalApproximationInvalid.message().to_string());
    }
    r
}

/// Runs a validated request against the design modules.
pub fn execute(resolved: &Resolved) -> Result<DesignResponse, Error> {
    let level = resolved.level;
    let res = resolved;
    Ok(match resolved.query {
        Query::StdDevDesign { delta } => sized(res, stddev_sample_size(delta, level)?),
        Query::StdDevPrecision { n } => precision(res, Method::ChiSquare, stddev_precision(n, level)?),
        Query::StdDevCi { s, n } => interval(res, Method::ChiSquare, &stddev_ci(s, n, level)?),
        Query::MeanDesign { delta } => sized(res, mean_sample_size(delta, level)?),
        Query::MeanPrecision { n } => precision(res, Method::StudentT, mean_precision(n, level)?),
        Query::MeanCi { mean, s, n } => interval(res, Method::StudentT, &mean_ci(mean, s, n, level)?),
        Query::ProportionDesign {
            p,
            delta,
            method,
            continuity,
        } => sized(
            res,
            match method {
                RequestMethod::Normal => proportion_sample_size_normal(p, delta, level, continuity)?,
                _ => proportion_sample_size_exact(p, delta, level)?,
            },
        ),
        Query::ProportionPrecision {
            p,
            n,
            method,
            continuity,
        } => match method {
            RequestMethod::Normal => {
                let m = if continuity {
                    Method::NormalContinuity
                } else {
                    Method::Normal
                };
                let r = precision(res, m, normal_precision(p, n, level, continuity)?);
                flag_normal(r, crate::proportion::wald_is_valid(p, n))
            }
            _ => precision(res, Method::Exact, exact_precision(p, n, level)?),
        },
        Query::ProportionCi { r, n, method } => {
            let obs = BinomialObservation::new(r, n)?;
            match method {
                RequestMethod::Normal => {
                    let (ci, valid) = wald_ci(obs.p_hat(), n, level)?;
                    flag_normal(interval(res, Method::Normal, &ci), valid)
                }
                _ => interval(res, Method::Exact, &clopper_pearson_ci(obs, level, Sidedness::TwoSided)?),
            }
        }
        Query::RareDesign { p, k, method } => sized(
            res,
            match method {
                RequestMethod::Poisson => rare_proportion_sample_size_poisson(p, k, level)?,
                _ => rare_proportion_sample_size_exact(p, k, level)?,
            },
        ),
        Query::RarePrecision { p, n, method } => match method {
            RequestMethod::Poisson => precision(res, Method::Poisson, rare_precision_poisson(p, n, level)?),
            _ => precision(res, Method::Exact, rare_precision_exact(p, n, level)?),
        },
        Query::OneSidedDesign { bound, method } => sized(
            res,
            match method {
                RequestMethod::ZeroAcceptance => zero_acceptance_sample_size(bound)?,
                RequestMethod::RuleOfThree => rule_of_three_sample_size(bound)?,
                _ => one_sided_exact_sample_size(bound)?,
            },
        ),
        Query::OneSidedPrecision { n, method } => match method {
            RequestMethod::RuleOfThree => precision(res, Method::RuleOfThree, rule_of_three_upper_bound(n, level)?),
            RequestMethod::ZeroAcceptance => {
                precision(res, Method::ZeroAcceptance, zero_event_ci(n, level)?.upper)
            }
            _ => {
                let obs = BinomialObservation::new(0, n)?;
                let ci = clopper_pearson_ci(obs, level, Sidedness::UpperOnly)?;
                precision(res, Method::Exact, ci.upper)
            }
        },
        Query::OneSidedCi { r, n, method } => match method {
            RequestMethod::RuleOfThree => {
                let upper = rule_of_three_upper_bound(n, level)?.min(1.0);
                let ci = ConfidenceInterval::new(0.0, upper, level, Sidedness::UpperOnly);
                interval(res, Method::RuleOfThree, &ci)
            }
            RequestMethod::ZeroAcceptance => interval(res, Method::ZeroAcceptance, &zero_event_ci(n, level)?),
            _ => {
                let obs = BinomialObservation::new(r, n)?;
                interval(res, Method::Exact, &clopper_pearson_ci(obs, level, Sidedness::UpperOnly)?)
            }
        },
        Query::CorrelationDesign { rho, delta } => sized(res, correlation_sample_size(rho, delta, level)?),
        Query::CorrelationPrecision { rho, n } => {
            precision(res, Method::FisherZ, correlation_width(rho, n, level)?)
        }
        Query::CorrelationCi { r, n } => interval(res, Method::FisherZ, &correlation_ci(r, n, level)?),
        Query::LifetimeDesign { k, censoring } => {
            let d = lifetime_required_events(k, level)?;
            let n = lifetime_sample_size(d.size, censoring)?;
            let mut r = sized(res, d);
            r.events = r.sample_size;
            r.sample_size = Some(n);
            r
        }
        Query::LifetimePrecision { e } => precision(res, Method::ChiSquare, lifetime_precision(e, level)?),
        Query::LifetimeCi { theta, e } => {
            let ci = lifetime_ci(theta, e, level)?;
            let hazard = hazard_rate_ci(&ci)?;
            let mut r = interval(res, Method::ChiSquare, &ci);
            r.hazard_interval = Some([hazard.lower, hazard.upper]);
            r
        }
    })
}

/// [`validate`] followed by [`execute`].
pub fn handle(operation: Operation, req: &DesignRequest) -> Result<DesignResponse, ApiError> {
    let resolved = validate(operation, req)?;
    execute(&resolved).map_err(ApiError::from)
}
