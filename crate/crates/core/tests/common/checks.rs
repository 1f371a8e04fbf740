//! Whole-suite checks shared by the acceptance runner and the focused tests.
//! Each returns a one-line summary on success and the offending cases on failure.

use std::time::{Duration, Instant};

use pilotsize::api::{self, DesignRequest, DesignResponse, Operation};
use pilotsize::dist::{chi2_cdf, chi2_quantile, f_cdf, f_quantile, normal_cdf, normal_quantile, reg_inc_gamma_p, t_cdf, t_quantile};
use pilotsize::intervals::*;
use pilotsize::proportion::*;
use pilotsize::table::check_reproduction;
use pilotsize::types::DegreesOfFreedom;
use pilotsize::{Probability, Sidedness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{level, oracle};

pub type Outcome = Result<String, String>;

fn report(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        let shown: Vec<String> = failures.iter().take(12).cloned().collect();
        let more = failures.len().saturating_sub(shown.len());
        let tail = if more > 0 { format!("; and {more} more") } else { String::new() };
        Err(format!("{} failure(s): {}{tail}", failures.len(), shown.join("; ")))
    }
}

// ---------------------------------------------------------------- tables

pub fn golden_reproduction() -> Outcome {
    let start = Instant::now();
    let report_ = check_reproduction().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let cells: usize = report_.iter().map(|r| r.cells).sum();
    let mut failures: Vec<String> = Vec::new();
    for r in &report_ {
        for m in &r.known {
            failures.push(format!("{m} (recorded erratum)"));
        }
        for m in &r.unexplained {
            failures.push(m.to_string());
        }
    }
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("regeneration took {elapsed:?}"));
    }
    report(failures, format!("{cells} cells in {} tables, {elapsed:.2?}", report_.len()))
}

// ------------------------------------------------------- worked examples

/// `(what, computed, printed)` for each pinned example.
pub fn worked_example_values() -> Vec<(&'static str, String, &'static str)> {
    let c95 = level(0.95);
    let pct = |x: f64| format!("{:.1}%", 100.0 * x);
    let prop = |r, n| {
        let ci = clopper_pearson_ci(BinomialObservation::new(r, n).unwrap(), c95, Sidedness::TwoSided).unwrap();
        format!("[{}, {}]", pct(ci.lower), pct(ci.upper))
    };
    let sd = stddev_ci(1.0, 5, c95).unwrap();
    let rho = correlation_ci(0.3, 20, c95).unwrap();
    let life = lifetime_ci(1.0, 20, c95).unwrap();
    let events = lifetime_required_events(0.2, c95).unwrap().size;
    vec![
        ("sigma N, delta 10%", stddev_sample_size(0.10, c95).unwrap().size.to_string(), "234"),
        ("sigma CI at N=5", format!("[{:.4}s, {:.4}s]", sd.lower, sd.upper), "[0.5991s, 2.8736s]"),
        ("mean N, delta 0.2", mean_sample_size(0.2, c95).unwrap().size.to_string(), "99"),
        ("proportion CI 3/20", prop(3, 20), "[3.2%, 37.9%]"),
        ("proportion CI 1/5", prop(1, 5), "[0.5%, 71.6%]"),
        (
            "rare N, p 1%, k 50%",
            rare_proportion_sample_size_exact(0.01, 0.5, c95).unwrap().size.to_string(),
            "1741",
        ),
        (
            "zero acceptance, p_U 1%",
            zero_acceptance_sample_size(OneSidedBound::upper(0.01, c95).unwrap()).unwrap().size.to_string(),
            "299",
        ),
        ("correlation CI r=0.3, N=20", format!("[{:.2}, {:.2}]", rho.lower, rho.upper), "[-0.16, 0.66]"),
        ("correlation N, rho 0.3, width 0.2", correlation_sample_size(0.3, 0.2, c95).unwrap().size.to_string(), "320"),
        (
            "lifetime E and N, k 0.2, C 10%",
            format!("E={events}, N={}", lifetime_sample_size(events, 0.10).unwrap()),
            "E=388, N=432",
        ),
        ("lifetime CI at E=20", format!("[{:.2}, {:.2}]", life.lower, life.upper), "[0.67, 1.64]"),
    ]
}

pub fn worked_examples() -> Outcome {
    let values = worked_example_values();
    let failures = values
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(what, got, want)| format!("{what}: got {got}, printed {want}"))
        .collect();
    report(failures, format!("{} pinned values", values.len()))
}

// ------------------------------------------------------------ minimality

pub const DESIGN_KINDS: usize = 11;

/// Checks one randomized design: the constraint holds at the returned size
/// and fails one below it. `u` and `v` are uniform in [0, 1).
pub fn minimality_case(kind: usize, u: f64, v: f64, confidence: f64) -> Result<(), String> {
    let lv = level(confidence);
    let e = |e: pilotsize::Error| e.to_string();
    // Sizes from closed-form ceilings are allowed this much round-off.
    const SLACK: f64 = 1e-9;
    let (name, size, min, holds): (String, u64, u64, Box<dyn Fn(u64) -> Result<bool, String>>) = match kind {
        0 => {
            let delta = 0.01 + 1.99 * u;
            let d = stddev_sample_size(delta, lv).map_err(e)?;
            let f = move |n| stddev_precision(n, lv).map(|x| x <= delta).map_err(e);
            (format!("stddev delta={delta}"), d.size, 2, Box::new(f))
        }
        1 => {
            let delta = 0.01 + 1.99 * u;
            let d = mean_sample_size(delta, lv).map_err(e)?;
            let f = move |n| mean_precision(n, lv).map(|x| x <= delta).map_err(e);
            (format!("mean delta={delta}"), d.size, 2, Box::new(f))
        }
        2 => {
            let rho = -0.95 + 1.9 * u;
            let delta = 0.05 + 0.95 * v;
            let d = correlation_sample_size(rho, delta, lv).map_err(e)?;
            let f = move |n| correlation_width(rho, n, lv).map(|x| x <= delta).map_err(e);
            (format!("correlation rho={rho} delta={delta}"), d.size, 4, Box::new(f))
        }
        3 => {
            let k = 0.05 + 1.95 * u;
            let d = lifetime_required_events(k, lv).map_err(e)?;
            let f = move |n| lifetime_precision(n, lv).map(|x| x <= k).map_err(e);
            (format!("lifetime k={k}"), d.size, 1, Box::new(f))
        }
        4 => {
            let p = 0.1 + 0.8 * u;
            let delta = 0.01 + 0.29 * v;
            let d = proportion_sample_size_exact(p, delta, lv).map_err(e)?;
            // Accepted sizes must satisfy the target at N and N + 1.
            let f = move |n: u64| -> Result<bool, String> {
                Ok(exact_precision(p, n, lv).map_err(e)? <= delta && exact_precision(p, n + 1, lv).map_err(e)? <= delta)
            };
            (format!("exact proportion p={p} delta={delta}"), d.size, 1, Box::new(f))
        }
        5 | 6 => {
            let cc = kind == 6;
            let p = 0.1 + 0.8 * u;
            let delta = 0.01 + 0.29 * v;
            let d = proportion_sample_size_normal(p, delta, lv, cc).map_err(e)?;
            let f = move |n| normal_precision(p, n, lv, cc).map(|x| x <= delta).map_err(e);
            (format!("normal proportion p={p} delta={delta} cc={cc}"), d.size, 1, Box::new(f))
        }
        7 => {
            let p = 0.005 + 0.095 * u;
            let k = 0.1 + 0.9 * v;
            let d = rare_proportion_sample_size_exact(p, k, lv).map_err(e)?;
            let f = move |n: u64| -> Result<bool, String> {
                Ok(rare_precision_exact(p, n, lv).map_err(e)? <= k && rare_precision_exact(p, n + 1, lv).map_err(e)? <= k)
            };
            (format!("rare exact p={p} k={k}"), d.size, 1, Box::new(f))
        }
        8 => {
            let p = 0.005 + 0.095 * u;
            let k = 0.1 + 0.9 * v;
            let d = rare_proportion_sample_size_poisson(p, k, lv).map_err(e)?;
            let f = move |n| rare_precision_poisson(p, n, lv).map(|x| x <= k * (1.0 + SLACK)).map_err(e);
            (format!("rare poisson p={p} k={k}"), d.size, 1, Box::new(f))
        }
        9 => {
            let m = 0.001 + 0.099 * u;
            let bound = if v < 0.5 { OneSidedBound::upper(m, lv) } else { OneSidedBound::lower(1.0 - m, lv) }
                .map_err(e)?;
            let d = zero_acceptance_sample_size(bound).map_err(e)?;
            let f = move |n| zero_event_ci(n, lv).map(|ci| ci.upper <= m * (1.0 + SLACK)).map_err(e);
            (format!("zero acceptance m={m}"), d.size, 1, Box::new(f))
        }
        _ => {
            let m = 0.001 + 0.099 * u;
            let bound = OneSidedBound::upper(m, lv).map_err(e)?;
            let ro3 = rule_of_three_sample_size(bound).map_err(e)?;
            let f3 = move |n| rule_of_three_upper_bound(n, lv).map(|x| x <= m * (1.0 + SLACK)).map_err(e);
            check_minimal(&format!("rule of three m={m}"), ro3.size, 1, &f3)?;
            let d = one_sided_exact_sample_size(bound).map_err(e)?;
            let f = move |n| {
                clopper_pearson_ci(BinomialObservation::new(0, n).map_err(e)?, lv, Sidedness::UpperOnly)
                    .map(|ci| ci.upper <= m)
                    .map_err(e)
            };
            (format!("one-sided exact m={m}"), d.size, 1, Box::new(f))
        }
    };
    check_minimal(&format!("{name} conf={confidence}"), size, min, &*holds)
}

fn check_minimal(name: &str, size: u64, min: u64, holds: &dyn Fn(u64) -> Result<bool, String>) -> Result<(), String> {
    if !holds(size)? {
        return Err(format!("{name}: constraint fails at returned N={size}"));
    }
    if size > min && holds(size - 1)? {
        return Err(format!("{name}: constraint already holds at N-1={}", size - 1));
    }
    Ok(())
}

pub fn minimality(triples: usize, seed: u64) -> Outcome {
    let failures: Vec<String> = (0..triples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let kind = i % DESIGN_KINDS;
            let confidence = rng.random_range(0.8..0.995);
            minimality_case(kind, rng.random(), rng.random(), confidence).err()
        })
        .collect();
    report(failures, format!("{triples} randomized designs across {DESIGN_KINDS} kinds"))
}

// ------------------------------------------------------- exact coverage

pub fn exact_coverage() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for &conf in &[0.90, 0.95, 0.99] {
        let lv = level(conf);
        for n in 1..=30u64 {
            let cis: Vec<_> = (0..=n)
                .map(|r| clopper_pearson_ci(BinomialObservation::new(r, n).unwrap(), lv, Sidedness::TwoSided).unwrap())
                .collect();
            for j in 1..=19 {
                let p = j as f64 * 0.05;
                let coverage: f64 = (0..=n)
                    .filter(|&r| cis[r as usize].lower <= p && p <= cis[r as usize].upper)
                    .map(|r| oracle::binom_pmf(r, n, p))
                    .sum();
                count += 1;
                worst = worst.min(coverage - conf);
                if coverage < conf - 1e-12 {
                    failures.push(format!("N={n} p={p:.2} conf={conf}: coverage {coverage:.6}"));
                }
            }
        }
    }
    report(failures, format!("{count} (N, p, confidence) points, smallest margin {worst:+.4}"))
}

// --------------------------------------------------- Monte-Carlo coverage

const CHUNKS: u64 = 100;

/// Runs `reps` replications split over fixed seeded chunks and returns the
/// fraction for which `covered` is true.
fn simulate(reps: u64, seed: u64, covered: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> f64 {
    let per = reps / CHUNKS;
    let hits: u64 = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c));
            (0..per).filter(|_| covered(&mut rng)).count() as u64
        })
        .sum();
    hits as f64 / (per * CHUNKS) as f64
}

fn normal_sample(rng: &mut ChaCha8Rng, n: usize, mu: f64, sigma: f64) -> (f64, f64) {
    let xs: Vec<f64> = (0..n).map(|_| { let z: f64 = StandardNormal.sample(rng); mu + sigma * z }).collect();
    let m = xs.iter().sum::<f64>() / n as f64;
    let s = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
    (m, s)
}

/// Empirical coverage of the 95% intervals for σ, μ, ρ and θ.
pub fn monte_carlo_coverages(reps: u64) -> Vec<(&'static str, f64)> {
    let lv = level(0.95);
    let (mu, sigma, n) = (5.0, 2.0, 10);
    let sd = simulate(reps, 11, |rng| {
        let (_, s) = normal_sample(rng, n, mu, sigma);
        stddev_ci(s, n as u64, lv).unwrap().contains(sigma)
    });
    let mean = simulate(reps, 22, |rng| {
        let (m, s) = normal_sample(rng, n, mu, sigma);
        mean_ci(m, s, n as u64, lv).unwrap().contains(mu)
    });
    let (rho, nr) = (0.5, 30);
    let corr = simulate(reps, 33, |rng| {
        let pairs: Vec<(f64, f64)> = (0..nr)
            .map(|_| {
                let a: f64 = StandardNormal.sample(rng);
                let b: f64 = StandardNormal.sample(rng);
                (a, rho * a + (1.0 - rho * rho).sqrt() * b)
            })
            .collect();
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nr as f64;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / nr as f64;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in &pairs {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx).powi(2);
            syy += (y - my).powi(2);
        }
        correlation_ci(sxy / (sxx * syy).sqrt(), nr as u64, lv).unwrap().contains(rho)
    });
    // Type II censoring: 20 units on test, stopped at the 10th failure.
    let (theta, units, events) = (3.0, 20, 10);
    let exp = Exp::new(1.0 / theta).unwrap();
    let life = simulate(reps, 44, |rng| {
        let mut t: Vec<f64> = (0..units).map(|_| exp.sample(rng)).collect();
        t.sort_by(f64::total_cmp);
        let stop = t[events - 1];
        let total: f64 = t[..events].iter().sum::<f64>() + (units - events) as f64 * stop;
        lifetime_ci(total / events as f64, events as u64, lv).unwrap().contains(theta)
    });
    vec![("sigma", sd), ("mu", mean), ("rho", corr), ("theta", life)]
}

pub fn monte_carlo(reps: u64) -> Outcome {
    let start = Instant::now();
    let cov = monte_carlo_coverages(reps);
    let elapsed = start.elapsed();
    let mut failures: Vec<String> = cov
        .iter()
        .filter(|(_, c)| !(0.944..=0.956).contains(c))
        .map(|(what, c)| format!("{what}: {:.2}%", 100.0 * c))
        .collect();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}"));
    }
    let shown: Vec<String> = cov.iter().map(|(w, c)| format!("{w} {:.2}%", 100.0 * c)).collect();
    report(failures, format!("{reps} reps each: {} ({elapsed:.1?})", shown.join(", ")))
}

// ------------------------------------------------------------- quantiles

pub const PROBS: [f64; 9] = [0.001, 0.01, 0.025, 0.05, 0.5, 0.95, 0.975, 0.99, 0.999];

pub fn df_grid() -> Vec<f64> {
    (1..=50).map(f64::from).chain([100.0, 1000.0]).collect()
}

fn prob(p: f64) -> Probability {
    Probability::new(p).unwrap()
}

fn dof(d: f64) -> DegreesOfFreedom {
    DegreesOfFreedom::new(d).unwrap()
}

/// Largest `|cdf(quantile(p)) - p|` and the number of failed monotonicity checks.
pub fn round_trip_errors() -> Vec<(&'static str, f64, usize)> {
    let dfs = df_grid();
    let mut out = Vec::new();

    let normal: Vec<f64> = PROBS.iter().map(|&p| normal_quantile(prob(p))).collect();
    let err = PROBS.iter().zip(&normal).map(|(&p, &z)| (normal_cdf(z) - p).abs()).fold(0.0, f64::max);
    out.push(("normal", err, normal.windows(2).filter(|w| w[0] >= w[1]).count()));

    let grid = |quant: &(dyn Fn(f64, f64) -> f64 + Sync), cdf: &(dyn Fn(f64, f64) -> f64 + Sync)| {
        dfs.par_iter()
            .map(|&d| {
                let q: Vec<f64> = PROBS.iter().map(|&p| quant(p, d)).collect();
                let err = PROBS.iter().zip(&q).map(|(&p, &x)| (cdf(x, d) - p).abs()).fold(0.0, f64::max);
                (err, q.windows(2).filter(|w| w[0] >= w[1]).count())
            })
            .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1))
    };
    let (e, m) = grid(
        &|p, d| chi2_quantile(prob(p), dof(d)).unwrap(),
        &|x, d| chi2_cdf(x, dof(d)).unwrap(),
    );
    out.push(("chi2", e, m));
    let (e, m) = grid(&|p, d| t_quantile(prob(p), dof(d)).unwrap(), &|x, d| t_cdf(x, dof(d)).unwrap());
    out.push(("t", e, m));

    let (e, m) = dfs
        .par_iter()
        .flat_map_iter(|&d1| dfs.iter().map(move |&d2| (d1, d2)))
        .map(|(d1, d2)| {
            let q: Vec<f64> = PROBS.iter().map(|&p| f_quantile(prob(p), dof(d1), dof(d2)).unwrap()).collect();
            let err = PROBS
                .iter()
                .zip(&q)
                .map(|(&p, &x)| (f_cdf(x, dof(d1), dof(d2)).unwrap() - p).abs())
                .fold(0.0, f64::max);
            (err, q.windows(2).filter(|w| w[0] >= w[1]).count())
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    out.push(("F", e, m));
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Largest relative deviation in each cross-identity.
pub fn cross_identity_errors() -> Vec<(&'static str, f64)> {
    let dfs = df_grid();
    // χ²_ν quantile against twice the Gamma(ν/2) quantile, the latter found
    // by bisection on the incomplete gamma function.
    let gamma = dfs
        .par_iter()
        .map(|&d| {
            PROBS
                .iter()
                .map(|&p| {
                    let g = oracle::bisect(|x| reg_inc_gamma_p(d / 2.0, x).unwrap(), p, 0.0, 10.0 * d + 50.0);
                    rel(chi2_quantile(prob(p), dof(d)).unwrap(), 2.0 * g)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let cauchy = PROBS
        .iter()
        .map(|&p| rel(t_quantile(prob(p), dof(1.0)).unwrap(), (std::f64::consts::PI * (p - 0.5)).tan()))
        .filter(|e| e.is_finite())
        .fold(0.0, f64::max);
    let recip = dfs
        .par_iter()
        .flat_map_iter(|&d1| dfs.iter().map(move |&d2| (d1, d2)))
        .map(|(d1, d2)| {
            PROBS
                .iter()
                .map(|&p| {
                    let a = f_quantile(prob(p), dof(d1), dof(d2)).unwrap();
                    let b = f_quantile(prob(1.0 - p), dof(d2), dof(d1)).unwrap();
                    rel(a, 1.0 / b)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let symmetry = PROBS
        .iter()
        .map(|&p| (normal_quantile(prob(p)) + normal_quantile(prob(1.0 - p))).abs())
        .fold(0.0, f64::max);
    vec![
        ("chi2 = 2 gamma", gamma),
        ("t_1 = tan", cauchy),
        ("F reciprocal", recip),
        ("normal symmetry (abs)", symmetry),
    ]
}

pub fn quantiles() -> Outcome {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (what, err, non_monotone) in round_trip_errors() {
        parts.push(format!("{what} {err:.1e}"));
        if err > 1e-8 {
            failures.push(format!("{what} round trip error {err:e}"));
        }
        if non_monotone > 0 {
            failures.push(format!("{what}: {non_monotone} non-increasing steps"));
        }
    }
    for (what, err) in cross_identity_errors() {
        parts.push(format!("{what} {err:.1e}"));
        let tol = if what.starts_with("normal") { 1e-12 } else { 1e-9 };
        if err > tol {
            failures.push(format!("{what}: {err:e}"));
        }
    }
    report(failures, parts.join(", "))
}

// ---------------------------------------------------------------- parity

/// What the direct library call returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Direct {
    Size(u64),
    Events(u64, u64),
    Precision(f64),
    Interval(f64, f64),
}

pub struct ParityCase {
    pub op: Operation,
    pub body: Value,
    pub direct: Box<dyn Fn() -> Direct + Send + Sync>,
}

fn case(op: Operation, body: Value, direct: impl Fn() -> Direct + Send + Sync + 'static) -> ParityCase {
    ParityCase {
        op,
        body,
        direct: Box::new(direct),
    }
}

/// The documented command matrix: every (estimand, operation) pair, most with
/// several parameter sets and methods.
pub fn parity_cases() -> Vec<ParityCase> {
    use Direct::*;
    use Operation::{Ci, Design};
    let l = level;
    let obs = |r, n| BinomialObservation::new(r, n).unwrap();
    let iv = |ci: pilotsize::ConfidenceInterval| Interval(ci.lower, ci.upper);
    vec![
        case(Design, json!({"estimand": "stddev", "delta": 0.1}), move || Size(stddev_sample_size(0.1, l(0.95)).unwrap().size)),
        case(Design, json!({"estimand": "stddev", "delta": 0.01, "confidence": 0.99}), move || Size(stddev_sample_size(0.01, l(0.99)).unwrap().size)),
        case(Operation::Precision, json!({"estimand": "stddev", "n": 5}), move || Precision(stddev_precision(5, l(0.95)).unwrap())),
        case(Operation::Precision, json!({"estimand": "stddev", "n": 30, "confidence": 0.9}), move || Precision(stddev_precision(30, l(0.9)).unwrap())),
        case(Ci, json!({"estimand": "stddev", "s": 1.0, "n": 5}), move || iv(stddev_ci(1.0, 5, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "stddev", "s": 2.5, "n": 12, "confidence": 0.99}), move || iv(stddev_ci(2.5, 12, l(0.99)).unwrap())),
        case(Design, json!({"estimand": "mean", "delta": 0.2}), move || Size(mean_sample_size(0.2, l(0.95)).unwrap().size)),
        case(Design, json!({"estimand": "paired", "delta": 0.5, "confidence": 0.9}), move || Size(mean_sample_size(0.5, l(0.9)).unwrap().size)),
        case(Operation::Precision, json!({"estimand": "mean", "n": 10}), move || Precision(mean_precision(10, l(0.95)).unwrap())),
        case(Operation::Precision, json!({"estimand": "paired", "n": 8, "confidence": 0.99}), move || Precision(mean_precision(8, l(0.99)).unwrap())),
        case(Ci, json!({"estimand": "mean", "mean": 5.0, "s": 2.0, "n": 10}), move || iv(mean_ci(5.0, 2.0, 10, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "paired", "mean": -1.5, "s": 0.8, "n": 6, "confidence": 0.9}), move || iv(mean_ci(-1.5, 0.8, 6, l(0.9)).unwrap())),
        case(Design, json!({"estimand": "proportion", "p": 0.15, "delta": 0.05}), move || Size(proportion_sample_size_exact(0.15, 0.05, l(0.95)).unwrap().size)),
        case(Design, json!({"estimand": "proportion", "p": 0.5, "delta": 0.25, "confidence": 0.99, "method": "exact"}), move || Size(proportion_sample_size_exact(0.5, 0.25, l(0.99)).unwrap().size)),
        case(Design, json!({"estimand": "proportion", "p": 0.5, "delta": 0.05, "method": "normal"}), move || Size(proportion_sample_size_normal(0.5, 0.05, l(0.95), true).unwrap().size)),
        case(Design, json!({"estimand": "proportion", "p": 0.3, "delta": 0.1, "method": "normal", "continuity": false}), move || Size(proportion_sample_size_normal(0.3, 0.1, l(0.95), false).unwrap().size)),
        case(Operation::Precision, json!({"estimand": "proportion", "p": 0.5, "n": 30}), move || Precision(exact_precision(0.5, 30, l(0.95)).unwrap())),
        case(Operation::Precision, json!({"estimand": "proportion", "p": 0.2, "n": 50, "method": "normal"}), move || Precision(normal_precision(0.2, 50, l(0.95), true).unwrap())),
        case(Operation::Precision, json!({"estimand": "proportion", "p": 0.2, "n": 50, "method": "normal", "continuity": false, "confidence": 0.9}), move || Precision(normal_precision(0.2, 50, l(0.9), false).unwrap())),
        case(Ci, json!({"estimand": "proportion", "r": 3, "n": 20}), move || iv(clopper_pearson_ci(obs(3, 20), l(0.95), Sidedness::TwoSided).unwrap())),
        case(Ci, json!({"estimand": "proportion", "r": 1, "n": 5}), move || iv(clopper_pearson_ci(obs(1, 5), l(0.95), Sidedness::TwoSided).unwrap())),
        case(Ci, json!({"estimand": "proportion", "r": 0, "n": 10, "confidence": 0.99}), move || iv(clopper_pearson_ci(obs(0, 10), l(0.99), Sidedness::TwoSided).unwrap())),
        case(Ci, json!({"estimand": "proportion", "r": 40, "n": 100, "method": "normal"}), move || iv(wald_ci(0.4, 100, l(0.95)).unwrap().0)),
        case(Design, json!({"estimand": "proportion-rare", "p": 0.01, "k": 0.5}), move || Size(rare_proportion_sample_size_exact(0.01, 0.5, l(0.95)).unwrap().size)),
        case(Design, json!({"estimand": "proportion-rare", "p": 0.05, "k": 0.1, "method": "poisson"}), move || Size(rare_proportion_sample_size_poisson(0.05, 0.1, l(0.95)).unwrap().size)),
        case(Design, json!({"estimand": "proportion-rare", "p": 0.975, "k": 0.25, "method": "poisson", "confidence": 0.9}), move || Size(rare_proportion_sample_size_poisson(0.975, 0.25, l(0.9)).unwrap().size)),
        case(Operation::Precision, json!({"estimand": "proportion-rare", "p": 0.01, "n": 30}), move || Precision(rare_precision_exact(0.01, 30, l(0.95)).unwrap())),
        case(Operation::Precision, json!({"estimand": "proportion-rare", "p": 0.05, "n": 1000, "method": "poisson"}), move || Precision(rare_precision_poisson(0.05, 1000, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "proportion-rare", "r": 2, "n": 300}), move || iv(clopper_pearson_ci(obs(2, 300), l(0.95), Sidedness::TwoSided).unwrap())),
        case(Design, json!({"estimand": "proportion-one-sided", "p_upper": 0.01}), move || Size(one_sided_exact_sample_size(OneSidedBound::upper(0.01, l(0.95)).unwrap()).unwrap().size)),
        case(Design, json!({"estimand": "proportion-one-sided", "p_upper": 0.01, "method": "zero-acceptance"}), move || Size(zero_acceptance_sample_size(OneSidedBound::upper(0.01, l(0.95)).unwrap()).unwrap().size)),
        case(Design, json!({"estimand": "proportion-one-sided", "p_upper": 0.05, "method": "rule-of-three", "confidence": 0.99}), move || Size(rule_of_three_sample_size(OneSidedBound::upper(0.05, l(0.99)).unwrap()).unwrap().size)),
        case(Design, json!({"estimand": "proportion-one-sided", "p_lower": 0.95, "method": "zero-acceptance"}), move || Size(zero_acceptance_sample_size(OneSidedBound::lower(0.95, l(0.95)).unwrap()).unwrap().size)),
        case(Operation::Precision, json!({"estimand": "proportion-one-sided", "n": 10, "method": "rule-of-three"}), move || Precision(rule_of_three_upper_bound(10, l(0.95)).unwrap())),
        case(Operation::Precision, json!({"estimand": "proportion-one-sided", "n": 10, "method": "zero-acceptance"}), move || Precision(zero_event_ci(10, l(0.95)).unwrap().upper)),
        case(Ci, json!({"estimand": "proportion-one-sided", "r": 0, "n": 10}), move || iv(clopper_pearson_ci(obs(0, 10), l(0.95), Sidedness::UpperOnly).unwrap())),
        case(Ci, json!({"estimand": "proportion-one-sided", "r": 2, "n": 50, "confidence": 0.9}), move || iv(clopper_pearson_ci(obs(2, 50), l(0.9), Sidedness::UpperOnly).unwrap())),
        case(Design, json!({"estimand": "correlation", "rho": 0.3, "delta": 0.2}), move || Size(correlation_sample_size(0.3, 0.2, l(0.95)).unwrap().size)),
        case(Design, json!({"estimand": "correlation", "rho": -0.8, "delta": 0.5, "confidence": 0.9}), move || Size(correlation_sample_size(-0.8, 0.5, l(0.9)).unwrap().size)),
        case(Operation::Precision, json!({"estimand": "correlation", "rho": 0.5, "n": 50}), move || Precision(correlation_width(0.5, 50, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "correlation", "r": 0.3, "n": 20}), move || iv(correlation_ci(0.3, 20, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "correlation", "r": -0.9, "n": 5, "confidence": 0.99}), move || iv(correlation_ci(-0.9, 5, l(0.99)).unwrap())),
        case(Design, json!({"estimand": "lifetime", "k": 0.2, "censoring": 0.1}), move || {
            let e = lifetime_required_events(0.2, l(0.95)).unwrap().size;
            Events(e, lifetime_sample_size(e, 0.1).unwrap())
        }),
        case(Design, json!({"estimand": "lifetime", "k": 0.5, "confidence": 0.9}), move || {
            let e = lifetime_required_events(0.5, l(0.9)).unwrap().size;
            Events(e, lifetime_sample_size(e, 0.0).unwrap())
        }),
        case(Operation::Precision, json!({"estimand": "lifetime", "e": 20}), move || Precision(lifetime_precision(20, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "lifetime", "theta": 1.0, "e": 20}), move || iv(lifetime_ci(1.0, 20, l(0.95)).unwrap())),
        case(Ci, json!({"estimand": "lifetime", "theta": 250.0, "e": 5, "confidence": 0.99}), move || iv(lifetime_ci(250.0, 5, l(0.99)).unwrap())),
    ]
}

/// Compares a response with the direct call, bit for bit.
pub fn matches_direct(r: &DesignResponse, d: Direct) -> bool {
    let same = |a: Option<f64>, b: f64| a.is_some_and(|a| a.to_bits() == b.to_bits());
    match d {
        Direct::Size(n) => r.sample_size == Some(n),
        Direct::Events(e, n) => r.events == Some(e) && r.sample_size == Some(n),
        Direct::Precision(x) => same(r.precision, x),
        Direct::Interval(lo, hi) => {
            r.interval.is_some_and(|[a, b]| a.to_bits() == lo.to_bits() && b.to_bits() == hi.to_bits())
        }
    }
}

/// Command-line arguments equivalent to a request body.
pub fn cli_args(op: Operation, body: &Value) -> Vec<String> {
    let mut args = vec![op.as_str().to_string(), body["estimand"].as_str().unwrap().to_string()];
    for (k, v) in body.as_object().unwrap() {
        if k == "estimand" {
            continue;
        }
        args.push(format!("--{}", k.replace('_', "-")));
        args.push(match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        });
    }
    args.extend(["--format".into(), "json".into()]);
    args
}

pub fn run_cli(args: &[String]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_pilotsize"))
        .args(args)
        .env_remove("PILOTSIZE_GOLDEN_DIR")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Sends one request to the in-memory router.
pub async fn call_service(app: axum::Router, method: &str, uri: &str, body: String) -> (u16, Value) {
    use http_body_util::BodyExt;
    use tower::ServiceExt;
    let req = axum::http::Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(axum::body::Body::from(body))
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    let status = res.status().as_u16();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

pub fn parity() -> Outcome {
    let cases = parity_cases();
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let app = pilotsize::service::router(&[]);
    let mut failures = Vec::new();
    for c in &cases {
        let direct = (c.direct)();
        let tag = format!("{} {}", c.op.as_str(), c.body);
        let req: DesignRequest = serde_json::from_value(c.body.clone()).unwrap();
        match api::handle(c.op, &req) {
            Ok(r) if matches_direct(&r, direct) => {}
            other => failures.push(format!("{tag}: api {other:?} vs {direct:?}")),
        }
        let (status, body) =
            runtime.block_on(call_service(app.clone(), "POST", &format!("/api/v1/{}", c.op.as_str()), c.body.to_string()));
        match serde_json::from_value::<DesignResponse>(body) {
            Ok(r) if status == 200 && matches_direct(&r, direct) => {}
            other => failures.push(format!("{tag}: http {status} {other:?} vs {direct:?}")),
        }
        let (code, out, err) = run_cli(&cli_args(c.op, &c.body));
        match serde_json::from_str::<DesignResponse>(&out) {
            Ok(r) if code == 0 && matches_direct(&r, direct) => {}
            other => failures.push(format!("{tag}: cli exit {code} {other:?} {err}")),
        }
    }
    report(failures, format!("{} cases through library, HTTP and CLI", cases.len()))
}
