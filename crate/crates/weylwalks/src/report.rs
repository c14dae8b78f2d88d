//! Serializable reports. Every numeric field is a decimal string so that big
//! rationals and long floats survive a round trip through JSON unchanged.

use std::time::Instant;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use weylwalks_core::fl::{asymptotics_with, AsymptoticEstimate, Options};
use weylwalks_core::model::parse_rational;
use weylwalks_core::oracle::{fit_growth, fit_lengths, sample_series, DEFAULT_FIT_START};
use weylwalks_core::{ln_ratio, ModelKind, Result, Weights};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub model: String,
    pub a: String,
    pub b: String,
    pub regime: String,
    pub rho_exact: String,
    pub rho_float: String,
    pub r: String,
    pub gamma_float: String,
    pub conjectured: bool,
}

impl EstimateReport {
    pub fn new(est: &AsymptoticEstimate) -> Self {
        EstimateReport {
            model: est.kind.name().to_string(),
            a: est.weights.a().to_string(),
            b: est.weights.b().to_string(),
            regime: est.regime.name().to_string(),
            rho_exact: est.rho.to_string(),
            rho_float: format!("{:?}", est.rho.to_f64()),
            r: format!("{:?}", est.r_f64()),
            gamma_float: format!("{:?}", est.gamma),
            conjectured: est.conjectured,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub n: String,
    /// Exact `q(n)` as `p/q` (or an integer).
    pub exact: String,
    /// `γρⁿn^(−r)` plus oscillating terms, in scientific notation.
    pub predicted: String,
    /// `|q − predicted| / q`.
    pub relative_error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub n: String,
    pub rho_hat: String,
    pub r_hat: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub oracle_ms: String,
    pub pipeline_ms: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub model: String,
    pub a: String,
    pub b: String,
    pub regime: String,
    pub estimate: EstimateReport,
    pub samples: Vec<Sample>,
    pub fit: Option<FitReport>,
    pub bound: String,
    /// Errors decrease monotonically and the last one is under `bound`.
    pub passed: bool,
    /// Only filled when requested, so that default output is deterministic.
    pub timings: Option<Timings>,
}

/// `exp(ln)` in scientific notation with 16 significant digits.
pub fn format_from_ln(ln: f64) -> String {
    let l10 = ln / std::f64::consts::LN_10;
    let mut e = l10.floor();
    let mut m = 10f64.powf(l10 - e);
    if m >= 9.999_999_999_999_999_5 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{m:.15}e{}", e as i64)
}

/// Natural log of a positive number written by [`format_from_ln`] (or any float literal).
pub fn ln_of_decimal(s: &str) -> Option<f64> {
    let (m, e) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m.parse::<f64>().ok()?, e.parse::<i64>().ok()?),
        None => (s.parse::<f64>().ok()?, 0),
    };
    (m > 0.0).then(|| m.ln() + e as f64 * std::f64::consts::LN_10)
}

/// `|1 − predicted/exact|` from the stored strings.
pub fn recompute_relative_error(sample: &Sample) -> Option<f64> {
    let q = parse_rational(&sample.exact)?;
    let ln_pred = ln_of_decimal(&sample.predicted)?;
    Some((1.0 - (ln_pred - ln_ratio(&q)).exp()).abs())
}

fn sample(est: &AsymptoticEstimate, n: usize, q: &BigRational) -> Sample {
    let predicted = format_from_ln(est.ln_predict(n));
    let mut s = Sample {
        n: n.to_string(),
        exact: q.to_string(),
        predicted,
        relative_error: String::new(),
    };
    let err = recompute_relative_error(&s).unwrap_or(f64::NAN);
    s.relative_error = format!("{err:?}");
    s
}

/// Settings for [`validate`].
#[derive(Clone, Debug)]
pub struct ValidateConfig {
    pub lengths: Vec<usize>,
    pub bound: f64,
    pub cap: usize,
    pub options: Options,
    pub timings: bool,
}

/// Runs the oracle and the pipeline and compares them at the requested lengths.
pub fn validate(
    kind: ModelKind,
    weights: &Weights,
    cfg: &ValidateConfig,
) -> Result<ValidationReport> {
    let t0 = Instant::now();
    let est = asymptotics_with(kind, weights, cfg.options)?;
    let pipeline = t0.elapsed();

    let mut lengths = cfg.lengths.clone();
    let top = lengths.iter().copied().max().unwrap_or(0);
    let fit_n = (top >= 2 * DEFAULT_FIT_START).then_some(top);
    if let Some(n) = fit_n {
        lengths.extend(fit_lengths(n));
    }
    let t1 = Instant::now();
    let series = sample_series(kind, std::slice::from_ref(weights), &lengths, cfg.cap)?
        .pop()
        .expect("one series");
    let oracle = t1.elapsed();

    let mut ns = cfg.lengths.clone();
    ns.sort_unstable();
    ns.dedup();
    let samples: Vec<Sample> = ns
        .iter()
        .map(|&n| sample(&est, n, series.get(n).expect("sampled")))
        .collect();
    let errors: Vec<f64> = samples
        .iter()
        .map(|s| s.relative_error.parse().unwrap_or(f64::NAN))
        .collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let passed = monotone && errors.last().is_some_and(|&e| e < cfg.bound);
    let fit = match fit_n {
        Some(n) => {
            let f = fit_growth(&series, est.rho.to_f64())?;
            Some(FitReport {
                n: n.to_string(),
                rho_hat: format!("{:?}", f.rho_hat),
                r_hat: format!("{:?}", f.r_hat),
            })
        }
        None => None,
    };
    let report = EstimateReport::new(&est);
    Ok(ValidationReport {
        model: report.model.clone(),
        a: report.a.clone(),
        b: report.b.clone(),
        regime: report.regime.clone(),
        estimate: report,
        samples,
        fit,
        bound: format!("{:?}", cfg.bound),
        passed,
        timings: cfg.timings.then(|| Timings {
            oracle_ms: oracle.as_millis().to_string(),
            pipeline_ms: pipeline.as_millis().to_string(),
        }),
    })
}

/// One row of the regime diagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: String,
    pub b: String,
    pub regime: String,
    pub rho: String,
    pub r: String,
}

/// Positive grid points `lo + (hi − lo)·i/steps`.
pub fn grid_axis(lo: &BigRational, hi: &BigRational, steps: usize) -> Vec<BigRational> {
    let span = hi - lo;
    (0..=steps)
        .map(|i| lo + &span * BigRational::new(i.into(), steps.max(1).into()))
        .filter(|v| *v > BigRational::from_integer(0.into()))
        .collect()
}

/// Classifies and runs the pipeline on a rational grid; rows are sorted by `a`, then `b`.
pub fn sweep(
    kind: ModelKind,
    a_axis: &[BigRational],
    b_axis: &[BigRational],
    options: Options,
) -> Result<Vec<SweepRow>> {
    let mut pairs: Vec<(BigRational, BigRational)> = a_axis
        .iter()
        .flat_map(|a| b_axis.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    pairs.sort();
    pairs.dedup();
    let mut rows = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let w = Weights::new(a, b)?;
        let est = asymptotics_with(kind, &w, options)?;
        rows.push(SweepRow {
            a: w.a().to_string(),
            b: w.b().to_string(),
            regime: est.regime.name().to_string(),
            rho: format!("{:?}", est.rho.to_f64()),
            r: format!("{:?}", est.r_f64()),
        });
    }
    Ok(rows)
}
