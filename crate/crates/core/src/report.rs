//! Structured experiment records: measured series, fitted exponents with
//! their expected values, and pass/fail checks. A report is self-describing:
//! every verdict is recomputable from the stored numbers alone.

use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least squares on (log scale, log value).
///
/// Returns (slope, standard error of the slope). Every scale and value must
/// be positive and at least three points are required.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<(f64, f64)> {
    if series.len() < 3 {
        return Err(Error::domain("exponent fit needs at least 3 points"));
    }
    if series.iter().any(|&(x, y)| !(x > 0.0) || !(y > 0.0)) {
        return Err(Error::domain("exponent fit needs positive scales and values"));
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("exponent fit needs distinct scales"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let dof = (pts.len() as f64 - 2.0).max(1.0);
    let stderr = (ssr / dof / sxx).sqrt();
    Ok((slope, stderr))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckOp {
    /// value <= threshold
    Le,
    /// value >= threshold
    Ge,
    /// value < threshold
    Lt,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub op: CheckOp,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub name: String,
    pub slope: f64,
    pub stderr: f64,
    pub expected: f64,
    /// |slope - expected| / max(|expected|, floor)
    pub rel_dev: f64,
    pub tol: f64,
    /// Probe-only fits are reported without gating the run.
    pub asserted: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: serde_json::Value,
    pub series: Vec<Series>,
    pub fits: Vec<ExponentFit>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub error: Option<String>,
    pub timing_s: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            inputs: serde_json::Value::Null,
            series: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
            passed: true,
            error: None,
            timing_s: 0.0,
        }
    }

    pub fn set_inputs(&mut self, inputs: serde_json::Value) {
        self.inputs = inputs;
    }

    pub fn add_series(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<f64>>) {
        self.series.push(Series {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn add_check(&mut self, name: &str, value: f64, threshold: f64, op: CheckOp) -> bool {
        let pass = match op {
            CheckOp::Le => value <= threshold,
            CheckOp::Ge => value >= threshold,
            CheckOp::Lt => value < threshold,
        } && value.is_finite();
        self.checks.push(Check {
            name: name.to_string(),
            value,
            threshold,
            op,
            pass,
        });
        self.passed &= pass;
        pass
    }

    /// Record a fitted exponent against its expected value. `tol` bounds the
    /// relative deviation; `asserted = false` reports without gating.
    pub fn add_fit(
        &mut self,
        name: &str,
        slope: f64,
        stderr: f64,
        expected: f64,
        tol: f64,
        asserted: bool,
    ) -> bool {
        let rel_dev = (slope - expected).abs() / expected.abs().max(1e-12);
        let pass = !asserted || (rel_dev <= tol && slope.is_finite());
        self.fits.push(ExponentFit {
            name: name.to_string(),
            slope,
            stderr,
            expected,
            rel_dev,
            tol,
            asserted,
            pass,
        });
        self.passed &= pass;
        pass
    }

    pub fn record_error(&mut self, msg: String) {
        self.error = Some(msg);
        self.passed = false;
    }
}
