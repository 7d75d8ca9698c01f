//! Pixel-level precision/recall against a ground-truth mask, plus
//! wall-clock timing of detector runs.

use std::time::Instant;

use crate::error::Result;
use crate::grid::BitMask;
use crate::pipeline::{LandingClass, LandingMap};

/// Confusion counts and derived ratios. The positive class is
/// `LandingClass::Landing` versus the set bits of the ground truth.
/// A ratio whose denominator is zero is reported as `None`, never coerced
/// to 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    /// Wall-clock seconds of the timed computation, 0 when not measured.
    pub elapsed_seconds: f64,
    /// Textual record of the thresholds that produced the prediction.
    pub params_echo: String,
}

impl EvalReport {
    /// Single-line machine-readable form:
    /// `tp=.. fp=.. fn=.. tn=.. precision=.. recall=.. seconds=..`.
    pub fn machine_line(&self) -> String {
        format!(
            "tp={} fp={} fn={} tn={} precision={} recall={} seconds={}",
            self.true_pos,
            self.false_pos,
            self.false_neg,
            self.true_neg,
            ratio(self.precision),
            ratio(self.recall),
            self.elapsed_seconds,
        )
    }

    /// Multi-line human-readable form.
    pub fn human_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "confusion: tp={} fp={} fn={} tn={}\n",
            self.true_pos, self.false_pos, self.false_neg, self.true_neg
        ));
        s.push_str(&format!("precision: {}\n", ratio(self.precision)));
        s.push_str(&format!("recall:    {}\n", ratio(self.recall)));
        s.push_str(&format!("seconds:   {}", self.elapsed_seconds));
        if !self.params_echo.is_empty() {
            s.push_str(&format!("\nparams:    {}", self.params_echo));
        }
        s
    }
}

fn ratio(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

/// Counts the pixel-level confusion matrix of a prediction against the
/// ground truth.
pub fn evaluate(pred: &LandingMap, gt: &BitMask) -> Result<EvalReport> {
    pred.header().ensure_aligned(gt.header())?;
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    let mut tn = 0u64;
    for (&class, &truth) in pred.classes().iter().zip(gt.bits()) {
        let positive = class == LandingClass::Landing;
        match (positive, truth) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let precision = (tp + fp > 0).then(|| tp as f64 / (tp + fp) as f64);
    let recall = (tp + fn_ > 0).then(|| tp as f64 / (tp + fn_) as f64);
    Ok(EvalReport {
        true_pos: tp,
        false_pos: fp,
        false_neg: fn_,
        true_neg: tn,
        precision,
        recall,
        elapsed_seconds: 0.0,
        params_echo: String::new(),
    })
}

/// Wall-clock timing around a detector invocation (file I/O excluded by
/// construction: the closure receives already-parsed inputs).
pub fn timed_run<T>(task: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = task()?;
    Ok((out, start.elapsed().as_secs_f64()))
}
