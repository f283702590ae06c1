//! Mean type mt h = limsup_{y→∞} (1/y) ln|h(iy)| from samples on a geometric
//! schedule.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Number of trailing increments whose running maximum gives the estimate.
const TAIL: usize = 3;
const STABLE_SPREAD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    Stable,
    Oscillatory,
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanTypeEstimate {
    pub slope: f64,
    /// (y, ln|h(iy)|/y)
    pub samples: Vec<(f64, f64)>,
    /// Increments Δln|h| / Δy between consecutive samples.
    pub increments: Vec<f64>,
    pub confidence: Confidence,
}

/// y = 2^j, j = 0..=20.
pub fn default_schedule() -> Vec<f64> {
    (0..=20).map(|j| 2f64.powi(j)).collect()
}

/// Estimates the mean type from `ln_abs(y) = ln|h(iy)|`.
///
/// The increments of ln|h| between consecutive samples converge to the same
/// limit as (1/y)ln|h| but without its O(1/y) bias; the estimate is the
/// maximum of the last few increments, so oscillating |h| reports its limsup.
pub fn mean_type<F>(ln_abs: F, schedule: &[f64]) -> Result<MeanTypeEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if schedule.len() < TAIL + 1 || schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition(format!("schedule needs at least {} strictly increasing samples", TAIL + 1)));
    }
    let mut logs = Vec::with_capacity(schedule.len());
    for &y in schedule {
        let l = ln_abs(y)?;
        if !l.is_finite() {
            return Err(Error::NonFinite(format!("ln|h(iy)| at y = {y}")));
        }
        logs.push(l);
    }
    let samples: Vec<(f64, f64)> = schedule.iter().zip(&logs).map(|(&y, &l)| (y, l / y)).collect();
    let increments: Vec<f64> =
        (1..logs.len()).map(|k| (logs[k] - logs[k - 1]) / (schedule[k] - schedule[k - 1])).collect();
    let tail = &increments[increments.len() - TAIL..];
    let slope = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = slope - lo;
    let confidence = if spread <= STABLE_SPREAD * (1.0 + slope.abs()) {
        Confidence::Stable
    } else if tail.windows(2).all(|w| w[1] > w[0]) {
        Confidence::Diverging
    } else {
        Confidence::Oscillatory
    };
    Ok(MeanTypeEstimate { slope, samples, increments, confidence })
}
