//! Scalar statistics kernels: online mean/variance/covariance, Pearson
//! correlation and interpolated quantiles.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceKind {
    /// Divide by n.
    Population,
    /// Divide by n - 1.
    Sample,
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    Some(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Welford online variance. Population flavor is defined for n >= 1,
/// sample flavor for n >= 2.
pub fn variance(xs: &[f64], kind: VarianceKind) -> Option<f64> {
    let mut n = 0u64;
    let mut m = 0.0f64;
    let mut m2 = 0.0f64;
    for &x in xs {
        n += 1;
        let d = x - m;
        m += d / n as f64;
        m2 += d * (x - m);
    }
    match kind {
        VarianceKind::Population if n >= 1 => Some(m2 / n as f64),
        VarianceKind::Sample if n >= 2 => Some(m2 / (n - 1) as f64),
        _ => None,
    }
}

/// Welford online covariance (population flavor).
pub fn covariance(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.is_empty() {
        return None;
    }
    let mut n = 0u64;
    let mut mx = 0.0f64;
    let mut my = 0.0f64;
    let mut c = 0.0f64;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        n += 1;
        let dx = x - mx;
        mx += dx / n as f64;
        my += (y - my) / n as f64;
        c += dx * (y - my);
    }
    Some(c / n as f64)
}

/// Pearson correlation. `None` when fewer than two points or either side
/// has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let vx = variance(xs, VarianceKind::Population)?;
    let vy = variance(ys, VarianceKind::Population)?;
    if vx <= 0.0 || vy <= 0.0 {
        return None;
    }
    let c = covariance(xs, ys)?;
    Some(c / (vx.sqrt() * vy.sqrt()))
}

/// Quantile with linear interpolation between closest ranks
/// (position q * (n - 1)).
pub fn quantile(xs: &[f64], q: f64) -> Option<f64> {
    if xs.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        return Some(sorted[lo]);
    }
    let frac = pos - lo as f64;
    Some(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

pub fn median(xs: &[f64]) -> Option<f64> {
    quantile(xs, 0.5)
}

/// Min, lower quartile, median, upper quartile, max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn five_number(xs: &[f64]) -> Option<FiveNumber> {
    Some(FiveNumber {
        min: quantile(xs, 0.0)?,
        q1: quantile(xs, 0.25)?,
        median: quantile(xs, 0.5)?,
        q3: quantile(xs, 0.75)?,
        max: quantile(xs, 1.0)?,
    })
}
