//! Interaction-based property extraction: rigidity from a vertical press,
//! roughness from an inclined-ramp slide, heaviness from a scale reading.

use crate::error::{Error, Result};
use crate::stats::{mean, variance, VarianceKind};

pub const DEFAULT_EFFORT_CUTOFF: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PressSample {
    pub t: f64,
    /// End-effector height (meters).
    pub z: f64,
    /// One effort value per joint (N·m), signs preserved.
    pub efforts: Vec<f64>,
}

/// Time series of a vertical press: the end effector descends onto the
/// object while joint efforts are recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct PressLog {
    pub joint_names: Vec<String>,
    pub samples: Vec<PressSample>,
}

impl PressLog {
    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::InvalidLog("press log has no samples".into()));
        }
        if self.joint_names.is_empty() {
            return Err(Error::InvalidLog("press log names no joints".into()));
        }
        for pair in self.samples.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::InvalidLog(format!(
                    "timestamps not strictly increasing at t={}",
                    pair[1].t
                )));
            }
            if pair[1].z > pair[0].z + 1e-9 {
                return Err(Error::InvalidLog(format!(
                    "press height increases at t={}",
                    pair[1].t
                )));
            }
        }
        for s in &self.samples {
            if s.efforts.len() != self.joint_names.len() {
                return Err(Error::InvalidLog(format!(
                    "sample at t={} has {} efforts for {} joints",
                    s.t,
                    s.efforts.len(),
                    self.joint_names.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContactParams {
    /// Effort magnitude that ends the press (N·m).
    pub effort_cutoff: f64,
    /// Leading fraction of the log used to estimate the per-joint baseline.
    pub baseline_fraction: f64,
    /// Contact margin in baseline standard deviations.
    pub margin_sigmas: f64,
    /// Lower bound on the contact margin (N·m) so noise-free logs do not
    /// trigger on numerical dust.
    pub margin_floor: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            effort_cutoff: DEFAULT_EFFORT_CUTOFF,
            baseline_fraction: 0.1,
            margin_sigmas: 5.0,
            margin_floor: 0.05,
        }
    }
}

/// Contact and cutoff events located in a press log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactWindow {
    pub contact_index: usize,
    pub cutoff_index: usize,
    pub contact_time: f64,
    pub cutoff_time: f64,
}

/// Detects first contact (any joint leaving its baseline band) and the
/// cutoff event (any joint reaching the effort cutoff).
///
/// The baseline band per joint is `max(margin_sigmas * sigma,
/// margin_floor)` around the mean of the leading `baseline_fraction` of
/// samples. For a perfectly rigid object both events may coincide.
pub fn detect_contact(log: &PressLog, params: &ContactParams) -> Result<ContactWindow> {
    log.validate()?;
    if params.effort_cutoff <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "effort cutoff must be positive, got {}",
            params.effort_cutoff
        )));
    }
    let joints = log.joint_names.len();
    let window = ((log.samples.len() as f64 * params.baseline_fraction) as usize).max(1);

    let mut margins = Vec::with_capacity(joints);
    let mut baselines = Vec::with_capacity(joints);
    for j in 0..joints {
        let lead: Vec<f64> = log.samples[..window].iter().map(|s| s.efforts[j]).collect();
        let m = mean(&lead).unwrap();
        let sd = variance(&lead, VarianceKind::Population).unwrap().sqrt();
        baselines.push(m);
        margins.push((params.margin_sigmas * sd).max(params.margin_floor));
    }

    let contact_index = log
        .samples
        .iter()
        .position(|s| {
            s.efforts
                .iter()
                .enumerate()
                .any(|(j, &e)| (e - baselines[j]).abs() > margins[j])
        })
        .ok_or(Error::PressIncomplete)?;
    let cutoff_index = log.samples[contact_index..]
        .iter()
        .position(|s| s.efforts.iter().any(|&e| e.abs() >= params.effort_cutoff))
        .map(|i| i + contact_index)
        .ok_or(Error::PressIncomplete)?;

    Ok(ContactWindow {
        contact_index,
        cutoff_index,
        contact_time: log.samples[contact_index].t,
        cutoff_time: log.samples[cutoff_index].t,
    })
}

/// Rigidity value: vertical travel between contact and cutoff, normalized
/// by object height. 0 means fully rigid.
pub fn compute_rigidity(log: &PressLog, window: &ContactWindow, height: f64) -> Result<f64> {
    if height <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "object height must be positive, got {height}"
        )));
    }
    if window.cutoff_index < window.contact_index {
        return Err(Error::InvalidLog(
            "cutoff event precedes contact event".into(),
        ));
    }
    let z0 = log.samples[window.contact_index].z;
    let z1 = log.samples[window.cutoff_index].z;
    let deformation = (z0 - z1).max(0.0);
    Ok((deformation / height).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampSample {
    pub t: f64,
    /// Ramp inclination (radians).
    pub angle: f64,
}

/// Time series of an inclined-ramp experiment. The surface tilts from
/// horizontal until the object slides (or the run tops out).
#[derive(Debug, Clone, PartialEq)]
pub struct RampLog {
    pub samples: Vec<RampSample>,
    /// Timestamp of the detected slide event, if the object slid at all.
    pub slide_detected_at: Option<f64>,
}

impl RampLog {
    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::InvalidLog("ramp log has no samples".into()));
        }
        if self.samples[0].angle.abs() > 1e-9 {
            return Err(Error::InvalidLog(format!(
                "ramp must start horizontal, first angle is {}",
                self.samples[0].angle
            )));
        }
        for pair in self.samples.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::InvalidLog(format!(
                    "timestamps not strictly increasing at t={}",
                    pair[1].t
                )));
            }
            if pair[1].angle < pair[0].angle - 1e-9 {
                return Err(Error::InvalidLog(format!(
                    "ramp angle decreases at t={}",
                    pair[1].t
                )));
            }
        }
        Ok(())
    }

    /// Angle at time `t`, linearly interpolated between samples.
    pub fn angle_at(&self, t: f64) -> Option<f64> {
        let first = self.samples.first()?;
        let last = self.samples.last()?;
        if t < first.t || t > last.t {
            return None;
        }
        let idx = self.samples.partition_point(|s| s.t < t);
        if idx == 0 {
            return Some(first.angle);
        }
        let hi = &self.samples[idx.min(self.samples.len() - 1)];
        let lo = &self.samples[idx - 1];
        if hi.t == lo.t {
            return Some(lo.angle);
        }
        let frac = (t - lo.t) / (hi.t - lo.t);
        Some(lo.angle + frac * (hi.angle - lo.angle))
    }
}

/// Roughness: slide angle relative to a quarter turn, `|a_i - a_r| /
/// (pi/2)` with the initial angle pinned at zero. Errors with
/// [`Error::SlideNotObserved`] when the log carries no slide event; the
/// dataset layer records that as a missing value.
pub fn compute_roughness(log: &RampLog) -> Result<f64> {
    log.validate()?;
    let t_slide = log.slide_detected_at.ok_or(Error::SlideNotObserved)?;
    let a_r = log.angle_at(t_slide).ok_or_else(|| {
        Error::InvalidLog(format!(
            "slide event at t={t_slide} outside the sampled range"
        ))
    })?;
    Ok((a_r.abs() / std::f64::consts::FRAC_PI_2).clamp(0.0, 1.0))
}

/// Heaviness: scale reading quantized to whole grams (ties round down).
pub fn compute_heaviness(reading_grams: f64) -> Result<f64> {
    if !reading_grams.is_finite() || reading_grams < 0.0 {
        return Err(Error::InvalidScale(format!(
            "scale reading must be a non-negative number of grams, got {reading_grams}"
        )));
    }
    Ok((reading_grams - 0.5).ceil().max(0.0))
}
