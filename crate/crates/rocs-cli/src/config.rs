//! Pipeline configuration: plain key-value text with one section per
//! module. Unknown sections or keys are errors so typos cannot silently
//! fall back to defaults.
//!
//! ```text
//! [ransac]
//! distance_threshold = 0.02
//!
//! [knowledge]
//! eta = 4
//! eta.roughness = 3
//! ```

use rocs_core::error::{Error, Result};
use rocs_core::extract::ExtractConfig;
use rocs_core::knowledge::KbConfig;
use rocs_core::simulator::NoiseSpec;
use rocs_core::stats::VarianceKind;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub extract: ExtractConfig,
    pub noise: NoiseSpec,
    pub simulate_seed: u64,
    pub knowledge: KbConfig,
    pub variance: VarianceKind,
    pub threshold: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            extract: ExtractConfig::default(),
            noise: NoiseSpec::default(),
            simulate_seed: 0,
            knowledge: KbConfig::default(),
            variance: VarianceKind::Population,
            threshold: 0.8,
        }
    }
}

pub fn parse_variance(s: &str) -> Result<VarianceKind> {
    match s {
        "population" => Ok(VarianceKind::Population),
        "sample" => Ok(VarianceKind::Sample),
        other => Err(Error::InvalidParameter(format!(
            "variance flavor must be \"population\" or \"sample\", got {other:?}"
        ))),
    }
}

impl PipelineConfig {
    pub fn from_str(text: &str, path: &str) -> Result<PipelineConfig> {
        let mut config = PipelineConfig::default();
        let mut section = String::new();

        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.to_string(),
                line: line_no,
                message,
            };

            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| parse_err(format!("unterminated section header {line:?}")))?
                    .trim();
                const SECTIONS: [&str; 7] = [
                    "ransac",
                    "flatness",
                    "contact",
                    "simulate",
                    "knowledge",
                    "stats",
                    "substitution",
                ];
                if !SECTIONS.contains(&name) {
                    return Err(parse_err(format!(
                        "unknown section {name:?}; expected one of {SECTIONS:?}"
                    )));
                }
                section = name.to_string();
                continue;
            }

            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            if section.is_empty() {
                return Err(parse_err(format!("key {key:?} before any section header")));
            }
            config
                .apply(&section, key, value)
                .map_err(|message| parse_err(message))?;
        }
        Ok(config)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value
                .parse::<T>()
                .map_err(|_| format!("{key}: cannot parse {value:?}"))
        }

        match section {
            "ransac" => {
                let r = &mut self.extract.ransac;
                match key {
                    "leaf_size" => r.leaf_size = num(key, value)?,
                    "max_iterations" => r.max_iterations = num(key, value)?,
                    "distance_threshold" => r.distance_threshold = num(key, value)?,
                    "min_inlier_fraction" => r.min_inlier_fraction = num(key, value)?,
                    "seed" => r.seed = num(key, value)?,
                    _ => return Err(format!("unknown ransac key {key:?}")),
                }
            }
            "flatness" => {
                let f = &mut self.extract.flatness;
                match key {
                    "consensus_fraction" => f.consensus_fraction = num(key, value)?,
                    "max_normal_angle_deg" => {
                        f.max_normal_angle = num::<f64>(key, value)?.to_radians()
                    }
                    "normal_k" => f.normal_k = num(key, value)?,
                    "max_planes" => f.max_planes = num(key, value)?,
                    "plane_threshold" => f.plane_threshold = num(key, value)?,
                    "max_surface_variation" => f.max_surface_variation = num(key, value)?,
                    _ => return Err(format!("unknown flatness key {key:?}")),
                }
            }
            "contact" => {
                let c = &mut self.extract.contact;
                match key {
                    "effort_cutoff" => c.effort_cutoff = num(key, value)?,
                    "baseline_fraction" => c.baseline_fraction = num(key, value)?,
                    "margin_sigmas" => c.margin_sigmas = num(key, value)?,
                    "margin_floor" => c.margin_floor = num(key, value)?,
                    _ => return Err(format!("unknown contact key {key:?}")),
                }
            }
            "simulate" => match key {
                "point_std" => self.noise.point_std = num(key, value)?,
                "marker_std" => self.noise.marker_std = num(key, value)?,
                "effort_std" => self.noise.effort_std = num(key, value)?,
                "angle_std" => self.noise.angle_std = num(key, value)?,
                "scale_std" => self.noise.scale_std = num(key, value)?,
                "seed" => self.simulate_seed = num(key, value)?,
                _ => return Err(format!("unknown simulate key {key:?}")),
            },
            "knowledge" => match key {
                "seed" => self.knowledge.seed = num(key, value)?,
                "eta" => self.knowledge.eta_default = num(key, value)?,
                "max_iterations" => self.knowledge.max_iterations = num(key, value)?,
                _ => {
                    if let Some(property) = key.strip_prefix("eta.") {
                        self.knowledge
                            .eta_overrides
                            .insert(property.to_string(), num(key, value)?);
                    } else {
                        return Err(format!("unknown knowledge key {key:?}"));
                    }
                }
            },
            "stats" => match key {
                "variance" => self.variance = parse_variance(value).map_err(|e| e.to_string())?,
                _ => return Err(format!("unknown stats key {key:?}")),
            },
            "substitution" => match key {
                "threshold" => self.threshold = num(key, value)?,
                _ => return Err(format!("unknown substitution key {key:?}")),
            },
            _ => unreachable!("section names are validated at the header"),
        }
        Ok(())
    }
}
