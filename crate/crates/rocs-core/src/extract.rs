//! One-call extraction: a feature bundle in, an observation record out.

use crate::dataset::ObservationRecord;
use crate::error::{Error, Result};
use crate::geometry::{compute_flatness, compute_hollowness, compute_size, FlatnessParams};
use crate::interaction::{
    compute_heaviness, compute_rigidity, compute_roughness, detect_contact, ContactParams,
};
use crate::plane::RansacParams;
use crate::simulator::FeatureBundle;

#[derive(Debug, Clone, Default)]
pub struct ExtractConfig {
    pub ransac: RansacParams,
    pub flatness: FlatnessParams,
    pub contact: ContactParams,
}

/// Runs every property extractor over one bundle. A ramp run without a
/// slide yields a missing roughness; any other failure aborts.
pub fn extract_record(bundle: &FeatureBundle, config: &ExtractConfig) -> Result<ObservationRecord> {
    let size = compute_size(&bundle.side_cloud)?;
    let height = size.height();
    let flatness = compute_flatness(&bundle.top_cloud, &config.ransac, &config.flatness)?;
    let hollowness = compute_hollowness(height, bundle.d_reference, bundle.d_hole)?;
    let window = detect_contact(&bundle.press, &config.contact)?;
    let rigidity = compute_rigidity(&bundle.press, &window, height)?;
    let roughness = match compute_roughness(&bundle.ramp) {
        Ok(v) => Some(v),
        Err(Error::SlideNotObserved) => None,
        Err(e) => return Err(e),
    };
    let heaviness = compute_heaviness(bundle.scale_grams)?;
    Ok(ObservationRecord {
        class: bundle.meta.class.clone(),
        instance: bundle.meta.instance.clone(),
        repetition: bundle.meta.repetition,
        flatness,
        rigidity,
        roughness,
        size_length: size.normalized.length,
        size_width: size.normalized.width,
        size_height: size.normalized.height,
        heaviness,
        hollowness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{simulate_bundle, NoiseSpec, ShapeKind, SyntheticObject};

    #[test]
    fn zero_noise_cup_extracts_near_truth() {
        let obj = SyntheticObject {
            instance: "cup_01".into(),
            class: "cup".into(),
            shape: ShapeKind::CylinderCup,
            extents: [0.09, 0.09, 0.12],
            cavity_depth: 0.1,
            wall_thickness: Some(0.006),
            rigidity: 0.95,
            slide_angle: 0.55,
            mass_kg: 0.25,
        };
        let (bundle, truth) = simulate_bundle(&obj, 1, &NoiseSpec::default(), 3).unwrap();
        let record = extract_record(&bundle, &ExtractConfig::default()).unwrap();
        assert_eq!(record.class, "cup");
        assert_eq!(record.repetition, 1);
        assert!((record.size_height - truth.size.height).abs() < 1e-9);
        assert!((record.flatness - truth.flatness).abs() < 0.02);
        assert!((record.hollowness - truth.hollowness).abs() < 1e-9);
        assert!((record.rigidity - truth.rigidity).abs() < 0.02);
        assert_eq!(record.heaviness, truth.heaviness);
        let ro = record.roughness.unwrap();
        assert!((ro - truth.roughness.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn no_slide_yields_missing_roughness() {
        let obj = SyntheticObject {
            instance: "box_01".into(),
            class: "metal_box".into(),
            shape: ShapeKind::Box,
            extents: [0.2, 0.15, 0.1],
            cavity_depth: 0.0,
            wall_thickness: None,
            rigidity: 1.0,
            slide_angle: std::f64::consts::FRAC_PI_2,
            mass_kg: 0.8,
        };
        let (bundle, truth) = simulate_bundle(&obj, 1, &NoiseSpec::default(), 3).unwrap();
        let record = extract_record(&bundle, &ExtractConfig::default()).unwrap();
        assert_eq!(record.roughness, None);
        assert_eq!(truth.roughness, None);
        assert!(record.rigidity.abs() < 1e-9);
    }
}
