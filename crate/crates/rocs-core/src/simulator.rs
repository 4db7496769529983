//! Synthetic observation bundles for parametric tabletop objects: point
//! clouds sampled on the object surface, marker distances, press and
//! ramp interaction logs, and scale readings, each with optional
//! Gaussian sensor noise and a per-bundle ground truth.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geom::Point3;
use crate::geometry::{SizeTriple, MIN_CAVITY_DEPTH};
use crate::interaction::{PressLog, PressSample, RampLog, RampSample, DEFAULT_EFFORT_CUTOFF};
use crate::seed::{derive_seed_indexed, seed_rng};

/// Surface sampling density, points per square meter.
pub const SAMPLING_DENSITY: f64 = 1.0e4;
/// Lattice pitch implied by the sampling density.
pub const LATTICE_PITCH: f64 = 0.01;
/// Height of the depth camera above the table plane, meters.
pub const CAMERA_HEIGHT: f64 = 1.0;
/// Press controller sampling interval, seconds.
pub const PRESS_DT: f64 = 0.01;
/// Press descent speed, meters per second.
pub const PRESS_SPEED: f64 = 0.01;
/// The presser starts this far above the object top.
pub const PRESS_CLEARANCE: f64 = 0.02;
/// Ramp tilt rate, radians per second.
pub const RAMP_RATE: f64 = 0.05;
/// Ramp log sampling interval, seconds.
pub const RAMP_DT: f64 = 0.02;
/// Per-joint contribution of the pressing wrench to the effort channels.
pub const JOINT_WEIGHTS: [f64; 5] = [1.0, -0.7, 0.45, -0.25, 0.15];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    /// Solid rectangular box.
    Box,
    /// Rectangular box with an open rectangular cavity.
    OpenBox,
    /// Cylinder with an open cylindrical cavity.
    CylinderCup,
    /// Solid sphere resting on the table.
    Sphere,
    /// Thin solid sheet (a box dominated by its footprint).
    FlatSheet,
}

impl ShapeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShapeKind::Box => "box",
            ShapeKind::OpenBox => "open_box",
            ShapeKind::CylinderCup => "cylinder_cup",
            ShapeKind::Sphere => "sphere",
            ShapeKind::FlatSheet => "flat_sheet",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(ShapeKind::Box),
            "open_box" => Ok(ShapeKind::OpenBox),
            "cylinder_cup" => Ok(ShapeKind::CylinderCup),
            "sphere" => Ok(ShapeKind::Sphere),
            "flat_sheet" => Ok(ShapeKind::FlatSheet),
            other => Err(Error::InvalidObject(format!("unknown shape {other:?}"))),
        }
    }

    pub fn is_open(&self) -> bool {
        matches!(self, ShapeKind::OpenBox | ShapeKind::CylinderCup)
    }
}

/// A parametric object the simulator can observe. Lengths in meters,
/// mass in kilograms, angles in radians. `rigidity` is the material
/// rigidity (1 = does not deform); `slide_angle` at or beyond a quarter
/// turn means the object never slides on the ramp.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SyntheticObject {
    pub instance: String,
    pub class: String,
    pub shape: ShapeKind,
    /// Length, width, height.
    pub extents: [f64; 3],
    /// Depth of the open cavity; zero for solid shapes.
    pub cavity_depth: f64,
    /// Cavity wall thickness; defaults to a tenth of the footprint's
    /// smaller side.
    pub wall_thickness: Option<f64>,
    pub rigidity: f64,
    pub slide_angle: f64,
    pub mass_kg: f64,
}

impl SyntheticObject {
    pub fn wall(&self) -> f64 {
        self.wall_thickness
            .unwrap_or(0.1 * self.extents[0].min(self.extents[1]))
    }

    /// Material left under the cavity; the full height for solid shapes.
    pub fn base_thickness(&self) -> f64 {
        self.extents[2] - self.cavity_depth
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidObject(format!("{}: {msg}", self.instance)));
        if self.instance.is_empty() || self.class.is_empty() {
            return Err(Error::InvalidObject(
                "instance and class must be non-empty".to_string(),
            ));
        }
        let [l, w, h] = self.extents;
        if !(l.is_finite() && w.is_finite() && h.is_finite()) || l <= 0.0 || w <= 0.0 || h <= 0.0 {
            return fail(format!("extents {:?} must be positive", self.extents));
        }
        match self.shape {
            ShapeKind::Sphere => {
                if (l - w).abs() > 1e-12 || (l - h).abs() > 1e-12 {
                    return fail("sphere extents must be equal".to_string());
                }
            }
            ShapeKind::CylinderCup => {
                if (l - w).abs() > 1e-12 {
                    return fail("cylinder footprint must be square".to_string());
                }
            }
            _ => {}
        }
        if self.shape.is_open() {
            if !(self.cavity_depth > 0.0 && self.cavity_depth < h) {
                return fail(format!(
                    "cavity depth {} must lie strictly inside (0, {h})",
                    self.cavity_depth
                ));
            }
            let t = self.wall();
            if !(t > 0.0 && 2.0 * t < l.min(w)) {
                return fail(format!("wall thickness {t} leaves no cavity footprint"));
            }
        } else if self.cavity_depth != 0.0 {
            return fail("solid shapes cannot have a cavity".to_string());
        }
        if !self.rigidity.is_finite() || !(0.0..=1.0).contains(&self.rigidity) {
            return fail(format!("rigidity {} outside [0, 1]", self.rigidity));
        }
        if !self.slide_angle.is_finite() || self.slide_angle < 0.0 {
            return fail(format!("slide angle {} must be >= 0", self.slide_angle));
        }
        if !self.mass_kg.is_finite() || self.mass_kg <= 0.0 {
            return fail(format!("mass {} must be positive", self.mass_kg));
        }
        Ok(())
    }
}

/// Standard deviations of the sensor noise channels; all zero by default.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct NoiseSpec {
    /// Per-coordinate point cloud noise, meters.
    pub point_std: f64,
    /// Marker distance noise, meters.
    pub marker_std: f64,
    /// Per-sample joint effort noise.
    pub effort_std: f64,
    /// Ramp angle readout noise, radians.
    pub angle_std: f64,
    /// Scale readout noise, grams.
    pub scale_std: f64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        let stds = [
            self.point_std,
            self.marker_std,
            self.effort_std,
            self.angle_std,
            self.scale_std,
        ];
        if stds.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise deviations must be finite and non-negative: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BundleMeta {
    pub class: String,
    pub instance: String,
    pub repetition: u32,
}

/// Everything one observation run produces. The side cloud covers the
/// whole visible object surface; the top cloud only its upward-facing
/// parts as seen from above.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBundle {
    pub meta: BundleMeta,
    pub side_cloud: Vec<Point3>,
    pub top_cloud: Vec<Point3>,
    /// Camera-to-table marker distance.
    pub d_reference: f64,
    /// Camera-to-inner-bottom marker distance.
    pub d_hole: f64,
    pub press: PressLog,
    pub ramp: RampLog,
    pub scale_grams: f64,
}

/// Expected extraction results for a bundle, computed from the object
/// parameters and the emitted lattice, not from the extraction code.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub extents: [f64; 3],
    pub size: SizeTriple,
    pub flatness: f64,
    pub hollowness: f64,
    /// Grams, already quantized.
    pub heaviness: f64,
    pub rigidity: f64,
    pub roughness: Option<f64>,
}

/// Noiseless surface lattice of an object, with the point counts the
/// flatness ground truth is defined over.
#[derive(Debug, Clone)]
pub struct SurfaceSample {
    pub object: Vec<Point3>,
    pub top: Vec<Point3>,
    /// Points lying on the topmost planar face (the rim for open
    /// shapes); zero when no such face exists.
    pub plane_points: usize,
}

fn steps(len: f64) -> usize {
    ((len / LATTICE_PITCH).ceil() as usize + 1).max(2)
}

/// Inclusive linspace with exact endpoints.
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Angles of a lattice ring. The count is a multiple of four so the
/// axis-aligned extremes of the circle are always sampled.
fn ring_angles(radius: f64) -> Vec<f64> {
    if radius < LATTICE_PITCH / 2.0 {
        return vec![0.0];
    }
    let raw = (TAU * radius / LATTICE_PITCH).ceil() as usize;
    let n = raw.div_ceil(4).max(2) * 4;
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

fn sample_box_sides(l: f64, w: f64, h: f64, out: &mut Vec<Point3>) {
    let xs = linspace(0.0, l, steps(l));
    let ys = linspace(0.0, w, steps(w));
    let zs = linspace(0.0, h, steps(h));
    for &x in &xs {
        for &z in &zs {
            out.push(Point3::new(x, 0.0, z));
            out.push(Point3::new(x, w, z));
        }
    }
    for &y in &ys {
        for &z in &zs {
            out.push(Point3::new(0.0, y, z));
            out.push(Point3::new(l, y, z));
        }
    }
}

fn sample_solid_box(l: f64, w: f64, h: f64) -> SurfaceSample {
    let xs = linspace(0.0, l, steps(l));
    let ys = linspace(0.0, w, steps(w));
    let mut top = Vec::new();
    for &x in &xs {
        for &y in &ys {
            top.push(Point3::new(x, y, h));
        }
    }
    let mut object = top.clone();
    sample_box_sides(l, w, h, &mut object);
    let plane_points = top.len();
    SurfaceSample {
        object,
        top,
        plane_points,
    }
}

fn sample_open_box(l: f64, w: f64, h: f64, cavity: f64, t: f64) -> SurfaceSample {
    let xs = linspace(0.0, l, steps(l));
    let ys = linspace(0.0, w, steps(w));
    let floor_z = h - cavity;
    let mut rim = Vec::new();
    let mut floor = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let inside = x > t && x < l - t && y > t && y < w - t;
            if inside {
                floor.push(Point3::new(x, y, floor_z));
            } else {
                rim.push(Point3::new(x, y, h));
            }
        }
    }
    let mut object = Vec::new();
    sample_box_sides(l, w, h, &mut object);
    // inner cavity walls
    let ixs = linspace(t, l - t, steps(l - 2.0 * t));
    let iys = linspace(t, w - t, steps(w - 2.0 * t));
    let izs = linspace(floor_z, h, steps(cavity));
    for &x in &ixs {
        for &z in &izs {
            object.push(Point3::new(x, t, z));
            object.push(Point3::new(x, w - t, z));
        }
    }
    for &y in &iys {
        for &z in &izs {
            object.push(Point3::new(t, y, z));
            object.push(Point3::new(l - t, y, z));
        }
    }
    object.extend_from_slice(&rim);
    object.extend_from_slice(&floor);
    let plane_points = rim.len();
    let mut top = rim;
    top.extend_from_slice(&floor);
    SurfaceSample {
        object,
        top,
        plane_points,
    }
}

fn sample_cylinder_cup(l: f64, h: f64, cavity: f64, t: f64) -> SurfaceSample {
    let radius = l / 2.0;
    let inner = radius - t;
    let center = (radius, radius);
    let floor_z = h - cavity;
    let ring = |rho: f64, z: f64, out: &mut Vec<Point3>| {
        for a in ring_angles(rho) {
            out.push(Point3::new(
                center.0 + rho * a.cos(),
                center.1 + rho * a.sin(),
                z,
            ));
        }
    };

    let mut object = Vec::new();
    for &z in &linspace(0.0, h, steps(h)) {
        ring(radius, z, &mut object);
    }
    for &z in &linspace(floor_z, h, steps(cavity)) {
        ring(inner, z, &mut object);
    }
    let mut rim = Vec::new();
    for &rho in &linspace(inner, radius, steps(radius - inner)) {
        ring(rho, h, &mut rim);
    }
    let mut floor = Vec::new();
    for &rho in &linspace(0.0, inner, steps(inner)) {
        ring(rho, floor_z, &mut floor);
    }
    object.extend_from_slice(&rim);
    object.extend_from_slice(&floor);
    let plane_points = rim.len();
    let mut top = rim;
    top.extend_from_slice(&floor);
    SurfaceSample {
        object,
        top,
        plane_points,
    }
}

fn sample_sphere(diameter: f64) -> SurfaceSample {
    let radius = diameter / 2.0;
    let center = (radius, radius, radius);
    // odd ring count puts one ring exactly on the equator
    let mut m = ((PI * radius / LATTICE_PITCH).ceil() as usize + 1).max(5);
    if m % 2 == 0 {
        m += 1;
    }
    let mut object = Vec::new();
    let mut top = Vec::new();
    for j in 0..m {
        let phi = PI * j as f64 / (m - 1) as f64;
        let z = center.2 + radius * phi.cos();
        let rho = radius * phi.sin();
        let mut ring = Vec::new();
        for a in ring_angles(rho) {
            ring.push(Point3::new(
                center.0 + rho * a.cos(),
                center.1 + rho * a.sin(),
                z,
            ));
        }
        if j <= (m - 1) / 2 {
            top.extend_from_slice(&ring);
        }
        object.extend(ring);
    }
    SurfaceSample {
        object,
        top,
        plane_points: 0,
    }
}

/// Noiseless surface lattice at [`SAMPLING_DENSITY`], in the object
/// frame: footprint corner at the origin, table at z = 0.
pub fn sample_surface(obj: &SyntheticObject) -> Result<SurfaceSample> {
    obj.validate()?;
    let [l, w, h] = obj.extents;
    Ok(match obj.shape {
        ShapeKind::Box | ShapeKind::FlatSheet => sample_solid_box(l, w, h),
        ShapeKind::OpenBox => sample_open_box(l, w, h, obj.cavity_depth, obj.wall()),
        ShapeKind::CylinderCup => sample_cylinder_cup(l, h, obj.cavity_depth, obj.wall()),
        ShapeKind::Sphere => sample_sphere(h),
    })
}

/// Expected extraction output for an object whose lattice is `sample`.
/// `plane_threshold` is the plane inlier distance the extractor will
/// use: a cavity shallower than it merges into the rim plane.
pub fn ground_truth(
    obj: &SyntheticObject,
    sample: &SurfaceSample,
    plane_threshold: f64,
) -> Result<GroundTruth> {
    let [l, w, h] = obj.extents;
    let flatness = if sample.plane_points == 0 {
        0.0
    } else if sample.plane_points == sample.top.len() || obj.cavity_depth <= plane_threshold {
        1.0
    } else {
        sample.plane_points as f64 / sample.top.len() as f64
    };
    let hollowness = if obj.cavity_depth < MIN_CAVITY_DEPTH {
        0.0
    } else {
        (obj.cavity_depth / h).clamp(0.0, 1.0)
    };
    let grams = obj.mass_kg * 1000.0;
    let heaviness = (grams - 0.5).ceil().max(0.0);
    let roughness = if obj.slide_angle < FRAC_PI_2 {
        Some((obj.slide_angle / FRAC_PI_2).clamp(0.0, 1.0))
    } else {
        None
    };
    Ok(GroundTruth {
        extents: obj.extents,
        size: SizeTriple::from_extents([l, w, h])?,
        flatness,
        hollowness,
        heaviness,
        rigidity: 1.0 - obj.rigidity,
        roughness,
    })
}

fn jitter_points(points: &mut [Point3], std: f64, rng: &mut ChaCha8Rng) {
    if std <= 0.0 {
        return;
    }
    let dist = Normal::new(0.0, std).expect("finite std");
    for p in points {
        p.x += dist.sample(rng);
        p.y += dist.sample(rng);
        p.z += dist.sample(rng);
    }
}

fn noise_term(std: f64, rng: &mut ChaCha8Rng) -> f64 {
    if std <= 0.0 {
        0.0
    } else {
        Normal::new(0.0, std).expect("finite std").sample(rng)
    }
}

/// Synthesizes the effort log of a vertical press. The presser starts
/// [`PRESS_CLEARANCE`] above the object and stops once the lead joint
/// effort reaches the cutoff; a fully rigid object stalls the press at
/// its top surface.
fn synthesize_press(obj: &SyntheticObject, noise: &NoiseSpec, rng: &mut ChaCha8Rng) -> PressLog {
    let h = obj.extents[2];
    let z0 = h + PRESS_CLEARANCE;
    let cutoff = DEFAULT_EFFORT_CUTOFF;
    let rigid = obj.rigidity >= 1.0;
    let stiffness = if rigid {
        f64::INFINITY
    } else {
        cutoff / (h * (1.0 - obj.rigidity))
    };

    let mut samples = Vec::new();
    let mut push = |t: f64, z: f64, effort: f64, rng: &mut ChaCha8Rng| {
        let efforts = JOINT_WEIGHTS
            .iter()
            .map(|w| w * effort + noise_term(noise.effort_std, rng))
            .collect();
        samples.push(PressSample { t, z, efforts });
    };

    let mut i: u64 = 0;
    loop {
        let t = i as f64 * PRESS_DT;
        let z = z0 - PRESS_SPEED * t;
        if z >= h {
            push(t, z, 0.0, rng);
            i += 1;
            continue;
        }
        if rigid {
            // the presser stalls on the surface; effort ramps past the
            // cutoff while z holds
            for extra in 0..3 {
                let et = (i + extra) as f64 * PRESS_DT;
                push(et, h, cutoff * (1.0 + 0.02 * extra as f64), rng);
            }
            break;
        }
        let effort = stiffness * (h - z);
        push(t, z, effort, rng);
        if effort >= cutoff {
            // two overshoot samples past the stop command
            for extra in 1..=2 {
                let et = (i + extra) as f64 * PRESS_DT;
                let ez = z0 - PRESS_SPEED * et;
                push(et, ez, stiffness * (h - ez), rng);
            }
            break;
        }
        i += 1;
    }

    PressLog {
        joint_names: (1..=JOINT_WEIGHTS.len())
            .map(|j| format!("joint_{j}"))
            .collect(),
        samples,
    }
}

/// Synthesizes a ramp tilt log. The platform tilts at [`RAMP_RATE`]
/// until either the object slides (recorded as the exact slide time) or
/// the ramp reaches a quarter turn.
fn synthesize_ramp(obj: &SyntheticObject, noise: &NoiseSpec, rng: &mut ChaCha8Rng) -> RampLog {
    let slides = obj.slide_angle < FRAC_PI_2;
    let end_angle = if slides {
        (obj.slide_angle + 0.05).min(FRAC_PI_2)
    } else {
        FRAC_PI_2
    };
    let mut samples = Vec::new();
    let mut i: u64 = 0;
    loop {
        let t = i as f64 * RAMP_DT;
        let clean = RAMP_RATE * t;
        let angle = if i == 0 {
            0.0
        } else {
            let noisy = clean + noise_term(noise.angle_std, rng);
            noisy.max(samples.last().map_or(0.0, |s: &RampSample| s.angle))
        };
        samples.push(RampSample { t, angle });
        if clean >= end_angle {
            break;
        }
        i += 1;
    }
    RampLog {
        samples,
        slide_detected_at: slides.then(|| obj.slide_angle / RAMP_RATE),
    }
}

/// Simulates one observation run of `obj`. Identical arguments produce
/// identical bundles; the ground truth describes the noiseless object.
pub fn simulate_bundle(
    obj: &SyntheticObject,
    repetition: u32,
    noise: &NoiseSpec,
    root_seed: u64,
) -> Result<(FeatureBundle, GroundTruth)> {
    obj.validate()?;
    noise.validate()?;
    if repetition == 0 {
        return Err(Error::InvalidParameter(
            "repetition numbering starts at 1".to_string(),
        ));
    }
    let mut rng = seed_rng(derive_seed_indexed(
        root_seed,
        &obj.instance,
        repetition as u64,
    ));

    let sample = sample_surface(obj)?;
    let truth = ground_truth(
        obj,
        &sample,
        crate::geometry::FlatnessParams::default().plane_threshold,
    )?;

    let mut side_cloud = sample.object.clone();
    let mut top_cloud = sample.top.clone();
    jitter_points(&mut side_cloud, noise.point_std, &mut rng);
    jitter_points(&mut top_cloud, noise.point_std, &mut rng);

    let marker_z = if obj.shape.is_open() {
        obj.base_thickness()
    } else {
        obj.extents[2]
    };
    let d_reference = CAMERA_HEIGHT + noise_term(noise.marker_std, &mut rng);
    let d_hole = CAMERA_HEIGHT - marker_z + noise_term(noise.marker_std, &mut rng);

    let press = synthesize_press(obj, noise, &mut rng);
    let ramp = synthesize_ramp(obj, noise, &mut rng);
    let scale_grams = obj.mass_kg * 1000.0 + noise_term(noise.scale_std, &mut rng);

    Ok((
        FeatureBundle {
            meta: BundleMeta {
                class: obj.class.clone(),
                instance: obj.instance.clone(),
                repetition,
            },
            side_cloud,
            top_cloud,
            d_reference,
            d_hole,
            press,
            ramp,
            scale_grams,
        },
        truth,
    ))
}

/// A tabletop scene for segmentation: a table patch plus the object
/// cloud raised so wall lattices start just above the plane.
pub fn scene_cloud(obj: &SyntheticObject, table_margin: f64) -> Result<Vec<Point3>> {
    let sample = sample_surface(obj)?;
    let [l, w, _] = obj.extents;
    let mut cloud = Vec::new();
    let xs = linspace(-table_margin, l + table_margin, steps(l + 2.0 * table_margin));
    let ys = linspace(-table_margin, w + table_margin, steps(w + 2.0 * table_margin));
    for &x in &xs {
        for &y in &ys {
            cloud.push(Point3::new(x, y, 0.0));
        }
    }
    let lift = LATTICE_PITCH / 2.0;
    for p in &sample.object {
        if p.z <= 0.0 {
            continue;
        }
        cloud.push(Point3::new(p.x, p.y, p.z + lift));
    }
    Ok(cloud)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneEntry {
    pub object: SyntheticObject,
    pub repetitions: u32,
}

/// Parses a scene description: `[object]` sections of `key = value`
/// lines, `#` comments, blank lines ignored.
pub fn parse_scene(text: &str, source: &str) -> Result<Vec<SceneEntry>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };

    struct Partial {
        line: usize,
        fields: std::collections::BTreeMap<String, (usize, String)>,
    }
    let mut sections: Vec<Partial> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "[object]" {
            sections.push(Partial {
                line,
                fields: Default::default(),
            });
            continue;
        }
        if content.starts_with('[') {
            return Err(parse_err(line, format!("unknown section {content:?}")));
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(parse_err(line, format!("expected key = value, got {content:?}")));
        };
        let Some(section) = sections.last_mut() else {
            return Err(parse_err(line, "field outside an [object] section".to_string()));
        };
        let key = key.trim().to_string();
        if section
            .fields
            .insert(key.clone(), (line, value.trim().to_string()))
            .is_some()
        {
            return Err(parse_err(line, format!("duplicate field {key:?}")));
        }
    }

    let mut entries = Vec::new();
    let mut seen_ids = std::collections::BTreeSet::new();
    for section in sections {
        let mut fields = section.fields;
        let mut take = |key: &str| -> Result<(usize, String)> {
            fields.remove(key).ok_or_else(|| {
                parse_err(section.line, format!("object is missing field {key:?}"))
            })
        };
        let number = |key: &str, at: usize, raw: &str| -> Result<f64> {
            raw.parse::<f64>()
                .map_err(|_| parse_err(at, format!("{key} is not a number: {raw:?}")))
        };

        let instance = take("instance")?.1;
        let class = take("class")?.1;
        let (shape_line, shape_raw) = take("shape")?;
        let shape = ShapeKind::parse(&shape_raw)
            .map_err(|e| parse_err(shape_line, e.to_string()))?;
        let mut num_field = |key: &str| -> Result<f64> {
            let (at, raw) = take(key)?;
            number(key, at, &raw)
        };
        let length = num_field("length")?;
        let width = num_field("width")?;
        let height = num_field("height")?;
        let rigidity = num_field("rigidity")?;
        let slide_angle = num_field("slide_angle")?;
        let mass = num_field("mass")?;
        let cavity_depth = match fields.remove("cavity_depth") {
            Some((at, raw)) => number("cavity_depth", at, &raw)?,
            None => 0.0,
        };
        let wall_thickness = match fields.remove("wall_thickness") {
            Some((at, raw)) => Some(number("wall_thickness", at, &raw)?),
            None => None,
        };
        let repetitions = match fields.remove("repetitions") {
            Some((at, raw)) => raw
                .parse::<u32>()
                .ok()
                .filter(|r| *r >= 1)
                .ok_or_else(|| {
                    parse_err(at, format!("repetitions must be a positive integer: {raw:?}"))
                })?,
            None => 1,
        };
        if let Some((key, (at, _))) = fields.into_iter().next() {
            return Err(parse_err(at, format!("unknown field {key:?}")));
        }
        if !seen_ids.insert(instance.clone()) {
            return Err(Error::InvalidObject(format!(
                "duplicate instance id {instance:?} in scene"
            )));
        }
        let object = SyntheticObject {
            instance,
            class,
            shape,
            extents: [length, width, height],
            cavity_depth,
            wall_thickness,
            rigidity,
            slide_angle,
            mass_kg: mass,
        };
        object.validate()?;
        entries.push(SceneEntry {
            object,
            repetitions,
        });
    }
    Ok(entries)
}
