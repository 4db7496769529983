//! On-disk formats for observation bundles: ASCII PLY clouds, plain-text
//! interaction logs, marker/scale/meta key-value files, and the bundle
//! directory layout tying them together.
//!
//! Every float is written in shortest round-trip decimal form, so
//! write -> read -> write is byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Point3;
use crate::interaction::{PressLog, PressSample, RampLog, RampSample};
use crate::simulator::{BundleMeta, FeatureBundle};

pub const SIDE_CLOUD_FILE: &str = "side.ply";
pub const TOP_CLOUD_FILE: &str = "top.ply";
pub const MARKERS_FILE: &str = "markers.txt";
pub const PRESS_LOG_FILE: &str = "press.log";
pub const RAMP_LOG_FILE: &str = "ramp.log";
pub const SCALE_FILE: &str = "scale.txt";
pub const META_FILE: &str = "meta.txt";

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn parse_f64(path: &Path, line: usize, raw: &str, what: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| parse_err(path, line, format!("{what} is not a number: {raw:?}")))
}

pub fn ply_string(points: &[Point3]) -> String {
    let mut out = String::with_capacity(64 + points.len() * 24);
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", points.len());
    out.push_str("property double x\nproperty double y\nproperty double z\nend_header\n");
    for p in points {
        let _ = writeln!(out, "{} {} {}", p.x, p.y, p.z);
    }
    out
}

pub fn write_ply(path: impl AsRef<Path>, points: &[Point3]) -> Result<()> {
    write_text(path.as_ref(), &ply_string(points))
}

/// Next non-comment header line.
fn next_header_line<'a>(
    path: &Path,
    lines: &mut std::iter::Enumerate<std::str::Lines<'a>>,
) -> Result<(usize, &'a str)> {
    loop {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(path, 0, "truncated header"))?;
        let line = line.trim();
        if line.starts_with("comment") {
            continue;
        }
        return Ok((idx + 1, line));
    }
}

pub fn read_ply(path: impl AsRef<Path>) -> Result<Vec<Point3>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate();

    for want in ["ply", "format ascii 1.0"] {
        let (line_no, line) = next_header_line(path, &mut lines)?;
        if line != want {
            return Err(parse_err(
                path,
                line_no,
                format!("expected {want:?}, got {line:?}"),
            ));
        }
    }

    let (line_no, line) = next_header_line(path, &mut lines)?;
    let Some(rest) = line.strip_prefix("element vertex ") else {
        return Err(parse_err(
            path,
            line_no,
            format!("expected element vertex, got {line:?}"),
        ));
    };
    let count = rest
        .trim()
        .parse::<usize>()
        .map_err(|_| parse_err(path, line_no, format!("bad vertex count {rest:?}")))?;

    for name in ["x", "y", "z"] {
        let (line_no, line) = next_header_line(path, &mut lines)?;
        let ok = line == format!("property double {name}") || line == format!("property float {name}");
        if !ok {
            return Err(parse_err(
                path,
                line_no,
                format!("expected property double {name}, got {line:?}"),
            ));
        }
    }
    let (line_no, line) = next_header_line(path, &mut lines)?;
    if line != "end_header" {
        return Err(parse_err(
            path,
            line_no,
            format!("expected end_header, got {line:?}"),
        ));
    }

    let mut points = Vec::with_capacity(count);
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut coord = |name: &str| -> Result<f64> {
            let raw = it
                .next()
                .ok_or_else(|| parse_err(path, idx + 1, format!("vertex row missing {name}")))?;
            parse_f64(path, idx + 1, raw, name)
        };
        let p = Point3::new(coord("x")?, coord("y")?, coord("z")?);
        if it.next().is_some() {
            return Err(parse_err(path, idx + 1, "vertex row has extra fields"));
        }
        points.push(p);
    }
    if points.len() != count {
        return Err(parse_err(
            path,
            0,
            format!("header promises {count} vertices, file has {}", points.len()),
        ));
    }
    Ok(points)
}

pub fn press_log_string(log: &PressLog) -> String {
    let mut out = String::from("t z");
    for name in &log.joint_names {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for s in &log.samples {
        let _ = write!(out, "{} {}", s.t, s.z);
        for e in &s.efforts {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

pub fn write_press_log(path: impl AsRef<Path>, log: &PressLog) -> Result<()> {
    write_text(path.as_ref(), &press_log_string(log))
}

pub fn read_press_log(path: impl AsRef<Path>) -> Result<PressLog> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty press log"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("t") || fields.next() != Some("z") {
        return Err(parse_err(path, 1, "header must start with: t z"));
    }
    let joint_names: Vec<String> = fields.map(str::to_string).collect();
    if joint_names.is_empty() {
        return Err(parse_err(path, 1, "header names no joints"));
    }

    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let raw: Vec<&str> = line.split_whitespace().collect();
        if raw.len() != 2 + joint_names.len() {
            return Err(parse_err(
                path,
                idx + 1,
                format!(
                    "expected {} fields, got {}",
                    2 + joint_names.len(),
                    raw.len()
                ),
            ));
        }
        let t = parse_f64(path, idx + 1, raw[0], "t")?;
        let z = parse_f64(path, idx + 1, raw[1], "z")?;
        let efforts = raw[2..]
            .iter()
            .map(|r| parse_f64(path, idx + 1, r, "effort"))
            .collect::<Result<Vec<f64>>>()?;
        samples.push(PressSample { t, z, efforts });
    }
    Ok(PressLog {
        joint_names,
        samples,
    })
}

pub fn ramp_log_string(log: &RampLog) -> String {
    let mut out = String::new();
    if let Some(t) = log.slide_detected_at {
        let _ = writeln!(out, "# slide_detected_at {t}");
    }
    out.push_str("t angle\n");
    for s in &log.samples {
        let _ = writeln!(out, "{} {}", s.t, s.angle);
    }
    out
}

pub fn write_ramp_log(path: impl AsRef<Path>, log: &RampLog) -> Result<()> {
    write_text(path.as_ref(), &ramp_log_string(log))
}

pub fn read_ramp_log(path: impl AsRef<Path>) -> Result<RampLog> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut slide_detected_at = None;
    let mut lines = text.lines().enumerate().peekable();
    if let Some((idx, line)) = lines.peek().copied() {
        if let Some(rest) = line.trim().strip_prefix('#') {
            let rest = rest.trim();
            let Some(raw) = rest.strip_prefix("slide_detected_at") else {
                return Err(parse_err(path, idx + 1, format!("unknown directive {rest:?}")));
            };
            slide_detected_at = Some(parse_f64(path, idx + 1, raw.trim(), "slide time")?);
            lines.next();
        }
    }
    let (idx, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty ramp log"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["t", "angle"] {
        return Err(parse_err(path, idx + 1, "header must be: t angle"));
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let raw: Vec<&str> = line.split_whitespace().collect();
        if raw.len() != 2 {
            return Err(parse_err(path, idx + 1, "expected: t angle"));
        }
        samples.push(RampSample {
            t: parse_f64(path, idx + 1, raw[0], "t")?,
            angle: parse_f64(path, idx + 1, raw[1], "angle")?,
        });
    }
    Ok(RampLog {
        samples,
        slide_detected_at,
    })
}

/// Reads `key value` lines into the given slots, requiring each key
/// exactly once.
fn read_kv(path: &Path, text: &str, keys: &[&str]) -> Result<Vec<String>> {
    let mut values: Vec<Option<String>> = vec![None; keys.len()];
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once(char::is_whitespace) else {
            return Err(parse_err(path, idx + 1, format!("expected key value, got {line:?}")));
        };
        let Some(slot) = keys.iter().position(|k| *k == key) else {
            return Err(parse_err(path, idx + 1, format!("unknown key {key:?}")));
        };
        if values[slot].is_some() {
            return Err(parse_err(path, idx + 1, format!("duplicate key {key:?}")));
        }
        values[slot] = Some(value.trim().to_string());
    }
    keys.iter()
        .zip(values)
        .map(|(key, v)| v.ok_or_else(|| parse_err(path, 0, format!("missing key {key:?}"))))
        .collect()
}

pub fn markers_string(d_reference: f64, d_hole: f64) -> String {
    format!("d_reference {d_reference}\nd_hole {d_hole}\n")
}

pub fn read_markers(path: impl AsRef<Path>) -> Result<(f64, f64)> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let values = read_kv(path, &text, &["d_reference", "d_hole"])?;
    Ok((
        parse_f64(path, 0, &values[0], "d_reference")?,
        parse_f64(path, 0, &values[1], "d_hole")?,
    ))
}

pub fn scale_string(grams: f64) -> String {
    format!("grams {grams}\n")
}

pub fn read_scale(path: impl AsRef<Path>) -> Result<f64> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let values = read_kv(path, &text, &["grams"])?;
    parse_f64(path, 0, &values[0], "grams")
}

pub fn meta_string(meta: &BundleMeta) -> String {
    format!(
        "class {}\ninstance {}\nrepetition {}\n",
        meta.class, meta.instance, meta.repetition
    )
}

pub fn read_meta(path: impl AsRef<Path>) -> Result<BundleMeta> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let values = read_kv(path, &text, &["class", "instance", "repetition"])?;
    let repetition = values[2]
        .parse::<u32>()
        .map_err(|_| parse_err(path, 0, format!("repetition is not an integer: {:?}", values[2])))?;
    Ok(BundleMeta {
        class: values[0].clone(),
        instance: values[1].clone(),
        repetition,
    })
}

/// Writes all bundle files into `dir`, creating it if needed.
pub fn write_bundle(dir: impl AsRef<Path>, bundle: &FeatureBundle) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    write_ply(dir.join(SIDE_CLOUD_FILE), &bundle.side_cloud)?;
    write_ply(dir.join(TOP_CLOUD_FILE), &bundle.top_cloud)?;
    write_text(
        &dir.join(MARKERS_FILE),
        &markers_string(bundle.d_reference, bundle.d_hole),
    )?;
    write_press_log(dir.join(PRESS_LOG_FILE), &bundle.press)?;
    write_ramp_log(dir.join(RAMP_LOG_FILE), &bundle.ramp)?;
    write_text(&dir.join(SCALE_FILE), &scale_string(bundle.scale_grams))?;
    write_text(&dir.join(META_FILE), &meta_string(&bundle.meta))?;
    Ok(())
}

/// Reads a bundle directory written by [`write_bundle`].
pub fn read_bundle(dir: impl AsRef<Path>) -> Result<FeatureBundle> {
    let dir = dir.as_ref();
    let (d_reference, d_hole) = read_markers(dir.join(MARKERS_FILE))?;
    Ok(FeatureBundle {
        meta: read_meta(dir.join(META_FILE))?,
        side_cloud: read_ply(dir.join(SIDE_CLOUD_FILE))?,
        top_cloud: read_ply(dir.join(TOP_CLOUD_FILE))?,
        d_reference,
        d_hole,
        press: read_press_log(dir.join(PRESS_LOG_FILE))?,
        ramp: read_ramp_log(dir.join(RAMP_LOG_FILE))?,
        scale_grams: read_scale(dir.join(SCALE_FILE))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{simulate_bundle, NoiseSpec, ShapeKind, SyntheticObject};

    fn sample_points() -> Vec<Point3> {
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(0.1, 0.25, 0.0033333333333333335),
            Point3::new(-1.5, 2.0, 1e-7),
        ]
    }

    #[test]
    fn ply_round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cloud.ply");
        let points = sample_points();
        write_ply(&path, &points).unwrap();
        let first = std::fs::read(&path).unwrap();
        let back = read_ply(&path).unwrap();
        assert_eq!(back, points);
        write_ply(&path, &back).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first);
    }

    #[test]
    fn ply_rejects_count_mismatch_and_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ply");
        std::fs::write(
            &path,
            "ply\nformat ascii 1.0\nelement vertex 2\nproperty double x\nproperty double y\nproperty double z\nend_header\n0 0 0\n",
        )
        .unwrap();
        assert!(matches!(read_ply(&path), Err(Error::Parse { .. })));
        std::fs::write(&path, "ply\nformat binary 1.0\n").unwrap();
        assert!(matches!(read_ply(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn logs_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let press = PressLog {
            joint_names: vec!["joint_1".into(), "joint_2".into()],
            samples: vec![
                PressSample { t: 0.0, z: 0.12, efforts: vec![0.0, 0.0] },
                PressSample { t: 0.01, z: 0.1199, efforts: vec![0.5, -0.35] },
            ],
        };
        let path = dir.path().join("press.log");
        write_press_log(&path, &press).unwrap();
        assert_eq!(read_press_log(&path).unwrap(), press);

        let ramp = RampLog {
            samples: vec![
                RampSample { t: 0.0, angle: 0.0 },
                RampSample { t: 0.02, angle: 0.001 },
            ],
            slide_detected_at: Some(0.015),
        };
        let path = dir.path().join("ramp.log");
        write_ramp_log(&path, &ramp).unwrap();
        assert_eq!(read_ramp_log(&path).unwrap(), ramp);

        let no_slide = RampLog {
            slide_detected_at: None,
            ..ramp
        };
        write_ramp_log(&path, &no_slide).unwrap();
        assert_eq!(read_ramp_log(&path).unwrap(), no_slide);
    }

    #[test]
    fn key_value_files_validate_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("markers.txt");
        std::fs::write(&path, "d_reference 1.0\n").unwrap();
        assert!(matches!(read_markers(&path), Err(Error::Parse { .. })));
        std::fs::write(&path, "d_reference 1.0\nd_hole 0.9\nd_hole 0.8\n").unwrap();
        assert!(matches!(read_markers(&path), Err(Error::Parse { .. })));
        std::fs::write(&path, "d_hole 0.9\nd_reference 1.0\n").unwrap();
        assert_eq!(read_markers(&path).unwrap(), (1.0, 0.9));
    }

    #[test]
    fn bundle_directory_round_trips() {
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
        let noise = NoiseSpec {
            point_std: 0.001,
            marker_std: 0.0002,
            effort_std: 0.01,
            angle_std: 0.0005,
            scale_std: 0.3,
        };
        let (bundle, _) = simulate_bundle(&obj, 1, &noise, 11).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let bundle_dir = dir.path().join("cup_01/rep_1");
        write_bundle(&bundle_dir, &bundle).unwrap();
        let back = read_bundle(&bundle_dir).unwrap();
        assert_eq!(back, bundle);

        // byte identity of every file on rewrite
        let other = dir.path().join("again");
        write_bundle(&other, &back).unwrap();
        for file in [
            SIDE_CLOUD_FILE,
            TOP_CLOUD_FILE,
            MARKERS_FILE,
            PRESS_LOG_FILE,
            RAMP_LOG_FILE,
            SCALE_FILE,
            META_FILE,
        ] {
            let a = std::fs::read(bundle_dir.join(file)).unwrap();
            let b = std::fs::read(other.join(file)).unwrap();
            assert_eq!(a, b, "{file} differs");
        }
    }
}
