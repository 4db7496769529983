//! Scene files: the objects a `simulate` run synthesizes, one
//! `[object]` block per object.
//!
//! ```text
//! [object]
//! instance = cup_01
//! class = cup
//! shape = cylinder_cup        # box | open_box | cylinder_cup | sphere | flat_sheet
//! extents = 0.09 0.09 0.10    # length width height, meters
//! cavity_depth = 0.08         # open shapes only
//! rigidity = 0.95
//! slide_angle = 0.52          # radians
//! mass_kg = 0.31
//! repetitions = 3             # optional, default 1
//! ```

use std::collections::BTreeSet;

use rocs_core::error::{Error, Result};
use rocs_core::simulator::{ShapeKind, SyntheticObject};

#[derive(Debug, Clone)]
pub struct SceneEntry {
    pub object: SyntheticObject,
    pub repetitions: u32,
}

#[derive(Default)]
struct Block {
    line: usize,
    instance: Option<String>,
    class: Option<String>,
    shape: Option<ShapeKind>,
    extents: Option<[f64; 3]>,
    cavity_depth: f64,
    wall_thickness: Option<f64>,
    rigidity: Option<f64>,
    slide_angle: Option<f64>,
    mass_kg: Option<f64>,
    repetitions: u32,
}

impl Block {
    fn finish(self, path: &str) -> Result<SceneEntry> {
        let missing = |field: &str| Error::Parse {
            path: path.to_string(),
            line: self.line,
            message: format!("object block is missing {field}"),
        };
        let object = SyntheticObject {
            instance: self.instance.ok_or_else(|| missing("instance"))?,
            class: self.class.ok_or_else(|| missing("class"))?,
            shape: self.shape.ok_or_else(|| missing("shape"))?,
            extents: self.extents.ok_or_else(|| missing("extents"))?,
            cavity_depth: self.cavity_depth,
            wall_thickness: self.wall_thickness,
            rigidity: self.rigidity.ok_or_else(|| missing("rigidity"))?,
            slide_angle: self.slide_angle.ok_or_else(|| missing("slide_angle"))?,
            mass_kg: self.mass_kg.ok_or_else(|| missing("mass_kg"))?,
        };
        object.validate()?;
        Ok(SceneEntry {
            object,
            repetitions: self.repetitions,
        })
    }
}

pub fn parse_scene(text: &str, path: &str) -> Result<Vec<SceneEntry>> {
    let mut entries: Vec<SceneEntry> = Vec::new();
    let mut block: Option<Block> = None;

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

        if line == "[object]" {
            if let Some(done) = block.take() {
                entries.push(done.finish(path)?);
            }
            block = Some(Block {
                line: line_no,
                repetitions: 1,
                ..Block::default()
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let block = block
            .as_mut()
            .ok_or_else(|| parse_err(format!("key {key:?} before the first [object]")))?;

        fn num<T: std::str::FromStr>(
            key: &str,
            value: &str,
        ) -> std::result::Result<T, String> {
            value
                .parse::<T>()
                .map_err(|_| format!("{key}: cannot parse {value:?}"))
        }
        let mut set = || -> std::result::Result<(), String> {
            match key {
                "instance" => block.instance = Some(value.to_string()),
                "class" => block.class = Some(value.to_string()),
                "shape" => block.shape = Some(ShapeKind::parse(value).map_err(|e| e.to_string())?),
                "extents" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(format!("extents needs three numbers, got {value:?}"));
                    }
                    block.extents = Some([
                        num("extents", parts[0])?,
                        num("extents", parts[1])?,
                        num("extents", parts[2])?,
                    ]);
                }
                "cavity_depth" => block.cavity_depth = num(key, value)?,
                "wall_thickness" => block.wall_thickness = Some(num(key, value)?),
                "rigidity" => block.rigidity = Some(num(key, value)?),
                "slide_angle" => block.slide_angle = Some(num(key, value)?),
                "mass_kg" => block.mass_kg = Some(num(key, value)?),
                "repetitions" => {
                    block.repetitions = num(key, value)?;
                    if block.repetitions == 0 {
                        return Err("repetitions must be >= 1".to_string());
                    }
                }
                _ => return Err(format!("unknown object key {key:?}")),
            }
            Ok(())
        };
        set().map_err(parse_err)?;
    }
    if let Some(done) = block.take() {
        entries.push(done.finish(path)?);
    }
    if entries.is_empty() {
        return Err(Error::Parse {
            path: path.to_string(),
            line: 0,
            message: "scene contains no [object] blocks".to_string(),
        });
    }

    let mut names = BTreeSet::new();
    for entry in &entries {
        if !names.insert(entry.object.instance.as_str()) {
            return Err(Error::InvalidObject(format!(
                "duplicate instance name {:?}; bundle directories would collide",
                entry.object.instance
            )));
        }
    }
    Ok(entries)
}
