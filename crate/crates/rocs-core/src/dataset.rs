//! Observation tables in the RoCS schema: ingest/export plus the summary
//! statistics (per-class mean variance, instance-mean correlations,
//! per-class coverage quartiles).

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{five_number, mean, pearson, variance, FiveNumber, VarianceKind};

/// Property column order shared by the CSV schema and every summary table.
pub const PROPERTIES: [&str; 8] = [
    "flatness",
    "rigidity",
    "roughness",
    "size_length",
    "size_width",
    "size_height",
    "heaviness",
    "hollowness",
];

pub const CSV_HEADER: [&str; 11] = [
    "class",
    "instance",
    "repetition",
    "flatness",
    "rigidity",
    "roughness",
    "size_length",
    "size_width",
    "size_height",
    "heaviness",
    "hollowness",
];

/// One measured repetition of one object instance. Roughness is `None`
/// when the ramp run observed no slide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRecord {
    pub class: String,
    pub instance: String,
    pub repetition: u32,
    pub flatness: f64,
    pub rigidity: f64,
    pub roughness: Option<f64>,
    pub size_length: f64,
    pub size_width: f64,
    pub size_height: f64,
    /// Grams.
    pub heaviness: f64,
    pub hollowness: f64,
}

impl ObservationRecord {
    /// Property value by [`PROPERTIES`] index.
    pub fn property(&self, index: usize) -> Option<f64> {
        match index {
            0 => Some(self.flatness),
            1 => Some(self.rigidity),
            2 => self.roughness,
            3 => Some(self.size_length),
            4 => Some(self.size_width),
            5 => Some(self.size_height),
            6 => Some(self.heaviness),
            7 => Some(self.hollowness),
            _ => None,
        }
    }

    fn validate(&self, line: usize, issues: &mut Vec<String>) {
        if self.class.is_empty() {
            issues.push(format!("line {line}: empty class label"));
        }
        if self.instance.is_empty() {
            issues.push(format!("line {line}: empty instance id"));
        }
        if self.repetition == 0 {
            issues.push(format!("line {line}: repetition must be >= 1"));
        }
        let bounded = [
            ("flatness", Some(self.flatness)),
            ("rigidity", Some(self.rigidity)),
            ("roughness", self.roughness),
            ("size_length", Some(self.size_length)),
            ("size_width", Some(self.size_width)),
            ("size_height", Some(self.size_height)),
            ("hollowness", Some(self.hollowness)),
        ];
        for (name, value) in bounded {
            if let Some(v) = value {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    issues.push(format!("line {line}: {name} = {v} outside [0, 1]"));
                }
            }
        }
        if !self.heaviness.is_finite() || self.heaviness < 0.0 {
            issues.push(format!(
                "line {line}: heaviness = {} must be a non-negative gram count",
                self.heaviness
            ));
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestReport {
    pub records: Vec<ObservationRecord>,
    pub warnings: Vec<String>,
}

fn parse_field(raw: &str, name: &str, line: usize, issues: &mut Vec<String>) -> f64 {
    match raw.trim().parse::<f64>() {
        Ok(v) => v,
        Err(_) => {
            issues.push(format!("line {line}: {name} is not a number: {raw:?}"));
            f64::NAN
        }
    }
}

/// Reads and validates a dataset CSV. All row-level violations are
/// collected and reported together; an empty table is a warning, not an
/// error.
pub fn ingest_csv_reader<R: Read>(reader: R) -> Result<IngestReport> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);

    let header = csv_reader.headers()?.clone();
    let expected: Vec<&str> = CSV_HEADER.to_vec();
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Error::DatasetValidation(vec![format!(
            "unexpected header {got:?}, expected {expected:?}"
        )]));
    }

    let mut issues = Vec::new();
    let mut records = Vec::new();
    let mut seen: BTreeMap<(String, String, u32), usize> = BTreeMap::new();

    for (i, row) in csv_reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let row = row?;
        if row.len() != CSV_HEADER.len() {
            issues.push(format!(
                "line {line}: expected {} fields, got {}",
                CSV_HEADER.len(),
                row.len()
            ));
            continue;
        }
        let repetition = match row[2].trim().parse::<u32>() {
            Ok(v) => v,
            Err(_) => {
                issues.push(format!(
                    "line {line}: repetition is not an integer: {:?}",
                    &row[2]
                ));
                continue;
            }
        };
        let roughness = {
            let raw = row[5].trim();
            if raw.is_empty() {
                None
            } else {
                Some(parse_field(raw, "roughness", line, &mut issues))
            }
        };
        let record = ObservationRecord {
            class: row[0].trim().to_string(),
            instance: row[1].trim().to_string(),
            repetition,
            flatness: parse_field(&row[3], "flatness", line, &mut issues),
            rigidity: parse_field(&row[4], "rigidity", line, &mut issues),
            roughness,
            size_length: parse_field(&row[6], "size_length", line, &mut issues),
            size_width: parse_field(&row[7], "size_width", line, &mut issues),
            size_height: parse_field(&row[8], "size_height", line, &mut issues),
            heaviness: parse_field(&row[9], "heaviness", line, &mut issues),
            hollowness: parse_field(&row[10], "hollowness", line, &mut issues),
        };
        record.validate(line, &mut issues);
        let key = (
            record.class.clone(),
            record.instance.clone(),
            record.repetition,
        );
        if let Some(first_line) = seen.insert(key, line) {
            issues.push(format!(
                "line {line}: duplicate of (class, instance, repetition) first seen on line {first_line}"
            ));
        }
        records.push(record);
    }

    if !issues.is_empty() {
        return Err(Error::DatasetValidation(issues));
    }
    let mut warnings = Vec::new();
    if records.is_empty() {
        warnings.push("dataset contains no observation rows".to_string());
    }
    Ok(IngestReport { records, warnings })
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<IngestReport> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    ingest_csv_reader(file)
}

fn fmt_float(v: f64) -> String {
    format!("{v}")
}

pub fn export_csv_writer<W: Write>(writer: W, records: &[ObservationRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.class.as_str(),
            r.instance.as_str(),
            &r.repetition.to_string(),
            &fmt_float(r.flatness),
            &fmt_float(r.rigidity),
            &r.roughness.map(fmt_float).unwrap_or_default(),
            &fmt_float(r.size_length),
            &fmt_float(r.size_width),
            &fmt_float(r.size_height),
            &fmt_float(r.heaviness),
            &fmt_float(r.hollowness),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn export_csv(path: impl AsRef<Path>, records: &[ObservationRecord]) -> Result<()> {
    let path = path.as_ref();
    let file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    export_csv_writer(file, records)
}

/// JSON export mirrors the CSV fields one object per record.
pub fn to_json_string(records: &[ObservationRecord]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(records)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json_str(s: &str) -> Result<Vec<ObservationRecord>> {
    Ok(serde_json::from_str(s)?)
}

/// Per-instance property means (across repetitions). Roughness is `None`
/// when no repetition of the instance observed a slide.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceMeans {
    pub class: String,
    pub instance: String,
    pub values: [Option<f64>; 8],
}

/// Groups records and averages each property per instance, ordered by
/// (class, instance).
pub fn instance_means(records: &[ObservationRecord]) -> Vec<InstanceMeans> {
    let mut groups: BTreeMap<(String, String), Vec<&ObservationRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.class.clone(), r.instance.clone()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((class, instance), rows)| {
            let mut values = [None; 8];
            for (p, slot) in values.iter_mut().enumerate() {
                let xs: Vec<f64> = rows.iter().filter_map(|r| r.property(p)).collect();
                *slot = mean(&xs);
            }
            InstanceMeans {
                class,
                instance,
                values,
            }
        })
        .collect()
}

/// Per-class mean of per-instance repetition variances, one column per
/// property, with row means, column means and the grand mean.
#[derive(Debug, Clone)]
pub struct MeanVarianceTable {
    pub kind: VarianceKind,
    pub classes: Vec<String>,
    /// `cells[class_index][property_index]`
    pub cells: Vec<[Option<f64>; 8]>,
    pub class_means: Vec<Option<f64>>,
    pub property_means: [Option<f64>; 8],
    pub grand_mean: Option<f64>,
    pub warnings: Vec<String>,
}

impl MeanVarianceTable {
    pub fn cell(&self, class: &str, property: &str) -> Option<f64> {
        let ci = self.classes.iter().position(|c| c == class)?;
        let pi = PROPERTIES.iter().position(|p| *p == property)?;
        self.cells[ci][pi]
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("class");
        for p in PROPERTIES {
            out.push(',');
            out.push_str(p);
        }
        out.push_str(",class_mean\n");
        for (ci, class) in self.classes.iter().enumerate() {
            out.push_str(class);
            for cell in &self.cells[ci] {
                out.push(',');
                if let Some(v) = cell {
                    out.push_str(&fmt_float(*v));
                }
            }
            out.push(',');
            if let Some(v) = self.class_means[ci] {
                out.push_str(&fmt_float(v));
            }
            out.push('\n');
        }
        out.push_str("property_mean");
        for cell in &self.property_means {
            out.push(',');
            if let Some(v) = cell {
                out.push_str(&fmt_float(*v));
            }
        }
        out.push(',');
        if let Some(v) = self.grand_mean {
            out.push_str(&fmt_float(v));
        }
        out.push('\n');
        out
    }
}

/// Builds the class x property table of mean per-instance variances.
///
/// The variance is taken across the repetitions of each instance, then
/// averaged over the instances of a class. Instances contributing fewer
/// than two values to a property are skipped with a warning.
pub fn mean_variance_table(records: &[ObservationRecord], kind: VarianceKind) -> MeanVarianceTable {
    let mut groups: BTreeMap<(String, String), Vec<&ObservationRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.class.clone(), r.instance.clone()))
            .or_default()
            .push(r);
    }

    let mut warnings = Vec::new();
    // class -> property -> instance variances
    let mut per_class: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for ((class, instance), rows) in &groups {
        let slot = per_class
            .entry(class.clone())
            .or_insert_with(|| vec![Vec::new(); 8]);
        for p in 0..8 {
            let xs: Vec<f64> = rows.iter().filter_map(|r| r.property(p)).collect();
            if xs.len() < 2 {
                warnings.push(format!(
                    "instance {instance} ({class}) has {} value(s) for {}, skipped in variance aggregation",
                    xs.len(),
                    PROPERTIES[p]
                ));
                continue;
            }
            if let Some(v) = variance(&xs, kind) {
                slot[p].push(v);
            }
        }
    }

    let classes: Vec<String> = per_class.keys().cloned().collect();
    let mut cells = Vec::with_capacity(classes.len());
    let mut class_means = Vec::with_capacity(classes.len());
    for class in &classes {
        let per_prop = &per_class[class];
        let mut row = [None; 8];
        for (p, slot) in row.iter_mut().enumerate() {
            *slot = mean(&per_prop[p]);
        }
        let present: Vec<f64> = row.iter().flatten().copied().collect();
        class_means.push(mean(&present));
        cells.push(row);
    }
    let mut property_means = [None; 8];
    for (p, slot) in property_means.iter_mut().enumerate() {
        let col: Vec<f64> = cells.iter().filter_map(|row| row[p]).collect();
        *slot = mean(&col);
    }
    let grand: Vec<f64> = class_means.iter().flatten().copied().collect();
    let grand_mean = mean(&grand);

    MeanVarianceTable {
        kind,
        classes,
        cells,
        class_means,
        property_means,
        grand_mean,
        warnings,
    }
}

/// Pearson correlations between property columns over instance means,
/// lower triangle only. `None` marks diagonal/upper cells, degenerate
/// columns and pairs with fewer than two complete observations.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub values: [[Option<f64>; 8]; 8],
}

impl CorrelationMatrix {
    /// Symmetric accessor by property name.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = PROPERTIES.iter().position(|p| *p == a)?;
        let j = PROPERTIES.iter().position(|p| *p == b)?;
        if i == j {
            return Some(1.0);
        }
        let (r, c) = if i > j { (i, j) } else { (j, i) };
        self.values[r][c]
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("property");
        for p in &PROPERTIES[..7] {
            out.push(',');
            out.push_str(p);
        }
        out.push('\n');
        for i in 1..8 {
            out.push_str(PROPERTIES[i]);
            for j in 0..7 {
                out.push(',');
                if j < i {
                    if let Some(v) = self.values[i][j] {
                        out.push_str(&fmt_float(v));
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Correlations between instance-mean property columns with pairwise
/// deletion of incomplete (missing-roughness) instances.
pub fn pearson_matrix(records: &[ObservationRecord]) -> CorrelationMatrix {
    let means = instance_means(records);
    let mut values = [[None; 8]; 8];
    for i in 1..8 {
        for j in 0..i {
            let pairs: Vec<(f64, f64)> = means
                .iter()
                .filter_map(|m| match (m.values[i], m.values[j]) {
                    (Some(a), Some(b)) => Some((a, b)),
                    _ => None,
                })
                .collect();
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            values[i][j] = pearson(&xs, &ys);
        }
    }
    CorrelationMatrix { values }
}

/// Five-number summaries of instance means per class and property.
#[derive(Debug, Clone)]
pub struct CoverageRow {
    pub class: String,
    pub property: &'static str,
    pub summary: FiveNumber,
}

#[derive(Debug, Clone)]
pub struct CoverageTable {
    pub rows: Vec<CoverageRow>,
}

impl CoverageTable {
    pub fn get(&self, class: &str, property: &str) -> Option<&FiveNumber> {
        self.rows
            .iter()
            .find(|r| r.class == class && r.property == property)
            .map(|r| &r.summary)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("class,property,min,q1,median,q3,max\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.class,
                r.property,
                fmt_float(r.summary.min),
                fmt_float(r.summary.q1),
                fmt_float(r.summary.median),
                fmt_float(r.summary.q3),
                fmt_float(r.summary.max)
            ));
        }
        out
    }
}

pub fn coverage_table(records: &[ObservationRecord]) -> CoverageTable {
    let means = instance_means(records);
    let mut by_class: BTreeMap<String, Vec<&InstanceMeans>> = BTreeMap::new();
    for m in &means {
        by_class.entry(m.class.clone()).or_default().push(m);
    }
    let mut rows = Vec::new();
    for (class, instances) in &by_class {
        for (p, name) in PROPERTIES.iter().enumerate() {
            let xs: Vec<f64> = instances.iter().filter_map(|m| m.values[p]).collect();
            if let Some(summary) = five_number(&xs) {
                rows.push(CoverageRow {
                    class: class.clone(),
                    property: name,
                    summary,
                });
            }
        }
    }
    CoverageTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(
        class: &str,
        instance: &str,
        repetition: u32,
        values: [f64; 8],
        roughness_missing: bool,
    ) -> ObservationRecord {
        ObservationRecord {
            class: class.into(),
            instance: instance.into(),
            repetition,
            flatness: values[0],
            rigidity: values[1],
            roughness: if roughness_missing {
                None
            } else {
                Some(values[2])
            },
            size_length: values[3],
            size_width: values[4],
            size_height: values[5],
            heaviness: values[6],
            hollowness: values[7],
        }
    }

    fn small_dataset() -> Vec<ObservationRecord> {
        vec![
            record("cup", "cup_01", 1, [0.1, 0.05, 0.3, 0.8, 0.8, 1.0, 250.0, 0.8], false),
            record("cup", "cup_01", 2, [0.2, 0.05, 0.4, 0.8, 0.9, 1.0, 250.0, 0.9], false),
            record("cup", "cup_02", 1, [0.15, 0.1, 0.35, 0.7, 0.8, 1.0, 300.0, 0.85], false),
            record("cup", "cup_02", 2, [0.25, 0.1, 0.25, 0.8, 0.8, 1.0, 300.0, 0.75], false),
            record("tray", "tray_01", 1, [0.7, 0.4, 0.3, 1.0, 0.9, 0.1, 400.0, 0.1], false),
            record("tray", "tray_01", 2, [0.8, 0.5, 0.4, 1.0, 0.9, 0.1, 400.0, 0.2], false),
        ]
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let records = small_dataset();
        let mut buf = Vec::new();
        export_csv_writer(&mut buf, &records).unwrap();
        let report = ingest_csv_reader(buf.as_slice()).unwrap();
        assert_eq!(report.records, records);
        let mut buf2 = Vec::new();
        export_csv_writer(&mut buf2, &report.records).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn missing_roughness_round_trips_as_empty_field() {
        let records = vec![record(
            "sponge",
            "sponge_01",
            1,
            [0.5, 0.8, 0.0, 1.0, 0.8, 0.3, 20.0, 0.0],
            true,
        )];
        let mut buf = Vec::new();
        export_csv_writer(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap().contains(",0.8,,1,"));
        let report = ingest_csv_reader(buf.as_slice()).unwrap();
        assert_eq!(report.records[0].roughness, None);
    }

    #[test]
    fn ingest_rejects_bad_rows_with_line_numbers() {
        let csv = "\
class,instance,repetition,flatness,rigidity,roughness,size_length,size_width,size_height,heaviness,hollowness
cup,cup_01,1,0.1,0.05,0.3,0.8,0.8,1.0,250,0.8
cup,cup_01,1,0.1,0.05,0.3,0.8,0.8,1.0,250,0.8
cup,cup_02,0,1.4,0.05,0.3,0.8,0.8,1.0,-3,0.8
";
        match ingest_csv_reader(csv.as_bytes()) {
            Err(Error::DatasetValidation(issues)) => {
                assert!(issues.iter().any(|i| i.starts_with("line 3:") && i.contains("duplicate")));
                assert!(issues.iter().any(|i| i.starts_with("line 4:") && i.contains("flatness")));
                assert!(issues.iter().any(|i| i.contains("repetition")));
                assert!(issues.iter().any(|i| i.contains("heaviness")));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_wrong_header() {
        let csv = "class,instance,rep\n";
        assert!(matches!(
            ingest_csv_reader(csv.as_bytes()),
            Err(Error::DatasetValidation(_))
        ));
    }

    #[test]
    fn empty_dataset_is_a_warning() {
        let csv = "class,instance,repetition,flatness,rigidity,roughness,size_length,size_width,size_height,heaviness,hollowness\n";
        let report = ingest_csv_reader(csv.as_bytes()).unwrap();
        assert!(report.records.is_empty());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let records = small_dataset();
        let json = to_json_string(&records).unwrap();
        let back = from_json_str(&json).unwrap();
        assert_eq!(back, records);
        assert!(json.contains("\"class\": \"cup\""));
        assert!(json.contains("\"heaviness\": 250.0"));
    }

    #[test]
    fn variance_table_means_per_instance_then_class() {
        let records = small_dataset();
        let table = mean_variance_table(&records, VarianceKind::Population);
        // cup flatness: var(0.1, 0.2) = 0.0025, var(0.15, 0.25) = 0.0025
        let cell = table.cell("cup", "flatness").unwrap();
        assert!((cell - 0.0025).abs() < 1e-12);
        // heaviness constant per instance
        assert_eq!(table.cell("cup", "heaviness").unwrap(), 0.0);
        assert_eq!(table.cell("tray", "heaviness").unwrap(), 0.0);
        assert!(table.warnings.is_empty());
        // class mean is the mean of the 8 property cells
        let ci = table.classes.iter().position(|c| c == "cup").unwrap();
        let row_mean: f64 =
            table.cells[ci].iter().flatten().sum::<f64>() / 8.0;
        assert!((table.class_means[ci].unwrap() - row_mean).abs() < 1e-15);
    }

    #[test]
    fn variance_table_respects_flavor() {
        let records = small_dataset();
        let pop = mean_variance_table(&records, VarianceKind::Population);
        let samp = mean_variance_table(&records, VarianceKind::Sample);
        let p = pop.cell("cup", "flatness").unwrap();
        let s = samp.cell("cup", "flatness").unwrap();
        // n = 2 repetitions: sample variance doubles the population one
        assert!((s - 2.0 * p).abs() < 1e-15);
    }

    #[test]
    fn single_repetition_instances_are_skipped_with_warning() {
        let mut records = small_dataset();
        records.push(record(
            "ball",
            "ball_01",
            1,
            [0.0, 0.1, 0.05, 0.9, 1.0, 0.95, 100.0, 0.0],
            false,
        ));
        let table = mean_variance_table(&records, VarianceKind::Population);
        assert!(table
            .warnings
            .iter()
            .any(|w| w.contains("ball_01") && w.contains("1 value(s)")));
        let bi = table.classes.iter().position(|c| c == "ball").unwrap();
        assert!(table.cells[bi].iter().all(|c| c.is_none()));
    }

    #[test]
    fn correlation_uses_instance_means_pairwise() {
        let records = small_dataset();
        let m = pearson_matrix(&records);
        // three instances: flatness means (0.15, 0.2, 0.75), hollowness
        // means (0.85, 0.8, 0.15): strong negative correlation
        let r = m.get("flatness", "hollowness").unwrap();
        assert!(r < -0.99);
        assert_eq!(m.get("flatness", "hollowness"), m.get("hollowness", "flatness"));
        // diagonal reads 1.0 via the accessor
        assert_eq!(m.get("flatness", "flatness"), Some(1.0));
    }

    #[test]
    fn correlation_skips_degenerate_columns() {
        let records: Vec<ObservationRecord> = (1..=3)
            .map(|i| {
                record(
                    "cup",
                    &format!("cup_{i:02}"),
                    1,
                    [0.1 * i as f64, 0.05, 0.3, 0.8, 0.8, 1.0, 250.0, 0.8],
                    false,
                )
            })
            .collect();
        let m = pearson_matrix(&records);
        // hollowness is constant across instances: no correlation defined
        assert_eq!(m.get("flatness", "hollowness"), None);
    }

    #[test]
    fn coverage_quartiles_interpolate() {
        let mut records = Vec::new();
        for (i, fl) in [0.0, 1.0].iter().enumerate() {
            records.push(record(
                "plate",
                &format!("plate_{i}"),
                1,
                [*fl, 0.1, 0.3, 1.0, 0.9, 0.2, 300.0, 0.5],
                false,
            ));
        }
        let cov = coverage_table(&records);
        let f = cov.get("plate", "flatness").unwrap();
        assert_eq!(f.median, 0.5);
        assert_eq!(f.min, 0.0);
        assert_eq!(f.max, 1.0);
    }
}
