//! The five pipeline commands. Each returns a one-line summary for
//! stdout; all randomness flows from the root seed so identical
//! invocations produce byte-identical artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use rocs_core::dataset::{
    coverage_table, export_csv, ingest_csv, instance_means, mean_variance_table, pearson_matrix,
    ObservationRecord,
};
use rocs_core::error::{Error, Result};
use rocs_core::extract::extract_record;
use rocs_core::io::{read_bundle, write_bundle, META_FILE};
use rocs_core::knowledge::{build_knowledge_base, KnowledgeBase};
use rocs_core::simulator::simulate_bundle;
use rocs_core::substitution::{parse_queries, results_to_json, substitute};

use crate::config::PipelineConfig;
use crate::scene::parse_scene;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::Io {
                path: parent.display().to_string(),
                source: e,
            })?;
        }
    }
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn simulate(
    scene_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    config: &PipelineConfig,
) -> Result<String> {
    let text = read_text(scene_path)?;
    let entries = parse_scene(&text, &scene_path.display().to_string())?;
    let root_seed = seed.unwrap_or(config.simulate_seed);

    let mut bundles = 0usize;
    for entry in &entries {
        for repetition in 1..=entry.repetitions {
            let (bundle, _) = simulate_bundle(&entry.object, repetition, &config.noise, root_seed)?;
            let dir = out_dir
                .join(&entry.object.instance)
                .join(format!("rep_{repetition:02}"));
            write_bundle(&dir, &bundle)?;
            bundles += 1;
        }
    }
    Ok(format!(
        "wrote {bundles} bundles for {} objects to {}",
        entries.len(),
        out_dir.display()
    ))
}

/// Bundle directories under `root`, recursively, in lexicographic order.
fn find_bundle_dirs(root: &Path) -> Result<Vec<PathBuf>> {
    fn walk(dir: &Path, found: &mut Vec<PathBuf>) -> Result<()> {
        let mut children = Vec::new();
        let reader = fs::read_dir(dir).map_err(|e| Error::Io {
            path: dir.display().to_string(),
            source: e,
        })?;
        for entry in reader {
            let entry = entry.map_err(|e| Error::Io {
                path: dir.display().to_string(),
                source: e,
            })?;
            let path = entry.path();
            if path.is_dir() {
                children.push(path);
            }
        }
        children.sort();
        if dir.join(META_FILE).is_file() {
            found.push(dir.to_path_buf());
        }
        for child in children {
            walk(&child, found)?;
        }
        Ok(())
    }
    let mut found = Vec::new();
    walk(root, &mut found)?;
    Ok(found)
}

pub fn extract(bundle_root: &Path, out_csv: &Path, config: &PipelineConfig) -> Result<String> {
    let dirs = find_bundle_dirs(bundle_root)?;
    if dirs.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no bundle directories under {}",
            bundle_root.display()
        )));
    }

    let mut records: Vec<ObservationRecord> = Vec::new();
    let mut failures = 0usize;
    for dir in &dirs {
        let outcome = read_bundle(dir).and_then(|b| extract_record(&b, &config.extract));
        match outcome {
            Ok(record) => records.push(record),
            Err(e) => {
                eprintln!("error[{}] {}: {e}", e.code(), dir.display());
                failures += 1;
            }
        }
    }
    if records.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "extraction failed for all {failures} bundles under {}",
            bundle_root.display()
        )));
    }
    // filesystem enumeration order must not leak into the artifact
    records.sort_by(|a, b| {
        (&a.class, &a.instance, a.repetition).cmp(&(&b.class, &b.instance, b.repetition))
    });
    if let Some(parent) = out_csv.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::Io {
                path: parent.display().to_string(),
                source: e,
            })?;
        }
    }
    export_csv(out_csv, &records)?;
    Ok(format!(
        "wrote {} records to {} ({failures} failures)",
        records.len(),
        out_csv.display()
    ))
}

pub fn stats(data_csv: &Path, out_dir: &Path, config: &PipelineConfig) -> Result<String> {
    let report = ingest_csv(data_csv)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let variance = mean_variance_table(&report.records, config.variance);
    for warning in &variance.warnings {
        eprintln!("warning: {warning}");
    }
    let correlation = pearson_matrix(&report.records);
    let coverage = coverage_table(&report.records);

    write_text(&out_dir.join("variance.csv"), &variance.to_csv_string())?;
    write_text(&out_dir.join("correlation.csv"), &correlation.to_csv_string())?;
    write_text(&out_dir.join("coverage.csv"), &coverage.to_csv_string())?;
    Ok(format!(
        "wrote variance.csv, correlation.csv, coverage.csv to {}",
        out_dir.display()
    ))
}

pub fn build_kb(
    data_csv: &Path,
    out_path: &Path,
    seed: Option<u64>,
    eta: Option<usize>,
    config: &PipelineConfig,
) -> Result<String> {
    let report = ingest_csv(data_csv)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let means = instance_means(&report.records);

    let mut kb_config = config.knowledge.clone();
    if let Some(seed) = seed {
        kb_config.seed = seed;
    }
    if let Some(eta) = eta {
        kb_config.eta_default = eta;
    }
    let kb = build_knowledge_base(&means, &kb_config)?;
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::Io {
                path: parent.display().to_string(),
                source: e,
            })?;
        }
    }
    kb.save(out_path)?;
    Ok(format!(
        "wrote knowledge base ({} instances, {} models, {} concepts) to {}",
        kb.instances.len(),
        kb.models.len(),
        kb.concepts.len(),
        out_path.display()
    ))
}

pub fn query(
    kb_path: &Path,
    queries_path: &Path,
    out_path: Option<&Path>,
    threshold: Option<f64>,
    config: &PipelineConfig,
) -> Result<String> {
    let kb = KnowledgeBase::load(kb_path)?;
    let queries = parse_queries(&read_text(queries_path)?)?;
    let threshold = threshold.unwrap_or(config.threshold);

    let mut results = Vec::with_capacity(queries.len());
    for query in &queries {
        results.push(substitute(&kb, query, threshold)?);
    }
    let json = results_to_json(&results)?;

    match out_path {
        Some(path) => {
            write_text(path, &json)?;
            let mut lines = Vec::with_capacity(results.len());
            for result in &results {
                let top = &result.ranking[0];
                lines.push(format!(
                    "{}: {} ({:.3}{})",
                    result.missing,
                    top.class,
                    top.similarity,
                    if top.selected { "" } else { ", below threshold" }
                ));
            }
            lines.push(format!(
                "wrote {} rankings to {}",
                results.len(),
                path.display()
            ));
            Ok(lines.join("\n"))
        }
        // no --out: the JSON itself is the output
        None => Ok(json.trim_end().to_string()),
    }
}
