//! Hot-path benchmarks: plane fitting, full feature extraction, clustering,
//! dataset statistics, and substitution ranking. Workload sizes mirror the
//! real pipeline (1100-row dataset, ~10^4-point clouds).

use std::path::PathBuf;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rocs_core::dataset::{ingest_csv, instance_means, mean_variance_table, pearson_matrix};
use rocs_core::extract::{extract_record, ExtractConfig};
use rocs_core::kmeans::{kmeans, KMeansParams};
use rocs_core::knowledge::{build_knowledge_base, property_vectors, KbConfig};
use rocs_core::plane::{ransac_plane, RansacParams};
use rocs_core::simulator::simulate_bundle;
use rocs_core::stats::VarianceKind;
use rocs_core::substitution::{substitute, SubstitutionQuery};
use rocs_core::{NoiseSpec, Point3, ShapeKind, SyntheticObject};

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rocs.csv")
}

fn demo_object() -> SyntheticObject {
    SyntheticObject {
        instance: "bench_cup".into(),
        class: "cup".into(),
        shape: ShapeKind::CylinderCup,
        extents: [0.09, 0.09, 0.10],
        cavity_depth: 0.08,
        wall_thickness: Some(0.008),
        rigidity: 0.9,
        slide_angle: 0.55,
        mass_kg: 0.25,
    }
}

/// A tabletop-like scene: a jittered 0.8 m plane patch with a box of
/// off-plane points sitting on it.
fn scene_cloud() -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut points = Vec::new();
    for i in 0..80 {
        for j in 0..80 {
            points.push(Point3::new(
                i as f64 * 0.01,
                j as f64 * 0.01,
                rng.gen_range(-0.002..0.002),
            ));
        }
    }
    for _ in 0..1200 {
        points.push(Point3::new(
            rng.gen_range(0.3..0.5),
            rng.gen_range(0.3..0.5),
            rng.gen_range(0.005..0.15),
        ));
    }
    points
}

fn bench_ransac(c: &mut Criterion) {
    let cloud = scene_cloud();
    let params = RansacParams::default();
    c.bench_function("ransac_tabletop_7600pts", |b| {
        b.iter(|| ransac_plane(black_box(&cloud), &params).unwrap())
    });
}

fn bench_extraction(c: &mut Criterion) {
    let (bundle, _) = simulate_bundle(&demo_object(), 1, &NoiseSpec::default(), 0).unwrap();
    let config = ExtractConfig::default();
    c.bench_function("extract_record_cup", |b| {
        b.iter(|| extract_record(black_box(&bundle), &config).unwrap())
    });
}

fn bench_simulation(c: &mut Criterion) {
    let obj = demo_object();
    let noise = NoiseSpec {
        point_std: 0.001,
        ..NoiseSpec::default()
    };
    c.bench_function("simulate_bundle_cup", |b| {
        b.iter(|| simulate_bundle(black_box(&obj), 1, &noise, 0).unwrap())
    });
}

fn bench_kmeans(c: &mut Criterion) {
    let report = ingest_csv(fixture_path()).unwrap();
    let means = instance_means(&report.records);
    let vectors: Vec<Vec<f64>> = property_vectors(&means, "containment", [0.0, 1.0])
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    c.bench_function("kmeans_containment_110x4d_k4", |b| {
        b.iter(|| kmeans(black_box(&vectors), &KMeansParams::new(4, 0)).unwrap())
    });
}

fn bench_stats(c: &mut Criterion) {
    let report = ingest_csv(fixture_path()).unwrap();
    let records = report.records;
    c.bench_function("mean_variance_table_1100rows", |b| {
        b.iter(|| mean_variance_table(black_box(&records), VarianceKind::Population))
    });
    c.bench_function("pearson_matrix_1100rows", |b| {
        b.iter(|| pearson_matrix(black_box(&records)))
    });
}

fn bench_substitution(c: &mut Criterion) {
    let report = ingest_csv(fixture_path()).unwrap();
    let means = instance_means(&report.records);
    let kb = build_knowledge_base(&means, &KbConfig::default()).unwrap();
    let classes: Vec<String> = kb.classes.clone();
    let queries: Vec<SubstitutionQuery> = classes
        .iter()
        .map(|missing| SubstitutionQuery {
            missing: missing.clone(),
            candidates: classes.clone(),
        })
        .collect();
    c.bench_function("substitute_all_11_classes", |b| {
        b.iter(|| {
            for q in &queries {
                black_box(substitute(&kb, q, 0.8).unwrap());
            }
        })
    });
}

criterion_group!(
    benches,
    bench_ransac,
    bench_extraction,
    bench_simulation,
    bench_kmeans,
    bench_stats,
    bench_substitution
);
criterion_main!(benches);
