//! Seeded k-means with k-means++ initialization and a canonical cluster
//! order, so a (data, k, seed) triple always yields the same model and
//! label indices carry meaning across runs.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, Uniform, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct KMeansParams {
    pub k: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl KMeansParams {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansParams {
            k,
            max_iterations: 200,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansModel {
    /// Cluster centers, sorted ascending by component sum (ties broken
    /// lexicographically), so index 0 is the "smallest" cluster.
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
    /// Post-assignment inertia per iteration; non-increasing.
    pub inertia_trace: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Index of the nearest centroid; ties resolve to the lower index.
pub fn nearest_centroid(centroids: &[Vec<f64>], point: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = sq_dist(&centroids[0], point);
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(c, point);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

fn assign_all(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<usize> {
    points
        .iter()
        .map(|p| nearest_centroid(centroids, p))
        .collect()
}

fn cluster_means(
    points: &[Vec<f64>],
    assignments: &[usize],
    previous: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    let k = previous.len();
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &a) in points.iter().zip(assignments.iter()) {
        counts[a] += 1;
        for (s, &x) in sums[a].iter_mut().zip(p.iter()) {
            *s += x;
        }
    }
    (0..k)
        .map(|c| {
            if counts[c] == 0 {
                previous[c].clone()
            } else {
                sums[c].iter().map(|s| s / counts[c] as f64).collect()
            }
        })
        .collect()
}

fn inertia_of(points: &[Vec<f64>], centroids: &[Vec<f64>], assignments: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignments.iter())
        .map(|(p, &a)| sq_dist(p, &centroids[a]))
        .sum()
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let first = Uniform::from(0..points.len()).sample(rng);
    let mut centroids = vec![points[first].clone()];
    while centroids.len() < k {
        let d2: Vec<f64> = points
            .iter()
            .map(|p| {
                centroids
                    .iter()
                    .map(|c| sq_dist(p, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // every point coincides with a centroid; fall back to the
            // first one not already chosen (caller guarantees enough
            // distinct points, so this is unreachable in practice)
            Err(_) => (0..points.len())
                .find(|&i| centroids.iter().all(|c| c != &points[i]))
                .unwrap_or(0),
        };
        centroids.push(points[next].clone());
    }
    centroids
}

/// Relocates empty clusters to the point farthest from its own centroid,
/// reassigning until every cluster is populated.
fn repair_empty(
    points: &[Vec<f64>],
    centroids: &mut [Vec<f64>],
    assignments: &mut Vec<usize>,
) {
    loop {
        let mut counts = vec![0usize; centroids.len()];
        for &a in assignments.iter() {
            counts[a] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let far = (0..points.len())
            .max_by(|&a, &b| {
                let da = sq_dist(&points[a], &centroids[assignments[a]]);
                let db = sq_dist(&points[b], &centroids[assignments[b]]);
                da.partial_cmp(&db).unwrap().then(b.cmp(&a))
            })
            .unwrap();
        centroids[empty] = points[far].clone();
        *assignments = assign_all(points, centroids);
    }
}

/// Canonical cluster order: ascending component sum, then lexicographic.
/// In one dimension this is plain ascending value; for negated (blockage)
/// vectors the most negative cluster sorts first.
fn canonical_order(centroids: &[Vec<f64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..centroids.len()).collect();
    order.sort_by(|&a, &b| {
        let sa: f64 = centroids[a].iter().sum();
        let sb: f64 = centroids[b].iter().sum();
        sa.partial_cmp(&sb).unwrap().then_with(|| {
            centroids[a]
                .iter()
                .zip(centroids[b].iter())
                .find_map(|(x, y)| match x.partial_cmp(y).unwrap() {
                    std::cmp::Ordering::Equal => None,
                    ord => Some(ord),
                })
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    order
}

pub fn kmeans(points: &[Vec<f64>], params: &KMeansParams) -> Result<KMeansModel> {
    if params.k < 2 {
        return Err(Error::Clustering(format!(
            "need at least 2 clusters, got {}",
            params.k
        )));
    }
    if points.is_empty() {
        return Err(Error::Clustering("no points to cluster".into()));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(Error::Clustering("points have zero dimensions".into()));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::Clustering(format!(
                "inconsistent dimensionality: {} vs {dim}",
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Clustering("non-finite coordinate".into()));
        }
    }
    let distinct: BTreeSet<Vec<u64>> = points
        .iter()
        .map(|p| p.iter().map(|x| x.to_bits()).collect())
        .collect();
    if distinct.len() < params.k {
        return Err(Error::Clustering(format!(
            "{} distinct points cannot form {} clusters",
            distinct.len(),
            params.k
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut centroids = plus_plus_init(points, params.k, &mut rng);
    let mut assignments: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut iterations = 0;

    for iter in 1..=params.max_iterations.max(1) {
        iterations = iter;
        if iter > 1 {
            centroids = cluster_means(points, &assignments, &centroids);
        }
        let mut next = assign_all(points, &centroids);
        repair_empty(points, &mut centroids, &mut next);
        trace.push(inertia_of(points, &centroids, &next));
        if next == assignments {
            break;
        }
        assignments = next;
    }

    // canonical labels
    let order = canonical_order(&centroids);
    let mut remap = vec![0usize; params.k];
    for (new_idx, &old_idx) in order.iter().enumerate() {
        remap[old_idx] = new_idx;
    }
    let centroids: Vec<Vec<f64>> = order.iter().map(|&i| centroids[i].clone()).collect();
    let assignments: Vec<usize> = assignments.iter().map(|&a| remap[a]).collect();

    for w in centroids.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Clustering(
                "converged to duplicate centroids".into(),
            ));
        }
    }

    let inertia = inertia_of(points, &centroids, &assignments);
    Ok(KMeansModel {
        centroids,
        assignments,
        inertia,
        iterations,
        inertia_trace: trace,
    })
}
