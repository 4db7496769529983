//! RANSAC plane fitting with least-squares refinement.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cloud::{orient_up, voxel_downsample};
use crate::error::{Error, Result};
use crate::geom::{symmetric_eigen_3x3, Point3};

/// Infinite plane `normal . p = offset` with a unit normal oriented into
/// the canonical (upward) hemisphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneModel {
    pub normal: Point3,
    pub offset: f64,
}

impl PlaneModel {
    pub fn from_points(a: &Point3, b: &Point3, c: &Point3) -> Option<PlaneModel> {
        let n = b.sub(a).cross(&c.sub(a)).normalized()?;
        let n = orient_up(n);
        Some(PlaneModel {
            normal: n,
            offset: n.dot(a),
        })
    }

    /// Signed distance; positive on the side the normal points into.
    pub fn signed_distance(&self, p: &Point3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn distance(&self, p: &Point3) -> f64 {
        self.signed_distance(p).abs()
    }
}

/// Least-squares plane through a point set: centroid plus the scatter
/// matrix eigenvector with the smallest eigenvalue. Fails when the points
/// are essentially collinear.
pub fn least_squares_plane(points: &[Point3]) -> Result<PlaneModel> {
    if points.len() < 3 {
        return Err(Error::DegenerateCloud(
            "plane fit needs at least 3 points".into(),
        ));
    }
    let mut centroid = Point3::ZERO;
    for p in points {
        centroid = centroid.add(p);
    }
    centroid = centroid.scale(1.0 / points.len() as f64);

    let mut scatter = [[0.0f64; 3]; 3];
    for p in points {
        let d = p.sub(&centroid);
        let v = [d.x, d.y, d.z];
        for r in 0..3 {
            for c in 0..3 {
                scatter[r][c] += v[r] * v[c];
            }
        }
    }
    let (values, vectors) = symmetric_eigen_3x3(scatter);
    // collinear sets have two near-zero eigenvalues
    let span = values[2].max(1e-300);
    if values[1] / span < 1e-12 {
        return Err(Error::DegenerateCloud("points are collinear".into()));
    }
    let n = orient_up(Point3::new(vectors[0][0], vectors[0][1], vectors[0][2]));
    Ok(PlaneModel {
        normal: n,
        offset: n.dot(&centroid),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct RansacParams {
    /// Voxel edge used to thin the cloud before model search. The final
    /// inlier set is always classified against the full input cloud.
    pub leaf_size: f64,
    pub max_iterations: usize,
    pub distance_threshold: f64,
    /// Minimum fraction of the cloud that must support the winning plane.
    pub min_inlier_fraction: f64,
    pub seed: u64,
}

impl Default for RansacParams {
    fn default() -> Self {
        RansacParams {
            leaf_size: 0.0025,
            max_iterations: 10_000,
            distance_threshold: 0.02,
            min_inlier_fraction: 0.25,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RansacPlane {
    pub plane: PlaneModel,
    /// Indices into the input slice, ascending.
    pub inliers: Vec<usize>,
}

fn validate(params: &RansacParams) -> Result<()> {
    if params.distance_threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "distance threshold must be positive, got {}",
            params.distance_threshold
        )));
    }
    if params.max_iterations == 0 {
        return Err(Error::InvalidParameter("max iterations is zero".into()));
    }
    Ok(())
}

/// Best-candidate plane over exactly the given points: random minimal
/// triplets, inlier-count ranking (first wins ties), one least-squares
/// refinement over the consensus set, final recount.
pub(crate) fn fit_plane_direct(points: &[Point3], params: &RansacParams) -> Result<RansacPlane> {
    validate(params)?;
    if points.len() < 3 {
        return Err(Error::DegenerateCloud(
            "RANSAC needs at least 3 points".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let index = Uniform::from(0..points.len());

    let mut best: Option<(usize, PlaneModel)> = None;
    for _ in 0..params.max_iterations {
        let i = index.sample(&mut rng);
        let j = index.sample(&mut rng);
        let k = index.sample(&mut rng);
        if i == j || j == k || i == k {
            continue;
        }
        let Some(candidate) = PlaneModel::from_points(&points[i], &points[j], &points[k]) else {
            continue;
        };
        let count = points
            .iter()
            .filter(|p| candidate.distance(p) <= params.distance_threshold)
            .count();
        if best.as_ref().map_or(true, |(c, _)| count > *c) {
            best = Some((count, candidate));
        }
    }

    let (_, rough) = best
        .ok_or_else(|| Error::SegmentationFailed("no valid plane candidate sampled".into()))?;
    let consensus: Vec<Point3> = points
        .iter()
        .filter(|p| rough.distance(p) <= params.distance_threshold)
        .copied()
        .collect();
    let plane = least_squares_plane(&consensus).unwrap_or(rough);
    let inliers: Vec<usize> = (0..points.len())
        .filter(|&i| plane.distance(&points[i]) <= params.distance_threshold)
        .collect();
    if (inliers.len() as f64) < params.min_inlier_fraction * points.len() as f64 {
        return Err(Error::SegmentationFailed(format!(
            "best plane supports {} of {} points, below the minimum fraction {}",
            inliers.len(),
            points.len(),
            params.min_inlier_fraction
        )));
    }
    Ok(RansacPlane { plane, inliers })
}

/// RANSAC plane search, deterministic for a given seed.
///
/// The model is estimated on a voxel-thinned copy of the cloud
/// (`leaf_size`) and the returned inlier set is classified against the
/// full input. Returns `SegmentationFailed` when no plane reaches
/// `min_inlier_fraction`.
pub fn ransac_plane(points: &[Point3], params: &RansacParams) -> Result<RansacPlane> {
    validate(params)?;
    let thinned = voxel_downsample(points, params.leaf_size)?;
    let fit = fit_plane_direct(&thinned, params)?;
    let inliers: Vec<usize> = (0..points.len())
        .filter(|&i| fit.plane.distance(&points[i]) <= params.distance_threshold)
        .collect();
    if (inliers.len() as f64) < params.min_inlier_fraction * points.len() as f64 {
        return Err(Error::SegmentationFailed(format!(
            "plane supports {} of {} points, below the minimum fraction {}",
            inliers.len(),
            points.len(),
            params.min_inlier_fraction
        )));
    }
    Ok(RansacPlane {
        plane: fit.plane,
        inliers,
    })
}
