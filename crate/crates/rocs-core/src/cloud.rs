//! Point-cloud utilities: voxel downsampling, brute-force nearest
//! neighbours and PCA surface normals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geom::{symmetric_eigen_3x3, Point3};

/// Voxel-grid downsampling: points are binned into cubic cells of edge
/// `leaf_size` and each occupied cell is replaced by the centroid of its
/// points. Output order follows the cell index (deterministic).
pub fn voxel_downsample(points: &[Point3], leaf_size: f64) -> Result<Vec<Point3>> {
    if leaf_size <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "leaf size must be positive, got {leaf_size}"
        )));
    }
    let mut cells: BTreeMap<(i64, i64, i64), (Point3, usize)> = BTreeMap::new();
    for p in points {
        let key = (
            (p.x / leaf_size).floor() as i64,
            (p.y / leaf_size).floor() as i64,
            (p.z / leaf_size).floor() as i64,
        );
        let entry = cells.entry(key).or_insert((Point3::ZERO, 0));
        entry.0 = entry.0.add(p);
        entry.1 += 1;
    }
    Ok(cells
        .values()
        .map(|(sum, n)| sum.scale(1.0 / *n as f64))
        .collect())
}

/// Indices of the `k` nearest neighbours of `points[query]`, excluding the
/// query point itself. Ties resolve to the lower index.
pub fn k_nearest(points: &[Point3], query: usize, k: usize) -> Vec<usize> {
    let q = points[query];
    let mut order: Vec<usize> = (0..points.len()).filter(|&i| i != query).collect();
    order.sort_by(|&a, &b| {
        let da = points[a].sub(&q).dot(&points[a].sub(&q));
        let db = points[b].sub(&q).dot(&points[b].sub(&q));
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    order.truncate(k);
    order
}

/// PCA surface normals from the `k` nearest neighbours of each point.
///
/// The normal is the eigenvector of the neighbourhood scatter matrix with
/// the smallest eigenvalue, oriented into the upper hemisphere (z >= 0);
/// horizontal normals are disambiguated lexicographically.
pub fn estimate_normals(points: &[Point3], k: usize) -> Result<Vec<Point3>> {
    estimate_normals_with_variation(points, k).map(|(normals, _)| normals)
}

/// Normals plus the surface variation of each neighbourhood,
/// `lambda_0 / (lambda_0 + lambda_1 + lambda_2)`. Variation is zero on a
/// plane and grows where a neighbourhood straddles several surfaces
/// (depth discontinuities, sharp creases), where the PCA normal is
/// meaningless.
pub fn estimate_normals_with_variation(
    points: &[Point3],
    k: usize,
) -> Result<(Vec<Point3>, Vec<f64>)> {
    if points.len() < 3 {
        return Err(Error::DegenerateCloud(format!(
            "need at least 3 points for normal estimation, got {}",
            points.len()
        )));
    }
    let k = k.min(points.len() - 1).max(2);
    let mut normals = Vec::with_capacity(points.len());
    let mut variations = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let neighbours = k_nearest(points, i, k);
        let mut centroid = points[i];
        for &j in &neighbours {
            centroid = centroid.add(&points[j]);
        }
        centroid = centroid.scale(1.0 / (neighbours.len() + 1) as f64);

        let mut scatter = [[0.0f64; 3]; 3];
        let mut accumulate = |p: &Point3| {
            let d = p.sub(&centroid);
            let v = [d.x, d.y, d.z];
            for r in 0..3 {
                for c in 0..3 {
                    scatter[r][c] += v[r] * v[c];
                }
            }
        };
        accumulate(&points[i]);
        for &j in &neighbours {
            accumulate(&points[j]);
        }

        let (values, vectors) = symmetric_eigen_3x3(scatter);
        let n = Point3::new(vectors[0][0], vectors[0][1], vectors[0][2]);
        normals.push(orient_up(n));
        let total = values[0] + values[1] + values[2];
        variations.push(if total > 0.0 {
            (values[0] / total).max(0.0)
        } else {
            0.0
        });
    }
    Ok((normals, variations))
}

/// Flips a direction into the canonical hemisphere: positive z, or for
/// horizontal vectors positive x, then positive y.
pub fn orient_up(n: Point3) -> Point3 {
    let flip = if n.z.abs() > 1e-12 {
        n.z < 0.0
    } else if n.x.abs() > 1e-12 {
        n.x < 0.0
    } else {
        n.y < 0.0
    };
    if flip {
        n.scale(-1.0)
    } else {
        n
    }
}
