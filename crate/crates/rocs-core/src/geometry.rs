//! Geometric property extraction from object point clouds: tabletop
//! segmentation, normalized size, flatness and hollowness.

use serde::{Deserialize, Serialize};

use crate::cloud::{estimate_normals_with_variation, orient_up, voxel_downsample};
use crate::error::{Error, Result};
use crate::geom::{Aabb, Point3};
use crate::plane::{fit_plane_direct, ransac_plane, PlaneModel, RansacParams};

/// Cavity depths below this are treated as measurement artifacts and the
/// object is reported as solid (hollowness 0).
pub const MIN_CAVITY_DEPTH: f64 = 0.01;

/// Minimum number of planar-neighbourhood inliers a plane candidate
/// needs before their normals can certify (or reorient) it.
const MIN_PLANE_VOTERS: usize = 3;

/// Result of splitting a tabletop scene into support plane and object.
#[derive(Debug, Clone)]
pub struct TabletopSegmentation {
    pub table: PlaneModel,
    /// Points strictly above the table plane's inlier band.
    pub object: Vec<Point3>,
}

/// Finds the dominant support plane and returns everything above it as the
/// object candidate. Points below the plane (tripod legs, floor returns)
/// are discarded together with the plane itself.
pub fn segment_tabletop(cloud: &[Point3], params: &RansacParams) -> Result<TabletopSegmentation> {
    let fit = ransac_plane(cloud, params)?;
    let object: Vec<Point3> = cloud
        .iter()
        .filter(|p| fit.plane.signed_distance(p) > params.distance_threshold)
        .copied()
        .collect();
    if object.is_empty() {
        return Err(Error::EmptyObjectSegment);
    }
    Ok(TabletopSegmentation {
        table: fit.plane,
        object,
    })
}

/// Axis-normalized object dimensions. Each component is the raw AABB
/// extent divided by the largest extent, so every component lies in (0, 1]
/// and the largest is exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeTriple {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

impl SizeTriple {
    pub fn from_extents(extents: [f64; 3]) -> Result<SizeTriple> {
        if extents.iter().any(|&e| e <= 0.0) {
            return Err(Error::DegenerateCloud(format!(
                "zero extent in {extents:?}; cloud does not span three dimensions"
            )));
        }
        let largest = extents[0].max(extents[1]).max(extents[2]);
        Ok(SizeTriple {
            length: extents[0] / largest,
            width: extents[1] / largest,
            height: extents[2] / largest,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.length, self.width, self.height]
    }
}

/// Raw AABB extents (meters) plus their normalized form.
#[derive(Debug, Clone, Copy)]
pub struct SizeMeasurement {
    pub extents: [f64; 3],
    pub normalized: SizeTriple,
}

impl SizeMeasurement {
    /// Raw object height in meters (z extent).
    pub fn height(&self) -> f64 {
        self.extents[2]
    }
}

/// Size from the axis-aligned bounding box of a segmented object cloud.
pub fn compute_size(object_cloud: &[Point3]) -> Result<SizeMeasurement> {
    let aabb = Aabb::from_points(object_cloud)?;
    let extents = aabb.extents();
    Ok(SizeMeasurement {
        extents,
        normalized: SizeTriple::from_extents(extents)?,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct FlatnessParams {
    /// Fraction of top-plane inlier normals that must agree with the plane
    /// normal for the plane to count as a flat surface.
    pub consensus_fraction: f64,
    /// Maximum angle (radians) between an inlier normal and the plane
    /// normal to count as agreement.
    pub max_normal_angle: f64,
    /// Neighbourhood size for PCA normal estimation.
    pub normal_k: usize,
    /// Upper bound on the number of planes peeled off while searching for
    /// the top-level plane.
    pub max_planes: usize,
    /// Plane inlier distance for the top-plane search and the final
    /// recount. Much tighter than the tabletop band: a rim and a cavity
    /// floor can sit closer together than a table threshold, and a slab
    /// that wide lets diagonal planes outvote the true ones on
    /// object-sized clouds.
    pub plane_threshold: f64,
    /// Surface-variation ceiling for a point to vote in the plane
    /// consensus. Where a neighbourhood straddles two surfaces (a rim
    /// with a cavity floor just below it) the PCA normal is corrupted;
    /// such points must not veto a real plane.
    pub max_surface_variation: f64,
}

impl Default for FlatnessParams {
    fn default() -> Self {
        FlatnessParams {
            consensus_fraction: 0.95,
            max_normal_angle: 15f64.to_radians(),
            normal_k: 10,
            max_planes: 8,
            plane_threshold: 0.005,
            max_surface_variation: 0.01,
        }
    }
}

/// Flatness: share of the object's top-view points lying on its top-level
/// plane.
///
/// Planes are peeled off a voxel-thinned copy of the cloud with RANSAC;
/// candidates are visited from highest to lowest (mean inlier z) and the
/// first one whose planar-neighbourhood inliers reach the consensus
/// fraction wins. Its inliers are then recounted against the full cloud:
/// `fl = |p| / |o|`.
/// Objects without any consensus plane (spheres, heavily curved tops)
/// report 0.
pub fn compute_flatness(
    top_cloud: &[Point3],
    ransac: &RansacParams,
    params: &FlatnessParams,
) -> Result<f64> {
    if top_cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if !(0.0..=1.0).contains(&params.consensus_fraction) {
        return Err(Error::InvalidParameter(format!(
            "consensus fraction must be in [0, 1], got {}",
            params.consensus_fraction
        )));
    }
    if params.plane_threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "plane threshold must be positive, got {}",
            params.plane_threshold
        )));
    }
    if params.max_surface_variation <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "surface variation ceiling must be positive, got {}",
            params.max_surface_variation
        )));
    }
    let thinned = voxel_downsample(top_cloud, ransac.leaf_size)?;
    if thinned.len() < 3 {
        return Ok(0.0);
    }
    let (normals, variations) = estimate_normals_with_variation(&thinned, params.normal_k)?;

    // peel planes off the thinned cloud
    let min_points = ((thinned.len() as f64 * 0.05).ceil() as usize).max(12);
    let mut remaining: Vec<usize> = (0..thinned.len()).collect();
    let mut candidates: Vec<(PlaneModel, Vec<usize>)> = Vec::new();
    for round in 0..params.max_planes {
        if remaining.len() < min_points {
            break;
        }
        let subset: Vec<Point3> = remaining.iter().map(|&i| thinned[i]).collect();
        let sub_params = RansacParams {
            min_inlier_fraction: 0.0,
            distance_threshold: params.plane_threshold,
            seed: ransac.seed.wrapping_add(round as u64),
            ..*ransac
        };
        let Ok(fit) = fit_plane_direct(&subset, &sub_params) else {
            break;
        };
        if fit.inliers.len() < min_points {
            break;
        }
        let inliers: Vec<usize> = fit.inliers.iter().map(|&i| remaining[i]).collect();
        // Snap the fit to the dominant surface among its
        // planar-neighbourhood inliers. Two parallel faces less than two
        // thresholds apart (a rim over a shallow floor) admit a slightly
        // tilted bridge plane that peels both off at once; the snapped
        // plane keeps the faces separate.
        let (plane, inliers) = snap_to_voter_surface(
            fit.plane,
            inliers,
            &thinned,
            &normals,
            &variations,
            &remaining,
            params,
            min_points,
        );
        remaining.retain(|i| !inliers.contains(i));
        candidates.push((plane, inliers));
    }

    // highest plane first
    candidates.sort_by(|a, b| {
        let za = mean_z(&thinned, &a.1);
        let zb = mean_z(&thinned, &b.1);
        zb.partial_cmp(&za).unwrap()
    });

    let agreement_cos = params.max_normal_angle.cos();
    for (plane, inliers) in &candidates {
        // Only points whose neighbourhood is itself planar get a vote:
        // normals astride a depth discontinuity say nothing about the
        // surface they sit on.
        let mut eligible = 0usize;
        let mut agreeing = 0usize;
        for &i in inliers {
            if variations[i] > params.max_surface_variation {
                continue;
            }
            eligible += 1;
            if normals[i].dot(&plane.normal).abs() >= agreement_cos {
                agreeing += 1;
            }
        }
        if eligible < MIN_PLANE_VOTERS {
            continue;
        }
        if (agreeing as f64) < params.consensus_fraction * eligible as f64 {
            continue;
        }
        let plane_points = top_cloud
            .iter()
            .filter(|p| plane.distance(p) <= params.plane_threshold)
            .count();
        return Ok((plane_points as f64 / top_cloud.len() as f64).min(1.0));
    }
    Ok(0.0)
}

/// Reorients a peeled plane along the consensus normal of its
/// planar-neighbourhood inliers, offset to their median surface, and
/// re-selects inliers among the still-unpeeled points. Falls back to the
/// RANSAC fit when too few inliers are trustworthy or the snapped plane
/// loses support.
#[allow(clippy::too_many_arguments)]
fn snap_to_voter_surface(
    fit: PlaneModel,
    inliers: Vec<usize>,
    thinned: &[Point3],
    normals: &[Point3],
    variations: &[f64],
    remaining: &[usize],
    params: &FlatnessParams,
    min_points: usize,
) -> (PlaneModel, Vec<usize>) {
    let clean: Vec<usize> = inliers
        .iter()
        .copied()
        .filter(|&i| variations[i] <= params.max_surface_variation)
        .collect();
    if clean.len() < MIN_PLANE_VOTERS {
        return (fit, inliers);
    }
    let mut direction = Point3::new(0.0, 0.0, 0.0);
    for &i in &clean {
        direction = direction.add(&normals[i]);
    }
    let Some(normal) = direction.normalized() else {
        return (fit, inliers);
    };
    let normal = orient_up(normal);
    let mut offsets: Vec<f64> = clean.iter().map(|&i| normal.dot(&thinned[i])).collect();
    offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let snapped = PlaneModel {
        normal,
        offset: offsets[offsets.len() / 2],
    };
    let snapped_inliers: Vec<usize> = remaining
        .iter()
        .copied()
        .filter(|&i| snapped.distance(&thinned[i]) <= params.plane_threshold)
        .collect();
    if snapped_inliers.len() < min_points {
        return (fit, inliers);
    }
    (snapped, snapped_inliers)
}

/// Hollowness from the object height and the top-camera marker distances.
///
/// `d_reference` is the camera-to-table distance measured on the reference
/// marker, `d_hole` the camera-to-marker distance with the marker resting
/// inside (or on top of) the object. The base height `b = d_reference -
/// d_hole` leaves a cavity of depth `h - b`; cavities shallower than
/// [`MIN_CAVITY_DEPTH`] (including slightly negative ones from noise)
/// report 0. A marker resting more than that margin above the rim is an
/// inconsistent measurement.
pub fn compute_hollowness(height: f64, d_reference: f64, d_hole: f64) -> Result<f64> {
    if height <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "object height must be positive, got {height}"
        )));
    }
    if d_reference <= 0.0 || d_hole <= 0.0 {
        return Err(Error::InconsistentMarker(format!(
            "marker distances must be positive, got d_reference={d_reference}, d_hole={d_hole}"
        )));
    }
    let base = d_reference - d_hole;
    let cavity = height - base;
    if cavity < -MIN_CAVITY_DEPTH {
        return Err(Error::InconsistentMarker(format!(
            "marker sits {:.4} m above the object rim",
            -cavity
        )));
    }
    if cavity < MIN_CAVITY_DEPTH {
        return Ok(0.0);
    }
    Ok((cavity / height).clamp(0.0, 1.0))
}

fn mean_z(points: &[Point3], indices: &[usize]) -> f64 {
    indices.iter().map(|&i| points[i].z).sum::<f64>() / indices.len() as f64
}
