//! Functional property vectors derived from the physical ones.
//!
//! Support favors large flat rigid surfaces, containment large hollow
//! bodies, movability light smooth objects; blockage is the exact
//! opposite of movability and is represented by negating it.

use serde::{Deserialize, Serialize};

use crate::geometry::SizeTriple;

/// The eight physical properties of one observation (or one instance
/// mean). Roughness is absent when the ramp run recorded no slide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalVector {
    pub size: SizeTriple,
    pub flatness: f64,
    pub hollowness: f64,
    /// Grams.
    pub heaviness: f64,
    pub rigidity: f64,
    pub roughness: Option<f64>,
}

/// Functional vectors of one object. Movability and blockage are absent
/// when roughness is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalVector {
    pub support: [f64; 5],
    pub containment: [f64; 4],
    pub movability: Option<[f64; 2]>,
    pub blockage: Option<[f64; 2]>,
}

/// su = [l, w, h, fl, ri]
pub fn derive_support(p: &PhysicalVector) -> [f64; 5] {
    let [l, w, h] = p.size.as_array();
    [l, w, h, p.flatness, p.rigidity]
}

/// co = [l, w, h, ho]
pub fn derive_containment(p: &PhysicalVector) -> [f64; 4] {
    let [l, w, h] = p.size.as_array();
    [l, w, h, p.hollowness]
}

/// mo = [he, ro]; missing roughness propagates.
pub fn derive_movability(p: &PhysicalVector) -> Option<[f64; 2]> {
    p.roughness.map(|ro| [p.heaviness, ro])
}

/// bl = -mo
pub fn derive_blockage(p: &PhysicalVector) -> Option<[f64; 2]> {
    derive_movability(p).map(|[he, ro]| [-he, -ro])
}

pub fn derive_all(p: &PhysicalVector) -> FunctionalVector {
    FunctionalVector {
        support: derive_support(p),
        containment: derive_containment(p),
        movability: derive_movability(p),
        blockage: derive_blockage(p),
    }
}
