//! Robot-centric object property extraction and symbolic knowledge building
//! over the RoCS dataset schema.
//!
//! The crate covers the full pipeline:
//!
//! 1. [`simulator`] synthesizes per-observation feature bundles (point
//!    clouds, marker distances, press/ramp logs, scale readings) for a set
//!    of parametric object shapes, with optional sensor noise.
//! 2. [`geometry`] and [`interaction`] turn a bundle into the eight
//!    physical properties (size, flatness, hollowness, heaviness,
//!    rigidity, roughness).
//! 3. [`functional`] derives functional property vectors (support,
//!    containment, movability, blockage) from the physical ones.
//! 4. [`dataset`] ingests/exports observation tables and computes the
//!    summary statistics (per-class variance table, instance-mean
//!    correlations, coverage quartiles).
//! 5. [`knowledge`] clusters per-instance property values into quality
//!    symbols and aggregates them into a probabilistic concept store.
//! 6. [`substitution`] ranks candidate replacement classes by cosine
//!    similarity over their symbolic profiles.
//!
//! Everything downstream of a seed is deterministic: identical inputs and
//! seeds produce byte-identical artifacts.

pub mod cloud;
pub mod dataset;
pub mod error;
pub mod extract;
pub mod functional;
pub mod geom;
pub mod geometry;
pub mod interaction;
pub mod io;
pub mod kmeans;
pub mod knowledge;
pub mod plane;
pub mod seed;
pub mod simulator;
pub mod stats;
pub mod substitution;

pub use error::Error;
pub use geom::{Aabb, Point3};
pub use geometry::{SizeTriple, TabletopSegmentation};
pub use knowledge::{ConceptTuple, KnowledgeBase, QualitySymbol};
pub use simulator::{FeatureBundle, NoiseSpec, ShapeKind, SyntheticObject};
