//! Knowledge base construction: clustering instance means into quality
//! symbols, attributing symbols to instances, and aggregating per-class
//! concept proportions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::InstanceMeans;
use crate::error::{Error, Result};
use crate::kmeans::{kmeans, nearest_centroid, KMeansParams};
use crate::seed::{derive_seed, derive_seed_indexed};

/// Properties that get their own cluster model, with the vector width of
/// each. The scalar physical properties come first, then the grouped and
/// functional ones.
pub const CLUSTERED_PROPERTIES: [(&str, usize); 10] = [
    ("flatness", 1),
    ("rigidity", 1),
    ("roughness", 1),
    ("heaviness", 1),
    ("hollowness", 1),
    ("size", 3),
    ("support", 5),
    ("containment", 4),
    ("movability", 2),
    ("blockage", 2),
];

/// A discrete quality value, rendered as `<property>_<index>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualitySymbol {
    pub property: String,
    pub index: usize,
}

impl QualitySymbol {
    pub fn new(property: impl Into<String>, index: usize) -> Self {
        Self {
            property: property.into(),
            index,
        }
    }
}

impl fmt::Display for QualitySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.property, self.index)
    }
}

impl FromStr for QualitySymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (property, index) = s.rsplit_once('_').ok_or_else(|| {
            Error::InvalidKnowledgeBase(format!("malformed quality symbol {s:?}"))
        })?;
        if property.is_empty() {
            return Err(Error::InvalidKnowledgeBase(format!(
                "malformed quality symbol {s:?}"
            )));
        }
        let index = index.parse::<usize>().map_err(|_| {
            Error::InvalidKnowledgeBase(format!("malformed quality symbol {s:?}"))
        })?;
        Ok(Self::new(property, index))
    }
}

impl Serialize for QualitySymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QualitySymbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fitted centroids for one property. Cluster indices follow the
/// canonical label order (ascending centroid component sum).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub property: String,
    pub eta: usize,
    pub seed: u64,
    pub centroids: Vec<Vec<f64>>,
}

impl ClusterModel {
    /// Symbol a value vector maps to under this model.
    pub fn symbol_for(&self, value: &[f64]) -> Result<QualitySymbol> {
        if value.len() != self.centroids[0].len() {
            return Err(Error::InvalidParameter(format!(
                "{}: value has {} components, model expects {}",
                self.property,
                value.len(),
                self.centroids[0].len()
            )));
        }
        Ok(QualitySymbol::new(
            self.property.clone(),
            nearest_centroid(&self.centroids, value),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HoldsEntry {
    pub instance: String,
    pub symbol: QualitySymbol,
}

/// `measure` is the proportion of a class's measured instances holding
/// the symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptTuple {
    pub class: String,
    pub symbol: QualitySymbol,
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InstanceEntry {
    pub instance: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KbMeta {
    pub seed: u64,
    pub eta: BTreeMap<String, usize>,
    /// Min and max instance-mean heaviness in grams, the min-max scale
    /// applied before clustering heaviness-bearing vectors.
    pub heaviness_scale_g: [f64; 2],
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub meta: KbMeta,
    pub classes: Vec<String>,
    pub instances: Vec<InstanceEntry>,
    pub models: Vec<ClusterModel>,
    pub holds: Vec<HoldsEntry>,
    pub concepts: Vec<ConceptTuple>,
}

#[derive(Debug, Clone)]
pub struct KbConfig {
    pub seed: u64,
    pub eta_default: usize,
    pub eta_overrides: BTreeMap<String, usize>,
    pub max_iterations: usize,
}

impl Default for KbConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            eta_default: 4,
            eta_overrides: BTreeMap::new(),
            max_iterations: 200,
        }
    }
}

impl KbConfig {
    pub fn eta_for(&self, property: &str) -> usize {
        self.eta_overrides
            .get(property)
            .copied()
            .unwrap_or(self.eta_default)
    }
}

fn scale_heaviness(grams: f64, scale: [f64; 2]) -> f64 {
    let span = scale[1] - scale[0];
    if span <= 0.0 {
        0.0
    } else {
        (grams - scale[0]) / span
    }
}

/// Value vectors for one clustered property, `(instance, vector)` in
/// (class, instance) order. Instances missing a needed component
/// (roughness when no slide was ever observed) are left out.
pub fn property_vectors(
    means: &[InstanceMeans],
    property: &str,
    heaviness_scale: [f64; 2],
) -> Result<Vec<(String, Vec<f64>)>> {
    // indices into InstanceMeans::values
    const FL: usize = 0;
    const RI: usize = 1;
    const RO: usize = 2;
    const SL: usize = 3;
    const SW: usize = 4;
    const SH: usize = 5;
    const HE: usize = 6;
    const HO: usize = 7;

    let needed: &[usize] = match property {
        "flatness" => &[FL],
        "rigidity" => &[RI],
        "roughness" => &[RO],
        "heaviness" => &[HE],
        "hollowness" => &[HO],
        "size" => &[SL, SW, SH],
        "support" => &[SL, SW, SH, FL, RI],
        "containment" => &[SL, SW, SH, HO],
        "movability" | "blockage" => &[HE, RO],
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown clustered property {other:?}"
            )))
        }
    };

    let mut out = Vec::new();
    for m in means {
        let mut vector = Vec::with_capacity(needed.len());
        let mut complete = true;
        for &idx in needed {
            match m.values[idx] {
                Some(v) => {
                    let v = if idx == HE {
                        scale_heaviness(v, heaviness_scale)
                    } else {
                        v
                    };
                    vector.push(v);
                }
                None if idx == RO => {
                    complete = false;
                    break;
                }
                None => {
                    return Err(Error::InvalidObject(format!(
                        "instance {} is missing {}",
                        m.instance,
                        crate::dataset::PROPERTIES[idx]
                    )))
                }
            }
        }
        if !complete {
            continue;
        }
        if property == "blockage" {
            for v in &mut vector {
                *v = -*v;
            }
        }
        out.push((m.instance.clone(), vector));
    }
    Ok(out)
}

/// Clusters one property's value vectors into `eta` quality symbols.
pub fn subcategorize(
    values: &[(String, Vec<f64>)],
    property: &str,
    eta: usize,
    seed: u64,
    max_iterations: usize,
) -> Result<(ClusterModel, Vec<HoldsEntry>)> {
    let points: Vec<Vec<f64>> = values.iter().map(|(_, v)| v.clone()).collect();
    let model = kmeans(
        &points,
        &KMeansParams {
            k: eta,
            max_iterations,
            seed,
        },
    )
    .map_err(|e| Error::Clustering(format!("{property}: {e}")))?;
    let holds = values
        .iter()
        .zip(&model.assignments)
        .map(|((instance, _), &cluster)| HoldsEntry {
            instance: instance.clone(),
            symbol: QualitySymbol::new(property, cluster),
        })
        .collect();
    Ok((
        ClusterModel {
            property: property.to_string(),
            eta,
            seed,
            centroids: model.centroids,
        },
        holds,
    ))
}

/// Merges per-property holds fragments, rejecting any instance that
/// would end up with two symbols for the same property.
pub fn attribute(fragments: Vec<Vec<HoldsEntry>>) -> Result<Vec<HoldsEntry>> {
    let mut seen: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut merged = Vec::new();
    for fragment in fragments {
        for entry in fragment {
            let key = (entry.instance.clone(), entry.symbol.property.clone());
            if let Some(prev) = seen.insert(key.clone(), entry.symbol.index) {
                return Err(Error::AttributionConflict(format!(
                    "instance {} already holds {}_{prev}, cannot also hold {}",
                    key.0, key.1, entry.symbol
                )));
            }
            merged.push(entry);
        }
    }
    merged.sort();
    Ok(merged)
}

/// Aggregates holds into per-class concept proportions. The denominator
/// for a (class, property) pair is the number of the class's instances
/// holding any symbol of the property, so proportions sum to one.
pub fn conceptualize(
    holds: &[HoldsEntry],
    membership: &BTreeMap<String, String>,
) -> Result<Vec<ConceptTuple>> {
    let mut holders: BTreeMap<(String, String, usize), usize> = BTreeMap::new();
    let mut measured: BTreeMap<(String, String), usize> = BTreeMap::new();
    for entry in holds {
        let class = membership.get(&entry.instance).ok_or_else(|| {
            Error::UnknownClass(format!("instance {} has no class", entry.instance))
        })?;
        *holders
            .entry((
                class.clone(),
                entry.symbol.property.clone(),
                entry.symbol.index,
            ))
            .or_default() += 1;
        *measured
            .entry((class.clone(), entry.symbol.property.clone()))
            .or_default() += 1;
    }
    Ok(holders
        .into_iter()
        .map(|((class, property, index), count)| {
            let total = measured[&(class.clone(), property.clone())];
            ConceptTuple {
                class,
                symbol: QualitySymbol::new(property, index),
                measure: count as f64 / total as f64,
            }
        })
        .collect())
}

/// Builds the full knowledge base from raw observations: per-instance
/// means, heaviness scaling, one cluster model per property, holds and
/// concepts.
pub fn build_knowledge_base(means: &[InstanceMeans], config: &KbConfig) -> Result<KnowledgeBase> {
    if means.is_empty() {
        return Err(Error::DatasetValidation(vec![
            "cannot build a knowledge base from an empty dataset".to_string(),
        ]));
    }
    let mut membership = BTreeMap::new();
    for m in means {
        if membership.insert(m.instance.clone(), m.class.clone()).is_some() {
            return Err(Error::DatasetValidation(vec![format!(
                "instance id {} appears under more than one grouping",
                m.instance
            )]));
        }
    }

    let he: Vec<f64> = means.iter().filter_map(|m| m.values[6]).collect();
    let heaviness_scale = [
        he.iter().copied().fold(f64::INFINITY, f64::min),
        he.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ];

    let mut eta_map = BTreeMap::new();
    let mut models = Vec::new();
    let mut fragments = Vec::new();
    for (property, _) in CLUSTERED_PROPERTIES {
        let eta = config.eta_for(property);
        let vectors = property_vectors(means, property, heaviness_scale)?;
        let seed = derive_seed(config.seed, property);
        let (model, fragment) =
            subcategorize(&vectors, property, eta, seed, config.max_iterations)?;
        eta_map.insert(property.to_string(), eta);
        models.push(model);
        fragments.push(fragment);
    }
    models.sort_by(|a, b| a.property.cmp(&b.property));

    let holds = attribute(fragments)?;
    let concepts = conceptualize(&holds, &membership)?;

    let classes: BTreeSet<String> = membership.values().cloned().collect();
    let instances = membership
        .into_iter()
        .map(|(instance, class)| InstanceEntry { instance, class })
        .collect();

    let kb = KnowledgeBase {
        meta: KbMeta {
            seed: config.seed,
            eta: eta_map,
            heaviness_scale_g: heaviness_scale,
            notes: vec![
                "cluster labels ascend by centroid component sum, ties broken lexicographically; \
                 blockage_0 therefore names the strongest blockers"
                    .to_string(),
                "heaviness is min-max scaled over instance means to [0, 1] before clustering; \
                 the gram scale is heaviness_scale_g"
                    .to_string(),
                "movability pairs scaled heaviness with roughness; blockage is its negation"
                    .to_string(),
            ],
        },
        classes: classes.into_iter().collect(),
        instances,
        models,
        holds,
        concepts,
    };
    kb.validate()?;
    Ok(kb)
}

impl KnowledgeBase {
    pub fn model(&self, property: &str) -> Option<&ClusterModel> {
        self.models.iter().find(|m| m.property == property)
    }

    /// Structural invariants: sorted unique collections, holds and
    /// concepts referencing known instances/classes/models, one symbol
    /// per (instance, property), and per-(class, property) proportions
    /// summing to one.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidKnowledgeBase(msg));

        if self.classes.windows(2).any(|w| w[0] >= w[1]) {
            return fail("classes are not sorted and unique".into());
        }
        if self.instances.windows(2).any(|w| w[0] >= w[1]) {
            return fail("instances are not sorted and unique".into());
        }
        let classes: BTreeSet<&str> = self.classes.iter().map(|s| s.as_str()).collect();
        for e in &self.instances {
            if !classes.contains(e.class.as_str()) {
                return fail(format!("instance {} names unknown class {}", e.instance, e.class));
            }
        }
        let instance_ids: BTreeSet<&str> =
            self.instances.iter().map(|e| e.instance.as_str()).collect();

        let mut eta_by_property = BTreeMap::new();
        for (i, m) in self.models.iter().enumerate() {
            if i > 0 && self.models[i - 1].property >= m.property {
                return fail("models are not sorted by property".into());
            }
            if m.eta < 2 || m.centroids.len() != m.eta {
                return fail(format!(
                    "model {} has {} centroids for eta = {}",
                    m.property,
                    m.centroids.len(),
                    m.eta
                ));
            }
            let dims = m.centroids[0].len();
            if dims == 0
                || m.centroids
                    .iter()
                    .any(|c| c.len() != dims || c.iter().any(|v| !v.is_finite()))
            {
                return fail(format!("model {} has malformed centroids", m.property));
            }
            if self.meta.eta.get(&m.property) != Some(&m.eta) {
                return fail(format!("meta eta for {} disagrees with its model", m.property));
            }
            eta_by_property.insert(m.property.as_str(), m.eta);
        }
        if self.meta.eta.len() != self.models.len() {
            return fail("meta eta lists properties without models".into());
        }

        let mut seen_holds = BTreeSet::new();
        for (i, h) in self.holds.iter().enumerate() {
            if i > 0 && self.holds[i - 1] >= *h {
                return fail("holds entries are not sorted and unique".into());
            }
            if !instance_ids.contains(h.instance.as_str()) {
                return fail(format!("holds references unknown instance {}", h.instance));
            }
            match eta_by_property.get(h.symbol.property.as_str()) {
                Some(&eta) if h.symbol.index < eta => {}
                Some(_) => return fail(format!("holds references out-of-range symbol {}", h.symbol)),
                None => return fail(format!("holds references unmodelled property {}", h.symbol.property)),
            }
            if !seen_holds.insert((h.instance.as_str(), h.symbol.property.as_str())) {
                return fail(format!(
                    "instance {} holds two symbols for {}",
                    h.instance, h.symbol.property
                ));
            }
        }

        let mut sums: BTreeMap<(&str, &str), f64> = BTreeMap::new();
        for (i, c) in self.concepts.iter().enumerate() {
            if i > 0 {
                let p = &self.concepts[i - 1];
                if (&p.class, &p.symbol) >= (&c.class, &c.symbol) {
                    return fail("concepts are not sorted and unique".into());
                }
            }
            if !classes.contains(c.class.as_str()) {
                return fail(format!("concept references unknown class {}", c.class));
            }
            match eta_by_property.get(c.symbol.property.as_str()) {
                Some(&eta) if c.symbol.index < eta => {}
                _ => return fail(format!("concept references unknown symbol {}", c.symbol)),
            }
            if !c.measure.is_finite() || c.measure <= 0.0 || c.measure > 1.0 {
                return fail(format!(
                    "concept ({}, {}) has measure {} outside (0, 1]",
                    c.class, c.symbol, c.measure
                ));
            }
            *sums
                .entry((c.class.as_str(), c.symbol.property.as_str()))
                .or_default() += c.measure;
        }
        for ((class, property), sum) in sums {
            if (sum - 1.0).abs() > 1e-9 {
                return fail(format!(
                    "proportions for ({class}, {property}) sum to {sum}, expected 1"
                ));
            }
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let kb: KnowledgeBase = serde_json::from_str(s)?;
        kb.validate()?;
        Ok(kb)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string()?)
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_json_str(&text)
    }
}

/// One clustering level of the partition pyramid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PyramidCluster {
    pub centroid: Vec<f64>,
    pub total: usize,
    /// Class label histogram of the instances in the cluster.
    pub counts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PyramidLevel {
    pub k: usize,
    pub clusters: Vec<PyramidCluster>,
}

/// Re-clusters the same value vectors at every k in `ks`, reporting the
/// class composition of each cluster.
pub fn partition_pyramid(
    vectors: &[(String, Vec<f64>)],
    membership: &BTreeMap<String, String>,
    ks: RangeInclusive<usize>,
    seed: u64,
    max_iterations: usize,
) -> Result<Vec<PyramidLevel>> {
    let class_count = membership
        .values()
        .collect::<BTreeSet<_>>()
        .len();
    if *ks.start() < 2 || *ks.end() > class_count {
        return Err(Error::InvalidParameter(format!(
            "pyramid range {}..={} must lie within 2..={class_count}",
            ks.start(),
            ks.end()
        )));
    }
    let points: Vec<Vec<f64>> = vectors.iter().map(|(_, v)| v.clone()).collect();
    let mut levels = Vec::new();
    for k in ks {
        let model = kmeans(
            &points,
            &KMeansParams {
                k,
                max_iterations,
                seed: derive_seed_indexed(seed, "pyramid", k as u64),
            },
        )
        .map_err(|e| Error::Clustering(format!("pyramid k = {k}: {e}")))?;
        let mut clusters: Vec<PyramidCluster> = model
            .centroids
            .iter()
            .map(|c| PyramidCluster {
                centroid: c.clone(),
                total: 0,
                counts: BTreeMap::new(),
            })
            .collect();
        for ((instance, _), &cluster) in vectors.iter().zip(&model.assignments) {
            let class = membership.get(instance).ok_or_else(|| {
                Error::UnknownClass(format!("instance {instance} has no class"))
            })?;
            clusters[cluster].total += 1;
            *clusters[cluster].counts.entry(class.clone()).or_default() += 1;
        }
        levels.push(PyramidLevel { k, clusters });
    }
    Ok(levels)
}
