//! Object substitution: classes become vectors of concept proportions
//! over the shared symbol vocabulary, candidates are ranked by cosine
//! similarity against the missing class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knowledge::{KnowledgeBase, QualitySymbol};

/// All symbols of a knowledge base in (property, index) order. Every
/// class vector is laid out against this ordering, so two vectors from
/// the same base are always comparable component by component.
pub fn vocabulary(kb: &KnowledgeBase) -> Vec<QualitySymbol> {
    let mut symbols = Vec::new();
    for model in &kb.models {
        for index in 0..model.eta {
            symbols.push(QualitySymbol::new(model.property.clone(), index));
        }
    }
    symbols
}

/// Concept proportions of a class over the vocabulary, zero where the
/// class holds no instance of the symbol.
pub fn class_vector(kb: &KnowledgeBase, class: &str) -> Result<Vec<f64>> {
    if !kb.classes.iter().any(|c| c == class) {
        return Err(Error::UnknownClass(format!(
            "class {class:?} is not in the knowledge base"
        )));
    }
    let vocab = vocabulary(kb);
    let mut vector = vec![0.0; vocab.len()];
    for concept in &kb.concepts {
        if concept.class == class {
            if let Some(pos) = vocab.iter().position(|s| *s == concept.symbol) {
                vector[pos] = concept.measure;
            }
        }
    }
    Ok(vector)
}

/// Cosine similarity. Zero-length and zero-norm inputs compare as 0;
/// bitwise-equal nonzero vectors compare as exactly 1.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return 0.0;
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionQuery {
    /// The class to replace.
    pub missing: String,
    /// Candidate replacement classes.
    pub candidates: Vec<String>,
}

/// A query file holds one query object, a bare list, or `{"queries": [...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum QueryFile {
    Single(SubstitutionQuery),
    List(Vec<SubstitutionQuery>),
    Many { queries: Vec<SubstitutionQuery> },
}

impl QueryFile {
    pub fn into_queries(self) -> Vec<SubstitutionQuery> {
        match self {
            QueryFile::Single(q) => vec![q],
            QueryFile::List(queries) => queries,
            QueryFile::Many { queries } => queries,
        }
    }
}

pub fn parse_queries(text: &str) -> Result<Vec<SubstitutionQuery>> {
    let file: QueryFile = serde_json::from_str(text)?;
    Ok(file.into_queries())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub class: String,
    pub similarity: f64,
    /// Similarity meets the substitution threshold.
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionResult {
    pub missing: String,
    pub threshold: f64,
    /// Descending similarity, ties broken by class name.
    pub ranking: Vec<RankedCandidate>,
}

/// Ranks candidate replacements for a missing class.
pub fn substitute(
    kb: &KnowledgeBase,
    query: &SubstitutionQuery,
    threshold: f64,
) -> Result<SubstitutionResult> {
    if !threshold.is_finite() || !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidParameter(format!(
            "substitution threshold {threshold} outside [0, 1]"
        )));
    }
    if query.candidates.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "query for {:?} has no candidates",
            query.missing
        )));
    }
    let missing = class_vector(kb, &query.missing)?;
    let mut candidates = query.candidates.clone();
    candidates.sort();
    candidates.dedup();

    let mut ranking = Vec::with_capacity(candidates.len());
    for class in &candidates {
        let vector = class_vector(kb, class)?;
        let similarity = cosine(&missing, &vector);
        ranking.push(RankedCandidate {
            class: class.clone(),
            similarity,
            selected: similarity >= threshold,
        });
    }
    ranking.sort_by(|a, b| {
        b.similarity
            .partial_cmp(&a.similarity)
            .unwrap()
            .then_with(|| a.class.cmp(&b.class))
    });
    Ok(SubstitutionResult {
        missing: query.missing.clone(),
        threshold,
        ranking,
    })
}

pub fn results_to_json(results: &[SubstitutionResult]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(results)?;
    s.push('\n');
    Ok(s)
}

/// Similarity heat map: one row per query, one column per class in the
/// knowledge base, blank cells for classes outside the candidate set.
pub fn similarity_matrix_csv(kb: &KnowledgeBase, results: &[SubstitutionResult]) -> String {
    let mut out = String::from("missing_class");
    for class in &kb.classes {
        out.push(',');
        out.push_str(class);
    }
    out.push('\n');
    for result in results {
        out.push_str(&result.missing);
        for class in &kb.classes {
            out.push(',');
            if let Some(r) = result.ranking.iter().find(|r| &r.class == class) {
                out.push_str(&format!("{}", r.similarity));
            }
        }
        out.push('\n');
    }
    out
}
