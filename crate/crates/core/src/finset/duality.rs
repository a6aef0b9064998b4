//! Cross-checks between a gluing and its dual algebra family: pullback
//! dimension against class count, projection surjectivity against piece
//! embedding, and pairwise extension against partial-gluing embedding.

use serde::{Deserialize, Serialize};

use super::{check_embedding, dualize, glue, FiniteGluingSpec, FinsetError};
use crate::multipullback::{build_pullback, check_condition3, projection_surjective};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionDuality {
    pub piece: String,
    pub projection_surjective: bool,
    pub piece_embedded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDuality {
    pub base: Vec<String>,
    pub extend_by: String,
    pub extension_holds: bool,
    pub partial_gluing_embedded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub pullback_dim: usize,
    pub class_count: usize,
    pub projections: Vec<ProjectionDuality>,
    pub extensions: Vec<ExtensionDuality>,
    /// Human-readable description of every disagreement; empty when the two
    /// sides match.
    pub mismatches: Vec<String>,
}

impl DualityReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn duality_check(spec: &FiniteGluingSpec) -> Result<DualityReport, FinsetError> {
    let fam = dualize(spec)?;
    let all: Vec<usize> = (0..spec.len()).collect();
    let pullback = build_pullback(&fam, &all)?;
    let glued = glue(spec, &all)?;
    let mut mismatches = Vec::new();
    if pullback.dim() != glued.class_count() {
        mismatches.push(format!(
            "pullback dimension {} != class count {}",
            pullback.dim(),
            glued.class_count()
        ));
    }

    let mut order: Vec<usize> = all.clone();
    order.sort_by(|&a, &b| spec.labels()[a].cmp(&spec.labels()[b]));
    let mut projections = Vec::new();
    for &i in &order {
        let (onto, _) = projection_surjective(&pullback, i)?;
        let embedded = check_embedding(spec, &[i], &all)?.injective;
        if onto != embedded {
            mismatches.push(format!(
                "piece {}: projection surjective = {onto}, embedded = {embedded}",
                spec.labels()[i]
            ));
        }
        projections.push(ProjectionDuality {
            piece: spec.labels()[i].clone(),
            projection_surjective: onto,
            piece_embedded: embedded,
        });
    }

    let mut extensions = Vec::new();
    for v in check_condition3(&fam)? {
        let idx = |l: &str| spec.index_of(l).expect("dual family keeps labels");
        let base: Vec<usize> = v.base.iter().map(|l| idx(l)).collect();
        let mut target = base.clone();
        target.push(idx(&v.extend_by));
        let embedded = check_embedding(spec, &base, &target)?.injective;
        if v.holds != embedded {
            mismatches.push(format!(
                "extending {:?} by {}: extension = {}, partial gluing embedded = {embedded}",
                v.base, v.extend_by, v.holds
            ));
        }
        extensions.push(ExtensionDuality {
            base: v.base,
            extend_by: v.extend_by,
            extension_holds: v.holds,
            partial_gluing_embedded: embedded,
        });
    }

    Ok(DualityReport {
        pullback_dim: pullback.dim(),
        class_count: glued.class_count(),
        projections,
        extensions,
        mismatches,
    })
}
