use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraHom, AlgebraViolation, HomViolation};
use crate::exactlin::MatrixQ;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("duplicate index label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown index label {0:?}")]
    UnknownLabel(String),
    #[error("pair ({0:?}, {0:?}) is not allowed; overlaps and maps need distinct indices")]
    SelfPair(String),
    #[error("no algebra given for piece {0:?}")]
    MissingPiece(String),
    #[error("no overlap algebra given for pair {{{0:?}, {1:?}}}")]
    MissingOverlap(String, String),
    #[error("no map given for {0:?} -> {1:?}")]
    MissingMap(String, String),
    #[error("{what} given twice")]
    Duplicate { what: String },
    #[error("algebra {label:?} violates an axiom: {violation}")]
    InvalidAlgebra {
        label: String,
        violation: AlgebraViolation,
    },
    #[error("map {from:?} -> {to:?} is not a unital homomorphism: {violation}")]
    InvalidHom {
        from: String,
        to: String,
        violation: HomViolation,
    },
    #[error("map {from:?} -> {to:?} is not surjective")]
    NotSurjective { from: String, to: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The family `{π^i_j: B_i -> B_ij = B_ji}` over a finite index set.
///
/// The overlap of an unordered pair is a single shared algebra used as the
/// target of both directed maps.
#[derive(Clone, PartialEq, Eq)]
pub struct GluingFamily {
    labels: Vec<String>,
    pieces: Vec<Arc<Algebra>>,
    overlaps: BTreeMap<(usize, usize), Arc<Algebra>>,
    maps: BTreeMap<(usize, usize), AlgebraHom>,
    surjective: bool,
}

impl GluingFamily {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn piece(&self, i: usize) -> &Algebra {
        &self.pieces[i]
    }

    pub fn piece_arc(&self, i: usize) -> &Arc<Algebra> {
        &self.pieces[i]
    }

    pub fn overlap(&self, i: usize, j: usize) -> &Arc<Algebra> {
        &self.overlaps[&(i.min(j), i.max(j))]
    }

    /// `π^i_j`.
    pub fn map(&self, i: usize, j: usize) -> &AlgebraHom {
        &self.maps[&(i, j)]
    }

    /// True when every map was checked to be surjective at construction.
    pub fn is_surjective_family(&self) -> bool {
        self.surjective
    }

    /// Indices sorted by label; every report enumerates in this order.
    pub fn ordered(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        idx
    }

    /// Ordered pairs `(i, j)` with `π^i_j` not surjective.
    pub fn non_surjective_maps(&self) -> Vec<(usize, usize)> {
        let order = self.ordered();
        let mut out = Vec::new();
        for &i in &order {
            for &j in &order {
                if i != j && !self.map(i, j).is_surjective() {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl fmt::Debug for GluingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GluingFamily")
            .field("labels", &self.labels)
            .field("piece_dims", &self.pieces.iter().map(|p| p.dim()).collect::<Vec<_>>())
            .finish()
    }
}

/// Assembles a [`GluingFamily`] by label.
#[derive(Debug, Clone)]
pub struct FamilyBuilder {
    labels: Vec<String>,
    pieces: Vec<Option<Arc<Algebra>>>,
    overlaps: BTreeMap<(usize, usize), Arc<Algebra>>,
    maps: BTreeMap<(usize, usize), MatrixQ>,
}

impl FamilyBuilder {
    pub fn new<I, S>(labels: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(FamilyError::EmptyIndexSet);
        }
        for (n, l) in labels.iter().enumerate() {
            if labels[..n].contains(l) {
                return Err(FamilyError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        Ok(FamilyBuilder {
            labels,
            pieces: vec![None; n],
            overlaps: BTreeMap::new(),
            maps: BTreeMap::new(),
        })
    }

    fn idx(&self, label: &str) -> Result<usize, FamilyError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| FamilyError::UnknownLabel(label.to_string()))
    }

    fn pair(&self, a: &str, b: &str) -> Result<(usize, usize), FamilyError> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        if i == j {
            return Err(FamilyError::SelfPair(a.to_string()));
        }
        Ok((i, j))
    }

    pub fn piece(&mut self, label: &str, algebra: impl Into<Arc<Algebra>>) -> Result<&mut Self, FamilyError> {
        let i = self.idx(label)?;
        if self.pieces[i].is_some() {
            return Err(FamilyError::Duplicate {
                what: format!("piece {label:?}"),
            });
        }
        self.pieces[i] = Some(algebra.into());
        Ok(self)
    }

    pub fn overlap(
        &mut self,
        a: &str,
        b: &str,
        algebra: impl Into<Arc<Algebra>>,
    ) -> Result<&mut Self, FamilyError> {
        let (i, j) = self.pair(a, b)?;
        let key = (i.min(j), i.max(j));
        if self.overlaps.insert(key, algebra.into()).is_some() {
            return Err(FamilyError::Duplicate {
                what: format!("overlap {{{a:?}, {b:?}}}"),
            });
        }
        Ok(self)
    }

    /// Sets `π^from_to` by its matrix.
    pub fn map(&mut self, from: &str, to: &str, matrix: MatrixQ) -> Result<&mut Self, FamilyError> {
        let key = self.pair(from, to)?;
        if self.maps.insert(key, matrix).is_some() {
            return Err(FamilyError::Duplicate {
                what: format!("map {from:?} -> {to:?}"),
            });
        }
        Ok(self)
    }

    /// Validates every algebra and map, including surjectivity.
    pub fn build(&self) -> Result<GluingFamily, FamilyError> {
        self.assemble(true)
    }

    /// Like [`FamilyBuilder::build`] but accepts non-surjective maps, so the
    /// distributivity check can report them. Checks that need surjectivity
    /// refuse such a family.
    pub fn build_allow_nonsurjective(&self) -> Result<GluingFamily, FamilyError> {
        self.assemble(false)
    }

    fn assemble(&self, require_surjective: bool) -> Result<GluingFamily, FamilyError> {
        let n = self.labels.len();
        let mut pieces = Vec::with_capacity(n);
        for (i, p) in self.pieces.iter().enumerate() {
            let p = p
                .clone()
                .ok_or_else(|| FamilyError::MissingPiece(self.labels[i].clone()))?;
            p.validate().map_err(|violation| FamilyError::InvalidAlgebra {
                label: p.label().to_string(),
                violation,
            })?;
            pieces.push(p);
        }
        let mut overlaps = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let o = self.overlaps.get(&(i, j)).cloned().ok_or_else(|| {
                    FamilyError::MissingOverlap(self.labels[i].clone(), self.labels[j].clone())
                })?;
                o.validate().map_err(|violation| FamilyError::InvalidAlgebra {
                    label: o.label().to_string(),
                    violation,
                })?;
                overlaps.insert((i, j), o);
            }
        }
        let mut maps = BTreeMap::new();
        let mut surjective = true;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (from, to) = (self.labels[i].clone(), self.labels[j].clone());
                let m = self
                    .maps
                    .get(&(i, j))
                    .cloned()
                    .ok_or_else(|| FamilyError::MissingMap(from.clone(), to.clone()))?;
                let hom = AlgebraHom::new(pieces[i].clone(), overlaps[&(i.min(j), i.max(j))].clone(), m)?;
                hom.validate().map_err(|violation| FamilyError::InvalidHom {
                    from: from.clone(),
                    to: to.clone(),
                    violation,
                })?;
                if !hom.is_surjective() {
                    if require_surjective {
                        return Err(FamilyError::NotSurjective { from, to });
                    }
                    surjective = false;
                }
                maps.insert((i, j), hom);
            }
        }
        Ok(GluingFamily {
            labels: self.labels.clone(),
            pieces,
            overlaps,
            maps,
            surjective,
        })
    }
}
