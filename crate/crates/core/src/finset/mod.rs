//! Finite gluing data: pieces are finite point sets, each pair of pieces
//! carries a partial bijection, and the glued space is the quotient of the
//! disjoint union by the equivalence relation those bijections generate.
//!
//! Topology is trivialized at this scale: closed subspaces become arbitrary
//! subsets and homeomorphisms become bijections. Function algebras on the
//! pieces turn a [`FiniteGluingSpec`] into a [`GluingFamily`] via
//! [`dualize`].

mod duality;
mod fixtures;
mod random;
mod union_find;

pub use duality::{duality_check, DualityReport, ExtensionDuality, ProjectionDuality};
pub use fixtures::{
    chain_points, fixture, tcirc_a, tcirc_c, tstar, Fixture, DEFAULT_CHAIN_LENGTH, FIXTURE_NAMES,
};
pub use random::{random_spec, RandomSpecParams};
pub use union_find::UnionFind;

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Algebra;
use crate::exactlin::MatrixQ;
use crate::multipullback::{FamilyBuilder, FamilyError, GluingFamily, PullbackError};

#[derive(Debug, Error)]
pub enum FinsetError {
    #[error("gluing spec has no pieces")]
    Empty,
    #[error("duplicate piece label {0:?}")]
    DuplicateLabel(String),
    #[error("piece {piece:?} lists point {point:?} twice")]
    DuplicatePoint { piece: String, point: String },
    #[error("unknown piece {0:?}")]
    UnknownPiece(String),
    #[error("piece {piece:?} has no point {point:?}")]
    UnknownPoint { piece: String, point: String },
    #[error("a piece cannot be identified with itself ({0:?})")]
    SelfPair(String),
    #[error("identification between {0:?} and {1:?} given twice")]
    DuplicatePair(String, String),
    #[error("identification between {a:?} and {b:?} is not a partial bijection: point {point:?} used twice")]
    NotPartialBijection { a: String, b: String, point: String },
    #[error("subset of pieces is empty")]
    EmptySubset,
    #[error("pieces {0:?} are not contained in the target subset")]
    NotSubset(Vec<String>),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Pullback(#[from] PullbackError),
}

/// Finite pieces with pairwise partial bijections. Identifications are
/// stored once per unordered pair `(i, j)` with `i < j`, as pairs
/// `(x ∈ X_i, y ∈ X_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGluingSpec {
    labels: Vec<String>,
    spaces: Vec<Vec<String>>,
    identifications: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

impl FiniteGluingSpec {
    pub fn new<S: Into<String>>(pieces: Vec<(S, Vec<String>)>) -> Result<Self, FinsetError> {
        if pieces.is_empty() {
            return Err(FinsetError::Empty);
        }
        let mut labels = Vec::new();
        let mut spaces = Vec::new();
        for (label, points) in pieces {
            let label = label.into();
            if labels.contains(&label) {
                return Err(FinsetError::DuplicateLabel(label));
            }
            for (n, p) in points.iter().enumerate() {
                if points[..n].contains(p) {
                    return Err(FinsetError::DuplicatePoint {
                        piece: label,
                        point: p.clone(),
                    });
                }
            }
            labels.push(label);
            spaces.push(points);
        }
        Ok(FiniteGluingSpec {
            labels,
            spaces,
            identifications: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn points(&self, i: usize) -> &[String] {
        &self.spaces[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn total_points(&self) -> usize {
        self.spaces.iter().map(Vec::len).sum()
    }

    /// Identified point pairs of `{i, j}`, oriented as `(x ∈ X_i, y ∈ X_j)`.
    pub fn identification(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let key = (i.min(j), i.max(j));
        let pairs = self.identifications.get(&key).cloned().unwrap_or_default();
        if i <= j {
            pairs
        } else {
            pairs.into_iter().map(|(x, y)| (y, x)).collect()
        }
    }

    pub(crate) fn identifications(&self) -> &BTreeMap<(usize, usize), Vec<(usize, usize)>> {
        &self.identifications
    }

    /// Identifies `X_i ∋ x ~ y ∈ X_j` for each listed pair (by index).
    pub fn identify_indices(
        &mut self,
        i: usize,
        j: usize,
        pairs: Vec<(usize, usize)>,
    ) -> Result<&mut Self, FinsetError> {
        let name = |k: usize| {
            self.labels
                .get(k)
                .cloned()
                .ok_or_else(|| FinsetError::UnknownPiece(format!("#{k}")))
        };
        let (a, b) = (name(i)?, name(j)?);
        if i == j {
            return Err(FinsetError::SelfPair(a));
        }
        for &(x, y) in &pairs {
            if x >= self.spaces[i].len() {
                return Err(FinsetError::UnknownPoint { piece: a, point: format!("#{x}") });
            }
            if y >= self.spaces[j].len() {
                return Err(FinsetError::UnknownPoint { piece: b, point: format!("#{y}") });
            }
        }
        for (n, &(x, y)) in pairs.iter().enumerate() {
            if pairs[..n].iter().any(|&(x2, _)| x2 == x) {
                let point = self.spaces[i][x].clone();
                return Err(FinsetError::NotPartialBijection { a, b, point });
            }
            if pairs[..n].iter().any(|&(_, y2)| y2 == y) {
                let point = self.spaces[j][y].clone();
                return Err(FinsetError::NotPartialBijection { a, b, point });
            }
        }
        let (key, oriented) = if i < j {
            ((i, j), pairs)
        } else {
            ((j, i), pairs.into_iter().map(|(x, y)| (y, x)).collect())
        };
        if self.identifications.contains_key(&key) {
            return Err(FinsetError::DuplicatePair(a, b));
        }
        self.identifications.insert(key, oriented);
        Ok(self)
    }

    /// Identifies points by label.
    pub fn identify(&mut self, a: &str, b: &str, pairs: &[(&str, &str)]) -> Result<&mut Self, FinsetError> {
        let i = self.index_of(a).ok_or_else(|| FinsetError::UnknownPiece(a.to_string()))?;
        let j = self.index_of(b).ok_or_else(|| FinsetError::UnknownPiece(b.to_string()))?;
        let point = |k: usize, p: &str| {
            self.spaces[k]
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| FinsetError::UnknownPoint {
                    piece: self.labels[k].clone(),
                    point: p.to_string(),
                })
        };
        let idx = pairs
            .iter()
            .map(|&(x, y)| Ok((point(i, x)?, point(j, y)?)))
            .collect::<Result<Vec<_>, FinsetError>>()?;
        self.identify_indices(i, j, idx)
    }

    fn normalize_subset(&self, subset: &[usize]) -> Result<Vec<usize>, FinsetError> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Err(FinsetError::EmptySubset);
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= self.len()) {
            return Err(FinsetError::UnknownPiece(format!("#{bad}")));
        }
        Ok(s)
    }

    pub fn point_name(&self, piece: usize, point: usize) -> String {
        format!("{}@{}", self.spaces[piece][point], self.labels[piece])
    }
}

/// The quotient of `⊔_{i∈K} X_i` by the identifications inside `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedSpace {
    pub over: Vec<usize>,
    /// Each class lists `(piece, point)` members in disjoint-union order.
    pub classes: Vec<Vec<(usize, usize)>>,
    /// `inclusion[s][x]` is the class of point `x` of piece `over[s]`.
    pub inclusion: Vec<Vec<usize>>,
    /// Number of union operations that merged two distinct classes.
    pub merges: usize,
}

impl GluedSpace {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, piece: usize, point: usize) -> Option<usize> {
        let s = self.over.iter().position(|&i| i == piece)?;
        self.inclusion[s].get(point).copied()
    }
}

pub fn glue(spec: &FiniteGluingSpec, subset: &[usize]) -> Result<GluedSpace, FinsetError> {
    let over = spec.normalize_subset(subset)?;
    let mut offsets = Vec::with_capacity(over.len());
    let mut total = 0;
    for &i in &over {
        offsets.push(total);
        total += spec.spaces[i].len();
    }
    let mut uf = UnionFind::new(total);
    let mut merges = 0;
    for (a, &i) in over.iter().enumerate() {
        for (b, &j) in over.iter().enumerate().skip(a + 1) {
            for (x, y) in spec.identification(i, j) {
                if uf.union(offsets[a] + x, offsets[b] + y) {
                    merges += 1;
                }
            }
        }
    }
    let mut class_of_root = BTreeMap::new();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut inclusion = Vec::with_capacity(over.len());
    for (s, &i) in over.iter().enumerate() {
        let mut inc = Vec::with_capacity(spec.spaces[i].len());
        for x in 0..spec.spaces[i].len() {
            let root = uf.find(offsets[s] + x);
            let c = *class_of_root.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push((i, x));
            inc.push(c);
        }
        inclusion.push(inc);
    }
    Ok(GluedSpace {
        over,
        classes,
        inclusion,
        merges,
    })
}

/// The canonical map `glue(K) -> glue(L)` for `K ⊆ L`, as class indices.
/// `None` if some `K`-class straddles two `L`-classes, which would mean the
/// map is not well defined.
pub fn canonical_map(small: &GluedSpace, big: &GluedSpace) -> Option<Vec<usize>> {
    small
        .classes
        .iter()
        .map(|members| {
            let mut targets = members.iter().map(|&(i, x)| big.class_of(i, x));
            let first = targets.next()??;
            targets.all(|t| t == Some(first)).then_some(first)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingVerdict {
    pub base: Vec<String>,
    pub into: Vec<String>,
    pub injective: bool,
    /// Pairs of distinct base classes that become one class in the target,
    /// each listed by its member points (`point@piece`).
    pub witnesses: Vec<[Vec<String>; 2]>,
}

/// Injectivity of `glue(K) -> glue(L)`.
pub fn check_embedding(
    spec: &FiniteGluingSpec,
    base: &[usize],
    into: &[usize],
) -> Result<EmbeddingVerdict, FinsetError> {
    let k = spec.normalize_subset(base)?;
    let l = spec.normalize_subset(into)?;
    let missing: Vec<String> = k
        .iter()
        .filter(|i| !l.contains(i))
        .map(|&i| spec.labels[i].clone())
        .collect();
    if !missing.is_empty() {
        return Err(FinsetError::NotSubset(missing));
    }
    let small = glue(spec, &k)?;
    let big = glue(spec, &l)?;
    let map = canonical_map(&small, &big).expect("gluing is monotone in the subset");
    let names = |c: usize| -> Vec<String> {
        small.classes[c]
            .iter()
            .map(|&(i, x)| spec.point_name(i, x))
            .collect()
    };
    let mut witnesses = Vec::new();
    let mut first_with_target: BTreeMap<usize, usize> = BTreeMap::new();
    for (c, &t) in map.iter().enumerate() {
        match first_with_target.get(&t) {
            Some(&prev) => witnesses.push([names(prev), names(c)]),
            None => {
                first_with_target.insert(t, c);
            }
        }
    }
    let label_list = |s: &[usize]| {
        let mut v: Vec<String> = s.iter().map(|&i| spec.labels[i].clone()).collect();
        v.sort();
        v
    };
    Ok(EmbeddingVerdict {
        base: label_list(&k),
        into: label_list(&l),
        injective: witnesses.is_empty(),
        witnesses,
    })
}

/// Function algebras on the pieces, restriction maps to the identified
/// subsets. `π^j_i` reads the same pairs from the `X_j` side, so both maps
/// land in one shared overlap algebra.
pub fn dualize(spec: &FiniteGluingSpec) -> Result<GluingFamily, FinsetError> {
    let mut b = FamilyBuilder::new(spec.labels.iter().cloned())?;
    for (i, label) in spec.labels.iter().enumerate() {
        b.piece(label, Algebra::function_algebra(format!("Q^{label}"), spec.spaces[i].len()))?;
    }
    let n = spec.len();
    for i in 0..n {
        for j in i + 1..n {
            let pairs = spec.identification(i, j);
            let (li, lj) = (&spec.labels[i], &spec.labels[j]);
            b.overlap(li, lj, Algebra::function_algebra(format!("Q^{{{li},{lj}}}"), pairs.len()))?;
            let mut from_i = MatrixQ::zeros(pairs.len(), spec.spaces[i].len());
            let mut from_j = MatrixQ::zeros(pairs.len(), spec.spaces[j].len());
            for (r, &(x, y)) in pairs.iter().enumerate() {
                from_i.set(r, x, One::one());
                from_j.set(r, y, One::one());
            }
            b.map(li, lj, from_i)?;
            b.map(lj, li, from_j)?;
        }
    }
    Ok(b.build()?)
}

#[cfg(test)]
mod tests;
