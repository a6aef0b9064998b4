//! Families of surjections `π^i_j: B_i -> B_ij`, their multi-pullbacks, the
//! cocycle condition, the extension properties it is equivalent to, and the
//! canonical re-presentation that repairs a failing family.

mod cocycle;
mod extension;
mod family;
mod repair;
mod theorem;

pub use cocycle::{
    build_triple_quotients, check_cocycle, Condition1Entry, Condition2Entry, Condition2Verdict,
    CocycleReport, TripleQuotientData, CODOMAIN_READING,
};
pub use extension::{
    check_condition2, check_condition3, find_extension, is_compatible, ComponentValue,
    ExtensionVerdict,
};
pub use family::{FamilyBuilder, FamilyError, GluingFamily};
pub use repair::{repair, RepairError, RepairedFamily};
pub use theorem::{check_theorem_equivalence, TheoremError, TheoremReport};

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraHom};
use crate::exactlin::{self, LinError, MatrixQ, Rational, SubspaceBasis};
use crate::lattice::DEFAULT_CAP;

pub const DEFAULT_MAX_J: usize = 8;

/// Knobs shared by the family-level checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Lattice closure cap.
    pub cap: usize,
    /// Largest index set for which every `(K, k)` extension is enumerated.
    pub max_j: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            cap: DEFAULT_CAP,
            max_j: DEFAULT_MAX_J,
        }
    }
}

#[derive(Debug, Error)]
pub enum PullbackError {
    #[error("pullback requested over an empty set of pieces")]
    EmptySubset,
    #[error("piece index {0} out of range")]
    UnknownIndex(usize),
    #[error("index set has {size} pieces; enumerating every (K, k) is capped at {bound}")]
    TooManyPieces { size: usize, bound: usize },
    #[error("multi-pullback over {0:?} is not closed under the componentwise product")]
    NotClosed(Vec<String>),
    #[error("multi-pullback over {0:?} does not contain the unit tuple")]
    MissingUnit(Vec<String>),
    #[error("pushed-forward kernel {0} is not an ideal of the overlap")]
    PushedKernelNotIdeal(String),
    #[error("induced map for triple {0} is not invertible; input family is corrupt")]
    SingularTripleIso(String),
    #[error("induced map for triple {0} does not commute with the canonical surjections")]
    TripleIsoMismatch(String),
    #[error("family map {from} -> {to} is not surjective")]
    NotSurjective { from: String, to: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// The multi-pullback over a subset `K` of the index set, as a subspace of
/// `⊕_{i∈K} B_i` with the componentwise product.
#[derive(Debug, Clone)]
pub struct MultiPullback {
    over: Vec<usize>,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    subspace: SubspaceBasis,
    algebra: Arc<Algebra>,
    projections: Vec<AlgebraHom>,
}

impl MultiPullback {
    /// Piece indices, ascending.
    pub fn over(&self) -> &[usize] {
        &self.over
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn subspace(&self) -> &SubspaceBasis {
        &self.subspace
    }

    /// The pullback as an algebra, in the coordinates of its canonical basis.
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    fn slot(&self, piece: usize) -> Option<usize> {
        self.over.iter().position(|&i| i == piece)
    }

    /// Coordinate projection onto `B_piece`.
    pub fn projection(&self, piece: usize) -> Option<&AlgebraHom> {
        self.slot(piece).map(|s| &self.projections[s])
    }

    /// The `piece` block of an ambient tuple.
    pub fn component<'a>(&self, tuple: &'a [Rational], piece: usize) -> Option<&'a [Rational]> {
        let s = self.slot(piece)?;
        Some(&tuple[self.offsets[s]..self.offsets[s] + self.dims[s]])
    }

    /// Image of the pullback in `⊕_{i∈sub} B_i`; `sub` must be contained in
    /// `over` and is taken in ascending order.
    pub fn project_onto(&self, sub: &[usize]) -> Result<SubspaceBasis, PullbackError> {
        let mut sub = sub.to_vec();
        sub.sort_unstable();
        sub.dedup();
        let mut cols = Vec::new();
        for &i in &sub {
            let s = self.slot(i).ok_or(PullbackError::UnknownIndex(i))?;
            cols.extend(self.offsets[s]..self.offsets[s] + self.dims[s]);
        }
        Ok(exactlin::rref(&self.subspace.basis().select_columns(&cols)))
    }

    /// Pulls an ambient tuple into pullback coordinates, if it belongs.
    pub fn coordinates(&self, tuple: &[Rational]) -> Result<Option<Vec<Rational>>, LinError> {
        self.subspace.coordinates(tuple)
    }
}

/// `B^π` over `K`: the joint kernel of `(b_i) ↦ π^i_j(b_i) - π^j_i(b_j)` for
/// all pairs in `K`. The unit tuple and closure under the product are
/// checked on every build.
pub fn build_pullback(fam: &GluingFamily, over: &[usize]) -> Result<MultiPullback, PullbackError> {
    let mut over = over.to_vec();
    over.sort_unstable();
    over.dedup();
    if over.is_empty() {
        return Err(PullbackError::EmptySubset);
    }
    if let Some(&bad) = over.iter().find(|&&i| i >= fam.len()) {
        return Err(PullbackError::UnknownIndex(bad));
    }
    let dims: Vec<usize> = over.iter().map(|&i| fam.piece(i).dim()).collect();
    let mut offsets = Vec::with_capacity(over.len());
    let mut total = 0;
    for d in &dims {
        offsets.push(total);
        total += d;
    }

    let pairs: Vec<(usize, usize)> = (0..over.len())
        .flat_map(|a| (a + 1..over.len()).map(move |b| (a, b)))
        .collect();
    let rows: usize = pairs
        .iter()
        .map(|&(a, b)| fam.overlap(over[a], over[b]).dim())
        .sum();
    let mut constraints = MatrixQ::zeros(rows, total);
    let mut row = 0;
    for &(a, b) in &pairs {
        let (i, j) = (over[a], over[b]);
        constraints.paste(row, offsets[a], fam.map(i, j).matrix());
        constraints.paste(row, offsets[b], &fam.map(j, i).matrix().neg());
        row += fam.overlap(i, j).dim();
    }
    let subspace = exactlin::kernel(&constraints);

    let names: Vec<String> = over.iter().map(|&i| fam.label(i).to_string()).collect();
    let label = format!("B^pi[{}]", names.join(","));
    let tuple_mul = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        let mut out = Vec::with_capacity(total);
        for (s, &i) in over.iter().enumerate() {
            let r = offsets[s]..offsets[s] + dims[s];
            out.extend(fam.piece(i).mul(&x[r.clone()], &y[r]));
        }
        out
    };

    let m = subspace.dim();
    let basis: Vec<&[Rational]> = subspace.vectors().collect();
    let mut constants = Vec::with_capacity(m * m * m);
    for x in &basis {
        for y in &basis {
            let prod = tuple_mul(x, y);
            let coords = subspace
                .coordinates(&prod)?
                .ok_or_else(|| PullbackError::NotClosed(names.clone()))?;
            constants.extend(coords);
        }
    }
    let unit_tuple: Vec<Rational> = over
        .iter()
        .flat_map(|&i| fam.piece(i).unit().iter().cloned())
        .collect();
    let unit = subspace
        .coordinates(&unit_tuple)?
        .ok_or_else(|| PullbackError::MissingUnit(names.clone()))?;
    let algebra = Arc::new(Algebra::new(label, m, constants, unit)?);

    let mut projections = Vec::with_capacity(over.len());
    for (s, &i) in over.iter().enumerate() {
        let cols: Vec<usize> = (offsets[s]..offsets[s] + dims[s]).collect();
        let proj = subspace.basis().select_columns(&cols).transpose();
        projections.push(AlgebraHom::new(algebra.clone(), fam.piece_arc(i).clone(), proj)?);
    }

    Ok(MultiPullback {
        over,
        offsets,
        dims,
        subspace,
        algebra,
        projections,
    })
}

/// Whether the projection `B^π -> B_i` is onto, with its image attached.
pub fn projection_surjective(
    p: &MultiPullback,
    piece: usize,
) -> Result<(bool, SubspaceBasis), PullbackError> {
    let proj = p.projection(piece).ok_or(PullbackError::UnknownIndex(piece))?;
    let image = exactlin::image(proj.matrix(), &SubspaceBasis::full(p.dim()))?;
    Ok((image.is_full(), image))
}

/// Memoized pullbacks keyed by the ascending index subset.
#[derive(Debug, Default)]
pub struct PullbackCache {
    built: HashMap<Vec<usize>, MultiPullback>,
}

impl PullbackCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, fam: &GluingFamily, over: &[usize]) -> Result<&MultiPullback, PullbackError> {
        let mut key = over.to_vec();
        key.sort_unstable();
        key.dedup();
        if !self.built.contains_key(&key) {
            let p = build_pullback(fam, &key)?;
            self.built.insert(key.clone(), p);
        }
        Ok(&self.built[&key])
    }
}
