use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::MatrixQ;
use super::rational::Rational;
use super::{check_dim, LinError};

/// A linear subspace of `Q^ambient_dim` in canonical form: the basis rows
/// are the nonzero rows of the reduced row-echelon form of any spanning set.
#[derive(Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: MatrixQ,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            basis: MatrixQ::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            basis: MatrixQ::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors, each of length `ambient_dim`.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self, LinError>
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let m = MatrixQ::from_rows(ambient_dim, vectors.into_iter().collect())?;
        Ok(rref(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Basis rows in reduced row-echelon form.
    pub fn basis(&self) -> &MatrixQ {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        self.basis.row_iter()
    }

    /// `v` minus its component along the basis, read off at the pivot
    /// columns. The residual vanishes exactly when `v` lies in the subspace.
    pub fn residual(&self, v: &[Rational]) -> Result<Vec<Rational>, LinError> {
        check_dim("subspace residual", self.ambient_dim, v.len())?;
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let coef = v[p].clone();
            if coef.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.basis.row(r)) {
                if !b.is_zero() {
                    *o -= &coef * b;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinError> {
        Ok(self.residual(v)?.iter().all(Zero::is_zero))
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace. For an RREF basis these are the entries of `v` at the
    /// pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> Result<bool, LinError> {
        check_dim("subspace containment", other.ambient_dim, self.ambient_dim)?;
        for v in self.vectors() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orthogonal complement with respect to the standard pairing; used to
    /// turn membership into a system of linear equations.
    pub fn annihilator(&self) -> SubspaceBasis {
        kernel(&self.basis)
    }
}

/// Hashes the shape and the last basis row only; equality still compares
/// every entry.
impl Hash for SubspaceBasis {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.pivots.hash(state);
        if let Some(r) = self.pivots.len().checked_sub(1) {
            self.basis.row(r).hash(state);
        }
    }
}

impl fmt::Debug for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}: {})", self.dim(), self.ambient_dim, self.basis)
    }
}

impl fmt::Display for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "{{0}} in Q^{}", self.ambient_dim)
        } else {
            write!(f, "span{} in Q^{}", self.basis, self.ambient_dim)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    dim: usize,
    basis: MatrixQ,
}

impl Serialize for SubspaceBasis {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient_dim,
            dim: self.dim(),
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceBasis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SubspaceRepr::deserialize(d)?;
        if repr.basis.cols() != repr.ambient_dim {
            return Err(D::Error::custom("basis width differs from ambient_dim"));
        }
        let s = rref(&repr.basis);
        if s.basis != repr.basis {
            return Err(D::Error::custom("basis is not in reduced row-echelon form"));
        }
        Ok(s)
    }
}

/// Canonical basis of the row space of `m`.
pub fn rref(m: &MatrixQ) -> SubspaceBasis {
    let mut work = m.clone();
    let pivots = work.reduce_in_place();
    let rank = pivots.len();
    let basis = work.select_rows(&(0..rank).collect::<Vec<_>>());
    SubspaceBasis {
        ambient_dim: m.cols(),
        basis,
        pivots,
    }
}

pub fn sum(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<SubspaceBasis, LinError> {
    check_dim("subspace sum", u.ambient_dim, v.ambient_dim)?;
    if u.is_zero() {
        return Ok(v.clone());
    }
    if v.is_zero() {
        return Ok(u.clone());
    }
    let (big, small) = if u.dim() >= v.dim() { (u, v) } else { (v, u) };
    let mut rest = Vec::new();
    for row in small.vectors() {
        let r = big.residual(row)?;
        if r.iter().any(|x| !x.is_zero()) {
            rest.push(r);
        }
    }
    if rest.is_empty() {
        return Ok(big.clone());
    }
    let extra = MatrixQ::from_rows(big.ambient_dim, rest)?;
    Ok(rref(&big.basis.vstack(&extra)?))
}

/// Intersection by the Zassenhaus block elimination on `[[U, U], [V, 0]]`.
/// The `U` rows are already reduced, so only the `V` rows are eliminated;
/// rows whose left half vanishes carry a basis of `U ∩ V` on the right.
pub fn intersect(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<SubspaceBasis, LinError> {
    check_dim("subspace intersection", u.ambient_dim, v.ambient_dim)?;
    let n = u.ambient_dim;
    if u.is_zero() || v.is_zero() {
        return Ok(SubspaceBasis::zero(n));
    }
    if u.is_full() {
        return Ok(v.clone());
    }
    if v.is_full() {
        return Ok(u.clone());
    }
    let mut rows = Vec::with_capacity(v.dim());
    for vr in v.vectors() {
        let mut row = vr.to_vec();
        row.resize(2 * n, Rational::zero());
        for (r, &p) in u.pivots.iter().enumerate() {
            let coef = row[p].clone();
            if coef.is_zero() {
                continue;
            }
            for (c, b) in u.basis.row(r).iter().enumerate() {
                if !b.is_zero() {
                    let d = &coef * b;
                    row[c] -= &d;
                    row[n + c] -= d;
                }
            }
        }
        rows.push(row);
    }
    let mut block = MatrixQ::from_rows(2 * n, rows)?;
    let pivots = block.reduce_in_place();
    let meet: Vec<Vec<Rational>> = pivots
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= n)
        .map(|(r, _)| block.row(r)[n..].to_vec())
        .collect();
    SubspaceBasis::span(n, meet)
}

/// Span of `f` applied to the basis of `u`.
pub fn image(f: &MatrixQ, u: &SubspaceBasis) -> Result<SubspaceBasis, LinError> {
    check_dim("image domain", f.cols(), u.ambient_dim)?;
    // Row r of U * f^T is f(u_r).
    let rows = u.basis.mul(&f.transpose())?;
    Ok(rref(&rows))
}

/// Null space of `f`, as a subspace of its domain.
pub fn kernel(f: &MatrixQ) -> SubspaceBasis {
    let n = f.cols();
    let mut work = f.clone();
    let pivots = work.reduce_in_place();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..n).filter(|&c| !is_pivot[c]).map(|free| {
        let mut x = vec![Rational::zero(); n];
        x[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = -work.get(r, free).clone();
        }
        x
    });
    SubspaceBasis::span(n, vectors).expect("kernel vectors have domain length")
}

/// `{x : f(x) ∈ v}`.
pub fn preimage(f: &MatrixQ, v: &SubspaceBasis) -> Result<SubspaceBasis, LinError> {
    check_dim("preimage codomain", f.rows(), v.ambient_dim)?;
    let ann = v.annihilator();
    if ann.is_zero() {
        return Ok(SubspaceBasis::full(f.cols()));
    }
    Ok(kernel(&ann.basis.mul(f)?))
}

/// Some solution of `a x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &MatrixQ, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinError> {
    check_dim("linear system right-hand side", a.rows(), b.len())?;
    let n = a.cols();
    let rhs = MatrixQ::from_rows(1, b.iter().map(|x| vec![x.clone()]).collect())?;
    let mut aug = a.hstack(&rhs)?;
    let pivots = aug.reduce_in_place();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug.get(r, n).clone();
    }
    Ok(Some(x))
}

/// Coordinates on `Q^n / v`, using the non-pivot coordinates of `v`'s
/// canonical basis as the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientChart {
    pub subspace: SubspaceBasis,
    /// Ambient coordinates that serve as quotient coordinates, ascending.
    pub chart: Vec<usize>,
    /// `(n - dim v) x n`; kills `v`.
    pub projection: MatrixQ,
    /// `n x (n - dim v)`; `projection * section = identity`.
    pub section: MatrixQ,
}

impl QuotientChart {
    pub fn dim(&self) -> usize {
        self.chart.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim
    }
}

pub fn quotient(ambient_dim: usize, v: &SubspaceBasis) -> Result<QuotientChart, LinError> {
    check_dim("quotient", ambient_dim, v.ambient_dim)?;
    let n = ambient_dim;
    let mut is_pivot = vec![false; n];
    for &p in &v.pivots {
        is_pivot[p] = true;
    }
    let chart: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let q = chart.len();
    // Reducing x modulo v subtracts x[p_r] * row_r, after which the chart
    // coordinates are the quotient coordinates.
    let mut projection = MatrixQ::zeros(q, n);
    let mut section = MatrixQ::zeros(n, q);
    for (t, &c) in chart.iter().enumerate() {
        projection.set(t, c, Rational::one());
        section.set(c, t, Rational::one());
        for (r, &p) in v.pivots.iter().enumerate() {
            let entry = v.basis.get(r, c);
            if !entry.is_zero() {
                projection.set(t, p, -entry.clone());
            }
        }
    }
    Ok(QuotientChart {
        subspace: v.clone(),
        chart,
        projection,
        section,
    })
}
