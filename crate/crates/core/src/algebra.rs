//! Finite-dimensional unital associative algebras over Q, given by structure
//! constants, together with homomorphisms, two-sided ideals and quotients.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{self, LinError, MatrixQ, Rational, SubspaceBasis};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("algebra {label:?}: structure constants have {found} entries, expected {dim}^3")]
    ConstantsShape {
        label: String,
        dim: usize,
        found: usize,
    },
    #[error("algebra {label:?}: unit has length {found}, expected {dim}")]
    UnitShape {
        label: String,
        dim: usize,
        found: usize,
    },
    #[error("homomorphism {source_label} -> {target_label}: matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    HomShape {
        source_label: String,
        target_label: String,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("subspace is not a two-sided ideal of {0:?}")]
    NotAnIdeal(String),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// A failed algebra axiom, naming the basis elements involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    NotAssociative { a: usize, b: usize, c: usize },
    LeftUnit { basis: usize },
    RightUnit { basis: usize },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::NotAssociative { a, b, c } => {
                write!(f, "(e{a}*e{b})*e{c} != e{a}*(e{b}*e{c})")
            }
            AlgebraViolation::LeftUnit { basis } => write!(f, "unit*e{basis} != e{basis}"),
            AlgebraViolation::RightUnit { basis } => write!(f, "e{basis}*unit != e{basis}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    NotMultiplicative { a: usize, b: usize },
    NotUnital,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::NotMultiplicative { a, b } => {
                write!(f, "f(e{a}*e{b}) != f(e{a})*f(e{b})")
            }
            HomViolation::NotUnital => write!(f, "f(1) != 1"),
        }
    }
}

/// `e_a * e_b = Σ_c constants[a][b][c] e_c`, stored flat.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    label: String,
    dim: usize,
    constants: Vec<Rational>,
    unit: Vec<Rational>,
}

impl Algebra {
    /// Shape-checks the data. Axioms are checked separately by
    /// [`Algebra::validate`].
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        constants: Vec<Rational>,
        unit: Vec<Rational>,
    ) -> Result<Self, AlgebraError> {
        let label = label.into();
        if constants.len() != dim * dim * dim {
            return Err(AlgebraError::ConstantsShape {
                label,
                dim,
                found: constants.len(),
            });
        }
        if unit.len() != dim {
            return Err(AlgebraError::UnitShape {
                label,
                dim,
                found: unit.len(),
            });
        }
        Ok(Algebra {
            label,
            dim,
            constants,
            unit,
        })
    }

    /// Functions on an `n`-point set with pointwise product.
    pub fn function_algebra(label: impl Into<String>, n: usize) -> Self {
        let mut constants = vec![Rational::zero(); n * n * n];
        for a in 0..n {
            constants[(a * n + a) * n + a] = Rational::one();
        }
        Algebra {
            label: label.into(),
            dim: n,
            constants,
            unit: vec![Rational::one(); n],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn constant(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.constants[(a * self.dim + b) * self.dim + c]
    }

    /// Coordinates of `e_a * e_b`.
    pub fn basis_product(&self, a: usize, b: usize) -> &[Rational] {
        let start = (a * self.dim + b) * self.dim;
        &self.constants[start..start + self.dim]
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coef = xa * yb;
                for (o, c) in out.iter_mut().zip(self.basis_product(a, b)) {
                    if !c.is_zero() {
                        *o += &coef * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, a: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[a] = Rational::one();
        v
    }

    /// Checks associativity on all basis triples and the two unit laws.
    pub fn validate(&self) -> Result<(), AlgebraViolation> {
        let n = self.dim;
        for a in 0..n {
            let ea = self.basis_vector(a);
            if self.mul(&self.unit, &ea) != ea {
                return Err(AlgebraViolation::LeftUnit { basis: a });
            }
            if self.mul(&ea, &self.unit) != ea {
                return Err(AlgebraViolation::RightUnit { basis: a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.basis_product(a, b).to_vec();
                for c in 0..n {
                    let left = self.mul(&ab, &self.basis_vector(c));
                    let right = self.mul(&self.basis_vector(a), self.basis_product(b, c));
                    if left != right {
                        return Err(AlgebraViolation::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({:?}, dim {})", self.label, self.dim)
    }
}

/// `validate_algebra` as a free function.
pub fn validate_algebra(a: &Algebra) -> Result<(), AlgebraViolation> {
    a.validate()
}

/// A linear map between algebras, `target.dim x source.dim`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraHom {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    matrix: MatrixQ,
}

impl AlgebraHom {
    pub fn new(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        matrix: MatrixQ,
    ) -> Result<Self, AlgebraError> {
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(AlgebraError::HomShape {
                source_label: source.label.clone(),
                target_label: target.label.clone(),
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: target.dim,
                expected_cols: source.dim,
            });
        }
        Ok(AlgebraHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(a: Arc<Algebra>) -> Self {
        let m = MatrixQ::identity(a.dim);
        AlgebraHom {
            source: a.clone(),
            target: a,
            matrix: m,
        }
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn matrix(&self) -> &MatrixQ {
        &self.matrix
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>, LinError> {
        self.matrix.apply(x)
    }

    /// Checks `f(e_a e_b) = f(e_a) f(e_b)` on basis pairs and `f(1) = 1`.
    pub fn validate(&self) -> Result<(), HomViolation> {
        let images: Vec<Vec<Rational>> =
            (0..self.source.dim).map(|a| self.matrix.column(a)).collect();
        for a in 0..self.source.dim {
            for b in 0..self.source.dim {
                let lhs = self
                    .matrix
                    .apply(self.source.basis_product(a, b))
                    .expect("shape checked at construction");
                let rhs = self.target.mul(&images[a], &images[b]);
                if lhs != rhs {
                    return Err(HomViolation::NotMultiplicative { a, b });
                }
            }
        }
        let u = self.matrix.apply(&self.source.unit).expect("shape checked");
        if u != self.target.unit {
            return Err(HomViolation::NotUnital);
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim
    }

    pub fn kernel(&self) -> SubspaceBasis {
        exactlin::kernel(&self.matrix)
    }

    /// The kernel as an ideal of the source. Homomorphism kernels are always
    /// ideals; the check guards against an unvalidated map.
    pub fn kernel_ideal(&self) -> IdealWitness {
        let k = self.kernel();
        assert!(
            is_ideal(&self.source, &k),
            "kernel of a homomorphism out of {:?} is not an ideal",
            self.source.label
        );
        IdealWitness { subspace: k }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AlgebraHom) -> Result<AlgebraHom, AlgebraError> {
        let m = next.matrix.mul(&self.matrix)?;
        AlgebraHom::new(self.source.clone(), next.target.clone(), m)
    }
}

impl fmt::Debug for AlgebraHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AlgebraHom({:?} -> {:?}: {})",
            self.source.label, self.target.label, self.matrix
        )
    }
}

pub fn validate_hom(f: &AlgebraHom) -> Result<(), HomViolation> {
    f.validate()
}

pub fn is_surjective(f: &AlgebraHom) -> bool {
    f.is_surjective()
}

/// A subspace known to be a two-sided ideal of some algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealWitness {
    subspace: SubspaceBasis,
}

impl IdealWitness {
    pub fn new(a: &Algebra, s: SubspaceBasis) -> Result<Self, AlgebraError> {
        if s.ambient_dim() != a.dim || !is_ideal(a, &s) {
            return Err(AlgebraError::NotAnIdeal(a.label.clone()));
        }
        Ok(IdealWitness { subspace: s })
    }

    pub fn subspace(&self) -> &SubspaceBasis {
        &self.subspace
    }

    pub fn into_subspace(self) -> SubspaceBasis {
        self.subspace
    }
}

/// Two-sided ideal test: `e_a s ⊆ s` and `s e_a ⊆ s` for every basis `e_a`.
pub fn is_ideal(a: &Algebra, s: &SubspaceBasis) -> bool {
    if s.ambient_dim() != a.dim {
        return false;
    }
    for v in s.vectors() {
        for b in 0..a.dim {
            let eb = a.basis_vector(b);
            let left = a.mul(&eb, v);
            let right = a.mul(v, &eb);
            if !s.contains(&left).unwrap_or(false) || !s.contains(&right).unwrap_or(false) {
                return false;
            }
        }
    }
    true
}

pub fn kernel_ideal(f: &AlgebraHom) -> IdealWitness {
    f.kernel_ideal()
}

/// `a / ideal`, with coordinates from the ideal's quotient chart, and the
/// canonical surjection onto it.
pub fn quotient_algebra(
    a: &Arc<Algebra>,
    ideal: &IdealWitness,
    label: impl Into<String>,
) -> Result<(Arc<Algebra>, AlgebraHom), AlgebraError> {
    if ideal.subspace.ambient_dim() != a.dim {
        return Err(AlgebraError::NotAnIdeal(a.label.clone()));
    }
    let chart = exactlin::quotient(a.dim, &ideal.subspace)?;
    let q = chart.dim();
    let lifts: Vec<Vec<Rational>> = (0..q).map(|t| chart.section.column(t)).collect();
    let mut constants = Vec::with_capacity(q * q * q);
    for s in &lifts {
        for t in &lifts {
            let prod = a.mul(s, t);
            constants.extend(chart.projection.apply(&prod)?);
        }
    }
    let unit = chart.projection.apply(&a.unit)?;
    let quotient = Arc::new(Algebra::new(label, q, constants, unit)?);
    let surjection = AlgebraHom::new(a.clone(), quotient.clone(), chart.projection)?;
    Ok((quotient, surjection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::int;

    fn vecq(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn from_table(label: &str, dim: usize, table: &[(usize, usize, &[i64])], unit: &[i64]) -> Algebra {
        let mut constants = vec![Rational::zero(); dim * dim * dim];
        for &(a, b, coords) in table {
            for (c, &v) in coords.iter().enumerate() {
                constants[(a * dim + b) * dim + c] = int(v);
            }
        }
        Algebra::new(label, dim, constants, vecq(unit)).unwrap()
    }

    /// Upper-triangular 2x2 matrices with basis E11, E12, E22.
    fn upper_triangular() -> Algebra {
        from_table(
            "T2",
            3,
            &[
                (0, 0, &[1, 0, 0]),
                (0, 1, &[0, 1, 0]),
                (1, 2, &[0, 1, 0]),
                (2, 2, &[0, 0, 1]),
            ],
            &[1, 0, 1],
        )
    }

    #[test]
    fn validate_algebra_examples() {
        assert_eq!(Algebra::function_algebra("Q3", 3).validate(), Ok(()));
        // e_a e_b = e_a: associative, but no two-sided unit exists.
        let left_zero = from_table(
            "L",
            2,
            &[(0, 0, &[1, 0]), (0, 1, &[1, 0]), (1, 0, &[0, 1]), (1, 1, &[0, 1])],
            &[1, 0],
        );
        assert!(matches!(
            left_zero.validate(),
            Err(AlgebraViolation::LeftUnit { .. } | AlgebraViolation::RightUnit { .. })
        ));
        assert_eq!(upper_triangular().validate(), Ok(()));
    }

    #[test]
    fn upper_triangular_matches_matrix_multiplication() {
        // Enumerate basis products by multiplying explicit 2x2 matrices.
        let mats = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]];
        let t = upper_triangular();
        for a in 0..3 {
            for b in 0..3 {
                let mut p = [[0i64; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        p[i][j] = (0..2).map(|k| mats[a][i][k] * mats[b][k][j]).sum();
                    }
                }
                let expected = vecq(&[p[0][0], p[0][1], p[1][1]]);
                assert_eq!(t.basis_product(a, b), expected.as_slice(), "e{a}*e{b}");
            }
        }
    }

    #[test]
    fn non_associative_reported_with_triple() {
        // Unit e0; x = e1, y = e2 with x*x = y, y*x = y, x*y = 0:
        // (x x) x = y but x (x x) = 0.
        let a = from_table(
            "N",
            3,
            &[
                (0, 0, &[1, 0, 0]),
                (0, 1, &[0, 1, 0]),
                (0, 2, &[0, 0, 1]),
                (1, 0, &[0, 1, 0]),
                (2, 0, &[0, 0, 1]),
                (1, 1, &[0, 0, 1]),
                (2, 1, &[0, 0, 1]),
            ],
            &[1, 0, 0],
        );
        assert_eq!(
            a.validate(),
            Err(AlgebraViolation::NotAssociative { a: 1, b: 1, c: 1 })
        );
    }

    fn eval(points: usize, at: &[usize]) -> AlgebraHom {
        let src = Arc::new(Algebra::function_algebra("Q^X", points));
        let tgt = Arc::new(Algebra::function_algebra("Q^Y", at.len()));
        let mut m = MatrixQ::zeros(at.len(), points);
        for (r, &p) in at.iter().enumerate() {
            m.set(r, p, Rational::one());
        }
        AlgebraHom::new(src, tgt, m).unwrap()
    }

    #[test]
    fn validate_hom_examples() {
        assert_eq!(eval(3, &[2]).validate(), Ok(()));
        assert_eq!(eval(3, &[0, 2]).validate(), Ok(()));
        let src = Arc::new(Algebra::function_algebra("Q3", 3));
        let tgt = Arc::new(Algebra::function_algebra("Q1", 1));
        let zero = AlgebraHom::new(src.clone(), tgt.clone(), MatrixQ::zeros(1, 3)).unwrap();
        assert_eq!(zero.validate(), Err(HomViolation::NotUnital));
        assert!(AlgebraHom::new(src, tgt, MatrixQ::zeros(2, 3)).is_err());
    }

    #[test]
    fn surjectivity() {
        let q3 = Arc::new(Algebra::function_algebra("Q3", 3));
        assert!(AlgebraHom::identity(q3).is_surjective());
        assert!(eval(3, &[2]).is_surjective());
        let q1 = Arc::new(Algebra::function_algebra("Q", 1));
        let q2 = Arc::new(Algebra::function_algebra("Q2", 2));
        let diag = AlgebraHom::new(q1, q2, MatrixQ::from_i64(1, &[&[1], &[1]])).unwrap();
        assert_eq!(diag.validate(), Ok(()));
        assert!(!diag.is_surjective());
    }

    #[test]
    fn ideal_examples() {
        let q3 = Algebra::function_algebra("Q3", 3);
        assert!(is_ideal(&q3, &SubspaceBasis::zero(3)));
        let ker = eval(3, &[2]).kernel_ideal();
        assert_eq!(ker.subspace().dim(), 2);
        let s = |rows: &[&[i64]]| SubspaceBasis::span(3, rows.iter().map(|r| vecq(r))).unwrap();
        assert!(is_ideal(&q3, &s(&[&[1, 0, 0]])));
        assert!(!is_ideal(&q3, &s(&[&[1, 1, 0]])));
        assert!(IdealWitness::new(&q3, s(&[&[1, 1, 0]])).is_err());
        // Strictly upper part is an ideal of T2; the diagonal E11 is not.
        let t = upper_triangular();
        assert!(is_ideal(&t, &s(&[&[0, 1, 0]])));
        assert!(!is_ideal(&t, &s(&[&[1, 0, 0]])));
    }

    #[test]
    fn quotient_examples() {
        let q3 = Arc::new(Algebra::function_algebra("Q3", 3));
        let zero = IdealWitness::new(&q3, SubspaceBasis::zero(3)).unwrap();
        let (a, f) = quotient_algebra(&q3, &zero, "copy").unwrap();
        assert_eq!(a.dim(), 3);
        assert!(f.is_surjective() && f.kernel().is_zero());

        let ker = eval(3, &[2]).kernel_ideal();
        let (a, f) = quotient_algebra(&q3, &ker, "Q").unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.validate(), Ok(()));
        assert_eq!(f.validate(), Ok(()));
        assert_eq!(&f.kernel(), ker.subspace());
        assert_eq!(f.matrix(), &MatrixQ::from_i64(3, &[&[0, 0, 1]]));

        let full = IdealWitness::new(&q3, SubspaceBasis::full(3)).unwrap();
        let (a, f) = quotient_algebra(&q3, &full, "0").unwrap();
        assert_eq!(a.dim(), 0);
        assert_eq!(a.validate(), Ok(()));
        assert_eq!(f.validate(), Ok(()));

        let t = Arc::new(upper_triangular());
        let rad = IdealWitness::new(&t, SubspaceBasis::span(3, [vecq(&[0, 1, 0])]).unwrap()).unwrap();
        let (a, f) = quotient_algebra(&t, &rad, "T2/rad").unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.validate(), Ok(()));
        assert_eq!(f.validate(), Ok(()));
    }
}
