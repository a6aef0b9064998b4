//! The cocycle condition: equality of pushed-forward kernels and the
//! composition law for the induced quotient isomorphisms.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GluingFamily, PullbackError};
use crate::algebra::{quotient_algebra, Algebra, AlgebraHom, IdealWitness};
use crate::exactlin::{self, MatrixQ, SubspaceBasis};

/// How the codomain of `π^{ij}_k` is read. The formula
/// `[b_i] ↦ π^i_j(b_i) + π^i_j(ker π^i_k)` lands in cosets inside the
/// overlap, so the codomain is taken to be the overlap quotient.
pub const CODOMAIN_READING: &str =
    "pi^{ij}_k maps B_i/(ker pi^i_j + ker pi^i_k) to B_ij/pi^i_j(ker pi^i_k)";

/// Quotients attached to an ordered triple `(i, j, k)`.
#[derive(Debug, Clone)]
pub struct TripleQuotientData {
    pub triple: (usize, usize, usize),
    /// `B^i_{jk} = B_i / (ker π^i_j + ker π^i_k)`.
    pub reduced: Arc<Algebra>,
    /// `[·]^i_{jk}: B_i -> B^i_{jk}`.
    pub bracket: AlgebraHom,
    /// `π^i_j(ker π^i_k)`, an ideal of `B_ij`.
    pub pushed_kernel: SubspaceBasis,
    /// `B_ij / π^i_j(ker π^i_k)`.
    pub overlap_quotient: Arc<Algebra>,
    pub overlap_surjection: AlgebraHom,
    /// `π^{ij}_k: B^i_{jk} -> B_ij / π^i_j(ker π^i_k)`.
    pub iso: MatrixQ,
    pub iso_inverse: MatrixQ,
}

fn triple_name(fam: &GluingFamily, (i, j, k): (usize, usize, usize)) -> String {
    format!("({},{},{})", fam.label(i), fam.label(j), fam.label(k))
}

pub fn build_triple_quotients(
    fam: &GluingFamily,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TripleQuotientData, PullbackError> {
    for x in [i, j, k] {
        if x >= fam.len() {
            return Err(PullbackError::UnknownIndex(x));
        }
    }
    let name = triple_name(fam, (i, j, k));
    let (pij, pik) = (fam.map(i, j), fam.map(i, k));
    for (a, b) in [(i, j), (i, k)] {
        if !fam.map(a, b).is_surjective() {
            return Err(PullbackError::NotSurjective {
                from: fam.label(a).to_string(),
                to: fam.label(b).to_string(),
            });
        }
    }
    let piece = fam.piece_arc(i);
    let kernel_sum = exactlin::sum(&pij.kernel(), &pik.kernel())?;
    let chart = exactlin::quotient(piece.dim(), &kernel_sum)?;
    let (reduced, bracket) = quotient_algebra(
        piece,
        &IdealWitness::new(piece, kernel_sum)?,
        format!("B^{}_{{{}{}}}", fam.label(i), fam.label(j), fam.label(k)),
    )?;

    let overlap = fam.overlap(i, j);
    let pushed = exactlin::image(pij.matrix(), &pik.kernel())?;
    let pushed_ideal = IdealWitness::new(overlap, pushed.clone())
        .map_err(|_| PullbackError::PushedKernelNotIdeal(name.clone()))?;
    let (overlap_quotient, overlap_surjection) = quotient_algebra(
        overlap,
        &pushed_ideal,
        format!("{}/pushed{}", overlap.label(), name),
    )?;

    let q_after_pi = overlap_surjection.matrix().mul(pij.matrix())?;
    let iso = q_after_pi.mul(&chart.section)?;
    let iso_inverse = iso
        .inverse()
        .ok_or_else(|| PullbackError::SingularTripleIso(name.clone()))?;
    if iso.mul(bracket.matrix())? != q_after_pi {
        return Err(PullbackError::TripleIsoMismatch(name));
    }
    Ok(TripleQuotientData {
        triple: (i, j, k),
        reduced,
        bracket,
        pushed_kernel: pushed,
        overlap_quotient,
        overlap_surjection,
        iso,
        iso_inverse,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition1Entry {
    pub triple: [String; 3],
    pub holds: bool,
    /// `π^i_j(ker π^i_k)`.
    pub left: SubspaceBasis,
    /// `π^j_i(ker π^j_k)`.
    pub right: SubspaceBasis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Condition2Verdict {
    Holds,
    /// `φ^{ik}_j` versus `φ^{ij}_k ∘ φ^{jk}_i`.
    Fails { lhs: MatrixQ, rhs: MatrixQ },
    /// One of the three `φ` maps is undefined because the first clause
    /// fails on its triple.
    NotEvaluable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition2Entry {
    pub triple: [String; 3],
    pub verdict: Condition2Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub condition1: Vec<Condition1Entry>,
    pub condition2: Vec<Condition2Entry>,
    pub overall: bool,
    pub codomain_reading: String,
}

impl CocycleReport {
    pub fn condition1_holds(&self) -> bool {
        self.condition1.iter().all(|e| e.holds)
    }

    pub fn condition2_holds(&self) -> bool {
        self.condition2
            .iter()
            .all(|e| e.verdict == Condition2Verdict::Holds)
    }

    pub fn first_condition1_failure(&self) -> Option<&Condition1Entry> {
        self.condition1.iter().find(|e| !e.holds)
    }
}

struct TripleTable<'a> {
    fam: &'a GluingFamily,
    data: HashMap<(usize, usize, usize), TripleQuotientData>,
}

impl<'a> TripleTable<'a> {
    fn get(&mut self, t: (usize, usize, usize)) -> Result<&TripleQuotientData, PullbackError> {
        if !self.data.contains_key(&t) {
            let d = build_triple_quotients(self.fam, t.0, t.1, t.2)?;
            self.data.insert(t, d);
        }
        Ok(&self.data[&t])
    }

    /// `φ^{ij}_k = (π^{ij}_k)^{-1} ∘ π^{ji}_k: B^j_{ik} -> B^i_{jk}`.
    fn phi(&mut self, (i, j, k): (usize, usize, usize)) -> Result<MatrixQ, PullbackError> {
        let forward = self.get((j, i, k))?.iso.clone();
        Ok(self.get((i, j, k))?.iso_inverse.mul(&forward)?)
    }
}

/// Evaluates both clauses on every ordered triple of distinct indices, in
/// lexicographic label order.
pub fn check_cocycle(fam: &GluingFamily) -> Result<CocycleReport, PullbackError> {
    let order = fam.ordered();
    let mut table = TripleTable {
        fam,
        data: HashMap::new(),
    };
    let mut triples = Vec::new();
    for &i in &order {
        for &j in &order {
            for &k in &order {
                if i != j && j != k && i != k {
                    triples.push((i, j, k));
                }
            }
        }
    }
    let names = |(i, j, k): (usize, usize, usize)| {
        [fam.label(i), fam.label(j), fam.label(k)].map(str::to_string)
    };

    let mut condition1 = Vec::with_capacity(triples.len());
    let mut clause1 = HashMap::new();
    for &t in &triples {
        let (i, j, k) = t;
        let left = table.get((i, j, k))?.pushed_kernel.clone();
        let right = table.get((j, i, k))?.pushed_kernel.clone();
        let holds = left == right;
        clause1.insert(t, holds);
        condition1.push(Condition1Entry {
            triple: names(t),
            holds,
            left,
            right,
        });
    }

    let mut condition2 = Vec::with_capacity(triples.len());
    for &t in &triples {
        let (i, j, k) = t;
        let needed = [(i, k, j), (i, j, k), (j, k, i)];
        let verdict = if needed.iter().all(|n| clause1[n]) {
            let lhs = table.phi((i, k, j))?;
            let rhs = table.phi((i, j, k))?.mul(&table.phi((j, k, i))?)?;
            if lhs == rhs {
                Condition2Verdict::Holds
            } else {
                Condition2Verdict::Fails { lhs, rhs }
            }
        } else {
            Condition2Verdict::NotEvaluable
        };
        condition2.push(Condition2Entry {
            triple: names(t),
            verdict,
        });
    }

    let overall = condition1.iter().all(|e| e.holds)
        && condition2.iter().all(|e| e.verdict == Condition2Verdict::Holds);
    Ok(CocycleReport {
        condition1,
        condition2,
        overall,
        codomain_reading: CODOMAIN_READING.to_string(),
    })
}
