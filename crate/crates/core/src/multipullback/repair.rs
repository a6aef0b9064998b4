//! Re-presenting a multi-pullback by the canonical surjections
//! `B^π/ker p_i -> B^π/(ker p_i + ker p_j)`, which satisfy the cocycle
//! condition whenever the projections `p_i: B^π -> B_i` are onto and their
//! kernels generate a distributive lattice.

use thiserror::Error;

use super::{
    build_pullback, check_cocycle, projection_surjective, CocycleReport, FamilyBuilder,
    FamilyError, GluingFamily, PullbackError,
};
use crate::algebra::{quotient_algebra, IdealWitness};
use crate::exactlin::{self, LinError, MatrixQ};
use crate::lattice::{generate_lattice, is_distributive, Distributivity};

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("projection onto piece {piece:?} is not surjective (image dim {image_dim} < {piece_dim})")]
    ProjectionNotSurjective {
        piece: String,
        image_dim: usize,
        piece_dim: usize,
    },
    #[error("projection kernels do not generate a distributive lattice: {0:?}")]
    NotDistributive(Box<Distributivity>),
    #[error("repaired family fails a postcondition: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Pullback(#[from] PullbackError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

#[derive(Debug, Clone)]
pub struct RepairedFamily {
    pub family: GluingFamily,
    pub pullback_dim: usize,
    /// The canonical map from the original pullback to the repaired one, in
    /// the canonical bases of both; always square and invertible.
    pub comparison: MatrixQ,
    pub cocycle: CocycleReport,
}

pub fn repair(fam: &GluingFamily, cap: usize) -> Result<RepairedFamily, RepairError> {
    let all: Vec<usize> = (0..fam.len()).collect();
    let pullback = build_pullback(fam, &all)?;
    let order = fam.ordered();
    let m = pullback.dim();

    for &i in &order {
        let (onto, image) = projection_surjective(&pullback, i)?;
        if !onto {
            return Err(RepairError::ProjectionNotSurjective {
                piece: fam.label(i).to_string(),
                image_dim: image.dim(),
                piece_dim: fam.piece(i).dim(),
            });
        }
    }
    let projections: Vec<_> = (0..fam.len())
        .map(|i| pullback.projection(i).expect("full pullback").clone())
        .collect();
    let kernels: Vec<_> = order.iter().map(|&i| projections[i].kernel()).collect();
    let verdict = is_distributive(&generate_lattice(&kernels, cap)?);
    if !verdict.holds() {
        return Err(RepairError::NotDistributive(Box::new(verdict)));
    }

    // Right inverse of each p_i: lift through the quotient chart of ker p_i,
    // then undo the induced isomorphism B^π/ker p_i -> B_i.
    let mut lifts = Vec::with_capacity(fam.len());
    for p in &projections {
        let chart = exactlin::quotient(m, &p.kernel())?;
        let induced = p.matrix().mul(&chart.section)?;
        let inv = induced.inverse().ok_or_else(|| {
            RepairError::Postcondition(format!(
                "induced map onto {:?} is not invertible",
                p.target().label()
            ))
        })?;
        lifts.push(chart.section.mul(&inv)?);
    }

    let mut builder = FamilyBuilder::new(fam.labels().iter().cloned())?;
    for i in 0..fam.len() {
        builder.piece(fam.label(i), fam.piece_arc(i).clone())?;
    }
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (i, j) = (order[a], order[b]);
            let kernel_sum = exactlin::sum(&projections[i].kernel(), &projections[j].kernel())?;
            let ideal = IdealWitness::new(pullback.algebra(), kernel_sum)
                .map_err(PullbackError::from)?;
            let (overlap, q) = quotient_algebra(
                pullback.algebra(),
                &ideal,
                format!("B'{}{}", fam.label(i), fam.label(j)),
            )
            .map_err(PullbackError::from)?;
            builder.overlap(fam.label(i), fam.label(j), overlap)?;
            builder.map(fam.label(i), fam.label(j), q.matrix().mul(&lifts[i])?)?;
            builder.map(fam.label(j), fam.label(i), q.matrix().mul(&lifts[j])?)?;
        }
    }
    let repaired = builder.build()?;

    let cocycle = check_cocycle(&repaired)?;
    if !cocycle.overall {
        return Err(RepairError::Postcondition(
            "repaired family does not satisfy the cocycle condition".into(),
        ));
    }
    let rebuilt = build_pullback(&repaired, &all)?;
    let mut comparison = MatrixQ::zeros(rebuilt.dim(), m);
    for (s, v) in pullback.subspace().vectors().enumerate() {
        let coords = rebuilt.coordinates(v)?.ok_or_else(|| {
            RepairError::Postcondition("original pullback element missing from the repaired one".into())
        })?;
        for (r, c) in coords.into_iter().enumerate() {
            comparison.set(r, s, c);
        }
    }
    if comparison.inverse().is_none() {
        return Err(RepairError::Postcondition(format!(
            "canonical comparison map {}x{} is not a bijection",
            comparison.rows(),
            comparison.cols()
        )));
    }
    Ok(RepairedFamily {
        family: repaired,
        pullback_dim: m,
        comparison,
        cocycle,
    })
}
