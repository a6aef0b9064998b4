use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_cocycle, check_condition2, check_condition3, CheckOptions, GluingFamily, PullbackError};
use crate::lattice::{check_distributive_family, DistributivityReport};

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error("family is not distributive: {}", .0.summary())]
    HypothesisFailed(Box<DistributivityReport>),
    #[error(transparent)]
    Pullback(#[from] PullbackError),
}

/// The three equivalent statements, evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub cocycle: bool,
    pub all_extensions: bool,
    pub triple_extensions: bool,
    /// False means the tool contradicts the theorem: a bug, never a finding.
    pub consistent: bool,
}

/// Runs the cocycle check and both extension checks on a distributive
/// family and reports whether they agree. A non-distributive family is
/// refused, since the equivalence is only claimed under that hypothesis.
pub fn check_theorem_equivalence(
    fam: &GluingFamily,
    opts: CheckOptions,
) -> Result<TheoremReport, TheoremError> {
    let hyp = check_distributive_family(fam, opts.cap).map_err(PullbackError::from)?;
    if !hyp.overall {
        return Err(TheoremError::HypothesisFailed(Box::new(hyp)));
    }
    let cocycle = check_cocycle(fam)?.overall;
    let all_extensions = check_condition2(fam, opts.max_j)?.iter().all(|v| v.holds);
    let triple_extensions = check_condition3(fam)?.iter().all(|v| v.holds);
    Ok(TheoremReport {
        cocycle,
        all_extensions,
        triple_extensions,
        consistent: cocycle == all_extensions && all_extensions == triple_extensions,
    })
}
