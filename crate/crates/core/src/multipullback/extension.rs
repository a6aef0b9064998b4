//! Extension of compatible partial tuples by one more piece.

use serde::{Deserialize, Serialize};

use super::{GluingFamily, MultiPullback, PullbackCache, PullbackError};
use crate::exactlin::rational::serde_vec;
use crate::exactlin::{self, MatrixQ, Rational};

/// One component `b_i` of a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentValue {
    pub piece: String,
    #[serde(with = "serde_vec")]
    pub values: Vec<Rational>,
}

/// Does every `K`-compatible tuple extend to `K ∪ {k}`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionVerdict {
    pub base: Vec<String>,
    pub extend_by: String,
    pub holds: bool,
    /// A compatible tuple over `base` admitting no extension.
    pub witness: Option<Vec<ComponentValue>>,
}

/// True if `π^i_j(b_i) = π^j_i(b_j)` for all distinct pairs in `partial`.
pub fn is_compatible(
    fam: &GluingFamily,
    partial: &[(usize, Vec<Rational>)],
) -> Result<bool, PullbackError> {
    for (a, (i, bi)) in partial.iter().enumerate() {
        for (j, bj) in &partial[a + 1..] {
            if fam.map(*i, *j).apply(bi)? != fam.map(*j, *i).apply(bj)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Solves `π^k_l(b_k) = π^l_k(b_l)` for all `l` in `partial`, returning some
/// `b_k` or `None` when no solution exists.
pub fn find_extension(
    fam: &GluingFamily,
    partial: &[(usize, Vec<Rational>)],
    k: usize,
) -> Result<Option<Vec<Rational>>, PullbackError> {
    if k >= fam.len() {
        return Err(PullbackError::UnknownIndex(k));
    }
    let mut system = MatrixQ::zeros(0, fam.piece(k).dim());
    let mut rhs = Vec::new();
    for (l, bl) in partial {
        if *l == k {
            continue;
        }
        system = system.vstack(fam.map(k, *l).matrix())?;
        rhs.extend(fam.map(*l, k).apply(bl)?);
    }
    Ok(exactlin::solve(&system, &rhs)?)
}

fn extension_verdict(
    fam: &GluingFamily,
    cache: &mut PullbackCache,
    base: &[usize],
    k: usize,
) -> Result<ExtensionVerdict, PullbackError> {
    let mut bigger = base.to_vec();
    bigger.push(k);
    let projected = cache.get(fam, &bigger)?.project_onto(base)?;
    let small: &MultiPullback = cache.get(fam, base)?;
    let mut witness = None;
    for v in small.subspace().vectors() {
        if !projected.contains(v)? {
            witness = Some(
                small
                    .over()
                    .iter()
                    .map(|&i| ComponentValue {
                        piece: fam.label(i).to_string(),
                        values: small.component(v, i).expect("index in pullback").to_vec(),
                    })
                    .collect(),
            );
            break;
        }
    }
    let mut base_labels: Vec<String> = base.iter().map(|&i| fam.label(i).to_string()).collect();
    base_labels.sort();
    Ok(ExtensionVerdict {
        base: base_labels,
        extend_by: fam.label(k).to_string(),
        holds: witness.is_none(),
        witness,
    })
}

/// For every 3-element subset and each choice of the index to extend by:
/// does the projection of the pullback over the triple onto the other two
/// components equal the pullback over that pair?
pub fn check_condition3(fam: &GluingFamily) -> Result<Vec<ExtensionVerdict>, PullbackError> {
    let order = fam.ordered();
    let mut cache = PullbackCache::new();
    let mut out = Vec::new();
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            for c in b + 1..order.len() {
                let triple = [order[a], order[b], order[c]];
                for pos in 0..3 {
                    let k = triple[pos];
                    let base: Vec<usize> =
                        triple.iter().copied().filter(|&x| x != k).collect();
                    out.push(extension_verdict(fam, &mut cache, &base, k)?);
                }
            }
        }
    }
    Ok(out)
}

/// For every nonempty proper `K` and `k ∉ K`: does every `K`-compatible
/// tuple extend by `k`? Refuses index sets larger than `max_j`.
pub fn check_condition2(
    fam: &GluingFamily,
    max_j: usize,
) -> Result<Vec<ExtensionVerdict>, PullbackError> {
    let n = fam.len();
    if n > max_j || n >= usize::BITS as usize {
        return Err(PullbackError::TooManyPieces {
            size: n,
            bound: max_j,
        });
    }
    let order = fam.ordered();
    // Subsets as ascending positions in `order`, by size then lexicographic.
    let mut subsets: Vec<Vec<usize>> = (1..(1usize << n) - 1)
        .map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).collect())
        .collect();
    subsets.sort_by(|x: &Vec<usize>, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    let mut cache = PullbackCache::new();
    let mut out = Vec::new();
    for positions in subsets {
        let base: Vec<usize> = positions.iter().map(|&p| order[p]).collect();
        for (p, &k) in order.iter().enumerate() {
            if positions.contains(&p) {
                continue;
            }
            out.push(extension_verdict(fam, &mut cache, &base, k)?);
        }
    }
    Ok(out)
}
