//! Sublattices of subspaces generated under sum and intersection, and the
//! distributivity check that the main equivalence theorem assumes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::is_ideal;
use crate::exactlin::{self, LinError, SubspaceBasis};
use crate::multipullback::GluingFamily;

pub const DEFAULT_CAP: usize = 10_000;

/// How a closure element was first obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Generator(usize),
    Sum(usize, usize),
    Meet(usize, usize),
}

#[derive(Debug, Clone)]
pub struct LatticeClosure {
    pub generators: Vec<SubspaceBasis>,
    pub elements: Vec<SubspaceBasis>,
    pub provenance: Vec<Provenance>,
    pub complete: bool,
    pub cap: usize,
    // Dense join/meet tables over element indices, filled only when complete.
    join: Vec<usize>,
    meet: Vec<usize>,
}

impl LatticeClosure {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, s: &SubspaceBasis) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    fn join_idx(&self, a: usize, b: usize) -> usize {
        self.join[a * self.elements.len() + b]
    }

    fn meet_idx(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.elements.len() + b]
    }

    /// Rebuilds element `i` from the generators following its provenance.
    pub fn rebuild(&self, i: usize) -> Result<SubspaceBasis, LinError> {
        match self.provenance[i] {
            Provenance::Generator(g) => Ok(self.generators[g].clone()),
            Provenance::Sum(a, b) => exactlin::sum(&self.rebuild(a)?, &self.rebuild(b)?),
            Provenance::Meet(a, b) => exactlin::intersect(&self.rebuild(a)?, &self.rebuild(b)?),
        }
    }
}

/// Fixed-point closure of `gens` under sum and intersection, deduplicated by
/// canonical form. Stops once `cap` elements exist, reporting
/// `complete = false`.
pub fn generate_lattice(gens: &[SubspaceBasis], cap: usize) -> Result<LatticeClosure, LinError> {
    let mut elements: Vec<SubspaceBasis> = Vec::new();
    let mut provenance = Vec::new();
    let mut index: HashMap<SubspaceBasis, usize> = HashMap::new();
    let mut pairs: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    if let Some(first) = gens.first() {
        for g in gens {
            exactlin::check_dim("lattice generator", first.ambient_dim(), g.ambient_dim())?;
        }
    }

    let mut complete = true;
    for (gi, g) in gens.iter().enumerate() {
        if index.contains_key(g) {
            continue;
        }
        if elements.len() >= cap {
            complete = false;
            break;
        }
        index.insert(g.clone(), elements.len());
        elements.push(g.clone());
        provenance.push(Provenance::Generator(gi));
    }

    // Each new element is combined with every element before it (and
    // itself); pairs are visited exactly once.
    let mut i = 0;
    'outer: while complete && i < elements.len() {
        for j in 0..=i {
            let (a, b) = (&elements[i], &elements[j]);
            let s = exactlin::sum(a, b)?;
            let m = if s.dim() == a.dim() + b.dim() {
                SubspaceBasis::zero(a.ambient_dim())
            } else if s.dim() == a.dim() {
                b.clone()
            } else if s.dim() == b.dim() {
                a.clone()
            } else {
                exactlin::intersect(a, b)?
            };
            let mut ids = [0usize; 2];
            for (slot, (value, prov)) in
                [(s, Provenance::Sum(j, i)), (m, Provenance::Meet(j, i))].into_iter().enumerate()
            {
                ids[slot] = match index.get(&value) {
                    Some(&k) => k,
                    None => {
                        if elements.len() >= cap {
                            complete = false;
                            break 'outer;
                        }
                        let k = elements.len();
                        index.insert(value.clone(), k);
                        elements.push(value);
                        provenance.push(prov);
                        k
                    }
                };
            }
            pairs.insert((j, i), (ids[0], ids[1]));
        }
        i += 1;
    }

    let (join, meet) = if complete {
        let n = elements.len();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for (&(a, b), &(s, m)) in &pairs {
            join[a * n + b] = s;
            join[b * n + a] = s;
            meet[a * n + b] = m;
            meet[b * n + a] = m;
        }
        (join, meet)
    } else {
        (Vec::new(), Vec::new())
    };

    Ok(LatticeClosure {
        generators: gens.to_vec(),
        elements,
        provenance,
        complete,
        cap,
        join,
        meet,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Distributivity {
    Distributive,
    /// `a ∩ (b + c) != (a ∩ b) + (a ∩ c)`.
    NotDistributive {
        a: SubspaceBasis,
        b: SubspaceBasis,
        c: SubspaceBasis,
    },
    /// The closure hit its cap before reaching a fixed point.
    Indeterminate { cap: usize },
}

impl Distributivity {
    pub fn holds(&self) -> bool {
        matches!(self, Distributivity::Distributive)
    }
}

/// Checks `a ∩ (b + c) = (a ∩ b) + (a ∩ c)` over all element triples of a
/// complete closure, returning the first failing triple.
pub fn is_distributive(l: &LatticeClosure) -> Distributivity {
    if !l.complete {
        return Distributivity::Indeterminate { cap: l.cap };
    }
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            let ab = l.meet_idx(a, b);
            for c in 0..n {
                let lhs = l.meet_idx(a, l.join_idx(b, c));
                let rhs = l.join_idx(ab, l.meet_idx(a, c));
                if lhs != rhs {
                    return Distributivity::NotDistributive {
                        a: l.elements[a].clone(),
                        b: l.elements[b].clone(),
                        c: l.elements[c].clone(),
                    };
                }
            }
        }
    }
    Distributivity::Distributive
}

/// Distributivity verdict for the kernels inside one piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDistributivity {
    pub piece: String,
    pub generators: usize,
    pub closure_size: usize,
    pub complete: bool,
    /// Every closure element is a two-sided ideal.
    pub all_ideals: bool,
    pub verdict: Distributivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityReport {
    pub pieces: Vec<PieceDistributivity>,
    /// Ordered pairs `[i, j]` whose map `π^i_j` is not surjective.
    pub non_surjective: Vec<[String; 2]>,
    pub overall: bool,
}

impl DistributivityReport {
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for [i, j] in &self.non_surjective {
            parts.push(format!("map {i}->{j} not surjective"));
        }
        for p in &self.pieces {
            if !p.all_ideals {
                parts.push(format!("piece {}: closure contains a non-ideal", p.piece));
            }
            match &p.verdict {
                Distributivity::Distributive => {}
                Distributivity::NotDistributive { .. } => {
                    parts.push(format!("piece {}: kernel lattice not distributive", p.piece))
                }
                Distributivity::Indeterminate { cap } => {
                    parts.push(format!("piece {}: closure exceeded cap {cap}", p.piece))
                }
            }
        }
        if parts.is_empty() {
            "distributive".into()
        } else {
            parts.join("; ")
        }
    }
}

/// For each piece `B_i`, closes `{ker π^i_j : j != i}` under sum and
/// intersection and checks distributivity; also flags non-surjective maps.
pub fn check_distributive_family(
    fam: &GluingFamily,
    cap: usize,
) -> Result<DistributivityReport, LinError> {
    let order = fam.ordered();
    let mut pieces = Vec::with_capacity(order.len());
    for &i in &order {
        let gens: Vec<SubspaceBasis> = order
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| fam.map(i, j).kernel())
            .collect();
        let closure = generate_lattice(&gens, cap)?;
        let all_ideals = closure.elements.iter().all(|e| is_ideal(fam.piece(i), e));
        pieces.push(PieceDistributivity {
            piece: fam.label(i).to_string(),
            generators: gens.len(),
            closure_size: closure.len(),
            complete: closure.complete,
            all_ideals,
            verdict: is_distributive(&closure),
        });
    }
    let non_surjective: Vec<[String; 2]> = fam
        .non_surjective_maps()
        .into_iter()
        .map(|(i, j)| [fam.label(i).to_string(), fam.label(j).to_string()])
        .collect();
    let overall = non_surjective.is_empty()
        && pieces.iter().all(|p| p.all_ideals && p.verdict.holds());
    Ok(DistributivityReport {
        pieces,
        non_surjective,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::MatrixQ;

    fn line(x: i64, y: i64) -> SubspaceBasis {
        exactlin::rref(&MatrixQ::from_i64(2, &[&[x, y]]))
    }

    #[test]
    fn single_generator() {
        let u = line(1, 2);
        let l = generate_lattice(std::slice::from_ref(&u), DEFAULT_CAP).unwrap();
        assert!(l.complete);
        assert_eq!(l.elements, vec![u]);
        assert!(is_distributive(&l).holds());
    }

    #[test]
    fn two_transverse_lines() {
        let a = line(1, 0);
        let b = line(0, 1);
        let l = generate_lattice(&[a.clone(), b.clone()], DEFAULT_CAP).unwrap();
        assert!(l.complete);
        let mut want = vec![a, b, SubspaceBasis::zero(2), SubspaceBasis::full(2)];
        let mut got = l.elements.clone();
        let key = |s: &SubspaceBasis| format!("{s:?}");
        want.sort_by_key(key);
        got.sort_by_key(key);
        assert_eq!(got, want);
        assert!(is_distributive(&l).holds());
    }

    #[test]
    fn chain_is_distributive() {
        let v = |rows: &[&[i64]]| exactlin::rref(&MatrixQ::from_i64(3, rows));
        let u = v(&[&[1, 0, 0]]);
        let w = v(&[&[1, 0, 0], &[0, 1, 0]]);
        let l = generate_lattice(&[u, w, SubspaceBasis::full(3)], DEFAULT_CAP).unwrap();
        assert_eq!(l.len(), 3);
        assert!(is_distributive(&l).holds());
    }

    #[test]
    fn three_lines_are_not_distributive() {
        let (a, b, c) = (line(1, 0), line(0, 1), line(1, 1));
        // Direct evaluation of both sides for the triple (a, b, c).
        let lhs = exactlin::intersect(&a, &exactlin::sum(&b, &c).unwrap()).unwrap();
        let rhs = exactlin::sum(
            &exactlin::intersect(&a, &b).unwrap(),
            &exactlin::intersect(&a, &c).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, a);
        assert!(rhs.is_zero());

        let l = generate_lattice(&[a, b, c], DEFAULT_CAP).unwrap();
        assert!(l.complete);
        assert_eq!(l.len(), 5);
        match is_distributive(&l) {
            Distributivity::NotDistributive { a, b, c } => {
                let lhs = exactlin::intersect(&a, &exactlin::sum(&b, &c).unwrap()).unwrap();
                let rhs = exactlin::sum(
                    &exactlin::intersect(&a, &b).unwrap(),
                    &exactlin::intersect(&a, &c).unwrap(),
                )
                .unwrap();
                assert_ne!(lhs, rhs);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn cap_reports_indeterminate() {
        let l = generate_lattice(&[line(1, 0), line(0, 1), line(1, 1)], 3).unwrap();
        assert!(!l.complete);
        assert_eq!(l.len(), 3);
        assert_eq!(is_distributive(&l), Distributivity::Indeterminate { cap: 3 });
    }

    #[test]
    fn provenance_rebuilds_every_element() {
        let v = |rows: &[&[i64]]| exactlin::rref(&MatrixQ::from_i64(3, rows));
        let gens = [v(&[&[1, 0, 0], &[0, 1, 0]]), v(&[&[0, 1, 0], &[0, 0, 1]]), v(&[&[1, 1, 1]])];
        let l = generate_lattice(&gens, DEFAULT_CAP).unwrap();
        assert!(l.complete);
        for i in 0..l.len() {
            assert_eq!(l.rebuild(i).unwrap(), l.elements[i]);
        }
    }

    #[test]
    fn mismatched_generators_rejected() {
        let r = generate_lattice(&[line(1, 0), SubspaceBasis::zero(3)], DEFAULT_CAP);
        assert!(r.is_err());
    }
}
