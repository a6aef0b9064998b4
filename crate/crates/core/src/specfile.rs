//! JSON input files. Two kinds exist, selected by the `kind` field:
//!
//! ```json
//! { "kind": "algebra-family",
//!   "options": { "cap": 10000, "max_j": 8 },
//!   "algebras": [ { "label": "A", "dim": 1,
//!                   "structure_constants": [[["1"]]], "unit": ["1"] } ],
//!   "pieces":   [ { "label": "1", "algebra": "A" } ],
//!   "overlaps": [ { "pair": ["1", "2"], "algebra": "A" } ],
//!   "maps":     [ { "from": "1", "to": "2", "matrix": [["1"]] } ] }
//! ```
//!
//! `structure_constants[a][b]` lists the coordinates of `e_a·e_b`. A map
//! matrix has one row per basis vector of the target and one column per
//! basis vector of the source.
//!
//! ```json
//! { "kind": "finite-gluing",
//!   "spaces": [ { "label": "1", "points": ["a", "b"] },
//!               { "label": "2", "points": ["c"] } ],
//!   "identifications": [ { "pair": ["1", "2"], "points": [["a", "c"]] } ] }
//! ```
//!
//! Rationals are always strings `"p"` or `"p/q"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::Algebra;
use crate::exactlin::{format_rational, parse_rational, MatrixQ, Rational};
use crate::finset::{FiniteGluingSpec, FinsetError, DEFAULT_CHAIN_LENGTH};
use crate::lattice::DEFAULT_CAP;
use crate::multipullback::{CheckOptions, FamilyBuilder, FamilyError, GluingFamily, DEFAULT_MAX_J};

/// A rational written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Q).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecKind {
    AlgebraFamily,
    FiniteGluing,
}

impl fmt::Display for SpecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecKind::AlgebraFamily => "algebra-family",
            SpecKind::FiniteGluing => "finite-gluing",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_length: Option<usize>,
}

impl SpecOptions {
    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            cap: self.cap.unwrap_or(DEFAULT_CAP),
            max_j: self.max_j.unwrap_or(DEFAULT_MAX_J),
        }
    }

    pub fn chain_length(&self) -> usize {
        self.chain_length.unwrap_or(DEFAULT_CHAIN_LENGTH)
    }

    fn is_empty(&self) -> bool {
        *self == SpecOptions::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraEntry {
    pub label: String,
    pub dim: usize,
    pub structure_constants: Vec<Vec<Vec<Q>>>,
    pub unit: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceEntry {
    pub label: String,
    pub algebra: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapEntry {
    pub pair: [String; 2],
    pub algebra: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceEntry {
    pub label: String,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentificationEntry {
    pub pair: [String; 2],
    pub points: Vec<[String; 2]>,
}

/// The on-disk document. Fields that do not belong to `kind` must be
/// absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub kind: SpecKind,
    #[serde(default, skip_serializing_if = "SpecOptions::is_empty")]
    pub options: SpecOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebras: Option<Vec<AlgebraEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlaps: Option<Vec<OverlapEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spaces: Option<Vec<SpaceEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identifications: Option<Vec<IdentificationEntry>>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path} at line {line}, column {column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("expected kind {expected}, found {found}")]
    WrongKind { expected: SpecKind, found: SpecKind },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Finset(#[from] FinsetError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// Parsed and validated contents of a spec file.
#[derive(Debug, Clone)]
pub enum Spec {
    Family(GluingFamily),
    Gluing(FiniteGluingSpec),
}

impl Spec {
    pub fn kind(&self) -> SpecKind {
        match self {
            Spec::Family(_) => SpecKind::AlgebraFamily,
            Spec::Gluing(_) => SpecKind::FiniteGluing,
        }
    }
}

impl SpecFile {
    /// Parses JSON text. Errors name the offending field path and, for
    /// syntax and type errors, the line and column.
    pub fn from_json(text: &str) -> Result<SpecFile, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            SpecError::Syntax {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })
    }

    pub fn read(path: &Path) -> Result<SpecFile, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        SpecFile::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    /// Checks the fields required and forbidden by `kind`, then builds the
    /// in-memory object. Families may contain non-surjective maps; checks
    /// that need surjectivity refuse them later.
    pub fn to_spec(&self) -> Result<Spec, SpecError> {
        let present = |name: &str, set: bool| -> Result<(), SpecError> {
            if set {
                Err(schema(name, format!("field not allowed for kind {}", self.kind)))
            } else {
                Ok(())
            }
        };
        match self.kind {
            SpecKind::AlgebraFamily => {
                present("spaces", self.spaces.is_some())?;
                present("identifications", self.identifications.is_some())?;
                self.to_family().map(Spec::Family)
            }
            SpecKind::FiniteGluing => {
                present("algebras", self.algebras.is_some())?;
                present("pieces", self.pieces.is_some())?;
                present("overlaps", self.overlaps.is_some())?;
                present("maps", self.maps.is_some())?;
                self.to_gluing().map(Spec::Gluing)
            }
        }
    }

    pub fn to_family(&self) -> Result<GluingFamily, SpecError> {
        if self.kind != SpecKind::AlgebraFamily {
            return Err(SpecError::WrongKind {
                expected: SpecKind::AlgebraFamily,
                found: self.kind,
            });
        }
        let algebras = self.algebras.as_deref().ok_or_else(|| schema("algebras", "missing field"))?;
        let pieces = self.pieces.as_deref().ok_or_else(|| schema("pieces", "missing field"))?;
        let overlaps = self.overlaps.as_deref().unwrap_or_default();
        let maps = self.maps.as_deref().unwrap_or_default();

        let mut table: BTreeMap<&str, Arc<Algebra>> = BTreeMap::new();
        for (n, a) in algebras.iter().enumerate() {
            let at = format!("algebras[{n}]");
            let d = a.dim;
            if a.structure_constants.len() != d {
                return Err(schema(
                    format!("{at}.structure_constants"),
                    format!("expected {d} rows, found {}", a.structure_constants.len()),
                ));
            }
            let mut constants = Vec::with_capacity(d * d * d);
            for (x, row) in a.structure_constants.iter().enumerate() {
                if row.len() != d {
                    return Err(schema(
                        format!("{at}.structure_constants[{x}]"),
                        format!("expected {d} entries, found {}", row.len()),
                    ));
                }
                for (y, prod) in row.iter().enumerate() {
                    if prod.len() != d {
                        return Err(schema(
                            format!("{at}.structure_constants[{x}][{y}]"),
                            format!("expected {d} coordinates, found {}", prod.len()),
                        ));
                    }
                    constants.extend(prod.iter().map(|q| q.0.clone()));
                }
            }
            if a.unit.len() != d {
                return Err(schema(
                    format!("{at}.unit"),
                    format!("expected {d} coordinates, found {}", a.unit.len()),
                ));
            }
            let unit = a.unit.iter().map(|q| q.0.clone()).collect();
            let alg = Algebra::new(a.label.clone(), d, constants, unit)
                .map_err(|e| schema(at.clone(), e.to_string()))?;
            if table.insert(a.label.as_str(), Arc::new(alg)).is_some() {
                return Err(schema(format!("{at}.label"), format!("duplicate algebra {:?}", a.label)));
            }
        }
        let lookup = |at: String, name: &str| {
            table
                .get(name)
                .cloned()
                .ok_or_else(|| schema(at, format!("unknown algebra {name:?}")))
        };

        let labels: Vec<&str> = pieces.iter().map(|p| p.label.as_str()).collect();
        let mut b = FamilyBuilder::new(labels.iter().copied()).map_err(SpecError::Family)?;
        let known = |at: String, l: &str| {
            if labels.contains(&l) {
                Ok(())
            } else {
                Err(schema(at, format!("unknown piece {l:?}")))
            }
        };
        for (n, p) in pieces.iter().enumerate() {
            let alg = lookup(format!("pieces[{n}].algebra"), &p.algebra)?;
            b.piece(&p.label, alg)?;
        }
        for (n, o) in overlaps.iter().enumerate() {
            known(format!("overlaps[{n}].pair[0]"), &o.pair[0])?;
            known(format!("overlaps[{n}].pair[1]"), &o.pair[1])?;
            let alg = lookup(format!("overlaps[{n}].algebra"), &o.algebra)?;
            b.overlap(&o.pair[0], &o.pair[1], alg)?;
        }
        let piece_dim = |l: &str| {
            let n = labels.iter().position(|x| *x == l).expect("checked");
            table[pieces[n].algebra.as_str()].dim()
        };
        let overlap_dim = |x: &str, y: &str| {
            overlaps
                .iter()
                .find(|o| (o.pair[0] == x && o.pair[1] == y) || (o.pair[0] == y && o.pair[1] == x))
                .map(|o| table[o.algebra.as_str()].dim())
        };
        for (n, m) in maps.iter().enumerate() {
            let at = format!("maps[{n}]");
            known(format!("{at}.from"), &m.from)?;
            known(format!("{at}.to"), &m.to)?;
            let cols = piece_dim(&m.from);
            let rows = overlap_dim(&m.from, &m.to).ok_or_else(|| {
                schema(at.clone(), format!("no overlap for pair {{{:?}, {:?}}}", m.from, m.to))
            })?;
            if m.matrix.len() != rows {
                return Err(schema(
                    format!("{at}.matrix"),
                    format!("expected {rows} rows (overlap dimension), found {}", m.matrix.len()),
                ));
            }
            for (r, row) in m.matrix.iter().enumerate() {
                if row.len() != cols {
                    return Err(schema(
                        format!("{at}.matrix[{r}]"),
                        format!("expected {cols} entries (piece dimension), found {}", row.len()),
                    ));
                }
            }
            let data = m.matrix.iter().map(|row| row.iter().map(|q| q.0.clone()).collect()).collect();
            let matrix = MatrixQ::from_rows(cols, data).map_err(|e| schema(format!("{at}.matrix"), e.to_string()))?;
            b.map(&m.from, &m.to, matrix)?;
        }
        Ok(b.build_allow_nonsurjective()?)
    }

    pub fn to_gluing(&self) -> Result<FiniteGluingSpec, SpecError> {
        if self.kind != SpecKind::FiniteGluing {
            return Err(SpecError::WrongKind {
                expected: SpecKind::FiniteGluing,
                found: self.kind,
            });
        }
        let spaces = self.spaces.as_deref().ok_or_else(|| schema("spaces", "missing field"))?;
        let mut spec = FiniteGluingSpec::new(
            spaces
                .iter()
                .map(|s| (s.label.clone(), s.points.clone()))
                .collect(),
        )?;
        for (n, id) in self.identifications.as_deref().unwrap_or_default().iter().enumerate() {
            let pairs: Vec<(&str, &str)> = id.points.iter().map(|[x, y]| (x.as_str(), y.as_str())).collect();
            spec.identify(&id.pair[0], &id.pair[1], &pairs)
                .map_err(|e| schema(format!("identifications[{n}]"), e.to_string()))?;
        }
        Ok(spec)
    }

    /// Writes a family. Algebras are listed in first-use order (pieces,
    /// then overlaps) and shared when label and contents agree; distinct
    /// algebras with the same label get a `#n` suffix.
    pub fn from_family(fam: &GluingFamily, options: SpecOptions) -> SpecFile {
        let mut algebras: Vec<AlgebraEntry> = Vec::new();
        let mut seen: Vec<(String, Arc<Algebra>)> = Vec::new();
        let mut name_of = |a: &Arc<Algebra>| -> String {
            if let Some((name, _)) = seen.iter().find(|(_, b)| b.label() == a.label() && **b == **a) {
                return name.clone();
            }
            let mut name = a.label().to_string();
            let mut k = 2;
            while seen.iter().any(|(n, _)| *n == name) {
                name = format!("{}#{k}", a.label());
                k += 1;
            }
            seen.push((name.clone(), a.clone()));
            algebras.push(algebra_entry(&name, a));
            name
        };
        let n = fam.len();
        let pieces = (0..n)
            .map(|i| PieceEntry {
                label: fam.label(i).to_string(),
                algebra: name_of(fam.piece_arc(i)),
            })
            .collect();
        let mut overlaps = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                overlaps.push(OverlapEntry {
                    pair: [fam.label(i).to_string(), fam.label(j).to_string()],
                    algebra: name_of(fam.overlap(i, j)),
                });
            }
        }
        let mut maps = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    maps.push(MapEntry {
                        from: fam.label(i).to_string(),
                        to: fam.label(j).to_string(),
                        matrix: fam
                            .map(i, j)
                            .matrix()
                            .row_iter()
                            .map(|r| r.iter().cloned().map(Q).collect())
                            .collect(),
                    });
                }
            }
        }
        SpecFile {
            kind: SpecKind::AlgebraFamily,
            options,
            algebras: Some(algebras),
            pieces: Some(pieces),
            overlaps: Some(overlaps),
            maps: Some(maps),
            spaces: None,
            identifications: None,
        }
    }

    pub fn from_gluing(spec: &FiniteGluingSpec, options: SpecOptions) -> SpecFile {
        let spaces = (0..spec.len())
            .map(|i| SpaceEntry {
                label: spec.labels()[i].clone(),
                points: spec.points(i).to_vec(),
            })
            .collect();
        let identifications = spec
            .identifications()
            .iter()
            .map(|(&(i, j), pairs)| IdentificationEntry {
                pair: [spec.labels()[i].clone(), spec.labels()[j].clone()],
                points: pairs
                    .iter()
                    .map(|&(x, y)| [spec.points(i)[x].clone(), spec.points(j)[y].clone()])
                    .collect(),
            })
            .collect();
        SpecFile {
            kind: SpecKind::FiniteGluing,
            options,
            algebras: None,
            pieces: None,
            overlaps: None,
            maps: None,
            spaces: Some(spaces),
            identifications: Some(identifications),
        }
    }
}

fn algebra_entry(name: &str, a: &Algebra) -> AlgebraEntry {
    let d = a.dim();
    AlgebraEntry {
        label: name.to_string(),
        dim: d,
        structure_constants: (0..d)
            .map(|x| (0..d).map(|y| a.basis_product(x, y).iter().cloned().map(Q).collect()).collect())
            .collect(),
        unit: a.unit().iter().cloned().map(Q).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{dualize, random_spec, tcirc_a, RandomSpecParams};

    #[test]
    fn family_round_trip_is_exact() {
        let fam = dualize(&tcirc_a(3)).unwrap();
        let file = SpecFile::from_family(&fam, SpecOptions::default());
        let text = file.to_json();
        let back = SpecFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_family().unwrap(), fam);
    }

    #[test]
    fn gluing_round_trip_is_exact() {
        for seed in 0..20 {
            let spec = random_spec(seed, RandomSpecParams::default());
            let file = SpecFile::from_gluing(&spec, SpecOptions::default());
            let back = SpecFile::from_json(&file.to_json()).unwrap();
            assert_eq!(back.to_gluing().unwrap(), spec);
        }
    }

    #[test]
    fn zero_denominator_names_the_field() {
        let text = r#"{
  "kind": "algebra-family",
  "algebras": [ { "label": "A", "dim": 1, "structure_constants": [[["1"]]], "unit": ["1/0"] } ],
  "pieces": [ { "label": "1", "algebra": "A" } ]
}"#;
        let err = SpecFile::from_json(text).unwrap_err();
        match &err {
            SpecError::Syntax { path, line, .. } => {
                assert_eq!(path, "algebras[0].unit[0]");
                assert_eq!(*line, 3);
            }
            other => panic!("unexpected error {other}"),
        }
        assert!(err.to_string().contains("zero denominator"));
    }

    #[test]
    fn shape_errors_name_the_field() {
        let text = r#"{
  "kind": "algebra-family",
  "algebras": [ { "label": "A", "dim": 1, "structure_constants": [[["1"]]], "unit": ["1"] } ],
  "pieces": [ { "label": "1", "algebra": "A" }, { "label": "2", "algebra": "A" } ],
  "overlaps": [ { "pair": ["1", "2"], "algebra": "A" } ],
  "maps": [ { "from": "1", "to": "2", "matrix": [["1", "0"]] },
            { "from": "2", "to": "1", "matrix": [["1"]] } ]
}"#;
        let err = SpecFile::from_json(text).unwrap().to_spec().unwrap_err();
        assert!(err.to_string().starts_with("maps[0].matrix[0]"), "{err}");
    }

    #[test]
    fn foreign_fields_are_rejected() {
        let text = r#"{ "kind": "finite-gluing", "spaces": [], "maps": [] }"#;
        let err = SpecFile::from_json(text).unwrap().to_spec().unwrap_err();
        assert!(err.to_string().starts_with("maps"), "{err}");
        let err = SpecFile::from_json(r#"{ "kind": "finite-gluing", "bogus": 1 }"#).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn wrong_kind_is_reported() {
        let file = SpecFile::from_gluing(&tcirc_a(3), SpecOptions::default());
        assert!(matches!(file.to_family(), Err(SpecError::WrongKind { .. })));
    }
}
