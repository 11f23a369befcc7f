//! On-disk formats and report types.
//!
//! Everything this crate reads or writes is JSON under the versioned schema
//! [`crate::SCHEMA`] (with CSV as an alternative output for tabular data).
//! Rationals travel as canonical `"p/q"` strings so that no precision is
//! lost in either direction; integers (hyperplane normals, dimensions)
//! travel as JSON integers. Serialization is deterministic: struct fields
//! keep their declaration order and all map-like data lives in sorted
//! vectors, so a fixed input produces byte-identical output.
//!
//! Inputs are [`ArrangementFile`] (toric or affine hyperplane lists) and
//! [`PolytopeFile`] (vertex lists, doubling as counterclockwise polygons
//! for the planar congruence test). Reports embed the input's validation
//! facts and the random seed of the run, so every artifact records both
//! what it was computed from and how to reproduce it.

use crate::affine::{
    validate_affine, AffineArrangement, AffineHyperplane, AffineValidationReport,
};
use crate::constraints::{CompactDescriptionReport, LevelCheck};
use crate::hadwiger::TableEntry;
use crate::polytope::{Polytope, PolytopeError};
use crate::rational::{format_q, parse_q, Q};
use crate::scissors::{InvariantTable, ScissorsError, Witness};
use crate::toric::{validate_toric, ToricArrangement, ToricHyperplane, ToricValidationReport};
use crate::SCHEMA;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors reading or interpreting input files.
#[derive(Debug, Error)]
pub enum IoError {
    /// The JSON itself could not be parsed.
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// The file declares an unsupported schema version.
    #[error("unsupported schema {found:?}, expected {SCHEMA:?}")]
    Schema {
        /// Schema string found in the file.
        found: String,
    },
    /// The file holds the other arrangement kind.
    #[error("expected a {expected} arrangement, found {found}")]
    WrongKind {
        /// Kind required by the caller.
        expected: String,
        /// Kind found in the file.
        found: String,
    },
    /// A rational string failed to parse.
    #[error("bad rational: {0}")]
    Rational(#[from] crate::rational::QParseError),
    /// The vertex list does not form a polytope.
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    /// The vertex list does not form a convex counterclockwise polygon.
    #[error(transparent)]
    Polygon(#[from] ScissorsError),
}

/// Which geometry backend an arrangement file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrangementKind {
    /// Subtori of `Tⁿ = ℝⁿ/ℤⁿ`.
    Toric,
    /// Hyperplanes of `ℝⁿ`.
    Affine,
}

impl std::fmt::Display for ArrangementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArrangementKind::Toric => write!(f, "toric"),
            ArrangementKind::Affine => write!(f, "affine"),
        }
    }
}

/// One hyperplane `{x : normal·x ≡ offset}` (toric: mod 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperplaneFile {
    /// Integer normal vector.
    pub normal: Vec<i64>,
    /// Rational offset as a `"p/q"` string.
    #[serde(with = "crate::rational::serde_q")]
    pub offset: Q,
}

/// An arrangement input file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementFile {
    /// Schema version tag; must equal [`crate::SCHEMA`].
    pub schema: String,
    /// Backend selector.
    pub kind: ArrangementKind,
    /// Ambient dimension.
    pub dim: usize,
    /// The hyperplane list.
    pub hyperplanes: Vec<HyperplaneFile>,
}

fn normal_to_i64(normal: &[BigInt]) -> Vec<i64> {
    normal
        .iter()
        .map(|x| i64::try_from(x).expect("normal entries fit machine integers"))
        .collect()
}

impl ArrangementFile {
    /// Parse from JSON and check the schema tag.
    pub fn parse(text: &str) -> Result<ArrangementFile, IoError> {
        let file: ArrangementFile = serde_json::from_str(text)?;
        if file.schema != SCHEMA {
            return Err(IoError::Schema { found: file.schema });
        }
        Ok(file)
    }

    /// Serialize as pretty JSON (deterministic byte-for-byte).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Wrap a toric arrangement.
    pub fn from_toric(a: &ToricArrangement) -> ArrangementFile {
        ArrangementFile {
            schema: SCHEMA.to_string(),
            kind: ArrangementKind::Toric,
            dim: a.dim,
            hyperplanes: a
                .hyperplanes
                .iter()
                .map(|h| HyperplaneFile {
                    normal: normal_to_i64(&h.normal),
                    offset: h.offset.clone(),
                })
                .collect(),
        }
    }

    /// Wrap an affine arrangement.
    pub fn from_affine(a: &AffineArrangement) -> ArrangementFile {
        ArrangementFile {
            schema: SCHEMA.to_string(),
            kind: ArrangementKind::Affine,
            dim: a.dim,
            hyperplanes: a
                .hyperplanes
                .iter()
                .map(|h| HyperplaneFile {
                    normal: normal_to_i64(&h.normal),
                    offset: h.offset.clone(),
                })
                .collect(),
        }
    }

    /// Interpret as a toric arrangement.
    pub fn to_toric(&self) -> Result<ToricArrangement, IoError> {
        if self.kind != ArrangementKind::Toric {
            return Err(IoError::WrongKind {
                expected: "toric".to_string(),
                found: self.kind.to_string(),
            });
        }
        Ok(ToricArrangement {
            dim: self.dim,
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| ToricHyperplane::new(h.normal.clone(), h.offset.clone()))
                .collect(),
        })
    }

    /// Interpret as an affine arrangement.
    pub fn to_affine(&self) -> Result<AffineArrangement, IoError> {
        if self.kind != ArrangementKind::Affine {
            return Err(IoError::WrongKind {
                expected: "affine".to_string(),
                found: self.kind.to_string(),
            });
        }
        Ok(AffineArrangement {
            dim: self.dim,
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| AffineHyperplane::new(h.normal.clone(), h.offset.clone()))
                .collect(),
        })
    }

    /// Validation facts for the declared kind.
    pub fn validate(&self) -> ValidationReport {
        match self.kind {
            ArrangementKind::Toric => ValidationReport::Toric(validate_toric(
                &self.to_toric().expect("kind just matched"),
            )),
            ArrangementKind::Affine => ValidationReport::Affine(validate_affine(
                &self.to_affine().expect("kind just matched"),
            )),
        }
    }
}

/// Serde adapter: vertex lists as nested `"p/q"` strings.
mod serde_vertices {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(vs: &[Vec<Q>], ser: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = vs
            .iter()
            .map(|v| v.iter().map(format_q).collect())
            .collect();
        strings.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let strings = Vec::<Vec<String>>::deserialize(de)?;
        strings
            .iter()
            .map(|v| v.iter().map(|s| parse_q(s)).collect())
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// A polytope input file: a rational vertex list. For the planar
/// congruence test the same file doubles as a polygon, in which case the
/// vertices must be in counterclockwise convex position.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeFile {
    /// Schema version tag; must equal [`crate::SCHEMA`].
    pub schema: String,
    /// Ambient dimension.
    pub dim: usize,
    /// Vertices as `"p/q"` strings.
    #[serde(with = "serde_vertices")]
    pub vertices: Vec<Vec<Q>>,
}

impl PolytopeFile {
    /// Parse from JSON and check the schema tag.
    pub fn parse(text: &str) -> Result<PolytopeFile, IoError> {
        let file: PolytopeFile = serde_json::from_str(text)?;
        if file.schema != SCHEMA {
            return Err(IoError::Schema { found: file.schema });
        }
        Ok(file)
    }

    /// Serialize as pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Wrap a polytope.
    pub fn from_polytope(p: &Polytope) -> PolytopeFile {
        PolytopeFile {
            schema: SCHEMA.to_string(),
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
        }
    }

    /// Interpret as a polytope (convex hull of the vertices).
    pub fn to_polytope(&self) -> Result<Polytope, IoError> {
        Ok(Polytope::from_vertices(self.dim, &self.vertices)?)
    }

    /// Interpret as a counterclockwise convex polygon.
    pub fn to_polygon(&self) -> Result<crate::scissors::Polygon, IoError> {
        Ok(crate::scissors::Polygon::new(self.vertices.clone())?)
    }
}

/// Validation facts of either backend, tagged by kind.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ValidationReport {
    /// Facts about a toric arrangement.
    Toric(ToricValidationReport),
    /// Facts about an affine arrangement.
    Affine(AffineValidationReport),
}

impl ValidationReport {
    /// Whether the arrangement passed validation.
    pub fn valid(&self) -> bool {
        match self {
            ValidationReport::Toric(r) => r.valid,
            ValidationReport::Affine(r) => r.valid,
        }
    }
}

/// One level of the degree filtration in a report: the flags indexing the
/// graded piece and a canonical basis of it, row by row.
#[derive(Debug, Clone, Serialize)]
pub struct LevelBasis {
    /// Filtration level (flag rank).
    pub level: usize,
    /// Labels of the rank-`level` flags, in coordinate order.
    pub flags: Vec<String>,
    /// Canonical (reduced row echelon) basis rows, entries as `"p/q"`.
    pub basis: Vec<Vec<String>>,
}

/// Report of the `filtration` command: graded dimensions and bases.
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    /// Schema version tag.
    pub schema: String,
    /// Seed recorded for reproducibility.
    pub seed: u64,
    /// Which backend computed the filtration.
    pub kind: ArrangementKind,
    /// Validation facts of the input arrangement.
    pub validation: ValidationReport,
    /// Graded dimensions `dim V_k` for `k = 0..=n`.
    pub dims: Vec<usize>,
    /// Total dimension (= number of top cells).
    pub total_dim: usize,
    /// Per-level flag labels and graded bases.
    pub levels: Vec<LevelBasis>,
}

///// Report of the `verify` command: per-level equality of the graded pieces
/// with their linear descriptions, plus the compact comparison for affine
/// arrangements.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// Schema version tag.
    pub schema: String,
    /// Seed recorded for reproducibility.
    pub seed: u64,
    /// Which backend was verified.
    pub kind: ArrangementKind,
    /// Which description was checked (`"toric"`, `"pseudoaffine"`).
    pub mode: String,
    /// Validation facts of the input arrangement.
    pub validation: ValidationReport,
    /// Per-level comparisons.
    pub levels: Vec<LevelCheck>,
    /// The bounded-polytope subspace comparison (affine only).
    pub compact: Option<CompactDescriptionReport>,
    /// Conjunction of every equality verdict in the report.
    pub all_equal: bool,
}

/// A congruence witness in report form, all values as `"p/q"` strings.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessReport {
    /// A named invariant with different values.
    Invariant {
        /// Which invariant differs.
        name: String,
        /// Value on the first input.
        left: String,
        /// Value on the second input.
        right: String,
    },
    /// A torus cell with different pushforward multiplicities.
    TorusCell {
        /// Cell index in the joint arrangement.
        cell: usize,
        /// Interior point of the cell.
        point: Vec<String>,
        /// Multiplicity for the first input.
        left: String,
        /// Multiplicity for the second input.
        right: String,
    },
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> WitnessReport {
        match w {
            Witness::Invariant { name, left, right } => WitnessReport::Invariant {
                name: name.clone(),
                left: format_q(left),
                right: format_q(right),
            },
            Witness::TorusCell {
                cell,
                point,
                left,
                right,
            } => WitnessReport::TorusCell {
                cell: *cell,
                point: point.iter().map(format_q).collect(),
                left: format_q(left),
                right: format_q(right),
            },
        }
    }
}

/// An invariant table in report form.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantTableReport {
    /// Exact area as `"p/q"`.
    pub area: String,
    /// Per canonical direction (as `"d₀,d₁"`): the `Υ` value as `"p/q"`.
    pub upsilon: Vec<(String, String)>,
}

impl From<&InvariantTable> for InvariantTableReport {
    fn from(t: &InvariantTable) -> InvariantTableReport {
        InvariantTableReport {
            area: format_q(&t.area),
            upsilon: t
                .upsilon
                .iter()
                .map(|(d, v)| {
                    let dir: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                    (dir.join(","), format_q(v))
                })
                .collect(),
        }
    }
}

/// Report of the `scissors` command.
#[derive(Debug, Clone, Serialize)]
pub struct ScissorsReport {
    /// Schema version tag.
    pub schema: String,
    /// Seed recorded for reproducibility.
    pub seed: u64,
    /// `"zn"` or `"hg2d"`.
    pub mode: String,
    /// Validation of the joint toric arrangement (`zn` mode only).
    pub validation: Option<ValidationReport>,
    /// The verdict.
    pub congruent: bool,
    /// Present exactly when not congruent.
    pub witness: Option<WitnessReport>,
    /// Invariants of the first polygon (`hg2d` mode only).
    pub left: Option<InvariantTableReport>,
    /// Invariants of the second polygon (`hg2d` mode only).
    pub right: Option<InvariantTableReport>,
}

/// Report of the `hadwiger-eval` command: the value of every Hadwiger
/// invariant (positive orientation) on one polytope.
#[derive(Debug, Clone, Serialize)]
pub struct HadwigerEvalReport {
    /// Schema version tag.
    pub schema: String,
    /// Seed recorded for reproducibility.
    pub seed: u64,
    /// Validation facts of the input arrangement.
    pub validation: ValidationReport,
    /// One row per flag, ordered by rank and flag enumeration order.
    pub rows: Vec<crate::hadwiger::TableEntry>,
}

/// Serialize any report as pretty JSON with a trailing newline.
pub fn report_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// A Hadwiger decomposition table as CSV: `rank,flag,orientation,coefficient`.
pub fn decomposition_csv(rows: &[TableEntry]) -> String {
    let mut out = String::from("rank,flag,orientation,coefficient\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.rank,
            csv_escape(&r.flag),
            r.orientation,
            csv_escape(&r.coefficient)
        ));
    }
    out
}

/// A planar invariant table as CSV: `invariant,value` with one `area` row
/// and one `upsilon[d]` row per direction.
pub fn invariant_table_csv(t: &InvariantTable) -> String {
    let mut out = String::from("invariant,value\n");
    out.push_str(&format!("area,{}\n", csv_escape(&format_q(&t.area))));
    for (d, v) in &t.upsilon {
        let dir: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!(
            "{},{}\n",
            csv_escape(&format!("upsilon[{}]", dir.join(","))),
            csv_escape(&format_q(v))
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix_aff_tri, fix_t2_grid, half_square};
    use crate::rational::{q, qi};

    #[test]
    fn arrangement_files_round_trip() {
        for file in [
            ArrangementFile::from_toric(&fix_t2_grid()),
            ArrangementFile::from_affine(&fix_aff_tri()),
        ] {
            let text = file.to_json();
            let back = ArrangementFile::parse(&text).unwrap();
            assert_eq!(back.to_json(), text);
            assert!(back.validate().valid());
        }
        let grid = ArrangementFile::from_toric(&fix_t2_grid());
        assert_eq!(grid.to_toric().unwrap(), fix_t2_grid());
        let aff = ArrangementFile::from_affine(&fix_aff_tri());
        assert_eq!(aff.to_affine().unwrap(), fix_aff_tri());
    }

    #[test]
    fn polytope_files_round_trip() {
        let p = half_square();
        let file = PolytopeFile::from_polytope(&p);
        let text = file.to_json();
        let back = PolytopeFile::parse(&text).unwrap();
        assert_eq!(back.to_polytope().unwrap().vertices(), p.vertices());
        assert!(text.contains("\"1/2\""));
    }

    #[test]
    fn schema_and_kind_mismatches_are_rejected() {
        let mut file = ArrangementFile::from_toric(&fix_t2_grid());
        file.schema = "arrangeval/999".to_string();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            ArrangementFile::parse(&text),
            Err(IoError::Schema { .. })
        ));
        let good = ArrangementFile::from_toric(&fix_t2_grid());
        assert!(matches!(good.to_affine(), Err(IoError::WrongKind { .. })));
        assert!(ArrangementFile::parse("{not json").is_err());
    }

    #[test]
    fn polygon_interpretation_checks_convexity() {
        let file = PolytopeFile {
            schema: SCHEMA.to_string(),
            dim: 2,
            vertices: vec![
                vec![qi(0), qi(0)],
                vec![qi(0), qi(1)],
                vec![qi(1), qi(1)],
            ],
        };
        assert!(matches!(file.to_polygon(), Err(IoError::Polygon(_))));
    }

    #[test]
    fn csv_outputs_are_well_formed() {
        let table = InvariantTable {
            area: qi(1),
            upsilon: vec![
                (vec![0.into(), 1.into()], qi(0)),
                (vec![1.into(), 0.into()], q(-1, 2)),
            ],
        };
        let csv = invariant_table_csv(&table);
        assert_eq!(
            csv,
            "invariant,value\narea,1\n\"upsilon[0,1]\",0\n\"upsilon[1,0]\",-1/2\n"
        );
        let rows = vec![TableEntry {
            rank: 1,
            flag: "T2[@] > T1[1,0@0]".to_string(),
            orientation: 1,
            coefficient: "3/4".to_string(),
        }];
        let csv = decomposition_csv(&rows);
        assert!(csv.starts_with("rank,flag,orientation,coefficient\n"));
        assert!(csv.contains("\"T2[@] > T1[1,0@0]\"") || csv.contains("T2[@] > T1[1,0@0]"));
        assert!(csv.contains("3/4"));
    }

    #[test]
    fn witness_reports_format_rationals() {
        let w = Witness::TorusCell {
            cell: 2,
            point: vec![q(1, 4), q(3, 4)],
            left: qi(1),
            right: qi(0),
        };
        let json = report_json(&WitnessReport::from(&w));
        assert!(json.contains("\"torus_cell\""));
        assert!(json.contains("\"1/4\""));
    }
}
