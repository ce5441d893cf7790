//! Serialized schemas: group documents, spectrum and validation reports,
//! search verdicts, and the verdict table.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::Natural;
use crate::decomp::Decomposition;
use crate::error::{Error, Result, ValidationReport};
use crate::groups::{direct_sum, BGroup, InvariantData, RigidPiece};
use crate::partitions::{Partition, PartitionFamily};
use crate::search::{Obstruction, SearchLog, TheoremTable, Verdict, VerdictStatus};
use crate::types::PrimeType;

/// Group document:
/// `{"type_defs": {label: {"inverted_primes": [...]}},
///   "pieces": [{"types": [labels], "index": {prime: exp},
///               "coefficients": {label: {prime: exp}}}]}`.
/// Missing coefficients default to 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BGroupDoc {
    pub type_defs: BTreeMap<String, TypeDef>,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeDef {
    pub inverted_primes: BTreeSet<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceDoc {
    pub types: Vec<String>,
    pub index: Natural,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coefficients: BTreeMap<String, Natural>,
}

impl BGroupDoc {
    pub fn to_group(&self) -> Result<BGroup> {
        let mut types: BTreeMap<&str, PrimeType> = BTreeMap::new();
        for (label, def) in &self.type_defs {
            types.insert(
                label,
                PrimeType::new(label.clone(), def.inverted_primes.iter().copied())?,
            );
        }
        let mut pieces = Vec::new();
        for (pi, doc) in self.pieces.iter().enumerate() {
            let mut piece_types = Vec::new();
            let mut coeffs = Vec::new();
            for label in &doc.types {
                let t = types.get(label.as_str()).ok_or_else(|| Error::Parse {
                    location: format!("pieces[{pi}]"),
                    message: format!("type {label:?} not in type_defs"),
                })?;
                piece_types.push(t.clone());
                coeffs.push(
                    doc.coefficients
                        .get(label)
                        .cloned()
                        .unwrap_or_else(Natural::one),
                );
            }
            for label in doc.coefficients.keys() {
                if !doc.types.contains(label) {
                    return Err(Error::Parse {
                        location: format!("pieces[{pi}]"),
                        message: format!("coefficient for {label:?} outside the typeset"),
                    });
                }
            }
            pieces.push(RigidPiece::new(piece_types, doc.index.clone(), coeffs)?);
        }
        direct_sum(pieces)
    }

    pub fn from_group(group: &BGroup) -> BGroupDoc {
        let mut type_defs = BTreeMap::new();
        let mut pieces = Vec::new();
        for piece in group.pieces() {
            let mut types = Vec::new();
            let mut coefficients = BTreeMap::new();
            for (t, c) in piece.typeset().iter().zip(piece.coefficients()) {
                type_defs.entry(t.label().to_string()).or_insert(TypeDef {
                    inverted_primes: t.inverted_primes().clone(),
                });
                types.push(t.label().to_string());
                if !c.is_one() {
                    coefficients.insert(t.label().to_string(), c.clone());
                }
            }
            pieces.push(PieceDoc {
                types,
                index: piece.index().clone(),
                coefficients,
            });
        }
        BGroupDoc { type_defs, pieces }
    }
}

pub fn group_to_json(group: &BGroup) -> String {
    serde_json::to_string_pretty(&BGroupDoc::from_group(group)).expect("group serializes")
}

pub fn group_from_json(text: &str) -> Result<BGroup> {
    let doc: BGroupDoc = serde_json::from_str(text)?;
    doc.to_group()
}

/// Per-type invariants of a group.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantsDoc {
    pub rank: u32,
    pub regulator_index: Natural,
    pub types: Vec<TypeInvariantDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeInvariantDoc {
    pub label: String,
    pub rank: u32,
    pub mu: Natural,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_value: Option<u64>,
}

pub fn invariants_doc(data: &InvariantData) -> InvariantsDoc {
    InvariantsDoc {
        rank: data.total_rank(),
        regulator_index: data.regulator_index(),
        types: data
            .entries()
            .iter()
            .map(|(t, e)| TypeInvariantDoc {
                label: t.label().to_string(),
                rank: e.rank,
                mu: e.mu.clone(),
                mu_value: e.mu.value_u64(),
            })
            .collect(),
    }
}

/// Spectrum report: `{"n": .., "spectrum": [[parts]], "decompositions": ..}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumDoc {
    pub n: u32,
    pub spectrum: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decompositions: Option<Vec<DecompositionDoc>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionDoc {
    pub shape: Vec<u32>,
    pub summands: Vec<SummandDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandDoc {
    pub types: Vec<String>,
    pub rank: u32,
    pub index: Natural,
    pub mu: BTreeMap<String, Natural>,
}

pub fn spectrum_doc(
    spectrum: &PartitionFamily,
    decompositions: Option<&[Decomposition]>,
) -> SpectrumDoc {
    SpectrumDoc {
        n: spectrum.n(),
        spectrum: spectrum.iter().map(|p| p.parts().to_vec()).collect(),
        decompositions: decompositions.map(|decs| {
            decs.iter()
                .map(|d| DecompositionDoc {
                    shape: d.shape().parts().to_vec(),
                    summands: d
                        .summands()
                        .iter()
                        .map(|s| SummandDoc {
                            types: s.entries().keys().map(|t| t.label().to_string()).collect(),
                            rank: s.total_rank(),
                            index: s.regulator_index(),
                            mu: s
                                .entries()
                                .iter()
                                .map(|(t, e)| (t.label().to_string(), e.mu.clone()))
                                .collect(),
                        })
                        .collect(),
                })
                .collect()
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationDoc {
    pub ok: bool,
    pub report: ValidationReport,
}

/// Search verdict with an optional inline witness.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictDoc {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BGroupDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<String>,
    pub log: SearchLog,
}

pub fn verdict_doc(v: &Verdict, witness_path: Option<String>, inline_witness: bool) -> VerdictDoc {
    VerdictDoc {
        status: v.status,
        obstruction: v.obstruction.clone(),
        witness: v
            .witness
            .as_ref()
            .filter(|_| inline_witness)
            .map(BGroupDoc::from_group),
        witness_path,
        log: v.log.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDoc {
    pub n_max: u32,
    pub cells: Vec<TableCellDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCellDoc {
    pub n: u32,
    pub k: u32,
    #[serde(flatten)]
    pub verdict: VerdictDoc,
}

pub fn table_doc(table: &TheoremTable, inline_witnesses: bool) -> TableDoc {
    TableDoc {
        n_max: table.n_max,
        cells: table
            .cells
            .iter()
            .map(|c| TableCellDoc {
                n: c.n,
                k: c.k,
                verdict: verdict_doc(&c.verdict, None, inline_witnesses),
            })
            .collect(),
    }
}

/// Table document with per-cell witness paths instead of inline witnesses.
pub fn table_doc_with_paths(
    table: &TheoremTable,
    paths: &BTreeMap<(u32, u32), String>,
) -> TableDoc {
    TableDoc {
        n_max: table.n_max,
        cells: table
            .cells
            .iter()
            .map(|c| TableCellDoc {
                n: c.n,
                k: c.k,
                verdict: verdict_doc(&c.verdict, paths.get(&(c.n, c.k)).cloned(), false),
            })
            .collect(),
    }
}

/// Family text: one partition per line or `;`-separated, or a JSON array of
/// arrays. Partitions use `4,2` / `2^3,1^2` syntax.
pub fn family_from_str(text: &str) -> Result<PartitionFamily> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Input("empty family".into()));
    }
    let partitions: Vec<Partition> = if trimmed.starts_with('[') {
        let raw: Vec<Vec<u32>> = serde_json::from_str(trimmed)?;
        raw.into_iter()
            .map(Partition::new)
            .collect::<Result<_>>()?
    } else {
        trimmed
            .split(|c| c == ';' || c == '\n')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?
    };
    let n = match partitions.first() {
        Some(p) => p.n(),
        None => return Err(Error::Input("empty family".into())),
    };
    PartitionFamily::new(n, partitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::named_example;
    use crate::partitions::family_s;

    #[test]
    fn group_json_round_trip() {
        let g = named_example("s64").unwrap().group;
        let json = group_to_json(&g);
        let back = group_from_json(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn defaulted_coefficients() {
        let text = r#"{
            "type_defs": {
                "a": {"inverted_primes": [11]},
                "b": {"inverted_primes": [13]}
            },
            "pieces": [{"types": ["a", "b"], "index": {"3": 1, "5": 1}}]
        }"#;
        let g = group_from_json(text).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(g.pieces()[0].coefficients().iter().all(Natural::is_one));
    }

    #[test]
    fn e_freeness_violation_reported() {
        let text = r#"{
            "type_defs": {
                "a": {"inverted_primes": [3]},
                "b": {"inverted_primes": [13]}
            },
            "pieces": [{"types": ["a", "b"], "index": {"3": 1}}]
        }"#;
        match group_from_json(text) {
            Err(Error::Validation(v)) => {
                assert_eq!(v.code, crate::error::ViolationCode::NotEFree)
            }
            other => panic!("expected e-freeness error, got {other:?}"),
        }
    }

    #[test]
    fn family_parsing() {
        let fam = family_from_str("2,2\n2,1,1").unwrap();
        assert_eq!(fam, family_s(4, 2).unwrap());
        let fam = family_from_str("2,2; 2,1,1").unwrap();
        assert_eq!(fam, family_s(4, 2).unwrap());
        let fam = family_from_str("[[2,2],[2,1,1]]").unwrap();
        assert_eq!(fam, family_s(4, 2).unwrap());
        assert!(family_from_str("2,2; 3,1,1").is_err());
        assert!(family_from_str("").is_err());
    }

    #[test]
    fn unknown_type_label_is_a_parse_error() {
        let text = r#"{
            "type_defs": {"a": {"inverted_primes": [11]}},
            "pieces": [{"types": ["a", "zz"], "index": {"3": 1}}]
        }"#;
        assert!(matches!(group_from_json(text), Err(Error::Parse { .. })));
    }
}
