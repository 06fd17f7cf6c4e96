//! Which positive-definite prime Fano fourfolds of index > 1 survive the
//! fixed-point constraints.
//!
//! The family table is external input. Each row is checked against the
//! volumes realized by enumerated fixed-point data with the same index and
//! `b₄`.

use super::enumerate::{enumerate_all, EnumerationResult, Execution};
use crate::poly::Q;
use crate::report::{ConstraintReport, Rule};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

/// The eight families with positive definite intersection form.
pub const REQUIRED_FAMILIES: [&str; 8] = ["P4", "Q4", "Q1∩Q2", "W5", "X7m", "X8m", "X9m", "V18"];

const DEFAULT_TABLE: &str = include_str!("fano_table.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanoFamilyRecord {
    pub name: String,
    pub fano_index: i64,
    pub b4: u32,
    pub c1_fourth: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(default)]
    pub finite_automorphisms: bool,
}

pub fn default_fano_table() -> Vec<FanoFamilyRecord> {
    serde_json::from_str(DEFAULT_TABLE).expect("bundled table parses")
}

/// The bundled table as shipped.
pub fn default_table_text() -> &'static str {
    DEFAULT_TABLE
}

/// Hex SHA-256 of the bundled table.
pub fn default_table_hash() -> String {
    let digest = Sha256::digest(DEFAULT_TABLE.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanoError {
    #[error("table is missing {}", .0.join(", "))]
    MissingFamilies(Vec<String>),
    #[error("table lists {0} more than once")]
    Duplicate(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct FanoVerdict {
    pub name: String,
    pub survives: bool,
    pub checks: ConstraintReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FanoClassification {
    pub survivors: Vec<String>,
    pub verdicts: Vec<FanoVerdict>,
}

/// An enumerated admissible volume. `half` marks values from the
/// half-volume formulas rather than the full DH profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Realized {
    index: i64,
    b4: u32,
    half: bool,
    volume: Q,
}

fn realized(results: &[EnumerationResult]) -> BTreeSet<Realized> {
    let mut out = BTreeSet::new();
    for m in results.iter().flat_map(|r| r.members()) {
        let Some(index) = m.index else { continue };
        for (half, v) in [(false, m.volume), (true, m.half_volume)] {
            if let Some(volume) = v {
                out.insert(Realized {
                    index,
                    b4: m.b4,
                    half,
                    volume,
                });
            }
        }
    }
    out
}

/// [`classify_fano_with`] against a fresh enumeration of every admissible
/// shape, with `b4_max` the largest `b₄` in the table.
pub fn classify_fano(records: &[FanoFamilyRecord]) -> Result<FanoClassification, FanoError> {
    check_coverage(records)?;
    let b4_max = records.iter().map(|r| r.b4).max().unwrap_or(1);
    let results = enumerate_all(b4_max, Execution::default());
    classify_fano_with(records, &results)
}

fn check_coverage(records: &[FanoFamilyRecord]) -> Result<(), FanoError> {
    let mut names = BTreeSet::new();
    for r in records {
        if !names.insert(r.name.as_str()) {
            return Err(FanoError::Duplicate(r.name.clone()));
        }
    }
    let missing: Vec<String> = REQUIRED_FAMILIES
        .iter()
        .filter(|n| !names.contains(**n))
        .map(|n| n.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(FanoError::MissingFamilies(missing))
    }
}

/// Filters `records` by index, automorphisms and volume. The verdicts are
/// sorted by name, so the output does not depend on the input order.
pub fn classify_fano_with(
    records: &[FanoFamilyRecord],
    enumerated: &[EnumerationResult],
) -> Result<FanoClassification, FanoError> {
    check_coverage(records)?;
    let realized = realized(enumerated);
    let mut sorted: Vec<&FanoFamilyRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let verdicts: Vec<FanoVerdict> = sorted.into_iter().map(|r| judge(r, &realized)).collect();
    let survivors = verdicts.iter().filter(|v| v.survives).map(|v| v.name.clone()).collect();
    Ok(FanoClassification { survivors, verdicts })
}

fn judge(r: &FanoFamilyRecord, realized: &BTreeSet<Realized>) -> FanoVerdict {
    let mut checks = ConstraintReport::new();
    let iota = r.fano_index;
    let v = r.c1_fourth;
    if let (2, Some(g)) = (iota, r.genus) {
        checks.check(
            Rule::DegreeGenus,
            v == 32 * (g - 1),
            format!("table: ∫c1^4 = {v}, 32(g - 1) = {}", 32 * (g - 1)),
        );
    }
    checks.check(Rule::FanoIndex, iota > 1, format!("ι = {iota}"));
    checks.check(
        Rule::FanoAutomorphisms,
        !r.finite_automorphisms,
        if r.finite_automorphisms {
            "automorphism group is finite"
        } else {
            "automorphism group is infinite"
        },
    );
    if checks.passed() {
        let has = |half: bool, volume: i64| {
            realized.contains(&Realized {
                index: iota,
                b4: r.b4,
                half,
                volume: Q::from(volume as i128),
            })
        };
        if iota == 2 {
            // The shape (0,4) with a surface needs odd ι, so only the
            // surface-free (0,4) data and the (4,4) data remain.
            let b = r.b4 as i64;
            let (a, c) = (416 - 16 * b, 352 - 16 * b);
            let implied = |x: i64| {
                if x % 32 == 0 {
                    format!("g = {}", x / 32 + 1)
                } else {
                    "no integral genus".to_string()
                }
            };
            let genus = r.genus.map_or("?".to_string(), |g| g.to_string());
            checks.check(
                Rule::DegreeGenus,
                (a == v && has(true, a)) || (c == v && has(true, c)),
                format!(
                    "(0,4): 416 - 16·{b} = {a} ({}); (4,4): 352 - 16·{b} = {c} ({}); table ∫c1^4 = {v}, g = {genus}",
                    implied(a),
                    implied(c)
                ),
            );
        } else {
            let volumes: Vec<String> = realized
                .iter()
                .filter(|x| x.index == iota && x.b4 == r.b4 && !x.half)
                .map(|x| x.volume.to_string())
                .collect();
            checks.check(
                Rule::FanoVolume,
                has(false, v),
                format!(
                    "admissible ∫c1^4 for ι = {iota}, b4 = {}: {{{}}}; table {v}",
                    r.b4,
                    volumes.join(", ")
                ),
            );
        }
    }
    FanoVerdict {
        name: r.name.clone(),
        survives: checks.passed(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_covers_required() {
        let t = default_fano_table();
        assert_eq!(t.len(), 8);
        assert!(check_coverage(&t).is_ok());
        assert_eq!(default_table_hash().len(), 64);
    }

    #[test]
    fn missing_family_is_an_error() {
        let t: Vec<FanoFamilyRecord> = default_fano_table().into_iter().filter(|r| r.name != "V18").collect();
        assert_eq!(
            classify_fano_with(&t, &[]).unwrap_err(),
            FanoError::MissingFamilies(vec!["V18".into()])
        );
    }

    #[test]
    fn mukai_rows_satisfy_degree_genus() {
        for r in default_fano_table().iter().filter(|r| r.fano_index == 2) {
            assert_eq!(r.c1_fourth, 32 * (r.genus.unwrap() - 1), "{}", r.name);
        }
    }
}
