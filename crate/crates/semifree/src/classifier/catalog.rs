//! The six worked examples, with the Fano family each realizes.

use crate::localization::{NormalBundleData, SurfaceSummand};
use crate::model::{fp_equivalent, ComponentType, FixedComponent, FixedPointData};
use serde::Serialize;

/// Default `(k_min, k_max)` for the X₈ example. Only `k_min + k_max = 8`
/// is determined by the fixed-point data constraints.
pub const KUZNETSOV_DEFAULT_SPLIT: (i64, i64) = (4, 4);

pub const CATALOG_NAMES: [&str; 6] = [
    "projectiveone",
    "exampletwofour",
    "quadricone",
    "quadricexample",
    "wexample",
    "kuznetsov",
];

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub family: &'static str,
    /// Letter of the FP-equivalence class.
    pub case: &'static str,
    pub c1_fourth: i64,
    pub b4: u32,
    pub data: FixedPointData,
}

fn extremal_plane(sign: i64, c1: i64, c2: i64) -> FixedComponent {
    let w = if sign > 0 { [0, 0, 1, 1] } else { [-1, -1, 0, 0] };
    FixedComponent::new(ComponentType::CP2, w, NormalBundleData::FourDimExtremal { c1, c2 })
}

fn surface(weights: [i64; 4], summands: &[(i64, i64)]) -> FixedComponent {
    FixedComponent::new(
        ComponentType::CP1,
        weights,
        NormalBundleData::Surface {
            summands: summands
                .iter()
                .map(|&(degree, weight)| SurfaceSummand { degree, weight })
                .collect(),
        },
    )
}

/// The X₈ example with an explicit c₂ split of the two planes.
pub fn kuznetsov_with_split(k_min: i64, k_max: i64) -> FixedPointData {
    let mut c = vec![extremal_plane(1, -1, k_min)];
    c.extend((0..6).map(|_| FixedComponent::point([-1, -1, 1, 1])));
    c.push(extremal_plane(-1, -1, k_max));
    FixedPointData::new(c)
}

pub fn catalog() -> Vec<CatalogEntry> {
    let entry = |name, family, case, c1_fourth, b4, components| CatalogEntry {
        name,
        family,
        case,
        c1_fourth,
        b4,
        data: FixedPointData::new(components),
    };
    let (k_min, k_max) = KUZNETSOV_DEFAULT_SPLIT;
    vec![
        entry(
            "projectiveone",
            "P4",
            "a",
            625,
            1,
            vec![
                FixedComponent::point([1, 1, 1, 1]),
                FixedComponent::new(ComponentType::CP3, [-1, 0, 0, 0], NormalBundleData::SixDim { c1: 1 }),
            ],
        ),
        entry(
            "exampletwofour",
            "P4",
            "a",
            625,
            1,
            vec![
                surface([0, 1, 1, 1], &[(1, 1), (1, 1), (1, 1)]),
                extremal_plane(-1, 2, 1),
            ],
        ),
        entry(
            "quadricone",
            "Q4",
            "b",
            512,
            2,
            vec![
                FixedComponent::point([1, 1, 1, 1]),
                FixedComponent::new(
                    ComponentType::P1xP1,
                    [-1, 0, 0, 1],
                    NormalBundleData::FourDimSplit {
                        minus: vec![1, 1],
                        plus: vec![1, 1],
                    },
                ),
                FixedComponent::point([-1, -1, -1, -1]),
            ],
        ),
        entry(
            "quadricexample",
            "Q4",
            "b",
            512,
            2,
            vec![extremal_plane(1, 1, 1), extremal_plane(-1, 1, 1)],
        ),
        entry(
            "wexample",
            "W5",
            "c",
            405,
            2,
            vec![
                FixedComponent::point([1, 1, 1, 1]),
                surface([-1, 0, 1, 1], &[(3, -1), (2, 1), (2, 1)]),
                extremal_plane(-1, 0, 2),
            ],
        ),
        CatalogEntry {
            name: "kuznetsov",
            family: "X8",
            case: "d",
            c1_fourth: 224,
            b4: 8,
            data: kuznetsov_with_split(k_min, k_max),
        },
    ]
}

pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpMatch {
    pub case: Option<String>,
    pub entry: Option<String>,
    pub family: Option<String>,
    pub reversed: bool,
}

/// The catalog entry `data` is FP-equivalent to, after orienting it with
/// `d₁ ≤ d₂` (both ways when `d₁ = d₂`). The X₈ entry matches any split of
/// the plane `c₂`s summing to 8.
pub fn match_fp_class(data: &FixedPointData) -> FpMatch {
    let (norm, flipped) = data.normalized();
    let mut views = vec![(norm.clone(), flipped)];
    if let Some(((a, b), _)) = norm.dim_pair() {
        if a == b {
            views.push((norm.reverse_action(), !flipped));
        }
    }
    let entries = catalog();
    for (view, reversed) in &views {
        for e in &entries {
            let target = if e.name == "kuznetsov" {
                match plane_split(view) {
                    Some((a, b)) if a + b == 8 => kuznetsov_with_split(a, b),
                    _ => e.data.clone(),
                }
            } else {
                e.data.clone()
            };
            if fp_equivalent(view, &target) {
                return FpMatch {
                    case: Some(e.case.to_string()),
                    entry: Some(e.name.to_string()),
                    family: Some(e.family.to_string()),
                    reversed: *reversed,
                };
            }
        }
    }
    FpMatch {
        case: None,
        entry: None,
        family: None,
        reversed: false,
    }
}

/// `(∫c₂(N_min), ∫c₂(N_max))` when both extremal components are planes.
fn plane_split(d: &FixedPointData) -> Option<(i64, i64)> {
    let c2 = |c: &FixedComponent| match c.normal {
        NormalBundleData::FourDimExtremal { c2, .. } => Some(c2),
        _ => None,
    };
    Some((c2(d.minimum()?)?, c2(d.maximum()?)?))
}
