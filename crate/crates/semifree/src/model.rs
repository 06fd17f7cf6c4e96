//! Fixed-point data of a semi-free circle action on a closed symplectic
//! 8-manifold with `b₂ = 1`, normalized so that `c₁(M) = [ω]` and
//! `H(F) = −Σ wᵢ`.

use crate::localization::{equivariant_euler, NormalBundleData, WeightSignature};
use crate::report::{ConstraintReport, Rule};
use crate::ring::{ring_cpn, ring_p1xp1, ring_point, RingClass, RingHandle};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

/// Topological type of a fixed component. These are the only types a
/// semi-free action with `b₂(M) = 1` admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentType {
    Point,
    CP1,
    CP2,
    P1xP1,
    CP3,
}

impl ComponentType {
    pub const ALL: [ComponentType; 5] = [
        ComponentType::Point,
        ComponentType::CP1,
        ComponentType::CP2,
        ComponentType::P1xP1,
        ComponentType::CP3,
    ];

    /// Real dimension.
    pub fn dim(self) -> u32 {
        match self {
            ComponentType::Point => 0,
            ComponentType::CP1 => 2,
            ComponentType::CP2 | ComponentType::P1xP1 => 4,
            ComponentType::CP3 => 6,
        }
    }

    /// Even Betti numbers `[b₀, b₂, …]`.
    pub fn betti(self) -> &'static [u32] {
        match self {
            ComponentType::Point => &[1],
            ComponentType::CP1 => &[1, 1],
            ComponentType::CP2 => &[1, 1, 1],
            ComponentType::P1xP1 => &[1, 2, 1],
            ComponentType::CP3 => &[1, 1, 1, 1],
        }
    }

    /// `b_i` for any `i`, zero out of range and in odd degree.
    pub fn betti_at(self, i: i64) -> u32 {
        if i < 0 || i % 2 != 0 {
            return 0;
        }
        self.betti().get((i / 2) as usize).copied().unwrap_or(0)
    }

    /// Shared cohomology ring.
    pub fn ring(self) -> RingHandle {
        static RINGS: OnceLock<[RingHandle; 5]> = OnceLock::new();
        let rings = RINGS.get_or_init(|| {
            [
                ring_point(),
                ring_cpn(1).unwrap(),
                ring_cpn(2).unwrap(),
                ring_p1xp1(),
                ring_cpn(3).unwrap(),
            ]
        });
        rings[self as usize].clone()
    }

    /// `c₁(TF)` on the degree-2 generators.
    pub fn c1_tangent(self) -> Vec<i64> {
        match self {
            ComponentType::Point => vec![],
            ComponentType::CP1 => vec![2],
            ComponentType::CP2 => vec![3],
            ComponentType::P1xP1 => vec![2, 2],
            ComponentType::CP3 => vec![4],
        }
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentType::Point => "pt",
            ComponentType::CP1 => "CP1",
            ComponentType::CP2 => "CP2",
            ComponentType::P1xP1 => "CP1xCP1",
            ComponentType::CP3 => "CP3",
        })
    }
}

/// One connected fixed component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedComponent {
    #[serde(rename = "type")]
    pub kind: ComponentType,
    pub weights: WeightSignature,
    pub normal: NormalBundleData,
}

/// Canonical form of a component for FP-equivalence: type, sorted weights
/// and the Chern invariants that survive the component's symmetries.
pub type ComponentKey = (ComponentType, [i64; 4], Vec<i64>);

impl FixedComponent {
    pub fn new(kind: ComponentType, weights: [i64; 4], normal: NormalBundleData) -> Self {
        FixedComponent {
            kind,
            weights: WeightSignature(weights).sorted(),
            normal: normal.canonical(),
        }
    }

    pub fn point(weights: [i64; 4]) -> Self {
        Self::new(ComponentType::Point, weights, NormalBundleData::Point)
    }

    pub fn lambda(&self) -> u32 {
        self.weights.lambda()
    }

    pub fn level(&self) -> i64 {
        self.weights.level()
    }

    pub fn dim(&self) -> u32 {
        self.kind.dim()
    }

    pub fn is_minimum(&self) -> bool {
        self.lambda() == 0
    }

    pub fn is_maximum(&self) -> bool {
        self.weights.positives() == 0 && self.lambda() == (8 - self.dim()) / 2
    }

    pub fn is_extremal(&self) -> bool {
        self.is_minimum() || self.is_maximum()
    }

    /// `c₁(N_F)` on the degree-2 generators of `F`.
    pub fn c1_normal(&self) -> Vec<i64> {
        match &self.normal {
            NormalBundleData::Point => vec![],
            NormalBundleData::Surface { summands } => vec![summands.iter().map(|s| s.degree).sum()],
            NormalBundleData::FourDimExtremal { c1, .. } => vec![*c1],
            NormalBundleData::FourDimSplit { minus, plus } => {
                minus.iter().zip(plus).map(|(a, b)| a + b).collect()
            }
            NormalBundleData::SixDim { c1 } => vec![*c1],
        }
    }

    /// `c₁(M)|_F = c₁(TF) + c₁(N_F)`, which is also `[ω]|_F`: the symplectic
    /// area of each generator of `H₂(F)`.
    pub fn c1_restricted(&self) -> Vec<i64> {
        self.kind
            .c1_tangent()
            .iter()
            .zip(self.c1_normal().iter().chain(std::iter::repeat(&0)))
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `c₁(M)|_F` as a class in `H*(F)`.
    pub fn c1_class(&self) -> RingClass {
        RingClass::linear(&self.kind.ring(), &self.c1_restricted())
    }

    /// Contribution to the self-intersection of `M^{ℤ₂} = M^{S¹}`.
    ///
    /// Only components of dimension ≥ 4 contribute. For ℂP³ with `N = O(m)`
    /// the self-intersection of the 6-dimensional piece is the signature
    /// of the zero set of a generic section of `N`, which the ring computes
    /// as `∫(p₁(F) − c₁(N)²)·c₁(N)/3 = m(4 − m²)/3`.
    pub fn self_intersection(&self) -> i64 {
        match &self.normal {
            NormalBundleData::FourDimExtremal { c2, .. } => *c2,
            NormalBundleData::FourDimSplit { minus, plus } => {
                let ring = self.kind.ring();
                let u = RingClass::linear(&ring, minus);
                let v = RingClass::linear(&ring, plus);
                scalar(&(&u * &v))
            }
            NormalBundleData::SixDim { c1 } => {
                let ring = self.kind.ring();
                let h = RingClass::linear(&ring, &[1]);
                let n = h.scale(crate::poly::q(*c1));
                let p1 = h.pow(2).scale(crate::poly::q(4));
                let top = &(&p1 - &(&n * &n)) * &n;
                let v = top.integrate_scalar().expect("scalar class");
                debug_assert!(v.is_integer() && v.to_integer() % 3 == 0);
                (v.to_integer() / 3) as i64
            }
            _ => 0,
        }
    }

    pub fn reversed(&self) -> Self {
        FixedComponent {
            kind: self.kind,
            weights: self.weights.negated(),
            normal: self.normal.reversed(),
        }
    }

    pub fn key(&self) -> ComponentKey {
        let invariants = match &self.normal {
            NormalBundleData::Point => vec![],
            NormalBundleData::Surface { summands } => {
                let neg = summands.iter().filter(|s| s.weight < 0).map(|s| s.degree).sum();
                let pos = summands.iter().filter(|s| s.weight > 0).map(|s| s.degree).sum();
                vec![neg, pos]
            }
            NormalBundleData::FourDimExtremal { c1, c2 } => vec![*c1, *c2],
            NormalBundleData::FourDimSplit { minus, plus } => {
                let direct: Vec<i64> = minus.iter().chain(plus).copied().collect();
                if self.kind == ComponentType::P1xP1 {
                    let swapped = vec![minus[1], minus[0], plus[1], plus[0]];
                    direct.min(swapped)
                } else {
                    direct
                }
            }
            NormalBundleData::SixDim { c1 } => vec![*c1],
        };
        (self.kind, self.weights.sorted().0, invariants)
    }
}

fn scalar(a: &RingClass) -> i64 {
    let v = a.integrate_scalar().expect("scalar class");
    v.to_integer() as i64
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} H={} ", self.kind, self.weights, self.level())?;
        match &self.normal {
            NormalBundleData::Point => write!(f, "point"),
            NormalBundleData::Surface { summands } => {
                let parts: Vec<String> = summands
                    .iter()
                    .map(|s| format!("O({})^{:+}", s.degree, s.weight))
                    .collect();
                write!(f, "N = {}", parts.join(" + "))
            }
            NormalBundleData::FourDimExtremal { c1, c2 } => write!(f, "c1(N) = {c1}a, c2(N) = {c2}"),
            NormalBundleData::FourDimSplit { minus, plus } => {
                write!(f, "N = L-{minus:?} + L+{plus:?}")
            }
            NormalBundleData::SixDim { c1 } => write!(f, "N = O({c1})"),
        }
    }
}

/// The fixed-point description of one action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointData {
    pub dimension: u32,
    pub b2: u32,
    pub components: Vec<FixedComponent>,
}

impl FixedPointData {
    pub fn new(components: Vec<FixedComponent>) -> Self {
        FixedPointData {
            dimension: 8,
            b2: 1,
            components,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// `b_i(M) = Σ_F b_{i−2λ_F}(F)`.
    pub fn kirwan_betti(&self, i: u32) -> u32 {
        self.components
            .iter()
            .map(|c| c.kind.betti_at(i as i64 - 2 * c.lambda() as i64))
            .sum()
    }

    /// `[b₀, b₂, b₄, b₆, b₈]`.
    pub fn betti(&self) -> [u32; 5] {
        [0, 2, 4, 6, 8].map(|i| self.kirwan_betti(i))
    }

    pub fn minimum(&self) -> Option<&FixedComponent> {
        let mut it = self.components.iter().filter(|c| c.is_minimum());
        let first = it.next();
        if it.next().is_some() {
            None
        } else {
            first
        }
    }

    pub fn maximum(&self) -> Option<&FixedComponent> {
        let mut it = self.components.iter().filter(|c| c.is_maximum());
        let first = it.next();
        if it.next().is_some() {
            None
        } else {
            first
        }
    }

    /// Non-extremal components.
    pub fn interior(&self) -> impl Iterator<Item = &FixedComponent> {
        self.components.iter().filter(|c| !c.is_extremal())
    }

    /// `(dim M_min, dim M_max)` as given, without normalization.
    pub fn raw_dim_pair(&self) -> Option<(u32, u32)> {
        Some((self.minimum()?.dim(), self.maximum()?.dim()))
    }

    /// `(d₁, d₂)` with `d₁ ≤ d₂` and whether reversal was needed.
    pub fn dim_pair(&self) -> Option<((u32, u32), bool)> {
        let (a, b) = self.raw_dim_pair()?;
        Some(if a <= b { ((a, b), false) } else { ((b, a), true) })
    }

    /// `X ↦ −X`, `H ↦ −H`.
    pub fn reverse_action(&self) -> Self {
        FixedPointData {
            dimension: self.dimension,
            b2: self.b2,
            components: self.components.iter().map(FixedComponent::reversed).collect(),
        }
    }

    /// The same action or its reverse, whichever has `d₁ ≤ d₂`.
    pub fn normalized(&self) -> (Self, bool) {
        match self.dim_pair() {
            Some((_, true)) => (self.reverse_action(), true),
            _ => (self.clone(), false),
        }
    }

    pub fn self_intersection(&self) -> i64 {
        self.components.iter().map(FixedComponent::self_intersection).sum()
    }

    pub fn h_min(&self) -> Option<i64> {
        self.minimum().map(FixedComponent::level)
    }

    pub fn h_max(&self) -> Option<i64> {
        self.maximum().map(FixedComponent::level)
    }

    /// Sorted distinct critical levels.
    pub fn levels(&self) -> Vec<i64> {
        let mut l: Vec<i64> = self.components.iter().map(FixedComponent::level).collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    /// Whether some component has level strictly inside `(a, b)`.
    pub fn has_level_in(&self, a: i64, b: i64) -> bool {
        self.components.iter().any(|c| a < c.level() && c.level() < b)
    }

    /// Components ordered by level, then by key; used for display.
    pub fn sorted_components(&self) -> Vec<&FixedComponent> {
        let mut v: Vec<&FixedComponent> = self.components.iter().collect();
        v.sort_by_key(|c| (c.level(), c.key()));
        v
    }

    pub fn keys(&self) -> Vec<ComponentKey> {
        let mut k: Vec<ComponentKey> = self.components.iter().map(FixedComponent::key).collect();
        k.sort();
        k
    }
}

/// Equality of fixed-point data up to reordering of components and the
/// symmetries of each component.
pub fn fp_equivalent(a: &FixedPointData, b: &FixedPointData) -> bool {
    a.dimension == b.dimension && a.b2 == b.b2 && a.keys() == b.keys()
}

/// Structural and Morse-theoretic sanity checks.
pub fn validate(data: &FixedPointData) -> ConstraintReport {
    let mut r = ConstraintReport::new();
    r.check(
        Rule::Ambient,
        data.dimension == 8 && data.b2 == 1,
        format!("dimension {}, b2 {}", data.dimension, data.b2),
    );

    let bad: Vec<String> = data
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.weights.is_semi_free())
        .map(|(i, c)| format!("component {i} has weights {}", c.weights))
        .collect();
    r.check(Rule::SemiFree, bad.is_empty(), describe(&bad, "all weights in {-1,0,1}"));

    let bad: Vec<String> = data
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.weights.zeros() * 2 != c.dim())
        .map(|(i, c)| format!("component {i} ({}) has {} zero weights", c.kind, c.weights.zeros()))
        .collect();
    r.check(
        Rule::TangentWeights,
        bad.is_empty(),
        describe(&bad, "zero weights match every component dimension"),
    );

    let bad: Vec<String> = data
        .components
        .iter()
        .enumerate()
        .filter_map(|(i, c)| equivariant_euler(c).err().map(|e| format!("component {i}: {e}")))
        .collect();
    r.check(
        Rule::NormalVariant,
        bad.is_empty(),
        describe(&bad, "normal data fits every component"),
    );

    let b = data.betti();
    r.check(Rule::UniqueMinimum, b[0] == 1, format!("b0 = {}", b[0]));
    r.check(Rule::UniqueMaximum, b[4] == 1, format!("b8 = {}", b[4]));

    if let (Some(lo), Some(hi)) = (data.h_min(), data.h_max()) {
        let bad: Vec<String> = data
            .interior()
            .filter(|c| !(lo < c.level() && c.level() < hi))
            .map(|c| format!("{} at level {} outside ({lo},{hi})", c.kind, c.level()))
            .collect();
        r.check(
            Rule::LevelOrder,
            bad.is_empty() && lo < hi,
            describe(&bad, &format!("H_min = {lo} < interior levels < H_max = {hi}")),
        );
    } else {
        r.check(Rule::LevelOrder, false, "no unique extremal components");
    }

    r.check(Rule::KirwanB2, b[1] == 1, format!("b2 = {}", b[1]));
    r.check(
        Rule::Poincare,
        b[0] == b[4] && b[1] == b[3],
        format!("Betti vector {}", betti_string(&b)),
    );
    r.check(Rule::SymplecticB4, b[2] >= 1, format!("b4 = {}", b[2]));
    r
}

fn describe(bad: &[String], ok: &str) -> String {
    if bad.is_empty() {
        ok.to_string()
    } else {
        bad.join("; ")
    }
}

pub fn betti_string(b: &[u32; 5]) -> String {
    format!("(b0,b2,b4,b6,b8) = ({},{},{},{},{})", b[0], b[1], b[2], b[3], b[4])
}

/// `self_intersection == b₄`. The extremal `∫c₂(N_max)` is compared with
/// `b₄` of the manifold `M`.
pub fn signature_check(data: &FixedPointData) -> ConstraintReport {
    let mut r = ConstraintReport::new();
    let si = data.self_intersection();
    let b4 = data.kirwan_betti(4);
    r.check(
        Rule::Signature,
        si == b4 as i64,
        format!("self-intersection {si}, b4(M) = {b4}"),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::SurfaceSummand;

    fn quadric() -> FixedPointData {
        FixedPointData::new(vec![
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
        ])
    }

    #[test]
    fn quadric_betti_and_levels() {
        let d = quadric();
        assert_eq!(d.betti(), [1, 1, 2, 1, 1]);
        assert_eq!(d.levels(), vec![-4, 0, 4]);
        assert_eq!(d.self_intersection(), 2);
        assert!(validate(&d).passed());
        assert!(signature_check(&d).passed());
    }

    #[test]
    fn cp3_self_intersection() {
        let c = |m| FixedComponent::new(ComponentType::CP3, [-1, 0, 0, 0], NormalBundleData::SixDim { c1: m });
        assert_eq!(c(1).self_intersection(), 1);
        assert_eq!(c(0).self_intersection(), 0);
        assert_eq!(c(2).self_intersection(), 0);
        assert_eq!(c(3).self_intersection(), -5);
    }

    #[test]
    fn weight_two_fails_semi_free() {
        let mut d = quadric();
        d.components[0].weights = WeightSignature([2, 1, 1, 1]);
        let r = validate(&d);
        assert_eq!(r.failures().next().unwrap().id, "semi-free");
    }

    #[test]
    fn two_minima_fail() {
        let mut d = quadric();
        d.components.push(FixedComponent::point([1, 1, 1, 1]));
        let r = validate(&d);
        assert!(r.failures().any(|c| c.id == "unique-minimum"));
    }

    #[test]
    fn reversal() {
        let d = FixedPointData::new(vec![
            FixedComponent::point([1, 1, 1, 1]),
            FixedComponent::new(
                ComponentType::CP1,
                [0, -1, 1, 1],
                NormalBundleData::Surface {
                    summands: vec![
                        SurfaceSummand { degree: 2, weight: 1 },
                        SurfaceSummand { degree: 3, weight: -1 },
                        SurfaceSummand { degree: 2, weight: 1 },
                    ],
                },
            ),
        ]);
        let r = d.reverse_action();
        assert_eq!(r.components[0].level(), 4);
        assert_eq!(r.components[1].level(), 1);
        assert_eq!(r.reverse_action(), d);
    }

    #[test]
    fn json_round_trip() {
        let d = quadric();
        assert_eq!(FixedPointData::from_json(&d.to_json()).unwrap(), d);
        assert!(FixedPointData::from_json("{\"dimension\": 8").is_err());
    }
}
