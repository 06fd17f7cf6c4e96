//! Exhaustive search for fixed-point data of a given shape `(d₁, d₂)`.
//!
//! A skeleton fixes the type and weights of every component except the
//! isolated `{−1,−1,1,1}` points, whose number `N₂` is swept separately.
//! Skeletons are filtered by the Kirwan sums alone. Each remaining slot
//! gets a finite list of normal-bundle options, and the slot with the most
//! options is matched against the rest through the two linear invariants
//! every survivor must satisfy: `Σ ABBV = 0` and `Σ self-intersection = b₄`.

use super::{evaluate, Mode};
use crate::dh;
use crate::localization::{contribution_closed_form, contribution_isolated, NormalBundleData, SurfaceSummand};
use crate::model::{ComponentKey, ComponentType, FixedComponent, FixedPointData};
use crate::poly::{serialize_q, Q};
use crate::report::{Check, ConstraintReport, Rule, Verdict};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Largest `|a|` for one summand of a surface normal bundle.
pub const SURFACE_BOUND: i64 = 12;
/// Largest `|a|` for a line-bundle coordinate of a split normal bundle.
pub const SPLIT_BOUND: i64 = 6;
/// Most copies of one interior component kind in a skeleton.
const MAX_SLOT_COPIES: usize = 2;

const LAMBDA2_POINT: [i64; 4] = [-1, -1, 1, 1];

/// Interior component kinds other than the `{−1,−1,1,1}` point.
const INTERIOR_KINDS: [(ComponentType, [i64; 4]); 6] = [
    (ComponentType::Point, [-1, 1, 1, 1]),
    (ComponentType::Point, [-1, -1, -1, 1]),
    (ComponentType::CP1, [-1, 0, 1, 1]),
    (ComponentType::CP1, [-1, -1, 0, 1]),
    (ComponentType::CP2, [-1, 0, 0, 1]),
    (ComponentType::P1xP1, [-1, 0, 0, 1]),
];

/// The shapes `(d₁, d₂)` with `d₁ ≤ d₂`.
pub const ALL_SHAPES: [(u32, u32); 10] = [
    (0, 0),
    (0, 2),
    (0, 4),
    (0, 6),
    (2, 2),
    (2, 4),
    (2, 6),
    (4, 4),
    (4, 6),
    (6, 6),
];

/// How candidates are evaluated. Without the `parallel` feature both
/// variants run sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("shape ({0},{1}) is not admissible: {2}")]
    Inadmissible(u32, u32, Check),
    #[error("({0},{1}) is not a pair of even dimensions 0 ≤ d₁ ≤ d₂ ≤ 6")]
    NotAShape(u32, u32),
}

/// Whether a shape survives the Kirwan and four-dimensional-component
/// tests, with the failed check otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeStatus {
    pub shape: (u32, u32),
    pub rejection: Option<Check>,
}

impl ShapeStatus {
    pub fn admissible(&self) -> bool {
        self.rejection.is_none()
    }
}

/// One surviving fixed-point description.
#[derive(Debug, Clone, Serialize)]
pub struct Member {
    pub n2: u32,
    pub b4: u32,
    pub index: Option<i64>,
    /// Components other than the `{−1,−1,1,1}` points.
    pub components: Vec<String>,
    /// `4∫DH`, recorded only when the DH pieces built from both ends agree.
    #[serde(serialize_with = "serialize_opt_q")]
    pub volume: Option<Q>,
    /// `∫c₁⁴` from the half-volume formulas, for the patterns they cover.
    #[serde(serialize_with = "serialize_opt_q")]
    pub half_volume: Option<Q>,
    /// Whether the DH pieces built from both ends agree.
    pub profile_identity: bool,
    pub data: FixedPointData,
    pub checks: ConstraintReport,
}

fn serialize_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_q(x, s),
        None => s.serialize_none(),
    }
}

/// Members sharing a skeleton, parameterized by `N₂` and the Chern data.
#[derive(Debug, Clone, Serialize)]
pub struct Family {
    pub structure: String,
    pub members: Vec<Member>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationResult {
    pub shape: (u32, u32),
    pub b4_max: u32,
    pub families: Vec<Family>,
    /// Data passing every rule except those pinning down the index.
    pub index_rejected: Vec<Member>,
    pub candidates_checked: usize,
}

impl EnumerationResult {
    pub fn members(&self) -> impl Iterator<Item = &Member> {
        self.families.iter().flat_map(|f| f.members.iter())
    }

    pub fn max_b4(&self) -> Option<u32> {
        self.members().map(|m| m.b4).max()
    }
}

type Skeleton = Vec<(ComponentType, [i64; 4])>;

fn lambda_of(w: &[i64; 4]) -> i64 {
    w.iter().filter(|x| **x < 0).count() as i64
}

/// Kirwan Betti vector of a skeleton with no `{−1,−1,1,1}` points.
fn skeleton_betti(s: &Skeleton) -> [u32; 5] {
    let mut b = [0u32; 5];
    for (kind, w) in s {
        let lambda = lambda_of(w);
        for (i, slot) in b.iter_mut().enumerate() {
            *slot += kind.betti_at(2 * i as i64 - 2 * lambda);
        }
    }
    b
}

fn extremal_types(d: u32) -> Vec<ComponentType> {
    ComponentType::ALL.into_iter().filter(|t| t.dim() == d).collect()
}

/// Weights of an extremal component: zeros for the tangent directions,
/// `+1` (minimum) or `−1` (maximum) for the normal ones.
fn extremal_weights(kind: ComponentType, minimum: bool) -> [i64; 4] {
    let zeros = (kind.dim() / 2) as usize;
    let mut w = [0; 4];
    for (i, x) in w.iter_mut().enumerate() {
        if i >= zeros {
            *x = if minimum { 1 } else { -1 };
        }
    }
    w
}

fn is_even_shape(shape: (u32, u32)) -> bool {
    ALL_SHAPES.contains(&shape)
}

fn extremal_pairs(shape: (u32, u32)) -> Vec<Skeleton> {
    let mut out = Vec::new();
    for lo in extremal_types(shape.0) {
        for hi in extremal_types(shape.1) {
            out.push(vec![(lo, extremal_weights(lo, true)), (hi, extremal_weights(hi, false))]);
        }
    }
    out
}

/// Skeletons whose Kirwan sums give `b₀ = b₂ = b₆ = b₈ = 1` and leave
/// room for `1 ≤ b₄ ≤ b4_max` after adding `{−1,−1,1,1}` points.
fn kirwan_skeletons(shape: (u32, u32), b4_max: u32) -> Vec<Skeleton> {
    let mut out = Vec::new();
    let slots = INTERIOR_KINDS.len() as u32;
    let combos = (MAX_SLOT_COPIES as u32 + 1).pow(slots);
    for base in extremal_pairs(shape) {
        for code in 0..combos {
            let mut s = base.clone();
            let mut c = code;
            for kind in INTERIOR_KINDS {
                let copies = (c % (MAX_SLOT_COPIES as u32 + 1)) as usize;
                c /= MAX_SLOT_COPIES as u32 + 1;
                s.extend(std::iter::repeat(kind).take(copies));
            }
            let b = skeleton_betti(&s);
            if b[0] == 1 && b[1] == 1 && b[3] == 1 && b[4] == 1 && b[2] <= b4_max {
                out.push(s);
            }
        }
    }
    out
}

/// Runs the Kirwan and four-dimensional-component tests on every shape.
pub fn admissible_dim_pairs() -> Vec<ShapeStatus> {
    ALL_SHAPES
        .iter()
        .map(|&shape| ShapeStatus {
            shape,
            rejection: shape_rejection(shape),
        })
        .collect()
}

fn shape_rejection(shape: (u32, u32)) -> Option<Check> {
    let best = extremal_pairs(shape)
        .iter()
        .map(skeleton_betti)
        .min_by_key(|b| b[1].max(b[3]))
        .expect("every dimension has a component type");
    if best[1] >= 2 || best[3] >= 2 {
        return Some(Check::new(
            Rule::ShapeKirwan,
            Verdict::Fail,
            format!(
                "M_min and M_max alone give b2 = {}, b6 = {}",
                best[1], best[3]
            ),
        ));
    }
    // b₄ is unbounded here: extra {−1,−1,1,1} points only raise it.
    let skeletons = kirwan_skeletons(shape, u32::MAX);
    if !skeletons.iter().any(|s| s.iter().any(|(k, _)| k.dim() >= 4)) {
        return Some(Check::new(
            Rule::ShapeFourDim,
            Verdict::Fail,
            format!(
                "none of the {} Kirwan-admissible component sets has a component of dimension ≥ 4",
                skeletons.len()
            ),
        ));
    }
    None
}

/// One admissible normal bundle for a slot, with its two additive invariants.
struct SlotOption {
    comp: FixedComponent,
    abbv: Q,
    self_int: i64,
}

fn surface_options(w: [i64; 4]) -> Vec<NormalBundleData> {
    let nonzero: Vec<i64> = w.iter().copied().filter(|x| *x != 0).collect();
    let count = |sign: i64| nonzero.iter().filter(|x| x.signum() == sign).count() as i64;
    let range = |sign: i64| {
        let n = count(sign);
        -SURFACE_BOUND * n..=SURFACE_BOUND * n
    };
    let mut out = Vec::new();
    for neg in range(-1) {
        for pos in range(1) {
            // Only the sum per weight sign is an invariant: put it on the
            // first summand of that sign.
            let mut seen = BTreeSet::new();
            let summands = nonzero
                .iter()
                .map(|&weight| {
                    let first = seen.insert(weight);
                    let degree = match (first, weight < 0) {
                        (true, true) => neg,
                        (true, false) => pos,
                        _ => 0,
                    };
                    SurfaceSummand { degree, weight }
                })
                .collect();
            out.push(NormalBundleData::Surface { summands });
        }
    }
    out
}

fn normal_options(kind: ComponentType, w: [i64; 4], chern: i64) -> Vec<NormalBundleData> {
    let extremal = lambda_of(&w) == 0 || w.iter().all(|x| *x <= 0);
    let box_ = |b: i64| -b..=b;
    match kind {
        ComponentType::Point => vec![NormalBundleData::Point],
        ComponentType::CP1 => surface_options(w),
        ComponentType::CP2 if extremal => box_(chern)
            .flat_map(|c1| box_(chern).map(move |c2| NormalBundleData::FourDimExtremal { c1, c2 }))
            .collect(),
        ComponentType::CP2 => box_(SPLIT_BOUND)
            .flat_map(|a| {
                box_(SPLIT_BOUND).map(move |b| NormalBundleData::FourDimSplit {
                    minus: vec![a],
                    plus: vec![b],
                })
            })
            .collect(),
        // An extremal CP1xCP1 already fails the Kirwan sums.
        ComponentType::P1xP1 if extremal => vec![],
        ComponentType::P1xP1 => {
            let mut out = Vec::new();
            for p in box_(SPLIT_BOUND) {
                for q in box_(SPLIT_BOUND) {
                    for r in box_(SPLIT_BOUND) {
                        for s in box_(SPLIT_BOUND) {
                            // The factor swap identifies (p,q,r,s) with (q,p,s,r).
                            if (p, q, r, s) <= (q, p, s, r) {
                                out.push(NormalBundleData::FourDimSplit {
                                    minus: vec![p, q],
                                    plus: vec![r, s],
                                });
                            }
                        }
                    }
                }
            }
            out
        }
        ComponentType::CP3 => box_(chern).map(|c1| NormalBundleData::SixDim { c1 }).collect(),
    }
}

fn slot_options(kind: ComponentType, w: [i64; 4], chern: i64) -> Vec<SlotOption> {
    normal_options(kind, w, chern)
        .into_iter()
        .map(|n| FixedComponent::new(kind, w, n))
        .filter(|c| c.c1_restricted().iter().all(|a| *a > 0))
        .map(|comp| SlotOption {
            abbv: contribution_closed_form(&comp).expect("options are well formed"),
            self_int: comp.self_intersection(),
            comp,
        })
        .collect()
}

struct Prepared {
    base_b4: u32,
    /// Option lists; the last one is the lookup slot.
    slots: Vec<Vec<SlotOption>>,
    lookup: HashMap<(Q, i64), Vec<usize>>,
}

fn prepare(skeleton: Skeleton, chern: i64) -> Prepared {
    let base_b4 = skeleton_betti(&skeleton)[2];
    let mut slots: Vec<Vec<SlotOption>> = skeleton
        .iter()
        .map(|&(kind, w)| slot_options(kind, w, chern))
        .collect();
    slots.sort_by_key(Vec::len);
    let mut lookup: HashMap<(Q, i64), Vec<usize>> = HashMap::new();
    if let Some(last) = slots.last() {
        for (i, o) in last.iter().enumerate() {
            lookup.entry((o.abbv, o.self_int)).or_default().push(i);
        }
    }
    Prepared {
        base_b4,
        slots,
        lookup,
    }
}

/// Outcome of evaluating one candidate.
enum Outcome {
    Member(Member),
    IndexRejected(Member),
    Rejected,
}

/// All candidates of one prepared skeleton with exactly `n2` extra points.
fn candidates(p: &Prepared, n2: u32) -> Vec<FixedPointData> {
    let Some((last, rest)) = p.slots.split_last() else {
        return Vec::new();
    };
    let b4 = (p.base_b4 + n2) as i64;
    let points_abbv = Q::from(contribution_isolated(2) as i128) * Q::from(n2 as i128);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(rest.len());
    walk(rest, &mut chosen, Q::zero(), 0, &mut |chosen, abbv, si| {
        let key = (-(abbv + points_abbv), b4 - si);
        for &j in p.lookup.get(&key).into_iter().flatten() {
            let mut comps: Vec<FixedComponent> =
                chosen.iter().zip(rest).map(|(&i, opts)| opts[i].comp.clone()).collect();
            comps.push(last[j].comp.clone());
            comps.extend((0..n2).map(|_| FixedComponent::point(LAMBDA2_POINT)));
            out.push(FixedPointData::new(comps));
        }
    });
    out
}

fn walk(
    slots: &[Vec<SlotOption>],
    chosen: &mut Vec<usize>,
    abbv: Q,
    si: i64,
    visit: &mut dyn FnMut(&[usize], Q, i64),
) {
    let depth = chosen.len();
    if depth == slots.len() {
        visit(chosen, abbv, si);
        return;
    }
    for (i, o) in slots[depth].iter().enumerate() {
        chosen.push(i);
        walk(slots, chosen, abbv + o.abbv, si + o.self_int, visit);
        chosen.pop();
    }
}

fn structure_of(data: &FixedPointData) -> String {
    data.sorted_components()
        .into_iter()
        .filter(|c| !(c.kind == ComponentType::Point && c.weights.0 == LAMBDA2_POINT))
        .map(|c| format!("{}{}", c.kind, c.weights))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn judge(data: FixedPointData, n2: u32) -> Outcome {
    let ev = evaluate(&data, Mode::Search);
    let member = |ev: super::Evaluation, data: FixedPointData| {
        let identity = dh::two_sided_identity(&data).map(|p| p.is_zero()).unwrap_or(false);
        let volume = if identity {
            dh::profile(&data).ok().map(|p| p.volume())
        } else {
            None
        };
        let mut checks = ConstraintReport::new();
        for s in ev.sections {
            checks.extend(s.checks);
        }
        Member {
            n2,
            b4: ev.betti[2],
            index: ev.index,
            components: data
                .sorted_components()
                .into_iter()
                .filter(|c| !(c.kind == ComponentType::Point && c.weights.0 == LAMBDA2_POINT))
                .map(|c| c.to_string())
                .collect(),
            volume,
            half_volume: dh::total_volume(&data).value(),
            profile_identity: identity,
            data,
            checks,
        }
    };
    if ev.passed() {
        Outcome::Member(member(ev, data))
    } else if ev.passed_except_index() {
        Outcome::IndexRejected(member(ev, data))
    } else {
        Outcome::Rejected
    }
}

fn run<T: Send, R: Send>(items: Vec<T>, exec: Execution, f: impl Fn(T) -> Vec<R> + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return items.into_par_iter().flat_map_iter(f).collect();
    }
    let _ = exec;
    items.into_iter().flat_map(f).collect()
}

/// [`enumerate_case_with`] using the default execution.
pub fn enumerate_case(shape: (u32, u32), b4_max: u32) -> Result<EnumerationResult, EnumerationError> {
    enumerate_case_with(shape, b4_max, Execution::default())
}

/// Every fixed-point description of shape `shape` with `b₄ ≤ b4_max`
/// inside the search box, grouped by skeleton in canonical order.
pub fn enumerate_case_with(
    shape: (u32, u32),
    b4_max: u32,
    exec: Execution,
) -> Result<EnumerationResult, EnumerationError> {
    if !is_even_shape(shape) {
        return Err(EnumerationError::NotAShape(shape.0, shape.1));
    }
    if let Some(check) = shape_rejection(shape) {
        return Err(EnumerationError::Inadmissible(shape.0, shape.1, check));
    }
    let chern = b4_max as i64 + 2;
    let prepared: Vec<Prepared> = run(kirwan_skeletons(shape, b4_max), exec, |s| vec![prepare(s, chern)]);

    let work: Vec<(&Prepared, u32)> = prepared
        .iter()
        .flat_map(|p| {
            let lo = 1u32.saturating_sub(p.base_b4);
            (lo..=b4_max.saturating_sub(p.base_b4)).map(move |n2| (p, n2))
        })
        .collect();
    let batches: Vec<(Vec<FixedPointData>, u32)> = run(work, exec, |(p, n2)| vec![(candidates(p, n2), n2)]);

    // Duplicate slots produce the same data in several orders.
    let mut seen: BTreeSet<Vec<ComponentKey>> = BTreeSet::new();
    let mut unique: Vec<(FixedPointData, u32)> = Vec::new();
    for (batch, n2) in batches {
        for d in batch {
            if seen.insert(d.keys()) {
                unique.push((d, n2));
            }
        }
    }
    let candidates_checked = unique.len();
    let outcomes = run(unique, exec, |(d, n2)| vec![judge(d, n2)]);

    let mut families: BTreeMap<String, Vec<Member>> = BTreeMap::new();
    let mut index_rejected = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Member(m) => families.entry(structure_of(&m.data)).or_default().push(m),
            Outcome::IndexRejected(m) => index_rejected.push(m),
            Outcome::Rejected => {}
        }
    }
    let order = |m: &Member| (m.n2, m.data.keys());
    let families = families
        .into_iter()
        .map(|(structure, mut members)| {
            members.sort_by_key(order);
            Family { structure, members }
        })
        .collect();
    index_rejected.sort_by_key(|m: &Member| (structure_of(&m.data), m.n2, m.data.keys()));
    Ok(EnumerationResult {
        shape,
        b4_max,
        families,
        index_rejected,
        candidates_checked,
    })
}

/// Enumerates every admissible shape.
pub fn enumerate_all(b4_max: u32, exec: Execution) -> Vec<EnumerationResult> {
    admissible_dim_pairs()
        .into_iter()
        .filter(ShapeStatus::admissible)
        .map(|s| enumerate_case_with(s.shape, b4_max, exec).expect("shape is admissible"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_set() {
        let ok: Vec<(u32, u32)> = admissible_dim_pairs()
            .into_iter()
            .filter(ShapeStatus::admissible)
            .map(|s| s.shape)
            .collect();
        assert_eq!(ok, vec![(0, 0), (0, 4), (0, 6), (2, 4), (4, 4)]);
    }

    #[test]
    fn extremal_weight_layout() {
        assert_eq!(extremal_weights(ComponentType::CP1, true), [0, 1, 1, 1]);
        assert_eq!(extremal_weights(ComponentType::CP2, false), [0, 0, -1, -1]);
        assert_eq!(extremal_weights(ComponentType::Point, false), [-1, -1, -1, -1]);
    }

    #[test]
    fn surface_options_are_canonical() {
        let opts = surface_options([-1, 0, 1, 1]);
        assert_eq!(opts.len(), 25 * 49);
        let NormalBundleData::Surface { summands } = &opts[0] else { panic!() };
        assert_eq!(summands.iter().filter(|s| s.degree != 0).count(), 2);
    }

    #[test]
    fn zero_six_is_unique() {
        let r = enumerate_case_with((0, 6), 4, Execution::Sequential).unwrap();
        let members: Vec<&Member> = r.members().collect();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].index, Some(5));
        assert_eq!(members[0].b4, 1);
    }

    #[test]
    fn rejects_non_shape() {
        assert!(matches!(enumerate_case((1, 3), 4), Err(EnumerationError::NotAShape(1, 3))));
        assert!(matches!(enumerate_case((2, 6), 4), Err(EnumerationError::Inadmissible(2, 6, _))));
    }
}
