//! Invariants checked on generated inputs.

use proptest::prelude::*;
use semifree::classifier::rules::index_from_extremal;
use semifree::classifier::{catalog, evaluate, Mode};
use semifree::localization::{abbv_sum, NormalBundleData, SurfaceSummand};
use semifree::model::{fp_equivalent, ComponentType, FixedComponent, FixedPointData};
use semifree::poly::Poly;
use semifree::ring::{ring_cpn, ring_p1xp1, ring_plane_bundle, ring_projectivized, RingClass, RingHandle};

fn ring_strategy() -> impl Strategy<Value = RingHandle> {
    prop_oneof![
        (1u32..=4).prop_map(|n| ring_cpn(n).unwrap()),
        Just(ring_p1xp1()),
        (-4i64..=4).prop_map(ring_projectivized),
        ((-3i64..=3), (-3i64..=3)).prop_map(|(a, b)| ring_plane_bundle(a, b)),
    ]
}

fn class(ring: &RingHandle, terms: &[(Vec<u32>, Vec<i64>)]) -> RingClass {
    let n = ring.generators().len();
    let mut acc = RingClass::zero(ring);
    for (exps, coeffs) in terms {
        let exps: Vec<u32> = exps.iter().take(n).copied().chain(std::iter::repeat(0)).take(n).collect();
        acc = &acc + &RingClass::monomial(ring, &exps, Poly::from_ints(coeffs));
    }
    acc
}

fn terms() -> impl Strategy<Value = Vec<(Vec<u32>, Vec<i64>)>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=3, 2), prop::collection::vec(-3i64..=3, 0..3)),
        0..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(ring in ring_strategy(), a in terms(), b in terms(), c in terms()) {
        let (a, b, c) = (class(&ring, &a), class(&ring, &b), class(&ring, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &RingClass::one(&ring), a.clone());
        prop_assert!((&a - &a).is_zero());
    }
}

fn component_strategy() -> impl Strategy<Value = FixedComponent> {
    let point = prop::sample::select(vec![
        [1, 1, 1, 1],
        [-1, 1, 1, 1],
        [-1, -1, 1, 1],
        [-1, -1, -1, 1],
        [-1, -1, -1, -1],
    ])
    .prop_map(FixedComponent::point);
    let surface = (
        prop::sample::select(vec![[0, 1, 1, 1], [-1, 0, 1, 1], [-1, -1, 0, 1], [-1, -1, -1, 0]]),
        prop::collection::vec(-4i64..=4, 3),
    )
        .prop_map(|(w, d)| {
            let signs = w.iter().copied().filter(|x| *x != 0);
            let summands = signs.zip(d).map(|(weight, degree)| SurfaceSummand { degree, weight }).collect();
            FixedComponent::new(ComponentType::CP1, w, NormalBundleData::Surface { summands })
        });
    let plane = (prop::bool::ANY, -4i64..=4, -4i64..=4).prop_map(|(lo, c1, c2)| {
        let w = if lo { [0, 0, 1, 1] } else { [-1, -1, 0, 0] };
        FixedComponent::new(ComponentType::CP2, w, NormalBundleData::FourDimExtremal { c1, c2 })
    });
    let split = (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(p, q, r, s)| {
        FixedComponent::new(
            ComponentType::P1xP1,
            [-1, 0, 0, 1],
            NormalBundleData::FourDimSplit { minus: vec![p, q], plus: vec![r, s] },
        )
    });
    let six = (prop::bool::ANY, -3i64..=3).prop_map(|(lo, m)| {
        let w = if lo { [0, 0, 0, 1] } else { [-1, 0, 0, 0] };
        FixedComponent::new(ComponentType::CP3, w, NormalBundleData::SixDim { c1: m })
    });
    prop_oneof![point, surface, plane, split, six]
}

fn data_strategy() -> impl Strategy<Value = FixedPointData> {
    prop::collection::vec(component_strategy(), 1..6).prop_map(FixedPointData::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reversal_is_an_involution(d in data_strategy()) {
        let r = d.reverse_action();
        prop_assert_eq!(r.reverse_action(), d.clone());
        let mut b = d.betti();
        b.reverse();
        prop_assert_eq!(r.betti(), b);
        prop_assert_eq!(abbv_sum(&r.components).unwrap(), abbv_sum(&d.components).unwrap());
        prop_assert_eq!(r.self_intersection(), d.self_intersection());
    }

    #[test]
    fn reversal_preserves_every_verdict(d in data_strategy()) {
        let a = evaluate(&d, Mode::Full);
        let b = evaluate(&d.reverse_action(), Mode::Full);
        prop_assert_eq!(a.passed(), b.passed());
        prop_assert_eq!(a.betti.iter().rev().copied().collect::<Vec<_>>(), b.betti.to_vec());
    }

    #[test]
    fn component_order_is_irrelevant(d in data_strategy(), seed in any::<u64>()) {
        let mut shuffled = d.clone();
        let n = shuffled.components.len();
        shuffled.components.rotate_left((seed as usize) % n);
        prop_assert!(fp_equivalent(&d, &shuffled));
        prop_assert_eq!(evaluate(&d, Mode::Full).passed(), evaluate(&shuffled, Mode::Full).passed());
    }
}

#[test]
fn catalog_reversal_keeps_index_and_verdict() {
    for e in catalog() {
        let r = e.data.reverse_action();
        assert_eq!(
            index_from_extremal(&e.data).unwrap().value,
            index_from_extremal(&r).unwrap().value,
            "{}",
            e.name
        );
        assert!(evaluate(&r, Mode::Full).passed(), "{}", e.name);
    }
}

#[test]
fn catalog_betti_is_palindromic() {
    for e in catalog() {
        let b = e.data.betti();
        assert_eq!(b, [b[4], b[3], b[2], b[1], b[0]], "{}", e.name);
        assert_eq!(b[2], e.b4, "{}", e.name);
    }
}
