mod common;

use graded_core::dynamics::{
    fixed_points, ks_dichotomy, minimal_invariant_admissible, minimal_invariant_balls, regular_fixed_point,
    regularity_report, RegularityVariant,
};
use graded_core::exec::Execution;
use graded_core::harness::{falsify_with, gen_self_map, gen_system, ClaimId, Constraint, MapKind};
use graded_core::hull::{ball, enumerate_admissible, hull, radii, HullMode};
use graded_core::{Grade, PointSet, RelationalSystem, SelfMap};
use proptest::prelude::*;

fn constraint() -> impl Strategy<Value = Constraint> {
    prop_oneof![
        Just(Constraint::None),
        Just(Constraint::R9),
        Just(Constraint::R10),
        Just(Constraint::Transitive),
    ]
}

fn system() -> impl Strategy<Value = RelationalSystem> {
    (any::<u64>(), constraint(), 1usize..7, 1i64..5)
        .prop_map(|(seed, c, n, span)| gen_system(seed, &common::params((n, n), (span, span), c)))
}

fn system_and_map(kind: MapKind) -> impl Strategy<Value = (RelationalSystem, SelfMap)> {
    (system(), any::<u64>()).prop_map(move |(sys, seed)| {
        let t = gen_self_map(seed, &sys, kind);
        (sys, t)
    })
}

fn transitive_homomorphism() -> impl Strategy<Value = (RelationalSystem, SelfMap)> {
    (any::<u64>(), any::<u64>(), 1usize..7, 1i64..5).prop_map(|(s, m, n, span)| {
        let sys = gen_system(s, &common::params((n, n), (span, span), Constraint::Transitive));
        let t = gen_self_map(m, &sys, MapKind::Homomorphism);
        (sys, t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn asymptotic_implies_regular_implies_weak((sys, t) in system_and_map(MapKind::Any)) {
        for x in sys.points() {
            let r = regularity_report(&sys, &t, x).unwrap();
            prop_assert!(!r.asymptotically_regular || r.regular);
            prop_assert!(!r.regular || r.weak_regular);
            prop_assert_eq!(r.asymptotically_regular, r.classical_asymptotic);
            if let Some(n0) = r.regular_n0 {
                prop_assert!(n0 >= 1);
            }
        }
    }

    #[test]
    fn minimal_invariant_balls_have_no_fixed_points((sys, t) in system_and_map(MapKind::Any)) {
        let fixed = fixed_points(&t);
        for b in minimal_invariant_balls(&sys, &t).unwrap() {
            let pts = ball(&sys, b.center, b.level);
            prop_assert!(!pts.intersects(&fixed));
            prop_assert!(t.image_of(&pts).is_subset(&pts));
        }
    }

    #[test]
    fn minimal_invariant_admissible_sets((sys, t) in system_and_map(MapKind::Homomorphism)) {
        let fixed = fixed_points(&t);
        for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
            let Ok(sets) = minimal_invariant_admissible(&sys, &t, mode) else { continue };
            for (i, a) in sets.iter().enumerate() {
                prop_assert!(a.verify(&sys));
                prop_assert!(t.image_of(&a.points).is_subset(&a.points));
                for b in &sets[i + 1..] {
                    prop_assert!(!a.points.is_subset(&b.points) && !b.points.is_subset(&a.points));
                }
            }
            let singletons: Vec<usize> = sets.iter().filter(|a| a.points.len() == 1).filter_map(|a| a.points.first()).collect();
            prop_assert_eq!(singletons, fixed.to_vec());
        }
    }

    #[test]
    fn admissible_sets_verify_and_are_hull_fixed(sys in system()) {
        for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
            for a in enumerate_admissible(&sys, mode).unwrap() {
                prop_assert!(a.verify(&sys));
                prop_assert_eq!(&hull(&sys, &a.points, mode).unwrap().points, &a.points);
            }
        }
    }

    #[test]
    fn hull_is_extensive_and_idempotent(sys in system(), bits in any::<u32>()) {
        let a = PointSet::from_indices(sys.len(), sys.points().filter(|&x| bits >> x & 1 == 1));
        prop_assume!(!a.is_empty());
        for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
            let h = hull(&sys, &a, mode).unwrap();
            prop_assert!(a.is_subset(&h.points));
            prop_assert_eq!(&hull(&sys, &h.points, mode).unwrap().points, &h.points);
        }
    }

    #[test]
    fn radius_grade_dominates_diameter_grade(sys in system(), bits in any::<u32>()) {
        let a = PointSet::from_indices(sys.len(), sys.points().filter(|&x| bits >> x & 1 == 1));
        prop_assume!(!a.is_empty());
        let r = radii(&sys, &a).unwrap();
        prop_assert!(r.cheb_grade >= r.diam_grade);
        prop_assert!(r.cheb_radius <= r.diameter);
        prop_assert!(r.normality().agree());
        if a.len() == 1 {
            prop_assert_eq!(r.cheb_grade, Grade::Top);
        }
    }

    #[test]
    fn dichotomy_replays((sys, t) in transitive_homomorphism()) {
        let rep = ks_dichotomy(&sys, &t).unwrap();
        prop_assert!(rep.hypotheses_met);
        prop_assert_eq!(rep.neither_count, 0);
        prop_assert!(rep.replay(&sys, &t));
    }

    #[test]
    fn regular_fixed_point_never_refuted((sys, t) in transitive_homomorphism()) {
        for v in [RegularityVariant::Regular, RegularityVariant::Asymptotic] {
            prop_assert!(!regular_fixed_point(&sys, &t, v).unwrap().is_counterexample());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn verdicts_replay_and_are_deterministic(seed in any::<u64>(), pick in 0usize..ClaimId::ALL.len()) {
        let claim = ClaimId::ALL[pick];
        let p = claim.params();
        let a = falsify_with(claim, 60, seed, &p, Execution::Sequential).unwrap();
        let b = falsify_with(claim, 60, seed, &p, Execution::Parallel).unwrap();
        prop_assert!(a.replay());
        prop_assert_eq!(a, b);
    }
}
