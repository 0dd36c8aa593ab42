use std::f64::consts::SQRT_2;

use approx::assert_abs_diff_eq;
use lhv_bell::builtins::Builtin;
use lhv_bell::quantum::ReducedAngles;
use lhv_bell::violation::{optimize, report_at, Objective, Tolerance};
use proptest::prelude::*;

#[test]
fn exact_multiples_of_22_5_degrees() {
    let r = report_at(
        &Builtin::Equality.subject(),
        ReducedAngles::from_degrees(247.5, 67.5, 157.5),
        0.0,
        None,
    )
    .unwrap();
    let eq = r.equality.unwrap();
    assert_abs_diff_eq!(eq.lhs_first, (1.0 + SQRT_2) / 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(eq.lhs_second, (SQRT_2 - 1.0) / 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(
        r.local_bound.unwrap(),
        (3.0 - SQRT_2) / 2.0,
        epsilon = 1e-12
    );
}

#[test]
fn tolerance_marks_where_violation_ends() {
    let angles = ReducedAngles::from_degrees(22.5, -67.5, 22.5);
    for b in [Builtin::Eq33, Builtin::Eq34] {
        let subject = b.subject();
        let r = report_at(&subject, angles, 0.0, Some(Objective::MinimizeLower)).unwrap();
        let g = r.tolerance_paper.gamma().unwrap();
        let below = report_at(&subject, angles, g - 1e-6, Some(Objective::MinimizeLower)).unwrap();
        let above = report_at(&subject, angles, g + 1e-6, Some(Objective::MinimizeLower)).unwrap();
        assert!(below.violated, "{b}");
        assert!(!above.violated, "{b}");
    }
}

#[test]
fn self_consistent_equality_tolerance_is_a_crossing() {
    let subject = Builtin::Equality.subject();
    let angles = ReducedAngles::from_degrees(247.5, 67.5, 157.5);
    let r = report_at(&subject, angles, 0.0, None).unwrap();
    let g = r.tolerance_self_consistent.gamma().unwrap();
    let sum_at = |gamma: f64| {
        report_at(&subject, angles, gamma, None)
            .unwrap()
            .equality
            .unwrap()
            .sum
    };
    assert!(sum_at(g - 1e-6) > 1.0);
    assert!(sum_at(g + 1e-6) <= 1.0 + 1e-9);
}

#[test]
fn local_angles_report_no_violation() {
    let r = report_at(
        &Builtin::Ch.subject(),
        ReducedAngles::from_degrees(0.0, 0.0, 0.0),
        0.0,
        None,
    )
    .unwrap();
    assert!(!r.violated);
    assert_eq!(r.tolerance_paper, Tolerance::NoViolation);
    assert_abs_diff_eq!(r.quantum_value, 0.0, epsilon = 1e-15);
}

#[test]
fn optimizer_is_deterministic_and_seed_independent_in_value() {
    let subject = Builtin::Eq34.subject();
    let a = optimize(&subject, Objective::MinimizeLower, 8, 1).unwrap();
    let b = optimize(&subject, Objective::MinimizeLower, 8, 1).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = optimize(&subject, Objective::MinimizeLower, 8, 12345).unwrap();
    assert_abs_diff_eq!(a.quantum_value, c.quantum_value, epsilon = 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn violation_shrinks_with_noise(g1 in 0.0f64..1.0, g2 in 0.0f64..1.0) {
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let subject = Builtin::Ch.subject();
        let angles = ReducedAngles::from_degrees(-67.5, 202.5, -67.5);
        let a = report_at(&subject, angles, lo, Some(Objective::MaximizeUpper)).unwrap();
        let b = report_at(&subject, angles, hi, Some(Objective::MaximizeUpper)).unwrap();
        prop_assert!(a.quantum_value >= b.quantum_value - 1e-12);
    }

    #[test]
    fn equality_sum_never_drops_below_one(x in -180.0f64..180.0, y in -180.0f64..180.0, z in -180.0f64..180.0) {
        let r = report_at(&Builtin::Equality.subject(), ReducedAngles::from_degrees(x, y, z), 0.0, None).unwrap();
        prop_assert!(r.equality.unwrap().sum >= 1.0 - 1e-12);
    }
}
