//! Property-based and cross-cutting integration tests.

use helix4::analysis::{detect_helix, Tolerances};
use helix4::curve::{load_curve, save_curve, Curve};
use helix4::minkowski::{CausalCharacter, Vec4};
use helix4::numerics::constancy_statistic;
use proptest::prelude::*;

fn vec4() -> impl Strategy<Value = Vec4> {
    [-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64]
        .prop_map(|[a, b, c, d]| Vec4::new(a, b, c, d))
}

proptest! {
    #[test]
    fn inner_product_is_bilinear(u in vec4(), v in vec4(), w in vec4(), a in -10.0..10.0f64) {
        let lhs = (u * a + v).inner(&w);
        let rhs = a * u.inner(&w) + v.inner(&w);
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn inner_product_is_symmetric(u in vec4(), v in vec4()) {
        prop_assert_eq!(u.inner(&v).to_bits(), v.inner(&u).to_bits());
    }

    #[test]
    fn causal_character_is_scale_invariant(v in vec4(), lambda in 1e-3..1e3f64) {
        let before = v.causal_character(1e-9);
        // Null verdicts use a relative tolerance, so exact nulls are rare
        // under random sampling; spacelike/timelike must not flip.
        if before != CausalCharacter::Null {
            prop_assert_eq!((v * lambda).causal_character(1e-9), before);
        }
    }

    #[test]
    fn normalize_is_idempotent(v in vec4()) {
        prop_assume!(v.inner_sq().abs() > 1e-6 * v.euclid_sq().max(1.0));
        let n = v.normalize().unwrap();
        prop_assert!((n.inner_sq().abs() - 1.0).abs() <= 1e-12);
        let n2 = n.normalize().unwrap();
        prop_assert!((n - n2).euclid_norm() <= 1e-12);
    }

    #[test]
    fn constancy_statistic_ignores_order(mut xs in proptest::collection::vec(-1e3..1e3f64, 2..40)) {
        let a = constancy_statistic(&xs).unwrap();
        xs.reverse();
        let b = constancy_statistic(&xs).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        prop_assert!(a >= 0.0);
    }
}

#[test]
fn curve_csv_round_trip_is_exact() {
    let syn = helix4::presets::preset_synthesized("trig_helix", 2.0, 1e-2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    save_curve(&syn.curve, &path).unwrap();
    let back = load_curve(&path).unwrap();
    assert_eq!(back.points.len(), syn.curve.points.len());
    for (a, b) in back.points.iter().zip(&syn.curve.points) {
        assert_eq!(a.as_array(), b.as_array());
    }
}

/// Detection is a geometric statement: it must survive rigid motions of the
/// ambient space (here, a boost in the x1-x2 plane, which preserves g).
#[test]
fn detection_survives_lorentz_boost() {
    let syn = helix4::presets::preset_synthesized("trig_helix", 2.0, 1e-3).unwrap();
    let phi = 0.7f64;
    let (ch, sh) = (phi.cosh(), phi.sinh());
    let mut boosted = syn.curve.clone();
    for p in &mut boosted.points {
        let [x1, x2, x3, x4] = p.as_array();
        *p = Vec4::new(ch * x1 + sh * x2, sh * x1 + ch * x2, x3, x4);
    }
    let report = detect_helix(&Curve::Sampled(boosted), 1e-3, &Tolerances::sampled()).unwrap();
    assert!(report.is_helix);
    assert!((report.m_value - 5.0).abs() <= 1e-3, "m = {}", report.m_value);
}
