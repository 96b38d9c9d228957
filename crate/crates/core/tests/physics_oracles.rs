mod common;

use qpburst::physics::{freq_shift_coefficient, gamma_qp, gap_profile, JunctionGapProfile, QpEnvironment};

use common::gamma_qp_trapezoid;

// Trapezoid oracle value at (f_q 6.5, dDelta 5, Delta_thick 50 GHz, 20 mK,
// x 1e-5, w 0.15 GHz), frozen before the production rule was written.
const V_REFERENCE: f64 = 500_002.972_050_6;

fn weak_point() -> (JunctionGapProfile, QpEnvironment) {
    (JunctionGapProfile::from_gaps(50.0, 5.0), QpEnvironment::new(1e-5, 0.02, 0.15).unwrap())
}

#[test]
fn production_matches_trapezoid_oracle() {
    let (profile, env) = weak_point();
    let oracle = gamma_qp_trapezoid(6.5, &profile, &env, 10_000_000);
    let v = gamma_qp(6.5, &profile, &env).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-6, "{v} vs {oracle}");
    assert!((v / V_REFERENCE - 1.0).abs() < 1e-6, "{v} vs frozen {V_REFERENCE}");
}

#[test]
fn oracle_converges_with_grid() {
    let (profile, env) = weak_point();
    let coarse = gamma_qp_trapezoid(6.5, &profile, &env, 100_000);
    let fine = gamma_qp_trapezoid(6.5, &profile, &env, 1_000_000);
    assert!((coarse / fine - 1.0).abs() < 1e-5);
}

#[test]
fn strong_suppression_against_oracle() {
    let env = QpEnvironment::new(1e-5, 0.02, 0.15).unwrap();
    let weak = gap_profile(30.0, 100.0).unwrap();
    let strong = gap_profile(15.0, 100.0).unwrap();
    let oracle = gamma_qp_trapezoid(6.5, &strong, &env, 2_000_000) / gamma_qp_trapezoid(6.5, &weak, &env, 2_000_000);
    let ratio = gamma_qp(6.5, &strong, &env).unwrap() / gamma_qp(6.5, &weak, &env).unwrap();
    assert!(ratio < 1e-2, "{ratio}");
    assert!((ratio / oracle - 1.0).abs() < 1e-5);
}

#[test]
fn resonance_near_gap_difference_for_narrow_w() {
    let profile = JunctionGapProfile::from_gaps(50.0, 5.0);
    for w in [0.05, 0.03, 0.01] {
        let env = QpEnvironment::new(1e-5, 0.02, w).unwrap();
        let f_star = (0..=2000)
            .map(|i| 4.0 + 2.0 * i as f64 / 2000.0)
            .max_by(|a, b| {
                let ga = gamma_qp(*a, &profile, &env).unwrap();
                let gb = gamma_qp(*b, &profile, &env).unwrap();
                ga.total_cmp(&gb)
            })
            .unwrap();
        assert!((f_star - 5.0).abs() <= 2.0 * w, "w={w}: peak at {f_star}");
    }
}

#[test]
fn closed_form_device_numbers() {
    assert!((gap_profile(30.0, 100.0).unwrap().gap_difference_GHz - 5.08).abs() < 0.01);
    assert!((gap_profile(15.0, 100.0).unwrap().gap_difference_GHz - 12.33).abs() < 0.01);
    assert!((freq_shift_coefficient(12.0, 6.5, 50.0).unwrap() - 0.5243).abs() < 5e-5);
}
