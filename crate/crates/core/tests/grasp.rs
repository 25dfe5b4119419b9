mod common;

use std::f64::consts::FRAC_PI_4;

use linkgrasp::grasp::{
    mass_surface, max_grasp_mass, max_mass_oracle, stable_pinch, GraspScenario, SurfaceSettings,
    STANDARD_GRAVITY,
};
use linkgrasp::verify::{check_mass, random_mass_tuples};
use proptest::prelude::*;

use common::{recovered_offset, well_conditioned_tuples};

#[test]
fn closed_form_agrees_with_the_oracle() {
    let checks = check_mass(&random_mass_tuples(11, 1000));
    for c in &checks {
        assert!(c.relative_error() <= 1e-6, "{c:?}");
    }
}

#[test]
fn offset_bound_inverts_the_mass() {
    let (tuples, _) = well_conditioned_tuples(5, 1000);
    for t in &tuples {
        let d = recovered_offset(t);
        assert!((d - t.d).abs() <= 1e-6 * t.d, "{t:?}: {d}");
    }
}

#[test]
fn table_corners() {
    let top = max_grasp_mass(1.0, 20.0, 1.0, FRAC_PI_4, 5.0, STANDARD_GRAVITY);
    assert!((top - (40.0 / 3.0) / 9.81).abs() <= 1e-12);
    assert!((top - 1.35916).abs() / 1.35916 <= 1e-5);
    let low = max_grasp_mass(0.1, 1.0, 1.0, FRAC_PI_4, 5.0, STANDARD_GRAVITY);
    let x = 0.1 * FRAC_PI_4.sin() / 5.0;
    assert!((low - 0.2 / (1.0 + x * x).sqrt() / 9.81).abs() <= 1e-15);
}

#[test]
fn surface_is_monotone() {
    let s = mass_surface((0.1, 1.0), (1.0, 20.0), 10, 20, &SurfaceSettings::default()).unwrap();
    for i in 0..10 {
        for j in 0..20 {
            if i + 1 < 10 {
                assert!(s.at(i + 1, j) >= s.at(i, j));
            }
            if j + 1 < 20 {
                assert!(s.at(i, j + 1) >= s.at(i, j));
            }
        }
    }
}

proptest! {
    #[test]
    fn limit_mass_sits_on_the_stability_boundary(
        mu in 0.05f64..1.0,
        fn_ in 0.5f64..30.0,
        d in 0.0f64..2.0,
        alpha in 0.01f64..3.13,
        max_t in 0.1f64..10.0,
    ) {
        let g = STANDARD_GRAVITY;
        let mass = max_grasp_mass(mu, fn_, d, alpha, max_t, g);
        let at = |weight: f64| GraspScenario { mu, fn_, d, alpha, max_t, g, weight };
        prop_assert!(stable_pinch(&at(g * mass * (1.0 - 1e-9))).unwrap());
        prop_assert!(!stable_pinch(&at(g * mass * (1.0 + 1e-6))).unwrap());
    }

    #[test]
    fn mass_responds_to_each_parameter(
        mu in 0.05f64..1.0,
        fn_ in 0.5f64..30.0,
        d in 0.01f64..2.0,
        alpha in 0.01f64..3.13,
        max_t in 0.1f64..10.0,
        bump in 1.0f64..2.0,
    ) {
        let g = STANDARD_GRAVITY;
        let m = max_grasp_mass(mu, fn_, d, alpha, max_t, g);
        prop_assert!(max_grasp_mass(mu * bump, fn_, d, alpha, max_t, g) >= m);
        prop_assert!(max_grasp_mass(mu, fn_ * bump, d, alpha, max_t, g) >= m);
        prop_assert!(max_grasp_mass(mu, fn_, d * bump, alpha, max_t, g) <= m);
        prop_assert!(max_grasp_mass(mu, fn_, d, alpha, max_t * bump, g) >= m);
        let heavier = max_grasp_mass(mu, fn_, d, alpha, max_t, g * bump);
        prop_assert!((heavier * bump - m).abs() <= 1e-12 * m);
        prop_assert!(m <= 2.0 * mu * fn_ / g);
    }

    #[test]
    fn oracle_tracks_formula(
        mu in 0.0f64..1.0,
        fn_ in 0.0f64..30.0,
        d in 0.0f64..2.0,
        alpha in 0.0f64..std::f64::consts::PI,
        max_t in 0.1f64..10.0,
    ) {
        let g = STANDARD_GRAVITY;
        let a = max_grasp_mass(mu, fn_, d, alpha, max_t, g);
        let b = max_mass_oracle(mu, fn_, d, alpha, max_t, g);
        prop_assert!((a - b).abs() <= 1e-6 * a.max(1e-9), "{} vs {}", a, b);
    }
}
