use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use linkgrasp::analysis::{orientation_drift, orthogonality_error, straightness};
use linkgrasp::linkage::{sweep, Mechanism};
use linkgrasp::mechanisms::{
    build_double_parallelogram, build_peaucellier, build_semi_peaucellier, build_sp_diff_finger,
    classify_mode, component_count, component_reduction, inversion_product, output_segment,
    GraspMode, ParallelogramParams, PeaucellierParams, SemiPeaucellierParams,
};

const TOL: f64 = 1e-9;

fn check_inversor(m: &Mechanism, p: &PeaucellierParams) {
    let k = p.inversion_constant();
    let offset = p.line_offset();
    let nominal = p.nominal_input();
    let t = sweep(m, nominal - 1.0, nominal + 1.0, 100).unwrap();
    for s in &t.samples {
        let product = inversion_product(s).unwrap();
        assert!((product - k).abs() <= TOL * k, "EB·ED = {product}");
        let (e, b, d) = (
            s.position("E").unwrap(),
            s.position("B").unwrap(),
            s.position("D").unwrap(),
        );
        let collinear = (b - e).cross(d - e).abs() / ((b - e).norm() * (d - e).norm());
        assert!(collinear <= TOL);
        assert!((d.x + offset).abs() <= TOL, "D.x = {}", d.x);
    }
    let fit = straightness(&t, "D").unwrap();
    assert!(fit.max_deviation <= TOL);
    let first = &t.samples[0];
    let ortho = orthogonality_error(
        &fit,
        first.position("A").unwrap(),
        first.position("E").unwrap(),
    );
    assert!(ortho <= TOL);
}

#[test]
fn inversor_family_draws_straight_lines() {
    for (l, s, r) in [(5.0, 2.0, 3.0), (6.0, 2.5, 3.2), (4.0, 1.0, 2.0)] {
        let p = PeaucellierParams {
            long_link: l,
            rhombus_side: s,
            crank_radius: r,
        };
        check_inversor(&build_peaucellier(&p).unwrap(), &p);
        for overhang in [0.0, 0.5] {
            let sp = SemiPeaucellierParams {
                long_link: l,
                rhombus_side: s,
                crank_radius: r,
                bar_overhang: overhang,
            };
            check_inversor(&build_semi_peaucellier(&sp).unwrap(), &p);
        }
    }
}

#[test]
fn semi_peaucellier_bar_end_rides_the_bar() {
    let sp = SemiPeaucellierParams::default();
    let m = build_semi_peaucellier(&sp).unwrap();
    let t = sweep(&m, PI - 0.8, PI + 0.8, 40).unwrap();
    for s in &t.samples {
        let d = s.position("D").unwrap();
        let end = s.position("bar_end").unwrap();
        let tail = s.position("bar_tail").unwrap();
        assert!((d.distance(end) - sp.bar_overhang).abs() <= TOL);
        assert!((tail - d).cross(end - d).abs() <= TOL);
        assert!((tail - d).dot(end - d) < 0.0);
    }
}

#[test]
fn component_counts() {
    let classical = component_count(&build_peaucellier(&PeaucellierParams::default()).unwrap());
    let semi = component_count(&build_semi_peaucellier(&SemiPeaucellierParams::default()).unwrap());
    assert_eq!((classical, semi), (8, 5));
    assert_eq!(component_reduction(classical, semi), 37.5);
}

#[test]
fn parallelogram_output_keeps_its_orientation() {
    for stages in [1, 2] {
        let p = ParallelogramParams {
            stages,
            ..ParallelogramParams::default()
        };
        let m = build_double_parallelogram(&p).unwrap();
        let seg = output_segment(&m).unwrap();
        let t = sweep(&m, FRAC_PI_2 - FRAC_PI_4, FRAC_PI_2 + FRAC_PI_4, 90).unwrap();
        let drift = orientation_drift(&t, (&seg.0, &seg.1)).unwrap();
        assert!(drift <= TOL, "stages {stages}: drift {drift}");
    }
}

#[test]
fn finger_tip_translates_without_turning() {
    let f = build_sp_diff_finger(
        &SemiPeaucellierParams::default(),
        &ParallelogramParams::finger_default(),
    )
    .unwrap();
    let t = sweep(&f.mechanism, f.open_input, f.closed_input, 100).unwrap();
    let fit = straightness(&t, &f.fingertip_node).unwrap();
    assert!(fit.max_deviation <= TOL);
    let (a, b) = &f.distal_segment;
    assert!(orientation_drift(&t, (a, b)).unwrap() <= TOL);
    let (a, b) = &f.proximal_segment;
    assert!(orientation_drift(&t, (a, b)).unwrap() > 0.1);
    assert!(f.stroke > 0.0);
}

#[test]
fn finger_mode_switches_at_contact() {
    let f = build_sp_diff_finger(
        &SemiPeaucellierParams::default(),
        &ParallelogramParams::finger_default(),
    )
    .unwrap();
    let width = 1.0;
    let contact = f.contact_travel(width);
    assert_eq!(
        classify_mode(&f, width, 0.0),
        GraspMode::LinearParallelPinch
    );
    assert_eq!(
        classify_mode(&f, width, contact),
        GraspMode::LinearParallelPinch
    );
    assert_eq!(
        classify_mode(&f, width, contact + 1e-6),
        GraspMode::SelfAdaptiveEnvelop
    );
    // Wider than the opening: contact happens immediately.
    assert_eq!(
        classify_mode(&f, 10.0 * f.max_gap(), 1e-6),
        GraspMode::SelfAdaptiveEnvelop
    );
}

#[test]
fn documents_round_trip_through_json() {
    let m = build_sp_diff_finger(
        &SemiPeaucellierParams::default(),
        &ParallelogramParams::finger_default(),
    )
    .unwrap()
    .mechanism;
    // Parsing lists anchors first, so compare documents, not structs.
    let back = Mechanism::from_json(&m.to_json()).unwrap();
    assert_eq!(back.to_json(), m.to_json());
    assert_eq!(back.guesses(), m.guesses());
    assert_eq!(component_count(&back), component_count(&m));
}
