use std::ffi::{CStr, CString};
use std::ptr;

use linkgrasp_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(lg_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn peaucellier() -> *mut LgMechanism {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { lg_mechanism_peaucellier(5.0, 2.0, 3.0, &mut m) },
        LgStatus::Ok
    );
    m
}

#[test]
fn sweep_and_analyze() {
    let m = peaucellier();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(lg_sweep(m, 2.14, 4.14, 100, &mut t), LgStatus::Ok);
        let mut n = 0;
        assert_eq!(lg_trajectory_len(t, &mut n), LgStatus::Ok);
        assert_eq!(n, 101);

        let d = CString::new("D").unwrap();
        let mut fit = LgLineFit::default();
        assert_eq!(
            lg_trajectory_straightness(t, d.as_ptr(), &mut fit),
            LgStatus::Ok
        );
        assert!(fit.max_deviation <= 1e-9);
        assert!((fit.centroid_x + 3.5).abs() <= 1e-9);

        let (mut x, mut y) = (0.0, 0.0);
        assert_eq!(
            lg_trajectory_position(t, 50, d.as_ptr(), &mut x, &mut y),
            LgStatus::Ok
        );
        assert!((x + 3.5).abs() <= 1e-9);

        let mut input = 0.0;
        assert_eq!(lg_trajectory_input(t, 100, &mut input), LgStatus::Ok);
        assert_eq!(input, 4.14);

        let mut k = 0.0;
        assert_eq!(lg_trajectory_inversion_product(t, 7, &mut k), LgStatus::Ok);
        assert!((k - 21.0).abs() <= 1e-9 * 21.0);

        assert_eq!(
            lg_trajectory_input(t, 101, &mut input),
            LgStatus::InvalidArgument
        );
        let ghost = CString::new("ghost").unwrap();
        assert_eq!(
            lg_trajectory_position(t, 0, ghost.as_ptr(), &mut x, &mut y),
            LgStatus::InvalidArgument
        );
        assert!(last_error().contains("ghost"));

        lg_trajectory_free(t);
        lg_mechanism_free(m);
    }
}

#[test]
fn orientation_drift_of_parallelogram() {
    let mut m = ptr::null_mut();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            lg_mechanism_double_parallelogram(1.0, 0.5, 2, &mut m),
            LgStatus::Ok
        );
        assert_eq!(lg_sweep(m, 0.8, 2.3, 50, &mut t), LgStatus::Ok);
        let (a, b) = (CString::new("F1").unwrap(), CString::new("F2").unwrap());
        let mut drift = 1.0;
        assert_eq!(
            lg_trajectory_orientation_drift(t, a.as_ptr(), b.as_ptr(), &mut drift),
            LgStatus::Ok
        );
        assert!(drift <= 1e-9);
        lg_trajectory_free(t);
        lg_mechanism_free(m);
    }
}

#[test]
fn json_round_trip_and_counts() {
    let m = peaucellier();
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(lg_mechanism_to_json(m, &mut json), LgStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(lg_mechanism_from_json(json, &mut back), LgStatus::Ok);
        lg_string_free(json);

        let (mut a, mut b) = (0, 0);
        assert_eq!(lg_mechanism_component_count(m, &mut a), LgStatus::Ok);
        assert_eq!(lg_mechanism_component_count(back, &mut b), LgStatus::Ok);
        assert_eq!((a, b), (8, 8));
        let mut mobility = -1;
        assert_eq!(lg_mechanism_mobility(back, &mut mobility), LgStatus::Ok);
        assert_eq!(mobility, 0);

        let mut sp = ptr::null_mut();
        assert_eq!(
            lg_mechanism_semi_peaucellier(5.0, 2.0, 3.0, 0.5, &mut sp),
            LgStatus::Ok
        );
        assert_eq!(lg_mechanism_component_count(sp, &mut a), LgStatus::Ok);
        assert_eq!(a, 5);

        let mut finger = ptr::null_mut();
        assert_eq!(
            lg_mechanism_finger(5.0, 2.0, 3.0, 0.5, 2.0, 1.0, &mut finger),
            LgStatus::Ok
        );

        for h in [m, back, sp, finger] {
            lg_mechanism_free(h);
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            lg_mechanism_peaucellier(1.0, 2.0, 3.0, &mut m),
            LgStatus::Definition
        );
        assert!(m.is_null());
        assert!(!last_error().is_empty());

        let bad = CString::new("{\"nodes\": [").unwrap();
        assert_eq!(
            lg_mechanism_from_json(bad.as_ptr(), &mut m),
            LgStatus::Parse
        );
        assert_eq!(
            lg_mechanism_from_json(ptr::null(), &mut m),
            LgStatus::NullPointer
        );

        let dangling = CString::new(
            r#"{"nodes":[{"id":"A","guess":[0,0]}],
                "constraints":[{"type":"distance","a":"A","b":"ghost","length":1}]}"#,
        )
        .unwrap();
        assert_eq!(
            lg_mechanism_from_json(dangling.as_ptr(), &mut m),
            LgStatus::Definition
        );
        assert!(last_error().contains("ghost"));

        let p = peaucellier();
        let mut t = ptr::null_mut();
        assert_eq!(lg_sweep(p, 1.0, 1.0, 10, &mut t), LgStatus::Definition);
        // Crank angle 0 puts |EB| = 0, far outside the assembly range.
        assert_eq!(lg_sweep(p, 0.0, 0.5, 10, &mut t), LgStatus::NoConvergence);
        lg_mechanism_free(p);

        let mut x = 0;
        assert_eq!(
            lg_mechanism_mobility(ptr::null(), &mut x),
            LgStatus::NullPointer
        );
    }
}

#[test]
fn grasp_functions() {
    let alpha = std::f64::consts::FRAC_PI_4;
    unsafe {
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(
            lg_max_grasp_mass(1.0, 20.0, 1.0, alpha, 5.0, 9.81, &mut a),
            LgStatus::Ok
        );
        assert_eq!(
            lg_max_mass_oracle(1.0, 20.0, 1.0, alpha, 5.0, 9.81, &mut b),
            LgStatus::Ok
        );
        assert!((a - 1.35916).abs() <= 1e-5);
        assert!((a - b).abs() <= 1e-6 * a);
        assert_eq!(
            lg_max_grasp_mass(-1.0, 20.0, 1.0, alpha, 5.0, 9.81, &mut a),
            LgStatus::Domain
        );

        let mut d = 0.0;
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert_eq!(
            lg_max_offset_d(0.5, 10.0, half_pi, 5.0, 9.81, 5.0, &mut d),
            LgStatus::Ok
        );
        assert!((d - 3f64.sqrt()).abs() <= 1e-12);
        assert_eq!(
            lg_max_offset_d(0.5, 10.0, half_pi, 5.0, 9.81, 11.0, &mut d),
            LgStatus::Infeasible
        );
        assert_eq!(
            lg_max_offset_d(0.5, 10.0, 0.0, 5.0, 9.81, 5.0, &mut d),
            LgStatus::Unbounded
        );

        let mut stable = false;
        assert_eq!(
            lg_stable_pinch(0.5, 10.0, 0.0, alpha, 5.0, 9.81, 10.0, &mut stable),
            LgStatus::Ok
        );
        assert!(stable);
        assert_eq!(
            lg_stable_pinch(0.5, 10.0, 0.0, alpha, 5.0, 9.81, 10.5, &mut stable),
            LgStatus::Ok
        );
        assert!(!stable);
    }
}

#[test]
fn contact_forces() {
    let p = LgFingerParams {
        k1: 1.0,
        k2: 1.0,
        l1: 1.0,
        h: 1.0,
        theta2: 0.0,
        mu: 0.0,
        ta: 1.0,
        t2: 0.0,
    };
    let mut out = LgContactForces {
        f1: f64::NAN,
        f2: f64::NAN,
        closure: LgClosure::NotClosed,
    };
    unsafe {
        for matrix in [false, true] {
            assert_eq!(lg_contact_forces(&p, matrix, &mut out), LgStatus::Ok);
            assert_eq!(
                (out.f1, out.f2, out.closure),
                (0.0, 0.5, LgClosure::Marginal)
            );
        }
        let bad = LgFingerParams { k1: 0.0, ..p };
        assert_eq!(lg_contact_forces(&bad, false, &mut out), LgStatus::Domain);
        assert_eq!(
            lg_contact_forces(ptr::null(), false, &mut out),
            LgStatus::NullPointer
        );
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/linkgrasp.h"))
            .expect("header generated by the build script");
    for name in [
        "lg_version",
        "lg_last_error_message",
        "lg_mechanism_from_json",
        "lg_mechanism_peaucellier",
        "lg_mechanism_semi_peaucellier",
        "lg_mechanism_double_parallelogram",
        "lg_mechanism_finger",
        "lg_mechanism_to_json",
        "lg_string_free",
        "lg_mechanism_free",
        "lg_mechanism_mobility",
        "lg_mechanism_component_count",
        "lg_sweep",
        "lg_trajectory_free",
        "lg_trajectory_len",
        "lg_trajectory_input",
        "lg_trajectory_position",
        "lg_trajectory_straightness",
        "lg_trajectory_orientation_drift",
        "lg_trajectory_inversion_product",
        "lg_max_grasp_mass",
        "lg_max_mass_oracle",
        "lg_max_offset_d",
        "lg_stable_pinch",
        "lg_contact_forces",
    ] {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(header.contains("typedef struct LgMechanism LgMechanism;"));
    assert!(header.contains("LG_STATUS_NO_CONVERGENCE = 4"));
}
