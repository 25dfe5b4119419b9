mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use linkgrasp::linkage::{assemble, jacobian, mobility_check, residuals, sweep, Mechanism};
use linkgrasp::mechanisms::{
    build_double_parallelogram, build_peaucellier, build_semi_peaucellier, build_sp_diff_finger,
    ParallelogramParams, PeaucellierParams, SemiPeaucellierParams,
};
use linkgrasp::{LinkageError, Point2};
use proptest::prelude::*;

use common::driven_triangle;

const FD_STEP: f64 = 1e-7;
const FD_RTOL: f64 = 1e-5;

fn library() -> Vec<(Mechanism, f64)> {
    let inv = PeaucellierParams::default();
    vec![
        (build_peaucellier(&inv).unwrap(), inv.nominal_input()),
        (
            build_semi_peaucellier(&SemiPeaucellierParams::default()).unwrap(),
            inv.nominal_input(),
        ),
        (
            build_double_parallelogram(&ParallelogramParams::default()).unwrap(),
            PI / 2.0,
        ),
        (
            build_sp_diff_finger(
                &SemiPeaucellierParams::default(),
                &ParallelogramParams::finger_default(),
            )
            .unwrap()
            .mechanism,
            inv.nominal_input(),
        ),
        (driven_triangle(3.0), 0.0),
    ]
}

/// Central differences of the residuals over the free coordinates.
fn fd_jacobian(m: &Mechanism, pos: &BTreeMap<String, Point2>, input: f64) -> Vec<Vec<f64>> {
    let free = m.free_nodes();
    let rows = residuals(m, pos, input).unwrap().len();
    let mut out = vec![vec![0.0; 2 * free.len()]; rows];
    for (k, id) in free.iter().enumerate() {
        for axis in 0..2 {
            let mut plus = pos.clone();
            let mut minus = pos.clone();
            let bump = |p: &mut Point2, h: f64| {
                if axis == 0 {
                    p.x += h
                } else {
                    p.y += h
                }
            };
            bump(plus.get_mut(*id).unwrap(), FD_STEP);
            bump(minus.get_mut(*id).unwrap(), -FD_STEP);
            let rp = residuals(m, &plus, input).unwrap();
            let rm = residuals(m, &minus, input).unwrap();
            for r in 0..rows {
                out[r][2 * k + axis] = (rp[r] - rm[r]) / (2.0 * FD_STEP);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analytic_jacobian_matches_finite_differences(
        which in 0usize..5,
        offsets in prop::collection::vec(-0.3f64..0.3, 64),
    ) {
        let (m, input) = library().swap_remove(which);
        let mut pos = m.guesses();
        for (i, id) in m.free_nodes().iter().enumerate() {
            let p = pos.get_mut(*id).unwrap();
            p.x += offsets[(2 * i) % 64];
            p.y += offsets[(2 * i + 1) % 64];
        }
        let analytic = jacobian(&m, &pos).unwrap();
        let numeric = fd_jacobian(&m, &pos, input);
        prop_assert_eq!(analytic.len(), numeric.len());
        for (ra, rn) in analytic.iter().zip(&numeric) {
            for (a, n) in ra.iter().zip(rn) {
                prop_assert!((a - n).abs() <= FD_RTOL * a.abs().max(1.0), "{} vs {}", a, n);
            }
        }
    }

    #[test]
    fn crank_sweep_reverses(delta in 0.2f64..1.0, steps in 4usize..40) {
        let m = build_peaucellier(&PeaucellierParams::default()).unwrap();
        let from = PI - delta;
        let to = PI + delta;
        let fwd = sweep(&m, from, to, steps).unwrap();
        let back = sweep(&m.with_guesses(&fwd.samples[steps].positions), to, from, steps).unwrap();
        for k in 0..=steps {
            let a = &fwd.samples[k];
            let b = &back.samples[steps - k];
            for (id, p) in &a.positions {
                prop_assert!(p.distance(b.positions[id]) <= 1e-9, "{id} at sample {k}");
            }
        }
    }
}

#[test]
fn every_library_mechanism_is_well_constrained() {
    for (m, input) in library() {
        assert_eq!(mobility_check(&m), 0);
        let c = assemble(&m, input, &m.guesses()).unwrap();
        assert!(c.residual_norm <= 1e-12);
    }
}

#[test]
fn triangle_closed_form() {
    let m = driven_triangle(3.0);
    let c = assemble(&m, 0.0, &m.guesses()).unwrap();
    let r = c.position("R").unwrap();
    assert!((r.x - 2.0).abs() <= 1e-12);
    assert!((r.y - 5f64.sqrt()).abs() <= 1e-12);
}

#[test]
fn infeasible_triangle_reports_the_input() {
    let m = driven_triangle(1.0);
    match assemble(&m, 0.25, &m.guesses()) {
        Err(LinkageError::NoConvergence { input, .. }) => assert_eq!(input, 0.25),
        other => panic!("expected NoConvergence, got {other:?}"),
    }
}

#[test]
fn peaucellier_pose_mirrors_about_the_axis() {
    let m = build_peaucellier(&PeaucellierParams::default()).unwrap();
    for delta in [0.1, 0.5, 0.9] {
        let up = assemble(&m, PI + delta, &m.guesses()).unwrap();
        let down = assemble(&m, PI - delta, &m.guesses()).unwrap();
        for id in ["B", "D"] {
            let a = up.position(id).unwrap();
            let b = down.position(id).unwrap();
            assert!(
                (a.x - b.x).abs() <= 1e-9 && (a.y + b.y).abs() <= 1e-9,
                "{id}"
            );
        }
    }
}

#[test]
fn sweeps_are_repeatable() {
    let m = build_semi_peaucellier(&SemiPeaucellierParams::default()).unwrap();
    let a = sweep(&m, 2.5, 3.8, 50).unwrap();
    let b = sweep(&m, 2.5, 3.8, 50).unwrap();
    assert_eq!(a, b);
}
