#![allow(dead_code)]

use std::collections::BTreeMap;

use linkgrasp::linkage::{Constraint, Mechanism, Node};
use linkgrasp::Point2;

/// `P` grounded, `Q` driven on a radius-4 crank about `P`, `R` joined to
/// both by links of length `len`. At input 0 and `len = 3` the closed form
/// puts `R` at `(2, √5)`; `len < 2` cannot close.
pub fn driven_triangle(len: f64) -> Mechanism {
    Mechanism::new(
        vec![
            Node::new("P", Point2::ORIGIN),
            Node::new("Q", Point2::new(4.0, 0.0)),
            Node::new("R", Point2::new(2.0, 2.0)),
        ],
        vec![
            Constraint::anchor("P", Point2::ORIGIN),
            Constraint::distance("P", "Q", 4.0),
            Constraint::driven_angle("P", "Q", 0.0).with_id("drive"),
            Constraint::distance("P", "R", len),
            Constraint::distance("Q", "R", len),
        ],
        Some("drive"),
        vec![],
    )
    .expect("valid triangle")
}

pub fn positions(pairs: &[(&str, Point2)]) -> BTreeMap<String, Point2> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

use linkgrasp::grasp::{max_grasp_mass, max_offset_d, GraspScenario};
use linkgrasp::verify::{random_mass_tuples, MassTuple};

/// Smallest `x = μFn·d·sin α / maxT` kept in the offset round trip. Below
/// it `d` barely moves the mass and recovering `d` from `G` loses about
/// `ε/x²` relative accuracy.
pub const MIN_MOMENT_RATIO: f64 = 1e-4;

pub fn moment_ratio(t: &MassTuple) -> f64 {
    t.mu * t.fn_ * t.d * t.alpha.sin() / t.max_t
}

/// Recovers `d` from `G = g · max_grasp_mass` through the offset bound.
pub fn recovered_offset(t: &MassTuple) -> f64 {
    let weight = t.g * max_grasp_mass(t.mu, t.fn_, t.d, t.alpha, t.max_t, t.g);
    let scenario = GraspScenario {
        mu: t.mu,
        fn_: t.fn_,
        d: 0.0,
        alpha: t.alpha,
        max_t: t.max_t,
        g: t.g,
        weight,
    };
    max_offset_d(&scenario).expect("feasible by construction")
}

/// The first `count` well-conditioned tuples of the seeded stream, plus how
/// many were skipped on the way.
pub fn well_conditioned_tuples(seed: u64, count: usize) -> (Vec<MassTuple>, usize) {
    let mut kept = Vec::with_capacity(count);
    let mut skipped = 0;
    for t in random_mass_tuples(seed, 4 * count) {
        if kept.len() == count {
            break;
        }
        if moment_ratio(&t) >= MIN_MOMENT_RATIO {
            kept.push(t);
        } else {
            skipped += 1;
        }
    }
    assert_eq!(kept.len(), count, "seed {seed} yields too few tuples");
    (kept, skipped)
}
