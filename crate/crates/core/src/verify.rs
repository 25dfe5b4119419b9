//! Seeded randomized cross-checks: closed-form mass vs the bisection oracle,
//! and the closed-form contact forces vs the matrix route.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::contact::{contact_forces_closed, contact_forces_matrix, SegmentedFingerParams};
use crate::grasp::{max_grasp_mass, max_mass_oracle, STANDARD_GRAVITY};
use crate::output::format_sig;

/// Inputs of one maximum-mass evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassTuple {
    pub mu: f64,
    pub fn_: f64,
    pub d: f64,
    pub alpha: f64,
    pub max_t: f64,
    pub g: f64,
}

/// μ ∈ [0.05, 1], Fn ∈ [0.5, 30], d ∈ [0, 2], α ∈ [0.01, π − 0.01],
/// maxT ∈ [0.1, 10], g = 9.81.
pub fn random_mass_tuples(seed: u64, count: usize) -> Vec<MassTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| MassTuple {
            mu: rng.random_range(0.05..=1.0),
            fn_: rng.random_range(0.5..=30.0),
            d: rng.random_range(0.0..=2.0),
            alpha: rng.random_range(0.01..=PI - 0.01),
            max_t: rng.random_range(0.1..=10.0),
            g: STANDARD_GRAVITY,
        })
        .collect()
}

/// k1, k2, l1 ∈ [0.2, 2], h ∈ [0, 2], θ2 ∈ [0, π], μ ∈ [0, 1],
/// Ta, T2 ∈ [−2, 2].
pub fn random_finger_params(seed: u64, count: usize) -> Vec<SegmentedFingerParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| SegmentedFingerParams {
            k1: rng.random_range(0.2..=2.0),
            k2: rng.random_range(0.2..=2.0),
            l1: rng.random_range(0.2..=2.0),
            h: rng.random_range(0.0..=2.0),
            theta2: rng.random_range(0.0..=PI),
            mu: rng.random_range(0.0..=1.0),
            ta: rng.random_range(-2.0..=2.0),
            t2: rng.random_range(-2.0..=2.0),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassCheck {
    pub tuple: MassTuple,
    pub formula: f64,
    pub oracle: f64,
}

impl MassCheck {
    pub fn relative_error(&self) -> f64 {
        let scale = self.formula.abs().max(self.oracle.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.formula - self.oracle).abs() / scale
        }
    }
}

pub fn check_mass(tuples: &[MassTuple]) -> Vec<MassCheck> {
    tuples
        .iter()
        .map(|t| MassCheck {
            tuple: *t,
            formula: max_grasp_mass(t.mu, t.fn_, t.d, t.alpha, t.max_t, t.g),
            oracle: max_mass_oracle(t.mu, t.fn_, t.d, t.alpha, t.max_t, t.g),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactCheck {
    pub params: SegmentedFingerParams,
    pub closed: (f64, f64),
    pub matrix: (f64, f64),
}

impl ContactCheck {
    pub fn max_delta(&self) -> f64 {
        (self.closed.0 - self.matrix.0)
            .abs()
            .max((self.closed.1 - self.matrix.1).abs())
    }
}

pub fn check_contact(params: &[SegmentedFingerParams]) -> Vec<ContactCheck> {
    params
        .iter()
        .filter_map(|p| {
            let c = contact_forces_closed(p).ok()?;
            let m = contact_forces_matrix(p).ok()?;
            Some(ContactCheck {
                params: *p,
                closed: (c.f1, c.f2),
                matrix: (m.f1, m.f2),
            })
        })
        .collect()
}

pub fn mass_checks_csv(checks: &[MassCheck]) -> String {
    let mut out = String::from("case,mu,fn,d,alpha,max_t,g,formula_kg,oracle_kg,rel_err\n");
    for (i, c) in checks.iter().enumerate() {
        let t = c.tuple;
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{},{},{},{}",
            format_sig(t.mu, 17),
            format_sig(t.fn_, 17),
            format_sig(t.d, 17),
            format_sig(t.alpha, 17),
            format_sig(t.max_t, 17),
            format_sig(t.g, 17),
            format_sig(c.formula, 17),
            format_sig(c.oracle, 17),
            format_sig(c.relative_error(), 6),
        );
    }
    out
}

pub fn contact_checks_csv(checks: &[ContactCheck]) -> String {
    let mut out = String::from(
        "case,k1,k2,l1,h,theta2,mu,ta,t2,f1_closed,f2_closed,f1_matrix,f2_matrix,max_delta\n",
    );
    for (i, c) in checks.iter().enumerate() {
        let p = c.params;
        let _ = write!(out, "{i}");
        for v in [p.k1, p.k2, p.l1, p.h, p.theta2, p.mu, p.ta, p.t2] {
            let _ = write!(out, ",{}", format_sig(v, 17));
        }
        for v in [c.closed.0, c.closed.1, c.matrix.0, c.matrix.1] {
            let _ = write!(out, ",{}", format_sig(v, 17));
        }
        let _ = writeln!(out, ",{}", format_sig(c.max_delta(), 6));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_reproducible() {
        assert_eq!(random_mass_tuples(7, 5), random_mass_tuples(7, 5));
        assert_ne!(random_mass_tuples(7, 5), random_mass_tuples(8, 5));
        assert_eq!(random_finger_params(7, 5), random_finger_params(7, 5));
    }

    #[test]
    fn tuples_respect_ranges() {
        for t in random_mass_tuples(1, 200) {
            assert!((0.05..=1.0).contains(&t.mu));
            assert!((0.5..=30.0).contains(&t.fn_));
            assert!((0.0..=2.0).contains(&t.d));
            assert!((0.01..=PI - 0.01).contains(&t.alpha));
            assert!((0.1..=10.0).contains(&t.max_t));
        }
    }
}
