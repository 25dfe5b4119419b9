//! Two-finger linear parallel pinch: friction cone with torque coupling,
//! stability conditions and the maximum graspable mass.
//!
//! Each finger presses with normal force `Fn`; the contact transmits a
//! tangential force `f` and a spin torque `T` inside the ellipse
//! `f² + T²/e² ≤ μ²Fn²`, where `e = maxT / maxF` and `maxF = μFn`.
//! `maxT` is a torque (N·m), which makes `e` a length.
//!
//! Two fingers share the load: `2f = G` and `2T = G·d·sin α`, with `d` the
//! contact-to-center-of-gravity distance and `α` the tilt of the object's
//! symmetry axis from vertical.

use serde::{Deserialize, Serialize};

use crate::error::GraspError;

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Relative band that keeps exact-boundary states inside the cone despite
/// rounding in the squared terms.
const BOUNDARY_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraspScenario {
    pub mu: f64,
    /// Normal force per finger (N).
    pub fn_: f64,
    /// Contact-to-center-of-gravity distance (m).
    pub d: f64,
    /// Object symmetry axis from vertical (rad), in `[0, π]`.
    pub alpha: f64,
    /// Maximum frictional torque per finger (N·m).
    pub max_t: f64,
    pub g: f64,
    /// Object weight (N).
    pub weight: f64,
}

impl GraspScenario {
    pub fn validate(&self) -> Result<(), GraspError> {
        let all = [
            self.mu,
            self.fn_,
            self.d,
            self.alpha,
            self.max_t,
            self.g,
            self.weight,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GraspError::Domain("non-finite scenario parameter"));
        }
        if self.mu < 0.0 || self.fn_ < 0.0 || self.d < 0.0 || self.max_t < 0.0 || self.weight < 0.0
        {
            return Err(GraspError::Domain(
                "mu, Fn, d, maxT and G must be non-negative",
            ));
        }
        if !(self.g > 0.0) {
            return Err(GraspError::Domain("g must be positive"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.alpha) {
            return Err(GraspError::Domain("alpha must lie in [0, pi]"));
        }
        Ok(())
    }

    /// Maximum friction force per finger, `μFn`.
    pub fn max_friction(&self) -> f64 {
        self.mu * self.fn_
    }
}

/// Realized tangential force and spin torque at one finger.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrictionState {
    pub f: f64,
    pub t: f64,
}

/// `e = maxT / maxF`.
pub fn e_ratio(max_t: f64, max_f: f64) -> Result<f64, GraspError> {
    if !(max_f > 0.0) {
        return Err(GraspError::Domain(
            "maxF must be positive; a frictionless contact has no torque ratio",
        ));
    }
    Ok(max_t / max_f)
}

/// `f² + T²/e² ≤ μ²Fn²`, boundary included. With `e = 0` (rigid surface) the
/// torque term is dropped, which requires `T = 0`.
pub fn cone_check(state: FrictionState, e: f64, mu: f64, fn_: f64) -> Result<bool, GraspError> {
    let max_f = mu * fn_;
    if state.t == 0.0 {
        return Ok(state.f.abs() <= max_f);
    }
    if e == 0.0 {
        return Err(GraspError::Domain("e = 0 cannot bound a nonzero torque"));
    }
    if !(e > 0.0) {
        return Err(GraspError::Domain("e must be non-negative"));
    }
    let torque_term = state.t / e;
    let lhs = state.f * state.f + torque_term * torque_term;
    let rhs = max_f * max_f;
    Ok(lhs <= rhs * (1.0 + BOUNDARY_RTOL))
}

/// Per-finger static balance: `f = G/2`, `T = G·d·sin α / 2`.
pub fn equilibrium_state(scenario: &GraspScenario) -> FrictionState {
    FrictionState {
        f: 0.5 * scenario.weight,
        t: 0.5 * scenario.weight * scenario.d * scenario.alpha.sin(),
    }
}

/// Whether the equilibrium state lies inside the friction cone.
///
/// For `d = 0` (or `sin α = 0`) this is exactly `2μFn ≥ G`.
pub fn stable_pinch(scenario: &GraspScenario) -> Result<bool, GraspError> {
    scenario.validate()?;
    let state = equilibrium_state(scenario);
    let max_f = scenario.max_friction();
    if state.t == 0.0 {
        return Ok(state.f <= max_f);
    }
    if max_f == 0.0 || scenario.max_t == 0.0 {
        // No friction, or a rigid surface facing a moment.
        return Ok(false);
    }
    let e = e_ratio(scenario.max_t, max_f)?;
    cone_check(state, e, scenario.mu, scenario.fn_)
}

/// Largest contact offset `d` that still holds weight `G`:
/// `maxT · √((4μ²Fn² − G²) / (G² sin²α μ²Fn²))`. The `d` field of the
/// scenario is ignored.
pub fn max_offset_d(scenario: &GraspScenario) -> Result<f64, GraspError> {
    scenario.validate()?;
    let max_f = scenario.max_friction();
    let g_w = scenario.weight;
    if !(g_w > 0.0) {
        return Err(GraspError::Domain("G must be positive"));
    }
    if !(max_f > 0.0) {
        return Err(GraspError::Domain("mu·Fn must be positive"));
    }
    let hold = 2.0 * max_f;
    if g_w > hold {
        return Err(GraspError::Infeasible);
    }
    let sin_a = scenario.alpha.sin();
    if sin_a == 0.0 {
        return Err(GraspError::Unbounded);
    }
    let numerator = (hold - g_w) * (hold + g_w);
    let denominator = g_w * g_w * sin_a * sin_a * max_f * max_f;
    Ok(scenario.max_t * (numerator / denominator).sqrt())
}

/// Maximum mass held by friction:
/// `(1/g) · √(4μ²Fn² / (1 + μ²Fn²d²sin²α / maxT²))`.
///
/// `d·sin α = 0` gives `2μFn/g`; `maxT = 0` with a moment arm gives 0.
pub fn max_grasp_mass(mu: f64, fn_: f64, d: f64, alpha: f64, max_t: f64, g: f64) -> f64 {
    let hold = 2.0 * mu * fn_;
    let arm = d * alpha.sin();
    if arm == 0.0 {
        return hold / g;
    }
    if max_t == 0.0 {
        return 0.0;
    }
    let x = mu * fn_ * arm / max_t;
    hold / (1.0 + x * x).sqrt() / g
}

/// Independent check of [`max_grasp_mass`]: bisection on the mass for the
/// largest stable pinch, using only the cone and the equilibrium state.
pub fn max_mass_oracle(mu: f64, fn_: f64, d: f64, alpha: f64, max_t: f64, g: f64) -> f64 {
    let stable = |mass: f64| {
        stable_pinch(&GraspScenario {
            mu,
            fn_,
            d,
            alpha,
            max_t,
            g,
            weight: mass * g,
        })
        .unwrap_or(false)
    };
    let mut lo = 0.0;
    let mut hi = 10.0 * (2.0 * mu * fn_ / g + 1.0);
    if !stable(lo) {
        return 0.0;
    }
    if stable(hi) {
        return hi;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Grid of [`max_grasp_mass`] over `μ × Fn`, row-major in μ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassSurface {
    pub mu_axis: Vec<f64>,
    pub fn_axis: Vec<f64>,
    pub mass: Vec<f64>,
}

impl MassSurface {
    pub fn at(&self, i_mu: usize, i_fn: usize) -> f64 {
        self.mass[i_mu * self.fn_axis.len() + i_fn]
    }

    pub fn min(&self) -> f64 {
        self.mass.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.mass.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Fixed inputs of the surface besides the two axes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSettings {
    pub d: f64,
    pub alpha: f64,
    pub max_t: f64,
    pub g: f64,
}

impl Default for SurfaceSettings {
    fn default() -> Self {
        Self {
            d: 1.0,
            alpha: std::f64::consts::FRAC_PI_4,
            max_t: 5.0,
            g: STANDARD_GRAVITY,
        }
    }
}

/// Default μ range of the surface.
pub const DEFAULT_MU_RANGE: (f64, f64) = (0.1, 1.0);
/// Default Fn range of the surface, newtons.
pub const DEFAULT_FN_RANGE: (f64, f64) = (1.0, 20.0);

/// `steps` evenly spaced samples over `[lo, hi]`; one step yields `lo`.
fn axis(range: (f64, f64), steps: usize) -> Vec<f64> {
    let (lo, hi) = range;
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

pub fn mass_surface(
    mu_range: (f64, f64),
    fn_range: (f64, f64),
    steps_mu: usize,
    steps_fn: usize,
    settings: &SurfaceSettings,
) -> Result<MassSurface, GraspError> {
    for (name, (lo, hi)) in [("mu", mu_range), ("fn", fn_range)] {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < 0.0 {
            return Err(GraspError::Usage(format!(
                "{name} range must be ordered, finite and non-negative, got {lo}..{hi}"
            )));
        }
    }
    if steps_mu == 0 || steps_fn == 0 {
        return Err(GraspError::Usage("surface steps must be >= 1".into()));
    }
    if !(settings.g > 0.0) || settings.d < 0.0 || settings.max_t < 0.0 {
        return Err(GraspError::Usage("need g > 0, d >= 0, maxT >= 0".into()));
    }
    let mu_axis = axis(mu_range, steps_mu);
    let fn_axis = axis(fn_range, steps_fn);
    let mass = mu_axis
        .iter()
        .flat_map(|&mu| {
            fn_axis.iter().map(move |&fn_| {
                max_grasp_mass(
                    mu,
                    fn_,
                    settings.d,
                    settings.alpha,
                    settings.max_t,
                    settings.g,
                )
            })
        })
        .collect();
    Ok(MassSurface {
        mu_axis,
        fn_axis,
        mass,
    })
}
