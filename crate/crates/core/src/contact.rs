//! Contact forces of a two-phalanx underactuated finger in the enveloping
//! mode.
//!
//! With the finger Jacobian `J`, the transmission matrix `P` of the
//! driving linkage and the input torques `t = (Ta, T2)`, the phalanx
//! contact forces are `f = J⁻ᵀ P⁻ᵀ t`. Positive `f_i` pushes the object
//! away from phalanx `i`; a negative value means that contact separates.

use serde::{Deserialize, Serialize};

use crate::error::ContactError;

/// Forces with magnitude at or below this (N) count as zero.
pub const MARGINAL_BAND: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentedFingerParams {
    /// Proximal contact lever arm (m).
    pub k1: f64,
    /// Distal contact lever arm (m).
    pub k2: f64,
    /// Proximal phalanx length (m).
    pub l1: f64,
    /// Transmission offset (m).
    pub h: f64,
    /// Distal joint angle (rad).
    pub theta2: f64,
    pub mu: f64,
    /// Actuator torque (N·m).
    pub ta: f64,
    /// Passive-element torque (N·m).
    pub t2: f64,
}

impl SegmentedFingerParams {
    pub fn validate(&self) -> Result<(), ContactError> {
        let all = [
            self.k1,
            self.k2,
            self.l1,
            self.h,
            self.theta2,
            self.mu,
            self.ta,
            self.t2,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(ContactError::Domain("non-finite finger parameter"));
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0) {
            return Err(ContactError::Domain("lever arms k1, k2 must be positive"));
        }
        if !(self.l1 > 0.0) {
            return Err(ContactError::Domain("l1 must be positive"));
        }
        if self.h < 0.0 {
            return Err(ContactError::Domain("h must be non-negative"));
        }
        Ok(())
    }

    /// `cos θ2 + μ sin θ2`, the friction-shifted projection shared by both
    /// routes.
    fn projection(&self) -> f64 {
        self.theta2.cos() + self.mu * self.theta2.sin()
    }
}

/// 2×2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn transpose(&self) -> Matrix2 {
        let [[a, b], [c, d]] = self.0;
        Matrix2([[a, c], [b, d]])
    }

    /// Closed-form inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix2> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.0;
        Some(Matrix2([[d / det, -b / det], [-c / det, a / det]]))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let [[a, b], [c, d]] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    /// Both contacts press on the object.
    ForceClosed,
    /// The smaller force is zero within [`MARGINAL_BAND`].
    Marginal,
    /// A phalanx would pull on the object: contact is lost.
    NotClosed,
}

impl Closure {
    pub fn classify(f1: f64, f2: f64) -> Closure {
        let low = f1.min(f2);
        if low.abs() <= MARGINAL_BAND {
            Closure::Marginal
        } else if low > 0.0 {
            Closure::ForceClosed
        } else {
            Closure::NotClosed
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContactForces {
    pub f1: f64,
    pub f2: f64,
    pub closure: Closure,
}

impl ContactForces {
    fn new(f1: f64, f2: f64) -> Self {
        Self {
            f1,
            f2,
            closure: Closure::classify(f1, f2),
        }
    }
}

/// `[[k1, 0], [k2 + l1(cos θ2 + μ sin θ2), k2]]`.
pub fn finger_jacobian(p: &SegmentedFingerParams) -> Matrix2 {
    Matrix2([[p.k1, 0.0], [p.k2 + p.l1 * p.projection(), p.k2]])
}

/// `[[1, R], [0, 1]]` with `R = −h / (h + l1)`.
pub fn transmission_matrix(h: f64, l1: f64) -> Result<Matrix2, ContactError> {
    let sum = h + l1;
    if sum == 0.0 || !sum.is_finite() {
        return Err(ContactError::Domain("h + l1 must be nonzero"));
    }
    Ok(Matrix2([[1.0, -h / sum], [0.0, 1.0]]))
}

/// `f = J⁻ᵀ P⁻ᵀ t`, evaluated with explicit 2×2 inverses.
pub fn contact_forces_matrix(p: &SegmentedFingerParams) -> Result<ContactForces, ContactError> {
    p.validate()?;
    let jac = finger_jacobian(p);
    let trans = transmission_matrix(p.h, p.l1)?;
    let jac_inv_t = jac
        .inverse()
        .ok_or(ContactError::Domain("singular finger Jacobian"))?
        .transpose();
    let trans_inv_t = trans
        .inverse()
        .ok_or(ContactError::Domain("singular transmission matrix"))?
        .transpose();
    let [f1, f2] = jac_inv_t.apply(trans_inv_t.apply([p.ta, p.t2]));
    Ok(ContactForces::new(f1, f2))
}

/// The expanded closed form of [`contact_forces_matrix`].
pub fn contact_forces_closed(p: &SegmentedFingerParams) -> Result<ContactForces, ContactError> {
    p.validate()?;
    let c = p.projection();
    let hl = p.h + p.l1;
    let kk = p.k1 * p.k2;
    let f1 = p.l1 * (p.k2 - p.h * c) / (kk * hl) * p.ta - (p.k2 + p.l1 * c) / kk * p.t2;
    let f2 = p.h / (p.k2 * hl) * p.ta + p.t2 / p.k2;
    Ok(ContactForces::new(f1, f2))
}
