//! Straight-line and orientation metrics over solved trajectories.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::AnalysisError;
use crate::geometry::{wrap_angle, Point2};
use crate::linkage::Trajectory;

/// Relative eigenvalue gap below which the covariance has no principal axis.
const ISOTROPY_RTOL: f64 = 1e-12;

/// Total-least-squares line through a point set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub centroid: Point2,
    /// Unit direction, oriented along the last-minus-first displacement.
    pub direction: Point2,
    /// Largest perpendicular distance of a point from the line.
    pub max_deviation: f64,
    pub rms_deviation: f64,
}

impl LineFit {
    /// Signed perpendicular distance of `p` from the line, left positive.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.direction.cross(p - self.centroid)
    }
}

/// Fits the principal axis of the centered covariance.
pub fn fit_line(points: &[Point2]) -> Result<LineFit, AnalysisError> {
    if points.len() < 2 {
        return Err(AnalysisError::DegenerateFit("need at least two points"));
    }
    let n = points.len() as f64;
    let sum = points.iter().fold(Point2::ORIGIN, |acc, p| acc + *p);
    let centroid = sum * (1.0 / n);

    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = *p - centroid;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    sxx /= n;
    syy /= n;
    sxy /= n;

    let trace = sxx + syy;
    if !(trace > 0.0) {
        return Err(AnalysisError::DegenerateFit("all points coincide"));
    }
    let gap = (sxx - syy).hypot(2.0 * sxy);
    if gap <= ISOTROPY_RTOL * trace {
        return Err(AnalysisError::DegenerateFit(
            "isotropic covariance, no unique direction",
        ));
    }

    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let mut direction = Point2::new(theta.cos(), theta.sin());
    let travel = points[points.len() - 1] - points[0];
    let along = direction.dot(travel);
    let flip = if along != 0.0 {
        along < 0.0
    } else if direction.x.abs() >= direction.y.abs() {
        direction.x < 0.0
    } else {
        direction.y < 0.0
    };
    if flip {
        direction = -direction;
    }

    let mut max_deviation: f64 = 0.0;
    let mut sq = 0.0;
    for p in points {
        let dev = direction.cross(*p - centroid).abs();
        max_deviation = max_deviation.max(dev);
        sq += dev * dev;
    }
    Ok(LineFit {
        centroid,
        direction,
        max_deviation,
        rms_deviation: (sq / n).sqrt(),
    })
}

/// Line fit of one node's path over a trajectory.
pub fn straightness(trajectory: &Trajectory, node: &str) -> Result<LineFit, AnalysisError> {
    let path = trajectory
        .path(node)
        .ok_or_else(|| AnalysisError::MissingNode(node.into()))?;
    fit_line(&path)
}

/// How far the fitted line is from perpendicular to the axis `a → b`,
/// in `[0, π/2]`. A zero-length axis reports `π/2`.
pub fn orthogonality_error(fit: &LineFit, axis_a: Point2, axis_b: Point2) -> f64 {
    let axis = axis_b - axis_a;
    let angle = fit
        .direction
        .cross(axis)
        .abs()
        .atan2(fit.direction.dot(axis));
    (angle - FRAC_PI_2).abs()
}

/// Largest rotation of segment `a → b` away from its first-sample angle.
pub fn orientation_drift(
    trajectory: &Trajectory,
    segment: (&str, &str),
) -> Result<f64, AnalysisError> {
    let (a, b) = segment;
    let mut reference = None;
    let mut drift: f64 = 0.0;
    for sample in &trajectory.samples {
        let pa = sample
            .position(a)
            .ok_or_else(|| AnalysisError::MissingNode(a.into()))?;
        let pb = sample
            .position(b)
            .ok_or_else(|| AnalysisError::MissingNode(b.into()))?;
        let v = pb - pa;
        if v.x == 0.0 && v.y == 0.0 {
            return Err(AnalysisError::CoincidentSegment(a.into(), b.into()));
        }
        let angle = v.angle();
        let start = *reference.get_or_insert(angle);
        drift = drift.max(wrap_angle(angle - start).abs());
    }
    Ok(drift)
}
