//! Damped Newton assembly of square constraint systems.
//!
//! Unknowns are the coordinates of the free (non-anchored) nodes, laid out
//! as `[x0, y0, x1, y1, ...]` in node declaration order. Anchored nodes are
//! held at their anchor position and contribute no unknowns.
//!
//! Branch selection is by basin of attraction: the solver converges to the
//! assembly nearest (in the Newton sense) to the supplied guess. Sweeps keep
//! the branch by seeding each sample with the previous one.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::model::{Configuration, Mechanism, Resolved, Trajectory};
use crate::error::LinkageError;
use crate::geometry::{wrap_angle, Point2};

/// Solver settings. The defaults are the documented contract.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Convergence threshold on the residual max-norm.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100,
            max_halvings: 60,
        }
    }
}

/// Residuals above this at a singular Jacobian mean the pose is infeasible
/// rather than singular.
const SINGULAR_POSE_RESIDUAL: f64 = 1e-6;
/// Pivot magnitude, relative to the largest Jacobian entry, treated as zero.
const PIVOT_RTOL: f64 = 1e-12;

/// Column layout of the free coordinates.
struct Layout {
    /// Column of the x coordinate per node index; `None` when anchored.
    column: Vec<Option<usize>>,
    unknowns: usize,
}

impl Layout {
    fn new(mechanism: &Mechanism) -> Self {
        let mut column = Vec::with_capacity(mechanism.nodes().len());
        let mut next = 0;
        for anchor in mechanism.anchor_positions() {
            if anchor.is_some() {
                column.push(None);
            } else {
                column.push(Some(next));
                next += 2;
            }
        }
        Self {
            column,
            unknowns: next,
        }
    }
}

/// `2 × free nodes − scalar equations` with the driver held fixed.
///
/// Zero means well-constrained, positive under-, negative over-constrained.
pub fn mobility_check(mechanism: &Mechanism) -> i64 {
    let free = mechanism.free_nodes().len() as i64;
    let equations: i64 = mechanism
        .resolved()
        .iter()
        .filter(|r| !matches!(r, Resolved::Anchor { .. }))
        .count() as i64;
    2 * free - equations
}

fn positions_by_index(
    mechanism: &Mechanism,
    positions: &BTreeMap<String, Point2>,
) -> Result<Vec<Point2>, LinkageError> {
    mechanism
        .nodes()
        .iter()
        .map(|n| {
            positions.get(&n.id).copied().ok_or_else(|| {
                LinkageError::Definition(format!("no position given for node `{}`", n.id))
            })
        })
        .collect()
}

fn eval_one(r: &Resolved, p: &[Point2], input: f64, out: &mut Vec<f64>) {
    match *r {
        Resolved::Anchor { node, position } => {
            out.push(p[node].x - position.x);
            out.push(p[node].y - position.y);
        }
        Resolved::Distance { a, b, length } => out.push(p[a].distance(p[b]) - length),
        Resolved::PointOnLine { point, a, b } => {
            let u = p[b] - p[a];
            let w = p[point] - p[a];
            out.push(u.cross(w) / u.norm());
        }
        Resolved::Angle {
            pivot,
            moving,
            angle,
            driver,
        } => {
            let target = if driver { input } else { angle };
            out.push(wrap_angle((p[moving] - p[pivot]).angle() - target));
        }
    }
}

/// One scalar per constraint equation, in declaration order.
///
/// Anchors contribute `(x − px, y − py)`; distances `actual − target`;
/// point-on-line the signed perpendicular distance (left of `line_a → line_b`
/// positive); angles the error wrapped to (−π, π].
pub fn residuals(
    mechanism: &Mechanism,
    positions: &BTreeMap<String, Point2>,
    input: f64,
) -> Result<Vec<f64>, LinkageError> {
    let p = positions_by_index(mechanism, positions)?;
    Ok(residuals_indexed(mechanism, &p, input))
}

fn residuals_indexed(mechanism: &Mechanism, p: &[Point2], input: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(mechanism.resolved().len() + 2);
    for r in mechanism.resolved() {
        eval_one(r, p, input, &mut out);
    }
    out
}

/// Residuals excluding anchors: the square system Newton works on.
fn system_residuals(mechanism: &Mechanism, p: &[Point2], input: f64, out: &mut Vec<f64>) {
    out.clear();
    for r in mechanism.resolved() {
        if !matches!(r, Resolved::Anchor { .. }) {
            eval_one(r, p, input, out);
        }
    }
}

/// Writes `grad` for node `n` into `row` if the node is free.
fn put(row: &mut [f64], layout: &Layout, n: usize, grad: Point2) {
    if let Some(c) = layout.column[n] {
        row[c] += grad.x;
        row[c + 1] += grad.y;
    }
}

fn jacobian_row(r: &Resolved, p: &[Point2], layout: &Layout, row: &mut [f64]) {
    match *r {
        Resolved::Anchor { .. } => {}
        Resolved::Distance { a, b, .. } => {
            let d = p[b] - p[a];
            let len = d.norm();
            if len > 0.0 {
                let g = d * (1.0 / len);
                put(row, layout, b, g);
                put(row, layout, a, -g);
            }
        }
        Resolved::PointOnLine { point, a, b } => {
            // s = (u × w) / |u| with u = b − a, w = point − a.
            let u = p[b] - p[a];
            let w = p[point] - p[a];
            let len = u.norm();
            let c = u.cross(w);
            let dc_dpoint = Point2::new(-u.y, u.x);
            let dc_db = Point2::new(w.y, -w.x);
            let dc_da = Point2::new(u.y - w.y, w.x - u.x);
            let dl_db = u * (1.0 / len);
            let inv = 1.0 / len;
            let k = c / (len * len);
            put(row, layout, point, dc_dpoint * inv);
            put(row, layout, b, dc_db * inv - dl_db * k);
            put(row, layout, a, dc_da * inv + dl_db * k);
        }
        Resolved::Angle { pivot, moving, .. } => {
            let d = p[moving] - p[pivot];
            let r2 = d.dot(d);
            if r2 > 0.0 {
                let g = Point2::new(-d.y / r2, d.x / r2);
                put(row, layout, moving, g);
                put(row, layout, pivot, -g);
            }
        }
    }
}

/// Analytic Jacobian of [`residuals`] with respect to the free coordinates.
///
/// Returns one row per residual (anchor rows are zero) and
/// `2 × free nodes` columns, free nodes in declaration order, x before y.
pub fn jacobian(
    mechanism: &Mechanism,
    positions: &BTreeMap<String, Point2>,
) -> Result<Vec<Vec<f64>>, LinkageError> {
    let p = positions_by_index(mechanism, positions)?;
    let layout = Layout::new(mechanism);
    let mut rows = Vec::new();
    for r in mechanism.resolved() {
        let n = if matches!(r, Resolved::Anchor { .. }) {
            2
        } else {
            1
        };
        for _ in 0..n {
            let mut row = vec![0.0; layout.unknowns];
            if n == 1 {
                jacobian_row(r, &p, &layout, &mut row);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

fn system_jacobian(mechanism: &Mechanism, p: &[Point2], layout: &Layout) -> DMatrix<f64> {
    let rows: Vec<&Resolved> = mechanism
        .resolved()
        .iter()
        .filter(|r| !matches!(r, Resolved::Anchor { .. }))
        .collect();
    let mut jac = DMatrix::zeros(rows.len(), layout.unknowns);
    let mut row = vec![0.0; layout.unknowns];
    for (i, r) in rows.iter().enumerate() {
        row.iter_mut().for_each(|v| *v = 0.0);
        jacobian_row(r, p, layout, &mut row);
        for (j, v) in row.iter().enumerate() {
            jac[(i, j)] = *v;
        }
    }
    jac
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn apply_step(p: &mut [Point2], base: &[Point2], layout: &Layout, step: &DVector<f64>, scale: f64) {
    for (n, col) in layout.column.iter().enumerate() {
        if let Some(c) = *col {
            p[n] = Point2::new(base[n].x + scale * step[c], base[n].y + scale * step[c + 1]);
        }
    }
}

/// Assembles the mechanism at `input` starting from `guess`.
pub fn assemble(
    mechanism: &Mechanism,
    input: f64,
    guess: &BTreeMap<String, Point2>,
) -> Result<Configuration, LinkageError> {
    assemble_with(mechanism, input, guess, &SolverOptions::default())
}

pub fn assemble_with(
    mechanism: &Mechanism,
    input: f64,
    guess: &BTreeMap<String, Point2>,
    options: &SolverOptions,
) -> Result<Configuration, LinkageError> {
    let mobility = mobility_check(mechanism);
    if mobility != 0 {
        let what = if mobility > 0 { "under" } else { "over" };
        return Err(LinkageError::Definition(format!(
            "mechanism is {what}-constrained (mobility {mobility}); only square systems are assembled"
        )));
    }
    if !input.is_finite() {
        return Err(LinkageError::Definition(format!(
            "non-finite input {input}"
        )));
    }

    let layout = Layout::new(mechanism);
    let anchors = mechanism.anchor_positions();
    let mut p = Vec::with_capacity(anchors.len());
    for (node, anchor) in mechanism.nodes().iter().zip(&anchors) {
        match anchor {
            Some(a) => p.push(*a),
            None => {
                let g = guess.get(&node.id).copied().ok_or_else(|| {
                    LinkageError::Definition(format!("no guess given for free node `{}`", node.id))
                })?;
                if !g.is_finite() {
                    return Err(LinkageError::Definition(format!(
                        "non-finite guess for node `{}`",
                        node.id
                    )));
                }
                p.push(g);
            }
        }
    }

    let mut r = Vec::new();
    let mut trial_r = Vec::new();
    system_residuals(mechanism, &p, input, &mut r);
    let mut trial = p.clone();

    for _ in 0..options.max_iterations {
        let norm = max_norm(&r);
        if norm <= options.tolerance {
            return Ok(finish(mechanism, p, input));
        }

        let jac = system_jacobian(mechanism, &p, &layout);
        let scale = jac.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let lu = jac.lu();
        let singular = scale == 0.0
            || lu
                .u()
                .diagonal()
                .iter()
                .any(|d| !(d.abs() > PIVOT_RTOL * scale));
        if singular {
            return Err(if norm <= SINGULAR_POSE_RESIDUAL {
                LinkageError::SingularJacobian { input }
            } else {
                LinkageError::NoConvergence {
                    input,
                    residual: norm,
                }
            });
        }
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let step = match lu.solve(&rhs) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => return Err(LinkageError::SingularJacobian { input }),
        };

        // Backtracking: halve until the residual 2-norm decreases.
        let current = sum_sq(&r);
        let mut factor = 1.0;
        let mut accepted = false;
        for _ in 0..=options.max_halvings {
            apply_step(&mut trial, &p, &layout, &step, factor);
            system_residuals(mechanism, &trial, input, &mut trial_r);
            if sum_sq(&trial_r) < current {
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if !accepted {
            return Err(LinkageError::NoConvergence {
                input,
                residual: norm,
            });
        }
        std::mem::swap(&mut p, &mut trial);
        std::mem::swap(&mut r, &mut trial_r);
    }

    let norm = max_norm(&r);
    if norm <= options.tolerance {
        return Ok(finish(mechanism, p, input));
    }
    Err(LinkageError::NoConvergence {
        input,
        residual: norm,
    })
}

fn finish(mechanism: &Mechanism, p: Vec<Point2>, input: f64) -> Configuration {
    let residual_norm = max_norm(&residuals_indexed(mechanism, &p, input));
    let positions = mechanism
        .nodes()
        .iter()
        .zip(p)
        .map(|(n, pos)| (n.id.clone(), pos))
        .collect();
    Configuration {
        positions,
        input,
        residual_norm,
    }
}

/// Sweeps the driver from `from` to `to` in `steps` uniform increments
/// (`steps + 1` samples), seeding each sample with the previous solution.
pub fn sweep(
    mechanism: &Mechanism,
    from: f64,
    to: f64,
    steps: usize,
) -> Result<Trajectory, LinkageError> {
    sweep_with(mechanism, from, to, steps, &SolverOptions::default())
}

pub fn sweep_with(
    mechanism: &Mechanism,
    from: f64,
    to: f64,
    steps: usize,
    options: &SolverOptions,
) -> Result<Trajectory, LinkageError> {
    if steps == 0 {
        return Err(LinkageError::Definition("sweep needs steps >= 1".into()));
    }
    if mechanism.driver().is_none() {
        return Err(LinkageError::Definition(
            "sweep needs a driven mechanism".into(),
        ));
    }
    if !(from.is_finite() && to.is_finite()) || from == to {
        return Err(LinkageError::Definition(format!(
            "sweep range must be finite and non-empty, got {from}..{to}"
        )));
    }
    let mut samples: Vec<Configuration> = Vec::with_capacity(steps + 1);
    let mut guess = mechanism.guesses();
    for k in 0..=steps {
        let input = if k == steps {
            to
        } else {
            from + (to - from) * (k as f64) / (steps as f64)
        };
        let config = assemble_with(mechanism, input, &guess, options)?;
        guess.clone_from(&config.positions);
        samples.push(config);
    }
    Ok(Trajectory { samples })
}
