//! Parameterized mechanism builders and geometry probes.
//!
//! Frame conventions shared by the Peaucellier-family builders: the
//! inversion center `E` is the origin, the crank pivot `A` sits at
//! `(−r, 0)` and the driver is the angle of `B − A`. The straight output
//! line of `D` is then perpendicular to `AE`, on the `A` side of `E`, at
//! distance `(L² − s²) / (2r)`.
//!
//! Every builder emits exact positions at a nominal input as the node
//! guesses and stores that input as the driver's `angle`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::LinkageError;
use crate::geometry::Point2;
use crate::linkage::{
    sweep, Body, BodyKind, Configuration, Constraint, ConstraintKind, Mechanism, Node,
};

/// Classical Peaucellier–Lipkin inversor dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeaucellierParams {
    /// `|EC1| = |EC2|`.
    pub long_link: f64,
    /// Rhombus side `|BC1| = |BC2| = |DC1| = |DC2|`.
    pub rhombus_side: f64,
    /// `|AB| = |AE|`.
    pub crank_radius: f64,
}

impl Default for PeaucellierParams {
    fn default() -> Self {
        Self {
            long_link: 5.0,
            rhombus_side: 2.0,
            crank_radius: 3.0,
        }
    }
}

impl PeaucellierParams {
    /// Inversion constant `k² = L² − s²`.
    pub fn inversion_constant(&self) -> f64 {
        self.long_link * self.long_link - self.rhombus_side * self.rhombus_side
    }

    /// Distance of the output line from `E`, measured toward `A`.
    pub fn line_offset(&self) -> f64 {
        self.inversion_constant() / (2.0 * self.crank_radius)
    }

    fn validate(&self) -> Result<(), LinkageError> {
        let Self {
            long_link: l,
            rhombus_side: s,
            crank_radius: r,
        } = *self;
        if !(l.is_finite() && s.is_finite() && r.is_finite()) {
            return Err(LinkageError::definition("non-finite linkage dimension"));
        }
        if !(s > 0.0 && l > s) {
            return Err(LinkageError::definition(format!(
                "need long_link > rhombus_side > 0 (k² = L² − s² > 0), got L={l}, s={s}"
            )));
        }
        if !(r > 0.0) {
            return Err(LinkageError::definition(format!(
                "crank_radius must be positive, got {r}"
            )));
        }
        if 2.0 * r < l - s {
            return Err(LinkageError::definition(format!(
                "crank_radius {r} is too short: |EB| ≤ 2r never reaches L − s = {}",
                l - s
            )));
        }
        Ok(())
    }

    /// Crank angle where the guesses are computed: `π` (B farthest from E)
    /// when that pose assembles, otherwise the angle with `|EB| = L`.
    pub fn nominal_input(&self) -> f64 {
        let l = self.long_link;
        let s = self.rhombus_side;
        let r = self.crank_radius;
        if 2.0 * r <= l + s {
            PI
        } else {
            2.0 * (l / (2.0 * r)).asin()
        }
    }
}

/// Exact inversor pose at a crank angle: (B, C1, C2, D).
fn inversor_pose(p: &PeaucellierParams, crank: f64) -> (Point2, Point2, Point2, Point2) {
    let a = Point2::new(-p.crank_radius, 0.0);
    let b = a + Point2::polar(p.crank_radius, crank);
    let eb = b.norm();
    let u = b * (1.0 / eb);
    let ed = p.inversion_constant() / eb;
    let d = u * ed;
    let em = 0.5 * (eb + ed);
    let half_base = (p.long_link * p.long_link - em * em).max(0.0).sqrt();
    let m = u * em;
    let n = u.perp() * half_base;
    (b, m + n, m - n, d)
}

pub fn build_peaucellier(params: &PeaucellierParams) -> Result<Mechanism, LinkageError> {
    params.validate()?;
    let r = params.crank_radius;
    let l = params.long_link;
    let s = params.rhombus_side;
    let input = params.nominal_input();
    let (b, c1, c2, d) = inversor_pose(params, input);
    let a = Point2::new(-r, 0.0);

    let nodes = vec![
        Node::new("A", a),
        Node::new("B", b),
        Node::new("C1", c1),
        Node::new("C2", c2),
        Node::new("D", d),
        Node::new("E", Point2::ORIGIN),
    ];
    let constraints = vec![
        Constraint::anchor("E", Point2::ORIGIN),
        Constraint::anchor("A", a),
        Constraint::distance("A", "B", r).with_id("crank"),
        Constraint::distance("E", "C1", l).with_id("long_1"),
        Constraint::distance("E", "C2", l).with_id("long_2"),
        Constraint::distance("B", "C1", s).with_id("rhombus_b1"),
        Constraint::distance("B", "C2", s).with_id("rhombus_b2"),
        Constraint::distance("D", "C1", s).with_id("rhombus_d1"),
        Constraint::distance("D", "C2", s).with_id("rhombus_d2"),
        Constraint::driven_angle("A", "B", input).with_id("crank_angle"),
    ];
    // The output member riding on D is counted as a body of its own.
    let bodies = vec![Body {
        id: "output_coupler".into(),
        kind: BodyKind::Coupler,
        members: vec![],
    }];
    Mechanism::new(nodes, constraints, Some("crank_angle"), bodies)
}

/// Semi-Peaucellier dimensions: the inversor with the `D–B–E` line carried
/// by one rigid slide-bar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiPeaucellierParams {
    pub long_link: f64,
    pub rhombus_side: f64,
    pub crank_radius: f64,
    /// Extension of the slide-bar beyond `D` (on the side away from `B`).
    pub bar_overhang: f64,
}

impl Default for SemiPeaucellierParams {
    fn default() -> Self {
        Self {
            long_link: 5.0,
            rhombus_side: 2.0,
            crank_radius: 3.0,
            bar_overhang: 0.5,
        }
    }
}

impl SemiPeaucellierParams {
    pub fn inversor(&self) -> PeaucellierParams {
        PeaucellierParams {
            long_link: self.long_link,
            rhombus_side: self.rhombus_side,
            crank_radius: self.crank_radius,
        }
    }

    /// Length of the bar from `D` to its tail beyond `B`. `|DB|` never
    /// exceeds `2s`, so `L + s` always covers the `B` slider.
    pub fn bar_length(&self) -> f64 {
        self.long_link + self.rhombus_side
    }
}

/// Builds the semi-Peaucellier linkage.
///
/// Topology: crank `AB`; long link `EC1`; links `C1B` and `C1D` (one half
/// of the rhombus); a rigid slide-bar defined by `D` and `bar_tail` with
/// sliders `B` and `E` held on it by point-on-line constraints. Because
/// `E`, `B`, `D` stay collinear and `B`, `D` both lie on the circle of
/// radius `s` about `C1`, `|EB|·|ED|` equals the power of `E` with respect
/// to that circle, `L² − s²`, which is the classical inversion constant.
///
/// With `bar_overhang > 0` an extra `bar_end` node marks the bar end beyond
/// `D`; with zero overhang `D` is the bar end.
pub fn build_semi_peaucellier(params: &SemiPeaucellierParams) -> Result<Mechanism, LinkageError> {
    let inv = params.inversor();
    inv.validate()?;
    if !(params.bar_overhang.is_finite() && params.bar_overhang >= 0.0) {
        return Err(LinkageError::definition(format!(
            "bar_overhang must be >= 0, got {}",
            params.bar_overhang
        )));
    }
    let r = params.crank_radius;
    let input = inv.nominal_input();
    let (b, c1, _, d) = inversor_pose(&inv, input);
    let a = Point2::new(-r, 0.0);
    let db = b - d;
    let along = if db.norm() > 1e-9 * b.norm() {
        db * (1.0 / db.norm())
    } else {
        b * (1.0 / b.norm())
    };
    let tail = d + along * params.bar_length();

    let mut nodes = vec![
        Node::new("A", a),
        Node::new("B", b),
        Node::new("C1", c1),
        Node::new("D", d),
        Node::new("E", Point2::ORIGIN),
        Node::new("bar_tail", tail),
    ];
    let mut constraints = vec![
        Constraint::anchor("E", Point2::ORIGIN),
        Constraint::anchor("A", a),
        Constraint::distance("A", "B", r).with_id("crank"),
        Constraint::distance("E", "C1", params.long_link).with_id("long"),
        Constraint::distance("B", "C1", params.rhombus_side).with_id("link_b"),
        Constraint::distance("D", "C1", params.rhombus_side).with_id("link_d"),
        Constraint::distance("D", "bar_tail", params.bar_length()).with_id("bar"),
        Constraint::point_on_line("B", "D", "bar_tail").with_id("slider_b"),
        Constraint::point_on_line("E", "D", "bar_tail").with_id("slider_e"),
        Constraint::driven_angle("A", "B", input).with_id("crank_angle"),
    ];
    let mut members = vec!["bar".to_string()];
    if params.bar_overhang > 0.0 {
        nodes.push(Node::new("bar_end", d - along * params.bar_overhang));
        constraints.push(
            Constraint::distance("D", "bar_end", params.bar_overhang).with_id("bar_overhang"),
        );
        constraints.push(Constraint::point_on_line("bar_end", "D", "bar_tail"));
        members.push("bar_overhang".into());
    }
    let bodies = vec![Body {
        id: "slide_bar".into(),
        kind: BodyKind::SlideBar,
        members,
    }];
    Mechanism::new(nodes, constraints, Some("crank_angle"), bodies)
}

/// Parallelogram four-bar, single or chained twice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelogramParams {
    pub link_length: f64,
    pub base_span: f64,
    /// 1 or 2.
    pub stages: u8,
}

impl Default for ParallelogramParams {
    fn default() -> Self {
        Self {
            link_length: 1.0,
            base_span: 0.5,
            stages: 2,
        }
    }
}

impl ParallelogramParams {
    /// Dimensions used by the default finger.
    pub fn finger_default() -> Self {
        Self {
            link_length: 2.0,
            base_span: 1.0,
            stages: 2,
        }
    }

    fn validate(&self) -> Result<(), LinkageError> {
        if !(self.link_length.is_finite() && self.link_length > 0.0) {
            return Err(LinkageError::definition(format!(
                "link_length must be positive, got {}",
                self.link_length
            )));
        }
        if !(self.base_span.is_finite() && self.base_span > 0.0) {
            return Err(LinkageError::definition(format!(
                "base_span must be positive, got {}",
                self.base_span
            )));
        }
        if !matches!(self.stages, 1 | 2) {
            return Err(LinkageError::definition(format!(
                "stages must be 1 or 2, got {}",
                self.stages
            )));
        }
        Ok(())
    }
}

/// Input angle of the upright pose of [`build_double_parallelogram`].
pub const PARALLELOGRAM_NOMINAL_INPUT: f64 = FRAC_PI_2;

/// Builds one parallelogram, or two in series.
///
/// Ground pivots `G1 = (0, 0)` and `G2 = (span, 0)`; the driver is the
/// angle of link `G1 → M1` (upright at π/2). Stage one's coupler is
/// `M1–M2`. With two stages a second, identical parallelogram stands on
/// `M1–M2` with output coupler `F1–F2`; the two-stage chain has two
/// translational freedoms, so `F1` runs on a rail through `G1` along `+y`
/// to leave one. The output coupler is declared as a `coupler` body.
pub fn build_double_parallelogram(params: &ParallelogramParams) -> Result<Mechanism, LinkageError> {
    params.validate()?;
    let link = params.link_length;
    let span = params.base_span;
    let g1 = Point2::ORIGIN;
    let g2 = Point2::new(span, 0.0);
    let up = Point2::new(0.0, link);

    let mut nodes = vec![
        Node::new("G1", g1),
        Node::new("G2", g2),
        Node::new("M1", g1 + up),
        Node::new("M2", g2 + up),
    ];
    let mut constraints = vec![
        Constraint::anchor("G1", g1),
        Constraint::anchor("G2", g2),
        Constraint::distance("G1", "M1", link).with_id("link_1a"),
        Constraint::distance("G2", "M2", link).with_id("link_1b"),
    ];
    let output = if params.stages == 1 {
        constraints.push(Constraint::distance("M1", "M2", span).with_id("coupler_out"));
        "coupler_out"
    } else {
        let rail = g1 + up;
        nodes.push(Node::new("F1", g1 + up * 2.0));
        nodes.push(Node::new("F2", g2 + up * 2.0));
        nodes.push(Node::new("rail", rail));
        constraints.extend([
            Constraint::anchor("rail", rail),
            Constraint::distance("M1", "M2", span).with_id("coupler_mid"),
            Constraint::distance("M1", "F1", link).with_id("link_2a"),
            Constraint::distance("M2", "F2", link).with_id("link_2b"),
            Constraint::distance("F1", "F2", span).with_id("coupler_out"),
            Constraint::point_on_line("F1", "G1", "rail").with_id("rail_slider"),
        ]);
        "coupler_out"
    };
    constraints.push(
        Constraint::driven_angle("G1", "M1", PARALLELOGRAM_NOMINAL_INPUT).with_id("input_angle"),
    );
    let bodies = vec![Body {
        id: "output".into(),
        kind: BodyKind::Coupler,
        members: vec![output.into()],
    }];
    Mechanism::new(nodes, constraints, Some("input_angle"), bodies)
}

/// Node pair of the declared output coupler link, if any.
pub fn output_segment(mechanism: &Mechanism) -> Option<(String, String)> {
    let body = mechanism
        .bodies()
        .iter()
        .find(|b| b.kind == BodyKind::Coupler && !b.members.is_empty())?;
    let member = &body.members[0];
    mechanism.constraints().iter().find_map(|c| match &c.kind {
        ConstraintKind::Distance { a, b, .. } if c.id.as_deref() == Some(member) => {
            Some((a.clone(), b.clone()))
        }
        _ => None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraspMode {
    /// Fingertips translate on parallel straight lines (precision grasp).
    LinearParallelPinch,
    /// After contact the phalanges rotate to conform (power grasp).
    SelfAdaptiveEnvelop,
}

/// Planar abstraction of the straight-line, orientation-keeping finger.
#[derive(Clone, Debug, PartialEq)]
pub struct FingerModel {
    pub mechanism: Mechanism,
    pub fingertip_node: String,
    pub proximal_segment: (String, String),
    pub distal_segment: (String, String),
    pub mode: GraspMode,
    /// Crank input of the fully open finger.
    pub open_input: f64,
    /// Crank input of the fully closed finger.
    pub closed_input: f64,
    /// Fingertip travel from open to closed, in meters.
    pub stroke: f64,
}

/// Half-width of the default finger crank range around the nominal input.
pub const FINGER_HALF_RANGE: f64 = 1.0;

/// Composes a semi-Peaucellier linkage with a double parallelogram.
///
/// The slide-bar joint `D` is the output coupler's first joint, so the
/// coupler `D–F2` translates along the straight line of `D` while the two
/// parallelogram stages (grounded at `G1`, `G2 = G1 + (0, span)`) hold its
/// orientation. `fingertip` is the coupler midpoint. `G1` sits one link
/// length from the output line, on the far side from `E`.
pub fn build_sp_diff_finger(
    sp: &SemiPeaucellierParams,
    dpm: &ParallelogramParams,
) -> Result<FingerModel, LinkageError> {
    dpm.validate()?;
    if dpm.stages != 2 {
        return Err(LinkageError::definition(
            "the finger needs a two-stage (double) parallelogram",
        ));
    }
    let base = build_semi_peaucellier(sp)?;
    let link = dpm.link_length;
    let span = dpm.base_span;
    let offset = sp.inversor().line_offset();
    let g1 = Point2::new(-offset - link, 0.0);
    let g2 = g1 + Point2::new(0.0, span);
    let up = Point2::new(0.0, span);

    let guesses = base.guesses();
    let d = guesses["D"];
    let chord = d - g1;
    let half = 0.5 * chord.norm();
    let rise = (link * link - half * half).max(0.0).sqrt();
    let m1 = g1.midpoint(d) + chord.perp() * (rise / chord.norm());

    let mut nodes = base.nodes().to_vec();
    nodes.extend([
        Node::new("G1", g1),
        Node::new("G2", g2),
        Node::new("M1", m1),
        Node::new("M2", m1 + up),
        Node::new("F2", d + up),
        Node::new("fingertip", d + up * 0.5),
    ]);
    let mut constraints = base.constraints().to_vec();
    constraints.extend([
        Constraint::anchor("G1", g1),
        Constraint::anchor("G2", g2),
        Constraint::distance("G1", "M1", link).with_id("dpm_link_1a"),
        Constraint::distance("G2", "M2", link).with_id("dpm_link_1b"),
        Constraint::distance("M1", "M2", span).with_id("dpm_coupler_mid"),
        Constraint::distance("M1", "D", link).with_id("dpm_link_2a"),
        Constraint::distance("M2", "F2", link).with_id("dpm_link_2b"),
        Constraint::distance("D", "F2", span).with_id("distal"),
        Constraint::point_on_line("fingertip", "D", "F2"),
        Constraint::distance("D", "fingertip", 0.5 * span).with_id("fingertip_offset"),
    ]);
    let mut bodies = base.bodies().to_vec();
    bodies.push(Body {
        id: "distal_phalanx".into(),
        kind: BodyKind::Coupler,
        members: vec!["distal".into(), "fingertip_offset".into()],
    });
    let driver = base.driver().and_then(|c| c.id.clone());
    let mechanism = Mechanism::new(nodes, constraints, driver.as_deref(), bodies)?;

    let nominal = sp.inversor().nominal_input();
    let open_input = nominal - FINGER_HALF_RANGE;
    let closed_input = nominal + FINGER_HALF_RANGE;
    let travel = sweep(&mechanism, open_input, closed_input, 64)?;
    let tip = |c: &Configuration| c.position("fingertip").expect("fingertip is a node");
    let stroke = tip(&travel.samples[0]).distance(tip(travel.samples.last().unwrap()));

    Ok(FingerModel {
        mechanism,
        fingertip_node: "fingertip".into(),
        proximal_segment: ("G1".into(), "M1".into()),
        distal_segment: ("D".into(), "F2".into()),
        mode: GraspMode::LinearParallelPinch,
        open_input,
        closed_input,
        stroke,
    })
}

impl FingerModel {
    /// Full fingertip gap of a symmetric two-finger gripper whose fingertips
    /// meet at full closure.
    pub fn max_gap(&self) -> f64 {
        2.0 * self.stroke
    }

    /// Travel at which the fingertip gap shrinks to `object_width`.
    pub fn contact_travel(&self, object_width: f64) -> f64 {
        (self.stroke - 0.5 * object_width).max(0.0)
    }
}

/// Grasp mode after `closure_travel` meters of fingertip travel on an
/// object of the given width: parallel pinching up to contact, adaptive
/// enveloping once travel continues past it.
///
/// Expects `object_width > 0` and `closure_travel ≥ 0`.
pub fn classify_mode(finger: &FingerModel, object_width: f64, closure_travel: f64) -> GraspMode {
    if closure_travel <= finger.contact_travel(object_width) {
        GraspMode::LinearParallelPinch
    } else {
        GraspMode::SelfAdaptiveEnvelop
    }
}

/// `|EB| · |ED|` of a solved inversor configuration.
pub fn inversion_product(config: &Configuration) -> Result<f64, LinkageError> {
    let get = |id: &str| {
        config
            .position(id)
            .ok_or_else(|| LinkageError::definition(format!("configuration has no node `{id}`")))
    };
    let e = get("E")?;
    Ok(e.distance(get("B")?) * e.distance(get("D")?))
}

/// Moving rigid bodies: every declared body counts once and absorbs its
/// member links; every other `Distance` link is one body. Sliding and
/// angle constraints are joints, anchors are ground.
pub fn component_count(mechanism: &Mechanism) -> usize {
    let merged: Vec<&str> = mechanism
        .bodies()
        .iter()
        .flat_map(|b| b.members.iter().map(String::as_str))
        .collect();
    let loose = mechanism
        .constraints()
        .iter()
        .filter(|c| matches!(c.kind, ConstraintKind::Distance { .. }))
        .filter(|c| !c.id.as_deref().is_some_and(|id| merged.contains(&id)))
        .count();
    loose + mechanism.bodies().len()
}

/// Percentage reduction in moving components from `before` to `after`.
pub fn component_reduction(before: usize, after: usize) -> f64 {
    100.0 * (before as f64 - after as f64) / before as f64
}
