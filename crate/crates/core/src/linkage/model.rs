use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::LinkageError;
use crate::geometry::Point2;

/// A joint of the mechanism, with the position the solver starts from.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: String,
    pub guess: Point2,
}

impl Node {
    pub fn new(id: impl Into<String>, guess: Point2) -> Self {
        Self {
            id: id.into(),
            guess,
        }
    }
}

/// Scalar geometric relations between nodes.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintKind {
    /// Node pinned to ground (2 equations).
    Anchor { node: String, position: Point2 },
    /// Rigid link: `|pos(b) − pos(a)| = length`.
    Distance { a: String, b: String, length: f64 },
    /// Signed perpendicular distance of `point` from the infinite line
    /// `line_a → line_b` is zero (left of the line is positive).
    PointOnLine {
        point: String,
        line_a: String,
        line_b: String,
    },
    /// `atan2(pos(moving) − pos(pivot)) = angle`. When this constraint is
    /// the mechanism's driver, the angle is the sweep input instead.
    DrivenAngle {
        pivot: String,
        moving: String,
        angle: f64,
    },
}

impl ConstraintKind {
    /// Number of scalar equations contributed.
    pub fn equations(&self) -> usize {
        match self {
            ConstraintKind::Anchor { .. } => 2,
            _ => 1,
        }
    }

    fn node_refs(&self) -> Vec<&str> {
        match self {
            ConstraintKind::Anchor { node, .. } => vec![node],
            ConstraintKind::Distance { a, b, .. } => vec![a, b],
            ConstraintKind::PointOnLine {
                point,
                line_a,
                line_b,
            } => vec![point, line_a, line_b],
            ConstraintKind::DrivenAngle { pivot, moving, .. } => vec![pivot, moving],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    /// Optional label; required for constraints referenced as the driver or
    /// as members of a declared body.
    pub id: Option<String>,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn anchor(node: &str, position: Point2) -> Self {
        ConstraintKind::Anchor {
            node: node.into(),
            position,
        }
        .into()
    }

    pub fn distance(a: &str, b: &str, length: f64) -> Self {
        ConstraintKind::Distance {
            a: a.into(),
            b: b.into(),
            length,
        }
        .into()
    }

    pub fn point_on_line(point: &str, line_a: &str, line_b: &str) -> Self {
        ConstraintKind::PointOnLine {
            point: point.into(),
            line_a: line_a.into(),
            line_b: line_b.into(),
        }
        .into()
    }

    pub fn driven_angle(pivot: &str, moving: &str, angle: f64) -> Self {
        ConstraintKind::DrivenAngle {
            pivot: pivot.into(),
            moving: moving.into(),
            angle,
        }
        .into()
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = Some(id.into());
        self
    }
}

impl From<ConstraintKind> for Constraint {
    fn from(kind: ConstraintKind) -> Self {
        Constraint { id: None, kind }
    }
}

/// What a declared rigid body is, for component counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    /// A rigid body carrying three or more joints.
    Ternary,
    /// A bar carrying sliding joints.
    SlideBar,
    /// An output member that carries no constraint of its own.
    Coupler,
}

/// A rigid body that merges several `Distance` links (by constraint id) into
/// one moving component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub id: String,
    pub kind: BodyKind,
    #[serde(default)]
    pub members: Vec<String>,
}

/// Resolved form of a constraint with node indices, used by the solver.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Resolved {
    Anchor {
        node: usize,
        position: Point2,
    },
    Distance {
        a: usize,
        b: usize,
        length: f64,
    },
    PointOnLine {
        point: usize,
        a: usize,
        b: usize,
    },
    Angle {
        pivot: usize,
        moving: usize,
        angle: f64,
        driver: bool,
    },
}

/// Nodes, constraints and an optional driver. Validated on construction.
#[derive(Clone, Debug)]
pub struct Mechanism {
    nodes: Vec<Node>,
    constraints: Vec<Constraint>,
    driver: Option<usize>,
    bodies: Vec<Body>,
    index: HashMap<String, usize>,
    resolved: Vec<Resolved>,
}

impl PartialEq for Mechanism {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.constraints == other.constraints
            && self.driver == other.driver
            && self.bodies == other.bodies
    }
}

impl Mechanism {
    /// Validates and builds a mechanism. `driver` is the id of a
    /// `DrivenAngle` constraint.
    pub fn new(
        nodes: Vec<Node>,
        constraints: Vec<Constraint>,
        driver: Option<&str>,
        bodies: Vec<Body>,
    ) -> Result<Self, LinkageError> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if node.id.is_empty() {
                return Err(LinkageError::definition("empty node id"));
            }
            if !node.guess.is_finite() {
                return Err(LinkageError::definition(format!(
                    "node `{}` has a non-finite guess",
                    node.id
                )));
            }
            if index.insert(node.id.clone(), i).is_some() {
                return Err(LinkageError::definition(format!(
                    "duplicate node id `{}`",
                    node.id
                )));
            }
        }

        let lookup = |id: &str| {
            index.get(id).copied().ok_or_else(|| {
                LinkageError::definition(format!("unknown node id `{id}` referenced"))
            })
        };

        let mut constraint_ids: HashMap<&str, usize> = HashMap::new();
        for (ci, c) in constraints.iter().enumerate() {
            if let Some(id) = &c.id {
                if constraint_ids.insert(id.as_str(), ci).is_some() {
                    return Err(LinkageError::definition(format!(
                        "duplicate constraint id `{id}`"
                    )));
                }
            }
        }

        let driver_index = match driver {
            None => None,
            Some(d) => {
                let ci = *constraint_ids.get(d).ok_or_else(|| {
                    LinkageError::definition(format!("driver `{d}` names no constraint"))
                })?;
                if !matches!(constraints[ci].kind, ConstraintKind::DrivenAngle { .. }) {
                    return Err(LinkageError::definition(format!(
                        "driver `{d}` is not a driven_angle constraint"
                    )));
                }
                Some(ci)
            }
        };

        let mut anchored = vec![false; nodes.len()];
        let mut resolved = Vec::with_capacity(constraints.len());
        for (ci, c) in constraints.iter().enumerate() {
            for id in c.kind.node_refs() {
                lookup(id)?;
            }
            let r = match &c.kind {
                ConstraintKind::Anchor { node, position } => {
                    let n = lookup(node)?;
                    if !position.is_finite() {
                        return Err(LinkageError::definition(format!(
                            "anchor of `{node}` has a non-finite position"
                        )));
                    }
                    if std::mem::replace(&mut anchored[n], true) {
                        return Err(LinkageError::definition(format!(
                            "node `{node}` is anchored twice"
                        )));
                    }
                    Resolved::Anchor {
                        node: n,
                        position: *position,
                    }
                }
                ConstraintKind::Distance { a, b, length } => {
                    if !(length.is_finite() && *length > 0.0) {
                        return Err(LinkageError::definition(format!(
                            "distance {a}–{b} must have a positive length, got {length}"
                        )));
                    }
                    if a == b {
                        return Err(LinkageError::definition(format!(
                            "distance constraint joins `{a}` to itself"
                        )));
                    }
                    Resolved::Distance {
                        a: lookup(a)?,
                        b: lookup(b)?,
                        length: *length,
                    }
                }
                ConstraintKind::PointOnLine {
                    point,
                    line_a,
                    line_b,
                } => {
                    if line_a == line_b {
                        return Err(LinkageError::definition(format!(
                            "point_on_line for `{point}` uses `{line_a}` for both line nodes"
                        )));
                    }
                    Resolved::PointOnLine {
                        point: lookup(point)?,
                        a: lookup(line_a)?,
                        b: lookup(line_b)?,
                    }
                }
                ConstraintKind::DrivenAngle {
                    pivot,
                    moving,
                    angle,
                } => {
                    if pivot == moving {
                        return Err(LinkageError::definition(format!(
                            "driven_angle pivot and moving node are both `{pivot}`"
                        )));
                    }
                    if !angle.is_finite() {
                        return Err(LinkageError::definition(
                            "driven_angle with non-finite angle",
                        ));
                    }
                    Resolved::Angle {
                        pivot: lookup(pivot)?,
                        moving: lookup(moving)?,
                        angle: *angle,
                        driver: driver_index == Some(ci),
                    }
                }
            };
            resolved.push(r);
        }

        let mut seen_members: HashMap<&str, &str> = HashMap::new();
        let mut body_ids: HashMap<&str, ()> = HashMap::new();
        for body in &bodies {
            if body_ids.insert(body.id.as_str(), ()).is_some() {
                return Err(LinkageError::definition(format!(
                    "duplicate body id `{}`",
                    body.id
                )));
            }
            for m in &body.members {
                let ci = *constraint_ids.get(m.as_str()).ok_or_else(|| {
                    LinkageError::definition(format!(
                        "body `{}` lists unknown constraint `{m}`",
                        body.id
                    ))
                })?;
                if !matches!(constraints[ci].kind, ConstraintKind::Distance { .. }) {
                    return Err(LinkageError::definition(format!(
                        "body `{}` member `{m}` is not a distance link",
                        body.id
                    )));
                }
                if let Some(prev) = seen_members.insert(m.as_str(), body.id.as_str()) {
                    return Err(LinkageError::definition(format!(
                        "link `{m}` belongs to both `{prev}` and `{}`",
                        body.id
                    )));
                }
            }
        }

        Ok(Self {
            nodes,
            constraints,
            driver: driver_index,
            bodies,
            index,
            resolved,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    /// The driver constraint, if the mechanism has one.
    pub fn driver(&self) -> Option<&Constraint> {
        self.driver.map(|i| &self.constraints[i])
    }

    pub fn has_node(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub(crate) fn resolved(&self) -> &[Resolved] {
        &self.resolved
    }

    /// Anchor position per node index, `None` for free nodes.
    pub(crate) fn anchor_positions(&self) -> Vec<Option<Point2>> {
        let mut out = vec![None; self.nodes.len()];
        for r in &self.resolved {
            if let Resolved::Anchor { node, position } = *r {
                out[node] = Some(position);
            }
        }
        out
    }

    /// Ids of nodes not pinned to ground, in declaration order.
    pub fn free_nodes(&self) -> Vec<&str> {
        self.anchor_positions()
            .iter()
            .zip(&self.nodes)
            .filter(|(a, _)| a.is_none())
            .map(|(_, n)| n.id.as_str())
            .collect()
    }

    /// The declared guesses keyed by node id (anchored nodes at their anchor).
    pub fn guesses(&self) -> BTreeMap<String, Point2> {
        let anchors = self.anchor_positions();
        self.nodes
            .iter()
            .zip(anchors)
            .map(|(n, a)| (n.id.clone(), a.unwrap_or(n.guess)))
            .collect()
    }

    /// Same mechanism with every guess replaced by the position in `config`.
    pub fn with_guesses(&self, positions: &BTreeMap<String, Point2>) -> Self {
        let mut out = self.clone();
        for node in &mut out.nodes {
            if let Some(p) = positions.get(&node.id) {
                node.guess = *p;
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self, LinkageError> {
        let doc: MechanismDoc =
            serde_json::from_str(text).map_err(|e| LinkageError::Parse(e.to_string()))?;
        Mechanism::try_from(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MechanismDoc::from(self))
            .expect("mechanism documents always serialize")
    }
}

/// Solved node positions at one input value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Configuration {
    pub positions: BTreeMap<String, Point2>,
    pub input: f64,
    pub residual_norm: f64,
}

impl Configuration {
    pub fn position(&self, id: &str) -> Option<Point2> {
        self.positions.get(id).copied()
    }
}

/// Configurations at strictly monotone input values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Configuration>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Positions of one node across all samples.
    pub fn path(&self, node: &str) -> Option<Vec<Point2>> {
        self.samples.iter().map(|s| s.position(node)).collect()
    }
}

// ---------------------------------------------------------------------------
// JSON document

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub guess: [f64; 2],
    #[serde(default)]
    pub anchored: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintDoc {
    Distance {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        a: String,
        b: String,
        length: f64,
    },
    PointOnLine {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        point: String,
        line_a: String,
        line_b: String,
    },
    DrivenAngle {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        pivot: String,
        moving: String,
        #[serde(default)]
        angle: f64,
    },
}

/// On-disk mechanism definition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismDoc {
    pub nodes: Vec<NodeDoc>,
    pub constraints: Vec<ConstraintDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub driver: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<Body>,
}

impl TryFrom<MechanismDoc> for Mechanism {
    type Error = LinkageError;

    fn try_from(doc: MechanismDoc) -> Result<Self, LinkageError> {
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut constraints = Vec::new();
        for n in doc.nodes {
            match (n.anchored, n.position) {
                (true, Some(p)) => constraints.push(Constraint::anchor(&n.id, p.into())),
                (true, None) => {
                    return Err(LinkageError::definition(format!(
                        "anchored node `{}` has no position",
                        n.id
                    )))
                }
                (false, Some(_)) => {
                    return Err(LinkageError::definition(format!(
                        "node `{}` has a position but is not anchored",
                        n.id
                    )))
                }
                (false, None) => {}
            }
            nodes.push(Node::new(n.id, n.guess.into()));
        }
        for c in doc.constraints {
            let (id, kind) = match c {
                ConstraintDoc::Distance { id, a, b, length } => {
                    (id, ConstraintKind::Distance { a, b, length })
                }
                ConstraintDoc::PointOnLine {
                    id,
                    point,
                    line_a,
                    line_b,
                } => (
                    id,
                    ConstraintKind::PointOnLine {
                        point,
                        line_a,
                        line_b,
                    },
                ),
                ConstraintDoc::DrivenAngle {
                    id,
                    pivot,
                    moving,
                    angle,
                } => (
                    id,
                    ConstraintKind::DrivenAngle {
                        pivot,
                        moving,
                        angle,
                    },
                ),
            };
            constraints.push(Constraint { id, kind });
        }
        Mechanism::new(nodes, constraints, doc.driver.as_deref(), doc.bodies)
    }
}

impl From<&Mechanism> for MechanismDoc {
    fn from(m: &Mechanism) -> Self {
        let anchors = m.anchor_positions();
        let nodes = m
            .nodes
            .iter()
            .zip(anchors)
            .map(|(n, a)| NodeDoc {
                id: n.id.clone(),
                guess: n.guess.into(),
                anchored: a.is_some(),
                position: a.map(Into::into),
            })
            .collect();
        let constraints = m
            .constraints
            .iter()
            .filter_map(|c| {
                let id = c.id.clone();
                Some(match &c.kind {
                    ConstraintKind::Anchor { .. } => return None,
                    ConstraintKind::Distance { a, b, length } => ConstraintDoc::Distance {
                        id,
                        a: a.clone(),
                        b: b.clone(),
                        length: *length,
                    },
                    ConstraintKind::PointOnLine {
                        point,
                        line_a,
                        line_b,
                    } => ConstraintDoc::PointOnLine {
                        id,
                        point: point.clone(),
                        line_a: line_a.clone(),
                        line_b: line_b.clone(),
                    },
                    ConstraintKind::DrivenAngle {
                        pivot,
                        moving,
                        angle,
                    } => ConstraintDoc::DrivenAngle {
                        id,
                        pivot: pivot.clone(),
                        moving: moving.clone(),
                        angle: *angle,
                    },
                })
            })
            .collect();
        MechanismDoc {
            nodes,
            constraints,
            driver: m.driver().and_then(|c| c.id.clone()),
            bodies: m.bodies.clone(),
        }
    }
}
