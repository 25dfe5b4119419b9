//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{orthogonality_error, straightness};
use crate::contact::{
    contact_forces_closed, contact_forces_matrix, ContactForces, SegmentedFingerParams,
};
use crate::error::{AnalysisError, ContactError, GraspError, LinkageError};
use crate::grasp::{
    mass_surface, max_grasp_mass, max_mass_oracle, SurfaceSettings, DEFAULT_FN_RANGE,
    DEFAULT_MU_RANGE, STANDARD_GRAVITY,
};
use crate::linkage::{sweep, Mechanism};
use crate::mechanisms::{
    build_double_parallelogram, build_peaucellier, build_semi_peaucellier, build_sp_diff_finger,
    classify_mode, component_count, inversion_product, ParallelogramParams, PeaucellierParams,
    SemiPeaucellierParams,
};
use crate::output::{format_sig, mass_surface_csv, round_sig, trajectory_csv};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "linkgrasp",
    version,
    about = "Planar linkage kinematics and grasp statics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep a mechanism's driver and write the trajectory CSV.
    Trace(TraceArgs),
    /// Emit the classical Peaucellier inversor as mechanism JSON.
    Peaucellier(BuildArgs),
    /// Emit the semi-Peaucellier linkage as mechanism JSON.
    SemiPeaucellier(BuildArgs),
    /// Emit the (double) parallelogram as mechanism JSON.
    Dpm(BuildArgs),
    /// Emit the composed finger as mechanism JSON.
    Finger(FingerArgs),
    /// Maximum mass held by a parallel pinch.
    GraspMass(GraspMassArgs),
    /// Mass over a μ × Fn grid, written as CSV.
    MassSurface(SurfaceArgs),
    /// Contact forces of the two-phalanx finger.
    Contact(ContactArgs),
    /// Seeded randomized cross-check of closed forms against references.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builder {
    Peaucellier,
    SemiPeaucellier,
    Dpm,
    Finger,
}

/// Dimensions shared by the builders. Unset values take each builder's
/// default.
#[derive(Clone, Debug, Default, Args)]
pub struct BuilderFlags {
    /// Long link length.
    #[arg(long = "L")]
    pub long_link: Option<f64>,
    /// Rhombus side.
    #[arg(long = "s")]
    pub rhombus_side: Option<f64>,
    /// Crank radius.
    #[arg(long = "r")]
    pub crank_radius: Option<f64>,
    /// Slide-bar extension beyond D.
    #[arg(long)]
    pub overhang: Option<f64>,
    /// Parallelogram link length.
    #[arg(long)]
    pub link: Option<f64>,
    /// Parallelogram base span.
    #[arg(long)]
    pub span: Option<f64>,
    /// Parallelogram stages (1 or 2).
    #[arg(long)]
    pub stages: Option<u8>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TraceArgs {
    /// Mechanism JSON document.
    #[arg(long, conflicts_with = "builder", required_unless_present = "builder")]
    pub mechanism: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builder: Option<Builder>,
    #[command(flatten)]
    pub dims: BuilderFlags,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value = "trajectory.csv")]
    pub out: PathBuf,
    /// Fit a line to this node's path.
    #[arg(long)]
    pub analyze: Option<String>,
    /// Reference axis for the orthogonality check, as `A,E`.
    #[arg(long, default_value = "A,E")]
    pub axis: String,
    /// Read --from/--to in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BuildArgs {
    #[command(flatten)]
    pub dims: BuilderFlags,
    /// Write the document here and print a run report instead.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FingerArgs {
    #[command(flatten)]
    pub dims: BuilderFlags,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Object width for mode classification.
    #[arg(long)]
    pub object_width: Option<f64>,
    /// Fingertip travel since the open pose.
    #[arg(long, requires = "object_width")]
    pub travel: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GraspMassArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long = "fn")]
    pub fn_: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub alpha: f64,
    #[arg(long = "max-t", visible_alias = "maxT", default_value_t = 5.0)]
    pub max_t: f64,
    #[arg(long, default_value_t = STANDARD_GRAVITY)]
    pub g: f64,
    /// Read --alpha in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = DEFAULT_MU_RANGE.0)]
    pub mu_min: f64,
    #[arg(long, default_value_t = DEFAULT_MU_RANGE.1)]
    pub mu_max: f64,
    #[arg(long, default_value_t = DEFAULT_FN_RANGE.0)]
    pub fn_min: f64,
    #[arg(long, default_value_t = DEFAULT_FN_RANGE.1)]
    pub fn_max: f64,
    #[arg(long, default_value_t = 10)]
    pub steps_mu: usize,
    #[arg(long, default_value_t = 20)]
    pub steps_fn: usize,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub alpha: f64,
    #[arg(long = "max-t", visible_alias = "maxT", default_value_t = 5.0)]
    pub max_t: f64,
    #[arg(long, default_value_t = STANDARD_GRAVITY)]
    pub g: f64,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, default_value = "mass_surface.csv")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Matrix,
    Closed,
    Both,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ContactArgs {
    #[arg(long)]
    pub k1: f64,
    #[arg(long)]
    pub k2: f64,
    #[arg(long)]
    pub l1: f64,
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub theta2: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long = "Ta")]
    pub ta: f64,
    #[arg(long = "T2")]
    pub t2: f64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Read --theta2 in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Closed-form mass against the bisection oracle.
    Mass,
    /// Closed-form contact forces against the matrix route.
    Contact,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value = "verify.csv")]
    pub out: PathBuf,
}

/// JSON summary printed on standard output.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
    pub summary: BTreeMap<String, Value>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    fn metric(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.into(), value.into());
        self
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<LinkageError> for CliError {
    fn from(e: LinkageError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ContactError> for CliError {
    fn from(e: ContactError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GraspError> for CliError {
    fn from(e: GraspError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Standard output and diagnostics are printed here.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(text) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Runs one command and returns what it prints on success.
pub fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Trace(a) => cmd_trace(&a),
        Command::Peaucellier(a) => cmd_build("peaucellier", Builder::Peaucellier, &a),
        Command::SemiPeaucellier(a) => cmd_build("semi-peaucellier", Builder::SemiPeaucellier, &a),
        Command::Dpm(a) => cmd_build("dpm", Builder::Dpm, &a),
        Command::Finger(a) => cmd_finger(&a),
        Command::GraspMass(a) => cmd_grasp_mass(&a),
        Command::MassSurface(a) => cmd_mass_surface(&a),
        Command::Contact(a) => cmd_contact(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite, got {v}")))
    }
}

fn angle(v: f64, degrees: bool) -> f64 {
    if degrees {
        v.to_radians()
    } else {
        v
    }
}

fn write_file(path: &Path, contents: &str) -> Result<String, CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn peaucellier_params(f: &BuilderFlags) -> PeaucellierParams {
    let d = PeaucellierParams::default();
    PeaucellierParams {
        long_link: f.long_link.unwrap_or(d.long_link),
        rhombus_side: f.rhombus_side.unwrap_or(d.rhombus_side),
        crank_radius: f.crank_radius.unwrap_or(d.crank_radius),
    }
}

fn semi_params(f: &BuilderFlags) -> SemiPeaucellierParams {
    let inv = peaucellier_params(f);
    SemiPeaucellierParams {
        long_link: inv.long_link,
        rhombus_side: inv.rhombus_side,
        crank_radius: inv.crank_radius,
        bar_overhang: f
            .overhang
            .unwrap_or(SemiPeaucellierParams::default().bar_overhang),
    }
}

fn parallelogram_params(f: &BuilderFlags, defaults: ParallelogramParams) -> ParallelogramParams {
    ParallelogramParams {
        link_length: f.link.unwrap_or(defaults.link_length),
        base_span: f.span.unwrap_or(defaults.base_span),
        stages: f.stages.unwrap_or(defaults.stages),
    }
}

fn build(kind: Builder, flags: &BuilderFlags) -> Result<Mechanism, CliError> {
    Ok(match kind {
        Builder::Peaucellier => build_peaucellier(&peaucellier_params(flags))?,
        Builder::SemiPeaucellier => build_semi_peaucellier(&semi_params(flags))?,
        Builder::Dpm => build_double_parallelogram(&parallelogram_params(
            flags,
            ParallelogramParams::default(),
        ))?,
        Builder::Finger => {
            build_sp_diff_finger(
                &semi_params(flags),
                &parallelogram_params(flags, ParallelogramParams::finger_default()),
            )?
            .mechanism
        }
    })
}

fn builder_parameters(report: &mut RunReport, kind: Builder, flags: &BuilderFlags) {
    match kind {
        Builder::Peaucellier => {
            let p = peaucellier_params(flags);
            report
                .param("L", p.long_link)
                .param("s", p.rhombus_side)
                .param("r", p.crank_radius);
        }
        Builder::SemiPeaucellier | Builder::Finger => {
            let p = semi_params(flags);
            report
                .param("L", p.long_link)
                .param("s", p.rhombus_side)
                .param("r", p.crank_radius)
                .param("overhang", p.bar_overhang);
            if kind == Builder::Finger {
                let q = parallelogram_params(flags, ParallelogramParams::finger_default());
                report
                    .param("link", q.link_length)
                    .param("span", q.base_span);
            }
        }
        Builder::Dpm => {
            let q = parallelogram_params(flags, ParallelogramParams::default());
            report
                .param("link", q.link_length)
                .param("span", q.base_span)
                .param("stages", q.stages);
        }
    }
}

fn builder_name(kind: Builder) -> &'static str {
    match kind {
        Builder::Peaucellier => "peaucellier",
        Builder::SemiPeaucellier => "semi-peaucellier",
        Builder::Dpm => "dpm",
        Builder::Finger => "finger",
    }
}

fn cmd_trace(a: &TraceArgs) -> Result<String, CliError> {
    if a.steps == 0 {
        return Err(CliError::Usage("--steps must be >= 1".into()));
    }
    let from = angle(finite("from", a.from)?, a.degrees);
    let to = angle(finite("to", a.to)?, a.degrees);
    let mut report = RunReport::new("trace");

    let mechanism = match (&a.mechanism, a.builder) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            report.param("mechanism", path.display().to_string());
            Mechanism::from_json(&text)?
        }
        (None, Some(kind)) => {
            report.param("builder", builder_name(kind));
            builder_parameters(&mut report, kind, &a.dims);
            build(kind, &a.dims)?
        }
        (None, None) => return Err(CliError::Usage("need --mechanism or --builder".into())),
    };
    report
        .param("from", from)
        .param("to", to)
        .param("steps", a.steps);

    let trajectory = sweep(&mechanism, from, to, a.steps)?;
    let out = write_file(&a.out, &trajectory_csv(&trajectory))?;
    report.outputs.push(out);
    report.metric("samples", trajectory.len()).metric(
        "max_residual",
        trajectory
            .samples
            .iter()
            .map(|s| s.residual_norm)
            .fold(0.0, f64::max),
    );

    if let Some(node) = &a.analyze {
        report.param("analyze", node.as_str());
        let fit = straightness(&trajectory, node)?;
        report
            .metric("max_deviation", fit.max_deviation)
            .metric("rms_deviation", fit.rms_deviation)
            .metric("centroid", json!([fit.centroid.x, fit.centroid.y]))
            .metric("direction", json!([fit.direction.x, fit.direction.y]));
        let (axis_a, axis_b) = a
            .axis
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("--axis must be `A,B`, got `{}`", a.axis)))?;
        let first = &trajectory.samples[0];
        if let (Some(pa), Some(pb)) = (first.position(axis_a), first.position(axis_b)) {
            report.param("axis", a.axis.as_str());
            report
                .metric("orthogonality_error", orthogonality_error(&fit, pa, pb))
                .metric("line_offset", fit.signed_distance(pb).abs());
        }
    }

    if ["B", "D", "E"].iter().all(|id| mechanism.has_node(id)) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for sample in &trajectory.samples {
            let k = inversion_product(sample)?;
            lo = lo.min(k);
            hi = hi.max(k);
        }
        report
            .metric("inversion_product_min", lo)
            .metric("inversion_product_max", hi);
    }
    Ok(report.to_json())
}

fn cmd_build(name: &str, kind: Builder, a: &BuildArgs) -> Result<String, CliError> {
    let mechanism = build(kind, &a.dims)?;
    let doc = mechanism.to_json();
    let Some(path) = &a.out else {
        return Ok(doc);
    };
    let mut report = RunReport::new(name);
    builder_parameters(&mut report, kind, &a.dims);
    report.outputs.push(write_file(path, &doc)?);
    report
        .metric("nodes", mechanism.nodes().len())
        .metric("component_count", component_count(&mechanism));
    Ok(report.to_json())
}

fn cmd_finger(a: &FingerArgs) -> Result<String, CliError> {
    let finger = build_sp_diff_finger(
        &semi_params(&a.dims),
        &parallelogram_params(&a.dims, ParallelogramParams::finger_default()),
    )?;
    let doc = finger.mechanism.to_json();
    if a.out.is_none() && a.object_width.is_none() {
        return Ok(doc);
    }
    let mut report = RunReport::new("finger");
    builder_parameters(&mut report, Builder::Finger, &a.dims);
    if let Some(path) = &a.out {
        report.outputs.push(write_file(path, &doc)?);
    }
    report
        .metric("fingertip", finger.fingertip_node.as_str())
        .metric("open_input", finger.open_input)
        .metric("closed_input", finger.closed_input)
        .metric("stroke", finger.stroke)
        .metric("max_gap", finger.max_gap())
        .metric("component_count", component_count(&finger.mechanism));
    if let Some(width) = a.object_width {
        let travel = a.travel.unwrap_or(0.0);
        if !(width.is_finite() && width > 0.0) {
            return Err(CliError::Usage(format!(
                "--object-width must be positive, got {width}"
            )));
        }
        if !(travel.is_finite() && travel >= 0.0) {
            return Err(CliError::Usage(format!(
                "--travel must be >= 0, got {travel}"
            )));
        }
        report.param("object_width", width).param("travel", travel);
        report
            .metric("contact_travel", finger.contact_travel(width))
            .metric(
                "mode",
                serde_json::to_value(classify_mode(&finger, width, travel))
                    .expect("mode serializes"),
            );
    }
    Ok(report.to_json())
}

fn grasp_inputs(mu: f64, fn_: f64, d: f64, max_t: f64, g: f64) -> Result<(), CliError> {
    for (name, v) in [
        ("mu", mu),
        ("fn", fn_),
        ("d", d),
        ("max-t", max_t),
        ("g", g),
    ] {
        finite(name, v)?;
        if v < 0.0 {
            return Err(CliError::Usage(format!("--{name} must be >= 0, got {v}")));
        }
    }
    if g == 0.0 {
        return Err(CliError::Usage("--g must be positive".into()));
    }
    Ok(())
}

fn cmd_grasp_mass(a: &GraspMassArgs) -> Result<String, CliError> {
    let alpha = angle(finite("alpha", a.alpha)?, a.degrees);
    grasp_inputs(a.mu, a.fn_, a.d, a.max_t, a.g)?;
    let mass = max_grasp_mass(a.mu, a.fn_, a.d, alpha, a.max_t, a.g);
    let oracle = max_mass_oracle(a.mu, a.fn_, a.d, alpha, a.max_t, a.g);
    let mut report = RunReport::new("grasp-mass");
    report
        .param("mu", a.mu)
        .param("fn", a.fn_)
        .param("d", a.d)
        .param("alpha", alpha)
        .param("maxT", a.max_t)
        .param("g", a.g);
    report
        .metric("mass_kg", round_sig(mass, 9))
        .metric("oracle_mass_kg", round_sig(oracle, 9))
        .metric("oracle_delta", (mass - oracle).abs());
    Ok(report.to_json())
}

fn cmd_mass_surface(a: &SurfaceArgs) -> Result<String, CliError> {
    let settings = SurfaceSettings {
        d: a.d,
        alpha: angle(finite("alpha", a.alpha)?, a.degrees),
        max_t: a.max_t,
        g: a.g,
    };
    let surface = mass_surface(
        (a.mu_min, a.mu_max),
        (a.fn_min, a.fn_max),
        a.steps_mu,
        a.steps_fn,
        &settings,
    )?;
    let mut report = RunReport::new("mass-surface");
    report
        .param("mu_range", json!([a.mu_min, a.mu_max]))
        .param("fn_range", json!([a.fn_min, a.fn_max]))
        .param("steps_mu", a.steps_mu)
        .param("steps_fn", a.steps_fn)
        .param("d", settings.d)
        .param("alpha", settings.alpha)
        .param("maxT", settings.max_t)
        .param("g", settings.g);
    report
        .outputs
        .push(write_file(&a.out, &mass_surface_csv(&surface))?);
    report
        .metric("rows", surface.mu_axis.len() * surface.fn_axis.len())
        .metric("min_mass_kg", round_sig(surface.min(), 9))
        .metric("max_mass_kg", round_sig(surface.max(), 9));
    Ok(report.to_json())
}

fn forces_json(f: &ContactForces) -> Value {
    json!({ "f1": f.f1, "f2": f.f2, "closure": f.closure })
}

fn cmd_contact(a: &ContactArgs) -> Result<String, CliError> {
    let params = SegmentedFingerParams {
        k1: a.k1,
        k2: a.k2,
        l1: a.l1,
        h: a.h,
        theta2: angle(a.theta2, a.degrees),
        mu: a.mu,
        ta: a.ta,
        t2: a.t2,
    };
    let value = match a.method {
        Method::Matrix | Method::Closed => {
            let (f, name) = if a.method == Method::Matrix {
                (contact_forces_matrix(&params)?, "matrix")
            } else {
                (contact_forces_closed(&params)?, "closed")
            };
            let mut v = forces_json(&f);
            v["command"] = json!("contact");
            v["method"] = json!(name);
            v
        }
        Method::Both => {
            let m = contact_forces_matrix(&params)?;
            let c = contact_forces_closed(&params)?;
            let delta = (m.f1 - c.f1).abs().max((m.f2 - c.f2).abs());
            let mut v = forces_json(&c);
            v["command"] = json!("contact");
            v["method"] = json!("both");
            v["closed"] = forces_json(&c);
            v["matrix"] = forces_json(&m);
            v["max_delta"] = json!(delta);
            v
        }
    };
    Ok(serde_json::to_string_pretty(&value).expect("forces serialize"))
}

/// Relative tolerance of the mass cross-check.
const MASS_RTOL: f64 = 1e-6;
/// Absolute tolerance of the contact cross-check, newtons.
const CONTACT_ATOL: f64 = 1e-12;

fn cmd_verify(a: &VerifyArgs) -> Result<String, CliError> {
    if a.count == 0 {
        return Err(CliError::Usage("--count must be >= 1".into()));
    }
    let mut report = RunReport::new("verify");
    report.param("seed", a.seed).param("count", a.count);
    let (csv, worst, tol, checked) = match a.check {
        Check::Mass => {
            report.param("check", "mass");
            let checks = verify::check_mass(&verify::random_mass_tuples(a.seed, a.count));
            let worst = checks
                .iter()
                .map(|c| c.relative_error())
                .fold(0.0, f64::max);
            (
                verify::mass_checks_csv(&checks),
                worst,
                MASS_RTOL,
                checks.len(),
            )
        }
        Check::Contact => {
            report.param("check", "contact");
            let checks = verify::check_contact(&verify::random_finger_params(a.seed, a.count));
            let worst = checks.iter().map(|c| c.max_delta()).fold(0.0, f64::max);
            (
                verify::contact_checks_csv(&checks),
                worst,
                CONTACT_ATOL,
                checks.len(),
            )
        }
    };
    report.outputs.push(write_file(&a.out, &csv)?);
    report
        .metric("checked", checked)
        .metric("worst_error", worst)
        .metric("tolerance", tol);
    if worst > tol {
        return Err(CliError::Numerical(format!(
            "cross-check failed: worst error {} exceeds {}",
            format_sig(worst, 6),
            format_sig(tol, 6)
        )));
    }
    Ok(report.to_json())
}
