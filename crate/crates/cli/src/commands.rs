//! The five subcommands. Each renders its whole output in memory and
//! returns it with the list of failed tolerance checks; `main` decides the
//! exit status.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use qat_core::grid::{Axis, CartesianGrid, GridState};
use qat_core::observables::{l2_distance, moments, MomentReport};
use qat_core::operators::{commutator_audit, max_relative_error, number_from_algebra};
use qat_core::propagator::{capture_frequency, run_schedule, sling, Segment, SlingParams, SlingReport, Snapshot};
use qat_core::qat::{qat_forward, qat_inverse, HarmonicPair};
use qat_core::states::eval_oscillator_squeezed_number;
use qat_core::states_nd::uncertainties;
use qat_core::{LinearOperator1D, OpKind, PhysicalScales, Potential, Propagator, StateSpec1D, StateSpecND, TrapSchedule, C64};
use serde::Serialize;

use crate::config::{
    invalid, BuiltState, ConfigError, Format, Geometry, GridBlock, Invalid, Layout, Loaded, PotentialKind, ScalesBlock,
    StateBlock,
};
use crate::output::{fmt_f64, to_json, CsvDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eval,
    Audit,
    Sling,
    Uncertainty,
    QatRoundtrip,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eval => "eval",
            Self::Audit => "audit",
            Self::Sling => "sling",
            Self::Uncertainty => "uncertainty",
            Self::QatRoundtrip => "qat-roundtrip",
        }
    }

    /// Profiles default to CSV, reports to JSON.
    pub fn default_format(self) -> Format {
        match self {
            Self::Eval | Self::Sling => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    /// A library error caused by the inputs (domain, regime, focal point…).
    Input(String),
    /// Under-resolution, window overflow, instability or accuracy loss.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(e) => write!(f, "invalid configuration: {e}"),
            Self::Input(m) => write!(f, "invalid input: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<qat_core::Error> for CliError {
    fn from(e: qat_core::Error) -> Self {
        use qat_core::Error as E;
        match e {
            E::UnderResolved(_) | E::WindowOverflow { .. } | E::Accuracy(_) | E::Stability(_) => {
                Self::Numerical(e.to_string())
            }
            _ => Self::Input(e.to_string()),
        }
    }
}

pub struct Rendered {
    pub text: String,
    /// Human-readable descriptions of checks that exceeded tolerance.
    pub failures: Vec<String>,
}

pub fn run(cmd: Command, loaded: &Loaded, format: Format) -> Result<Rendered, CliError> {
    let bad = |e: Invalid| CliError::Config(loaded.locate(e));
    match cmd {
        Command::Eval => eval(loaded, format).map_err(|e| e.resolve(&bad)),
        Command::Audit => audit(loaded, format).map_err(|e| e.resolve(&bad)),
        Command::Sling => run_sling(loaded, format).map_err(|e| e.resolve(&bad)),
        Command::Uncertainty => uncertainty(loaded, format).map_err(|e| e.resolve(&bad)),
        Command::QatRoundtrip => roundtrip(loaded, format).map_err(|e| e.resolve(&bad)),
    }
}

/// Internal error type: config problems stay unlocated until `run`.
enum Fail {
    Invalid(Invalid),
    Cli(CliError),
}

impl Fail {
    fn resolve(self, locate: &dyn Fn(Invalid) -> CliError) -> CliError {
        match self {
            Self::Invalid(i) => locate(i),
            Self::Cli(c) => c,
        }
    }
}

impl From<Invalid> for Fail {
    fn from(e: Invalid) -> Self {
        Self::Invalid(e)
    }
}

impl From<qat_core::Error> for Fail {
    fn from(e: qat_core::Error) -> Self {
        Self::Cli(e.into())
    }
}

type Out = Result<Rendered, Fail>;

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    t: f64,
    measured: Option<f64>,
    tolerance: f64,
    pass: bool,
    diagnosis: Option<String>,
}

impl Check {
    fn measured(name: impl Into<String>, t: f64, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            t,
            measured: Some(value),
            tolerance,
            pass: value.is_finite() && value <= tolerance,
            diagnosis: None,
        }
    }

    fn from_result(name: impl Into<String>, t: f64, r: qat_core::Result<f64>, tolerance: f64) -> Self {
        match r {
            Ok(v) => Self::measured(name, t, v, tolerance),
            Err(e) => Self {
                name: name.into(),
                t,
                measured: None,
                tolerance,
                pass: false,
                diagnosis: Some(e.to_string()),
            },
        }
    }

    fn describe(&self) -> String {
        match (&self.diagnosis, self.measured) {
            (Some(d), _) => format!("{} at t = {}: {d}", self.name, self.t),
            (None, Some(v)) => format!("{} at t = {}: {} exceeds {}", self.name, self.t, fmt_f64(v), fmt_f64(self.tolerance)),
            (None, None) => format!("{} at t = {}", self.name, self.t),
        }
    }
}

fn failures(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.pass).map(Check::describe).collect()
}

fn checks_csv(title: &str, checks: &[Check]) -> CsvDoc {
    let mut doc = CsvDoc::new(&["name", "t", "measured", "tolerance", "pass", "diagnosis"]);
    doc.comment(title.to_string());
    doc.comment("columns: name = check; t = time; measured = worst deviation (empty if the check errored);");
    doc.comment("tolerance = threshold; pass = measured <= tolerance; diagnosis = error text when the check could not run");
    for c in checks {
        doc.push(vec![
            c.name.clone(),
            fmt_f64(c.t),
            c.measured.map(fmt_f64).unwrap_or_default(),
            fmt_f64(c.tolerance),
            c.pass.to_string(),
            c.diagnosis.clone().unwrap_or_default(),
        ]);
    }
    doc
}

fn scales_line(s: &ScalesBlock) -> String {
    format!("scales: mass = {}, hbar = {}, omega = {}", s.mass, s.hbar, s.omega)
}

fn state_line(b: &StateBlock) -> String {
    let mut s = format!("state: family = {:?}, indices = {:?}", b.family, b.indices).to_lowercase();
    if let Some([re, im]) = b.a {
        s += &format!(", a = {re} + {im}i");
    }
    if let Some(r) = b.r {
        s += &format!(", r = {r}");
    }
    if let Some(c) = b.chirality {
        s += &format!(", chirality = {c:?}").to_lowercase();
    }
    s
}

fn grid_echo(axes: &[Axis]) -> GridBlock {
    GridBlock {
        lo: axes.iter().map(|a| a.x_min).collect(),
        hi: axes.iter().map(|a| a.x_min + a.period()).collect(),
        points: axes.iter().map(|a| a.len).collect(),
    }
}

fn configured_axes(loaded: &Loaded, dim: usize) -> Result<Option<Vec<Axis>>, Invalid> {
    match &loaded.config.grid {
        Some(g) if g.dim() != dim => Err(invalid(
            &["grid", "lo"],
            format!("grid has {} dimension(s) but the state needs {dim}", g.dim()),
        )),
        Some(g) => Ok(Some(g.axes())),
        None => Ok(None),
    }
}

/// A window resolving a 1D state at every one of `times`.
fn covering(spec: &StateSpec1D, times: &[f64]) -> Axis {
    let axes: Vec<Axis> = times.iter().map(|&t| spec.suggested_axis(t, 256)).collect();
    let lo = axes.iter().map(|a| a.x_min).fold(f64::INFINITY, f64::min);
    let hi = axes.iter().map(|a| a.x_max()).fold(f64::NEG_INFINITY, f64::max);
    let dx = axes.iter().map(|a| a.dx).fold(f64::INFINITY, f64::min);
    let len = ((hi - lo) / dx).ceil() as usize;
    Axis::spanning(lo, hi, len.next_power_of_two()).expect("finite window")
}

fn nd_grid(spec: &StateSpecND, times: &[f64]) -> CartesianGrid {
    let t = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    spec.suggested_grid(t, 32)
}

// ---------------------------------------------------------------- eval

#[derive(Serialize)]
struct TableReport<'a> {
    command: &'static str,
    scales: ScalesBlock,
    state: &'a StateBlock,
    grid: GridBlock,
    times: &'a [f64],
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn eval(loaded: &Loaded, format: Format) -> Out {
    let cfg = &loaded.config;
    let scales = cfg.physical_scales();
    let block = cfg.eval.clone().unwrap_or_default();
    let state_block = cfg.state_or_default();
    let state = state_block.build(scales);
    let dim = state.dim();
    if block.layout == Layout::Wide && dim != 1 {
        return Err(invalid(&["eval", "layout"], "the wide layout needs a 1D state").into());
    }
    let times = &block.times;
    let axes = match configured_axes(loaded, dim)? {
        Some(a) => a,
        None => match &state {
            BuiltState::Line(s) => vec![covering(s, times)],
            BuiltState::Nd(s) => nd_grid(s, times).axes,
        },
    };
    let grid = CartesianGrid::new(axes.clone());
    let coords: Vec<&str> = ["x", "y", "z"][..dim].to_vec();

    let mut columns: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let sample = |t: f64| -> qat_core::Result<Vec<C64>> {
        if grid.size() == 0 {
            return Ok(Vec::new());
        }
        match &state {
            BuiltState::Line(s) => Ok(s.sample(axes[0], t).samples),
            BuiltState::Nd(s) => Ok(s.sample(&grid, t)?.data),
        }
    };
    match block.layout {
        Layout::Long => {
            columns.push("t".into());
            columns.extend(coords.iter().map(|c| c.to_string()));
            columns.push("density".into());
            if block.include_phase {
                columns.extend(["re".into(), "im".into()]);
            }
            let mut point = vec![0.0; dim];
            for &t in times {
                for (idx, psi) in sample(t)?.into_iter().enumerate() {
                    grid.point(idx, &mut point);
                    let mut row = Vec::with_capacity(columns.len());
                    row.push(t);
                    row.extend_from_slice(&point);
                    row.push(psi.norm_sqr());
                    if block.include_phase {
                        row.extend([psi.re, psi.im]);
                    }
                    rows.push(row);
                }
            }
        }
        Layout::Wide => {
            columns.push("x".into());
            let per_t: Vec<Vec<C64>> = times.iter().map(|&t| sample(t)).collect::<Result<_, _>>()?;
            for i in 0..times.len() {
                columns.push(format!("density_{i}"));
                if block.include_phase {
                    columns.extend([format!("re_{i}"), format!("im_{i}")]);
                }
            }
            for j in 0..grid.size() {
                let mut row = vec![axes[0].x(j)];
                for psi in &per_t {
                    row.push(psi[j].norm_sqr());
                    if block.include_phase {
                        row.extend([psi[j].re, psi[j].im]);
                    }
                }
                rows.push(row);
            }
        }
    }

    let text = match format {
        Format::Json => to_json(&TableReport {
            command: "eval",
            scales: cfg.scales,
            state: &state_block,
            grid: grid_echo(&axes),
            times,
            columns,
            rows,
        }),
        Format::Csv => {
            let mut doc = CsvDoc::new(&columns);
            doc.comment("qat eval: wave-function samples");
            doc.comment(scales_line(&cfg.scales));
            doc.comment(state_line(&state_block));
            let g = grid_echo(&axes);
            doc.comment(format!("grid: lo = {:?}, hi = {:?}, points = {:?}", g.lo, g.hi, g.points));
            match block.layout {
                Layout::Long => doc.comment(format!(
                    "columns: t = time; {} = position; density = |psi|^2{}",
                    coords.join(", "),
                    if block.include_phase { "; re, im = real and imaginary parts of psi" } else { "" }
                )),
                Layout::Wide => {
                    let list: Vec<String> = times.iter().enumerate().map(|(i, t)| format!("{i} -> t = {t}")).collect();
                    doc.comment(format!(
                        "columns: x = position; density_i = |psi|^2 at time i{}; times: {}",
                        if block.include_phase { "; re_i, im_i = parts of psi" } else { "" },
                        list.join(", ")
                    ))
                }
            };
            for r in &rows {
                doc.push_floats(r);
            }
            doc.render()
        }
    };
    Ok(Rendered {
        text,
        failures: Vec::new(),
    })
}

// ---------------------------------------------------------------- audit

#[derive(Serialize)]
struct AuditReport {
    command: &'static str,
    scales: ScalesBlock,
    grid: GridBlock,
    max_n: usize,
    checks: Vec<Check>,
    pass: bool,
}

fn scaled(mut g: GridState, c: f64) -> GridState {
    g.scale(C64::new(c, 0.0));
    g
}

fn ladder_checks(probes: &[GridState], s: PhysicalScales, t: f64, tol: f64) -> Vec<Check> {
    let a = LinearOperator1D::new(OpKind::A, s, t);
    let ad = LinearOperator1D::new(OpKind::Adag, s, t);
    let nn = LinearOperator1D::new(OpKind::N, s, t);
    let alg = number_from_algebra(s, t);
    let top = probes.len() - 1;
    let worst = |f: &dyn Fn(usize) -> qat_core::Result<f64>, range: std::ops::Range<usize>| {
        range.map(f).try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
    };
    vec![
        Check::from_result(
            "raise: A† psi_n = sqrt(n+1) psi_(n+1)",
            t,
            worst(&|n| max_relative_error(&ad.apply(&probes[n])?, &scaled(probes[n + 1].clone(), ((n + 1) as f64).sqrt())), 0..top),
            tol,
        ),
        Check::from_result(
            "lower: A psi_n = sqrt(n) psi_(n-1)",
            t,
            worst(
                &|n| {
                    let down = a.apply(&probes[n])?;
                    if n == 0 {
                        Ok(down.peak_amplitude() / probes[0].peak_amplitude())
                    } else {
                        max_relative_error(&down, &scaled(probes[n - 1].clone(), (n as f64).sqrt()))
                    }
                },
                0..top + 1,
            ),
            tol,
        ),
        Check::from_result(
            "number: N psi_n = (n + 1/2) psi_n",
            t,
            worst(&|n| max_relative_error(&nn.apply(&probes[n])?, &scaled(probes[n].clone(), n as f64 + 0.5)), 0..top + 1),
            tol,
        ),
        Check::from_result(
            "number from algebra agrees with direct N",
            t,
            worst(&|n| max_relative_error(&alg.apply(&probes[n])?, &nn.apply(&probes[n])?), 0..top + 1),
            tol,
        ),
    ]
}

fn audit(loaded: &Loaded, format: Format) -> Out {
    let cfg = &loaded.config;
    let s = cfg.physical_scales();
    let block = cfg.audit.clone().unwrap_or_default();
    let axis = match configured_axes(loaded, 1)? {
        Some(a) => a[0],
        None => {
            let t_max = block.times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            let half = 36.2 * s.length() * s.delta(t_max).modulus() * ((block.max_n as f64 + 0.5) / 8.5).sqrt().max(1.0);
            let len = (2.0 * half / (0.1414 * s.length() / ((block.max_n as f64 + 0.5) / 8.5).sqrt().max(1.0))).ceil() as usize;
            Axis::symmetric(half, len.next_power_of_two()).expect("finite window")
        }
    };
    if axis.len < 2 {
        return Err(invalid(&["grid", "points"], "the audit needs a non-empty grid").into());
    }
    let mut checks = Vec::new();
    for &t in &block.times {
        let probes: Vec<GridState> = (0..=block.max_n).map(|n| StateSpec1D::basis(n, s).sample(axis, t)).collect();
        checks.extend(ladder_checks(&probes, s, t, block.ladder_tolerance));
        match commutator_audit(s, t, &probes) {
            Ok(rows) => {
                for row in rows {
                    checks.push(Check::measured(
                        format!("commutator [{:?}, {:?}] = {}", row.lhs, row.rhs, row.expected),
                        t,
                        row.max_deviation,
                        block.commutator_tolerance,
                    ));
                }
            }
            Err(e) => checks.push(Check::from_result("commutator table", t, Err(e), block.commutator_tolerance)),
        }
    }
    let fails = failures(&checks);
    let report = AuditReport {
        command: "audit",
        scales: cfg.scales,
        grid: grid_echo(&[axis]),
        max_n: block.max_n,
        pass: fails.is_empty(),
        checks,
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut doc = checks_csv("qat audit: ladder, number and commutator invariants", &report.checks);
            doc.comment(scales_line(&cfg.scales));
            doc.comment(format!("verdict: {}", if report.pass { "PASS" } else { "FAIL" }));
            doc.render()
        }
    };
    Ok(Rendered { text, failures: fails })
}

// ---------------------------------------------------------------- sling

#[derive(Serialize)]
struct SnapshotRecord {
    segment: Option<usize>,
    #[serde(flatten)]
    report: MomentReport,
}

#[derive(Serialize)]
struct SlingSummary {
    command: &'static str,
    mode: &'static str,
    scales: ScalesBlock,
    grid: GridBlock,
    omega1: Option<f64>,
    protocol: Option<SlingReport>,
    checks: Vec<Check>,
    pass: bool,
    snapshots: Vec<SnapshotRecord>,
}

fn is_ground(b: &StateBlock) -> bool {
    b.family == Geometry::Hermite
        && b.indices == [0]
        && b.a.is_none_or(|a| a == [0.0, 0.0])
        && b.r.is_none_or(|r| r == 0.0)
}

fn norm_check(snaps: &[Snapshot], tol: f64) -> Check {
    let worst = snaps.iter().map(|s| (s.report.norm - 1.0).abs()).fold(0.0, f64::max);
    let t = snaps.last().map(|s| s.report.t).unwrap_or(0.0);
    Check::measured("norm conservation", t, worst, tol)
}

fn run_sling(loaded: &Loaded, format: Format) -> Out {
    let cfg = &loaded.config;
    let s = cfg.physical_scales();
    let block = cfg.sling.clone().unwrap_or_default();
    let mut checks = Vec::new();
    let (mode, omega1, protocol, axis, snaps) = match &cfg.schedule {
        None => {
            if let Some(st) = &cfg.state {
                if !is_ground(st) {
                    return Err(invalid(
                        &["state"],
                        "the built-in sling protocol starts from the oscillator ground state; use [[schedule]] segments for other inputs",
                    )
                    .into());
                }
            }
            let t1 = block.t1.unwrap_or(s.tau());
            let w1 = capture_frequency(&s, t1);
            let capture = block.capture_omega.unwrap_or(w1);
            let axis = match configured_axes(loaded, 1)? {
                Some(a) => a[0],
                None => {
                    let spread = s.delta(t1).modulus();
                    let half = 17.0 * s.length() * spread * (s.omega() / capture).sqrt().max(1.0);
                    let k_need = 16.0 * (1.0 / (SQRT_2 * s.length())).max(s.mass() * capture * SQRT_2 * s.length() * spread / s.hbar());
                    let len = ((2.0 * half * k_need / PI).ceil() as usize).max(512);
                    Axis::symmetric(half, len.next_power_of_two()).expect("finite window")
                }
            };
            let params = SlingParams {
                t1,
                capture_omega: capture,
                matched: block.matched,
                samples: block.samples,
            };
            let (report, snaps) = sling(&s, axis, params, None)?;
            let t_end = t1 + 2.0 * PI / capture;
            if (capture - w1).abs() <= 1e-12 * w1 {
                checks.push(Check::measured(
                    "stationarity: max L1 density drift over one capture period",
                    t_end,
                    report.max_density_drift,
                    block.stationarity_tolerance,
                ));
            }
            if (capture - s.omega()).abs() <= 1e-12 * s.omega() {
                checks.push(Check::measured(
                    "squeezing: |fitted r - expected r|",
                    t1,
                    (report.fitted_r - report.expected_r).abs(),
                    block.squeeze_tolerance,
                ));
            }
            ("protocol", Some(w1), Some(report), axis, snaps)
        }
        Some(segs) => {
            let st = cfg.state_or_default();
            let BuiltState::Line(spec) = st.build(s) else {
                return Err(invalid(&["state", "family"], "schedules propagate 1D (hermite) states").into());
            };
            let t0 = segs.first().map(|g| g.start).unwrap_or(0.0);
            let t_end = segs.last().map(|g| g.end).unwrap_or(t0);
            let axis = match configured_axes(loaded, 1)? {
                Some(a) => a[0],
                None => covering(&spec, &[t0, t_end]),
            };
            let segments = segs
                .iter()
                .map(|g| Segment {
                    t_start: g.start,
                    t_end: g.end,
                    potential: match g.potential {
                        PotentialKind::Free => Potential::Free,
                        PotentialKind::Harmonic => Potential::Harmonic {
                            omega: g.omega.expect("validated"),
                            center: g.center.unwrap_or(0.0),
                        },
                    },
                    imprint: g.imprint,
                })
                .collect();
            let schedule = TrapSchedule::new(segments)?;
            let initial = spec.sample(axis, t0);
            let snaps = run_schedule(&Propagator::new(axis, s), &initial, &schedule, block.samples, None)?;
            ("schedule", None, None, axis, snaps)
        }
    };
    checks.push(norm_check(&snaps, block.norm_tolerance));
    let fails = failures(&checks);
    let summary = SlingSummary {
        command: "sling",
        mode,
        scales: cfg.scales,
        grid: grid_echo(&[axis]),
        omega1,
        protocol,
        pass: fails.is_empty(),
        checks,
        snapshots: snaps
            .into_iter()
            .map(|s| SnapshotRecord {
                segment: s.segment,
                report: s.report,
            })
            .collect(),
    };
    let text = match format {
        Format::Json => to_json(&summary),
        Format::Csv => {
            let mut doc = CsvDoc::new(&[
                "segment",
                "t",
                "norm",
                "mean_x",
                "mean_p",
                "delta_x",
                "delta_p",
                "uncertainty_product",
                "number",
                "energy",
            ]);
            doc.comment(format!("qat sling ({mode}): per-snapshot observables"));
            doc.comment(scales_line(&cfg.scales));
            doc.comment(
                "columns: segment = schedule segment (-1 = input); t = time; norm; mean_x, mean_p = <x>, <p>; \
                 delta_x, delta_p = standard deviations; uncertainty_product = delta_x*delta_p; \
                 number = dimensionless <N>; energy = <p^2>/2m",
            );
            if let Some(p) = &summary.protocol {
                doc.comment(format!(
                    "protocol: t1 = {}, capture_omega = {}, omega1 = {}, matched = {}, kick = {}",
                    fmt_f64(p.t1),
                    fmt_f64(p.capture_omega),
                    fmt_f64(summary.omega1.unwrap_or(f64::NAN)),
                    p.matched,
                    fmt_f64(p.kick_strength)
                ));
                doc.comment(format!(
                    "summary: max_density_drift = {}, fitted_r = {}, breathing_r = {}, expected_r = {}, squeezed_fidelity = {}",
                    fmt_f64(p.max_density_drift),
                    fmt_f64(p.fitted_r),
                    fmt_f64(p.breathing_r),
                    fmt_f64(p.expected_r),
                    fmt_f64(p.squeezed_fidelity)
                ));
            }
            for c in &summary.checks {
                doc.comment(format!(
                    "check: {} = {} (tolerance {}) {}",
                    c.name,
                    c.measured.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(c.tolerance),
                    if c.pass { "PASS" } else { "FAIL" }
                ));
            }
            doc.comment(format!("verdict: {}", if summary.pass { "PASS" } else { "FAIL" }));
            for r in &summary.snapshots {
                let m = &r.report;
                let mut row = vec![r.segment.map(|i| i.to_string()).unwrap_or_else(|| "-1".into())];
                row.extend(
                    [m.t, m.norm, m.mean_x, m.mean_p, m.delta_x, m.delta_p, m.uncertainty_product, m.number, m.energy]
                        .map(fmt_f64),
                );
                doc.push(row);
            }
            doc.render()
        }
    };
    Ok(Rendered { text, failures: fails })
}

// ---------------------------------------------------------------- uncertainty

#[derive(Serialize)]
struct UncertaintyRow {
    t: f64,
    axis: usize,
    delta_x: f64,
    delta_p: f64,
    product: f64,
    expected: f64,
    relative_error: f64,
    pass: bool,
}

#[derive(Serialize)]
struct UncertaintyReport<'a> {
    command: &'static str,
    scales: ScalesBlock,
    state: &'a StateBlock,
    grid: GridBlock,
    tolerance: f64,
    rows: Vec<UncertaintyRow>,
    pass: bool,
}

/// `Δx·Δp = (n + ½) ħ |δ_r(t)|` for every member of the Hermite family.
pub fn expected_product(spec: &StateSpec1D, t: f64) -> f64 {
    (spec.n() as f64 + 0.5) * spec.scales().hbar() * spec.scales().delta_r(t, spec.r()).modulus()
}

fn uncertainty(loaded: &Loaded, format: Format) -> Out {
    let cfg = &loaded.config;
    let s = cfg.physical_scales();
    let block = cfg.uncertainty.clone().unwrap_or_default();
    let st = cfg.state_or_default();
    let built = st.build(s);
    let mut rows = Vec::new();
    let mut push = |t: f64, axis: usize, dx: f64, dp: f64, expected: f64| {
        let product = dx * dp;
        let relative_error = (product / expected - 1.0).abs();
        rows.push(UncertaintyRow {
            t,
            axis,
            delta_x: dx,
            delta_p: dp,
            product,
            expected,
            relative_error,
            pass: relative_error <= block.tolerance,
        });
    };
    let axes = match &built {
        BuiltState::Line(spec) => {
            let axis = match configured_axes(loaded, 1)? {
                Some(a) => a[0],
                None => covering(spec, &block.times),
            };
            for &t in &block.times {
                let m = moments(&spec.sample(axis, t))?;
                push(t, 0, m.delta_x, m.delta_p, expected_product(spec, t));
            }
            vec![axis]
        }
        BuiltState::Nd(spec @ StateSpecND::Cartesian(parts)) => {
            let grid = match configured_axes(loaded, parts.len())? {
                Some(a) => CartesianGrid::new(a),
                None => nd_grid(spec, &block.times),
            };
            for &t in &block.times {
                for (d, (dx, dp)) in uncertainties(spec, t, &grid)?.into_iter().enumerate() {
                    push(t, d, dx, dp, expected_product(&parts[d], t));
                }
            }
            grid.axes
        }
        BuiltState::Nd(_) => {
            return Err(invalid(
                &["state", "family"],
                "the uncertainty law is tabulated for hermite and cartesian states",
            )
            .into())
        }
    };
    let fails: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "uncertainty product at t = {} (axis {}): relative error {} exceeds {}",
                r.t,
                r.axis,
                fmt_f64(r.relative_error),
                fmt_f64(block.tolerance)
            )
        })
        .collect();
    let report = UncertaintyReport {
        command: "uncertainty",
        scales: cfg.scales,
        state: &st,
        grid: grid_echo(&axes),
        tolerance: block.tolerance,
        pass: fails.is_empty(),
        rows,
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut doc = CsvDoc::new(&["t", "axis", "delta_x", "delta_p", "product", "expected", "relative_error", "pass"]);
            doc.comment("qat uncertainty: measured Heisenberg products against (n + 1/2) hbar |delta_r(t)|");
            doc.comment(scales_line(&cfg.scales));
            doc.comment(state_line(&st));
            doc.comment("columns: t = time; axis = Cartesian axis; delta_x, delta_p = standard deviations; product = delta_x*delta_p;");
            doc.comment(format!(
                "expected = closed-form product; relative_error = |product/expected - 1|; pass = relative_error <= {}",
                fmt_f64(block.tolerance)
            ));
            for r in &report.rows {
                let mut row = vec![fmt_f64(r.t), r.axis.to_string()];
                row.extend([r.delta_x, r.delta_p, r.product, r.expected, r.relative_error].map(fmt_f64));
                row.push(r.pass.to_string());
                doc.push(row);
            }
            doc.render()
        }
    };
    Ok(Rendered { text, failures: fails })
}

// ---------------------------------------------------------------- qat-roundtrip

#[derive(Serialize)]
struct RoundtripRow {
    t_prime: f64,
    t: f64,
    norm: f64,
    roundtrip: f64,
    unitarity: f64,
    mapping: f64,
    pass: bool,
}

#[derive(Serialize)]
struct RoundtripReport<'a> {
    command: &'static str,
    scales: ScalesBlock,
    state: &'a StateBlock,
    grid: GridBlock,
    tolerance: f64,
    mapping_tolerance: f64,
    rows: Vec<RoundtripRow>,
    pass: bool,
}

/// Oscillator-frame window: the packet's orbit plus its widest breathing
/// envelope, resolved to its largest momentum spread.
fn oscillator_axis(spec: &StateSpec1D) -> Axis {
    let s = spec.scales();
    let amp = spec.x0().hypot(spec.p0() / (s.mass() * s.omega()));
    let reach = (2.0 * spec.n() as f64 + 1.0).sqrt() + 8.0;
    let squeeze = spec.r().abs().exp();
    let half = amp + SQRT_2 * s.length() * squeeze * reach;
    let k_need = reach * squeeze / (SQRT_2 * s.length()) + spec.p0().hypot(s.mass() * s.omega() * spec.x0()) / s.hbar();
    let len = ((2.0 * half * k_need / PI).ceil() as usize).max(512);
    Axis::symmetric(half, len.next_power_of_two()).expect("finite window")
}

fn roundtrip(loaded: &Loaded, format: Format) -> Out {
    let cfg = &loaded.config;
    let s = cfg.physical_scales();
    let block = cfg.qat_roundtrip.clone().unwrap_or_default();
    let st = cfg.state_or_default();
    let BuiltState::Line(spec) = st.build(s) else {
        return Err(invalid(&["state", "family"], "the QAT round trip acts on 1D (hermite) states").into());
    };
    let axis = match configured_axes(loaded, 1)? {
        Some(a) => a[0],
        None => oscillator_axis(&spec),
    };
    if axis.len < 2 {
        return Err(invalid(&["grid", "points"], "the round trip needs a non-empty grid").into());
    }
    let ho = HarmonicPair::from_scales(&s);
    let mut rows = Vec::new();
    for &tp in &block.prime_times {
        let g = GridState::from_fn(axis, tp, s, |x| {
            eval_oscillator_squeezed_number(&spec, x, tp).expect("validated: inside the focal cell")
        });
        let free = qat_forward(&g, &ho)?;
        let closed = spec.sample(free.axis, free.t);
        let peak = closed.peak_amplitude();
        let mapping = free
            .samples
            .iter()
            .zip(&closed.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / peak;
        let back = qat_inverse(&free, &ho, tp)?;
        let roundtrip = l2_distance(&back, &g)?;
        let unitarity = (free.norm_sqr() - g.norm_sqr()).abs();
        rows.push(RoundtripRow {
            t_prime: tp,
            t: free.t,
            norm: g.norm_sqr(),
            roundtrip,
            unitarity,
            mapping,
            pass: roundtrip <= block.tolerance && unitarity <= block.tolerance && mapping <= block.mapping_tolerance,
        });
    }
    let fails: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "QAT at t' = {}: roundtrip {}, unitarity {}, mapping {} (tolerances {}, {})",
                r.t_prime,
                fmt_f64(r.roundtrip),
                fmt_f64(r.unitarity),
                fmt_f64(r.mapping),
                fmt_f64(block.tolerance),
                fmt_f64(block.mapping_tolerance)
            )
        })
        .collect();
    let report = RoundtripReport {
        command: "qat-roundtrip",
        scales: cfg.scales,
        state: &st,
        grid: grid_echo(&[axis]),
        tolerance: block.tolerance,
        mapping_tolerance: block.mapping_tolerance,
        pass: fails.is_empty(),
        rows,
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut doc = CsvDoc::new(&["t_prime", "t", "norm", "roundtrip", "unitarity", "mapping", "pass"]);
            doc.comment("qat qat-roundtrip: oscillator frame -> free frame -> oscillator frame");
            doc.comment(scales_line(&cfg.scales));
            doc.comment(state_line(&st));
            doc.comment(
                "columns: t_prime = oscillator time; t = mapped free time tan(omega t')/omega; norm = oscillator-frame norm; \
                 roundtrip = L2 distance after forward+inverse; unitarity = |norm change|; \
                 mapping = max |forward image - closed form| / peak",
            );
            for r in &report.rows {
                let mut row: Vec<String> = [r.t_prime, r.t, r.norm, r.roundtrip, r.unitarity, r.mapping].map(fmt_f64).to_vec();
                row.push(r.pass.to_string());
                doc.push(row);
            }
            doc.render()
        }
    };
    Ok(Rendered { text, failures: fails })
}
