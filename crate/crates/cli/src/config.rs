//! Declarative run configuration (TOML).
//!
//! Every block is optional; omitted blocks take the defaults below, so an
//! empty document is a valid configuration. Validation errors carry the
//! line of the offending key, found by re-walking the parsed document.

use std::fmt;
use std::path::Path;

use qat_core::grid::{Axis, CartesianGrid};
use qat_core::states_nd::Chirality;
use qat_core::{PhysicalScales, StateSpec1D, StateSpecND, C64};
use serde::{Deserialize, Serialize};
use toml::de::{DeTable, DeValue};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub scales: ScalesBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sling: Option<SlingBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertainty: Option<UncertaintyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qat_roundtrip: Option<RoundtripBlock>,
    /// Segments for `sling`; when present they replace the built-in
    /// release–flight–capture protocol. An empty list echoes the input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<SegmentBlock>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalesBlock {
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub omega: f64,
}

impl Default for ScalesBlock {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            omega: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// 1D Hermite–Gauss family: basis, displaced, squeezed, or both.
    #[default]
    Hermite,
    Cartesian,
    Polar,
    Spherical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateBlock {
    #[serde(default)]
    pub family: Geometry,
    /// hermite: `[n]`; cartesian: `[n₁, …, n_d]`; polar: `[n, l]`;
    /// spherical: `[n, l, m]`.
    #[serde(default = "zero_index")]
    pub indices: Vec<i64>,
    /// Displacement `[Re a, Im a]` (hermite only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 2]>,
    /// Squeezing parameter (hermite only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Polar only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chirality: Option<Chirality>,
}

impl Default for StateBlock {
    fn default() -> Self {
        Self {
            family: Geometry::Hermite,
            indices: zero_index(),
            a: None,
            r: None,
            chirality: None,
        }
    }
}

/// Uniform grid; one entry per dimension. `points = [0]` is allowed and
/// yields header-only output from `eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// One record per (t, x⃗).
    #[default]
    Long,
    /// One row per x with a density column per time (1D only).
    Wide,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalBlock {
    #[serde(default = "zero_times")]
    pub times: Vec<f64>,
    #[serde(default)]
    pub include_phase: bool,
    #[serde(default)]
    pub layout: Layout,
}

impl Default for EvalBlock {
    fn default() -> Self {
        Self {
            times: zero_times(),
            include_phase: false,
            layout: Layout::Long,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditBlock {
    #[serde(default = "audit_times")]
    pub times: Vec<f64>,
    #[serde(default = "audit_max_n")]
    pub max_n: usize,
    #[serde(default = "ladder_tol")]
    pub ladder_tolerance: f64,
    #[serde(default = "commutator_tol")]
    pub commutator_tolerance: f64,
}

impl Default for AuditBlock {
    fn default() -> Self {
        Self {
            times: audit_times(),
            max_n: audit_max_n(),
            ladder_tolerance: ladder_tol(),
            commutator_tolerance: commutator_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlingBlock {
    /// Flight time; defaults to τ. `t1` and `capture_omega` drive the
    /// built-in protocol only; with a schedule, `samples` and
    /// `norm_tolerance` still apply.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    /// Capture frequency; defaults to ω/|δ(t1)|².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_omega: Option<f64>,
    #[serde(default = "yes")]
    pub matched: bool,
    #[serde(default = "sling_samples")]
    pub samples: usize,
    #[serde(default = "stationarity_tol")]
    pub stationarity_tolerance: f64,
    #[serde(default = "squeeze_tol")]
    pub squeeze_tolerance: f64,
    #[serde(default = "norm_tol")]
    pub norm_tolerance: f64,
}

impl Default for SlingBlock {
    fn default() -> Self {
        Self {
            t1: None,
            capture_omega: None,
            matched: true,
            samples: sling_samples(),
            stationarity_tolerance: stationarity_tol(),
            squeeze_tolerance: squeeze_tol(),
            norm_tolerance: norm_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertaintyBlock {
    #[serde(default = "uncertainty_times")]
    pub times: Vec<f64>,
    #[serde(default = "uncertainty_tol")]
    pub tolerance: f64,
}

impl Default for UncertaintyBlock {
    fn default() -> Self {
        Self {
            times: uncertainty_times(),
            tolerance: uncertainty_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripBlock {
    /// Oscillator-frame times `t′`, each with `|ωt′| < π/2`.
    #[serde(default = "prime_times")]
    pub prime_times: Vec<f64>,
    #[serde(default = "roundtrip_tol")]
    pub tolerance: f64,
    #[serde(default = "mapping_tol")]
    pub mapping_tolerance: f64,
}

impl Default for RoundtripBlock {
    fn default() -> Self {
        Self {
            prime_times: prime_times(),
            tolerance: roundtrip_tol(),
            mapping_tolerance: mapping_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Free,
    Harmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentBlock {
    pub start: f64,
    pub end: f64,
    pub potential: PotentialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    /// Quadratic phase kick `exp(−i s x²/2ħ)` applied at `start`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imprint: Option<f64>,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn zero_index() -> Vec<i64> {
    vec![0]
}
fn zero_times() -> Vec<f64> {
    vec![0.0]
}
fn audit_times() -> Vec<f64> {
    vec![0.0, 1.0]
}
fn audit_max_n() -> usize {
    8
}
fn ladder_tol() -> f64 {
    1e-8
}
fn commutator_tol() -> f64 {
    1e-7
}
fn sling_samples() -> usize {
    32
}
fn stationarity_tol() -> f64 {
    1e-4
}
fn squeeze_tol() -> f64 {
    1e-3
}
fn norm_tol() -> f64 {
    1e-8
}
fn uncertainty_times() -> Vec<f64> {
    vec![0.0, 1.0, 2.0, 3.0]
}
fn uncertainty_tol() -> f64 {
    1e-7
}
fn prime_times() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}
fn roundtrip_tol() -> f64 {
    1e-9
}
fn mapping_tol() -> f64 {
    1e-8
}

/// A key path into the document, e.g. `["schedule", "1", "end"]`.
pub type KeyPath = Vec<String>;

/// A semantic problem with a configuration, located by key path.
#[derive(Debug, Clone, PartialEq)]
pub struct Invalid {
    pub path: KeyPath,
    pub message: String,
}

pub fn invalid(path: &[&str], message: impl Into<String>) -> Invalid {
    Invalid {
        path: path.iter().map(|s| s.to_string()).collect(),
        message: message.into(),
    }
}

/// A validation failure rendered as `file:line: message`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{line}: {}", self.file, self.message),
            None => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A configuration together with the text it came from, so that later
/// (command-specific) checks can still report line numbers.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub file: String,
    source: Option<String>,
}

impl Loaded {
    pub fn defaults() -> Self {
        Self {
            config: RunConfig::default(),
            file: "<defaults>".into(),
            source: None,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            file: file.clone(),
            line: None,
            message: format!("cannot read config: {e}"),
        })?;
        Self::from_str(&text, &file)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str, file: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| ConfigError {
            file: file.to_string(),
            line: e.span().map(|s| line_of(text, s.start)),
            message: e.message().trim().to_string(),
        })?;
        let loaded = Self {
            config,
            file: file.to_string(),
            source: Some(text.to_string()),
        };
        loaded.config.validate().map_err(|e| loaded.locate(e))?;
        Ok(loaded)
    }

    /// Attaches a line number to `err` by finding the deepest existing
    /// prefix of its key path in the source document.
    pub fn locate(&self, err: Invalid) -> ConfigError {
        let line = self.source.as_deref().and_then(|src| {
            let doc = DeTable::parse(src).ok()?;
            let span = deepest_span(doc.get_ref(), &err.path)?;
            Some(line_of(src, span.start))
        });
        let key = err.path.join(".");
        ConfigError {
            file: self.file.clone(),
            line,
            message: if key.is_empty() {
                err.message
            } else {
                format!("{key}: {}", err.message)
            },
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn deepest_span(table: &DeTable<'_>, path: &[String]) -> Option<std::ops::Range<usize>> {
    let (head, rest) = path.split_first()?;
    let (key, value) = table.iter().find(|(k, _)| k.get_ref().as_ref() == head.as_str())?;
    Some(descend(value, rest).unwrap_or_else(|| span_of_entry(key, value)))
}

fn descend(value: &Spanned<DeValue<'_>>, path: &[String]) -> Option<std::ops::Range<usize>> {
    let (head, rest) = path.split_first()?;
    match value.get_ref() {
        DeValue::Table(t) => deepest_span(t, path),
        DeValue::Array(items) => {
            let item = items.get(head.parse::<usize>().ok()?)?;
            Some(descend(item, rest).unwrap_or_else(|| item.span()))
        }
        _ => {
            let _ = rest;
            None
        }
    }
}

fn span_of_entry(key: &Spanned<std::borrow::Cow<'_, str>>, value: &Spanned<DeValue<'_>>) -> std::ops::Range<usize> {
    // a table header's value span can start at its first key; prefer the key
    match value.get_ref() {
        DeValue::Table(_) => key.span(),
        _ => value.span(),
    }
}

fn finite(path: &[&str], v: f64) -> Result<(), Invalid> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(path, format!("must be finite, got {v}")))
    }
}

fn positive(path: &[&str], v: f64) -> Result<(), Invalid> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive and finite, got {v}")))
    }
}

fn finite_list(name: &[&str], values: &[f64]) -> Result<(), Invalid> {
    for (i, v) in values.iter().enumerate() {
        let idx = i.to_string();
        let mut path = name.to_vec();
        path.push(&idx);
        finite(&path, *v)?;
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Loaded::from_str(text, "<input>").map(|l| l.config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Checks every block against the library's preconditions.
    pub fn validate(&self) -> Result<(), Invalid> {
        let s = &self.scales;
        positive(&["scales", "mass"], s.mass)?;
        positive(&["scales", "hbar"], s.hbar)?;
        positive(&["scales", "omega"], s.omega)?;
        if let Some(state) = &self.state {
            state.validate()?;
        }
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        if let Some(e) = &self.eval {
            finite_list(&["eval", "times"], &e.times)?;
        }
        if let Some(a) = &self.audit {
            finite_list(&["audit", "times"], &a.times)?;
            if a.max_n == 0 {
                return Err(invalid(&["audit", "max_n"], "must be at least 1"));
            }
            positive(&["audit", "ladder_tolerance"], a.ladder_tolerance)?;
            positive(&["audit", "commutator_tolerance"], a.commutator_tolerance)?;
        }
        if let Some(b) = &self.sling {
            if let Some(t1) = b.t1 {
                positive(&["sling", "t1"], t1)?;
            }
            if let Some(w) = b.capture_omega {
                positive(&["sling", "capture_omega"], w)?;
            }
            if b.samples < 4 {
                return Err(invalid(&["sling", "samples"], "need at least 4 samples to fit the breathing"));
            }
            positive(&["sling", "stationarity_tolerance"], b.stationarity_tolerance)?;
            positive(&["sling", "squeeze_tolerance"], b.squeeze_tolerance)?;
            positive(&["sling", "norm_tolerance"], b.norm_tolerance)?;
            if self.schedule.is_some() && (b.t1.is_some() || b.capture_omega.is_some()) {
                let key = if b.t1.is_some() { "t1" } else { "capture_omega" };
                return Err(invalid(&["sling", key], "protocol parameters conflict with an explicit schedule"));
            }
        }
        if let Some(u) = &self.uncertainty {
            finite_list(&["uncertainty", "times"], &u.times)?;
            positive(&["uncertainty", "tolerance"], u.tolerance)?;
        }
        if let Some(q) = &self.qat_roundtrip {
            finite_list(&["qat_roundtrip", "prime_times"], &q.prime_times)?;
            for (i, tp) in q.prime_times.iter().enumerate() {
                if (s.omega * tp).abs() >= 0.5 * std::f64::consts::PI {
                    let idx = i.to_string();
                    return Err(invalid(
                        &["qat_roundtrip", "prime_times", &idx],
                        format!("|ω t′| = {} reaches the focal point π/2", (s.omega * tp).abs()),
                    ));
                }
            }
            positive(&["qat_roundtrip", "tolerance"], q.tolerance)?;
            positive(&["qat_roundtrip", "mapping_tolerance"], q.mapping_tolerance)?;
        }
        if let Some(segs) = &self.schedule {
            for (i, seg) in segs.iter().enumerate() {
                let idx = i.to_string();
                finite(&["schedule", &idx, "start"], seg.start)?;
                finite(&["schedule", &idx, "end"], seg.end)?;
                if seg.end <= seg.start {
                    return Err(invalid(&["schedule", &idx, "end"], format!("must exceed start = {}", seg.start)));
                }
                if i > 0 && (seg.start - segs[i - 1].end).abs() > 1e-12 * seg.start.abs().max(1.0) {
                    return Err(invalid(
                        &["schedule", &idx, "start"],
                        format!("must equal the previous segment's end = {}", segs[i - 1].end),
                    ));
                }
                match (seg.potential, seg.omega) {
                    (PotentialKind::Harmonic, Some(w)) => positive(&["schedule", &idx, "omega"], w)?,
                    (PotentialKind::Harmonic, None) => {
                        return Err(invalid(&["schedule", &idx, "potential"], "harmonic segments need omega"))
                    }
                    (PotentialKind::Free, Some(_)) => {
                        return Err(invalid(&["schedule", &idx, "omega"], "free segments take no omega"))
                    }
                    (PotentialKind::Free, None) => {}
                }
                if let Some(c) = seg.center {
                    finite(&["schedule", &idx, "center"], c)?;
                }
                if let Some(k) = seg.imprint {
                    finite(&["schedule", &idx, "imprint"], k)?;
                }
            }
        }
        Ok(())
    }

    pub fn physical_scales(&self) -> PhysicalScales {
        PhysicalScales::new(self.scales.mass, self.scales.hbar, self.scales.omega).expect("validated scales")
    }

    pub fn state_or_default(&self) -> StateBlock {
        self.state.clone().unwrap_or_default()
    }
}

/// A state built from a validated [`StateBlock`].
#[derive(Debug, Clone)]
pub enum BuiltState {
    Line(StateSpec1D),
    Nd(StateSpecND),
}

impl BuiltState {
    pub fn dim(&self) -> usize {
        match self {
            Self::Line(_) => 1,
            Self::Nd(s) => s.dim(),
        }
    }
}

impl StateBlock {
    fn validate(&self) -> Result<(), Invalid> {
        let idx = &self.indices;
        let want = match self.family {
            Geometry::Hermite => Some(1),
            Geometry::Cartesian => None,
            Geometry::Polar => Some(2),
            Geometry::Spherical => Some(3),
        };
        if let Some(k) = want {
            if idx.len() != k {
                return Err(invalid(
                    &["state", "indices"],
                    format!("{:?} states take {k} indices, got {}", self.family, idx.len()).to_lowercase(),
                ));
            }
        } else if idx.is_empty() || idx.len() > 3 {
            return Err(invalid(&["state", "indices"], "cartesian states take 1 to 3 indices"));
        }
        let nonneg = match self.family {
            Geometry::Spherical => &idx[..2],
            _ => &idx[..],
        };
        if let Some(bad) = nonneg.iter().find(|&&v| v < 0) {
            return Err(invalid(&["state", "indices"], format!("index {bad} must be non-negative")));
        }
        if self.family == Geometry::Spherical {
            if idx[0] < 1 {
                return Err(invalid(&["state", "indices"], "spherical radial index starts at 1"));
            }
            if idx[2].abs() > idx[1] {
                return Err(invalid(&["state", "indices"], format!("|m| = {} exceeds l = {}", idx[2].abs(), idx[1])));
            }
        }
        if self.family != Geometry::Hermite {
            if self.a.is_some() {
                return Err(invalid(&["state", "a"], "displacement applies to hermite states only"));
            }
            if self.r.is_some() {
                return Err(invalid(&["state", "r"], "squeezing applies to hermite states only"));
            }
        }
        if let Some([re, im]) = self.a {
            finite(&["state", "a"], re)?;
            finite(&["state", "a"], im)?;
        }
        if let Some(r) = self.r {
            finite(&["state", "r"], r)?;
            if r.abs() > 5.0 {
                return Err(invalid(&["state", "r"], format!("|r| = {} exceeds 5 (grids cannot resolve e^{{2|r|}})", r.abs())));
            }
        }
        match (self.family, self.chirality) {
            (Geometry::Polar, None) => Err(invalid(&["state", "family"], "polar states need a chirality")),
            (Geometry::Polar, Some(_)) | (_, None) => Ok(()),
            (_, Some(_)) => Err(invalid(&["state", "chirality"], "chirality applies to polar states only")),
        }
    }

    pub fn build(&self, scales: PhysicalScales) -> BuiltState {
        let i = &self.indices;
        match self.family {
            Geometry::Hermite => {
                let [re, im] = self.a.unwrap_or([0.0, 0.0]);
                BuiltState::Line(
                    StateSpec1D::new(i[0] as usize, C64::new(re, im), self.r.unwrap_or(0.0), scales).expect("validated"),
                )
            }
            Geometry::Cartesian => BuiltState::Nd(
                StateSpecND::cartesian(i.iter().map(|&n| StateSpec1D::basis(n as usize, scales)).collect())
                    .expect("validated"),
            ),
            Geometry::Polar => BuiltState::Nd(StateSpecND::polar(
                i[0] as usize,
                i[1] as usize,
                self.chirality.expect("validated"),
                scales,
            )),
            Geometry::Spherical => {
                BuiltState::Nd(StateSpecND::spherical(i[0] as usize, i[1] as usize, i[2], scales).expect("validated"))
            }
        }
    }
}

impl GridBlock {
    fn validate(&self) -> Result<(), Invalid> {
        let d = self.lo.len();
        if d == 0 || d > 3 {
            return Err(invalid(&["grid", "lo"], "grids have 1 to 3 dimensions"));
        }
        if self.hi.len() != d {
            return Err(invalid(&["grid", "hi"], format!("expected {d} entries to match lo")));
        }
        if self.points.len() != d {
            return Err(invalid(&["grid", "points"], format!("expected {d} entries to match lo")));
        }
        for k in 0..d {
            let idx = k.to_string();
            finite(&["grid", "lo", &idx], self.lo[k])?;
            finite(&["grid", "hi", &idx], self.hi[k])?;
            if self.hi[k] <= self.lo[k] {
                return Err(invalid(&["grid", "hi", &idx], format!("must exceed lo = {}", self.lo[k])));
            }
            if self.points[k] == 1 {
                return Err(invalid(&["grid", "points", &idx], "a grid axis needs 0 or at least 2 points"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.contains(&0)
    }

    pub fn axes(&self) -> Vec<Axis> {
        (0..self.dim())
            .map(|k| Axis::spanning(self.lo[k], self.hi[k], self.points[k]).expect("validated grid"))
            .collect()
    }

    pub fn cartesian(&self) -> CartesianGrid {
        CartesianGrid::new(self.axes())
    }
}
