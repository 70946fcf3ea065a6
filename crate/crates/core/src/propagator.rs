//! Split-step spectral Schrödinger propagation and the experiments built on
//! it: trap schedules ("sling"), Glauber driving and barrier crossing.
//!
//! Each step is Strang kick–drift–kick: half a potential kick sampled at the
//! step midpoint, an exact kinetic drift in Fourier space, the other half
//! kick. Free evolution is therefore exact up to round-off.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, CartesianField, GridState, Spectral};
use crate::observables::{count_humps, moments_raw, MomentReport};
use crate::par::{self, Exec};
use crate::quadrature::gauss_legendre;
use crate::scales::PhysicalScales;
use crate::states::{eval_oscillator_eigenstate, eval_oscillator_squeezed_number, StateSpec1D};
use crate::C64;

/// Edge density (relative to the peak) above which the window overflows.
pub const EDGE_DENSITY_LIMIT: f64 = 1e-10;
/// Automatic steps are this many times smaller than the π-rotation limit.
pub const DT_SAFETY: f64 = 10.0;

pub type ForceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Potential {
    Free,
    /// `½ m ω² (x − centre)²`.
    Harmonic { omega: f64, center: f64 },
    /// `−f(t) x`.
    LinearForce(ForceFn),
    /// `height` on `[left, right]`, zero elsewhere; negative heights are wells.
    Square { height: f64, left: f64, right: f64 },
    Sum(Vec<Potential>),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Free => write!(f, "Free"),
            Self::Harmonic { omega, center } => write!(f, "Harmonic {{ omega: {omega}, center: {center} }}"),
            Self::LinearForce(_) => write!(f, "LinearForce(..)"),
            Self::Square { height, left, right } => {
                write!(f, "Square {{ height: {height}, left: {left}, right: {right} }}")
            }
            Self::Sum(v) => f.debug_tuple("Sum").field(v).finish(),
        }
    }
}

impl Potential {
    pub fn harmonic(omega: f64) -> Self {
        Self::Harmonic { omega, center: 0.0 }
    }

    pub fn value(&self, x: f64, t: f64, mass: f64) -> f64 {
        match self {
            Self::Free => 0.0,
            Self::Harmonic { omega, center } => 0.5 * mass * omega * omega * (x - center).powi(2),
            Self::LinearForce(f) => -f(t) * x,
            Self::Square { height, left, right } => {
                if (*left..=*right).contains(&x) {
                    *height
                } else {
                    0.0
                }
            }
            Self::Sum(v) => v.iter().map(|p| p.value(x, t, mass)).sum(),
        }
    }

    pub fn is_free(&self) -> bool {
        match self {
            Self::Free => true,
            Self::Sum(v) => v.iter().all(Potential::is_free),
            _ => false,
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        match self {
            Self::LinearForce(_) => true,
            Self::Sum(v) => v.iter().any(Potential::is_time_dependent),
            _ => false,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Harmonic { omega, center } if !(omega.is_finite() && *omega > 0.0 && center.is_finite()) => {
                Err(Error::Domain(format!("harmonic trap needs finite ω > 0, got {omega}")))
            }
            Self::Square { height, left, right } if !(height.is_finite() && left.is_finite() && right > left) => {
                Err(Error::Domain(format!("square potential needs finite height and left < right, got [{left}, {right}]")))
            }
            Self::Sum(v) => v.iter().try_for_each(Potential::validate),
            _ => Ok(()),
        }
    }

    /// Largest |V| on the window over `[t0, t1]` (forces sampled densely).
    fn max_abs(&self, axis: &Axis, t0: f64, t1: f64, mass: f64) -> f64 {
        let xmax = axis.x_min.abs().max(axis.x_max().abs());
        match self {
            Self::Free => 0.0,
            Self::Harmonic { omega, center } => {
                let reach = (axis.x_min - center).abs().max((axis.x_max() - center).abs());
                0.5 * mass * omega * omega * reach * reach
            }
            Self::LinearForce(f) => {
                let fmax = (0..=256)
                    .map(|j| f(t0 + (t1 - t0) * j as f64 / 256.0).abs())
                    .fold(0.0, f64::max);
                fmax * xmax
            }
            Self::Square { height, .. } => height.abs(),
            Self::Sum(v) => v.iter().map(|p| p.max_abs(axis, t0, t1, mass)).sum(),
        }
    }
}

/// Strang split-step propagator on one periodic axis.
#[derive(Debug)]
pub struct Propagator {
    axis: Axis,
    scales: PhysicalScales,
    spectral: Spectral,
    exec: Exec,
}

impl Propagator {
    pub fn new(axis: Axis, scales: PhysicalScales) -> Self {
        Self {
            axis,
            scales,
            spectral: Spectral::new(&axis),
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    /// Largest step allowed by the π-rotation criteria (kinetic phase at
    /// Nyquist and potential phase).
    pub fn max_stable_dt(&self, pot: &Potential, t0: f64, t1: f64) -> f64 {
        let (hbar, m) = (self.scales.hbar(), self.scales.mass());
        let k = self.axis.k_max();
        let kinetic = 2.0 * PI * m / (hbar * k * k);
        let vmax = pot.max_abs(&self.axis, t0, t1, m);
        if vmax > 0.0 {
            kinetic.min(PI * hbar / vmax)
        } else {
            kinetic
        }
    }

    pub fn auto_dt(&self, pot: &Potential, t0: f64, t1: f64) -> f64 {
        self.max_stable_dt(pot, t0, t1) / DT_SAFETY
    }

    /// Evolves to `t_end` with steps no larger than `dt` (automatic when
    /// `None`); the step is shrunk so that it lands exactly on `t_end`.
    pub fn evolve(&self, state: &GridState, pot: &Potential, t_end: f64, dt: Option<f64>) -> Result<GridState> {
        let span = t_end - state.t;
        if span == 0.0 {
            return Ok(state.clone());
        }
        let dt = match dt {
            Some(dt) if !(dt.is_finite() && dt > 0.0) => {
                return Err(Error::Domain(format!("time step must be positive, got {dt}")));
            }
            Some(dt) => dt,
            None => self.auto_dt(pot, state.t, t_end),
        };
        let steps = (span / dt).ceil().max(1.0) as usize;
        self.evolve_steps(state, pot, t_end, steps)
    }

    pub fn evolve_steps(&self, state: &GridState, pot: &Potential, t_end: f64, steps: usize) -> Result<GridState> {
        if state.axis != self.axis {
            return Err(Error::GridMismatch("state and propagator use different axes".into()));
        }
        pot.validate()?;
        let t0 = state.t;
        if !t_end.is_finite() || t_end < t0 {
            return Err(Error::Domain(format!("cannot evolve from t = {t0} to t = {t_end}")));
        }
        if t_end == t0 || steps == 0 {
            return Ok(state.clone());
        }
        let dt = (t_end - t0) / steps as f64;
        let limit = self.max_stable_dt(pot, t0, t_end);
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::Stability(format!(
                "dt = {dt} exceeds the π-rotation limit {limit}; use at least {} steps",
                ((t_end - t0) / limit).ceil()
            )));
        }
        let (hbar, m) = (self.scales.hbar(), self.scales.mass());
        let drift: Vec<C64> = self
            .spectral
            .wavenumbers()
            .iter()
            .map(|k| C64::from_polar(1.0, -hbar * k * k * dt / (2.0 * m)))
            .collect();
        let xs = self.axis.points();
        let half_kick = |t_mid: f64| -> Vec<C64> {
            par::map_indexed(self.exec, xs.len(), |j| {
                C64::from_polar(1.0, -pot.value(xs[j], t_mid, m) * dt / (2.0 * hbar))
            })
        };
        let static_kick = if pot.is_free() || pot.is_time_dependent() {
            None
        } else {
            Some(half_kick(0.0))
        };

        let mut psi = state.samples.clone();
        let apply = |psi: &mut [C64], k: &[C64]| par::for_each_mut(self.exec, psi, |j, v| *v *= k[j]);
        for step in 0..steps {
            let t_mid = t0 + (step as f64 + 0.5) * dt;
            let dynamic;
            let kick = if pot.is_free() {
                None
            } else if let Some(k) = &static_kick {
                Some(k.as_slice())
            } else {
                dynamic = half_kick(t_mid);
                Some(dynamic.as_slice())
            };
            if let Some(k) = kick {
                apply(&mut psi, k);
            }
            self.spectral.forward(&mut psi);
            apply(&mut psi, &drift);
            self.spectral.inverse(&mut psi);
            if let Some(k) = kick {
                apply(&mut psi, k);
            }
            if step % 256 == 255 {
                self.check_window(&psi)?;
            }
        }
        self.check_window(&psi)?;
        Ok(GridState {
            samples: psi,
            axis: self.axis,
            t: t_end,
            scales: state.scales,
        })
    }

    fn check_window(&self, psi: &[C64]) -> Result<()> {
        let probe = GridState {
            samples: psi.to_vec(),
            axis: self.axis,
            t: 0.0,
            scales: self.scales,
        };
        let peak = probe.peak_amplitude();
        let edge = probe.edge_amplitude();
        let rel = if peak > 0.0 { (edge / peak).powi(2) } else { 0.0 };
        if rel > EDGE_DENSITY_LIMIT {
            return Err(Error::WindowOverflow {
                edge_density: rel,
                limit: EDGE_DENSITY_LIMIT,
            });
        }
        Ok(())
    }
}

/// Exact free evolution of an N-dimensional field (one kinetic factor per
/// axis, each with its own mass).
pub fn propagate_free_nd(field: &CartesianField, masses: &[f64], hbar: f64, t_end: f64) -> Result<CartesianField> {
    if masses.len() != field.grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.grid.dim(),
            got: masses.len(),
        });
    }
    let dt = t_end - field.t;
    let mut out = field.clone();
    for (d, &m) in masses.iter().enumerate() {
        out.fft_axis(d, true);
        let k = field.grid.axes[d].wavenumbers();
        out.multiply_along(d, |j| C64::from_polar(1.0, -hbar * k[j] * k[j] * dt / (2.0 * m)));
        out.fft_axis(d, false);
    }
    out.t = t_end;
    Ok(out)
}

/// One interval of a schedule. `imprint` applies `exp(−i s x²/2ħ)` at the
/// start of the segment (a phase-matching quadratic kick of strength `s`).
#[derive(Debug, Clone)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub potential: Potential,
    pub imprint: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct TrapSchedule {
    segments: Vec<Segment>,
}

impl TrapSchedule {
    /// Segments must be contiguous with strictly increasing times.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for (i, s) in segments.iter().enumerate() {
            if !(s.t_start.is_finite() && s.t_end.is_finite()) || s.t_end <= s.t_start {
                return Err(Error::Domain(format!(
                    "segment {i}: need t_start < t_end, got [{}, {}]",
                    s.t_start, s.t_end
                )));
            }
            if let Some(k) = s.imprint {
                if !k.is_finite() {
                    return Err(Error::Domain(format!("segment {i}: imprint strength must be finite")));
                }
            }
            s.potential.validate()?;
            if i > 0 {
                let prev = segments[i - 1].t_end;
                if (s.t_start - prev).abs() > 1e-12 * prev.abs().max(1.0) {
                    return Err(Error::Domain(format!(
                        "segment {i} starts at {} but segment {} ends at {prev}",
                        s.t_start,
                        i - 1
                    )));
                }
            }
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn start(&self) -> Option<f64> {
        self.segments.first().map(|s| s.t_start)
    }

    pub fn end(&self) -> Option<f64> {
        self.segments.last().map(|s| s.t_end)
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    /// Index of the segment the snapshot belongs to (`None` for the input).
    pub segment: Option<usize>,
    pub state: GridState,
    pub report: MomentReport,
}

/// Runs every segment in order, recording the input, each segment start
/// (after any imprint), `interior` evenly spaced interior points and each
/// segment end.
pub fn run_schedule(
    prop: &Propagator,
    initial: &GridState,
    schedule: &TrapSchedule,
    interior: usize,
    dt: Option<f64>,
) -> Result<Vec<Snapshot>> {
    let snap = |segment, state: GridState| Snapshot {
        segment,
        report: moments_raw(&state),
        state,
    };
    let mut out = vec![snap(None, initial.clone())];
    if let Some(t0) = schedule.start() {
        if (initial.t - t0).abs() > 1e-12 * t0.abs().max(1.0) {
            return Err(Error::Domain(format!(
                "initial state is at t = {} but the schedule starts at {t0}",
                initial.t
            )));
        }
    }
    let mut psi = initial.clone();
    let hbar = initial.scales.hbar();
    for (i, seg) in schedule.segments().iter().enumerate() {
        psi.t = seg.t_start;
        if let Some(s) = seg.imprint {
            let xs = psi.axis.points();
            for (v, x) in psi.samples.iter_mut().zip(&xs) {
                *v *= C64::from_polar(1.0, -s * x * x / (2.0 * hbar));
            }
        }
        out.push(snap(Some(i), psi.clone()));
        let marks = interior + 1;
        for j in 1..=marks {
            let t = seg.t_start + (seg.t_end - seg.t_start) * j as f64 / marks as f64;
            let t = if j == marks { seg.t_end } else { t };
            psi = prop.evolve(&psi, &seg.potential, t, dt)?;
            out.push(snap(Some(i), psi.clone()));
        }
    }
    Ok(out)
}

/// Capture frequency `ω₁ = ω/|δ₁|²` for a packet released at t = 0 and
/// caught at `t1`.
pub fn capture_frequency(scales: &PhysicalScales, t1: f64) -> f64 {
    scales.omega() / scales.delta(t1).modulus_sqr()
}

/// Strength `mω²t₁/|δ₁|²` of the quadratic kick that removes the free-flight
/// chirp `e^{iωt₁x²/(4L²|δ₁|²)}` of the released ground state.
pub fn matched_kick(scales: &PhysicalScales, t1: f64) -> f64 {
    let w = scales.omega();
    scales.mass() * w * w * t1 / scales.delta(t1).modulus_sqr()
}

/// Squeeze parameter `−½ log(1 + ω²t²)` after release, flight and capture
/// by the original trap.
pub fn off_on_squeeze(scales: &PhysicalScales, t1: f64) -> f64 {
    -0.5 * (1.0 + (scales.omega() * t1).powi(2)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlingParams {
    /// Free-flight time.
    pub t1: f64,
    /// Frequency of the capturing trap.
    pub capture_omega: f64,
    /// Apply the phase-matching kick at capture.
    pub matched: bool,
    /// Snapshots inside the capture period.
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlingReport {
    pub t1: f64,
    pub capture_omega: f64,
    pub matched: bool,
    pub kick_strength: f64,
    /// `max_t ∫ |ρ(t) − ρ(t₁)| dx` over one capture period.
    pub max_density_drift: f64,
    /// `ln(L/Δx)` right after capture, `L` of the releasing trap.
    pub fitted_r: f64,
    /// `¼ ln(Δx²_max/Δx²_min)` from a second-harmonic fit over the period.
    pub breathing_r: f64,
    pub expected_r: f64,
    /// `|⟨φ_r, ψ(t₁⁺)⟩|²` with `r` = expected_r.
    pub squeezed_fidelity: f64,
}

/// Release–flight–capture from the ground state of `scales.omega()`.
pub fn sling(
    scales: &PhysicalScales,
    axis: Axis,
    params: SlingParams,
    dt: Option<f64>,
) -> Result<(SlingReport, Vec<Snapshot>)> {
    let SlingParams {
        t1,
        capture_omega,
        matched,
        samples,
    } = params;
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::Domain(format!("flight time must be positive, got {t1}")));
    }
    let prop = Propagator::new(axis, *scales);
    let ground = GridState::from_fn(axis, 0.0, *scales, |x| eval_oscillator_eigenstate(0, scales, x, 0.0));
    let period = 2.0 * PI / capture_omega;
    let kick = if matched { matched_kick(scales, t1) } else { 0.0 };
    let schedule = TrapSchedule::new(vec![
        Segment {
            t_start: 0.0,
            t_end: t1,
            potential: Potential::Free,
            imprint: None,
        },
        Segment {
            t_start: t1,
            t_end: t1 + period,
            potential: Potential::harmonic(capture_omega),
            imprint: matched.then_some(kick),
        },
    ])?;
    let traj = run_schedule(&prop, &ground, &schedule, samples, dt)?;
    let captured: Vec<&Snapshot> = traj.iter().filter(|s| s.segment == Some(1)).collect();
    let first = captured[0];
    let rho0 = first.state.density();
    let mut drift: f64 = 0.0;
    for s in &captured {
        let d: f64 = s.state.density().iter().zip(&rho0).map(|(a, b)| (a - b).abs()).sum::<f64>() * axis.dx;
        drift = drift.max(d);
    }
    // in a harmonic trap Δx² = c + d cos 2ω₁s + e sin 2ω₁s exactly
    let (c, amp) = fit_second_harmonic(
        captured.iter().map(|s| (2.0 * capture_omega * (s.report.t - t1), s.report.delta_x.powi(2))),
    );
    let (x2min, x2max) = (c - amp, c + amp);
    let expected_r = off_on_squeeze(scales, t1);
    // the captured state is compared with φ_r's initial profile
    let mut phi_r = StateSpec1D::squeezed_vacuum(expected_r, *scales)?.sample(axis, 0.0);
    phi_r.t = t1;
    let o = phi_r.inner(&first.state)?;
    let report = SlingReport {
        t1,
        capture_omega,
        matched,
        kick_strength: kick,
        max_density_drift: drift,
        fitted_r: (scales.length() / first.report.delta_x).ln(),
        breathing_r: 0.25 * (x2max / x2min).ln(),
        expected_r,
        squeezed_fidelity: o.norm_sqr(),
    };
    Ok((report, traj))
}

/// Least-squares `y ≈ c + d cos θ + e sin θ`; returns `(c, √(d² + e²))`.
fn fit_second_harmonic(samples: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (theta, y) in samples {
        let row = [1.0, theta.cos(), theta.sin()];
        for i in 0..3 {
            b[i] += row[i] * y;
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting on the 3×3 normal equations
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        if a[col][col] == 0.0 {
            continue;
        }
        let pivot_row = a[col];
        for row in col + 1..3 {
            let f = a[row][col] / pivot_row[col];
            for (dst, src) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let rest: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = if a[i][i] != 0.0 { (b[i] - rest) / a[i][i] } else { 0.0 };
    }
    (x[0], x[1].hypot(x[2]))
}

#[derive(Debug, Clone)]
pub struct GlauberOutcome {
    pub state: GridState,
    /// `a = ⟨x⟩/2L + i⟨p⟩L/ħ` from the final first moments.
    pub fitted_a: C64,
    /// `|⟨coherent(fitted_a), ψ⟩|`.
    pub fidelity: f64,
    /// Whether the fidelity exceeds 0.99.
    pub coherent: bool,
}

/// Drives the oscillator vacuum with `−f(t)x` on top of the trap for
/// `[0, duration]`.
pub fn glauber_drive(f: ForceFn, duration: f64, scales: &PhysicalScales, axis: Axis, dt: Option<f64>) -> Result<GlauberOutcome> {
    let prop = Propagator::new(axis, *scales);
    let vac = GridState::from_fn(axis, 0.0, *scales, |x| eval_oscillator_eigenstate(0, scales, x, 0.0));
    let pot = Potential::Sum(vec![Potential::harmonic(scales.omega()), Potential::LinearForce(f)]);
    let state = prop.evolve(&vac, &pot, duration, dt)?;
    let m = moments_raw(&state);
    let l = scales.length();
    let fitted_a = C64::new(m.mean_x / (2.0 * l), m.mean_p * l / scales.hbar());
    let spec = StateSpec1D::coherent(fitted_a, *scales)?;
    let mut target = GridState::from_fn(axis, duration, *scales, |x| {
        eval_oscillator_squeezed_number(&spec, x, 0.0).unwrap_or_default()
    });
    target.t = duration;
    let fidelity = target.inner(&state)?.norm() / (target.norm_sqr() * state.norm_sqr()).sqrt();
    Ok(GlauberOutcome {
        state,
        fitted_a,
        fidelity,
        coherent: fidelity > 0.99,
    })
}

/// Heisenberg-picture amplitude `a(T) = e^{−iωT} (iL/ħ) ∫₀^T f(s) e^{iωs} ds`.
pub fn glauber_prediction(f: &dyn Fn(f64) -> f64, duration: f64, scales: &PhysicalScales) -> C64 {
    let w = scales.omega();
    let (nodes, weights) = gauss_legendre(200, 0.0, duration);
    let integral: C64 = nodes
        .iter()
        .zip(&weights)
        .map(|(s, wt)| wt * f(*s) * C64::from_polar(1.0, w * s))
        .sum();
    C64::from_polar(1.0, -w * duration) * C64::new(0.0, scales.length() / scales.hbar()) * integral
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Barrier {
    pub height: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BarrierOutcome {
    pub humps_before: usize,
    pub humps_after: usize,
    /// Transmitted probability relative to the barrier-free run.
    pub attenuation: f64,
    /// Centroid lag behind the free packet, as a time (`Δx / v₀`).
    pub delay: f64,
    /// Normalized correlation of the recentred transmitted density with the
    /// free density.
    pub shape_correlation: f64,
    pub reflected: f64,
    /// `E/V ≥ 20` and `Δp/p₀ ≤ 0.1`.
    pub regime_ok: bool,
}

/// Sends `spec` across `barrier` and compares with free flight to `t_end`.
pub fn barrier_robustness(
    spec: &StateSpec1D,
    barrier: Barrier,
    axis: Axis,
    t_end: f64,
    dt: Option<f64>,
) -> Result<BarrierOutcome> {
    let s = spec.scales();
    let prop = Propagator::new(axis, *s);
    let psi0 = spec.sample(axis, 0.0);
    let pot = Potential::Square {
        height: barrier.height,
        left: barrier.left,
        right: barrier.right,
    };
    let free = prop.evolve(&psi0, &Potential::Free, t_end, dt)?;
    let hit = prop.evolve(&psi0, &pot, t_end, dt)?;
    let xs = axis.points();
    let rho_f = free.density();
    let rho_b = hit.density();
    let behind: f64 = rho_f.iter().zip(&xs).filter(|(_, x)| **x <= barrier.right).map(|(r, _)| r).sum::<f64>() * axis.dx;
    if behind > 1e-6 {
        return Err(Error::Regime(format!(
            "packet has not cleared the barrier by t = {t_end} ({behind} of the free packet is still behind it)"
        )));
    }
    let transmitted: Vec<f64> = rho_b.iter().zip(&xs).map(|(r, x)| if *x > barrier.right { *r } else { 0.0 }).collect();
    let reflected: f64 = rho_b.iter().zip(&xs).filter(|(_, x)| **x < barrier.left).map(|(r, _)| r).sum::<f64>() * axis.dx;
    let t_norm: f64 = transmitted.iter().sum::<f64>() * axis.dx;
    let f_norm: f64 = rho_f.iter().sum::<f64>() * axis.dx;
    if reflected > t_norm {
        return Err(Error::Regime(format!(
            "reflection dominates (R = {reflected}, T = {t_norm}); raise the packet energy"
        )));
    }
    let centroid = |rho: &[f64]| -> f64 {
        let w: f64 = rho.iter().sum();
        rho.iter().zip(&xs).map(|(r, x)| r * x).sum::<f64>() / w
    };
    let (cf, cb) = (centroid(&rho_f), centroid(&transmitted));
    let shift = cf - cb;
    // recentre the transmitted density onto the free one (linear interpolation)
    let moved: Vec<f64> = xs
        .iter()
        .map(|x| {
            let u = (x - shift - axis.x_min) / axis.dx;
            let j = u.floor();
            if j < 0.0 || j as usize + 1 >= transmitted.len() {
                return 0.0;
            }
            let (j, frac) = (j as usize, u - j);
            transmitted[j] * (1.0 - frac) + transmitted[j + 1] * frac
        })
        .collect();
    let dot: f64 = moved.iter().zip(&rho_f).map(|(a, b)| a * b).sum();
    let na: f64 = moved.iter().map(|a| a * a).sum();
    let nb: f64 = rho_f.iter().map(|b| b * b).sum();
    let m0 = moments_raw(&psi0);
    let energy = m0.p2 / (2.0 * s.mass());
    let regime_ok = energy >= 20.0 * barrier.height.abs() && m0.delta_p <= 0.1 * m0.mean_p.abs();
    Ok(BarrierOutcome {
        humps_before: count_humps(&psi0.density()),
        humps_after: count_humps(&transmitted),
        attenuation: t_norm / f_norm,
        delay: if spec.v0() != 0.0 { shift / spec.v0() } else { 0.0 },
        shape_correlation: dot / (na * nb).sqrt(),
        reflected,
        regime_ok,
    })
}
