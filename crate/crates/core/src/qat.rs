//! The quantum Arnold transformation between oscillator-frame and free
//! solutions:
//!
//! `ψ'(x', t') = u₂^{-1/2} exp(i m u̇₂ x'² / (2ħ W u₂)) ψ(x'/u₂, u₁/u₂)`.
//!
//! On grids the spatial rescaling `x = x'/u₂` is realized by rescaling the
//! axis itself, so analytic and sampled inputs map without interpolation.
//! Only the first focal cell `u₂ > 0` is supported.

use crate::error::{Error, Result};
use crate::grid::{Axis, GridState};
use crate::par::Exec;
use crate::scales::PhysicalScales;
use crate::C64;

/// Two independent solutions of the classical equation driving the map,
/// normalized so that `u₁(0) = 0`, `u₂(0) = 1`.
pub trait ClassicalSolutionPair {
    fn u1(&self, tp: f64) -> f64;
    fn u2(&self, tp: f64) -> f64;
    fn du1(&self, tp: f64) -> f64;
    fn du2(&self, tp: f64) -> f64;

    /// `W = u̇₁u₂ − u₁u̇₂`.
    fn wronskian(&self, tp: f64) -> f64 {
        self.du1(tp) * self.u2(tp) - self.u1(tp) * self.du2(tp)
    }

    /// Whether the pair belongs to the validated harmonic specialization.
    fn validated(&self) -> bool {
        false
    }
}

/// `u₁ = sin(ωt')/ω`, `u₂ = cos(ωt')`, `W ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicPair {
    pub omega: f64,
}

impl HarmonicPair {
    pub fn new(omega: f64) -> Self {
        Self { omega }
    }

    pub fn from_scales(scales: &PhysicalScales) -> Self {
        Self::new(scales.omega())
    }

    /// `t' = atan(ωt)/ω`.
    pub fn prime_time(&self, t: f64) -> f64 {
        (self.omega * t).atan() / self.omega
    }
}

impl ClassicalSolutionPair for HarmonicPair {
    fn u1(&self, tp: f64) -> f64 {
        (self.omega * tp).sin() / self.omega
    }

    fn u2(&self, tp: f64) -> f64 {
        (self.omega * tp).cos()
    }

    fn du1(&self, tp: f64) -> f64 {
        (self.omega * tp).cos()
    }

    fn du2(&self, tp: f64) -> f64 {
        -self.omega * (self.omega * tp).sin()
    }

    fn wronskian(&self, _tp: f64) -> f64 {
        1.0
    }

    fn validated(&self) -> bool {
        true
    }
}

/// User-supplied pair, e.g. for a damped equation. Not validated: the phase
/// convention for `W ≠ 1` is taken literally from the transformation above.
pub struct GenericPair {
    pub u1: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub u2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub du1: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub du2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for GenericPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("GenericPair { .. }")
    }
}

impl ClassicalSolutionPair for GenericPair {
    fn u1(&self, tp: f64) -> f64 {
        (self.u1)(tp)
    }

    fn u2(&self, tp: f64) -> f64 {
        (self.u2)(tp)
    }

    fn du1(&self, tp: f64) -> f64 {
        (self.du1)(tp)
    }

    fn du2(&self, tp: f64) -> f64 {
        (self.du2)(tp)
    }
}

fn checked_u2<S: ClassicalSolutionPair + ?Sized>(sols: &S, tp: f64) -> Result<f64> {
    let u2 = sols.u2(tp);
    if !u2.is_finite() || u2 <= 0.0 {
        return Err(Error::FocalPoint { t_prime: tp, u2 });
    }
    Ok(u2)
}

/// Free time `t = u₁(t')/u₂(t')`.
pub fn arnold_map<S: ClassicalSolutionPair + ?Sized>(tp: f64, sols: &S) -> Result<f64> {
    let u2 = checked_u2(sols, tp)?;
    Ok(sols.u1(tp) / u2)
}

/// Space-time form `(x, t) = (x'/u₂, u₁/u₂)`.
pub fn arnold_map_point<S: ClassicalSolutionPair + ?Sized>(xp: f64, tp: f64, sols: &S) -> Result<(f64, f64)> {
    let u2 = checked_u2(sols, tp)?;
    Ok((xp / u2, sols.u1(tp) / u2))
}

/// `(u₂, chirp coefficient m u̇₂ / (2ħ W u₂))` at `t'`.
fn frame<S: ClassicalSolutionPair + ?Sized>(sols: &S, tp: f64, scales: &PhysicalScales) -> Result<(f64, f64)> {
    let u2 = checked_u2(sols, tp)?;
    let w = sols.wronskian(tp);
    if w == 0.0 || !w.is_finite() {
        return Err(Error::Domain(format!("Wronskian vanishes at t' = {tp}")));
    }
    Ok((u2, scales.mass() * sols.du2(tp) / (2.0 * scales.hbar() * w * u2)))
}

fn same_time(expected: f64, got: f64, scale: f64) -> Result<()> {
    if (expected - got).abs() > 1e-12 * expected.abs().max(scale) {
        return Err(Error::Domain(format!(
            "free state is at t = {got}, but the map requires t = {expected}"
        )));
    }
    Ok(())
}

/// Maps a free state sampled at `t = u₁/u₂` to the oscillator frame at
/// `t'`; the output axis is the input axis scaled by `u₂`.
pub fn qat_inverse<S: ClassicalSolutionPair + ?Sized>(free: &GridState, sols: &S, tp: f64) -> Result<GridState> {
    let t = arnold_map(tp, sols)?;
    same_time(t, free.t, free.scales.tau())?;
    let (u2, chirp) = frame(sols, tp, &free.scales)?;
    let axis = free.axis.scaled(u2);
    let amp = u2.powf(-0.5);
    let samples = free
        .samples
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let xp = axis.x(j);
            v * C64::from_polar(amp, chirp * xp * xp)
        })
        .collect();
    Ok(GridState {
        samples,
        axis,
        t: tp,
        scales: free.scales,
    })
}

/// Exact inverse of [`qat_inverse`]: oscillator state at `t'` to the free
/// state at `t = u₁/u₂`, on the axis scaled by `1/u₂`.
pub fn qat_forward<S: ClassicalSolutionPair + ?Sized>(osc: &GridState, sols: &S) -> Result<GridState> {
    let tp = osc.t;
    let t = arnold_map(tp, sols)?;
    let (u2, chirp) = frame(sols, tp, &osc.scales)?;
    let amp = u2.sqrt();
    let samples = osc
        .samples
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let xp = osc.axis.x(j);
            v * C64::from_polar(amp, -chirp * xp * xp)
        })
        .collect();
    Ok(GridState {
        samples,
        axis: osc.axis.scaled(1.0 / u2),
        t,
        scales: osc.scales,
    })
}

/// [`qat_inverse`] followed by band-limited resampling onto `target`.
pub fn qat_inverse_onto<S: ClassicalSolutionPair + ?Sized>(
    free: &GridState,
    sols: &S,
    tp: f64,
    target: Axis,
) -> Result<GridState> {
    let osc = qat_inverse(free, sols, tp)?;
    let out = osc.resample(target);
    check_resample_norm(&osc, &out)?;
    Ok(out)
}

/// [`qat_forward`] followed by band-limited resampling onto `target`.
pub fn qat_forward_onto<S: ClassicalSolutionPair + ?Sized>(osc: &GridState, sols: &S, target: Axis) -> Result<GridState> {
    let free = qat_forward(osc, sols)?;
    let out = free.resample(target);
    check_resample_norm(&free, &out)?;
    Ok(out)
}

fn check_resample_norm(src: &GridState, dst: &GridState) -> Result<()> {
    let (a, b) = (src.norm_sqr(), dst.norm_sqr());
    if (a - b).abs() > 1e-8 * a.max(1e-300) {
        return Err(Error::Accuracy(format!(
            "resampling changed the norm from {a} to {b}; the target grid does not cover or resolve the state"
        )));
    }
    Ok(())
}

/// Oscillator-frame samples of an analytic free family `f(x, t)` at `t'`,
/// evaluated directly on `axis'` (no interpolation).
pub fn qat_inverse_analytic<S, F>(f: F, sols: &S, tp: f64, axis: Axis, scales: PhysicalScales) -> Result<GridState>
where
    S: ClassicalSolutionPair + ?Sized,
    F: Fn(f64, f64) -> C64 + Sync,
{
    let t = arnold_map(tp, sols)?;
    let (u2, chirp) = frame(sols, tp, &scales)?;
    let amp = u2.powf(-0.5);
    Ok(GridState::from_fn_with(Exec::default(), axis, tp, scales, |xp| {
        f(xp / u2, t) * C64::from_polar(amp, chirp * xp * xp)
    }))
}

/// Free-frame samples at `t = u₁/u₂` of an analytic oscillator family
/// `g(x', t')`.
pub fn qat_forward_analytic<S, F>(g: F, sols: &S, tp: f64, axis: Axis, scales: PhysicalScales) -> Result<GridState>
where
    S: ClassicalSolutionPair + ?Sized,
    F: Fn(f64, f64) -> C64 + Sync,
{
    let t = arnold_map(tp, sols)?;
    let (u2, chirp) = frame(sols, tp, &scales)?;
    let amp = u2.sqrt();
    Ok(GridState::from_fn_with(Exec::default(), axis, t, scales, |x| {
        let xp = u2 * x;
        g(xp, tp) * C64::from_polar(amp, -chirp * xp * xp)
    }))
}
