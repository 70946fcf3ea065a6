//! Closed-form one-dimensional free-particle states.
//!
//! All families are special cases of the squeezed, displaced number state
//! `ψ^n_(a,r)`: the Hermite-Gauss basis `ψ_n` (a = 0, r = 0), the traveling
//! packets `φ_a^n` (r = 0) and the squeezed vacuum `φ_r` (n = 0, a = 0).
//! The complex label `a = x0/2L + i p0 L/ħ` carries the initial position and
//! mean momentum.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::grid::{Axis, GridState};
use crate::par::Exec;
use crate::scales::PhysicalScales;
use crate::special_fn::hermite_normalized;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Basis,
    CoherentNumber,
    SqueezedVacuum,
    SqueezedNumber,
}

/// Symbolic description of a 1D state; the family is inferred from the
/// labels so that `family == Basis` exactly when `a = 0` and `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec1D {
    family: Family,
    n: usize,
    a: C64,
    r: f64,
    scales: PhysicalScales,
}

impl StateSpec1D {
    pub fn new(n: usize, a: C64, r: f64, scales: PhysicalScales) -> Result<Self> {
        ensure_finite("Re a", a.re)?;
        ensure_finite("Im a", a.im)?;
        ensure_finite("r", r)?;
        let zero_a = a == C64::new(0.0, 0.0);
        let family = match (zero_a, r == 0.0) {
            (true, true) => Family::Basis,
            (false, true) => Family::CoherentNumber,
            (true, false) if n == 0 => Family::SqueezedVacuum,
            _ => Family::SqueezedNumber,
        };
        Ok(Self {
            family,
            n,
            a,
            r,
            scales,
        })
    }

    pub fn basis(n: usize, scales: PhysicalScales) -> Self {
        Self {
            family: Family::Basis,
            n,
            a: C64::new(0.0, 0.0),
            r: 0.0,
            scales,
        }
    }

    pub fn coherent(a: C64, scales: PhysicalScales) -> Result<Self> {
        Self::new(0, a, 0.0, scales)
    }

    pub fn coherent_number(n: usize, a: C64, scales: PhysicalScales) -> Result<Self> {
        Self::new(n, a, 0.0, scales)
    }

    pub fn squeezed_vacuum(r: f64, scales: PhysicalScales) -> Result<Self> {
        Self::new(0, C64::new(0.0, 0.0), r, scales)
    }

    /// Builds `a` from the initial position and mean momentum.
    pub fn from_phase_space(n: usize, x0: f64, p0: f64, r: f64, scales: PhysicalScales) -> Result<Self> {
        Self::new(n, a_from_phase_space(x0, p0, &scales), r, scales)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn scales(&self) -> &PhysicalScales {
        &self.scales
    }

    pub fn x0(&self) -> f64 {
        2.0 * self.scales.length() * self.a.re
    }

    pub fn p0(&self) -> f64 {
        self.scales.hbar() * self.a.im / self.scales.length()
    }

    pub fn v0(&self) -> f64 {
        self.p0() / self.scales.mass()
    }

    /// Packet centre `x0 + v0 t`.
    pub fn centroid(&self, t: f64) -> f64 {
        self.x0() + self.v0() * t
    }

    /// Width scale `L e^{-r} |δ_r|` of the Gaussian envelope.
    pub fn envelope_width(&self, t: f64) -> f64 {
        self.scales.length() * (-self.r).exp() * self.scales.delta_r(t, self.r).modulus()
    }

    /// A window centred on the packet that holds every Hermite node plus
    /// eight Gaussian widths, resolved to the state's (time-independent)
    /// momentum spread; `len` is a power of two no smaller than `min_len`.
    pub fn suggested_axis(&self, t: f64, min_len: usize) -> Axis {
        let reach = (2.0 * self.n as f64 + 1.0).sqrt() + 8.0;
        let half = SQRT_2 * self.envelope_width(t) * reach;
        // momentum-space width of the envelope is e^r / (√2 L) per unit q
        let k_need = reach * self.r.exp() / (SQRT_2 * self.scales.length()) + self.p0().abs() / self.scales.hbar();
        let dx_max = PI / k_need;
        let len = ((2.0 * half / dx_max).ceil() as usize).max(min_len).next_power_of_two();
        Axis::spanning(self.centroid(t) - half, self.centroid(t) + half, len).expect("finite window")
    }

    pub fn eval(&self, x: f64, t: f64) -> C64 {
        match self.family {
            Family::Basis => eval_basis(self.n, &self.scales, x, t),
            _ => eval_squeezed_number(self, x, t),
        }
    }

    pub fn sample(&self, axis: Axis, t: f64) -> GridState {
        self.sample_with(Exec::default(), axis, t)
    }

    pub fn sample_with(&self, exec: Exec, axis: Axis, t: f64) -> GridState {
        GridState::from_fn_with(exec, axis, t, self.scales, |x| self.eval(x, t))
    }
}

pub fn a_from_phase_space(x0: f64, p0: f64, scales: &PhysicalScales) -> C64 {
    C64::new(x0 / (2.0 * scales.length()), p0 * scales.length() / scales.hbar())
}

/// `(2π)^{-1/4} / sqrt(L)`: the n-independent part of `N_n` once the
/// Hermite polynomial is normalized by `sqrt(2^n n!)`.
fn gauss_norm(scales: &PhysicalScales) -> f64 {
    (2.0 * PI).powf(-0.25) / scales.length().sqrt()
}

/// Hermite-Gauss packet `ψ_n(x, t)`.
pub fn eval_basis(n: usize, scales: &PhysicalScales, x: f64, t: f64) -> C64 {
    let l = scales.length();
    let d = scales.delta(t);
    let ad = d.modulus();
    let q = x / (SQRT_2 * l * ad);
    // x² δ* / (4 L² |δ|²)
    let gauss = (-(x * x) * d.conj() / (4.0 * l * l * d.modulus_sqr())).exp();
    gauss_norm(scales) / ad.sqrt() * gauss * d.unit_conj_pow(n as f64 + 0.5) * hermite_normalized(n, q)
}

/// Traveling packet `φ_a^n` in the form of the coherent-state section: the
/// Gaussian exponent is `-[(x-x0)² + x0 v0 t + iτ v0 (v0 t - 2x + x0)] / 4L²δ`.
///
/// It differs from [`eval_squeezed_number`] at `r = 0` by the constant phase
/// `exp(-i p0 x0 / 2ħ)`.
pub fn eval_coherent_number(spec: &StateSpec1D, x: f64, t: f64) -> C64 {
    let s = &spec.scales;
    let l = s.length();
    let tau = s.tau();
    let d = s.delta(t);
    let ad = d.modulus();
    let (x0, v0) = (spec.x0(), spec.v0());
    let q = (x - x0 - v0 * t) / (SQRT_2 * l * ad);
    let num = C64::new((x - x0).powi(2) + x0 * v0 * t, tau * v0 * (v0 * t - 2.0 * x + x0));
    let gauss = (-num / (4.0 * l * l * d.value())).exp();
    gauss_norm(s) / ad.sqrt() * d.unit_conj_pow(spec.n as f64 + 0.5) * hermite_normalized(spec.n, q) * gauss
}

/// Squeezed vacuum `φ_r(x, t)` written directly in terms of `δ_r`.
pub fn eval_squeezed_vacuum(r: f64, scales: &PhysicalScales, x: f64, t: f64) -> C64 {
    let l = scales.length();
    let dr = scales.delta_r(t, r);
    let e2r = (2.0 * r).exp();
    let gauss = (-(x * x) * e2r * dr.conj() / (4.0 * l * l * dr.modulus_sqr())).exp();
    gauss_norm(scales) * (r / 2.0).exp() / dr.modulus().sqrt() * dr.unit_conj_pow(0.5) * gauss
}

/// General squeezed, displaced number state `ψ^n_(a,r)(x, t)`.
///
/// The Hermite argument is `q = (x - x0 - v0 t) / (√2 L e^{-r} |δ_r|)`, i.e.
/// the packet centre follows the classical trajectory. The phase `θ(x, t)`
/// groups its three bracketed terms before dividing by `|δ|²`.
pub fn eval_squeezed_number(spec: &StateSpec1D, x: f64, t: f64) -> C64 {
    let s = &spec.scales;
    let (l, hbar, omega) = (s.length(), s.hbar(), s.omega());
    let r = spec.r;
    let d = s.delta(t);
    let dr = s.delta_r(t, r);
    let (x0, p0) = (spec.x0(), spec.p0());
    let v0 = spec.v0();
    let wt = omega * t;

    let q = (x - x0 - v0 * t) / (SQRT_2 * l * (-r).exp() * dr.modulus());
    // 1/(mħω) = 2L²/ħ², mω/ħ = 1/2L², 1/sqrt(mħω) = √2 L/ħ, sqrt(mω/ħ) = 1/(√2 L)
    let bracket = 0.5 * (2.0 * l * l * p0 * p0 / (hbar * hbar) - x0 * x0 / (2.0 * l * l)) * wt
        + p0 * x0 / hbar
        + (-r).exp() * dr.modulus() * (SQRT_2 * l * p0 / hbar - x0 * wt / (SQRT_2 * l)) * q
        + (2.0 * r).sinh() * wt * q * q;
    let theta = bracket / d.modulus_sqr();
    let chirp = wt * x * x / (4.0 * l * l * d.modulus_sqr());

    gauss_norm(s) * (r / 2.0).exp() / dr.modulus().sqrt()
        * dr.unit_conj_pow(spec.n as f64 + 0.5)
        * C64::from_polar((-q * q / 2.0).exp(), chirp + theta)
        * hermite_normalized(spec.n, q)
}

/// Oscillator eigenstate `ψ'_n(x', t')` of frequency `ω`.
pub fn eval_oscillator_eigenstate(n: usize, scales: &PhysicalScales, xp: f64, tp: f64) -> C64 {
    let l = scales.length();
    let xi = xp / (SQRT_2 * l);
    let amp = gauss_norm(scales) * (-xi * xi / 2.0).exp() * hermite_normalized(n, xi);
    C64::from_polar(amp, -scales.omega() * (n as f64 + 0.5) * tp)
}

/// Oscillator-frame squeezed, displaced number state `ψ'^n_(a,r)(x', t')`.
/// Valid in the first focal cell `|ω t'| < π/2`.
pub fn eval_oscillator_squeezed_number(spec: &StateSpec1D, xp: f64, tp: f64) -> Result<C64> {
    let s = &spec.scales;
    let (l, hbar, omega) = (s.length(), s.hbar(), s.omega());
    let (c, sn) = ((omega * tp).cos(), (omega * tp).sin());
    if c <= 0.0 {
        return Err(Error::FocalPoint { t_prime: tp, u2: c });
    }
    let tn = sn / c;
    let r = spec.r;
    let dp = C64::new(1.0, tn);
    let drp = C64::new(1.0, (2.0 * r).exp() * tn);
    let (x0, p0) = (spec.x0(), spec.p0());
    let m = s.mass();

    let q = dp.norm() / drp.norm() * r.exp() * (xp - x0 * c - p0 / (m * omega) * sn) / (SQRT_2 * l);
    let bracket = 0.5 * (2.0 * l * l * p0 * p0 / (hbar * hbar) - x0 * x0 / (2.0 * l * l)) * tn
        + p0 * x0 / hbar
        + (-r).exp() * drp.norm() * (SQRT_2 * l * p0 / hbar - x0 * tn / (SQRT_2 * l)) * q
        + (2.0 * r).sinh() * tn * q * q;
    let theta = bracket / dp.norm_sqr();
    let phase = -(spec.n as f64 + 0.5) * drp.im.atan();

    Ok(gauss_norm(s) * (r / 2.0).exp() * (dp.norm() / drp.norm()).sqrt()
        * C64::from_polar((-q * q / 2.0).exp(), phase + theta)
        * hermite_normalized(spec.n, q))
}

/// Nodes of a state at time `t` and the resulting hump count.
#[derive(Debug, Clone, PartialEq)]
pub struct HumpReport {
    pub zero_positions: Vec<f64>,
    pub hump_count: usize,
}

/// Locates the real zeros of the Hermite factor inside `window` by sign
/// changes plus bisection (tolerance `1e-12·L`). The Gaussian and phase
/// factors never vanish, so these are all the zeros of the state.
pub fn humps_and_zeros(spec: &StateSpec1D, t: f64, window: (f64, f64)) -> Result<HumpReport> {
    let (lo, hi) = window;
    let centre = spec.centroid(t);
    let w = spec.envelope_width(t);
    // largest Hermite root is below sqrt(2n+1)
    let root_reach = SQRT_2 * w * (2.0 * spec.n as f64 + 1.0).sqrt();
    let need = (5.0 * w).max(1.05 * root_reach);
    if lo > centre - need || hi < centre + need {
        return Err(Error::WindowTooSmall(format!(
            "window [{lo}, {hi}] must cover [{}, {}] (centre {centre}, width {w}); widen it",
            centre - need,
            centre + need
        )));
    }
    let sqrt2w = SQRT_2 * w;
    let f = |x: f64| hermite_normalized(spec.n, (x - centre) / sqrt2w);
    let samples = 400 * (spec.n + 1);
    let dx = (hi - lo) / samples as f64;
    let tol = 1e-12 * spec.scales.length();
    let mut zeros = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa);
    for j in 1..=samples {
        let xb = lo + j as f64 * dx;
        let fb = f(xb);
        if fa == 0.0 {
            zeros.push(xa);
        } else if fa * fb < 0.0 {
            let (mut a, mut b, mut fa_) = (xa, xb, fa);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa_ * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa_ = fm;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    let hump_count = zeros.len() + 1;
    Ok(HumpReport {
        zero_positions: zeros,
        hump_count,
    })
}
