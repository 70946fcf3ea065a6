//! Norms, moments, overlaps and density profiling.
//!
//! Position moments are trapezoidal sums on the grid; momentum moments are
//! computed from the discrete Fourier coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, GridState, Spectral};
use crate::scales::PhysicalScales;
use crate::C64;

/// Norm deficit above which a sampled state is declared under-resolved.
pub const NORM_DEFICIT_TOL: f64 = 1e-6;

/// Relative threshold (to the peak) below which density maxima are ignored.
pub const HUMP_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub t: f64,
    pub norm: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub uncertainty_product: f64,
    /// ⟨x²⟩ and ⟨p²⟩ (not centred).
    pub x2: f64,
    pub p2: f64,
    /// Dimensionless ⟨N̂⟩ from the invariant quadratic form; eigenvalues n + ½.
    pub number: f64,
    /// Free-particle energy ⟨p²⟩/2m.
    pub energy: f64,
}

/// Moments of a normalized state; fails if the norm deviates from one by
/// more than [`NORM_DEFICIT_TOL`].
pub fn moments(state: &GridState) -> Result<MomentReport> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_DEFICIT_TOL {
        return Err(Error::UnderResolved(format!(
            "norm {norm} deviates from 1 by more than {NORM_DEFICIT_TOL}; enlarge the window or refine the grid"
        )));
    }
    Ok(moments_raw(state))
}

/// Moments normalized by the actual grid norm; never fails.
pub fn moments_raw(state: &GridState) -> MomentReport {
    let s = &state.scales;
    let axis = state.axis;
    let norm = state.norm_sqr();
    let xs = axis.points();
    let dens = state.density();
    let mut mx = 0.0;
    let mut mx2 = 0.0;
    for (d, x) in dens.iter().zip(&xs) {
        mx += d * x;
        mx2 += d * x * x;
    }
    mx *= axis.dx / norm;
    mx2 *= axis.dx / norm;

    let spec = Spectral::new(&axis);
    let mut hat = state.samples.clone();
    spec.forward(&mut hat);
    let total: f64 = hat.iter().map(|c| c.norm_sqr()).sum();
    let mut mk = 0.0;
    let mut mk2 = 0.0;
    for (c, k) in hat.iter().zip(spec.wavenumbers()) {
        let w = c.norm_sqr();
        mk += w * k;
        mk2 += w * k * k;
    }
    mk /= total;
    mk2 /= total;
    let hbar = s.hbar();
    let (mp, mp2) = (hbar * mk, hbar * hbar * mk2);

    // ⟨X̂²⟩ = ‖X̂ψ‖² with X̂ = x + (iħt/m)∂x
    let dpsi = spec.derivative(&state.samples, 1);
    let coef = C64::new(0.0, hbar * state.t / s.mass());
    let big_x2: f64 = state
        .samples
        .iter()
        .zip(&dpsi)
        .zip(&xs)
        .map(|((v, d), x)| (v * x + coef * d).norm_sqr())
        .sum::<f64>()
        * axis.dx
        / norm;
    let (m, w) = (s.mass(), s.omega());
    let number = (mp2 / (2.0 * m) + 0.5 * m * w * w * big_x2) / (hbar * w);

    let dx = (mx2 - mx * mx).max(0.0).sqrt();
    let dp = (mp2 - mp * mp).max(0.0).sqrt();
    MomentReport {
        t: state.t,
        norm,
        mean_x: mx,
        mean_p: mp,
        delta_x: dx,
        delta_p: dp,
        uncertainty_product: dx * dp,
        x2: mx2,
        p2: mp2,
        number,
        energy: mp2 / (2.0 * m),
    }
}

/// `⟨a, b⟩`, conjugate-linear in `a`.
pub fn overlap(a: &GridState, b: &GridState) -> Result<C64> {
    a.inner(b)
}

/// `|⟨a, b⟩|²` between two normalized states.
pub fn fidelity(a: &GridState, b: &GridState) -> Result<f64> {
    let o = a.inner(b)?;
    Ok(o.norm_sqr() / (a.norm_sqr() * b.norm_sqr()))
}

/// L² norm of `a − b` on a shared grid.
pub fn l2_distance(a: &GridState, b: &GridState) -> Result<f64> {
    a.check_same_axis(b)?;
    let s: f64 = a.samples.iter().zip(&b.samples).map(|(u, v)| (u - v).norm_sqr()).sum();
    Ok((s * a.axis.dx).sqrt())
}

/// Number of humps of a density profile: strict local maxima of the
/// 3-cell moving average that exceed [`HUMP_THRESHOLD`] times the peak.
pub fn count_humps(density: &[f64]) -> usize {
    let n = density.len();
    if n == 0 {
        return 0;
    }
    let smooth: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            density[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let peak = smooth.iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return 0;
    }
    let floor = HUMP_THRESHOLD * peak;
    // walk the profile tracking the direction of travel; plateaus keep it
    let mut humps = 0;
    let mut rising = true;
    for i in 1..n {
        if smooth[i] > smooth[i - 1] {
            rising = true;
        } else if smooth[i] < smooth[i - 1] {
            if rising && smooth[i - 1] > floor {
                humps += 1;
            }
            rising = false;
        }
    }
    if rising && smooth[n - 1] > floor && smooth[n - 1] > smooth[n.saturating_sub(2)] {
        humps += 1;
    }
    humps
}

/// Relative TDSE residual `‖iħ∂tψ + (ħ²/2m)∂²xψ‖ / (ħω‖ψ‖)` of an analytic
/// family at time `t`: centred differences in t (step 1e-5 τ), spectral in x.
pub fn tdse_residual_1d<F>(f: F, axis: Axis, t: f64, scales: &PhysicalScales) -> f64
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let h = 1e-5 * scales.tau();
    let xs = axis.points();
    let psi: Vec<C64> = xs.iter().map(|&x| f(x, t)).collect();
    let fwd: Vec<C64> = xs.iter().map(|&x| f(x, t + h)).collect();
    let bwd: Vec<C64> = xs.iter().map(|&x| f(x, t - h)).collect();
    let spec = Spectral::new(&axis);
    let d2 = spec.derivative(&psi, 2);
    let hbar = scales.hbar();
    let kin = hbar * hbar / (2.0 * scales.mass());
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..xs.len() {
        let dt = (fwd[j] - bwd[j]) / (2.0 * h);
        num += (C64::new(0.0, hbar) * dt + kin * d2[j]).norm_sqr();
        den += psi[j].norm_sqr();
    }
    (num / den).sqrt() / (hbar * scales.omega())
}
