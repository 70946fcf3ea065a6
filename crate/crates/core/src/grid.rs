//! Uniform periodic grids, spectral differentiation and band-limited
//! resampling, in one and several dimensions.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::scales::PhysicalScales;
use crate::C64;

/// Uniform grid `x_j = x_min + j·dx`, `j = 0..len`, treated as periodic with
/// period `len·dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub x_min: f64,
    pub dx: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(x_min: f64, dx: f64, len: usize) -> Result<Self> {
        if !(x_min.is_finite() && dx.is_finite()) || dx <= 0.0 {
            return Err(Error::Domain(format!("invalid axis: x_min = {x_min}, dx = {dx}")));
        }
        Ok(Self { x_min, dx, len })
    }

    /// `len` points covering `[lo, hi)`.
    pub fn spanning(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Ok(Self {
                x_min: lo,
                dx: 1.0,
                len: 0,
            });
        }
        if hi <= lo {
            return Err(Error::Domain(format!("empty window [{lo}, {hi})")));
        }
        Self::new(lo, (hi - lo) / len as f64, len)
    }

    /// `len` points covering `[-half_width, half_width)`.
    pub fn symmetric(half_width: f64, len: usize) -> Result<Self> {
        Self::spanning(-half_width, half_width, len)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.x(j)).collect()
    }

    /// Period of the grid.
    pub fn period(&self) -> f64 {
        self.len as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.len.saturating_sub(1))
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.len;
        let dk = 2.0 * PI / self.period();
        (0..n)
            .map(|j| {
                if j < n.div_ceil(2) {
                    j as f64 * dk
                } else {
                    (j as f64 - n as f64) * dk
                }
            })
            .collect()
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dx
    }

    /// Same physical window scaled by `factor` (used by the QAT).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            x_min: self.x_min * factor,
            dx: self.dx * factor,
            len: self.len,
        }
    }
}

/// Cached forward/inverse FFT plans and wavenumbers for one axis length.
#[derive(Clone)]
pub struct Spectral {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    len: usize,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("len", &self.len).finish()
    }
}

impl Spectral {
    pub fn new(axis: &Axis) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            fwd: planner.plan_fft_forward(axis.len),
            inv: planner.plan_fft_inverse(axis.len),
            k: axis.wavenumbers(),
            len: axis.len,
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    /// Inverse transform including the `1/N` factor.
    pub fn inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
        let s = 1.0 / self.len as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }

    /// `∂^order f / ∂x^order`. The Nyquist mode is dropped for odd orders.
    pub fn derivative(&self, data: &[C64], order: u32) -> Vec<C64> {
        let mut buf = data.to_vec();
        if order == 0 || buf.is_empty() {
            return buf;
        }
        self.forward(&mut buf);
        let nyquist = self.len.is_multiple_of(2).then_some(self.len / 2);
        for (j, v) in buf.iter_mut().enumerate() {
            if order % 2 == 1 && Some(j) == nyquist {
                *v = C64::new(0.0, 0.0);
                continue;
            }
            *v *= C64::new(0.0, self.k[j]).powu(order);
        }
        self.inverse(&mut buf);
        buf
    }
}

/// A sampled complex wavefunction on a uniform grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub samples: Vec<C64>,
    pub axis: Axis,
    pub t: f64,
    pub scales: PhysicalScales,
}

impl GridState {
    pub fn new(samples: Vec<C64>, axis: Axis, t: f64, scales: PhysicalScales) -> Result<Self> {
        if samples.len() != axis.len {
            return Err(Error::DimensionMismatch {
                expected: axis.len,
                got: samples.len(),
            });
        }
        Ok(Self {
            samples,
            axis,
            t,
            scales,
        })
    }

    /// Samples `f(x)` on the axis.
    pub fn from_fn<F>(axis: Axis, t: f64, scales: PhysicalScales, f: F) -> Self
    where
        F: Fn(f64) -> C64 + Sync + Send,
    {
        Self::from_fn_with(Exec::default(), axis, t, scales, f)
    }

    pub fn from_fn_with<F>(exec: Exec, axis: Axis, t: f64, scales: PhysicalScales, f: F) -> Self
    where
        F: Fn(f64) -> C64 + Sync + Send,
    {
        let samples = par::map_indexed(exec, axis.len, |j| f(axis.x(j)));
        Self {
            samples,
            axis,
            t,
            scales,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> Vec<f64> {
        self.axis.points()
    }

    pub fn density(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `∫|ψ|² dx` by the (periodic) trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.axis.dx
    }

    /// `⟨self, other⟩ = ∫ conj(self)·other dx`; axes must agree.
    pub fn inner(&self, other: &GridState) -> Result<C64> {
        self.check_same_axis(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.axis.dx)
    }

    pub fn check_same_axis(&self, other: &GridState) -> Result<()> {
        let a = &self.axis;
        let b = &other.axis;
        let tol = 1e-12 * a.period().abs().max(1.0);
        if a.len != b.len || (a.x_min - b.x_min).abs() > tol || (a.dx - b.dx).abs() > tol / a.len.max(1) as f64 {
            return Err(Error::GridMismatch(format!("{a:?} vs {b:?}")));
        }
        Ok(())
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest amplitude among the two outermost points on each side.
    pub fn edge_amplitude(&self) -> f64 {
        let n = self.samples.len();
        let take = n.min(2);
        self.samples[..take]
            .iter()
            .chain(&self.samples[n - take..])
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Error unless the amplitude at the window edges is below `rel_tol`
    /// times the peak amplitude.
    pub fn check_boundary(&self, rel_tol: f64) -> Result<()> {
        let peak = self.peak_amplitude();
        let edge = self.edge_amplitude();
        if edge > rel_tol * peak {
            return Err(Error::Accuracy(format!(
                "edge amplitude {edge:e} exceeds {rel_tol:e} x peak {peak:e}; widen the window"
            )));
        }
        Ok(())
    }

    /// Error unless the outer 10% of the spectrum carries less than
    /// `rel_tol` of the peak spectral amplitude.
    pub fn check_resolution(&self, rel_tol: f64) -> Result<()> {
        let tail = spectral_tail(&self.samples, &self.axis);
        if tail > rel_tol {
            return Err(Error::UnderResolved(format!(
                "spectral tail {tail:e} exceeds {rel_tol:e}; increase the number of points (dx = {})",
                self.axis.dx
            )));
        }
        Ok(())
    }

    pub fn scale(&mut self, c: C64) {
        self.samples.iter_mut().for_each(|v| *v *= c);
    }

    /// Band-limited (trigonometric) interpolation onto `target`. Points
    /// outside the source window are set to zero.
    pub fn resample(&self, target: Axis) -> GridState {
        self.resample_with(Exec::default(), target)
    }

    pub fn resample_with(&self, exec: Exec, target: Axis) -> GridState {
        let interp = BandLimited::new(&self.samples, &self.axis);
        let samples = par::map_indexed(exec, target.len, |j| interp.eval(target.x(j)));
        GridState {
            samples,
            axis: target,
            t: self.t,
            scales: self.scales,
        }
    }
}

/// Relative spectral amplitude in the outer 10% of wavenumbers.
pub(crate) fn spectral_tail(samples: &[C64], axis: &Axis) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let sp = Spectral::new(axis);
    let mut buf = samples.to_vec();
    sp.forward(&mut buf);
    let kmax = axis.k_max();
    let peak = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let tail = buf
        .iter()
        .zip(sp.wavenumbers())
        .filter(|(_, k)| k.abs() >= 0.9 * kmax)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    tail / peak
}

/// Fourier-series evaluation of periodic samples at arbitrary points.
pub struct BandLimited {
    coeffs: Vec<C64>,
    axis: Axis,
}

impl BandLimited {
    pub fn new(samples: &[C64], axis: &Axis) -> Self {
        let sp = Spectral::new(axis);
        let mut coeffs = samples.to_vec();
        sp.forward(&mut coeffs);
        let s = 1.0 / axis.len.max(1) as f64;
        coeffs.iter_mut().for_each(|c| *c *= s);
        Self {
            coeffs,
            axis: *axis,
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let n = self.axis.len;
        if n == 0 {
            return C64::new(0.0, 0.0);
        }
        let u = x - self.axis.x_min;
        let half_dx = 0.5 * self.axis.dx;
        if u < -half_dx || u > self.axis.period() - half_dx {
            return C64::new(0.0, 0.0);
        }
        let dk = 2.0 * PI / self.axis.period();
        // e^{i j dk u} built by multiplication, re-anchored every block
        const BLOCK: usize = 64;
        let step = C64::from_polar(1.0, dk * u);
        let positive = n.div_ceil(2);
        let mut sum = C64::new(0.0, 0.0);
        let mut phase = C64::new(1.0, 0.0);
        for m in 0..positive {
            if m % BLOCK == 0 {
                phase = C64::from_polar(1.0, m as f64 * dk * u);
            }
            sum += self.coeffs[m] * phase;
            if m >= 1 {
                sum += self.coeffs[n - m] * phase.conj();
            }
            phase *= step;
        }
        if n.is_multiple_of(2) {
            let j = n / 2;
            sum += self.coeffs[j] * (j as f64 * dk * u).cos();
        }
        sum
    }
}

/// Tensor-product grid in N dimensions, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGrid {
    pub axes: Vec<Axis>,
}

impl CartesianGrid {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    /// Same symmetric axis repeated `dim` times.
    pub fn cube(dim: usize, half_width: f64, len: usize) -> Result<Self> {
        let axis = Axis::symmetric(half_width, len)?;
        Ok(Self {
            axes: vec![axis; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len).collect()
    }

    pub fn size(&self) -> usize {
        self.axes.iter().map(|a| a.len).product()
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.dx).product()
    }

    /// Coordinates of the flat index `idx`.
    pub fn point(&self, mut idx: usize, out: &mut [f64]) {
        for (d, axis) in self.axes.iter().enumerate().rev() {
            let j = idx % axis.len;
            idx /= axis.len;
            out[d] = axis.x(j);
        }
    }

    fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(|a| a.len).product()
    }
}

/// A complex field sampled on a [`CartesianGrid`] at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianField {
    pub grid: CartesianGrid,
    pub data: Vec<C64>,
    pub t: f64,
}

impl CartesianField {
    pub fn sample<F>(grid: &CartesianGrid, t: f64, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Sync + Send,
    {
        Self::sample_with(Exec::default(), grid, t, f)
    }

    pub fn sample_with<F>(exec: Exec, grid: &CartesianGrid, t: f64, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Sync + Send,
    {
        let dim = grid.dim();
        let data = par::map_indexed(exec, grid.size(), |idx| {
            let mut p = [0.0; 8];
            grid.point(idx, &mut p[..dim]);
            f(&p[..dim])
        });
        Self {
            grid: grid.clone(),
            data,
            t,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// In-place FFT (forward, or inverse with 1/N) along one axis.
    pub fn fft_axis(&mut self, axis: usize, forward: bool) {
        fft_along(Exec::default(), &self.grid, &mut self.data, axis, forward);
    }

    /// Multiplies every sample by `f(j)`, `j` the index along axis `d`.
    pub fn multiply_along<F: Fn(usize) -> C64>(&mut self, d: usize, f: F) {
        scale_along(&self.grid, &mut self.data, d, f);
    }

    /// `∂²ψ/∂x_d²` spectrally.
    pub fn second_derivative(&self, d: usize) -> Vec<C64> {
        let mut buf = self.data.clone();
        fft_along(Exec::default(), &self.grid, &mut buf, d, true);
        let k = self.grid.axes[d].wavenumbers();
        scale_along(&self.grid, &mut buf, d, |j| C64::new(-k[j] * k[j], 0.0));
        fft_along(Exec::default(), &self.grid, &mut buf, d, false);
        buf
    }

    /// `Σ_i ∂²ψ/∂x_i²` spectrally.
    pub fn laplacian(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.data.len()];
        for d in 0..self.grid.dim() {
            let buf = self.second_derivative(d);
            out.iter_mut().zip(&buf).for_each(|(o, b)| *o += b);
        }
        out
    }

    /// `⟨x_d⟩` and `⟨x_d²⟩` (normalized by the field norm).
    pub fn position_moments(&self, d: usize) -> (f64, f64) {
        let axis = &self.grid.axes[d];
        let stride = self.grid.stride(d);
        let (mut w, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (idx, v) in self.data.iter().enumerate() {
            let x = axis.x((idx / stride) % axis.len);
            let p = v.norm_sqr();
            w += p;
            m1 += x * p;
            m2 += x * x * p;
        }
        (m1 / w, m2 / w)
    }

    /// `⟨k_d⟩` and `⟨k_d²⟩` from the spectrum along axis `d`.
    pub fn wavenumber_moments(&self, d: usize) -> (f64, f64) {
        let mut buf = self.data.clone();
        fft_along(Exec::default(), &self.grid, &mut buf, d, true);
        let axis = &self.grid.axes[d];
        let k = axis.wavenumbers();
        let stride = self.grid.stride(d);
        let (mut w, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (idx, v) in buf.iter().enumerate() {
            let kk = k[(idx / stride) % axis.len];
            let p = v.norm_sqr();
            w += p;
            m1 += kk * p;
            m2 += kk * kk * p;
        }
        (m1 / w, m2 / w)
    }

    /// Largest amplitude on the boundary faces relative to the peak.
    pub fn relative_edge_amplitude(&self) -> f64 {
        let dim = self.grid.dim();
        let mut edge: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for (idx, v) in self.data.iter().enumerate() {
            let a = v.norm();
            peak = peak.max(a);
            let mut rem = idx;
            let mut on_edge = false;
            for d in (0..dim).rev() {
                let len = self.grid.axes[d].len;
                let j = rem % len;
                rem /= len;
                if j == 0 || j + 1 == len {
                    on_edge = true;
                }
            }
            if on_edge {
                edge = edge.max(a);
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }
}

fn scale_along<F: Fn(usize) -> C64>(grid: &CartesianGrid, data: &mut [C64], axis: usize, f: F) {
    let len = grid.axes[axis].len;
    let stride = grid.stride(axis);
    for (idx, v) in data.iter_mut().enumerate() {
        *v *= f((idx / stride) % len);
    }
}

pub(crate) fn fft_along(exec: Exec, grid: &CartesianGrid, data: &mut [C64], axis: usize, forward: bool) {
    let len = grid.axes[axis].len;
    let stride = grid.stride(axis);
    let mut planner = FftPlanner::new();
    let plan = if forward {
        planner.plan_fft_forward(len)
    } else {
        planner.plan_fft_inverse(len)
    };
    let scale = if forward { 1.0 } else { 1.0 / len as f64 };
    // each block of len*stride elements holds `stride` independent lines
    let block = len * stride;
    par::for_each_chunk_mut(exec, data, block, |_, chunk| {
        let mut line = vec![C64::new(0.0, 0.0); len];
        for s in 0..stride {
            for (j, v) in line.iter_mut().enumerate() {
                *v = chunk[j * stride + s];
            }
            plan.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                chunk[j * stride + s] = *v * scale;
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_state(axis: Axis) -> GridState {
        let s = PhysicalScales::natural(1.0).unwrap();
        GridState::from_fn(axis, 0.0, s, |x| C64::new((-x * x).exp(), 0.3 * x * (-x * x).exp()))
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let axis = Axis::symmetric(12.0, 256).unwrap();
        let sp = Spectral::new(&axis);
        let f: Vec<C64> = axis.points().iter().map(|x| C64::new((-x * x).exp(), 0.0)).collect();
        let d1 = sp.derivative(&f, 1);
        let d2 = sp.derivative(&f, 2);
        for (j, x) in axis.points().iter().enumerate() {
            let g = (-x * x).exp();
            assert!((d1[j].re + 2.0 * x * g).abs() < 1e-12);
            assert!((d2[j].re - (4.0 * x * x - 2.0) * g).abs() < 1e-11);
        }
    }

    #[test]
    fn band_limited_resampling_reproduces_smooth_function() {
        for len in [255usize, 256] {
            let axis = Axis::symmetric(10.0, len).unwrap();
            let st = gaussian_state(axis);
            let target = Axis::spanning(-7.3, 6.1, 333).unwrap();
            let r = st.resample(target);
            for (j, x) in target.points().iter().enumerate() {
                let exact = C64::new((-x * x).exp(), 0.3 * x * (-x * x).exp());
                assert!((r.samples[j] - exact).norm() < 1e-12, "len={len} x={x}");
            }
        }
    }

    #[test]
    fn resample_outside_window_is_zero() {
        let axis = Axis::symmetric(5.0, 64).unwrap();
        let st = gaussian_state(axis);
        let r = st.resample(Axis::spanning(20.0, 30.0, 4).unwrap());
        assert!(r.samples.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn boundary_and_resolution_checks() {
        let st = gaussian_state(Axis::symmetric(3.0, 128).unwrap());
        assert!(st.check_boundary(1e-12).is_err());
        let st = gaussian_state(Axis::symmetric(12.0, 128).unwrap());
        assert!(st.check_boundary(1e-12).is_ok());
        assert!(st.check_resolution(1e-10).is_ok());
        let coarse = gaussian_state(Axis::symmetric(12.0, 16).unwrap());
        assert!(matches!(coarse.check_resolution(1e-10), Err(Error::UnderResolved(_))));
    }

    #[test]
    fn inner_rejects_mismatched_axes() {
        let a = gaussian_state(Axis::symmetric(10.0, 64).unwrap());
        let b = gaussian_state(Axis::symmetric(11.0, 64).unwrap());
        assert!(matches!(a.inner(&b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn nd_fft_roundtrip_and_laplacian() {
        let grid = CartesianGrid::new(vec![
            Axis::symmetric(8.0, 128).unwrap(),
            Axis::symmetric(9.0, 150).unwrap(),
        ]);
        let f = CartesianField::sample(&grid, 0.0, |p| C64::new((-(p[0] * p[0] + 2.0 * p[1] * p[1])).exp(), 0.0));
        let mut g = f.clone();
        g.fft_axis(1, true);
        g.fft_axis(0, true);
        g.fft_axis(0, false);
        g.fft_axis(1, false);
        for (a, b) in f.data.iter().zip(&g.data) {
            assert!((a - b).norm() < 1e-14);
        }
        let lap = f.laplacian();
        let mut p = [0.0; 2];
        for (idx, v) in lap.iter().enumerate() {
            grid.point(idx, &mut p);
            let e = (-(p[0] * p[0] + 2.0 * p[1] * p[1])).exp();
            let exact = (4.0 * p[0] * p[0] - 2.0) * e + (16.0 * p[1] * p[1] - 4.0) * e;
            assert!((v.re - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn sequential_and_parallel_sampling_agree() {
        let grid = CartesianGrid::cube(3, 4.0, 12).unwrap();
        let f = |p: &[f64]| C64::new(p[0].sin() * p[1], p[2].cos());
        let a = CartesianField::sample_with(Exec::Sequential, &grid, 0.0, f);
        let b = CartesianField::sample_with(Exec::default(), &grid, 0.0, f);
        assert_eq!(a, b);
    }
}
