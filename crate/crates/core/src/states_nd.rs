//! Multi-dimensional free packets: Cartesian products of 1D states, 2D
//! Laguerre-Gauss states `ψ^±_{n,l}` and 3D spherical-Gauss states
//! `ψ_{n,l,m}`.
//!
//! **Spherical radial index.** The spherical family keeps the radial label
//! `n ≥ 1`; the polynomial degree is `n − 1`.
//!
//! Normalizations: the Laguerre-Gauss prefactor carries `1/(√2 L|δ|)` (the
//! square root of `1/(2L²|δ|²)`), and the spherical prefactor carries
//! `(L|δ|)^{-3/2}`; both verified by quadrature below.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, CartesianField, CartesianGrid, Spectral};
use crate::observables::NORM_DEFICIT_TOL;
use crate::quadrature::gauss_legendre;
use crate::scales::PhysicalScales;
use crate::special_fn::{confluent_m, generalized_laguerre, ln_gamma, spherical_harmonic};
use crate::states::StateSpec1D;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Plus => 1.0,
            Chirality::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpecND {
    Cartesian(Vec<StateSpec1D>),
    Polar {
        n: usize,
        l: usize,
        chirality: Chirality,
        scales: PhysicalScales,
    },
    Spherical {
        n: usize,
        l: usize,
        m: i64,
        scales: PhysicalScales,
    },
}

impl StateSpecND {
    pub fn cartesian(axes: Vec<StateSpec1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Domain("a Cartesian state needs at least one axis".into()));
        }
        let hbar = axes[0].scales().hbar();
        if axes.iter().any(|a| a.scales().hbar() != hbar) {
            return Err(Error::Domain("all axes must share ħ".into()));
        }
        Ok(Self::Cartesian(axes))
    }

    pub fn polar(n: usize, l: usize, chirality: Chirality, scales: PhysicalScales) -> Self {
        Self::Polar {
            n,
            l,
            chirality,
            scales,
        }
    }

    /// `n ≥ 1` and `|m| ≤ l`.
    pub fn spherical(n: usize, l: usize, m: i64, scales: PhysicalScales) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("spherical radial index starts at n = 1".into()));
        }
        if m.unsigned_abs() as usize > l {
            return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(Self::Spherical { n, l, m, scales })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Cartesian(a) => a.len(),
            Self::Polar { .. } => 2,
            Self::Spherical { .. } => 3,
        }
    }

    fn scales_of_axis(&self, d: usize) -> &PhysicalScales {
        match self {
            Self::Cartesian(a) => a[d].scales(),
            Self::Polar { scales, .. } | Self::Spherical { scales, .. } => scales,
        }
    }

    /// Oscillator energy `E` of the parent eigenstate; the free packet has
    /// `⟨Ĥ⟩ = E/2` when undisplaced and unsqueezed.
    pub fn oscillator_energy(&self) -> f64 {
        match self {
            Self::Cartesian(a) => a
                .iter()
                .map(|s| s.scales().hbar() * s.scales().omega() * (s.n() as f64 + 0.5))
                .sum(),
            Self::Polar { n, l, scales, .. } => scales.hbar() * scales.omega() * (2 * n + l + 1) as f64,
            Self::Spherical { n, l, scales, .. } => {
                scales.hbar() * scales.omega() * (2.0 * (n - 1) as f64 + *l as f64 + 1.5)
            }
        }
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Result<C64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x, t))
    }

    fn eval_unchecked(&self, x: &[f64], t: f64) -> C64 {
        match self {
            Self::Cartesian(axes) => axes.iter().zip(x).map(|(s, &xi)| s.eval(xi, t)).product(),
            Self::Polar { .. } => {
                let (r, phi) = (x[0].hypot(x[1]), x[1].atan2(x[0]));
                self.eval_polar(r, phi, t)
            }
            Self::Spherical { .. } => {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let theta = if r > 0.0 { (x[2] / r).clamp(-1.0, 1.0).acos() } else { 0.0 };
                self.eval_spherical(r, theta, x[1].atan2(x[0]), t)
            }
        }
    }

    /// Laguerre-Gauss amplitude in polar coordinates (zero for other
    /// geometries).
    pub fn eval_polar(&self, r: f64, phi: f64, t: f64) -> C64 {
        let Self::Polar {
            n,
            l,
            chirality,
            scales,
        } = self
        else {
            return C64::new(0.0, 0.0);
        };
        let (n, l) = (*n, *l);
        self.radial(r, t) * C64::from_polar(1.0, chirality.sign() * l as f64 * phi)
            * scales.delta(t).unit_conj_pow((2 * n + l + 1) as f64)
    }

    /// Spherical-Gauss amplitude (zero for other geometries).
    pub fn eval_spherical(&self, r: f64, theta: f64, phi: f64, t: f64) -> C64 {
        let Self::Spherical { n, l, m, scales } = self else {
            return C64::new(0.0, 0.0);
        };
        let y = spherical_harmonic(*l as i64, *m, theta, phi).expect("indices validated at construction");
        let power = 2.0 * (n - 1) as f64 + *l as f64 + 1.5;
        self.radial(r, t) * y * scales.delta(t).unit_conj_pow(power)
    }

    /// Radial factor including the complex Gaussian, without the global
    /// `(δ*/|δ|)^p` phase and the angular part.
    fn radial(&self, r: f64, t: f64) -> C64 {
        let (scales, l, norm, poly): (&PhysicalScales, usize, f64, f64) = match self {
            Self::Cartesian(_) => return C64::new(0.0, 0.0),
            Self::Polar { n, l, scales, .. } => {
                let b = SQRT_2 * scales.length() * scales.delta(t).modulus();
                let rho2 = (r / b).powi(2);
                let lnnorm = 0.5 * (ln_gamma(*n as f64 + 1.0) - ln_gamma((n + l) as f64 + 1.0) - PI.ln());
                (scales, *l, lnnorm.exp() / b, generalized_laguerre(*n, *l as f64, rho2))
            }
            Self::Spherical { n, l, scales, .. } => {
                let k = n - 1;
                let lb = scales.length() * scales.delta(t).modulus();
                let b = SQRT_2 * lb;
                let rho2 = (r / b).powi(2);
                let a = *l as f64 + 1.5;
                let lnnorm = 0.5
                    * (ln_gamma(k as f64 + a) - 0.5 * 2f64.ln() - ln_gamma(k as f64 + 1.0) - 2.0 * ln_gamma(a));
                let m = confluent_m(-(k as f64), a, rho2).expect("b = l + 3/2 is never a pole").value;
                (scales, *l, lnnorm.exp() * lb.powf(-1.5), m)
            }
        };
        let lbar = scales.length();
        let d = scales.delta(t);
        let b = SQRT_2 * lbar * d.modulus();
        let gauss = (-(r * r) * d.conj() / (4.0 * lbar * lbar * d.modulus_sqr())).exp();
        norm * (r / b).powi(l as i32) * poly * gauss
    }

    pub fn sample(&self, grid: &CartesianGrid, t: f64) -> Result<CartesianField> {
        if grid.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: grid.dim(),
            });
        }
        Ok(CartesianField::sample(grid, t, |p| self.eval_unchecked(p, t)))
    }

    /// Largest radius (from the packet centre) where the state is not yet
    /// negligible, in units of `√2 L|δ|`.
    fn reach(&self) -> f64 {
        let e = match self {
            Self::Cartesian(_) => 0.0,
            Self::Polar { n, l, .. } => (2 * n + l + 1) as f64,
            Self::Spherical { n, l, .. } => 2.0 * (n - 1) as f64 + *l as f64 + 1.5,
        };
        (2.0 * e).sqrt() + 8.0
    }

    /// Grid that holds and resolves the state at time `t`, with at least
    /// `min_len` points per axis.
    pub fn suggested_grid(&self, t: f64, min_len: usize) -> CartesianGrid {
        match self {
            Self::Cartesian(a) => CartesianGrid::new(a.iter().map(|s| s.suggested_axis(t, min_len)).collect()),
            Self::Polar { scales, .. } | Self::Spherical { scales, .. } => {
                let reach = self.reach();
                let half = SQRT_2 * scales.length() * scales.delta(t).modulus() * reach;
                let k_need = reach / (SQRT_2 * scales.length());
                let len = ((2.0 * half * k_need / PI).ceil() as usize).max(min_len);
                let len = len + len % 2;
                CartesianGrid::cube(self.dim(), half, len).expect("finite window")
            }
        }
    }

    /// `⟨a|b⟩` by tensor (Cartesian) or radial × angular quadrature. Both
    /// states must share the geometry and, for polar/spherical, the scales.
    pub fn inner(&self, other: &StateSpecND, t: f64) -> Result<C64> {
        match (self, other) {
            (Self::Cartesian(a), Self::Cartesian(b)) => {
                if a.len() != b.len() {
                    return Err(Error::DimensionMismatch {
                        expected: a.len(),
                        got: b.len(),
                    });
                }
                let mut prod = C64::new(1.0, 0.0);
                for (sa, sb) in a.iter().zip(b) {
                    let ax = wider(sa.suggested_axis(t, 1024), sb.suggested_axis(t, 1024));
                    prod *= sa.sample(ax, t).inner(&sb.sample(ax, t))?;
                }
                Ok(prod)
            }
            (Self::Polar { scales: s1, .. }, Self::Polar { scales: s2, .. })
            | (Self::Spherical { scales: s1, .. }, Self::Spherical { scales: s2, .. }) => {
                if s1 != s2 {
                    return Err(Error::Domain("quadrature overlap needs equal scales".into()));
                }
                let rmax = SQRT_2 * s1.length() * s1.delta(t).modulus() * self.reach().max(other.reach());
                let (rs, rw) = gauss_legendre(160, 0.0, rmax);
                let nphi = 64;
                let dphi = 2.0 * PI / nphi as f64;
                let mut acc = C64::new(0.0, 0.0);
                if self.dim() == 2 {
                    for (r, w) in rs.iter().zip(&rw) {
                        for j in 0..nphi {
                            let phi = j as f64 * dphi;
                            acc += w * r * dphi * self.eval_polar(*r, phi, t).conj() * other.eval_polar(*r, phi, t);
                        }
                    }
                } else {
                    let (cs, cw) = gauss_legendre(48, -1.0, 1.0);
                    for (r, w) in rs.iter().zip(&rw) {
                        for (c, wc) in cs.iter().zip(&cw) {
                            let theta = c.acos();
                            for j in 0..nphi {
                                let phi = j as f64 * dphi;
                                acc += w * r * r * wc * dphi
                                    * self.eval_spherical(*r, theta, phi, t).conj()
                                    * other.eval_spherical(*r, theta, phi, t);
                            }
                        }
                    }
                }
                Ok(acc)
            }
            _ => Err(Error::Domain("overlap between different geometries".into())),
        }
    }

    pub fn norm_sqr(&self, t: f64) -> Result<f64> {
        Ok(self.inner(self, t)?.re)
    }
}

fn wider(a: Axis, b: Axis) -> Axis {
    let lo = a.x_min.min(b.x_min);
    let hi = a.x_max().max(b.x_max());
    let dx = a.dx.min(b.dx);
    let len = (((hi - lo) / dx).ceil() as usize + 1).next_power_of_two();
    Axis::spanning(lo, lo + len as f64 * dx, len).expect("finite window")
}

/// Rayleigh quotient of `L̂ = −iħ∂φ` for a polar state, with ∂φ applied
/// spectrally on each ring and Gauss-Legendre radial weights.
pub fn angular_momentum_check(spec: &StateSpecND, t: f64) -> Result<f64> {
    let StateSpecND::Polar { scales, .. } = spec else {
        return Err(Error::Domain("angular momentum check needs a polar state".into()));
    };
    let rmax = SQRT_2 * scales.length() * scales.delta(t).modulus() * spec.reach();
    let (rs, rw) = gauss_legendre(120, 0.0, rmax);
    let nphi = 64;
    let ring = Axis::new(0.0, 2.0 * PI / nphi as f64, nphi)?;
    let spectral = Spectral::new(&ring);
    let (mut num, mut den) = (C64::new(0.0, 0.0), 0.0);
    for (r, w) in rs.iter().zip(&rw) {
        let psi: Vec<C64> = (0..nphi).map(|j| spec.eval_polar(*r, ring.x(j), t)).collect();
        let d = spectral.derivative(&psi, 1);
        for (p, dp) in psi.iter().zip(&d) {
            num += w * r * p.conj() * C64::new(0.0, -scales.hbar()) * dp;
            den += w * r * p.norm_sqr();
        }
    }
    Ok(num.re / den)
}

fn check_norm(field: &CartesianField) -> Result<f64> {
    let norm = field.norm_sqr();
    if (norm - 1.0).abs() > NORM_DEFICIT_TOL {
        return Err(Error::UnderResolved(format!(
            "grid norm {norm} deviates from 1 by more than {NORM_DEFICIT_TOL}"
        )));
    }
    Ok(norm)
}

/// `⟨Ĥ⟩ = Σ_d ⟨p_d²⟩/2m_d` by spectral quadrature on `grid`.
pub fn energy_expectation(spec: &StateSpecND, t: f64, grid: &CartesianGrid) -> Result<f64> {
    let field = spec.sample(grid, t)?;
    check_norm(&field)?;
    let mut e = 0.0;
    for d in 0..spec.dim() {
        let s = spec.scales_of_axis(d);
        let (_, k2) = field.wavenumber_moments(d);
        e += s.hbar() * s.hbar() * k2 / (2.0 * s.mass());
    }
    Ok(e)
}

/// Per-axis `(Δx_d, Δp_d)` by grid quadrature.
pub fn uncertainties(spec: &StateSpecND, t: f64, grid: &CartesianGrid) -> Result<Vec<(f64, f64)>> {
    let field = spec.sample(grid, t)?;
    check_norm(&field)?;
    Ok((0..spec.dim())
        .map(|d| {
            let hbar = spec.scales_of_axis(d).hbar();
            let (x1, x2) = field.position_moments(d);
            let (k1, k2) = field.wavenumber_moments(d);
            ((x2 - x1 * x1).max(0.0).sqrt(), hbar * (k2 - k1 * k1).max(0.0).sqrt())
        })
        .collect())
}

/// Relative TDSE residual `‖iħ∂tψ + Σ_d (ħ²/2m_d)∂²_dψ‖ / (ħω‖ψ‖)`, with
/// `ω` of the first axis.
pub fn tdse_residual_nd(spec: &StateSpecND, t: f64, grid: &CartesianGrid) -> Result<f64> {
    let s0 = *spec.scales_of_axis(0);
    let h = 1e-5 * s0.tau();
    let field = spec.sample(grid, t)?;
    let fwd = spec.sample(grid, t + h)?;
    let bwd = spec.sample(grid, t - h)?;
    let mut res: Vec<C64> = fwd
        .data
        .iter()
        .zip(&bwd.data)
        .map(|(f, b)| C64::new(0.0, s0.hbar()) * (f - b) / (2.0 * h))
        .collect();
    for d in 0..spec.dim() {
        let s = spec.scales_of_axis(d);
        let c = s.hbar() * s.hbar() / (2.0 * s.mass());
        for (r, v) in res.iter_mut().zip(field.second_derivative(d)) {
            *r += c * v;
        }
    }
    let num: f64 = res.iter().map(|v| v.norm_sqr()).sum();
    let den: f64 = field.data.iter().map(|v| v.norm_sqr()).sum();
    Ok((num / den).sqrt() / (s0.hbar() * s0.omega()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn l_one() -> PhysicalScales {
        PhysicalScales::natural(0.5).unwrap()
    }

    fn unit() -> PhysicalScales {
        PhysicalScales::natural(1.0).unwrap()
    }

    #[test]
    fn cartesian_examples() {
        let s = l_one();
        let vac = StateSpecND::cartesian(vec![StateSpec1D::basis(0, s); 2]).unwrap();
        assert_relative_eq!(vac.eval(&[0.0, 0.0], 0.0).unwrap().re, 1.0 / (2.0 * PI).sqrt(), max_relative = 1e-15);
        assert!(matches!(vac.eval(&[0.0], 0.0), Err(Error::DimensionMismatch { .. })));
        let odd = StateSpecND::cartesian(vec![StateSpec1D::basis(1, s); 2]).unwrap();
        for k in -5..=5 {
            assert_eq!(odd.eval(&[k as f64, 0.0], 0.7).unwrap().norm(), 0.0);
            assert_eq!(odd.eval(&[0.0, k as f64], 0.7).unwrap().norm(), 0.0);
        }
        // ψ_(1,0): two maxima along axis 1
        let s10 = StateSpecND::cartesian(vec![StateSpec1D::basis(1, s), StateSpec1D::basis(0, s)]).unwrap();
        let line: Vec<f64> = (-200..=200).map(|j| s10.eval(&[0.05 * j as f64, 0.0], 0.0).unwrap().norm_sqr()).collect();
        assert_eq!(crate::observables::count_humps(&line), 2);
    }

    #[test]
    fn polar_examples() {
        let s = l_one();
        let g = StateSpecND::polar(0, 0, Chirality::Plus, s);
        assert_relative_eq!(g.eval(&[0.0, 0.0], 0.0).unwrap().re, (1.0 / (2.0 * PI)).sqrt(), max_relative = 1e-14);
        // matches the Cartesian vacuum everywhere
        let c = StateSpecND::cartesian(vec![StateSpec1D::basis(0, s); 2]).unwrap();
        for &t in &[0.0, 1.3] {
            for &(x, y) in &[(0.3, -0.2), (1.5, 0.7), (-2.0, 1.0)] {
                assert!((g.eval(&[x, y], t).unwrap() - c.eval(&[x, y], t).unwrap()).norm() < 1e-15);
            }
        }
        let v = StateSpecND::polar(0, 1, Chirality::Plus, s);
        assert_eq!(v.eval_polar(0.0, 0.3, 0.5).norm(), 0.0);
        let ratio = v.eval_polar(0.8, 1.1, 0.0) / v.eval_polar(0.8, 0.0, 0.0);
        assert!((ratio - C64::from_polar(1.0, 1.1)).norm() < 1e-14);
        let radial = |spec: &StateSpecND| -> Vec<f64> { (0..=400).map(|j| spec.eval_polar(0.02 * j as f64, 0.0, 0.0).norm_sqr()).collect() };
        assert_eq!(crate::observables::count_humps(&radial(&v)), 1);
        assert_eq!(crate::observables::count_humps(&radial(&StateSpecND::polar(1, 1, Chirality::Minus, s))), 2);
    }

    #[test]
    fn spherical_examples() {
        let s = l_one();
        assert!(StateSpecND::spherical(0, 0, 0, s).is_err());
        assert!(StateSpecND::spherical(1, 1, 2, s).is_err());
        let g = StateSpecND::spherical(1, 0, 0, s).unwrap();
        let a = g.eval_spherical(0.7, 0.3, 1.0, 0.4);
        let b = g.eval_spherical(0.7, 2.1, -2.0, 0.4);
        assert!((a - b).norm() < 1e-15);
        // 3D Gaussian equals the product of three 1D vacua
        let c = StateSpecND::cartesian(vec![StateSpec1D::basis(0, s); 3]).unwrap();
        for &p in &[[0.1, 0.2, -0.3], [1.0, -1.0, 0.5]] {
            assert!((g.eval(&p, 0.9).unwrap() - c.eval(&p, 0.9).unwrap()).norm() < 1e-14);
        }
        let p = StateSpecND::spherical(1, 1, 0, s).unwrap();
        assert!(p.eval_spherical(1.0, PI / 2.0, 0.4, 0.3).norm() < 1e-16);
    }

    #[test]
    fn quadrature_norms() {
        let s = unit();
        for &t in &[0.0, 1.0] {
            for n in 0..=4 {
                for l in 0..=4 {
                    for ch in [Chirality::Plus, Chirality::Minus] {
                        let v = StateSpecND::polar(n, l, ch, s).norm_sqr(t).unwrap();
                        assert!((v - 1.0).abs() < 1e-8, "polar n={n} l={l} t={t}: {v}");
                    }
                }
            }
            for n in 1..=4 {
                for l in 0..=3 {
                    for m in -(l as i64)..=(l as i64) {
                        let v = StateSpecND::spherical(n, l, m, s).unwrap().norm_sqr(t).unwrap();
                        assert!((v - 1.0).abs() < 1e-8, "spherical n={n} l={l} m={m}: {v}");
                    }
                }
            }
            let c = StateSpecND::cartesian(vec![
                StateSpec1D::basis(2, s),
                StateSpec1D::from_phase_space(1, 0.5, -1.0, 0.3, PhysicalScales::natural(2.0).unwrap()).unwrap(),
            ])
            .unwrap();
            assert!((c.norm_sqr(t).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn polar_orthogonality() {
        let s = unit();
        let mut labels = Vec::new();
        for n in 0..=2 {
            for l in 0..=2 {
                for ch in [Chirality::Plus, Chirality::Minus] {
                    if l == 0 && ch == Chirality::Minus {
                        continue;
                    }
                    labels.push(StateSpecND::polar(n, l, ch, s));
                }
            }
        }
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                assert!(a.inner(b, 0.8).unwrap().norm() < 1e-8);
            }
        }
    }

    #[test]
    fn angular_momentum_eigenvalues() {
        let s = unit();
        for (n, l, ch, want) in [
            (0, 1, Chirality::Plus, 1.0),
            (0, 0, Chirality::Plus, 0.0),
            (1, 2, Chirality::Minus, -2.0),
            (2, 3, Chirality::Plus, 3.0),
        ] {
            let got = angular_momentum_check(&StateSpecND::polar(n, l, ch, s), 1.0).unwrap();
            assert!((got - want * s.hbar()).abs() < 1e-8);
        }
        let sph = StateSpecND::spherical(1, 0, 0, s).unwrap();
        assert!(angular_momentum_check(&sph, 0.0).is_err());
    }

    #[test]
    fn energy_table_examples() {
        let s = unit();
        let c = StateSpecND::cartesian(vec![StateSpec1D::basis(0, s); 2]).unwrap();
        let e = energy_expectation(&c, 0.0, &c.suggested_grid(0.0, 64)).unwrap();
        assert_relative_eq!(e, 0.5, max_relative = 1e-8);

        let p = StateSpecND::polar(1, 1, Chirality::Plus, s);
        let e = energy_expectation(&p, 1.0, &p.suggested_grid(1.0, 64)).unwrap();
        assert_relative_eq!(e, 2.0, max_relative = 1e-8);
        assert_relative_eq!(p.oscillator_energy(), 4.0);

        let sp = StateSpecND::spherical(1, 0, 0, s).unwrap();
        let e = energy_expectation(&sp, 0.0, &sp.suggested_grid(0.0, 32)).unwrap();
        assert_relative_eq!(e, 0.75, max_relative = 1e-8);

        let coarse = CartesianGrid::cube(2, 1.0, 16).unwrap();
        assert!(matches!(energy_expectation(&p, 0.0, &coarse), Err(Error::UnderResolved(_))));
    }

    #[test]
    fn nd_uncertainty_and_tdse() {
        let s = unit();
        let p = StateSpecND::polar(1, 2, Chirality::Minus, s);
        for &t in &[0.0, 1.0] {
            let d = s.delta(t).modulus();
            let g = p.suggested_grid(t, 64);
            let u = uncertainties(&p, t, &g).unwrap();
            let want = d * p.oscillator_energy() / (2.0 * s.omega());
            for (dx, dp) in u {
                assert_relative_eq!(dx * dp, want, max_relative = 1e-6);
            }
            assert!(tdse_residual_nd(&p, t, &g).unwrap() < 1e-5);
        }
        let c = StateSpecND::cartesian(vec![StateSpec1D::basis(1, s), StateSpec1D::basis(3, PhysicalScales::natural(0.5).unwrap())]).unwrap();
        let g = c.suggested_grid(0.7, 64);
        assert!(tdse_residual_nd(&c, 0.7, &g).unwrap() < 1e-5);
    }
}
