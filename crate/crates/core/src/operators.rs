//! Conserved operators of the free particle and the Schrödinger algebra.
//!
//! An operator is a finite sum of products of elementary actions, all frozen
//! at one time `t` (the conserved operators carry explicit t-dependence).
//! Derivatives are spectral; composition is successive application.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, GridState, Spectral};
use crate::scales::PhysicalScales;
use crate::C64;

/// Relative edge amplitude above which an input violates periodicity.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Identity,
    /// Multiplication by x.
    Position,
    /// ∂/∂x.
    Derivative,
    /// X̂ = x + (iħt/m)∂x.
    X,
    /// P̂ = −iħ∂x.
    P,
    /// â = Lδ∂x + x/2L.
    A,
    /// â† = −Lδ*∂x + x/2L.
    Adag,
    /// Second-order number operator, eigenvalues n + ½.
    N,
    P2,
    X2,
    /// Symmetrized dilation ½(X̂P̂ + P̂X̂).
    XP,
    /// Free Hamiltonian P̂²/2m.
    H,
}

impl OpKind {
    pub const ALL: [OpKind; 12] = [
        OpKind::Identity,
        OpKind::Position,
        OpKind::Derivative,
        OpKind::X,
        OpKind::P,
        OpKind::A,
        OpKind::Adag,
        OpKind::N,
        OpKind::P2,
        OpKind::X2,
        OpKind::XP,
        OpKind::H,
    ];
}

/// `Σ_k c_k · (O_k1 ∘ O_k2 ∘ …)` with the rightmost factor applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator1D {
    terms: Vec<(C64, Vec<OpKind>)>,
    scales: PhysicalScales,
    t: f64,
}

impl LinearOperator1D {
    pub fn new(kind: OpKind, scales: PhysicalScales, t: f64) -> Self {
        Self {
            terms: vec![(C64::new(1.0, 0.0), vec![kind])],
            scales,
            t,
        }
    }

    pub fn zero(scales: PhysicalScales, t: f64) -> Self {
        Self {
            terms: Vec::new(),
            scales,
            t,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn scales(&self) -> &PhysicalScales {
        &self.scales
    }

    pub fn scaled(mut self, c: C64) -> Self {
        for term in &mut self.terms {
            term.0 *= c;
        }
        self
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn minus(self, other: &Self) -> Self {
        self.plus(&other.clone().scaled(C64::new(-1.0, 0.0)))
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                let mut p = pa.clone();
                p.extend_from_slice(pb);
                terms.push((ca * cb, p));
            }
        }
        Self {
            terms,
            scales: self.scales,
            t: self.t,
        }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.then_after(other).minus(&other.then_after(self))
    }

    /// Applies the operator; the state must live at the operator's time and
    /// be negligible at the window edges.
    pub fn apply(&self, state: &GridState) -> Result<GridState> {
        let tol = 1e-12 * self.t.abs().max(self.scales.tau());
        if (state.t - self.t).abs() > tol {
            return Err(Error::Domain(format!(
                "operator frozen at t = {} applied to a state at t = {}",
                self.t, state.t
            )));
        }
        state.check_boundary(BOUNDARY_TOL)?;
        Ok(self.apply_unchecked(state))
    }

    pub fn apply_unchecked(&self, state: &GridState) -> GridState {
        let ctx = Ctx::new(&state.axis, &self.scales, self.t);
        let mut out = vec![C64::new(0.0, 0.0); state.len()];
        for (c, product) in &self.terms {
            let mut v = state.samples.clone();
            for kind in product.iter().rev() {
                v = ctx.elementary(*kind, &v);
            }
            for (o, x) in out.iter_mut().zip(&v) {
                *o += c * x;
            }
        }
        GridState {
            samples: out,
            axis: state.axis,
            t: state.t,
            scales: state.scales,
        }
    }
}

struct Ctx {
    spectral: Spectral,
    xs: Vec<f64>,
    scales: PhysicalScales,
    t: f64,
}

impl Ctx {
    fn new(axis: &Axis, scales: &PhysicalScales, t: f64) -> Self {
        Self {
            spectral: Spectral::new(axis),
            xs: axis.points(),
            scales: *scales,
            t,
        }
    }

    /// `c_d ∂x v + c_x x v`.
    fn affine(&self, v: &[C64], c_d: C64, c_x: C64) -> Vec<C64> {
        let d = self.spectral.derivative(v, 1);
        v.iter()
            .zip(&d)
            .zip(&self.xs)
            .map(|((v, d), x)| c_d * d + c_x * x * v)
            .collect()
    }

    fn elementary(&self, kind: OpKind, v: &[C64]) -> Vec<C64> {
        let s = &self.scales;
        let (hbar, m, l) = (s.hbar(), s.mass(), s.length());
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let x_coef = C64::new(0.0, hbar * self.t / m);
        let p_coef = C64::new(0.0, -hbar);
        match kind {
            OpKind::Identity => v.to_vec(),
            OpKind::Position => self.affine(v, zero, one),
            OpKind::Derivative => self.affine(v, one, zero),
            OpKind::X => self.affine(v, x_coef, one),
            OpKind::P => self.affine(v, p_coef, zero),
            OpKind::A => self.affine(v, l * s.delta(self.t).value(), C64::new(0.5 / l, 0.0)),
            OpKind::Adag => self.affine(v, -l * s.delta(self.t).conj(), C64::new(0.5 / l, 0.0)),
            OpKind::N => {
                // −|δ|²L²∂² + i(t/τ)(x∂ + ½) + x²/4L²
                let d = self.spectral.derivative(v, 1);
                let d2 = self.spectral.derivative(v, 2);
                let a2 = s.delta(self.t).modulus_sqr() * l * l;
                let it = C64::new(0.0, self.t / s.tau());
                (0..v.len())
                    .map(|j| {
                        let x = self.xs[j];
                        -a2 * d2[j] + it * (x * d[j] + 0.5 * v[j]) + x * x / (4.0 * l * l) * v[j]
                    })
                    .collect()
            }
            OpKind::P2 => {
                let d2 = self.spectral.derivative(v, 2);
                d2.iter().map(|d| -hbar * hbar * d).collect()
            }
            OpKind::X2 => {
                let once = self.affine(v, x_coef, one);
                self.affine(&once, x_coef, one)
            }
            OpKind::XP => {
                let p = self.affine(v, p_coef, zero);
                let xp = self.affine(&p, x_coef, one);
                let x = self.affine(v, x_coef, one);
                let px = self.affine(&x, p_coef, zero);
                xp.iter().zip(&px).map(|(a, b)| 0.5 * (a + b)).collect()
            }
            OpKind::H => {
                let d2 = self.spectral.derivative(v, 2);
                d2.iter().map(|d| -hbar * hbar / (2.0 * m) * d).collect()
            }
        }
    }
}

/// `(1/ħω)(P̂²/2m + mω²X̂²/2)`.
pub fn number_from_algebra(scales: PhysicalScales, t: f64) -> LinearOperator1D {
    let (m, w, hbar) = (scales.mass(), scales.omega(), scales.hbar());
    let p2 = LinearOperator1D::new(OpKind::P2, scales, t).scaled(C64::new(1.0 / (2.0 * m * hbar * w), 0.0));
    let x2 = LinearOperator1D::new(OpKind::X2, scales, t).scaled(C64::new(0.5 * m * w / hbar, 0.0));
    p2.plus(&x2)
}

/// `½(â†â + ââ†)`.
pub fn number_from_ladder(scales: PhysicalScales, t: f64) -> LinearOperator1D {
    let a = LinearOperator1D::new(OpKind::A, scales, t);
    let ad = LinearOperator1D::new(OpKind::Adag, scales, t);
    ad.then_after(&a).plus(&a.then_after(&ad)).scaled(C64::new(0.5, 0.0))
}

/// First-order number operator, valid on TDSE solutions only:
/// `N̂ψ = iτ|δ|²∂tψ + i(t/τ)(x∂xψ + ½ψ) + x²ψ/4L²`, with ∂t a centred
/// difference of step 1e-5 τ on the analytic family `f`.
pub fn number_first_order<F>(f: F, axis: Axis, t: f64, scales: &PhysicalScales) -> GridState
where
    F: Fn(f64, f64) -> C64,
{
    let h = 1e-5 * scales.tau();
    let xs = axis.points();
    let psi: Vec<C64> = xs.iter().map(|&x| f(x, t)).collect();
    let spectral = Spectral::new(&axis);
    let d = spectral.derivative(&psi, 1);
    let l = scales.length();
    let tau = scales.tau();
    let a2 = scales.delta(t).modulus_sqr();
    let it = C64::new(0.0, t / tau);
    let samples = (0..xs.len())
        .map(|j| {
            let x = xs[j];
            let dt = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
            C64::new(0.0, tau * a2) * dt + it * (x * d[j] + 0.5 * psi[j]) + x * x / (4.0 * l * l) * psi[j]
        })
        .collect();
    GridState {
        samples,
        axis,
        t,
        scales: *scales,
    }
}

/// `max_j |a_j − b_j| / max_j |b_j|`.
pub fn max_relative_error(a: &GridState, b: &GridState) -> Result<f64> {
    a.check_same_axis(b)?;
    let peak = b.peak_amplitude();
    let diff = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max);
    Ok(if peak > 0.0 { diff / peak } else { diff })
}

/// One row of the algebra table: `[lhs, rhs] = expected`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorRow {
    pub lhs: OpKind,
    pub rhs: OpKind,
    pub expected: String,
    /// Largest `‖([A,B] − C)ψ‖ / max(‖ABψ‖, ‖BAψ‖)` over the probes.
    pub max_deviation: f64,
}

/// The ten relations of the Schrödinger algebra as `(A, B, C)` with
/// `[A, B] = C`; `C = None` means the pair commutes.
pub fn algebra_table(scales: PhysicalScales, t: f64) -> Vec<(OpKind, OpKind, Option<LinearOperator1D>, &'static str)> {
    let ih = C64::new(0.0, scales.hbar());
    let op = |k| LinearOperator1D::new(k, scales, t);
    use OpKind::*;
    vec![
        (X, P, Some(op(Identity).scaled(ih)), "i hbar"),
        (X, P2, Some(op(P).scaled(2.0 * ih)), "2 i hbar P"),
        (X, XP, Some(op(X).scaled(ih)), "i hbar X"),
        (P, X2, Some(op(X).scaled(-2.0 * ih)), "-2 i hbar X"),
        (P, XP, Some(op(P).scaled(-ih)), "-i hbar P"),
        (X2, P2, Some(op(XP).scaled(4.0 * ih)), "4 i hbar XP"),
        (X2, XP, Some(op(X2).scaled(2.0 * ih)), "2 i hbar X^2"),
        (P2, XP, Some(op(P2).scaled(-2.0 * ih)), "-2 i hbar P^2"),
        (X, X2, None, "0"),
        (P, P2, None, "0"),
    ]
}

/// Evaluates every relation of [`algebra_table`] on the probe states (all
/// at one time `t`).
pub fn commutator_audit(scales: PhysicalScales, t: f64, probes: &[GridState]) -> Result<Vec<CommutatorRow>> {
    for p in probes {
        p.check_boundary(BOUNDARY_TOL)?;
        p.check_resolution(1e-10)?;
    }
    let mut rows = Vec::new();
    for (a, b, expected, label) in algebra_table(scales, t) {
        let oa = LinearOperator1D::new(a, scales, t);
        let ob = LinearOperator1D::new(b, scales, t);
        let mut worst: f64 = 0.0;
        for p in probes {
            let ab = oa.then_after(&ob).apply(p)?;
            let ba = ob.then_after(&oa).apply(p)?;
            let rhs = match &expected {
                Some(e) => e.apply(p)?.samples,
                None => vec![C64::new(0.0, 0.0); p.len()],
            };
            let mut diff = 0.0;
            let mut scale_ab = 0.0;
            let mut scale_ba = 0.0;
            for ((u, v), w) in ab.samples.iter().zip(&ba.samples).zip(&rhs) {
                diff += (u - v - w).norm_sqr();
                scale_ab += u.norm_sqr();
                scale_ba += v.norm_sqr();
            }
            let scale = f64::max(scale_ab, scale_ba).sqrt();
            worst = worst.max(diff.sqrt() / scale);
        }
        rows.push(CommutatorRow {
            lhs: a,
            rhs: b,
            expected: label.to_string(),
            max_deviation: worst,
        });
    }
    Ok(rows)
}
