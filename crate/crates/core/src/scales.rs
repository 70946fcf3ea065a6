//! Unit system and the complex time factors δ = 1 + iωt, δ_r = 1 + i e^{2r} ωt.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::C64;

/// Mass, ħ and oscillator frequency, together with the derived length
/// `L = sqrt(ħ / 2mω)` and dispersion time `τ = 2mL²/ħ = 1/ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScales {
    mass: f64,
    hbar: f64,
    omega: f64,
    length: f64,
    tau: f64,
}

impl PhysicalScales {
    pub fn new(mass: f64, hbar: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("hbar", hbar), ("omega", omega)] {
            ensure_finite(name, v)?;
            if v <= 0.0 {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let length = (hbar / (2.0 * mass * omega)).sqrt();
        Ok(Self {
            mass,
            hbar,
            omega,
            length,
            tau: 1.0 / omega,
        })
    }

    /// ħ = m = 1 with the given frequency.
    pub fn natural(omega: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Packet width `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Dispersion time `τ`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Same mass and ħ, different frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.mass, self.hbar, omega)
    }

    pub fn delta(&self, t: f64) -> DeltaFactor {
        DeltaFactor::new(self.omega, t, 0.0)
    }

    pub fn delta_r(&self, t: f64, r: f64) -> DeltaFactor {
        DeltaFactor::new(self.omega, t, r)
    }
}

/// Shorthand for [`PhysicalScales::new`].
pub fn make_scales(mass: f64, hbar: f64, omega: f64) -> Result<PhysicalScales> {
    PhysicalScales::new(mass, hbar, omega)
}

/// `δ_r(t) = 1 + i e^{2r} ω t`; `r = 0` gives the plain δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFactor {
    value: C64,
    pub t: f64,
    pub omega: f64,
    pub r: f64,
}

impl DeltaFactor {
    pub fn new(omega: f64, t: f64, r: f64) -> Self {
        Self {
            value: C64::new(1.0, (2.0 * r).exp() * omega * t),
            t,
            omega,
            r,
        }
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn conj(&self) -> C64 {
        self.value.conj()
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }

    pub fn modulus_sqr(&self) -> f64 {
        self.value.norm_sqr()
    }

    /// arg δ, always inside (−π/2, π/2) because Re δ = 1.
    pub fn phase(&self) -> f64 {
        self.value.im.atan()
    }

    /// `(δ*/|δ|)^p` as `exp(-i p arg δ)`; no branch cut is crossed.
    pub fn unit_conj_pow(&self, p: f64) -> C64 {
        C64::from_polar(1.0, -p * self.phase())
    }
}

/// δ_r for the given scales; validates finiteness.
pub fn delta(scales: &PhysicalScales, t: f64, r: f64) -> Result<DeltaFactor> {
    ensure_finite("t", t)?;
    ensure_finite("r", r)?;
    Ok(scales.delta_r(t, r))
}
