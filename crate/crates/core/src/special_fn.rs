//! Special functions used by the closed-form states.
//!
//! Hermite polynomials follow the physicists' convention, Laguerre polynomials
//! are the generalized `L_n^α`, and spherical harmonics are orthonormal with
//! the Condon–Shortley phase. Everything is evaluated with upward three-term
//! recurrences.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

/// Physicists' Hermite polynomial `H_n(q)`.
pub fn hermite(n: i64, q: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!("Hermite degree must be >= 0, got {n}")));
    }
    Ok(hermite_unchecked(n as usize, q))
}

fn hermite_unchecked(n: usize, q: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * q;
    for k in 1..n {
        let next = 2.0 * q * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(q) / sqrt(2^n n!)`, which stays finite for large `n` where `H_n`
/// and the factorial separately would overflow.
pub fn hermite_normalized(n: usize, q: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * q;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^l(x)` for integer `l >= 0`.
pub fn laguerre(n: i64, l: i64, x: f64) -> Result<f64> {
    if n < 0 || l < 0 {
        return Err(Error::Domain(format!(
            "Laguerre indices must be >= 0, got n = {n}, l = {l}"
        )));
    }
    Ok(generalized_laguerre(n as usize, l as f64, x))
}

/// `L_n^α(x)` for real `α > -1`.
pub fn generalized_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Value of Kummer's `M(a, b; x)` with a flag telling whether the series
/// terminated (the polynomial case `a = -k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfluentM {
    pub value: f64,
    /// `false` when `a` is not a non-positive integer; such values come from
    /// a truncated infinite series and are not validated.
    pub polynomial: bool,
}

const SERIES_MAX_TERMS: usize = 10_000;

pub fn confluent_m(a: f64, b: f64, x: f64) -> Result<ConfluentM> {
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return Err(Error::Domain("confluent M arguments must be finite".into()));
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "confluent M undefined for non-positive integer b = {b}"
        )));
    }
    let polynomial = a <= 0.0 && a.fract() == 0.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    if polynomial {
        let k = (-a) as usize;
        for j in 0..k {
            let jf = j as f64;
            term *= (a + jf) / (b + jf) * x / (jf + 1.0);
            sum += term;
        }
    } else {
        for j in 0..SERIES_MAX_TERMS {
            let jf = j as f64;
            term *= (a + jf) / (b + jf) * x / (jf + 1.0);
            sum += term;
            if term.abs() <= f64::EPSILON * sum.abs() {
                break;
            }
        }
    }
    Ok(ConfluentM {
        value: sum,
        polynomial,
    })
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Orthonormalized associated Legendre function
/// `sqrt((2l+1)/4π · (l-m)!/(l+m)!) P_l^m(cos θ)` for `0 <= m <= l`,
/// Condon–Shortley phase included.
fn normalized_legendre(l: usize, m: usize, cos_theta: f64) -> f64 {
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    // P̄_m^m
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin_theta;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut prev = pmm;
    let mut cur = cos_theta * (2.0 * mf + 3.0).sqrt() * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (cos_theta * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal spherical harmonic `Y_l^m(θ, φ)`.
pub fn spherical_harmonic(l: i64, m: i64, theta: f64, phi: f64) -> Result<C64> {
    if l < 0 || m.abs() > l {
        return Err(Error::Domain(format!(
            "spherical harmonic requires l >= 0 and |m| <= l, got l = {l}, m = {m}"
        )));
    }
    let ma = m.unsigned_abs() as usize;
    let p = normalized_legendre(l as usize, ma, theta.cos());
    let y = C64::from_polar(p, ma as f64 * phi);
    if m >= 0 {
        Ok(y)
    } else {
        // Y_l^{-m} = (-1)^m conj(Y_l^m)
        let sign = if ma.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * y.conj())
    }
}
