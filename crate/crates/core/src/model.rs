//! Problem definition: the square-root power-law potential
//!
//! V(r) = a0 + a1 r^(-1/2) + a2 r^(-1) + a3 r^(-3/2) + a4 r^(-2)
//!
//! together with the quantum numbers of a radial channel and the constants
//! derived from them (combined centrifugal strength and indicial exponents).
//! Units have hbar = 1 throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Potential coefficients and particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub mass: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self {
            a0: 0.0,
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
            mass: 1.0,
        }
    }
}

impl PotentialParams {
    pub fn new(coefficients: [f64; 5], mass: f64) -> Result<Self> {
        let [a0, a1, a2, a3, a4] = coefficients;
        let params = Self {
            a0,
            a1,
            a2,
            a3,
            a4,
            mass,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.a0, self.a1, self.a2, self.a3, self.a4]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::InvalidParams(format!(
                "mass must be positive and finite, got {}",
                self.mass
            )));
        }
        for (i, a) in self.coefficients().iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::InvalidParams(format!("a{i} is not finite ({a})")));
            }
        }
        Ok(())
    }

    /// Same parameters with a3 replaced.
    pub fn with_a3(&self, a3: f64) -> Self {
        Self { a3, ..*self }
    }

    /// The potential without its inverse-square part, which the radial
    /// solvers fold into the centrifugal term.
    pub(crate) fn value_without_a4(&self, r: f64) -> f64 {
        let s = r.sqrt();
        self.a0 + self.a1 / s + self.a2 / r + self.a3 / (r * s)
    }
}

/// Quantum-number selector: dimension, orbital quantum number and series
/// termination index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Channel {
    pub dim: u32,
    pub ell: u32,
    pub n: u32,
}

impl Channel {
    pub fn new(dim: u32, ell: u32, n: u32) -> Result<Self> {
        let ch = Self { dim, ell, n };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidParams(format!(
                "dimension must be at least 2, got {}",
                self.dim
            )));
        }
        Ok(())
    }

    pub(crate) fn d(&self) -> f64 {
        f64::from(self.dim)
    }

    pub(crate) fn l(&self) -> f64 {
        f64::from(self.ell)
    }

    /// Eigenvalue of the hyperangular operator, l(l+D-2).
    pub fn angular_eigenvalue(&self) -> f64 {
        self.l() * (self.l() + self.d() - 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// 4 l(l+D-2) + 8 M a4: strength of the 1/x^2 term after r = x^2.
    pub centrifugal_strength: f64,
    pub k_plus: f64,
    pub k_minus: f64,
}

impl DerivedConstants {
    /// Value of the indicial polynomial k^2 + (2D-4)k - N at `k`.
    pub fn indicial_residual(&self, dim: u32, k: f64) -> f64 {
        let d = f64::from(dim);
        k * (k - 1.0) + (2.0 * d - 3.0) * k - self.centrifugal_strength
    }
}

/// Evaluates V(r).
pub fn potential_value(params: &PotentialParams, r: f64) -> Result<f64> {
    params.validate()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "r must be positive and finite, got {r}"
        )));
    }
    Ok(params.value_without_a4(r) + params.a4 / (r * r))
}

/// (D+2l-2)^2 + 8 M a4, the quantity under the square root in k+-.
pub fn indicial_discriminant(params: &PotentialParams, ch: &Channel) -> f64 {
    let t = ch.d() + 2.0 * ch.l() - 2.0;
    t * t + 8.0 * params.mass * params.a4
}

pub fn derived_constants(params: &PotentialParams, ch: &Channel) -> Result<DerivedConstants> {
    params.validate()?;
    ch.validate()?;
    let discriminant = indicial_discriminant(params, ch);
    if discriminant < 0.0 {
        return Err(Error::SupercriticalA4 { discriminant });
    }
    let root = discriminant.sqrt();
    let shift = ch.d() - 2.0;
    Ok(DerivedConstants {
        centrifugal_strength: 4.0 * ch.angular_eigenvalue() + 8.0 * params.mass * params.a4,
        k_plus: -shift + root,
        k_minus: -shift - root,
    })
}

/// Coefficients of the hyperradial equation
///
/// R'' + (D-1)/r R' - l(l+D-2)/r^2 R + 2M(E - V(r)) R = 0
///
/// at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEquation {
    pub params: PotentialParams,
    pub channel: Channel,
    pub energy: f64,
}

/// The three r-dependent coefficients of the hyperradial equation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialCoefficients {
    pub first_derivative: f64,
    pub centrifugal: f64,
    pub source: f64,
}

pub fn effective_radial_coefficients(
    params: &PotentialParams,
    ch: &Channel,
    energy: f64,
) -> Result<RadialEquation> {
    params.validate()?;
    ch.validate()?;
    if !energy.is_finite() {
        return Err(Error::InvalidParams(format!(
            "energy is not finite ({energy})"
        )));
    }
    Ok(RadialEquation {
        params: *params,
        channel: *ch,
        energy,
    })
}

impl RadialEquation {
    pub fn at(&self, r: f64) -> Result<RadialCoefficients> {
        let v = potential_value(&self.params, r)?;
        Ok(RadialCoefficients {
            first_derivative: (self.channel.d() - 1.0) / r,
            centrifugal: self.channel.angular_eigenvalue() / (r * r),
            source: 2.0 * self.params.mass * (self.energy - v),
        })
    }

    /// Left-hand side of the equation for given R, R', R'' at r.
    pub fn residual(&self, r: f64, value: f64, first: f64, second: f64) -> Result<f64> {
        let c = self.at(r)?;
        Ok(second + c.first_derivative * first - c.centrifugal * value + c.source * value)
    }
}
