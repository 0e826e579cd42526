//! Analytic spectra for the special cases of the potential:
//! the a1/a3 fractional pair, the Mie-type family a0 + a2/r + a4/r^2, and
//! pure Coulomb.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PotentialParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCaseTag {
    FractionalPair,
    MieType,
    Coulomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCaseKind {
    pub tag: SpecialCaseTag,
    /// `zero[i]` is true when a_i is exactly zero.
    pub zero: [bool; 5],
}

/// Every special case the parameters belong to, most specific first.
/// Zero tests are exact; parameters are inputs, not computed values.
pub fn detect_special_cases(params: &PotentialParams) -> Vec<SpecialCaseKind> {
    let zero = params.coefficients().map(|a| a == 0.0);
    let [z0, z1, z2, z3, z4] = zero;
    let mut kinds = Vec::new();
    if z0 && z1 && z3 && z4 {
        kinds.push(SpecialCaseTag::Coulomb);
    }
    if z1 && z3 {
        kinds.push(SpecialCaseTag::MieType);
    }
    if z0 && z2 && z4 {
        kinds.push(SpecialCaseTag::FractionalPair);
    }
    kinds
        .into_iter()
        .map(|tag| SpecialCaseKind { tag, zero })
        .collect()
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "mass must be positive, got {mass}"
        )))
    }
}

/// E = -(1/2M) (M^2 a1^2 / (2k' + n + 1))^(2/3), k' = D/2 + l - 1.
pub fn energy_fractional_pair(mass: f64, a1: f64, dim: u32, ell: u32, n: u32) -> Result<f64> {
    check_mass(mass)?;
    if a1 == 0.0 {
        return Err(Error::NoBinding("a1 = 0 gives no binding".into()));
    }
    let k_prime = f64::from(dim) / 2.0 + f64::from(ell) - 1.0;
    let base = mass * mass * a1 * a1 / (2.0 * k_prime + f64::from(n) + 1.0);
    Ok(-base.powf(2.0 / 3.0) / (2.0 * mass))
}

/// E = a0 - (M/2) [a2 / (n_r + (1 + sqrt((D+2l-2)^2 + 8 M a4)) / 2)]^2.
pub fn energy_mie(
    mass: f64,
    a0: f64,
    a2: f64,
    a4: f64,
    dim: u32,
    ell: u32,
    n_r: u32,
) -> Result<f64> {
    check_mass(mass)?;
    if a2 >= 0.0 {
        return Err(Error::NoBinding(format!("a2 = {a2} is not attractive")));
    }
    let t = f64::from(dim) + 2.0 * f64::from(ell) - 2.0;
    let discriminant = t * t + 8.0 * mass * a4;
    if discriminant < 0.0 {
        return Err(Error::SupercriticalA4 { discriminant });
    }
    let den = f64::from(n_r) + (1.0 + discriminant.sqrt()) / 2.0;
    let q = a2 / den;
    Ok(a0 - mass / 2.0 * (q * q))
}

/// E = -(M/2) (a2 / (D/2 + l + n_r - 1/2))^2.
pub fn energy_coulomb(mass: f64, a2: f64, dim: u32, ell: u32, n_r: u32) -> Result<f64> {
    check_mass(mass)?;
    if a2 >= 0.0 {
        return Err(Error::NoBinding(format!("a2 = {a2} is not attractive")));
    }
    let den = f64::from(dim) / 2.0 + f64::from(ell) + f64::from(n_r) - 0.5;
    let q = a2 / den;
    Ok(-(mass / 2.0 * (q * q)))
}

/// Closed-form energy for the given state, if the parameters fall into a
/// special case. `n` is the series index; Mie and Coulomb states need it even.
pub fn closed_form_energy(
    params: &PotentialParams,
    dim: u32,
    ell: u32,
    n: u32,
) -> Option<Result<f64>> {
    let kinds = detect_special_cases(params);
    let tag = kinds.first()?.tag;
    let p = params;
    Some(match tag {
        SpecialCaseTag::Coulomb | SpecialCaseTag::MieType if n % 2 == 1 => Err(Error::Domain(
            "odd series index has no Mie/Coulomb counterpart".into(),
        )),
        SpecialCaseTag::Coulomb => energy_coulomb(p.mass, p.a2, dim, ell, n / 2),
        SpecialCaseTag::MieType => energy_mie(p.mass, p.a0, p.a2, p.a4, dim, ell, n / 2),
        SpecialCaseTag::FractionalPair => energy_fractional_pair(p.mass, p.a1, dim, ell, n),
    })
}
