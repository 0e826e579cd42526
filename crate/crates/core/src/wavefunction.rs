//! Evaluation and normalization of the radial eigenfunction
//!
//! R(r) = N exp(-(A r + B r^(1/2))) r^(k/2) sum_j c_j r^(j/2).
//!
//! Normalization integrates R^2 r^(D-1) in the variable x = r^(1/2), where
//! the integrand is a polynomial times a Gaussian-type envelope and is smooth
//! down to x = 0.

use serde::{Deserialize, Serialize};

use crate::ansatz::BoundState;
use crate::error::{Error, Result};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConfig {
    pub grid_points: usize,
    /// Inner grid edge in units of the decay length 1/A.
    pub r_min_factor: f64,
    /// Outer grid edge; chosen from the exponential envelope when `None`.
    pub r_max: Option<f64>,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            grid_points: 2000,
            r_min_factor: 1e-6,
            r_max: None,
            rel_tol: 1e-12,
            max_panels: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialWavefunction {
    pub state: BoundState,
    pub norm_constant: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Set when the truncated series is not an exact solution.
    pub approximate: bool,
}

impl RadialWavefunction {
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        Ok(self.norm_constant * evaluate_unnormalized(&self.state, r)?)
    }
}

/// Unnormalized R at x = sqrt(r), with all exponentials combined into one call.
fn value_in_sqrt(state: &BoundState, x: f64) -> f64 {
    let f = &state.factors;
    let poly = state.series.polynomial(x);
    let mut exponent = -(f.a * x * x + f.b * x);
    if f.k != 0.0 {
        if x == 0.0 {
            return 0.0;
        }
        exponent += f.k * x.ln();
    }
    exponent.exp() * poly
}

/// R(x)^2 x^(2D-2) dr/dx, the normalization integrand in x.
fn density_in_sqrt(state: &BoundState, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let f = &state.factors;
    let poly = state.series.polynomial(x);
    let d = f64::from(state.channel.dim);
    let exponent = -2.0 * (f.a * x * x + f.b * x) + (2.0 * f.k + 2.0 * d - 1.0) * x.ln();
    2.0 * exponent.exp() * poly * poly
}

pub fn evaluate_unnormalized(state: &BoundState, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "r must be positive and finite, got {r}"
        )));
    }
    Ok(value_in_sqrt(state, r.sqrt()))
}

/// Smallest x past the density peak where the density has fallen below
/// 1e-18 of its maximum and is still decreasing.
fn envelope_cutoff(state: &BoundState) -> Result<f64> {
    let scale = 1.0 / state.factors.a.sqrt();
    let mut x = 1e-3 * scale;
    let mut peak: f64 = 0.0;
    let mut prev = density_in_sqrt(state, x);
    for _ in 0..5000 {
        x *= 1.02;
        let g = density_in_sqrt(state, x);
        if !g.is_finite() {
            break;
        }
        peak = peak.max(g);
        if x > scale && g < prev && g <= 1e-18 * peak {
            return Ok(x);
        }
        prev = g;
    }
    Err(Error::Accuracy {
        what: "could not locate the decay of the radial density".into(),
        achieved: x,
    })
}

/// Default sampling grid: geometric from r_min_factor/A to r_max.
pub fn default_grid(state: &BoundState, config: &NormalizationConfig) -> Result<Vec<f64>> {
    let r_max = match config.r_max {
        Some(r) => r,
        None => envelope_cutoff(state)?.powi(2),
    };
    let r_min = config.r_min_factor / state.factors.a;
    if !(r_min > 0.0 && r_max > r_min) || config.grid_points < 2 {
        return Err(Error::Domain(format!(
            "invalid grid: r_min={r_min}, r_max={r_max}, points={}",
            config.grid_points
        )));
    }
    let ratio = (r_max / r_min).ln() / (config.grid_points - 1) as f64;
    Ok((0..config.grid_points)
        .map(|i| {
            if i + 1 == config.grid_points {
                r_max
            } else {
                r_min * (ratio * i as f64).exp()
            }
        })
        .collect())
}

/// Integral of R_unnormalized^2 r^(D-1) over (0, infinity).
pub fn norm_integral(state: &BoundState, config: &NormalizationConfig) -> Result<f64> {
    let d = f64::from(state.channel.dim);
    if state.factors.k + d - 1.0 <= -1.0 {
        return Err(Error::Domain(
            "normalization integral diverges at the origin".into(),
        ));
    }
    let cutoff = envelope_cutoff(state)?;
    // graded toward the origin
    let mut breakpoints: Vec<f64> = (1..=40).rev().map(|j| cutoff * 0.5f64.powi(j)).collect();
    breakpoints.insert(0, 0.0);
    breakpoints.push(cutoff);
    let result = quadrature::integrate(
        |x| density_in_sqrt(state, x),
        &breakpoints,
        0.0,
        config.rel_tol,
        config.max_panels,
    )?;
    if !(result.value > 0.0) {
        return Err(Error::Accuracy {
            what: "normalization integral is not positive".into(),
            achieved: result.value,
        });
    }
    Ok(result.value)
}

pub fn normalize(state: &BoundState, config: &NormalizationConfig) -> Result<RadialWavefunction> {
    if !(state.factors.a > 0.0) {
        return Err(Error::Domain("normalization needs A > 0".into()));
    }
    let norm_constant = norm_integral(state, config)?.powf(-0.5);
    let grid = default_grid(state, config)?;
    let values = grid
        .iter()
        .map(|&r| norm_constant * value_in_sqrt(state, r.sqrt()))
        .collect();
    Ok(RadialWavefunction {
        state: state.clone(),
        norm_constant,
        grid,
        values,
        approximate: !state.series.is_terminating(),
    })
}

/// Number of strict sign changes of a sampled function, skipping exact zeros.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

pub fn count_radial_nodes(wf: &RadialWavefunction) -> usize {
    count_sign_changes(&wf.values)
}
