//! Wavefunction-ansatz solution of the radial equation.
//!
//! With r = x^2 the radial function is written as
//!
//! R(x) = exp(-(A x^2 + B x)) x^k sum_p c_p x^p,
//!
//! where A and B come from the large-x behaviour, k = k+ from the indicial
//! equation at x = 0, and the c_p obey the three-term recurrence
//!
//! alpha(p) c_p - beta(p+1) c_{p+1} + gamma(p+2) c_{p+2} = 0.
//!
//! Forcing alpha(n) = 0 terminates the recurrence from the top and gives a
//! cubic in A, whose positive roots fix the energy E = a0 - A^2 / (2M).
//! The next coefficient c_{n+1} does not vanish automatically; it is reported
//! as a termination residual, and [`termination_constrained_a3`] finds the
//! values of a3 that make it vanish.

use serde::{Deserialize, Serialize};

use crate::cubic;
use crate::error::{Error, Result};
use crate::model::{derived_constants, Channel, PotentialParams};

/// Residuals at or below this level count as an exact termination.
pub const TERMINATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzFactors {
    /// Gaussian decay rate in x (linear in r).
    pub a: f64,
    /// Linear decay rate in x (square-root in r).
    pub b: f64,
    /// Indicial exponent k+.
    pub k: f64,
}

/// alpha, beta and gamma of the three-term recurrence for one
/// (params, channel, factors) triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceCoefficients {
    a: f64,
    b: f64,
    k: f64,
    d: f64,
    eight_m_a2: f64,
    eight_m_a3: f64,
    centrifugal_strength: f64,
}

impl RecurrenceCoefficients {
    pub fn new(params: &PotentialParams, ch: &Channel, factors: &AnsatzFactors) -> Result<Self> {
        let dc = derived_constants(params, ch)?;
        Ok(Self {
            a: factors.a,
            b: factors.b,
            k: factors.k,
            d: ch.d(),
            eight_m_a2: 8.0 * params.mass * params.a2,
            eight_m_a3: 8.0 * params.mass * params.a3,
            centrifugal_strength: dc.centrifugal_strength,
        })
    }

    fn with_a3(&self, mass: f64, a3: f64) -> Self {
        Self {
            eight_m_a3: 8.0 * mass * a3,
            ..*self
        }
    }

    pub fn alpha(&self, p: usize) -> f64 {
        let p = p as f64;
        self.b * self.b - self.eight_m_a2 - 4.0 * self.a * (self.d + self.k + p - 1.0)
    }

    pub fn beta(&self, p: usize) -> f64 {
        let p = p as f64;
        self.eight_m_a3 + self.b * (2.0 * self.d + 2.0 * self.k + 2.0 * p - 3.0)
    }

    pub fn gamma(&self, p: usize) -> f64 {
        let kp = self.k + p as f64;
        kp * (kp + 2.0 * self.d - 4.0) - self.centrifugal_strength
    }

    /// Runs the recurrence from c0 = 1 up to and including index `last`.
    fn coefficients(&self, last: usize) -> Result<Vec<f64>> {
        if let Some(p) = (1..=last).find(|&p| self.gamma(p) == 0.0) {
            return Err(Error::ResonantRecurrence { p });
        }
        let mut c = Vec::with_capacity(last + 1);
        c.push(1.0);
        if last >= 1 {
            c.push(self.beta(0) / self.gamma(1));
        }
        for p in 0..last.saturating_sub(1) {
            let next = (self.beta(p + 1) * c[p + 1] - self.alpha(p) * c[p]) / self.gamma(p + 2);
            c.push(next);
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    /// c_0..c_n, with c_0 = 1.
    pub coefficients: Vec<f64>,
    pub n: u32,
    /// The value c_{n+1} would take if the recurrence were continued.
    pub termination_residual_1: f64,
    /// The value c_{n+2} would take.
    pub termination_residual_2: f64,
}

impl SeriesSolution {
    pub fn is_terminating(&self) -> bool {
        self.termination_residual_1.abs() <= TERMINATION_TOLERANCE
            && self.termination_residual_2.abs() <= TERMINATION_TOLERANCE
    }

    /// Horner evaluation of sum_j c_j x^j.
    pub fn polynomial(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub energy: f64,
    pub factors: AnsatzFactors,
    pub series: SeriesSolution,
    pub channel: Channel,
    pub params: PotentialParams,
}

impl BoundState {
    pub fn recurrence(&self) -> Result<RecurrenceCoefficients> {
        RecurrenceCoefficients::new(&self.params, &self.channel, &self.factors)
    }

    /// alpha(n) divided by 4A(D+k+n-1); zero when the quantization holds.
    pub fn quantization_residual(&self) -> Result<f64> {
        let rec = self.recurrence()?;
        let n = self.channel.n as usize;
        let scale = 4.0 * self.factors.a * (self.channel.d() + self.factors.k + n as f64 - 1.0);
        Ok(rec.alpha(n) / scale)
    }
}

fn cubic_coefficients(params: &PotentialParams, ch: &Channel) -> Result<[f64; 4]> {
    let dc = derived_constants(params, ch)?;
    let lead = ch.d() + dc.k_plus + f64::from(ch.n) - 1.0;
    if !(lead > 0.0) {
        return Err(Error::NonPositiveLeading { lead });
    }
    let m = params.mass;
    Ok([
        4.0 * lead,
        8.0 * m * params.a2,
        0.0,
        -4.0 * m * m * params.a1 * params.a1,
    ])
}

/// Positive roots A of 4A^3(D+k+n-1) + 8A^2 M a2 - 4 M^2 a1^2 = 0, largest
/// first. An empty list means no bound state for this channel.
pub fn solve_quantization_cubic(params: &PotentialParams, ch: &Channel) -> Result<Vec<f64>> {
    let c = cubic_coefficients(params, ch)?;
    let mut roots: Vec<f64> = cubic::real_cubic_roots(c)
        .into_iter()
        .filter(|&a| a > 0.0 && a.is_finite())
        .collect();
    roots.sort_by(|x, y| y.total_cmp(x));
    Ok(roots)
}

/// Relative residual of the quantization cubic at `a`.
pub fn quantization_cubic_residual(params: &PotentialParams, ch: &Channel, a: f64) -> Result<f64> {
    Ok(cubic::relative_residual(cubic_coefficients(params, ch)?, a))
}

pub fn ansatz_factors(params: &PotentialParams, ch: &Channel, a: f64) -> Result<AnsatzFactors> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "A must be positive and finite, got {a}"
        )));
    }
    let dc = derived_constants(params, ch)?;
    if dc.k_plus < 0.0 {
        return Err(Error::NegativeIndicialExponent { k: dc.k_plus });
    }
    Ok(AnsatzFactors {
        a,
        b: 2.0 * params.mass * params.a1 / a,
        k: dc.k_plus,
    })
}

pub fn build_series(
    params: &PotentialParams,
    ch: &Channel,
    factors: &AnsatzFactors,
) -> Result<SeriesSolution> {
    let rec = RecurrenceCoefficients::new(params, ch, factors)?;
    let n = ch.n as usize;
    let mut c = rec.coefficients(n + 2)?;
    let termination_residual_2 = c.pop().unwrap_or_default();
    let termination_residual_1 = c.pop().unwrap_or_default();
    Ok(SeriesSolution {
        coefficients: c,
        n: ch.n,
        termination_residual_1,
        termination_residual_2,
    })
}

/// c_{n+1} as a function of a3, everything else fixed.
fn residual_in_a3(rec: &RecurrenceCoefficients, mass: f64, n: usize, a3: f64) -> Result<f64> {
    let c = rec.with_a3(mass, a3).coefficients(n + 1)?;
    Ok(c[n + 1])
}

/// Every a3 for which c_{n+1} vanishes, ascending.
///
/// c_{n+1}(a3) is a degree n+1 polynomial in 8 M a3. Its zeros are the
/// eigenvalues of the (n+1)x(n+1) tridiagonal matrix of the recurrence, so
/// Gershgorin's theorem bounds the search interval. The interval is scanned
/// for sign changes and each one is bisected to machine precision.
pub fn terminating_a3_values(params: &PotentialParams, ch: &Channel, a: f64) -> Result<Vec<f64>> {
    let factors = ansatz_factors(params, ch, a)?;
    let n = ch.n as usize;
    let m = params.mass;
    if n == 0 {
        let rec = RecurrenceCoefficients::new(params, ch, &factors)?;
        if rec.gamma(1) == 0.0 {
            return Err(Error::ResonantRecurrence { p: 1 });
        }
        return Ok(vec![
            -factors.b * (2.0 * factors.k + 2.0 * ch.d() - 3.0) / (8.0 * m),
        ]);
    }
    let rec = RecurrenceCoefficients::new(&params.with_a3(0.0), ch, &factors)?;

    let mut radius: f64 = 0.0;
    for p in 0..=n {
        let below = if p > 0 { rec.alpha(p - 1).abs() } else { 0.0 };
        radius = radius.max(rec.beta(p).abs() + rec.gamma(p + 1).abs() + below);
    }
    let half_width = (1.01 * radius + 1e-12) / (8.0 * m);
    let (lo, hi) = (-half_width, half_width);

    let steps = 4096 * (n + 1);
    let f = |a3: f64| residual_in_a3(&rec, m, n, a3);
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0)?;
    for i in 1..=steps {
        let x1 = lo + (hi - lo) * i as f64 / steps as f64;
        let f1 = f(x1)?;
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut left, mut right, mut f_left) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (left + right);
                if mid <= left || mid >= right {
                    break;
                }
                let f_mid = f(mid)?;
                if f_mid == 0.0 {
                    left = mid;
                    right = mid;
                    break;
                }
                if f_mid.signum() == f_left.signum() {
                    left = mid;
                    f_left = f_mid;
                } else {
                    right = mid;
                }
            }
            let (f_l, f_r) = (f(left)?.abs(), f(right)?.abs());
            roots.push(if f_l <= f_r { left } else { right });
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    roots.retain(|&a3| {
        residual_in_a3(&rec, m, n, a3)
            .map(|r| r.abs() < TERMINATION_TOLERANCE)
            .unwrap_or(false)
    });
    if roots.is_empty() {
        return Err(Error::NoTerminatingA3 { lo, hi });
    }
    Ok(roots)
}

/// The a3 that makes the series terminate exactly at index n.
///
/// For n >= 1 there are n+1 such values; the smallest is returned, which is
/// the one giving the polynomial factor the most sign changes.
pub fn termination_constrained_a3(params: &PotentialParams, ch: &Channel, a: f64) -> Result<f64> {
    Ok(terminating_a3_values(params, ch, a)?[0])
}

fn assemble(params: &PotentialParams, ch: &Channel, a: f64) -> Result<BoundState> {
    let factors = ansatz_factors(params, ch, a)?;
    let series = build_series(params, ch, &factors)?;
    Ok(BoundState {
        energy: params.a0 - a * a / (2.0 * params.mass),
        factors,
        series,
        channel: *ch,
        params: *params,
    })
}

/// One bound state per positive root of the quantization cubic, deepest first.
pub fn solve_bound_states(params: &PotentialParams, ch: &Channel) -> Result<Vec<BoundState>> {
    solve_quantization_cubic(params, ch)?
        .into_iter()
        .map(|a| assemble(params, ch, a))
        .collect()
}

/// The most bound state of the channel, or `None` when the cubic has no
/// positive root. Termination residuals are reported, not enforced.
pub fn solve_bound_state(params: &PotentialParams, ch: &Channel) -> Result<Option<BoundState>> {
    match solve_quantization_cubic(params, ch)?.first() {
        Some(&a) => assemble(params, ch, a).map(Some),
        None => Ok(None),
    }
}
