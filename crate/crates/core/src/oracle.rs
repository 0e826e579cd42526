//! Independent shooting eigensolver for the raw hyperradial equation.
//!
//! The substitution u(r) = r^((D-1)/2) R(r) removes the first-derivative term:
//!
//! u'' + [2M(E - V(r)) - L/r^2] u = 0,   L = l(l+D-2) + (D-1)(D-3)/4.
//!
//! The equation is then integrated on a uniform grid in t = ln r, where
//! w(t) = r^(-1/2) u obeys w'' = F(t) w with F = 1/4 - r^2 q(r, E). Both
//! power-law ends become exponentials in t, so Numerov's method applies with
//! a single step size from r_min up to r_max.
//!
//! Brackets come from Sturm node counting of the outward solution; the
//! eigenvalue is then pinned by bisection on the Wronskian between the
//! outward and inward solutions at the outermost classical turning point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Channel, PotentialParams};
use crate::wavefunction::count_sign_changes;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalForm {
    pub params: PotentialParams,
    pub channel: Channel,
    /// l(l+D-2) + (D-1)(D-3)/4.
    pub lambda_eff: f64,
}

impl CanonicalForm {
    /// Coefficient q in u'' + q u = 0.
    pub fn q(&self, r: f64, energy: f64) -> f64 {
        let v = self.params.value_without_a4(r) + self.params.a4 / (r * r);
        2.0 * self.params.mass * (energy - v) - self.lambda_eff / (r * r)
    }

    /// Exponent s of u = r^s R.
    pub fn radial_power(&self) -> f64 {
        (self.channel.d() - 1.0) / 2.0
    }

    /// nu^2 = 1/4 + L + 2 M a4; the regular solution behaves as w ~ r^nu.
    fn log_grid_constant(&self) -> f64 {
        0.25 + self.lambda_eff + 2.0 * self.params.mass * self.params.a4
    }
}

pub fn reduce_to_canonical(params: &PotentialParams, ch: &Channel) -> Result<CanonicalForm> {
    params.validate()?;
    ch.validate()?;
    let d = ch.d();
    Ok(CanonicalForm {
        params: *params,
        channel: *ch,
        lambda_eff: ch.angular_eigenvalue() + (d - 1.0) * (d - 3.0) / 4.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub num_points: usize,
    /// Searched automatically from the potential when `None`.
    pub energy_bracket: Option<(f64, f64)>,
    pub target_nodes: usize,
    /// Absolute energy convergence.
    pub tolerance: f64,
    pub max_iterations: usize,
}

pub const MIN_POINTS: usize = 1000;

impl OracleConfig {
    /// Defaults scaled to the decay length 1/A: r from 1e-8/A to 40/A on
    /// 2000 points.
    pub fn for_decay_rate(a_est: f64, target_nodes: usize) -> Self {
        Self {
            r_min: 1e-8 / a_est,
            r_max: 40.0 / a_est,
            num_points: 2000,
            energy_bracket: None,
            target_nodes,
            tolerance: 1e-13,
            max_iterations: 500,
        }
    }

    /// Defaults for a state expected near `energy`. The box extends past the
    /// outermost classical turning point until the WKB decay exponent
    /// reaches 40, which matters when a long-range attractive tail keeps the
    /// local decay rate well below its asymptotic value.
    pub fn for_energy(
        params: &PotentialParams,
        ch: &Channel,
        energy: f64,
        target_nodes: usize,
    ) -> Result<Self> {
        let form = reduce_to_canonical(params, ch)?;
        if !(energy < params.a0) {
            return Err(Error::Domain(format!(
                "energy {energy} is not below the threshold a0 = {}",
                params.a0
            )));
        }
        let kappa = (2.0 * params.mass * (params.a0 - energy)).sqrt();
        let mut config = Self::for_decay_rate(kappa, target_nodes);
        let ratio = 1.01f64;
        let mut r = 1e-3 / kappa;
        let mut turning = r;
        while r < 1e8 / kappa {
            if form.q(r, energy) >= 0.0 {
                turning = r;
            }
            r *= ratio;
        }
        let (mut r, mut exponent) = (turning, 0.0);
        while exponent < 40.0 {
            let next = r * ratio;
            let mid = 0.5 * (r + next);
            exponent += (-form.q(mid, energy)).max(0.0).sqrt() * (next - r);
            r = next;
        }
        config.r_max = config.r_max.max(r);
        Ok(config)
    }

    /// Same range with the log step halved.
    pub fn refined(&self) -> Self {
        Self {
            num_points: 2 * self.num_points - 1,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "oracle grid needs 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.num_points < MIN_POINTS {
            return Err(Error::InvalidParams(format!(
                "oracle grid needs at least {MIN_POINTS} points, got {}",
                self.num_points
            )));
        }
        if let Some((lo, hi)) = self.energy_bracket {
            if !(lo < hi) {
                return Err(Error::InvalidParams(format!(
                    "empty energy bracket [{lo}, {hi}]"
                )));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams(
                "oracle tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub energy: f64,
    pub nodes: usize,
    /// Difference of the outward and inward logarithmic derivatives dw/dt / w
    /// at the matching point.
    pub match_defect: f64,
    pub iterations: usize,
    pub grid: Vec<f64>,
    /// u(r) = r^((D-1)/2) R(r), arbitrary scale.
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub energy: f64,
    pub nodes: usize,
}

struct LogGrid {
    h: f64,
    r: Vec<f64>,
    r2: Vec<f64>,
    /// r^2 (V(r) - a4/r^2)
    r2v: Vec<f64>,
    nu2: f64,
    two_m: f64,
    /// 8M (a3, a2, a1, a0) for the small-r Frobenius start-up.
    frobenius: [f64; 4],
}

const RESCALE_AT: f64 = 1e200;

impl LogGrid {
    fn new(form: &CanonicalForm, config: &OracleConfig) -> Result<Self> {
        let nu2 = form.log_grid_constant();
        if nu2 < 0.0 {
            return Err(Error::SupercriticalA4 {
                discriminant: 4.0 * nu2,
            });
        }
        let n = config.num_points;
        let t0 = config.r_min.ln();
        let h = (config.r_max.ln() - t0) / (n - 1) as f64;
        let r: Vec<f64> = (0..n).map(|i| (t0 + h * i as f64).exp()).collect();
        let r2: Vec<f64> = r.iter().map(|x| x * x).collect();
        let r2v = r
            .iter()
            .zip(&r2)
            .map(|(&x, &x2)| x2 * form.params.value_without_a4(x))
            .collect();
        Ok(Self {
            h,
            r,
            r2,
            r2v,
            nu2,
            two_m: 2.0 * form.params.mass,
            frobenius: [
                8.0 * form.params.mass * form.params.a3,
                8.0 * form.params.mass * form.params.a2,
                8.0 * form.params.mass * form.params.a1,
                8.0 * form.params.mass * form.params.a0,
            ],
        })
    }

    fn len(&self) -> usize {
        self.r.len()
    }

    fn f(&self, i: usize, energy: f64) -> f64 {
        self.nu2 - self.two_m * (self.r2[i] * energy - self.r2v[i])
    }

    /// Numerov weights 1 - h^2 F / 12.
    fn weights(&self, energy: f64) -> Vec<f64> {
        let c = self.h * self.h / 12.0;
        (0..self.len())
            .map(|i| 1.0 - c * self.f(i, energy))
            .collect()
    }

    /// Lowest energy at which some grid point is classically allowed.
    fn potential_floor(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.r2v[i] + self.nu2 / self.two_m) / self.r2[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Lowest energy for which Numerov stays stable at r_max (h^2 F / 12 <= 1/2).
    fn stability_floor(&self) -> f64 {
        let n = self.len() - 1;
        let f_max = 6.0 / (self.h * self.h);
        (self.r2v[n] + (self.nu2 - f_max) / self.two_m) / self.r2[n]
    }

    /// Outermost i where F < 0; the grid midpoint when nothing is allowed.
    fn turning_point(&self, energy: f64) -> usize {
        let n = self.len();
        let m = (0..n)
            .rev()
            .find(|&i| self.f(i, energy) < 0.0)
            .unwrap_or(n / 2);
        m.clamp(2, n - 3)
    }

    /// Regular solution r^-nu w = sum_j d_j x^j (x = r^(1/2)) at grid point i,
    /// truncated at j = 7. The d_j follow from the radial equation in x:
    /// j(j + 4 nu) d_j = 8M [a3 d_{j-1} + a2 d_{j-2} + a1 d_{j-3} + (a0 - E) d_{j-4}].
    fn regular_series(&self, i: usize, energy: f64) -> f64 {
        let nu = self.nu2.sqrt();
        let x = self.r[i].sqrt();
        let [s3, s2, s1, s0] = self.frobenius;
        let coupling = [s3, s2, s1, s0 - 4.0 * self.two_m * energy];
        let mut d = [0.0f64; 8];
        d[0] = 1.0;
        for j in 1..8 {
            let mut acc = 0.0;
            for (lag, c) in coupling.iter().enumerate() {
                if j > lag {
                    acc += c * d[j - 1 - lag];
                }
            }
            let jf = j as f64;
            d[j] = acc / (jf * (jf + 4.0 * nu));
        }
        d.iter().rev().fold(0.0, |acc, dj| acc * x + dj)
    }

    /// Regular solution from r_min up to index `last`, with its node count.
    fn outward(&self, g: &[f64], energy: f64, last: usize) -> (Vec<f64>, usize) {
        let mut w = Vec::with_capacity(last + 1);
        w.push(self.regular_series(0, energy));
        w.push((self.nu2.sqrt() * self.h).exp() * self.regular_series(1, energy));
        let mut nodes = 0;
        for i in 1..last {
            let next = ((12.0 - 10.0 * g[i]) * w[i] - g[i - 1] * w[i - 1]) / g[i + 1];
            if next != 0.0 && w[i] != 0.0 && next.signum() != w[i].signum() {
                nodes += 1;
            }
            w.push(next);
            if next.abs() > RESCALE_AT {
                w.iter_mut().for_each(|x| *x /= RESCALE_AT);
            }
        }
        w.truncate(last + 1);
        (w, nodes)
    }

    /// Decaying solution from r_max down to index `first`; entry j holds
    /// grid index `first + j`.
    fn inward(&self, g: &[f64], energy: f64, first: usize) -> Vec<f64> {
        let n = self.len();
        let mut w = vec![0.0; n];
        let (fa, fb) = (self.f(n - 1, energy), self.f(n - 2, energy));
        w[n - 1] = 1e-30;
        w[n - 2] = if fa > 0.0 && fb > 0.0 {
            w[n - 1] * (0.5 * self.h * (fa.sqrt() + fb.sqrt())).exp()
        } else {
            2e-30
        };
        for i in (first + 1..n - 1).rev() {
            w[i - 1] = ((12.0 - 10.0 * g[i]) * w[i] - g[i + 1] * w[i + 1]) / g[i - 1];
            if w[i - 1].abs() > RESCALE_AT {
                w[i - 1..].iter_mut().for_each(|x| *x /= RESCALE_AT);
            }
        }
        w.split_off(first)
    }

    fn count_nodes(&self, energy: f64) -> usize {
        let g = self.weights(energy);
        self.outward(&g, energy, self.len() - 1).1
    }

    /// Wronskian of the outward and inward solutions at `m`, each scaled to
    /// unit maximum so only the sign and relative size matter.
    fn matching(&self, energy: f64, m: usize) -> (f64, f64) {
        let g = self.weights(energy);
        let (wo, _) = self.outward(&g, energy, m + 1);
        let wi = self.inward(&g, energy, m - 1);
        let so = wo.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let si = wi.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let (o_minus, o, o_plus) = (wo[m - 1] / so, wo[m] / so, wo[m + 1] / so);
        let (i_minus, i, i_plus) = (wi[0] / si, wi[1] / si, wi[2] / si);
        let wronskian = (o_plus - o_minus) * i - o * (i_plus - i_minus);
        let defect =
            (o_plus - o_minus) / (2.0 * self.h * o) - (i_plus - i_minus) / (2.0 * self.h * i);
        (wronskian, defect)
    }
}

/// Outward node counts over a list of energies.
pub fn scan_energies(
    params: &PotentialParams,
    ch: &Channel,
    config: &OracleConfig,
    energies: &[f64],
) -> Result<Vec<ScanPoint>> {
    config.validate()?;
    let form = reduce_to_canonical(params, ch)?;
    let grid = LogGrid::new(&form, config)?;
    Ok(energies
        .iter()
        .map(|&energy| ScanPoint {
            energy,
            nodes: grid.count_nodes(energy),
        })
        .collect())
}

fn node_bracket(
    grid: &LogGrid,
    config: &OracleConfig,
    params: &PotentialParams,
) -> Result<(f64, f64, usize)> {
    let target = config.target_nodes;
    let (mut lo, mut hi) = match config.energy_bracket {
        Some(b) => b,
        None => {
            let floor = grid.potential_floor();
            let floor = floor - 0.01 * floor.abs() - 1e-10;
            (floor.max(grid.stability_floor()), params.a0)
        }
    };
    let (count_lo, count_hi) = (grid.count_nodes(lo), grid.count_nodes(hi));
    if count_lo > target {
        return Err(Error::Bracketing(format!(
            "{count_lo} nodes already at E = {lo}, more than the {target} requested"
        )));
    }
    if count_hi <= target {
        return Err(Error::Bracketing(format!(
            "only {count_hi} nodes at E = {hi}; no state with {target} nodes below it"
        )));
    }
    let mut iterations = 0;
    let (mut c_lo, mut c_hi) = (count_lo, count_hi);
    while !(c_lo == target && c_hi == target + 1) {
        iterations += 1;
        if iterations > config.max_iterations {
            return Err(Error::Accuracy {
                what: "node bisection did not isolate a single state".into(),
                achieved: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        let c = grid.count_nodes(mid);
        if c <= target {
            lo = mid;
            c_lo = c;
        } else {
            hi = mid;
            c_hi = c;
        }
    }
    Ok((lo, hi, iterations))
}

/// Eigenvalue with `config.target_nodes` nodes by two-sided shooting.
pub fn shoot_eigenvalue(
    params: &PotentialParams,
    ch: &Channel,
    config: &OracleConfig,
) -> Result<OracleResult> {
    config.validate()?;
    let form = reduce_to_canonical(params, ch)?;
    let grid = LogGrid::new(&form, config)?;
    let (mut lo, mut hi, mut iterations) = node_bracket(&grid, config, params)?;

    let m = grid.turning_point(0.5 * (lo + hi));
    let (mut w_lo, _) = grid.matching(lo, m);
    let (w_hi, _) = grid.matching(hi, m);
    if w_lo.signum() == w_hi.signum() {
        return Err(Error::Bracketing(format!(
            "matching function does not change sign on [{lo}, {hi}]"
        )));
    }
    let mut w_hi = w_hi;
    while hi - lo > config.tolerance {
        iterations += 1;
        if iterations > config.max_iterations {
            return Err(Error::Accuracy {
                what: "energy bisection did not converge".into(),
                achieved: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (w_mid, _) = grid.matching(mid, m);
        if w_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if w_mid.signum() == w_lo.signum() {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
            w_hi = w_mid;
        }
    }
    let energy = if lo == hi || w_hi == w_lo {
        lo
    } else {
        (lo - w_lo * (hi - lo) / (w_hi - w_lo)).clamp(lo, hi)
    };

    let g = grid.weights(energy);
    let (mut w, _) = grid.outward(&g, energy, m);
    let wi = grid.inward(&g, energy, m);
    let scale = w[m] / wi[0];
    w.extend(wi[1..].iter().map(|x| x * scale));
    let (_, match_defect) = grid.matching(energy, m);
    let u = w
        .iter()
        .zip(&grid.r)
        .map(|(wv, r)| wv * r.sqrt())
        .collect::<Vec<_>>();

    Ok(OracleResult {
        energy,
        nodes: count_sign_changes(&u),
        match_defect,
        iterations,
        grid: grid.r,
        u,
    })
}
