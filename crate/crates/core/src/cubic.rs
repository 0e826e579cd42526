//! Real roots of low-degree polynomials: closed forms followed by Newton polish.

use std::f64::consts::PI;

/// Evaluates c3 x^3 + c2 x^2 + c1 x + c0 and the sum of the absolute values
/// of its terms, used as the scale for relative residuals.
pub fn eval_cubic(c: [f64; 4], x: f64) -> (f64, f64) {
    let [c3, c2, c1, c0] = c;
    let value = ((c3 * x + c2) * x + c1) * x + c0;
    let scale = (c3 * x * x * x).abs() + (c2 * x * x).abs() + (c1 * x).abs() + c0.abs();
    (value, scale)
}

/// Relative residual |p(x)| / sum|terms|; zero when every term vanishes.
pub fn relative_residual(c: [f64; 4], x: f64) -> f64 {
    let (value, scale) = eval_cubic(c, x);
    if scale == 0.0 {
        0.0
    } else {
        value.abs() / scale
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    // avoid cancellation between -b and sqrt(disc)
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b == 0 and c == 0 handled by disc == 0; here b == 0, c < 0 relative to a
        let r = (-c / a).sqrt();
        return vec![-r, r];
    }
    vec![q / a, c / q]
}

fn newton_polish(c: [f64; 4], mut x: f64) -> f64 {
    let [c3, c2, c1, _] = c;
    let mut best = x;
    let mut best_res = relative_residual(c, x);
    for _ in 0..50 {
        if best_res == 0.0 {
            break;
        }
        let (p, _) = eval_cubic(c, x);
        let dp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if dp == 0.0 || !dp.is_finite() {
            break;
        }
        let next = x - p / dp;
        if !next.is_finite() || next == x {
            break;
        }
        x = next;
        let res = relative_residual(c, x);
        if res < best_res {
            best = x;
            best_res = res;
        } else if res > 4.0 * best_res {
            break;
        }
    }
    best
}

/// All real roots of c3 x^3 + c2 x^2 + c1 x + c0, sorted ascending, with
/// repeated roots reported once.
pub fn real_cubic_roots(c: [f64; 4]) -> Vec<f64> {
    let [c3, c2, c1, c0] = c;
    let mut roots = if c3 == 0.0 {
        quadratic_roots(c2, c1, c0)
    } else if c0 == 0.0 {
        let mut r = quadratic_roots(c3, c2, c1);
        r.push(0.0);
        r
    } else {
        let b = c2 / c3;
        let cc = c1 / c3;
        let d = c0 / c3;
        // x = t - b/3: t^3 + p t + q = 0
        let shift = b / 3.0;
        let p = cc - b * b / 3.0;
        let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
        let half_q = q / 2.0;
        let third_p = p / 3.0;
        let disc = half_q * half_q + third_p * third_p * third_p;
        if disc > 0.0 {
            let s = disc.sqrt();
            let u = (-half_q + if half_q > 0.0 { -s } else { s }).cbrt();
            let t = if u == 0.0 { 0.0 } else { u - third_p / u };
            vec![t - shift]
        } else if third_p == 0.0 {
            vec![-shift]
        } else {
            let m = 2.0 * (-third_p).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|j| m * (theta - 2.0 * PI * f64::from(j) / 3.0).cos() - shift)
                .collect()
        }
    };
    for r in roots.iter_mut() {
        *r = newton_polish(c, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(b.abs()));
    roots
}
