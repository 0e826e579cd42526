use approx::assert_relative_eq;
use sqrtpot::*;

fn state(a: [f64; 5], dim: u32, ell: u32, n: u32) -> BoundState {
    let p = PotentialParams::new(a, 1.0).unwrap();
    solve_bound_state(&p, &Channel::new(dim, ell, n).unwrap())
        .unwrap()
        .unwrap()
}

/// Fractional pair with a3 chosen so the series terminates.
fn terminating_fractional(a1: f64, dim: u32, ell: u32, n: u32) -> BoundState {
    let p = PotentialParams::new([0.0, a1, 0.0, 0.0, 0.0], 1.0).unwrap();
    let ch = Channel::new(dim, ell, n).unwrap();
    let a = solve_quantization_cubic(&p, &ch).unwrap()[0];
    let p = p.with_a3(termination_constrained_a3(&p, &ch, a).unwrap());
    solve_bound_state(&p, &ch).unwrap().unwrap()
}

/// Composite Simpson in t = ln r of N^2 R^2 r^(D-1) * r, over a range far
/// wider than the solver's own.
fn simpson_norm(wf: &RadialWavefunction) -> f64 {
    let d = f64::from(wf.state.channel.dim);
    let a = wf.state.factors.a;
    let (t0, t1) = ((1e-14 / a).ln(), (400.0 / a).ln());
    let steps = 40_000;
    let h = (t1 - t0) / steps as f64;
    let f = |t: f64| {
        let r = t.exp();
        let v = wf.evaluate(r).unwrap();
        v * v * r.powf(d)
    };
    let mut sum = f(t0) + f(t1);
    for i in 1..steps {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t0 + h * i as f64);
    }
    sum * h / 3.0
}

fn sample_states() -> Vec<BoundState> {
    vec![
        state([0.0, 0.0, -1.0, 0.0, 0.0], 3, 0, 0),
        state([0.0, 0.0, -1.0, 0.0, 0.0], 3, 1, 2),
        state([0.0, 0.0, -1.0, 0.0, 0.0], 2, 0, 4),
        state([0.3, 0.0, -1.5, 0.0, 1.0], 4, 2, 2),
        state([0.0, 0.0, -0.7, 0.0, 0.4], 6, 3, 4),
        state([0.0, -1.0, 0.0, 0.0, 0.0], 3, 0, 0),
        state([0.2, -0.6, -0.4, 0.3, 0.5], 5, 1, 3),
        terminating_fractional(-1.0, 3, 0, 0),
        terminating_fractional(-2.0, 4, 1, 1),
    ]
}

#[test]
fn every_state_is_normalized() {
    for st in sample_states() {
        let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
        let check = simpson_norm(&wf);
        assert!((check - 1.0).abs() < 1e-8, "{:?}: norm {check}", st.channel);
        assert!(wf.norm_constant > 0.0 && wf.norm_constant.is_finite());
    }
}

#[test]
fn hydrogen_normalization_constant() {
    let wf = normalize(
        &state([0.0, 0.0, -1.0, 0.0, 0.0], 3, 0, 0),
        &NormalizationConfig::default(),
    )
    .unwrap();
    assert!((wf.norm_constant - 2.0).abs() < 1e-8);
}

#[test]
fn fractional_ground_state_normalizes() {
    let st = terminating_fractional(-1.0, 3, 0, 0);
    assert_relative_eq!(st.params.a3, 0.75 * 2f64.cbrt(), max_relative = 1e-15);
    let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
    assert!(wf.norm_constant > 0.0);
    assert!(!wf.approximate);
    assert_eq!(count_radial_nodes(&wf), 0);
}

#[test]
fn tails_vanish_and_grids_are_increasing() {
    for st in sample_states() {
        let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
        assert!(wf.grid.windows(2).all(|w| w[1] > w[0]));
        assert!(wf.grid[0] > 0.0);
        let max = wf.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(
            wf.values.last().unwrap().abs() < 1e-6 * max,
            "{:?}",
            st.channel
        );
    }
}

#[test]
fn small_r_power_law() {
    for st in sample_states() {
        let k = st.factors.k;
        if k == 0.0 {
            continue;
        }
        let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
        let r0 = wf.grid[0];
        let i1 = wf.grid.iter().position(|&r| r >= 10.0 * r0).unwrap();
        let slope = (wf.values[i1].abs().ln() - wf.values[0].abs().ln()) / (wf.grid[i1] / r0).ln();
        assert!(
            (slope - k / 2.0).abs() <= 0.05 * k / 2.0,
            "{:?}: slope {slope} vs {}",
            st.channel,
            k / 2.0
        );
    }
}

#[test]
fn node_counts_follow_radial_quantum_number() {
    let mie = state([0.0, 0.0, -1.0, 0.0, 1.0], 3, 0, 2);
    let wf = normalize(&mie, &NormalizationConfig::default()).unwrap();
    assert_eq!(count_radial_nodes(&wf), 1);
    for n_r in 0..4 {
        let st = state([0.0, 0.0, -1.0, 0.0, 0.0], 4, 1, 2 * n_r);
        let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
        assert_eq!(count_radial_nodes(&wf), n_r as usize);
    }
}

#[test]
fn normalization_preserves_energy_and_nodes() {
    for st in sample_states() {
        let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
        assert_eq!(wf.state.energy, st.energy);
        let raw: Vec<f64> = wf
            .grid
            .iter()
            .map(|&r| evaluate_unnormalized(&st, r).unwrap())
            .collect();
        assert_eq!(
            sqrtpot::wavefunction::count_sign_changes(&raw),
            count_radial_nodes(&wf)
        );
    }
}

fn max_fd_residual(st: &BoundState, h: f64) -> f64 {
    let eq = effective_radial_coefficients(&st.params, &st.channel, st.energy).unwrap();
    let a = st.factors.a;
    let (lo, hi) = (0.5 / a, 6.0 / a);
    let steps = ((hi - lo) / h).round() as usize;
    let f = |r: f64| evaluate_unnormalized(st, r).unwrap();
    (1..steps)
        .map(|i| {
            let r = lo + h * i as f64;
            let (m, c, p) = (f(r - h), f(r), f(r + h));
            let d1 = (p - m) / (2.0 * h);
            let d2 = (p - 2.0 * c + m) / (h * h);
            eq.residual(r, c, d1, d2).unwrap().abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn exact_states_solve_the_radial_equation() {
    for st in sample_states() {
        if !st.series.is_terminating() {
            continue;
        }
        let h = 0.02 / st.factors.a;
        let coarse = max_fd_residual(&st, h);
        let fine = max_fd_residual(&st, h / 2.0);
        let order = (coarse / fine).log2();
        assert!(
            order >= 1.9,
            "{:?}: residuals {coarse:e} -> {fine:e}",
            st.channel
        );
    }
}

#[test]
fn non_terminating_state_is_flagged() {
    let st = state([0.0, -1.0, 0.0, 0.0, 0.0], 3, 0, 0);
    let wf = normalize(&st, &NormalizationConfig::default()).unwrap();
    assert!(wf.approximate);
}
