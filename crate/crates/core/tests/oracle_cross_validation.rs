use sqrtpot::*;

fn oracle_for(
    state: &BoundState,
    params: &PotentialParams,
    nodes: usize,
) -> (OracleConfig, OracleResult) {
    let cfg = OracleConfig::for_energy(params, &state.channel, state.energy, nodes).unwrap();
    let res = shoot_eigenvalue(params, &state.channel, &cfg).unwrap();
    (cfg, res)
}

#[test]
fn coulomb_and_mie_agree_with_closed_forms() {
    // every (D, l, n_r) combination in the stated ranges, two potentials each
    for dim in 2..=6 {
        for ell in 0..=3 {
            for n_r in 0..=2u32 {
                for (a0, a2, a4) in [(0.0, -1.0, 0.0), (0.4, -1.3, 0.8)] {
                    let p = PotentialParams::new([a0, 0.0, a2, 0.0, a4], 1.0).unwrap();
                    let ch = Channel::new(dim, ell, 2 * n_r).unwrap();
                    let st = solve_bound_state(&p, &ch).unwrap().unwrap();
                    let closed = energy_mie(1.0, a0, a2, a4, dim, ell, n_r).unwrap();
                    let (_, res) = oracle_for(&st, &p, n_r as usize);
                    let rel = ((res.energy - closed) / closed).abs();
                    assert!(
                        rel < 1e-5,
                        "D={dim} l={ell} n_r={n_r}: {} vs {closed}",
                        res.energy
                    );
                    assert_eq!(res.nodes, n_r as usize);
                    assert!(res.match_defect.abs() < 1e-8, "defect {}", res.match_defect);
                }
            }
        }
    }
}

#[test]
fn grid_refinement_converges_with_order_at_least_two() {
    for (dim, ell, n_r) in [(3, 0, 0), (3, 1, 1), (5, 2, 2), (4, 0, 1)] {
        let p = PotentialParams::new([0.0, 0.0, -1.0, 0.0, 0.0], 1.0).unwrap();
        let st = solve_bound_state(&p, &Channel::new(dim, ell, 2 * n_r).unwrap())
            .unwrap()
            .unwrap();
        let exact = energy_coulomb(1.0, -1.0, dim, ell, n_r).unwrap();
        let (cfg, coarse) = oracle_for(&st, &p, n_r as usize);
        let fine = shoot_eigenvalue(&p, &st.channel, &cfg.refined()).unwrap();
        let e_coarse = (coarse.energy - exact).abs();
        let e_fine = (fine.energy - exact).abs();
        assert!(
            e_fine <= e_coarse / 4.0 + 1e-10 * exact.abs(),
            "{e_coarse:e} -> {e_fine:e}"
        );
    }
}

#[test]
fn terminating_fractional_states_are_exact() {
    for (a1, dim, ell, n) in [
        (-1.0, 3, 0, 0),
        (-0.5, 4, 1, 0),
        (-2.0, 3, 0, 1),
        (-1.0, 5, 1, 2),
    ] {
        let p = PotentialParams::new([0.0, a1, 0.0, 0.0, 0.0], 1.0).unwrap();
        let ch = Channel::new(dim, ell, n).unwrap();
        let a = solve_quantization_cubic(&p, &ch).unwrap()[0];
        let p = p.with_a3(termination_constrained_a3(&p, &ch, a).unwrap());
        let st = solve_bound_state(&p, &ch).unwrap().unwrap();
        assert!(st.series.is_terminating());
        let nodes = count_radial_nodes(&normalize(&st, &NormalizationConfig::default()).unwrap());
        let (cfg, res) = oracle_for(&st, &p, nodes);
        let rel = ((res.energy - st.energy) / st.energy).abs();
        assert!(
            rel < 1e-6,
            "{ch:?}: oracle {} vs ansatz {}",
            res.energy,
            st.energy
        );
        let fine = shoot_eigenvalue(&p, &ch, &cfg.refined()).unwrap();
        let rel_fine = ((fine.energy - st.energy) / st.energy).abs();
        assert!(
            rel_fine < rel / 3.0 || rel_fine < 1e-10,
            "{ch:?}: {rel:e} -> {rel_fine:e}"
        );
        assert_eq!(res.nodes, nodes);
    }
}

#[test]
fn non_terminating_fractional_energy_is_not_an_eigenvalue() {
    // a3 = 0 with a1 != 0: the cubic still yields an energy, but it is not
    // the true ground state of the potential
    let p = PotentialParams::new([0.0, -1.0, 0.0, 0.0, 0.0], 1.0).unwrap();
    let ch = Channel::new(3, 0, 0).unwrap();
    let st = solve_bound_state(&p, &ch).unwrap().unwrap();
    let (_, res) = oracle_for(&st, &p, 0);
    assert!(((res.energy - st.energy) / st.energy).abs() > 1e-3);
}

#[test]
fn oracle_rejects_supercritical_inverse_square() {
    let p = PotentialParams::new([0.0, 0.0, -1.0, 0.0, -0.2], 1.0).unwrap();
    let ch = Channel::new(3, 0, 0).unwrap();
    let err = shoot_eigenvalue(&p, &ch, &OracleConfig::for_decay_rate(1.0, 0)).unwrap_err();
    assert!(matches!(err, Error::SupercriticalA4 { .. }));
}
