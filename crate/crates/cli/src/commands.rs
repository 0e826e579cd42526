use rayon::prelude::*;
use serde_json::Value;
use sqrtpot::closed_forms::closed_form_energy;
use sqrtpot::{
    count_radial_nodes, normalize, shoot_eigenvalue, solve_bound_state, solve_quantization_cubic,
    termination_constrained_a3, BoundState, Channel, NormalizationConfig, OracleConfig,
    PotentialParams,
};

use crate::error::{CliError, Result};
use crate::job::{Format, GridOverrides, JobSpec, Mode};
use crate::table::{format_float, Cell, Table};

pub const DEFAULT_CLOSED_FORM_TOL: f64 = 1e-10;
pub const DEFAULT_ORACLE_TOL: f64 = 1e-5;

/// Rendered output plus the verdict; the body is written even when the
/// verdict is a failure.
#[derive(Debug)]
pub struct Report {
    pub body: String,
    pub outcome: Result<()>,
}

pub fn run(spec: &JobSpec) -> Result<Report> {
    match spec.mode {
        Mode::Spectrum => {
            let mut plain = spec.clone();
            plain.sweeps.clear();
            Ok(Report {
                body: grid_table(&plain)?.render(spec.format)?,
                outcome: Ok(()),
            })
        }
        Mode::Sweep => Ok(Report {
            body: grid_table(spec)?.render(spec.format)?,
            outcome: Ok(()),
        }),
        Mode::Wavefn => wavefn(spec).map(|body| Report {
            body,
            outcome: Ok(()),
        }),
        Mode::Validate => validate(spec),
    }
}

/// Parameters for one channel, with a3 replaced by its terminating value if
/// requested. `None` when the channel has no positive quantization root.
fn channel_params(
    params: &PotentialParams,
    ch: &Channel,
    constrain_a3: bool,
) -> Result<Option<PotentialParams>> {
    if !constrain_a3 {
        return Ok(Some(*params));
    }
    let Some(&a) = solve_quantization_cubic(params, ch)?.first() else {
        return Ok(None);
    };
    Ok(Some(
        params.with_a3(termination_constrained_a3(params, ch, a)?),
    ))
}

fn normalization_config(grid: &GridOverrides, state: &BoundState) -> NormalizationConfig {
    let mut cfg = NormalizationConfig::default();
    if let Some(points) = grid.points {
        cfg.grid_points = points;
    }
    if let Some(r_min) = grid.r_min {
        cfg.r_min_factor = r_min * state.factors.a;
    }
    cfg.r_max = grid.r_max;
    cfg
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    pub energy: f64,
    pub nodes: usize,
}

/// Shooting-method energy for the state with the same node count as the
/// normalized ansatz function.
pub fn oracle_check(state: &BoundState, grid: &GridOverrides) -> Result<OracleCheck> {
    let wf = normalize(state, &NormalizationConfig::default())?;
    let nodes = count_radial_nodes(&wf);
    let mut cfg = OracleConfig::for_energy(&state.params, &state.channel, state.energy, nodes)?;
    if let Some(points) = grid.points {
        cfg.num_points = points;
    }
    if let Some(r_min) = grid.r_min {
        cfg.r_min = r_min;
    }
    if let Some(r_max) = grid.r_max {
        cfg.r_max = r_max;
    }
    let res = shoot_eigenvalue(&state.params, &state.channel, &cfg)?;
    Ok(OracleCheck {
        energy: res.energy,
        nodes: res.nodes,
    })
}

fn spectrum_columns(spec: &JobSpec) -> Vec<String> {
    let mut cols: Vec<String> = [
        "dim",
        "ell",
        "n",
        "bound",
        "energy",
        "A",
        "B",
        "k_plus",
        "termination_residual_1",
        "termination_residual_2",
    ]
    .map(String::from)
    .into();
    if spec.constrain_a3 {
        cols.push("a3".into());
    }
    if spec.oracle {
        cols.extend(["oracle_energy", "oracle_nodes", "oracle_status"].map(String::from));
    }
    cols
}

fn spectrum_row(spec: &JobSpec, params: &PotentialParams, ch: &Channel) -> Result<Vec<Cell>> {
    let mut row: Vec<Cell> = vec![ch.dim.into(), ch.ell.into(), ch.n.into()];
    let params = channel_params(params, ch, spec.constrain_a3)?;
    let state = match params {
        Some(p) => solve_bound_state(&p, ch)?,
        None => None,
    };
    let Some(st) = state else {
        row.push(false.into());
        row.resize(spectrum_columns(spec).len(), Cell::Empty);
        return Ok(row);
    };
    row.extend([
        true.into(),
        st.energy.into(),
        st.factors.a.into(),
        st.factors.b.into(),
        st.factors.k.into(),
        st.series.termination_residual_1.into(),
        st.series.termination_residual_2.into(),
    ]);
    if spec.constrain_a3 {
        row.push(st.params.a3.into());
    }
    if spec.oracle {
        match oracle_check(&st, &spec.grid) {
            Ok(o) => row.extend([o.energy.into(), o.nodes.into(), "ok".into()]),
            Err(e) => row.extend([Cell::Empty, Cell::Empty, e.kind().into()]),
        }
    }
    Ok(row)
}

fn swept_params(base: &PotentialParams, keys: &[&str], values: &[f64]) -> Result<PotentialParams> {
    let mut c = base.coefficients();
    let mut mass = base.mass;
    for (key, &v) in keys.iter().zip(values) {
        match *key {
            "mass" => mass = v,
            k => c[k[1..].parse::<usize>().expect("sweep key validated")] = v,
        }
    }
    Ok(PotentialParams::new(c, mass)?)
}

/// Long-format table over the swept parameter grid (first axis outermost)
/// and all channels. Rows are computed in parallel and assembled in order.
pub fn grid_table(spec: &JobSpec) -> Result<Table> {
    let channels = spec.channels();
    let points: usize = spec.sweeps.iter().map(|a| a.values.len()).product();
    let total = points
        .checked_mul(channels.len())
        .filter(|&t| t <= spec.cap)
        .ok_or_else(|| {
            let needed = (points as u128) * (channels.len() as u128);
            CliError::Usage(format!(
                "job needs {needed} rows, above the cap of {}; rerun with --cap {needed} or split it",
                spec.cap
            ))
        })?;
    let (start, end) = match spec.chunk_size {
        Some(size) => {
            let start = spec.chunk.saturating_mul(size);
            if start >= total && total > 0 {
                return Err(CliError::Usage(format!(
                    "chunk {} is past the end: {total} rows in {} chunks of {size}",
                    spec.chunk,
                    total.div_ceil(size)
                )));
            }
            (start, (start + size).min(total))
        }
        None if spec.chunk > 0 => return Err(CliError::Usage("chunk requires chunk_size".into())),
        None => (0, total),
    };

    let keys: Vec<&str> = spec.sweeps.iter().map(|a| a.key.as_str()).collect();
    let mut columns: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    columns.extend(spectrum_columns(spec));
    let mut table = Table::new(columns);

    let rows: Vec<Result<Vec<Cell>>> = (start..end)
        .into_par_iter()
        .map(|i| {
            let (point, ch) = (i / channels.len(), &channels[i % channels.len()]);
            // mixed radix, last axis fastest
            let mut rem = point;
            let mut values = vec![0.0; keys.len()];
            for (slot, axis) in values.iter_mut().zip(&spec.sweeps).rev() {
                *slot = axis.values[rem % axis.values.len()];
                rem /= axis.values.len();
            }
            let params = swept_params(&spec.params, &keys, &values)?;
            let mut row: Vec<Cell> = values.iter().map(|&v| v.into()).collect();
            row.extend(spectrum_row(spec, &params, ch)?);
            Ok(row)
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

fn single_channel(spec: &JobSpec) -> Result<Channel> {
    match spec.channels()[..] {
        [ch] => Ok(ch),
        ref all => Err(CliError::Usage(format!(
            "wavefn needs exactly one (dim, ell, n) channel, got {}",
            all.len()
        ))),
    }
}

fn wavefn(spec: &JobSpec) -> Result<String> {
    let ch = single_channel(spec)?;
    let unbound = || {
        sqrtpot::Error::NoBinding(format!(
            "no bound state for D={} l={} n={}",
            ch.dim, ch.ell, ch.n
        ))
    };
    let params = channel_params(&spec.params, &ch, spec.constrain_a3)?.ok_or_else(unbound)?;
    let st = solve_bound_state(&params, &ch)?.ok_or_else(unbound)?;
    let wf = normalize(&st, &normalization_config(&spec.grid, &st))?;

    let mut meta: Vec<(&str, Cell)> = vec![
        ("dim", ch.dim.into()),
        ("ell", ch.ell.into()),
        ("n", ch.n.into()),
        ("a0", params.a0.into()),
        ("a1", params.a1.into()),
        ("a2", params.a2.into()),
        ("a3", params.a3.into()),
        ("a4", params.a4.into()),
        ("mass", params.mass.into()),
        ("energy", st.energy.into()),
        ("A", st.factors.a.into()),
        ("B", st.factors.b.into()),
        ("k_plus", st.factors.k.into()),
        ("norm_constant", wf.norm_constant.into()),
        ("nodes", count_radial_nodes(&wf).into()),
        (
            "termination_residual_1",
            st.series.termination_residual_1.into(),
        ),
        (
            "termination_residual_2",
            st.series.termination_residual_2.into(),
        ),
        ("approximate", wf.approximate.into()),
    ];
    if spec.oracle {
        let o = oracle_check(&st, &spec.grid)?;
        meta.push(("oracle_energy", o.energy.into()));
        meta.push(("oracle_nodes", o.nodes.into()));
    }

    match spec.format {
        Format::Csv => {
            let mut out = String::new();
            for (key, cell) in &meta {
                let text = match cell {
                    Cell::Float(v) => format_float(*v),
                    Cell::Int(v) => v.to_string(),
                    Cell::Bool(v) => v.to_string(),
                    Cell::Text(v) => v.clone(),
                    Cell::Empty => String::new(),
                };
                out.push_str(&format!("# {key} = {text}\n"));
            }
            out.push_str("# r R\n");
            for (r, v) in wf.grid.iter().zip(&wf.values) {
                out.push_str(&format!("{} {}\n", format_float(*r), format_float(*v)));
            }
            Ok(out)
        }
        Format::Json => {
            let mut t = Table::new(meta.iter().map(|(k, _)| k.to_string()).collect());
            t.push(meta.into_iter().map(|(_, c)| c).collect());
            let Value::Array(mut rows) = t.to_json_value() else {
                unreachable!()
            };
            let Value::Object(mut obj) = rows.remove(0) else {
                unreachable!()
            };
            let column = |xs: &[f64]| Value::Array(xs.iter().map(|&x| Value::from(x)).collect());
            obj.insert("r".into(), column(&wf.grid));
            obj.insert("R".into(), column(&wf.values));
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json encoding");
            s.push('\n');
            Ok(s)
        }
    }
}

struct Case {
    name: &'static str,
    params: PotentialParams,
    constrain_a3: bool,
}

fn validation_cases(spec: &JobSpec) -> Vec<Case> {
    if spec.explicit_params {
        return vec![Case {
            name: "custom",
            params: spec.params,
            constrain_a3: spec.constrain_a3,
        }];
    }
    let m = spec.params.mass;
    let p = |a: [f64; 5]| PotentialParams {
        a0: a[0],
        a1: a[1],
        a2: a[2],
        a3: a[3],
        a4: a[4],
        mass: m,
    };
    vec![
        Case {
            name: "coulomb",
            params: p([0.0, 0.0, -1.0, 0.0, 0.0]),
            constrain_a3: false,
        },
        Case {
            name: "mie",
            params: p([0.0, 0.0, -1.0, 0.0, 1.0]),
            constrain_a3: false,
        },
        Case {
            name: "fractional",
            params: p([0.0, -1.0, 0.0, 0.0, 0.0]),
            constrain_a3: true,
        },
    ]
}

const VALIDATE_COLUMNS: &[&str] = &[
    "case",
    "dim",
    "ell",
    "n",
    "a0",
    "a1",
    "a2",
    "a3",
    "a4",
    "mass",
    "bound",
    "energy_ansatz",
    "energy_closed",
    "abs_delta_closed",
    "rel_delta_closed",
    "energy_oracle",
    "abs_delta_oracle",
    "rel_delta_oracle",
    "termination_residual_1",
    "termination_residual_2",
    "terminating",
    "pass",
];

fn validate_row(spec: &JobSpec, case: &Case, ch: &Channel) -> Result<(Vec<Cell>, bool)> {
    let closed_tol = spec.tol.unwrap_or(DEFAULT_CLOSED_FORM_TOL);
    let oracle_tol = spec.tol.unwrap_or(DEFAULT_ORACLE_TOL);
    let params = channel_params(&case.params, ch, case.constrain_a3)?.unwrap_or(case.params);
    let state = solve_bound_state(&params, ch)?;
    let mut row: Vec<Cell> = vec![case.name.into(), ch.dim.into(), ch.ell.into(), ch.n.into()];
    row.extend(params.coefficients().map(Cell::from));
    row.push(params.mass.into());
    row.push(state.is_some().into());
    let Some(st) = state else {
        row.resize(VALIDATE_COLUMNS.len() - 1, Cell::Empty);
        row.push(false.into());
        return Ok((row, false));
    };
    // appends (reference, |delta|, |delta|/|reference|) and reports whether it passed
    let compare = |reference: Option<f64>, tol: f64, row: &mut Vec<Cell>| match reference {
        Some(e) => {
            let abs = (st.energy - e).abs();
            let rel = abs / e.abs();
            row.extend([e.into(), abs.into(), rel.into()]);
            rel < tol
        }
        None => {
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
            true
        }
    };
    row.push(st.energy.into());
    let closed = match closed_form_energy(&params, ch.dim, ch.ell, ch.n) {
        Some(Ok(e)) => Some(e),
        // no closed form for this channel
        Some(Err(_)) | None => None,
    };
    let mut pass = compare(closed, closed_tol, &mut row);
    if spec.oracle {
        let oracle = oracle_check(&st, &spec.grid).ok();
        pass &= oracle.is_some();
        pass &= compare(oracle.map(|o| o.energy), oracle_tol, &mut row);
    } else {
        compare(None, oracle_tol, &mut row);
    }
    row.extend([
        st.series.termination_residual_1.into(),
        st.series.termination_residual_2.into(),
        st.series.is_terminating().into(),
        pass.into(),
    ]);
    Ok((row, pass))
}

fn validate(spec: &JobSpec) -> Result<Report> {
    let cases = validation_cases(spec);
    let channels = spec.channels();
    let jobs: Vec<(&Case, &Channel)> = cases
        .iter()
        .flat_map(|c| channels.iter().map(move |ch| (c, ch)))
        .collect();
    if jobs.len() > spec.cap {
        return Err(CliError::Usage(format!(
            "job needs {} rows, above the cap of {}",
            jobs.len(),
            spec.cap
        )));
    }
    let results: Vec<Result<(Vec<Cell>, bool)>> = jobs
        .par_iter()
        .map(|(case, ch)| validate_row(spec, case, ch))
        .collect();
    let mut table = Table::new(VALIDATE_COLUMNS.iter().map(|s| s.to_string()).collect());
    let mut failed = 0;
    for r in results {
        let (row, pass) = r?;
        failed += usize::from(!pass);
        table.push(row);
    }
    let total = table.rows.len();
    Ok(Report {
        body: table.render(spec.format)?,
        outcome: if failed == 0 {
            Ok(())
        } else {
            Err(CliError::Validation { failed, total })
        },
    })
}
