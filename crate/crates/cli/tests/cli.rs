use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sqrtpot::energy_fractional_pair;

fn sqrtpot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqrtpot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// CSV body as header plus rows of fields.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<String> {
    let (header, rows) = csv_rows(text);
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.into_iter().map(|r| r[i].clone()).collect()
}

fn floats(cells: Vec<String>) -> Vec<f64> {
    cells.iter().map(|c| c.parse().unwrap()).collect()
}

fn wavefunction(text: &str) -> (Vec<f64>, Vec<f64>) {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .unzip()
}

fn header_value(text: &str, key: &str) -> String {
    let prefix = format!("# {key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no header {key}"))
        .to_string()
}

fn error_record(out: &Output) -> Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(stderr.lines().next().unwrap()).unwrap()
}

#[test]
fn coulomb_spectrum() {
    let out = stdout(&sqrtpot(&[
        "spectrum", "--a2", "-1", "--dim", "3", "--ell", "0..1", "--nr", "0..1",
    ]));
    let e = floats(column(&out, "energy"));
    let expected = [-0.5, -0.125, -0.125, -1.0 / 18.0];
    for (a, b) in e.iter().zip(expected) {
        assert!(((a - b) / b).abs() < 1e-14, "{e:?}");
    }
    assert_eq!(column(&out, "ell"), ["0", "0", "1", "1"]);
    assert_eq!(column(&out, "n"), ["0", "2", "0", "2"]);
}

#[test]
fn no_binding_terms_means_all_unbound() {
    let out = stdout(&sqrtpot(&[
        "spectrum", "--a4", "0.5", "--dim", "2..4", "--ell", "0..2", "--n", "0..3",
    ]));
    let bound = column(&out, "bound");
    assert_eq!(bound.len(), 36);
    assert!(bound.iter().all(|b| b == "false"));
    assert!(column(&out, "energy").iter().all(String::is_empty));
}

#[test]
fn fractional_spectrum_matches_closed_form() {
    let out = stdout(&sqrtpot(&["spectrum", "--a1", "-1", "--n", "0..2"]));
    for (n, e) in floats(column(&out, "energy")).into_iter().enumerate() {
        let closed = energy_fractional_pair(1.0, -1.0, 3, 0, n as u32).unwrap();
        assert!(((e - closed) / closed).abs() < 1e-12);
    }
}

#[test]
fn constrained_a3_column() {
    let out = stdout(&sqrtpot(&[
        "spectrum",
        "--a1",
        "-1",
        "--n",
        "0..2",
        "--constrain-a3",
    ]));
    let a3 = floats(column(&out, "a3"));
    assert!((a3[0] - 0.75 * 2f64.cbrt()).abs() < 1e-14);
    for r in floats(column(&out, "termination_residual_1")) {
        assert!(r.abs() < 1e-9);
    }
}

#[test]
fn hydrogen_wavefunction_file() {
    let out = stdout(&sqrtpot(&["wavefn", "--a2", "-1"]));
    assert_eq!(header_value(&out, "nodes"), "0");
    let n: f64 = header_value(&out, "norm_constant").parse().unwrap();
    assert!((n - 2.0).abs() < 1e-8);
    let (r, v) = wavefunction(&out);
    assert!(r.windows(2).all(|w| w[1] > w[0]));
    assert!(v.windows(2).all(|w| w[1] <= w[0]), "monotone decay");
    assert!((v[0] - 2.0).abs() < 1e-5, "maximum at the origin");
}

#[test]
fn excited_mie_state_has_one_node() {
    let out = stdout(&sqrtpot(&[
        "wavefn", "--a2", "-1", "--a4", "1", "--nr", "1",
    ]));
    let (_, v) = wavefunction(&out);
    let signs: Vec<bool> = v.iter().filter(|x| **x != 0.0).map(|x| *x > 0.0).collect();
    assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
}

#[test]
fn wavefunction_files_reintegrate_to_one() {
    let cases: &[&[&str]] = &[
        &["--a2", "-1"],
        &["--a2", "-1", "--a4", "1", "--nr", "1"],
        &["--a1", "-1", "--constrain-a3", "--n", "2", "--dim", "4"],
        &[
            "--a0", "0.2", "--a2", "-1.5", "--a4", "0.3", "--ell", "2", "--dim", "5", "--nr", "2",
        ],
    ];
    for extra in cases {
        let mut args = vec!["wavefn", "--grid-points", "20000"];
        args.extend_from_slice(extra);
        let out = stdout(&sqrtpot(&args));
        let d: f64 = header_value(&out, "dim").parse().unwrap();
        let (r, v) = wavefunction(&out);
        // trapezoid in ln r of R^2 r^D
        let f: Vec<f64> = r.iter().zip(&v).map(|(r, v)| v * v * r.powf(d)).collect();
        let norm: f64 = (1..r.len())
            .map(|i| 0.5 * (f[i] + f[i - 1]) * (r[i] / r[i - 1]).ln())
            .sum();
        assert!((norm - 1.0).abs() < 1e-6, "{extra:?}: {norm}");
    }
}

#[test]
fn wavefunction_json_matches_text() {
    let text = stdout(&sqrtpot(&[
        "wavefn",
        "--a2",
        "-1",
        "--a4",
        "1",
        "--grid-points",
        "50",
    ]));
    let json: Value = serde_json::from_str(&stdout(&sqrtpot(&[
        "wavefn",
        "--a2",
        "-1",
        "--a4",
        "1",
        "--grid-points",
        "50",
        "--format",
        "json",
    ])))
    .unwrap();
    let (r, v) = wavefunction(&text);
    let jr: Vec<f64> = json["r"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let jv: Vec<f64> = json["R"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!((r, v), (jr, jv));
    assert_eq!(
        json["energy"].as_f64().unwrap().to_string(),
        header_value(&text, "energy")
            .parse::<f64>()
            .unwrap()
            .to_string()
    );
}

#[test]
fn unbound_wavefunction_is_an_error_record() {
    let out = sqrtpot(&["wavefn", "--a2", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "no_binding");
    assert!(out.stdout.is_empty());
}

#[test]
fn default_validation_suite_passes() {
    let out = sqrtpot(&["validate", "--oracle"]);
    let text = stdout(&out);
    assert_eq!(column(&text, "case"), ["coulomb", "mie", "fractional"]);
    assert!(column(&text, "pass").iter().all(|p| p == "true"));
    assert!(column(&text, "terminating").iter().all(|p| p == "true"));
}

#[test]
fn corrupted_a3_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = sqrtpot(&[
        "validate",
        "--a1",
        "-1",
        "--a3",
        "0.5",
        "--oracle",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(column(&text, "terminating"), ["false"]);
    assert_eq!(column(&text, "pass"), ["false"]);
    // the cubic still reproduces the closed form; only the oracle disagrees
    assert!(floats(column(&text, "rel_delta_closed"))[0] < 1e-10);
    assert!(floats(column(&text, "rel_delta_oracle"))[0] > 1e-3);
    assert!(floats(column(&text, "termination_residual_1"))[0].abs() > 1e-3);
}

#[test]
fn zero_tolerance_fails_but_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = sqrtpot(&[
        "validate",
        "--tol",
        "0",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["exit_code"], 2);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.as_array().unwrap().len(), 3);
}

#[test]
fn inverse_square_barrier_weakens_binding() {
    let out = stdout(&sqrtpot(&["sweep", "--a2", "-1", "--sweep", "a4=0,0.5,1"]));
    assert_eq!(column(&out, "a4").len(), 3);
    let e = floats(column(&out, "energy"));
    assert!(e[0] < e[1] && e[1] < e[2] && e[2] < 0.0, "{e:?}");
}

#[test]
fn single_point_sweep_equals_spectrum() {
    let spectrum = stdout(&sqrtpot(&[
        "spectrum", "--a1", "-0.7", "--a2", "-0.3", "--ell", "1", "--oracle",
    ]));
    let sweep = stdout(&sqrtpot(&[
        "sweep", "--a2", "-0.3", "--ell", "1", "--sweep", "a1=-0.7", "--oracle",
    ]));
    let (_, s_rows) = csv_rows(&spectrum);
    let (header, w_rows) = csv_rows(&sweep);
    assert_eq!(header[0], "a1");
    assert_eq!(w_rows[0][1..], s_rows[0][..]);
}

#[test]
fn fractional_energy_scales_with_four_thirds_power() {
    let out = stdout(&sqrtpot(&[
        "sweep", "--sweep", "a1=-1,-8", "--n", "1", "--ell", "2", "--dim", "4",
    ]));
    let e = floats(column(&out, "energy"));
    assert!((e[1] / e[0] - 16.0).abs() < 1e-12);
}

#[test]
fn cap_is_enforced_with_required_value() {
    let out = sqrtpot(&[
        "sweep",
        "--a2",
        "-1",
        "--sweep",
        "a4=0:1:101",
        "--sweep",
        "a0=0:1:101",
        "--dim",
        "2..11",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let msg = error_record(&out)["message"].as_str().unwrap().to_string();
    assert!(msg.contains("102010") && msg.contains("100000"), "{msg}");
    let ok = sqrtpot(&["sweep", "--a2", "-1", "--sweep", "a4=0:1:11", "--cap", "11"]);
    assert!(ok.status.success());
}

#[test]
fn chunks_reassemble_the_full_sweep() {
    let base = [
        "sweep",
        "--a2",
        "-1",
        "--sweep",
        "a4=0:2:7",
        "--sweep",
        "a0=-1,0,1",
        "--ell",
        "0..1",
    ];
    let full = stdout(&sqrtpot(&base));
    let (header, full_rows) = csv_rows(&full);
    assert_eq!(full_rows.len(), 42);
    let mut joined = Vec::new();
    for chunk in 0..5 {
        let mut args = base.to_vec();
        let c = chunk.to_string();
        args.extend(["--chunk-size", "10", "--chunk", &c]);
        let (h, rows) = csv_rows(&stdout(&sqrtpot(&args)));
        assert_eq!(h, header);
        joined.extend(rows);
    }
    assert_eq!(joined, full_rows);
    let past = sqrtpot(&[&base[..], &["--chunk-size", "10", "--chunk", "5"]].concat());
    assert_eq!(past.status.code(), Some(3));
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let args = [
        "sweep",
        "--a1",
        "-0.3",
        "--a2",
        "-1",
        "--sweep",
        "a4=0,0.25",
        "--dim",
        "2..4",
        "--nr",
        "0..1",
    ];
    let csv = stdout(&sqrtpot(&args));
    let json: Value = serde_json::from_str(&stdout(&sqrtpot(
        &[&args[..], &["--format", "json"]].concat(),
    )))
    .unwrap();
    let (header, rows) = csv_rows(&csv);
    let objects = json.as_array().unwrap();
    assert_eq!(objects.len(), rows.len());
    for (row, obj) in rows.iter().zip(objects) {
        for (name, cell) in header.iter().zip(row) {
            let v = &obj[name];
            match (cell.parse::<f64>(), v.as_f64()) {
                (Ok(a), Some(b)) => assert_eq!(a.to_bits(), b.to_bits(), "{name}"),
                _ => assert_eq!(cell, &v.to_string()),
            }
        }
    }
}

#[test]
fn config_file_with_command_line_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.cfg");
    std::fs::write(
        &cfg,
        "# hydrogen-like\na2 = -1\ndim = 3\nell = 0..1\nformat = json\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let json: Value = serde_json::from_str(&stdout(&sqrtpot(&[
        "spectrum", "--config", cfg, "--ell", "2",
    ])))
    .unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["ell"], 2);
    assert_eq!(rows[0]["energy"].as_f64().unwrap(), -0.5 / 9.0);

    std::fs::write(dir.path().join("bad.cfg"), "colour = blue\n").unwrap();
    let out = sqrtpot(&[
        "spectrum",
        "--config",
        dir.path().join("bad.cfg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let missing = sqrtpot(&["spectrum", "--config", "/nonexistent/job.cfg"]);
    assert_eq!(missing.status.code(), Some(3));
    assert_eq!(error_record(&missing)["error"], "io");
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let out = sqrtpot(&["spectrum", "--a2", "-1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(Path::new(&path).exists());
    let unwritable = sqrtpot(&["spectrum", "--a2", "-1", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(unwritable.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(sqrtpot(&["--help"]).status.code(), Some(0));
    assert_eq!(sqrtpot(&["--version"]).status.code(), Some(0));
    assert_eq!(sqrtpot(&["spectrum", "--help"]).status.code(), Some(0));
    let bad_flag = sqrtpot(&["spectrum", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(3));
    assert_eq!(error_record(&bad_flag)["error"], "usage");
    let bad_mass = sqrtpot(&["spectrum", "--mass", "0"]);
    assert_eq!(bad_mass.status.code(), Some(3));
    assert_eq!(error_record(&bad_mass)["error"], "invalid_params");
    let supercritical = sqrtpot(&["spectrum", "--a2", "-1", "--a4", "-1"]);
    assert_eq!(supercritical.status.code(), Some(3));
    assert_eq!(error_record(&supercritical)["error"], "supercritical_a4");
    let two_channels = sqrtpot(&["wavefn", "--a2", "-1", "--ell", "0..1"]);
    assert_eq!(two_channels.status.code(), Some(3));
}
