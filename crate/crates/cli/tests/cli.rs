use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nmrsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmrsp")).args(args).output().expect("spawn nmrsp")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nmrsp-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn kappa_vanishes_at_the_first_node() {
    let text = stdout(&nmrsp(&["kappa", "--theta", "0.7854", "--dw", "10", "--sigma", "1", "--tau", "0.31416"]));
    assert!(value(&text, "kappa_abs") < 1e-5);
}

#[test]
fn kappa_quadrature_is_printed_on_request() {
    let text = stdout(&nmrsp(&["kappa", "--theta", "0.3", "--tau", "0.4", "--quadrature"]));
    assert!((value(&text, "kappa_re") - value(&text, "quadrature_re")).abs() < 1e-8);
    assert!((value(&text, "kappa_im") - value(&text, "quadrature_im")).abs() < 1e-8);
}

#[test]
fn transition_angles() {
    let text = stdout(&nmrsp(&["transition", "--dw", "10", "--sigma", "1", "--tauc", "0.62832"]));
    assert!((value(&text, "theta1") - 0.265_41).abs() < 1e-5);
    assert!((value(&text, "theta2") - 1.305_39).abs() < 1e-5);
}

#[test]
fn fidelity_of_half_dephased_bell_state() {
    let text = stdout(&nmrsp(&["fidelity", "--c", "1,-1,1", "--kappa", "0.5"]));
    assert_eq!(text.trim().parse::<f64>().unwrap(), 0.25);
}

#[test]
fn chi_revival_extremum() {
    let t = 2.0 * std::f64::consts::PI / 0.19f64.sqrt();
    let text = stdout(&nmrsp(&["chi", "--ratio", "0.1", "--t", &t.to_string()]));
    assert!((text.trim().parse::<f64>().unwrap() + 0.486_40).abs() < 5e-6);
}

#[test]
fn measure_reports_divergence() {
    let text = stdout(&nmrsp(&["measure", "--kind", "divisibility", "--theta", "0.7853981633974483", "--end", "0.6"]));
    assert!(value(&text, "divisibility").is_infinite());
    assert!((value(&text, "divergence_at") - 0.314_159_265).abs() < 1e-8);
}

#[test]
fn malformed_input_fails_with_one_line() {
    let out = nmrsp(&["kappa", "--tau", "abc"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let out = nmrsp(&["transition", "--tauc", "0.1"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "));

    let out = nmrsp(&["fidelity", "--c", "1,1,1"]);
    assert!(!out.status.success());
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn figure_writes_csv_and_metadata() {
    let dir = workdir("fig5");
    let out = dir.join("fig5.csv");
    stdout(&nmrsp(&["fig5", "--out", out.to_str().unwrap()]));
    let csv = read(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "ratio,N,F1,F2");
    assert_eq!(lines.count(), 20);
    assert!(!csv.contains('\r'));
    let meta = read(&dir.join("fig5.csv.meta.toml"));
    assert!(meta.contains("library_version = \"0.1.0\""));
    assert!(meta.contains("seed = 42"));
    assert!(meta.contains("figure = \"fig5\""));
}

#[test]
fn flags_override_config_file() {
    let dir = workdir("precedence");
    let config = dir.join("run.toml");
    let out = dir.join("fig4.csv");
    std::fs::write(
        &config,
        format!(
            "seed = 7\nn_pairs = 5\ngrid_size = 201\noutput = {:?}\n[sweep]\nt_c = {{ start = 0.5, end = 2.0, points = 4 }}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    stdout(&nmrsp(&["fig4", "--config", config.to_str().unwrap(), "--seed", "9"]));
    let meta = read(&dir.join("fig4.csv.meta.toml"));
    assert!(meta.contains("seed = 9"));
    assert!(meta.contains("n_pairs = 5"));
    assert!(meta.contains("grid_size = 201"));
    assert_eq!(read(&out).lines().count(), 5);

    let wrong = nmrsp(&["fig1", "--config", config.to_str().unwrap()]);
    assert!(wrong.status.success(), "a config without a figure key applies to any figure");
    std::fs::write(&config, "figure = \"fig2\"\n").unwrap();
    let wrong = nmrsp(&["fig1", "--config", config.to_str().unwrap()]);
    assert!(!wrong.status.success());
}

#[test]
fn fig3a_rows_start_at_the_transition() {
    let dir = workdir("fig3a");
    let out = dir.join("fig3a.csv");
    stdout(&nmrsp(&["fig3a", "--out", out.to_str().unwrap()]));
    let csv = read(&out);
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(first[1].abs() < 1e-9);
    assert_eq!(csv.lines().count(), 26);
}
