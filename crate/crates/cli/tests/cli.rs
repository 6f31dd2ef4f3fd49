//! Black-box tests of the `parares` binary: exit codes, file outputs, and
//! stdout contracts, driven exactly the way a shell user would.

use num_complex::Complex64;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_parares"))
        .args(args)
        .output()
        .expect("binary should spawn");
    (
        out.status.code().expect("no exit code (signal?)"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn tmpdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("tempdir")
}

#[test]
fn help_and_version_are_successes() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("contours") && stdout.contains("simulate"));
    let (code, stdout, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("parares"));
    let (code, _, _) = run(&["simulate", "--help"]);
    assert_eq!(code, 0);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _, stderr) = run(&["contours", "--bogus"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--bogus"), "stderr: {stderr}");
}

#[test]
fn missing_physics_is_a_config_error() {
    // No preset and no file: nothing pins the fluid, so the run must be
    // rejected before any numerics start.
    let (code, _, stderr) = run(&["modes", "--pmin", "1", "--pmax", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("nu"), "stderr: {stderr}");
}

#[test]
fn config_file_errors_name_the_file_and_line() {
    let dir = tmpdir();
    let path = dir.path().join("run.conf");

    std::fs::write(&path, "# comment\nnu = pickles\n").unwrap();
    let (code, _, stderr) = run(&["modes", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(
        stderr.contains("run.conf:2") && stderr.contains("nu"),
        "stderr: {stderr}"
    );

    std::fs::write(&path, "huh = 1\n").unwrap();
    let (code, _, stderr) = run(&["modes", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown key 'huh'"), "stderr: {stderr}");

    std::fs::write(&path, "nu = 0.004\nnu = 0.005\n").unwrap();
    let (code, _, stderr) = run(&["modes", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(
        stderr.contains("run.conf:2") && stderr.contains("duplicate"),
        "stderr: {stderr}"
    );
}

#[test]
fn unwritable_output_directory_is_an_io_error() {
    let (code, _, stderr) = run(&[
        "contours",
        "--case",
        "1",
        "--pmin",
        "5",
        "--pmax",
        "4",
        "--out",
        "/proc/parares-cannot-write-here",
    ]);
    assert_eq!(code, 4);
    assert!(stderr.contains("io error"), "stderr: {stderr}");
}

#[test]
fn empty_range_still_writes_well_formed_files() {
    let dir = tmpdir();
    let out = dir.path().to_str().unwrap().to_owned();
    let (code, stdout, _) = run(&[
        "contours", "--case", "1", "--pmin", "5", "--pmax", "4", "--out", &out,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0 stability points"), "stdout: {stdout}");
    assert!(stdout.contains("none"), "stdout: {stdout}");

    let csv = std::fs::read_to_string(dir.path().join("points.csv")).unwrap();
    assert_eq!(csv, "class,p,tau,residual,N\n");
    let svg = std::fs::read_to_string(dir.path().join("tongues.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

/// Pull `name = re +imi` values out of the bessel subcommand's output.
fn parse_bessel_line(stdout: &str, prefix: &str) -> Complex64 {
    let line = stdout
        .lines()
        .find(|l| l.starts_with(prefix))
        .unwrap_or_else(|| panic!("no line starting with {prefix:?} in {stdout:?}"));
    let value = line.split(" = ").nth(1).unwrap();
    let mut parts = value.split_whitespace();
    let re: f64 = parts.next().unwrap().parse().unwrap();
    let im: f64 = parts
        .next()
        .unwrap()
        .trim_end_matches('i')
        .parse()
        .unwrap();
    Complex64::new(re, im)
}

#[test]
fn bessel_output_matches_the_high_precision_oracle() {
    let (code, stdout, _) = run(&["bessel", "--p", "1", "--re", "1.5", "--im", "0.25"]);
    assert_eq!(code, 0);
    let z = Complex64::new(1.5, 0.25);
    let j = parse_bessel_line(&stdout, "J_1");
    let h = parse_bessel_line(&stdout, "H1_1");
    let j_ref = parares_testkit::oracle_j(1, z);
    let h_ref = parares_testkit::oracle_h1(1, z);
    // Printing rounds to 15 significant digits; compare at that level.
    assert!((j - j_ref).norm() <= 1e-13 * j_ref.norm(), "J: {j} vs {j_ref}");
    assert!((h - h_ref).norm() <= 1e-13 * h_ref.norm(), "H: {h} vs {h_ref}");
}

#[test]
fn bessel_ratio_lines_agree_with_direct_division() {
    let (code, out2, _) = run(&["bessel", "--p", "2", "--re", "2.5", "--im", "-0.5"]);
    assert_eq!(code, 0);
    let (code, out1, _) = run(&["bessel", "--p", "1", "--re", "2.5", "--im", "-0.5"]);
    assert_eq!(code, 0);

    let h2 = parse_bessel_line(&out2, "H1_2");
    let h1 = parse_bessel_line(&out1, "H1_1");
    let ratio = parse_bessel_line(&out2, "H_p/H_(p-1)");
    let division = h2 / h1;
    assert!(
        (ratio - division).norm() <= 1e-9 * division.norm(),
        "ratio {ratio} vs division {division}"
    );
}

#[test]
fn bessel_at_the_origin_is_a_numerical_error() {
    let (code, stdout, stderr) = run(&["bessel", "--p", "1", "--re", "0", "--im", "0"]);
    assert_eq!(code, 3);
    // J_1(0) = 0 is fine and already printed; the Hankel part is singular.
    assert!(stdout.contains("J_1"), "stdout: {stdout}");
    assert!(stderr.contains("singular"), "stderr: {stderr}");
}

#[test]
fn negative_imaginary_part_parses_as_a_flag_value() {
    let (code, _, _) = run(&["bessel", "--p", "3", "--re", "1.0", "--im", "-2.0"]);
    assert_eq!(code, 0);
}

fn read_csv_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(str::to_owned)
        .collect()
}

#[test]
fn contours_csv_svg_and_modes_line_up() {
    let dir = tmpdir();
    let out = dir.path().to_str().unwrap().to_owned();
    let args = [
        "contours", "--case", "1", "--pmin", "1.8", "--pmax", "2.2", "--pstep", "0.2",
        "--out", &out,
    ];
    let (code, stdout, _) = run(&args);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("harmonic 2 4.4231276"),
        "modes in stdout: {stdout}"
    );

    let rows = read_csv_rows(&dir.path().join("points.csv"));
    assert!(!rows.is_empty());
    let svg = std::fs::read_to_string(dir.path().join("tongues.svg")).unwrap();
    let markers = svg.matches("pt-harmonic").count() + svg.matches("pt-subharmonic").count();
    assert_eq!(markers, rows.len(), "every CSV row gets one SVG marker");

    // Identical configuration, fresh directory: byte-identical CSV.
    let dir2 = tmpdir();
    let out2 = dir2.path().to_str().unwrap().to_owned();
    let mut args2 = args;
    args2[10] = &out2;
    let (code, _, _) = run(&args2);
    assert_eq!(code, 0);
    let a = std::fs::read(dir.path().join("points.csv")).unwrap();
    let b = std::fs::read(dir2.path().join("points.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn pencil_dump_writes_both_classes_in_readable_form() {
    let dir = tmpdir();
    let out = dir.path().to_str().unwrap().to_owned();
    let (code, _, _) = run(&[
        "modes", "--case", "1", "--pmin", "2", "--pmax", "2", "--N", "4",
        "--dump-pencil", "2", "--out", &out,
    ]);
    assert_eq!(code, 0);
    for class in ["harmonic", "subharmonic"] {
        let path = dir.path().join(format!("pencil_{class}_p2_N4.txt"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
        let side = 2 * (2 * 4 + 1);
        let comment_lines = text.lines().filter(|l| l.starts_with('#')).count();
        let data_lines = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(comment_lines, 3, "label + two section headers");
        assert_eq!(data_lines, 2 * side, "A and B, one row per line");
        let first_data = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(first_data.split_whitespace().count(), 2 * side);
    }
}

fn write_sim_config(dir: &Path, body: &str) -> String {
    let path = dir.join("sim.conf");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn diverging_simulation_exits_numerical_with_a_time_stamp() {
    let dir = tmpdir();
    // Stiffness far beyond what the time step can follow: the spring CFL
    // guard passes (it only knows the advection speed) but the run blows up.
    let conf = write_sim_config(
        dir.path(),
        "kappa = 1e6\nnu = 0.1\ntau = 0.3\nseed_mode = 2\n\
         grid_points = 32\nfiber_points = 32\nsteps_per_period = 512\n\
         periods = 1\nsamples_per_period = 32\n",
    );
    let out = dir.path().to_str().unwrap().to_owned();
    let (code, _, stderr) = run(&["simulate", "--config", &conf, "--out", &out]);
    assert_eq!(code, 3, "stderr: {stderr}");
    assert!(stderr.contains("diverged"), "stderr: {stderr}");
}

#[test]
fn unforced_simulation_decays_and_writes_the_record() {
    let dir = tmpdir();
    let conf = write_sim_config(
        dir.path(),
        "kappa = 0.5\nnu = 0.02\ntau = 0\nseed_mode = 3\n\
         grid_points = 32\nfiber_points = 64\nsteps_per_period = 512\n\
         periods = 6\nsamples_per_period = 32\n",
    );
    let out = dir.path().to_str().unwrap().to_owned();
    let (code, stdout, stderr) = run(&[
        "simulate", "--config", &conf, "--out", &out, "--snapshots",
    ]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("p=3 DECAYING"), "stdout: {stdout}");

    let rows = read_csv_rows(&dir.path().join("modes.csv"));
    assert_eq!(rows.len(), 6 * 32 + 1);
    for row in &rows {
        assert_eq!(row.split(',').count(), 9, "t plus eight amplitudes");
    }
    // t = 0 row carries the seeded amplitude εR/2 in a_3.
    let first: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[3] - 0.025).abs() < 1e-13);

    // One snapshot per period plus the initial shape, each a closed loop.
    for i in 0..7 {
        let shape = read_csv_rows(&dir.path().join(format!("shape_{i:03}.csv")));
        assert_eq!(shape.len(), 64, "shape_{i:03}.csv");
    }
    assert!(!dir.path().join("shape_007.csv").exists());
}
