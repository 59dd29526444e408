use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use qwalk_cli::report::{AnalysisReport, Manifest};
use qwalk_core::{walks, EigenSystem, LimitMeasure, WalkFile};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn qwalk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QWALK_GRID")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn fixtures_match_reference_walks() {
    for (file, w) in [
        ("hadamard.json", walks::hadamard()),
        ("modified_hadamard.json", walks::modified_hadamard()),
        ("grover3.json", walks::grover3()),
    ] {
        let text = std::fs::read_to_string(fixture(file)).unwrap();
        assert_eq!(
            WalkFile::from_json_str(&text).unwrap().to_symbol().unwrap(),
            w,
            "{file}"
        );
    }
}

#[test]
fn decompose_grover() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &["decompose", path_str(&fixture("grover3.json"))],
        tmp.path(),
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("decomposable"));
    assert!(text.contains("d=2 winding=0 multiplicity=1"));
    assert!(text.contains("d=1 winding=0 multiplicity=1"));

    let report: AnalysisReport = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert_eq!(report.decomposable, Some(true));
    assert_eq!(report.ct_realizable, Some(true));

    // Emitted JSON re-parses to an equal system.
    let json = read(tmp.path(), "refined.json");
    let sys = EigenSystem::from_json_str(&json).unwrap();
    assert_eq!(sys.to_json_string(), json);
    assert_eq!(sys.bands.len(), 2);
}

#[test]
fn ct_check_modified_walk_is_false_with_reason() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &["ct-check", path_str(&fixture("modified_hadamard.json"))],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "false\nreason: winding 1\n");
    let report: AnalysisReport = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert_eq!(report.ct_realizable, Some(false));
    assert!(!tmp.path().join("generator_band0.csv").exists());
}

#[test]
fn ct_check_coined_walk_writes_generators() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &[
            "ct-check",
            path_str(&fixture("hadamard.json")),
            "--grid",
            "256",
        ],
        tmp.path(),
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "true\n");
    for j in 0..2 {
        let csv = read(tmp.path(), &format!("generator_band{j}.csv"));
        assert_eq!(csv.lines().next(), Some("theta,h"));
        assert_eq!(csv.lines().count(), 257);
    }
}

#[test]
fn simulate_hadamard_distribution() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &[
            "simulate",
            path_str(&fixture("hadamard.json")),
            "--init",
            path_str(&fixture("delta0_ch1.json")),
            "--t",
            "100",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(tmp.path(), "distribution_t100.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("site,prob"));
    let rows: Vec<(i64, f64)> = lines
        .map(|l| {
            let (s, p) = l.split_once(',').unwrap();
            (s.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 101);
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(rows.iter().all(|r| r.0 % 2 == 0));
}

#[test]
fn csv_floats_carry_seventeen_digits() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &["bands", path_str(&fixture("hadamard.json")), "--grid", "64"],
        tmp.path(),
    );
    assert!(o.status.success());
    let csv = read(tmp.path(), "bands.csv");
    assert_eq!(
        csv.lines().next(),
        Some("band_index,covering_angle,re,im,arg")
    );
    for line in csv.lines().skip(1) {
        for field in line.split(',').skip(1) {
            let (mantissa, _) = field.split_once('e').expect("scientific notation");
            let digits = mantissa.trim_start_matches('-').replace('.', "");
            assert_eq!(digits.len(), 17, "{field}");
        }
    }
}

#[test]
fn limit_measure_json_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &[
            "limit",
            path_str(&fixture("grover3.json")),
            "--init",
            path_str(&fixture("delta0_ch2_grover.json")),
            "--grid",
            "256",
            "--bins",
            "64",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json = read(tmp.path(), "limit.json");
    let mu = LimitMeasure::from_json_str(&json).unwrap();
    assert_eq!(mu.to_json_string(), json);
    assert_eq!(mu.bins.len(), 64);
    assert!((mu.total_mass() - 1.0).abs() < 1e-9);
    assert!(mu.atom_mass(0.0, 1e-9) > 0.1);
}

#[test]
fn compare_writes_moment_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &[
            "compare",
            path_str(&fixture("hadamard.json")),
            "--init",
            path_str(&fixture("delta0_ch1.json")),
            "--t",
            "50,100",
            "--moments",
            "2",
            "--grid",
            "256",
        ],
        tmp.path(),
    );
    assert!(o.status.success());
    let csv = read(tmp.path(), "compare.csv");
    assert_eq!(csv.lines().next(), Some("t,m,empirical,limit,deviation"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn conjugate_detects_permuted_coins() {
    let tmp = tempfile::tempdir().unwrap();
    let w = walks::hadamard()
        .conjugate_by(&walks::permutation_matrix(&[1, 0]))
        .unwrap();
    let swapped = tmp.path().join("swapped.json");
    std::fs::write(&swapped, WalkFile::from(&w).to_json_string()).unwrap();
    let out = tmp.path().join("run");
    let h = fixture("hadamard.json");
    let o = qwalk(
        &[
            "conjugate",
            path_str(&h),
            path_str(&swapped),
            "--grid",
            "256",
        ],
        &out,
    );
    assert_eq!(stdout(&o), "true\n");
    let m = fixture("modified_hadamard.json");
    let o = qwalk(
        &["conjugate", path_str(&h), path_str(&m), "--grid", "256"],
        &out,
    );
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn model_spec_from_stdin() {
    let tmp = tempfile::tempdir().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["winding", "-", "--out"])
        .arg(tmp.path())
        .env("QWALK_GRID", "128")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let spec = std::fs::read(fixture("shift_model.json")).unwrap();
    child.stdin.take().unwrap().write_all(&spec).unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "windings: [1]\ntotal: 1\n");
    let manifest: Manifest = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest.settings.grid, 128);
    assert_eq!(manifest.inputs, vec!["-".to_string()]);
    let report: AnalysisReport = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert_eq!(report.walk_id, "stdin");
}

#[test]
fn malformed_json_is_a_schema_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(&["check", path_str(&fixture("malformed.json"))], tmp.path());
    assert_eq!(o.status.code(), Some(qwalk_cli::error::exit::SCHEMA));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema error at line"));
    assert!(o.stdout.is_empty());
}

#[test]
fn non_unitary_walk_has_its_own_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &["check", path_str(&fixture("not_unitary.json"))],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(qwalk_cli::error::exit::NOT_UNITARY));
    let report: AnalysisReport = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert_eq!(report.unitarity.map(|u| u.pass), Some(false));
}

#[test]
fn bad_grid_is_an_invalid_argument() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &[
            "bands",
            path_str(&fixture("hadamard.json")),
            "--grid",
            "100",
        ],
        tmp.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(qwalk_cli::error::exit::INVALID_ARGUMENT)
    );
}

#[test]
fn missing_file_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(&["bands", "no/such/file.json"], tmp.path());
    assert_eq!(o.status.code(), Some(qwalk_cli::error::exit::IO));
}

#[test]
fn manifest_lists_every_file() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qwalk(
        &[
            "decompose",
            path_str(&fixture("hadamard.json")),
            "--grid",
            "128",
        ],
        tmp.path(),
    );
    assert!(o.status.success());
    let manifest: Manifest = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest.command, "decompose");
    let mut on_disk: Vec<String> = std::fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    on_disk.sort();
    let mut listed = manifest.files.clone();
    listed.sort();
    assert_eq!(listed, on_disk);
}
