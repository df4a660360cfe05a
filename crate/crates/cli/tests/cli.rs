use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newton-horizon"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env("NEWTON_HORIZON_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key:?} in\n{report}"))
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("scenario.toml");
    fs::write(&p, text).unwrap();
    p
}

const INFALL: &str = r#"
[constants]
G = 1.0
c = 1.0

[body]
type = "uniform_ball"
center = [0.0, 0.0, 0.0]
radius = 0.25
mass = 0.5

[[launches]]
u0 = [1.0, 0.0, 0.0]
v0 = [-1.0, 0.0, 0.0]

[[launches]]
u0 = [1.0, 0.0, 0.0]
speed = 0.8
direction = [0.0, 1.0, 0.0]

[integration]
t_end = 10.0

[outputs]
csv_path = "out"
report_path = "out/report.txt"
"#;

#[test]
fn simulate_reports_collapse_and_bound() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), INFALL);
    let o = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(value(&text, "G"), "1e0");
    assert_eq!(value(&text, "c"), "1e0");
    assert_eq!(value(&text, "termination"), "CollapsedIntoBody");
    let t_hit: f64 = value(&text, "t_hit").parse().unwrap();
    let expected = 2.0 / 3.0 * (1.0 - 0.25f64.powf(1.5));
    assert!((t_hit - expected).abs() / expected < 1e-7);
    let held: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix("bound held: ")).collect();
    assert_eq!(held[0], "n/a (launch at or above escape speed)");
    assert!(held[1].starts_with("yes (max attained / bound = 0."), "{}", held[1]);
    assert!(held[1].ends_with(" < 1)"));
    assert_eq!(fs::read_to_string(dir.path().join("out/report.txt")).unwrap(), text);
}

#[test]
fn csv_round_trips_to_printed_precision() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), INFALL);
    assert!(run(&["simulate", "--config", cfg.to_str().unwrap()]).status.success());
    let path = dir.path().join("out/launch_000.csv");
    let mut r = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["t", "ux", "uy", "uz", "vx", "vy", "vz", "energy", "dist_to_closure"]
    );
    let rows: Vec<Vec<String>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    assert!(rows.len() > 2);
    for row in &rows {
        for cell in row {
            let x: f64 = cell.parse().unwrap();
            // Reformatting the parsed value reproduces the text exactly.
            assert_eq!(&format!("{x:.16e}"), cell);
        }
    }
    let first: Vec<f64> = rows[0].iter().map(|c| c.parse().unwrap()).collect();
    assert_eq!(&first[..7], &[0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
    assert!(first[7].abs() < 1e-15);
    assert_eq!(first[8], 0.75);
    let last: Vec<f64> = rows.last().unwrap().iter().map(|c| c.parse().unwrap()).collect();
    assert!(last[8].abs() < 1e-9);
    assert!(dir.path().join("out/launch_001.csv").exists());
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let broken = INFALL.replace("mass = 0.5", "mass = \"heavy\"");
    let cfg = write_config(dir.path(), &broken);
    let o = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());

    let unknown = INFALL.replace("[integration]", "[integration]\nbogus = 1");
    let cfg = write_config(dir.path(), &unknown);
    assert_eq!(
        run(&["simulate", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["simulate", "--config", "/nonexistent.toml"]).status.code(),
        Some(2)
    );
    assert!(!dir.path().join("out").exists());
}

#[test]
fn inside_body_exits_3_without_output() {
    let dir = TempDir::new().unwrap();
    let inside = format!("{INFALL}\n[[launches]]\nu0 = [0.1, 0.0, 0.0]\nv0 = [0.0, 0.0, 0.0]\n");
    let cfg = write_config(dir.path(), &inside);
    let o = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!dir.path().join("out").exists());
}

const TWO_BALLS: &str = r#"
[constants]
G = 1.0
c = 1.0

[body]
type = "ball_union"
balls = [
    { center = [0.0, 0.0, 0.0], radius = 1.0, mass = 1.0 },
    { center = [4.0, 0.0, 0.0], radius = 1.0, mass = 1.0 },
]
"#;

#[test]
fn classify_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    // diam(B) = 1, 2GM = 1.1: margin 1.10.
    let cfg = write_config(
        dir.path(),
        "[constants]\nG = 1.0\nc = 1.0\n[body]\ntype = \"uniform_ball\"\ncenter = [0.0, 0.0, 0.0]\nradius = 0.5\nmass = 0.55\n",
    );
    let o = run(&["classify", "--config", cfg.to_str().unwrap(), "--criterion", "diameter"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(value(&text, "verdict"), "BLACK HOLE (margin 1.10)");
    assert_eq!(value(&text, "G"), "1e0");
    let r: f64 = value(&text, "photon_confinement_radius").parse().unwrap();
    assert!((r - 1.0 / (1.0 - 1.0 / 1.1)).abs() < 1e-12);

    let too_small = run(&[
        "classify",
        "--config",
        cfg.to_str().unwrap(),
        "--criterion",
        "diameter",
        "--ball-radius",
        "0.4",
    ]);
    assert_eq!(too_small.status.code(), Some(3));

    let union = write_config(dir.path(), TWO_BALLS);
    let o = run(&[
        "classify",
        "--config",
        union.to_str().unwrap(),
        "--criterion",
        "density-symmetric",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("shape"));
    let o = run(&[
        "classify",
        "--config",
        union.to_str().unwrap(),
        "--criterion",
        "nonsense",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "classify",
        "--config",
        union.to_str().unwrap(),
        "--criterion",
        "diameter",
        "--ball-center",
        "2,0,0",
    ]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "verdict"), "not a black hole (margin 0.67)");
}

#[test]
fn cosmology_reproduces_the_estimate() {
    let o = run(&["cosmology", "--radius", "4e26", "--density", "1e-23"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let k: f64 = value(&text, "K").parse().unwrap();
    let ratio: f64 = value(&text, "ratio").parse().unwrap();
    assert!((k - 3.22e26).abs() / 3.22e26 < 0.01);
    assert!((4000.0..=6000.0).contains(&ratio));
    assert_eq!(value(&text, "verdict"), "BLACK HOLE");
    assert_eq!(value(&text, "G"), "6.6743e-11");

    let zero = stdout(&run(&["cosmology", "--radius", "4e26", "--density", "0"]));
    assert_eq!(value(&zero, "ratio").parse::<f64>().unwrap(), 0.0);
    assert_eq!(value(&zero, "verdict"), "not a black hole");

    let t1: f64 = value(&text, "threshold").parse().unwrap();
    let t2: f64 = value(
        &stdout(&run(&["cosmology", "--radius", "8e26", "--density", "1e-23"])),
        "threshold",
    )
    .parse()
    .unwrap();
    assert!((t1 / t2 - 4.0).abs() < 1e-5);
    assert_eq!(
        run(&["cosmology", "--radius", "-1", "--density", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_spherical_sweep_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), INFALL);
    let args = [
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--sweeps",
        "200",
        "--seed",
        "11",
    ];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    let text = stdout(&a);
    assert_eq!(value(&text, "seed"), "11");
    assert_eq!(value(&text, "result"), "PASS");
    // The configured parabolic launch is outside the hypothesis.
    assert_eq!(value(&text, "out-of-hypothesis"), "1");
    assert_eq!(
        value(&text, "launch 0"),
        "config out-of-hypothesis (at or above escape speed)"
    );
    let b = bin().args(args).env("NEWTON_HORIZON_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--sweeps",
        "200",
        "--seed",
        "12",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_general_body() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), TWO_BALLS);
    let o = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--sweeps",
        "20",
        "--seed",
        "5",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(value(&stdout(&o), "held"), "20");
    assert_eq!(
        run(&["verify", "--config", cfg.to_str().unwrap(), "--sweeps", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), INFALL);
    let o = bin()
        .args(["simulate", "--config", cfg.to_str().unwrap()])
        .env("NEWTON_HORIZON_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn shipped_scenarios_run() {
    let scenarios = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in fs::read_dir(&scenarios).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "toml") {
            continue;
        }
        let dir = TempDir::new().unwrap();
        let cfg = write_config(dir.path(), &fs::read_to_string(&path).unwrap());
        let o = run(&["simulate", "--config", cfg.to_str().unwrap()]);
        assert!(
            o.status.success(),
            "{}: {}",
            path.display(),
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!stdout(&o).contains("bound held: no"), "{}", path.display());
        count += 1;
    }
    assert!(count >= 4);
}
