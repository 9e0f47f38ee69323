//! The `povsim` binary end to end on a small committed fixture.
//!
//! Goldens live in `tests/goldens`; regenerate them with
//! `UPDATE_GOLDENS=1 cargo test -p povsim-cli --test cli`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
const GOLDENS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/goldens");

fn povsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture_args() -> Vec<String> {
    [
        ("data.persons", "persons.csv"),
        ("data.households", "households.csv"),
        ("data.lfs", "lfs.csv"),
    ]
    .iter()
    .flat_map(|(key, file)| ["--set".to_owned(), format!("{key}=\"{FIXTURE}/{file}\"")])
    .collect()
}

fn simulate(out: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec!["simulate".into(), "-q".into(), "--out".into(), out.display().to_string()];
    args.extend(fixture_args());
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    povsim(&refs)
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap()
}

fn assert_success(o: &Output) {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fixture_outputs_match_goldens() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&simulate(dir.path(), &[]));
    let update = std::env::var_os("UPDATE_GOLDENS").is_some();
    let files = [
        "table2.csv",
        "table2.json",
        "band.csv",
        "band.json",
        "groups.csv",
        "tbi.csv",
        "band.svg",
        "groups_sex.svg",
    ];
    for f in files {
        let got = fs::read(dir.path().join(f)).unwrap();
        let golden = Path::new(GOLDENS).join(f);
        if update {
            fs::create_dir_all(GOLDENS).unwrap();
            fs::write(&golden, &got).unwrap();
        }
        let want = fs::read(&golden).unwrap_or_else(|_| panic!("missing golden {}", golden.display()));
        assert!(got == want, "{f} differs from its golden");
    }
}

#[test]
fn baseline_column_matches_a_direct_measurement() {
    use povsim::fiscal::PolicyParameters;
    use povsim::microdata::{baseline_child_poverty, load_population};
    use povsim::poverty::PovertyConfig;

    let dir = tempfile::tempdir().unwrap();
    assert_success(&simulate(dir.path(), &["--format", "json"]));
    let table2 = read_json(dir.path().join("table2.json"));
    let reported = table2["columns"][0]["report"]["indicators"][0]["children"]["rate"].as_f64().unwrap();

    let pop = load_population(
        &Path::new(FIXTURE).join("persons.csv"),
        &Path::new(FIXTURE).join("households.csv"),
    )
    .unwrap();
    let direct = baseline_child_poverty(&pop, &PolicyParameters::default(), &PovertyConfig::default()).unwrap();
    assert_eq!(reported, direct);
}

#[test]
fn one_factor_fills_only_its_column() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&simulate(dir.path(), &["--factors", "one_offs", "--format", "csv"]));
    let csv = fs::read_to_string(dir.path().join("table2.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let filled = !fields[2].is_empty();
        assert_eq!(filled, matches!(fields[1], "baseline" | "one_offs"), "{line}");
    }
    assert!(!dir.path().join("table2.json").exists());
}

#[test]
fn single_run_at_scale_matches_the_band_edge() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single");
    let band = dir.path().join("band");
    assert_success(&simulate(&single, &["--scale", "0.8", "--format", "json"]));
    assert_success(&simulate(&band, &["--format", "json"]));
    let t = read_json(single.join("table2.json"));
    let combined = t["columns"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["column"] == "combined")
        .unwrap();
    let rate = &combined["report"]["indicators"][0]["children"]["rate"];
    let b = read_json(band.join("band.json"));
    let edge = b["points"].as_array().unwrap().iter().find(|p| p["scale"] == 0.8).unwrap();
    assert_eq!(rate, &edge["relative_child_rate"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    // unknown configuration key
    let o = povsim(&["simulate", "-q", "--out", &out, "--set", "scenario.shock_sclae=1"]);
    assert_eq!(o.status.code(), Some(1));
    // missing input file
    let o = povsim(&["shocks", "-q", "--out", &out, "--set", "data.lfs=\"/no/such/lfs.csv\""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
    // bad flag value
    let o = povsim(&["simulate", "--regime", "sometimes"]);
    assert_eq!(o.status.code(), Some(1));
    // failed validation
    let o = povsim(&[
        "validate",
        "-q",
        "--out",
        &out,
        "--set",
        r#"validation.simulated={"wage":0.2,"self_employment":-0.107}"#,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("validation.csv").exists());
    // passing validation
    let o = povsim(&[
        "validate",
        "-q",
        "--out",
        &out,
        "--set",
        r#"validation.simulated={"wage":0.05,"self_employment":-0.116}"#,
    ]);
    assert_eq!(o.status.code(), Some(0));
    // output path is a file
    let file = dir.path().join("occupied");
    fs::write(&file, "x").unwrap();
    let o = povsim(&["validate", "-q", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn calibration_failure_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = povsim(&[
        "generate",
        "-q",
        "--out",
        &out,
        "--set",
        "synth.households=200",
        "--set",
        "calibration.max_iterations=1",
        "--set",
        "calibration.tolerance=0.0000001",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        assert_success(&povsim(&[
            "generate",
            "-q",
            "--seed",
            "9",
            "--set",
            "synth.households=400",
            "--out",
            out.to_str().unwrap(),
        ]));
        out
    };
    let (a, b) = (run("a"), run("nested/b"));
    for f in ["persons.csv", "households.csv", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let manifest = read_json(a.join("manifest.json"));
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["config"]["synth"]["households"], 400);
    assert!(manifest["details"]["calibration"]["achieved_rate"].is_number());
}

#[test]
fn plot_reads_reports_and_skips_empty_groups() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    fs::create_dir_all(&input).unwrap();
    fs::write(
        input.join("band.json"),
        r#"{"baseline_rate": 0.278, "points": [
            {"scale": 1.2, "relative_child_rate": 0.332},
            {"scale": 0.8, "relative_child_rate": 0.319},
            {"scale": 1.0, "relative_child_rate": 0.324}]}"#,
    )
    .unwrap();
    fs::write(input.join("groups.json"), r#"{"rows": []}"#).unwrap();
    let out = dir.path().join("out");
    let o = povsim(&["plot", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_success(&o);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let svg = fs::read_to_string(out.join("band.svg")).unwrap();
    assert_eq!(svg.matches("class=\"marker\"").count(), 3);
    let pos: Vec<usize> = ["31.9%", "32.4%", "33.2%"].iter().map(|l| svg.find(l).unwrap()).collect();
    assert!(pos[0] < pos[1] && pos[1] < pos[2]);
    assert!(!fs::read_dir(&out).unwrap().any(|e| e.unwrap().file_name().to_string_lossy().starts_with("groups_")));

    // same input, same bytes
    let again = dir.path().join("again");
    assert_success(&povsim(&["plot", "-q", "--input", input.to_str().unwrap(), "--out", again.to_str().unwrap()]));
    assert_eq!(svg, fs::read_to_string(again.join("band.svg")).unwrap());

    // malformed report
    fs::write(input.join("band.json"), "{ not json").unwrap();
    let o = povsim(&["plot", "-q", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed report"));
}

#[test]
fn committed_schema_is_current() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("config.schema.json");
    let current = povsim_cli::config::RunConfig::schema();
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        fs::write(&path, &current).unwrap();
    }
    assert_eq!(fs::read_to_string(&path).unwrap(), current, "run with UPDATE_GOLDENS=1 to refresh");
}
