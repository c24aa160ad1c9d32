//! End-to-end checks of the `chartgrid` binary: verbs, flags, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn chartgrid(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chartgrid"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_mock_config(dir: &Path, count: usize) -> std::path::PathBuf {
    let config = serde_json::json!({
        "dataset": { "seed": 5, "count": count, "n_points": 100 },
        "grid": { "cells_per_axis": 50, "opacity": 0.2 },
        "arms": [
            { "name": "baseline", "use_grid": false,
              "mock_noise": { "y_sigma_frac": 0.08, "seed": 1 } },
            { "name": "grid", "use_grid": true,
              "mock_noise": { "y_sigma_frac": 0.04, "seed": 1 } }
        ],
        "backend": { "kind": "mock" },
        "output_dir": dir.join("out"),
        "cache_dir": dir.join("cache"),
        "max_in_flight": 2
    });
    let path = dir.join("experiment.json");
    std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn run_verb_produces_a_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_mock_config(dir.path(), 4);

    let out = chartgrid(&["run", "--config", config.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = dir.path().join("out/report.md");
    assert!(report.exists());
    let first = std::fs::read(&report).unwrap();

    let out = chartgrid(&["run", "--config", config.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&report).unwrap());
}

#[test]
fn stage_verbs_compose() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_mock_config(dir.path(), 4);
    let c = config.to_str().unwrap();
    for verb in ["generate", "overlay", "extract", "evaluate", "report"] {
        let out = chartgrid(&[verb, "--config", c], dir.path());
        assert!(
            out.status.success(),
            "{verb} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert!(dir.path().join("out/scores.jsonl").exists());
    assert!(dir.path().join("out/qualitative/chart-00.csv").exists());
}

#[test]
fn seed_and_out_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_mock_config(dir.path(), 4);
    let alt = dir.path().join("alt");
    let out = chartgrid(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "9",
            "--out",
            alt.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let gold = std::fs::read_to_string(alt.join("gold.json")).unwrap();
    assert!(gold.contains("\"seed\": 9"));
}

#[test]
fn sweep_makes_one_directory_per_density() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_mock_config(dir.path(), 4);
    let out = chartgrid(
        &["sweep", "--config", config.to_str().unwrap(), "--densities", "25,50"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/sweep-25/report.md").exists());
    assert!(dir.path().join("out/sweep-50/report.md").exists());
}

#[test]
fn single_file_overlay_mode() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    chartgrid::RasterImage::new(200, 150, [255, 255, 255]).save_png(&input).unwrap();
    let output = dir.path().join("out.png");
    let out = chartgrid(
        &[
            "overlay",
            "--in",
            input.to_str().unwrap(),
            "--out",
            output.to_str().unwrap(),
            "--cells",
            "10",
            "--opacity",
            "0.2",
            "--color",
            "000000",
            "--thickness",
            "1",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let overlaid = chartgrid::RasterImage::load_png(&output).unwrap();
    assert_eq!(overlaid.get(20, 3), [204, 204, 204]); // 200/10 = 20: first line
    assert_eq!(overlaid.get(0, 0), [255, 255, 255]);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();

    // unknown subcommand
    let out = chartgrid(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    // config that fails validation (single arm)
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        serde_json::json!({
            "arms": [ { "name": "only", "mock_noise": {} } ],
            "backend": { "kind": "mock" }
        })
        .to_string(),
    )
    .unwrap();
    let out = chartgrid(&["run", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("arms"), "field path missing: {stderr}");

    // overlay needs one of its two modes
    let out = chartgrid(&["overlay"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_credentials_exit_2_before_any_network_call() {
    let dir = tempfile::tempdir().unwrap();
    let config = serde_json::json!({
        "dataset": { "seed": 5, "count": 4 },
        "arms": [
            { "name": "baseline", "use_grid": false },
            { "name": "grid", "use_grid": true }
        ],
        "backend": {
            "kind": "remote",
            "endpoint": "http://127.0.0.1:1/v1/extract",
            "model": "m",
            "api_key_env": "CHARTGRID_CLI_TEST_UNSET"
        },
        "output_dir": dir.path().join("out"),
        "cache_dir": dir.path().join("cache")
    });
    let path = dir.path().join("remote.json");
    std::fs::write(&path, config.to_string()).unwrap();

    // generate + overlay succeed, extract must abort with exit 2
    for verb in ["generate", "overlay"] {
        let out = chartgrid(&[verb, "--config", path.to_str().unwrap()], dir.path());
        assert!(out.status.success(), "{verb}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = chartgrid(&["extract", "--config", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("CHARTGRID_CLI_TEST_UNSET"), "{stderr}");
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = chartgrid(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    for verb in ["generate", "overlay", "extract", "evaluate", "report", "run", "sweep"] {
        assert!(stdout.contains(verb), "help missing verb {verb}");
    }
}
