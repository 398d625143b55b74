use std::process::Command;

fn fscat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fscat"))
}

#[test]
fn verify_report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["one.json", "two.json"] {
        let status = fscat()
            .args(["--max-size", "3", "--json", name, "verify", "all"])
            .env("FSCAT_OUT_DIR", dir.path())
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        outputs.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let reports: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    let reports = reports.as_array().unwrap();
    assert!(reports.iter().all(|r| r["status"] != "fail"));
    assert!(reports.iter().all(|r| r.get("elapsed_ms").is_none()));
}

#[test]
fn timings_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let status = fscat()
        .args(["--max-size", "2", "--timings", "--json"])
        .arg(&path)
        .args(["verify", "derham"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert!(reports[0]["elapsed_ms"].is_u64());
}

#[test]
fn csv_has_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let status = fscat()
        .args(["--max-size", "3", "--csv", "dims.csv", "dims"])
        .env("FSCAT_OUT_DIR", dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let csv = std::fs::read_to_string(dir.path().join("dims.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("b,a,dim_fs,dim_fs0"));
    assert_eq!(lines.len(), 1 + 10);
}

#[test]
fn unknown_check_is_a_usage_error() {
    let out = fscat().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("deeper").join("r.json");
    std::fs::write(dir.path().join("missing"), "a file, not a directory").unwrap();
    let out = fscat()
        .args(["--max-size", "1", "--json"])
        .arg(&path)
        .args(["verify", "derham"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theta_prints_rank() {
    let out = fscat().args(["theta", "--a", "2", "--b", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Θ_2(3): 6 -> 6, rank 5"), "{text}");
}
