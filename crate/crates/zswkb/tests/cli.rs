use std::path::{Path, PathBuf};
use std::process::Command;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zswkb-bin-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn zswkb(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zswkb")).args(args).output().unwrap()
}

#[test]
fn wkb_and_action_write_headed_files() {
    let out = scratch("wkb");
    let cfg = configs().join("twohump.toml");
    let o = zswkb(&["wkb", "--potential", cfg.to_str().unwrap(), "--hbar", "0.2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("wkb-hbar0.2.csv")).unwrap();
    assert!(text.starts_with("# zswkb wkb config="));
    assert!(text.contains("potential=lorentzian-sum"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert!(rows > 5, "{rows} rows");

    let o = zswkb(&["action", "--potential", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(out.join("action.csv").exists());
    let _ = std::fs::remove_dir_all(out);
}

#[test]
fn env_vars_stand_in_for_flags() {
    let out = scratch("env");
    let o = Command::new(env!("CARGO_BIN_EXE_zswkb"))
        .args(["decompose", "--mu", "0.5,1.5"])
        .env("ZSWKB_POTENTIAL", configs().join("twohump.toml"))
        .env("ZSWKB_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("decompose.json")).unwrap()).unwrap();
    assert!(json.to_string().contains("barriers"));
    let _ = std::fs::remove_dir_all(out);
}

#[test]
fn bad_input_exits_with_two_and_names_the_field() {
    let cfg = configs().join("sech.toml");
    let o = zswkb(&["wkb", "--potential", cfg.to_str().unwrap(), "--hbar", "-0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hbar"));

    let o = zswkb(&["wkb", "--potential", "/nonexistent.toml", "--hbar", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_exit_code_reflects_checks() {
    let out = scratch("validate");
    let cfg = configs().join("sech.toml");
    let o = zswkb(&["validate", "--potential", cfg.to_str().unwrap(), "--hbar", "0.25", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("validate.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    let _ = std::fs::remove_dir_all(out);
}

#[test]
fn run_config_file_supplies_defaults() {
    let out = scratch("runcfg");
    std::fs::create_dir_all(&out).unwrap();
    let run = out.join("run.toml");
    let pot = configs().join("sech.toml");
    std::fs::write(&run, format!("potential = {:?}\nhbar = [0.5]\n", pot.to_str().unwrap())).unwrap();
    let o = zswkb(&["wkb", "--config", run.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("wkb-hbar0.5.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count() - 1, 2);

    std::fs::write(&run, "hbar = [0.5]\nbogus = 1\n").unwrap();
    let o = zswkb(&["wkb", "--config", run.to_str().unwrap(), "--potential", pot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(out);
}
