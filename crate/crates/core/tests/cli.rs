//! The command-line front end, driven through the built binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperdyn::cli::{revalidate_line, BatteryConfig, Line, Overrides};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperdyn"))
}

fn battery_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/battery.toml")
}

fn temp_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperdyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn lines(out: &Output) -> Vec<Line> {
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_theorems_is_consistent_and_revalidates() {
    let out = run(&["verify-theorems", "--format", "machine"], &battery_path());
    assert_eq!(out.status.code(), Some(0));
    let battery = BatteryConfig::load(&battery_path()).unwrap().validate(&Overrides::default()).unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut decided = 0;
    for line in text.lines() {
        decided += revalidate_line(line, &battery).unwrap();
    }
    assert!(decided > 100);
    assert!(text.lines().last().unwrap().contains("\"consistency\":\"CONSISTENT\""));
}

#[test]
fn check_selects_one_system_and_properties() {
    let out = run(
        &["check", "--format", "machine", "--system", "golden-mean", "--property", "weakly-mixing", "--property", "devaney"],
        &battery_path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<_> = lines(&out)
        .into_iter()
        .filter_map(|l| match l {
            Line::Check(r) => Some(r),
            _ => None,
        })
        .collect();
    assert_eq!(records.len(), 2);
    assert!(records.iter().all(|r| r.system == "golden-mean" && r.status == "proved"));
}

#[test]
fn witness_emits_only_proved_objects() {
    let out = run(&["witness", "--format", "machine"], &battery_path());
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<_> = lines(&out)
        .into_iter()
        .filter_map(|l| match l {
            Line::Check(r) => Some(r),
            _ => None,
        })
        .collect();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r.status == "proved" && r.check.starts_with("witness:")));
    assert!(records.iter().any(|r| r.check.contains("bounded-vietoris")));
}

#[test]
fn overrides_reach_the_budget() {
    let out = run(&["check", "--format", "machine", "--system", "full-3", "--level", "1", "--property", "corollary"], &battery_path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bounded-vietoris:level-1"), "{text}");
}

#[test]
fn human_format_is_a_table() {
    let out = run(&["verify-theorems"], &battery_path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("SYSTEM"));
    assert_eq!(text.lines().last(), Some("CONSISTENT"));
}

#[test]
fn config_errors_exit_with_one() {
    let empty = temp_config("empty.toml", "seed = 1\n");
    assert_eq!(run(&["verify-theorems"], &empty).status.code(), Some(1));
    let bad_kind = temp_config("kind.toml", "[[system]]\nid = \"x\"\nkind = \"torus\"\n");
    assert_eq!(run(&["verify-theorems"], &bad_kind).status.code(), Some(1));
    assert_eq!(run(&["verify-theorems"], Path::new("/nonexistent/config.toml")).status.code(), Some(1));
    assert_eq!(bin().arg("verify-theorems").output().unwrap().status.code(), Some(1));
    assert_eq!(run(&["check", "--system", "missing"], &battery_path()).status.code(), Some(1));
}

#[test]
fn empty_selection_prints_the_header_only() {
    let cfg = temp_config("none.toml", "checks = []\n[[system]]\nid = \"one\"\nkind = \"finite\"\nmap = [0]\n");
    let out = run(&["verify-theorems", "--format", "machine"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    assert!(matches!(lines(&out).as_slice(), [Line::Header(_)]));
}

#[test]
fn output_path_receives_the_report() {
    let target = std::env::temp_dir().join(format!("hyperdyn-out-{}.jsonl", std::process::id()));
    let body = format!(
        "output = {:?}\nchecks = [\"transitive\"]\n[[system]]\nid = \"c\"\nkind = \"finite\"\nmap = [1, 0]\n",
        target.display().to_string()
    );
    let cfg = temp_config("out.toml", &body);
    let out = run(&["verify-theorems", "--format", "machine"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written.lines().count(), 3);
    let unwritable = temp_config("bad-out.toml", &body.replace(&target.display().to_string(), "/nonexistent/dir/out"));
    assert_eq!(run(&["verify-theorems"], &unwritable).status.code(), Some(1));
}

#[test]
fn seed_changes_random_systems_only_through_the_seed() {
    let cfg = temp_config("rand.toml", "checks = [\"transitive\"]\n[[system]]\nid = \"r\"\nkind = \"random-finite\"\npoints = 5\n");
    let a = run(&["verify-theorems", "--format", "machine", "--seed", "1"], &cfg);
    let b = run(&["verify-theorems", "--format", "machine", "--seed", "1"], &cfg);
    assert_eq!(a.stdout, b.stdout);
    let header = |o: &Output| match &lines(o)[0] {
        Line::Header(h) => h.seed,
        _ => panic!(),
    };
    assert_eq!(header(&a), 1);
}
