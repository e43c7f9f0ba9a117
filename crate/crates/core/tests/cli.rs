use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_almostrich"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success() || out.status.code() == Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn brute_t(w: &[u8], n: usize, is_pal: impl Fn(&[u8]) -> bool) -> i64 {
    let set = |k: usize| w.windows(k).map(<[u8]>::to_vec).collect::<BTreeSet<_>>();
    let c = |k: usize| set(k).len() as i64;
    let p = |k: usize| set(k).iter().filter(|f| is_pal(f)).count() as i64;
    c(n + 1) - c(n) + 2 - p(n + 1) - p(n)
}

fn reversal_pal(f: &[u8]) -> bool {
    f.iter().eq(f.iter().rev())
}

#[test]
fn analyze_fibonacci() {
    let r = json(&run(&["analyze", "--gen", "fibonacci", "--theta", "reversal", "--len", "10000"]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["defect"]["final_defect"], 0);
    let safe = r["safe_length"].as_u64().unwrap();
    assert_eq!(safe, 10000 / 64);
    let rows = r["complexity"]["rows"].as_array().unwrap();
    for row in &rows[1..=safe as usize] {
        assert_eq!(row["t"], 0, "row {row}");
    }
    assert_eq!(r["richness_by_t"]["rich"], true);
    assert!(r["rauzy"].as_array().unwrap().iter().all(|x| x["agrees_with_t"] == true));
}

#[test]
fn analyze_periodic_is_closed() {
    let r = json(&run(&["analyze", "--gen", "periodic:ab", "--theta", "reversal"]));
    assert_eq!(r["closure"]["closed"], true);
    assert_eq!(r["defect"]["final_defect"], 0);
}

#[test]
fn analyze_is_deterministic_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "analyze", "--gen", "theta_standard", "--seed", "ca", "--directive", "(abc)", "--theta", "pairs:a-b", "--len",
        "4000", "--decompose", "path",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = dir.path().join("tables");
    let out = dir.path().join("r.json");
    let c = run(&[&args[..], &["--csv", csv.to_str().unwrap(), "--out", out.to_str().unwrap()]].concat());
    assert!(c.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    let cx = std::fs::read_to_string(csv.join("complexity.csv")).unwrap();
    assert!(cx.starts_with("n,C,P,T\n"));
    let dp = std::fs::read_to_string(csv.join("defect_profile.csv")).unwrap();
    assert_eq!(dp.lines().count(), 4000 + 2);
}

#[test]
fn rauzy_fibonacci_order_one() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let r = json(&run(&["rauzy", "--gen", "fibonacci", "--theta", "reversal", "--n", "1", "--dot", dot.to_str().unwrap()]));
    assert_eq!(r["criteria"]["loops_palindromic"], true);
    assert_eq!(r["criteria"]["tree_after_loop_removal"], true);
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("graph "));
    assert_eq!(dot.matches(" -- ").count(), r["edges"].as_array().unwrap().len());
}

#[test]
fn rauzy_thue_morse_matches_brute_force_t() {
    let gen = run(&["generate", "--gen", "thue_morse", "--len", "10000"]);
    let w: Vec<u8> = gen.stdout.iter().copied().filter(u8::is_ascii_alphabetic).collect();
    for n in 1..=4usize {
        let r = json(&run(&["rauzy", "--gen", "thue_morse", "--n", &n.to_string()]));
        let t = brute_t(&w, n, reversal_pal);
        assert_eq!(r["t"], t);
        let holds = r["criteria"]["loops_palindromic"] == true && r["criteria"]["tree_after_loop_removal"] == true;
        assert_eq!(holds, t == 0, "n = {n}");
    }
}

#[test]
fn rauzy_periodic_is_empty() {
    let r = json(&run(&["rauzy", "--gen", "periodic:a", "--n", "1"]));
    assert!(r["vertices"].as_array().unwrap().is_empty());
    assert_eq!(r["criteria"]["loops_palindromic"], true);
    assert_eq!(r["criteria"]["tree_after_loop_removal"], true);
}

#[test]
fn rauzy_refuses_orders_past_safe_length() {
    let out = run(&["rauzy", "--gen", "fibonacci", "--len", "1000", "--n", "16"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("safe length"));
    assert!(run(&["rauzy", "--gen", "fibonacci", "--len", "1000", "--n", "15"]).status.success());
}

#[test]
fn decompose_fibonacci_return() {
    let out = run(&["decompose", "--gen", "fibonacci", "--theta", "reversal", "--method", "return"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["alphabet"].as_array().unwrap().len(), 2);
    assert_eq!(r["checks"]["v_defect"], 0);
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn decompose_theorem3_exchange() {
    let out = run(&[
        "decompose", "--gen", "theta_standard", "--seed", "", "--directive", "(ab)", "--theta", "pairs:a-b", "--method",
        "theorem3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    let s = &r["checks"]["structure"];
    assert!(s["m"].as_u64().unwrap() <= 2);
    assert_eq!(s["arnoux_rauzy"]["passes"], true);
}

#[test]
fn decompose_periodic_path_is_unary() {
    let out = run(&["decompose", "--gen", "periodic:ab", "--method", "path"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["periodic"], true);
    assert_eq!(r["alphabet"].as_array().unwrap().len(), 1);
}

#[test]
fn decompose_exit_codes() {
    let inconclusive = run(&["decompose", "--gen", "thue_morse", "--method", "return"]);
    assert_eq!(inconclusive.status.code(), Some(2));
    assert!(stderr(&inconclusive).starts_with("inconclusive:"));
    let wrong_gen = run(&["decompose", "--gen", "fibonacci", "--method", "theorem3"]);
    assert_eq!(wrong_gen.status.code(), Some(1));
    let bad_flag = run(&["decompose", "--gen", "fibonacci", "--method", "nonsense"]);
    assert_eq!(bad_flag.status.code(), Some(1));
    let bad_gen = run(&["decompose", "--gen", "nonsense"]);
    assert_eq!(bad_gen.status.code(), Some(1));
    assert!(stderr(&bad_gen).starts_with("error:"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn word_file_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let theta = write(dir.path(), "theta.json", r#"{"letters":["a","b"],"pairs":[["a","b"]]}"#);
    let word = write(dir.path(), "w.txt", "abba\nabxa\n");
    let out = run(&["analyze", "--word-file", &word, "--theta", &theta]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("w.txt:2:3:"), "{}", stderr(&out));
    let tokens = write(dir.path(), "t.txt", "a b\nb  zz a\n");
    let out = run(&["analyze", "--word-file", &tokens, "--tokens", "--theta", &theta]);
    assert!(stderr(&out).contains("t.txt:2:4:"), "{}", stderr(&out));
}

#[test]
fn non_involutive_theta_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let theta = write(dir.path(), "bad.json", r#"{"letters":["a","b"],"map":{"a":"b","b":"b"}}"#);
    let out = run(&["analyze", "--gen", "fibonacci", "--theta", &theta]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Θ² = Id"));
}

#[test]
fn generated_word_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tm.txt");
    assert!(run(&["generate", "--gen", "thue_morse", "--len", "3000", "--out", file.to_str().unwrap()]).status.success());
    let a = json(&run(&["analyze", "--gen", "thue_morse", "--len", "3000"]));
    let b = json(&run(&["analyze", "--word-file", file.to_str().unwrap()]));
    assert_eq!(a["defect"], b["defect"]);
    assert_eq!(a["complexity"]["rows"], b["complexity"]["rows"]);
    let c = json(&run(&["analyze", "--word-file", file.to_str().unwrap(), "--len", "100"]));
    assert_eq!(c["input"]["length"], 100);
}

#[test]
fn morphism_from_report_rebuilds_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("d.json");
    let out = run(&[
        "decompose", "--gen", "theta_standard", "--seed", "abc", "--directive", "(abc)", "--len", "5000", "--method",
        "return", "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let v = write(dir.path(), "v.txt", r["v_prefix"].as_str().unwrap());
    let image = run(&["apply-morphism", "--morphism", report.to_str().unwrap(), "--word-file", &v]);
    assert!(image.status.success(), "{}", stderr(&image));
    let image = String::from_utf8(image.stdout).unwrap();
    let word = String::from_utf8(run(&["generate", "--gen", "theta_standard", "--seed", "abc", "--directive", "(abc)", "--len", "5000"]).stdout).unwrap();
    let image = image.trim();
    assert!(!image.is_empty());
    assert!(word.trim().starts_with(image));
    assert_eq!(image.len(), r["covered"][1].as_u64().unwrap() as usize);
}

#[test]
fn generator_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "gen.json",
        r#"{"kind":"theta_standard_seed","seed":"","directive":{"pre":"","period":"ab"},
            "antimorphism":{"letters":["a","b"],"pairs":[["a","b"]]}}"#,
    );
    let a = run(&["generate", "--gen", &cfg, "--len", "12"]);
    let b = run(&["generate", "--gen", "theta_standard", "--directive", "(ab)", "--theta", "pairs:a-b", "--len", "12"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap(), "abbaababbaab\n");
}
