use std::path::Path;

use rtpack::cli::dispatch;
use rtpack::io::parse_taskset;
use rtpack::Partition;

fn run(args: &[&str]) -> rtpack::cli::Output {
    let mut argv = vec!["rtpack"];
    argv.extend_from_slice(args);
    dispatch(argv)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bf_adversary_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bf4.json");
    let out = run(&[
        "generate",
        "--family",
        "bf-adversary",
        "--k",
        "4",
        "-o",
        p(&file),
    ]);
    assert_eq!(out.code, 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stderr.is_empty());
    let out = run(&["partition", p(&file), "--algo", "dm", "--strategy", "bf"]);
    assert_eq!(out.code, 0);
    let part: Partition = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(part.m, 4);
    assert_eq!(
        part.bins,
        vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]
    );
}

#[test]
fn check_speedup_gap_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("gap.json");
    let out = run(&[
        "generate",
        "--family",
        "speedup-gap",
        "--n",
        "3",
        "--eps",
        "1/2",
        "-o",
        p(&file),
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(run(&["check", p(&file), "--speed", "3/2"]).code, 0);
    let slow = run(&["check", p(&file)]);
    assert_eq!(slow.code, 1);
    let text = String::from_utf8(slow.stdout).unwrap();
    assert!(text.contains("\"witness\": \"2\""), "{text}");
}

#[test]
fn oracle_cap_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("big.json");
    let tasks = vec![r#"{"c":"1","d":"4","t":"4"}"#; 13].join(",");
    std::fs::write(&file, format!(r#"{{"tasks":[{tasks}]}}"#)).unwrap();
    let out = run(&["partition", p(&file), "--algo", "oracle"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap 12"), "{err}");
    let out = run(&["partition", p(&file), "--algo", "oracle", "--n-cap", "13"]);
    assert_eq!(out.code, 0);
    let part: Partition = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(part.m, 4);
}

#[test]
fn invalid_input_reports_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"tasks":[{"c":"3","d":"2","t":"4"}]}"#).unwrap();
    let out = run(&["check", p(&file)]);
    assert_eq!(out.code, 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("task 0"));
    assert_eq!(run(&["check", p(&dir.path().join("missing.json"))]).code, 2);
    assert_eq!(run(&["partition", p(&file), "--algo", "nope"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
}

#[test]
fn failed_generate_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("never.json");
    let out = run(&[
        "generate",
        "--family",
        "bf-adversary",
        "--k",
        "3",
        "-o",
        p(&file),
    ]);
    assert_eq!(out.code, 2);
    assert!(!file.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn random_generation_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |name: &str, seed: &str| {
        let file = dir.path().join(name);
        let out = run(&[
            "generate",
            "--family",
            "random",
            "--n",
            "6",
            "--class",
            "constrained",
            "--utilization",
            "2",
            "--seed",
            seed,
            "-o",
            p(&file),
        ]);
        assert_eq!(out.code, 0, "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(&file).unwrap()
    };
    let a = gen("a.json", "5");
    assert_eq!(a, gen("b.json", "5"));
    assert_ne!(a, gen("c.json", "6"));
    assert_eq!(parse_taskset(&a).unwrap().len(), 6);
}

#[test]
fn dvp_family_writes_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dvp.json");
    let out = run(&[
        "generate",
        "--family",
        "dvp",
        "--n",
        "5",
        "--seed",
        "2",
        "-o",
        p(&file),
    ]);
    assert_eq!(out.code, 0);
    let ts = parse_taskset(&std::fs::read(&file).unwrap()).unwrap();
    assert_eq!(ts.len(), 5);
}

#[test]
fn simulate_reports_misses() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    std::fs::write(
        &file,
        r#"{"tasks":[{"c":"1","d":"1","t":"2"},{"c":"1","d":"1","t":"2"}]}"#,
    )
    .unwrap();
    let out = run(&["simulate", p(&file), "--horizon", "4"]);
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["deadline_misses"][0]["deadline"], "1");
    assert_eq!(v["schedulable"], false);
    let out = run(&["simulate", p(&file), "--horizon", "4", "--speed", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(run(&["simulate", p(&file), "--horizon", "0"]).code, 2);
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(
        &config,
        r#"{"instances":[{"family":"wf-adversary","k":[4]},{"family":"speedup-gap","n":[3],"eps":["1/2"]}],
            "algorithms":[{"algorithm":"dm","strategy":"wf"},{"algorithm":"dagger","strategy":"bf"}]}"#,
    )
    .unwrap();
    let csv = dir.path().join("r.csv");
    let out = run(&["bench", "--config", p(&config), "-o", p(&csv)]);
    assert_eq!(out.code, 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,family,N,class,lambda,gamma,U,algorithm,strategy,M,m_star,ratio,bound_2lambda,runtime_ms");
    assert_eq!(lines.len(), 5);
    assert!(
        lines[1].starts_with("wf-adversary-k4,wf-adversary,8,"),
        "{}",
        lines[1]
    );
    assert!(lines[1].contains(",dm,wf,4,2,2,"), "{}", lines[1]);

    let json = dir.path().join("r.json");
    assert_eq!(
        run(&["bench", "--config", p(&config), "-o", p(&json), "--timing"]).code,
        0
    );
    let report = rtpack::bench::parse_report_json(&std::fs::read(&json).unwrap()).unwrap();
    assert!(report.rows.iter().all(|r| r.runtime_ms.is_some()));

    assert_eq!(
        run(&[
            "bench",
            "--config",
            p(&config),
            "-o",
            p(&dir.path().join("r.txt"))
        ])
        .code,
        2
    );
}

#[test]
fn ncap_environment_override() {
    // only this test touches the variable
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("small.json");
    std::fs::write(&file, r#"{"tasks":[{"c":"1","d":"4","t":"4"},{"c":"1","d":"4","t":"4"},{"c":"1","d":"4","t":"4"}]}"#).unwrap();
    std::env::set_var("RTP_NCAP", "2");
    let capped = run(&["partition", p(&file), "--algo", "oracle"]);
    std::env::remove_var("RTP_NCAP");
    assert_eq!(capped.code, 2);
    assert_eq!(run(&["partition", p(&file), "--algo", "oracle"]).code, 0);
}
