use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const THREE_PATHS: &str = r#"{"n": 7, "edges": [
  {"v": [0, 1], "w": "3/10"},
  {"v": [2, 3], "w": "3/10"},
  {"v": [4, 5, 6], "w": "0.4"}
]}"#;

fn confsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confsub"))
        .args(args)
        .env_remove("CONFSUB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn chain_is_deterministic_and_reloadable() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "inst.json", THREE_PATHS);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = confsub(&["chain", &inst, "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let chain = confsub_core::io::load_chain(&a).unwrap();
    assert!(chain.len() <= 4);

    let o = confsub(&[
        "compress",
        &inst,
        "--chain",
        a.to_str().unwrap(),
        "--tau",
        "0.6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("size: 4\n"));
}

#[test]
fn empty_instance_has_trivial_chain() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "empty.json", r#"{"n": 3, "edges": []}"#);
    let o = confsub(&["chain", &inst]);
    assert_eq!(o.status.code(), Some(0));
    let file: confsub_core::io::ChainFile =
        confsub_core::io::from_json(&stdout(&o), "stdout").unwrap();
    assert_eq!(file.sets, vec![Vec::<usize>::new()]);
}

#[test]
fn compress_extremes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "inst.json", THREE_PATHS);
    let o = confsub(&["compress", &inst, "--tau", "0"]);
    let text = stdout(&o);
    assert!(text.contains("set: []\n"), "{text}");
    assert!(text.contains("residual: 1/1\n"), "{text}");
    let o = confsub(&["compress", &inst, "--tau", "1"]);
    assert!(stdout(&o).contains("size: 7\n"));
    assert!(stdout(&o).contains("certificate: ok\n"));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"n\": 2,\n \"edges\": [{\"v\": [5], \"w\": \"1\"}]}",
    );
    let o = confsub(&["chain", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edges[0].v"));

    let broken = write(dir.path(), "broken.json", "{\"n\": 2,\n \"edges\": [");
    let o = confsub(&["chain", &broken]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    assert_eq!(
        confsub(&["compress", &bad, "--tau", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(confsub(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        confsub(&["chain", "/nonexistent/file.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn calibrate_reports_overflow() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = write(
        dir.path(),
        "pairs.json",
        r#"{"contexts": [{"n": 4, "candidates": [[0, 1], [0, 1], [2, 3]]}],
            "d1": [{"context": 0, "prediction": [0, 1], "truth": [0, 1]}],
            "d2": [{"context": 0, "prediction": [0, 1], "truth": [0, 1]}]}"#,
    );
    let out = dir.path().join("state.json");
    let o = confsub(&[
        "calibrate",
        &pairs,
        "--phi",
        "0.99",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tau* set to 1"));
    let state: confsub_core::CalibrationState = confsub_core::io::read_json(&out).unwrap();
    assert_eq!(state.tau_star, confsub_core::rational::int(1));
    assert!(state.stage2_overflow);

    let again = dir.path().join("again.json");
    confsub(&[
        "calibrate",
        &pairs,
        "--phi",
        "0.99",
        "-o",
        again.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn fixed_with_identical_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = write(
        dir.path(),
        "samples.json",
        r#"{"n": 6, "samples": [[1, 4], [1, 4], [1, 4], [1, 4]]}"#,
    );
    let o = confsub(&["fixed", &samples, "--phi", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("set: [1, 4]\n"), "{}", stdout(&o));
    let o = confsub(&["fixed", &samples, "--phi", "0"]);
    assert!(stdout(&o).starts_with("set: []\n"));
}

#[test]
fn adversarial_experiment() {
    let o = confsub(&["experiment", "adversarial"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("method,phi,size,coverage,seed\n"));
    assert!(text.contains("chain,0.8,3,0.8,0\n"), "{text}");
    let greedy: usize = text
        .lines()
        .find(|l| l.starts_with("reverse_greedy"))
        .and_then(|l| l.split(',').nth(2))
        .unwrap()
        .parse()
        .unwrap();
    assert!(greedy >= 30);
}

#[test]
fn experiments_replay_byte_identically() {
    let args = ["experiment", "trip", "--seeds", "2", "--phi-grid", "1/4"];
    let a = confsub(&args);
    let b = confsub(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("method,phi,size,coverage,seed,ratio\n"));
    // 3 methods x 5 levels x 2 seeds
    assert_eq!(text.lines().count(), 31);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_confsub"));
        c.args([
            "experiment",
            "grid",
            "--seeds",
            "1",
            "--phi-grid",
            "1/2",
            "--methods",
            "chain",
        ]);
        match seed {
            Some(s) => c.env("CONFSUB_SEED", s),
            None => c.env_remove("CONFSUB_SEED"),
        };
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    let seven = run(Some("7"));
    assert!(seven.lines().skip(1).all(|l| l.ends_with(",7")), "{seven}");
    assert!(run(None).lines().skip(1).all(|l| l.ends_with(",0")));
}
