//! End-to-end checks of the binary: exit codes, determinism, fixture bytes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frecheck"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("FRECHECK_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("frecheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn profile_file(name: &str, counts: &[u64]) -> PathBuf {
    let mut s = String::new();
    for c in counts {
        s.push_str(&format!("{c}\n"));
    }
    tmp(name, &s)
}

#[test]
fn gen_zipf_profile_bytes() {
    let o = run(&["gen", "--kind", "zipf", "--n", "4", "--total", "100", "--alpha", "1.0",
        "--emit", "profile"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "48\n24\n16\n12\n");
}

#[test]
fn gen_is_deterministic_and_seed_sensitive() {
    let args = ["gen", "--kind", "zipf", "--n", "50", "--total", "500", "--ordering", "shuffled",
        "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    let last = other.len() - 1;
    other[last] = "8";
    assert_ne!(a.stdout, run(&other).stdout);
}

#[test]
fn gen_doublejump_worked_stream() {
    // x = 01100110, y = 4: sixteen 1s, eight 2s, four 3s and 4s, set bits
    // twice, clear bits once, then the queried position once more
    let o = run(&["gen", "--fixture", "doublejump", "--x", "01100110", "--y", "4"]);
    assert!(o.status.success());
    let mut want = String::new();
    let mut push_n = |id: u64, times: u64| {
        for _ in 0..times {
            want.push_str(&format!("{id}\n"));
        }
    };
    push_n(1, 16);
    push_n(2, 8);
    push_n(3, 4);
    push_n(4, 4);
    for id in [6u64, 7, 10, 11] {
        push_n(id, 2);
    }
    for id in [5u64, 8, 9, 12] {
        push_n(id, 1);
    }
    push_n(8, 1);
    assert_eq!(stdout(&o), want);
}

#[test]
fn oracle_frechet_close_and_far_exit_codes() {
    let f = profile_file("of.txt", &[100, 100, 50, 50]);
    let g = profile_file("og.txt", &[100, 50, 50, 50]);
    // close at generous slack: coupling emitted, exit 0
    let o = run(&["oracle", "--eps1", "1", "--eps2", "1", "frechet",
        f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("verdict=CLOSE\n"));
    assert!(out.contains("coupling=1 1"));
    // far at tight slack: exit 1
    let o = run(&["oracle", "--eps1", "1/100", "--eps2", "1/100", "frechet",
        f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("verdict=FAR\n"));
}

#[test]
fn oracle_predicates() {
    let f = profile_file("op.txt", &[8, 8, 8, 8, 8, 8, 8, 8]);
    let o = run(&["oracle", "--eps1", "0.5", "--eps2", "0.5", "halfstable", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "halfstable=true\n");
    let o = run(&["oracle", "--eps1", "0.5", "--eps2", "0.5", "partition", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("interval=1 "));
    let g = profile_file("oq.txt", &[128, 64, 32, 16, 8, 4, 2, 1]);
    let o = run(&["oracle", "--eps1", "0.5", "--eps2", "0.5", "partition", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "partition=ABSENT\n");
}

#[test]
fn bad_input_exits_2() {
    let junk = tmp("junk.txt", "3\n7\n5\n"); // increasing => not a profile
    let s = tmp("s0.txt", "1\n2\n");
    let o = run(&["test-ref", "--stream", s.to_str().unwrap(), "--reference",
        junk.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn test_ref_yes_and_deterministic() {
    // exact stream of its own reference profile: YES, byte-identical reruns
    let gen = run(&["gen", "--kind", "zipf", "--n", "200", "--total", "20000", "--ordering",
        "shuffled", "--seed", "3"]);
    let s = tmp("s1.txt", &stdout(&gen));
    let p = run(&["gen", "--kind", "zipf", "--n", "200", "--total", "20000", "--emit", "profile"]);
    let f = tmp("f1.txt", &stdout(&p));
    let args = ["test-ref", "--stream", s.to_str().unwrap(), "--reference", f.to_str().unwrap(),
        "--eps1", "0.3", "--eps2", "0.2", "--delta", "0.2", "--seed", "7", "--k-mult", "8"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("answer=YES\nfailing_level=none\n"));
}

#[test]
fn env_seed_is_default_and_flag_wins() {
    let args = ["gen", "--kind", "uniform", "--n", "40", "--total", "400", "--ordering",
        "shuffled"];
    let from_env = bin().args(args).env("FRECHECK_SEED", "11").output().unwrap();
    let from_flag = run(&["gen", "--kind", "uniform", "--n", "40", "--total", "400", "--ordering",
        "shuffled", "--seed", "11"]);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let flag_wins = bin()
        .args(["gen", "--kind", "uniform", "--n", "40", "--total", "400", "--ordering",
            "shuffled", "--seed", "12"])
        .env("FRECHECK_SEED", "11")
        .output()
        .unwrap();
    assert_ne!(flag_wins.stdout, from_flag.stdout);
}

#[test]
fn experiment_csv_is_deterministic_with_exact_aggregate() {
    let p = run(&["gen", "--kind", "zipf", "--n", "100", "--total", "10000", "--emit", "profile"]);
    let f = tmp("f2.txt", &stdout(&p));
    let args = ["experiment", "--reference", f.to_str().unwrap(), "--trials", "12", "--eps1",
        "0.3", "--eps2", "0.2", "--delta", "0.2", "--seed", "5", "--k-mult", "8"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "trial,seed,answer,failing_level");
    assert_eq!(lines.len(), 14); // header + 12 trials + aggregate
    let yes = lines[1..13].iter().filter(|l| l.contains(",YES,")).count();
    assert_eq!(*lines.last().unwrap(), format!("aggregate,,{yes}/12,"));
}

#[test]
fn two_stream_reshuffle_is_yes() {
    let mk = |seed: &str| {
        let o = run(&["gen", "--kind", "zipf", "--n", "300", "--total", "30000", "--ordering",
            "shuffled", "--seed", seed]);
        tmp(&format!("ts{seed}.txt"), &stdout(&o))
    };
    let (s1, s2) = (mk("21"), mk("22"));
    let o = run(&["test-two", "--stream", s1.to_str().unwrap(), "--stream2",
        s2.to_str().unwrap(), "--eps1", "0.3", "--eps2", "0.2", "--delta", "0.2", "--seed", "9",
        "--k-mult", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn explain_prints_schedule() {
    let p = run(&["gen", "--kind", "zipf", "--n", "100", "--total", "10000", "--emit", "profile"]);
    let f = tmp("f3.txt", &stdout(&p));
    let gen = run(&["gen", "--kind", "zipf", "--n", "100", "--total", "10000"]);
    let s = tmp("s3.txt", &stdout(&gen));
    let o = run(&["test-ref", "--stream", s.to_str().unwrap(), "--reference", f.to_str().unwrap(),
        "--explain", "--k-mult", "8"]);
    let out = stdout(&o);
    // schedule dump: one "i z a r K seed" line per level, then the verdict
    assert!(out.starts_with("0 1 "), "{out}");
    assert_eq!(out.lines().next().unwrap().split_whitespace().count(), 6);
    assert!(out.contains("answer="));
}
