use std::path::PathBuf;
use std::process::{Command, Output};

const SMALL: &[&str] = &["--q", "4", "--levels", "2", "--ground", "xor:words:00,11", "--code", "rep"];

fn ulam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulam")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ulam-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(args: &[String]) -> Output {
    ulam(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn distance_of_identical_files_is_zero() {
    let dir = scratch("distance");
    let a = dir.join("a.txt");
    std::fs::write(&a, "3 1 0 2\n").unwrap();
    let o = ulam(&["distance", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\n");
    let b = dir.join("b.txt");
    std::fs::write(&b, "# comment\n0 1 2 3\n").unwrap();
    let o = ulam(&["distance", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn encode_decode_round_trip() {
    let dir = scratch("roundtrip");
    for msg in ["0", "3"] {
        let o = run(&with(&["encode"], &with(SMALL, &["--msg", msg]).iter().map(String::as_str).collect::<Vec<_>>()));
        assert!(o.status.success(), "{}", stderr(&o));
        let file = dir.join(format!("cw{msg}.txt"));
        std::fs::write(&file, stdout(&o)).unwrap();
        let mut args = with(&["decode"], SMALL);
        args.extend(["--perm".into(), file.to_str().unwrap().into()]);
        let o = run(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o), format!("{msg}\n"));
    }
}

#[test]
fn binary_example_raw_shufflers() {
    let o = ulam(&[
        "encode", "--q", "2", "--levels", "3", "--ground", "xor:all", "--shufflers", "1,0,0,1;1,1,1,0;0,0,0,1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "2 7 4 1 6 5 3 0\n");
}

#[test]
fn ternary_example_from_ground_file() {
    let dir = scratch("fig2");
    let g = dir.join("ground.txt");
    std::fs::write(&g, "3 4 2\n0 1 2\n2 1 0\n1 0 2\n1 2 0\n").unwrap();
    let ground = format!("file:{}", g.display());
    let o = ulam(&["encode", "--q", "3", "--levels", "2", "--ground", &ground, "--shufflers", "3,0,1;2,2,3", "--trace"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "# stage 0\n0 1 2 3 4 5 6 7 8\n# stage 1\n3 1 8 6 4 5 0 7 2\n# stage 2\n1 3 8 4 6 5 7 2 0\n"
    );
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        vec!["encode", "--bogus"],
        vec!["corrupt", "--perm", "x", "--t", "1"],
        vec!["encode", "--q", "4", "--levels", "2", "--ground", "xor:all"],
        vec!["build", "--q", "4", "--levels", "2", "--ground", "xor:all", "--code", "martian"],
    ] {
        let o = ulam(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with("error: "), "{err}");
        assert_eq!(err.lines().count(), 1, "{err}");
    }
    let o = ulam(&["encode", "--bogus"]);
    assert!(stderr(&o).contains("--bogus"));
}

#[test]
fn config_errors_exit_two() {
    // shuffler code alphabet 4 but p = 2
    let o = ulam(&["build", "--q", "4", "--levels", "2", "--ground", "xor:words:00,11", "--code", "gv:4,4,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: config: "));
}

#[test]
fn decode_failure_exits_one() {
    let dir = scratch("failure");
    let far = dir.join("far.txt");
    let v: Vec<String> = (0..16).map(|i| ((5 * i + 3) % 16).to_string()).collect();
    std::fs::write(&far, v.join(" ") + "\n").unwrap();
    let mut args = with(&["decode"], SMALL);
    args.extend(["--perm".into(), far.to_str().unwrap().into()]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: decode-failure: "), "{}", stderr(&o));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn message_out_of_range() {
    let o = run(&with(&["encode"], &with(SMALL, &["--msg", "4"]).iter().map(String::as_str).collect::<Vec<_>>()));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: message-out-of-range: "));
}

#[test]
fn corrupt_is_deterministic_and_traced() {
    let dir = scratch("corrupt");
    let p = dir.join("p.txt");
    std::fs::write(&p, (0..20).map(|i| i.to_string()).collect::<Vec<_>>().join(" ") + "\n").unwrap();
    let trace = dir.join("trace.txt");
    let args = ["corrupt", "--perm", p.to_str().unwrap(), "--t", "3", "--seed", "7", "--trace", trace.to_str().unwrap()];
    let a = ulam(&args);
    let b = ulam(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t = std::fs::read_to_string(&trace).unwrap();
    assert!(t.starts_with("# seed 7\n"));
    assert_eq!(t.lines().count(), 4);
    let q = dir.join("q.txt");
    std::fs::write(&q, stdout(&a)).unwrap();
    let d = ulam(&["distance", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert!(stdout(&d).trim().parse::<usize>().unwrap() <= 3);
    assert_eq!(ulam(&["corrupt", "--perm", p.to_str().unwrap(), "--t", "21", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    let cfg = dir.join("inst.conf");
    std::fs::write(&cfg, "# small instance\nq = 4\nlevels = 2\nground = xor:all\ncode = gv:3\n").unwrap();
    let o = ulam(&["build", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("distance_bound: 6\n"), "{text}");
    assert!(text.contains("messages: 256\n"), "{text}");
    let o = ulam(&["build", "--config", cfg.to_str().unwrap(), "--code", "gv:2"]);
    assert!(stdout(&o).contains("distance_bound: 4\n"));
    let o = ulam(&["build", "--config", cfg.to_str().unwrap(), "--json"]);
    let text = stdout(&o);
    assert!(text.contains("\"dist_lower\": 6"), "{text}");
}

#[test]
fn audit_and_sweep() {
    let mut args = with(&["audit"], SMALL);
    args.push("--exhaustive".into());
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("pass: true\n"));
    assert!(!stdout(&o).contains("elapsed"));
    assert_eq!(run(&args).stdout, o.stdout);

    let mut args = with(&["audit"], SMALL);
    args.extend(["--sample".into(), "5".into()]);
    assert_eq!(run(&args).status.code(), Some(2));
    args.extend(["--seed".into(), "1".into(), "--json".into()]);
    let o = run(&args);
    assert!(stdout(&o).contains("\"pass\": true"));

    let mut args = with(&["sweep"], SMALL);
    args.extend(["--t-list".into(), "0,1,2,8".into(), "--trials".into(), "40".into(), "--seed".into(), "3".into()]);
    let a = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(run(&args).stdout, a.stdout);
    let text = stdout(&a);
    assert!(text.contains("max_correctable: 2\n"));
    assert!(text.lines().any(|l| l.starts_with("0 40 40 0 0 40 0 1.0000")), "{text}");
}

#[test]
fn gen_ground_set_formats() {
    let o = ulam(&["gen-ground-set", "--q", "4", "--source", "xor:all"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4 4 2\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n");
    let o = ulam(&["gen-ground-set", "--q", "3", "--source", "bruteforce:1"]);
    assert_eq!(stdout(&o), "3 2 1\n0 1 2\n2 1 0\n");
    let o = ulam(&["gen-ground-set", "--q", "5", "--source", "bruteforce:2:4:500"]);
    assert_eq!(o.status.code(), Some(2));
    let a = ulam(&["gen-ground-set", "--q", "5", "--source", "bruteforce:2:4:500", "--seed", "1"]);
    let b = ulam(&["gen-ground-set", "--q", "5", "--source", "bruteforce:2:4:500", "--seed", "1"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}
