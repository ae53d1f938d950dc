use std::process::{Command, Output};

fn tcline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcline")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field_of(o: &Output, key: &str) -> String {
    let s = stdout(o);
    s.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in {s}"))
}

#[test]
fn verify_small_field() {
    let o = tcline(&["verify", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("11 with nonzero discriminant"), "{s}");
    assert!(s.contains("6 generic"), "{s}");
}

#[test]
fn classify_examples() {
    let o = tcline(&["--format", "structured", "form", "classify", "--p", "7", "--z", "0,0,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field_of(&o, "discriminant"), "0");
    assert_eq!(field_of(&o, "label"), "F0.3");
    assert_eq!(field_of(&o, "orbit-size"), "28");

    let o = tcline(&["--format", "structured", "line", "classify", "--p", "7", "--points", "1,0,0,0;0,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field_of(&o, "label"), "O2");
}

#[test]
fn plain_and_binomial_inputs_agree() {
    // X^4 + Y^4 - 6 X^2 Y^2 has z = (1, 0, -1, 0, 1)
    let a = tcline(&["--format", "structured", "form", "classify", "--p", "11", "--z", "1,0,-1,0,1"]);
    let b = tcline(&["--format", "structured", "form", "classify", "--p", "11", "--plain", "1,0,-6,0,1"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn representatives_round_trip() {
    let o = tcline(&["--format", "structured", "form", "rep", "--p", "13", "--label", "cusp"]);
    assert_eq!(o.status.code(), Some(0));
    let z = field_of(&o, "z");
    let c = tcline(&["--format", "structured", "form", "classify", "--p", "13", "--z", &z]);
    assert_eq!(field_of(&c, "label"), "cusp");

    let o = tcline(&["--format", "structured", "line", "rep", "--p", "13", "--label", "psi(-1)/sd"]);
    assert_eq!(o.status.code(), Some(0));
    let pts = format!("{};{}", field_of(&o, "row0"), field_of(&o, "row1"));
    let c = tcline(&["--format", "structured", "line", "classify", "--p", "13", "--points", &pts]);
    assert_eq!(field_of(&c, "label"), "psi(-1)/sd");
}

#[test]
fn exit_codes() {
    assert_eq!(tcline(&["verify", "--p", "3", "--k", "2"]).status.code(), Some(3));
    assert_eq!(tcline(&["verify", "--p", "2", "--k", "2"]).status.code(), Some(3));
    assert_eq!(tcline(&["form", "classify", "--p", "7"]).status.code(), Some(2));
    assert_eq!(tcline(&["frobnicate"]).status.code(), Some(2));
    let o = tcline(&["form", "rep", "--p", "7", "--label", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("code=invalid-label"));
    let o = tcline(&["line", "classify", "--p", "7", "--points", "1,0,0,0;2,0,0,0"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("code=dependent-points"));
}

#[test]
fn rep_check_grid() {
    let o = tcline(&["--format", "structured", "rep-check", "--m-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().all(|l| l.ends_with("consistent=true")));
    assert!(s.contains("m=5 q=25 cond1=false cond2=false cond3=false cond4=false cond5=false"));
}

#[test]
fn sweep_is_deterministic() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let args = |d: &std::path::Path, jobs: &'static str| {
        vec!["sweep".to_string(), "--q-list".into(), "5,7,9".into(), "--jobs".into(), jobs.into(), "--out".into(), d.display().to_string()]
    };
    let run = |a: Vec<String>| Command::new(env!("CARGO_BIN_EXE_tcline")).args(a).output().unwrap();
    let o1 = run(args(d1.path(), "1"));
    let o2 = run(args(d2.path(), "8"));
    // q = 9 is unsupported, so the sweep as a whole reports failure
    assert_eq!(o1.status.code(), Some(1));
    assert_eq!(o2.status.code(), Some(1));
    for q in [5, 7, 9] {
        let name = format!("report-q{q}.txt");
        let a = std::fs::read(d1.path().join(&name)).unwrap();
        let b = std::fs::read(d2.path().join(&name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let r9 = std::fs::read_to_string(d1.path().join("report-q9.txt")).unwrap();
    assert!(r9.contains("code=unsupported-characteristic"));

    let v = d1.path().join("verify.txt");
    let o = tcline(&["verify", "--p", "7", "--out", v.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(v).unwrap(), std::fs::read(d1.path().join("report-q7.txt")).unwrap());
}
