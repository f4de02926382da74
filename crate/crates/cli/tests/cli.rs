use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    format!("{}/../core/corpus/{name}.divide", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divide")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(name);
    (dir, path)
}

#[test]
fn torus_then_alexander() {
    let (_dir, path) = scratch("e6.divide");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["gen", "torus", "3", "4", "-o", p]).status.code(), Some(0));
    let o = run(&["invariants", p, "--alexander"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "t^6 - t^5 + t^3 - t + 1\n");
}

#[test]
fn monotone_pd_is_unknot() {
    let o = run(&["diagram", &corpus("monotone"), "--pd"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "PD[unknot]\n");
}

#[test]
fn jones_cap_gives_exit_3() {
    let (_dir, path) = scratch("big.divide");
    let p = path.to_str().unwrap();
    run(&["gen", "torus", "4", "5", "-o", p]);
    let o = run(&["invariants", p, "--jones"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceed the cap"));
    let o = run(&["invariants", p, "--conway", "--conway-cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    let (dir, path) = scratch("bad.divide");
    std::fs::write(&path, "divide v1\nbranch open: (0.5 0.2)\n").unwrap();
    assert_eq!(run(&["info", path.to_str().unwrap()]).status.code(), Some(2));

    let shared = dir.path().join("shared.divide");
    std::fs::write(&shared, "divide v1\nbranch open: (-0.6, -0.79) (0.0, 0.2) (0.6, -0.79)\nbranch open: (0.6, 0.79) (0.9, 0.3) (0.95, -0.25)\n").unwrap();
    let o = run(&["validate", shared.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("SHARED_X"));

    let outside = dir.path().join("outside.divide");
    std::fs::write(&outside, "divide v1\nbranch open: (0.9, 0.9) (0.1, 0.1) (0.2, -0.99)\n").unwrap();
    assert_eq!(run(&["validate", outside.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(run(&["invariants", &corpus("cross"), "--alexander"]).status.code(), Some(1));
    assert_eq!(run(&["info", "/nonexistent.divide"]).status.code(), Some(2));
    assert_eq!(run(&["--epsilon", "0", "info", &corpus("e6")]).status.code(), Some(2));
    assert_eq!(run(&["gen", "example", "nope"]).status.code(), Some(1));
}

#[test]
fn selftest_and_drift() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ok   trefoil jones: expected -t^4 + t^3 + t, got -t^4 + t^3 + t"));
    let o = run(&["selftest", "--invert-convention"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("calibration drift"));
}

#[test]
fn json_goldens() {
    for (args, file) in [
        (vec!["invariants", "e6", "--json"], "invariants_e6.json"),
        (vec!["diagram", "cross", "--json"], "diagram_cross.json"),
        (vec!["info", "c-arc", "--json"], "info_c_arc.json"),
        (vec!["diagram", "e6", "--gauss", "--pd"], "diagram_e6.txt"),
    ] {
        let path = corpus(args[1]);
        let mut argv = args.clone();
        argv[1] = &path;
        let o = run(&argv);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), golden(file), "{file}");
    }
    assert_eq!(stdout(&run(&["selftest", "--json"])), golden("selftest.json"));
}

#[test]
fn generation_is_seeded() {
    let a = stdout(&run(&["--seed", "7", "gen", "random", "3"]));
    let b = stdout(&run(&["--seed", "7", "gen", "random", "3"]));
    let c = stdout(&run(&["--seed", "8", "gen", "random", "3"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.matches("branch open").count(), 3);
    assert_eq!(stdout(&run(&["gen", "example", "c-arc"])), std::fs::read_to_string(corpus("c-arc")).unwrap());
}

#[test]
fn perturb_and_svg_outputs() {
    let (dir, path) = scratch("shared.divide");
    std::fs::write(&path, "divide v1\n# name: shared\nbranch open: (-0.6, -0.79) (0.0, 0.2) (0.6, -0.79)\nbranch open: (0.6, 0.79) (0.9, 0.3) (0.95, -0.25)\n").unwrap();
    let out = dir.path().join("generic.divide");
    let o = run(&["perturb", path.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["validate", out.to_str().unwrap()]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().contains("# name: shared"));

    let svg = dir.path().join("e6.svg");
    let dsvg = dir.path().join("e6-divide.svg");
    let o = run(&[
        "diagram",
        &corpus("e6"),
        "--svg",
        svg.to_str().unwrap(),
        "--divide-svg",
        dsvg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("crossings: 8\n"));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"strand\"").count(), 8);
    assert_eq!(std::fs::read_to_string(&dsvg).unwrap().matches("marker double-point").count(), 3);
}
