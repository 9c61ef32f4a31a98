use std::process::{Command, Output};

fn gfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfc")).args(args).output().expect("run gfc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_writes_json_report() {
    let o = gfc(&["verify", "--metric", "schwarzschild", "--mode", "n2vacuum", "--no-timing"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metric"], "schwarzschild");
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["recovered"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["wallTime"].is_null()));
}

#[test]
fn no_timing_output_is_byte_identical() {
    let args = ["verify", "--metric", "kasner", "--no-timing", "--trials", "5"];
    let (a, b) = (gfc(&args), gfc(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_and_summary() {
    let dir = std::env::temp_dir().join(format!("gfc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = gfc(&["verify", "--metric", "de_sitter", "--mode", "n2vacuum", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("vacuum.combined_equation") && text.ends_with("de_sitter: pass\n"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["recovered"], false);
    assert!(v["timing"]["totalMs"].is_number());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("gfc-codes-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let wrong = gfc::catalog::source("flrw_radiation").unwrap().replace("expect = nonVacuum", "expect = vacuum");
    let p = dir.join("wrong.gmet");
    std::fs::write(&p, wrong).unwrap();
    assert_eq!(code(&gfc(&["verify", "--metric", p.to_str().unwrap(), "--mode", "n2vacuum"])), 1);

    let hidden = "gmet 1\nname = h\nexpect = flat\n\n[chart]\ncoords = t, x, y, z\n1/2 < x < 2\n\n[metric]\nsignature = +---\ncoframe1 = d t\ncoframe2 = d x\ncoframe3 = x * (cos(2*x) - cos(x)^2 + sin(x)^2 + 1) * d y\ncoframe4 = d z\n";
    let p = dir.join("hidden.gmet");
    std::fs::write(&p, hidden).unwrap();
    let o = gfc(&["verify", "--metric", p.to_str().unwrap(), "--mode", "n1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unresolved in curvature.flat"));
    let o = gfc(&["verify", "--metric", p.to_str().unwrap(), "--mode", "n1", "--policy", "numeric", "--samples", "10"]);
    assert_eq!(code(&o), 0);

    let p = dir.join("bad.gmet");
    std::fs::write(&p, "gmet 1\nname = b\nexpect = flat\n[chart]\ncoords = t\n[metric]\nsignature = +\ncoframe1 = d s\n").unwrap();
    let o = gfc(&["verify", "--metric", p.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("8:14: unknown coordinate `s`"));
    assert_eq!(code(&gfc(&["verify", "--metric", "no_such_metric"])), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn axioms_subcommand() {
    let o = gfc(&["axioms", "--seed", "9", "--trials", "12"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trials"], 12);
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn show_subcommand() {
    let o = gfc(&["show", "--metric", "schwarzschild", "--what", "connection"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("omega[0][3] = ")));
    for what in ["curvature", "spinor", "gfcoords"] {
        let o = gfc(&["show", "--metric", "schwarzschild", "--what", what]);
        assert_eq!(code(&o), 0, "{what}");
        assert!(!o.stdout.is_empty(), "{what}");
    }
    let o = gfc(&["show", "--metric", "minkowski_spherical", "--what", "gfcoords"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("m mbar"));
}
