use std::process::{Command, Output};

use smoothsum_cli::columns;

fn smoothsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothsum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# ")).map(|l| format!("{l}\n")).collect()
}

#[test]
fn brute_alpha_zero_is_one() {
    let o = smoothsum(&["brute", "--alpha", "0,0", "--k", "2", "--N", "30", "--f", "gaussian:0,1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["command"], "brute");
    assert_eq!(v["meta"]["config_sha256"].as_str().unwrap().len(), 64);
    let row = &v["tables"][0]["rows"][0];
    assert!((row["re_value"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(row["im_value"].as_f64().unwrap(), 0.0);
}

#[test]
fn theorem2_table_shape() {
    let o = smoothsum(&["theorem2", "--alpha", "1,0", "--k", "2", "--N", "100,1000,10000", "--f", "gaussian:1,0.4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with("# ")).collect();
    assert_eq!(meta.len(), 4);
    assert!(meta[0].starts_with("# smoothsum "));
    assert!(meta[2].starts_with("# config_sha256: "));
    assert!(meta[3].starts_with("# timestamp: "));
    let b = body(&text);
    let mut lines = b.lines();
    assert_eq!(lines.next().unwrap(), "N,re_S,im_S,re_C_f,im_C_f,abs_E_measured,predicted_envelope");
    let errs: Vec<f64> = lines.map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn seventeen_significant_digits() {
    let o = smoothsum(&["exact", "--N", "10"]);
    let b = body(&stdout(&o));
    let re = b.lines().nth(1).unwrap().split(',').nth(1).unwrap().to_string();
    let mantissa = re.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{re}");
}

#[test]
fn identical_bodies_across_threads_and_runs() {
    let cases: &[&[&str]] = &[
        &["brute", "--alpha", "0.5,0.5", "--k", "3", "--N", "10,30"],
        &["exact", "--alpha", "-1,0", "--N", "10,30"],
        &["theorem2", "--N", "100,1000"],
        &["products-table", "--N", "30", "--tau", "-1,1,0.25"],
        &["lemma1", "--N", "1000,10000", "--tau", "-3,3,0.5"],
        &["dickman-table", "--table", "rho-hat", "--x-max", "30", "--step", "0.5"],
    ];
    for args in cases {
        let mut bodies = Vec::new();
        for threads in ["1", "1", "8", "8"] {
            let mut a = args.to_vec();
            a.extend(["--threads", threads]);
            let o = smoothsum(&a);
            assert!(o.status.success(), "{args:?}");
            bodies.push(body(&stdout(&o)));
        }
        assert!(bodies.iter().all(|b| b == &bodies[0]), "{args:?}");
    }
}

#[test]
fn verify_all_quick_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for threads in ["1", "8"] {
        let path = dir.path().join(format!("v{threads}.csv"));
        let o = smoothsum(&["verify-all", "--level", "quick", "--threads", threads, "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.lines().filter(|l| l.starts_with("PASS [")).count(), 10);
        bodies.push(body(&std::fs::read_to_string(path).unwrap()));
    }
    assert_eq!(bodies[0], bodies[1]);
    assert!(bodies[0].contains("## oracle_equivalence\n"));
}

#[test]
fn exit_codes() {
    let o = smoothsum(&["exact", "--N", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("InvalidParams"));
    assert_eq!(smoothsum(&["exact", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(smoothsum(&["nonsense"]).status.code(), Some(2));
    assert_eq!(smoothsum(&["theorem2", "--N", "100", "--eta", "0.5"]).status.code(), Some(2));
    assert_eq!(smoothsum(&["theorem2", "--N", "100", "--f", "constant"]).status.code(), Some(2));
    assert_eq!(smoothsum(&["exact", "--config", "/nonexistent/file"]).status.code(), Some(2));

    let o = smoothsum(&["brute", "--N", "30", "--count-cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error: CountCapExceeded:"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# sweep\nalpha = 0.5,0.5\nk = 3\n\nN = 10,30\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = smoothsum(&["exact", "--config", p, "--N", "30"]);
    let from_flags = smoothsum(&["exact", "--alpha", "0.5,0.5", "--k", "3", "--N", "30"]);
    assert!(from_file.status.success());
    // the hash covers the resolved configuration, so it matches too
    let strip_time = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("# timestamp")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip_time(&from_file), strip_time(&from_flags));
}

#[test]
fn every_column_is_documented() {
    let commands: &[(&str, &[&str], columns::Columns)] = &[
        ("dickman-table", &[], columns::DICKMAN_RHO),
        ("dickman-table", &["--table", "rho-hat", "--x-max", "1"], columns::DICKMAN_RHO_HAT),
        ("zeta-table", &["--tau", "1,2,1"], columns::ZETA),
        ("products-table", &["--N", "10", "--tau", "0,1,1"], columns::PRODUCTS),
        ("brute", &["--N", "10"], columns::BRUTE),
        ("exact", &["--N", "10"], columns::EXACT),
        ("cfactor", &["--N", "20"], columns::CFACTOR),
        ("theorem2", &["--N", "100"], columns::THEOREM2),
        ("tenenbaum", &["--N", "1000", "--tau", "-1,1,1"], columns::TENENBAUM),
        ("lemma1", &["--N", "1000", "--tau", "-1,1,1"], columns::LEMMA1),
        ("errordecomp", &["--N", "20"], columns::ERRORDECOMP),
    ];
    for (cmd, extra, cols) in commands {
        let help = stdout(&smoothsum(&[cmd, "--help"]));
        let mut args = vec![*cmd];
        args.extend_from_slice(extra);
        let o = smoothsum(&args);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let b = body(&stdout(&o));
        let header: Vec<&str> = b.lines().next().unwrap().split(',').collect();
        assert_eq!(header, columns::names(cols), "{cmd}");
        for name in header {
            assert!(
                help.lines().any(|l| l.trim_start().starts_with(&format!("{name} "))),
                "{cmd}: column {name} missing from --help"
            );
        }
    }
}

#[test]
fn verify_all_help_lists_every_table_column() {
    let help = stdout(&smoothsum(&["verify-all", "--help"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    // table headers do not depend on the level; quick keeps this short
    let o = smoothsum(&["verify-all", "--level", "quick", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with("# "));
    while let Some(l) = lines.next() {
        if let Some(name) = l.strip_prefix("## ") {
            let header = lines.next().unwrap();
            let doc = help.split(&format!("{name}:")).nth(1).expect(name);
            let doc = doc.split(":\n").next().unwrap();
            for col in header.split(',') {
                assert!(doc.split(|c: char| c == ',' || c.is_whitespace()).any(|w| w == col), "{name}.{col}");
            }
        }
    }
}
